#pragma once

#include <cstdint>
#include <vector>

namespace arakelov {

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::uint64_t n);

// Primes q with lo <= q <= hi, ascending.
std::vector<std::int64_t> primes_between(std::int64_t lo, std::int64_t hi);

// Least non-negative residue.
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Inverse of a modulo m; requires gcd(a, m) = 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

}  // namespace arakelov
