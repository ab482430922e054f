#include "arakelov/fiber.hpp"

#include "arakelov/arith.hpp"
#include "arakelov/error.hpp"

#include <algorithm>

namespace arakelov::fiber {

SupersingularData supersingular_data(std::int64_t p) {
  if (p < 5 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(Errc::NonPrime, "supersingular data needs a prime p >= 5, got " + std::to_string(p));
  }
  SupersingularData d;
  d.width_two = (p % 4 == 3) ? 1 : 0;
  d.width_three = (p % 3 == 2) ? 1 : 0;
  const Rational s = make_rational(p - 1, 12) + make_rational(d.width_two, 2) +
                     make_rational(2 * d.width_three, 3);
  if (s.get_den() != 1) {
    throw Error(Errc::NonIntegralMass, "supersingular count " + to_string(s) + " is not an integer");
  }
  d.s = s.get_num().get_si();
  d.genus = d.s - 1;
  return d;
}

std::int64_t genus_x0(std::int64_t p) { return supersingular_data(p).genus; }

std::string ComponentId::label() const {
  switch (kind_) {
    case Kind::Infinity: return "C_inf";
    case Kind::Zero: return "C_0";
    case Kind::Interior: break;
  }
  return "C_{" + std::to_string(n_) + "," + std::to_string(m_) + "}";
}

SpecialFiber build_special_fiber(const FiberParams& params) {
  if (params.p < 2 || !is_prime(static_cast<std::uint64_t>(params.p))) {
    throw Error(Errc::NonPrime, std::to_string(params.p) + " is not prime");
  }
  if (params.p <= 17) {
    throw Error(Errc::PTooSmall, "p must exceed 17, got " + std::to_string(params.p));
  }
  if (params.e < 1 || params.f < 1) {
    throw Error(Errc::InvalidArgument, "ramification index and residual degree must be >= 1");
  }
  const SupersingularData ss = supersingular_data(params.p);

  auto data = std::make_shared<SpecialFiber::Data>();
  data->params = params;
  data->genus = ss.genus;
  const std::int64_t generic = ss.s - ss.width_two - ss.width_three;
  int n = 1;
  auto push = [&](int width) {
    data->branches.push_back(Branch{n++, width, width * params.e - 1});
  };
  for (std::int64_t i = 0; i < generic; ++i) push(1);
  for (int i = 0; i < ss.width_two; ++i) push(2);
  for (int i = 0; i < ss.width_three; ++i) push(3);

  std::size_t next = 1;
  for (const Branch& b : data->branches) {
    data->offsets.push_back(next);
    next += static_cast<std::size_t>(b.interior_length);
  }
  data->basis_size = next + 1;

  SpecialFiber fiber(std::move(data));
  if (fiber.eichler_mass() != make_rational(params.p - 1, 12)) {
    throw Error(Errc::NonIntegralMass, "Eichler mass mismatch for p = " + std::to_string(params.p));
  }
  if (fiber.s() != fiber.genus() + 1) {
    throw Error(Errc::InternalInvariant, "branch count differs from g + 1");
  }
  const Rational g(to_integer(fiber.genus()));
  if (g < make_rational(params.p - 13, 12) || g > make_rational(params.p + 1, 12)) {
    throw Error(Errc::InternalInvariant, "genus outside (p-13)/12 <= g <= (p+1)/12");
  }
  return fiber;
}

const Branch& SpecialFiber::branch(int n) const {
  if (n < 1 || n > s()) {
    throw Error(Errc::ComponentOutOfRange, "branch " + std::to_string(n) + " out of range");
  }
  return data_->branches[static_cast<std::size_t>(n - 1)];
}

ComponentId SpecialFiber::resolve(int n, int m) const {
  const Branch& b = branch(n);
  if (m == 0) return ComponentId::infinity();
  if (m == b.width * e()) return ComponentId::zero();
  if (m < 0 || m > b.width * e()) {
    throw Error(Errc::ComponentOutOfRange,
                "position " + std::to_string(m) + " outside branch " + std::to_string(n));
  }
  return ComponentId::interior(n, m);
}

std::size_t SpecialFiber::index_of(const ComponentId& c) const {
  switch (c.kind()) {
    case ComponentId::Kind::Infinity: return 0;
    case ComponentId::Kind::Zero: return basis_size() - 1;
    case ComponentId::Kind::Interior: break;
  }
  const ComponentId r = resolve(c.branch(), c.position());
  if (r.kind() != ComponentId::Kind::Interior) return index_of(r);
  return data_->offsets[static_cast<std::size_t>(c.branch() - 1)] +
         static_cast<std::size_t>(c.position() - 1);
}

ComponentId SpecialFiber::component_at(std::size_t index) const {
  if (index == 0) return ComponentId::infinity();
  if (index + 1 == basis_size()) return ComponentId::zero();
  if (index >= basis_size()) throw Error(Errc::ComponentOutOfRange, "basis index out of range");
  auto it = std::upper_bound(data_->offsets.begin(), data_->offsets.end(), index);
  // Branches with no interior share their offset with the next branch, so
  // walk back to the last branch actually containing the index.
  std::size_t b = static_cast<std::size_t>(it - data_->offsets.begin()) - 1;
  while (data_->branches[b].interior_length == 0 ||
         index >= data_->offsets[b] + static_cast<std::size_t>(data_->branches[b].interior_length)) {
    --b;
  }
  return ComponentId::interior(static_cast<int>(b + 1), static_cast<int>(index - data_->offsets[b] + 1));
}

Rational SpecialFiber::eichler_mass() const {
  Rational mass = 0;
  for (const Branch& b : branches()) mass += make_rational(1, b.width);
  return mass;
}

IntersectionMatrix::IntersectionMatrix(std::size_t n, std::vector<std::int64_t> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) throw Error(Errc::InvalidArgument, "intersection matrix shape");
}

linalg::QVector IntersectionMatrix::apply(const linalg::QVector& v) const {
  if (v.size() != n_) throw Error(Errc::InvalidArgument, "vector length mismatch");
  linalg::QVector out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const std::int64_t a = at(i, j);
      if (a != 0 && v[j] != 0) out[i] += Rational(to_integer(a)) * v[j];
    }
  }
  return out;
}

std::vector<std::vector<Integer>> IntersectionMatrix::to_integer_rows() const {
  std::vector<std::vector<Integer>> rows(n_, std::vector<Integer>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) rows[i][j] = to_integer(at(i, j));
  return rows;
}

IntersectionMatrix intersection_matrix(const SpecialFiber& fiber) {
  const std::size_t n = fiber.basis_size();
  std::vector<std::int64_t> m(n * n, 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return m[i * n + j]; };
  const std::size_t inf = 0;
  const std::size_t zero = n - 1;
  at(inf, inf) = -fiber.s();
  at(zero, zero) = -fiber.s();
  for (const Branch& b : fiber.branches()) {
    if (b.interior_length == 0) {
      // e = 1 generic branch: C_inf meets C_0 directly.
      at(inf, zero) += 1;
      at(zero, inf) += 1;
      continue;
    }
    const std::size_t first = fiber.index_of(ComponentId::interior(b.index, 1));
    const std::size_t last = first + static_cast<std::size_t>(b.interior_length) - 1;
    for (std::size_t i = first; i <= last; ++i) {
      at(i, i) = -2;
      if (i > first) at(i, i - 1) = at(i - 1, i) = 1;
    }
    at(inf, first) = at(first, inf) = 1;
    at(zero, last) = at(last, zero) = 1;
  }
  return IntersectionMatrix(n, std::move(m));
}

std::vector<std::vector<Integer>> chain_block(int order) {
  std::vector<std::vector<Integer>> b(static_cast<std::size_t>(order),
                                      std::vector<Integer>(static_cast<std::size_t>(order)));
  for (int i = 0; i < order; ++i) {
    b[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = -2;
    if (i > 0) {
      b[static_cast<std::size_t>(i)][static_cast<std::size_t>(i - 1)] = 1;
      b[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(i)] = 1;
    }
  }
  return b;
}

VerticalDivisor::VerticalDivisor(SpecialFiber fiber, linalg::QVector coeffs, Normalization norm)
    : fiber_(std::move(fiber)), coeffs_(std::move(coeffs)), norm_(norm) {
  if (coeffs_.size() != fiber_.basis_size()) {
    throw Error(Errc::InvalidArgument, "coefficient vector does not match the component basis");
  }
  if (norm_ == Normalization::ZeroAtInfinity && coeffs_.front() != 0) {
    throw Error(Errc::InvalidArgument, "divisor pinned at C_inf has nonzero C_inf coefficient");
  }
}

const Rational& VerticalDivisor::coefficient(const ComponentId& c) const {
  return coeffs_[fiber_.index_of(c)];
}

namespace {

void require_same_fiber(const VerticalDivisor& a, const VerticalDivisor& b) {
  const FiberParams& x = a.fiber().params();
  const FiberParams& y = b.fiber().params();
  if (x.p != y.p || x.e != y.e || a.coefficients().size() != b.coefficients().size()) {
    throw Error(Errc::InvalidArgument, "divisors live on different fibers");
  }
}

Normalization combined(const VerticalDivisor& a, const VerticalDivisor& b) {
  return (a.normalization() == Normalization::ZeroAtInfinity &&
          b.normalization() == Normalization::ZeroAtInfinity)
             ? Normalization::ZeroAtInfinity
             : Normalization::Unpinned;
}

}  // namespace

VerticalDivisor VerticalDivisor::operator+(const VerticalDivisor& rhs) const {
  require_same_fiber(*this, rhs);
  linalg::QVector c = coeffs_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += rhs.coeffs_[i];
  return VerticalDivisor(fiber_, std::move(c), combined(*this, rhs));
}

VerticalDivisor VerticalDivisor::operator-(const VerticalDivisor& rhs) const {
  return *this + rhs.scaled(-1);
}

VerticalDivisor VerticalDivisor::scaled(const Rational& c) const {
  linalg::QVector out = coeffs_;
  for (auto& x : out) x *= c;
  return VerticalDivisor(fiber_, std::move(out), norm_);
}

bool VerticalDivisor::operator==(const VerticalDivisor& rhs) const {
  return fiber_.p() == rhs.fiber_.p() && fiber_.e() == rhs.fiber_.e() && coeffs_ == rhs.coeffs_;
}

VerticalDivisor full_fiber(const SpecialFiber& fiber) {
  return VerticalDivisor(fiber, linalg::QVector(fiber.basis_size(), Rational(1)), Normalization::Unpinned);
}

linalg::QVector intersection_target(const SpecialFiber& fiber, const ComponentId& target) {
  linalg::QVector rhs(fiber.basis_size());
  rhs[fiber.index_of(target)] += 1;
  rhs[0] -= 1;
  return rhs;
}

VerticalDivisor solve_vertical_divisor(const SpecialFiber& fiber, const ComponentId& target) {
  const std::size_t n = fiber.basis_size();
  const linalg::QVector rhs = intersection_target(fiber, target);
  const IntersectionMatrix m = intersection_matrix(fiber);
  const int unknowns = static_cast<int>(n);

  linalg::FractionFreeReducer reducer(unknowns, unknowns + 1);
  for (std::size_t i = 0; i < n; ++i) {
    linalg::SparseRow row;
    for (std::size_t j = 0; j < n; ++j) {
      if (m.at(i, j) != 0) row.push_back({static_cast<int>(j), to_integer(m.at(i, j))});
    }
    if (rhs[i] != 0) row.push_back({unknowns, rhs[i].get_num()});
    reducer.add_row(std::move(row));
  }
  reducer.add_row({{0, Integer(1)}});  // coefficient at C_inf is 0
  reducer.reduce();
  if (!reducer.consistent() || reducer.rank() != unknowns) {
    throw Error(Errc::InternalInvariant, "vertical divisor system is not uniquely solvable");
  }
  return VerticalDivisor(fiber, reducer.unique_solution(unknowns));
}

VerticalDivisor closed_form_phi(const SpecialFiber& fiber, const ComponentId& raw_target) {
  const std::size_t n = fiber.basis_size();
  const ComponentId target = fiber.component_at(fiber.index_of(raw_target));
  const Integer p_minus_1 = to_integer(fiber.p() - 1);
  const int e = fiber.e();
  linalg::QVector c(n);

  if (target.kind() == ComponentId::Kind::Infinity) return VerticalDivisor(fiber, std::move(c));

  if (target.kind() == ComponentId::Kind::Zero) {
    for (const Branch& b : fiber.branches()) {
      for (int m = 1; m < b.width * e; ++m) {
        c[fiber.index_of(ComponentId::interior(b.index, m))] =
            Rational(Integer(-12 * m), p_minus_1 * b.width);
      }
    }
    c[n - 1] = Rational(Integer(-12 * e), p_minus_1);
    for (auto& x : c) x.canonicalize();
    return VerticalDivisor(fiber, std::move(c));
  }

  const int n0 = target.branch();
  const int m0 = target.position();
  const int w0 = fiber.branch(n0).width;
  const Rational x = Rational(m0, w0 * e) * (1 - Rational(Integer(12), p_minus_1 * w0));
  const Rational beta = Rational(Integer(-12 * m0), p_minus_1 * (w0 * e));
  auto coefficient = [&](int branch, int m) -> Rational {
    if (branch == n0) return m <= m0 ? Rational((x - 1) * m) : Rational(x * m - m0);
    return beta * Rational(m, fiber.branch(branch).width);
  };
  for (const Branch& b : fiber.branches()) {
    for (int m = 1; m < b.width * e; ++m) {
      c[fiber.index_of(ComponentId::interior(b.index, m))] = coefficient(b.index, m);
    }
  }
  c[n - 1] = coefficient(n0, w0 * e);
  for (auto& v : c) v.canonicalize();
  return VerticalDivisor(fiber, std::move(c));
}

VerticalDivisor phi_omega(const SpecialFiber& fiber) {
  return closed_form_phi(fiber, ComponentId::zero()).scaled(Rational(to_integer(fiber.genus() - 1)));
}

VerticalDivisor cuspidal_divisor_class(const SpecialFiber& fiber) {
  const std::size_t n = fiber.basis_size();
  const int e = fiber.e();
  const Rational scale(Integer(6), to_integer(fiber.p() - 1));
  linalg::QVector c(n);
  c[0] = scale * e;
  c[n - 1] = -scale * e;
  for (const Branch& b : fiber.branches()) {
    for (int m = 1; m < b.width * e; ++m) {
      c[fiber.index_of(ComponentId::interior(b.index, m))] = scale * (e - Rational(2 * m, b.width));
    }
  }
  for (auto& v : c) v.canonicalize();
  return VerticalDivisor(fiber, std::move(c), Normalization::Unpinned);
}

VerticalDivisor fricke_involution(const SpecialFiber& fiber, const VerticalDivisor& div,
                                  std::span<const int> branch_perm) {
  const int s = fiber.s();
  std::vector<int> perm(branch_perm.begin(), branch_perm.end());
  if (perm.empty()) {
    for (int i = 1; i <= s; ++i) perm.push_back(i);
  }
  if (static_cast<int>(perm.size()) != s) {
    throw Error(Errc::InvalidPermutation, "permutation must have one entry per branch");
  }
  std::vector<char> seen(static_cast<std::size_t>(s) + 1, 0);
  for (int n = 1; n <= s; ++n) {
    const int image = perm[static_cast<std::size_t>(n - 1)];
    if (image < 1 || image > s || seen[static_cast<std::size_t>(image)]) {
      throw Error(Errc::InvalidPermutation, "not a permutation of the branches");
    }
    seen[static_cast<std::size_t>(image)] = 1;
    if (fiber.branch(image).width != fiber.branch(n).width) {
      throw Error(Errc::InvalidPermutation, "permutation does not preserve branch widths");
    }
  }
  if (div.coefficients().size() != fiber.basis_size() || div.fiber().p() != fiber.p() ||
      div.fiber().e() != fiber.e()) {
    throw Error(Errc::InvalidArgument, "divisor does not live on this fiber");
  }

  const std::size_t n = fiber.basis_size();
  const int e = fiber.e();
  linalg::QVector c(n);
  c[0] = div.coefficients()[n - 1];
  c[n - 1] = div.coefficients()[0];
  for (const Branch& b : fiber.branches()) {
    const int image = perm[static_cast<std::size_t>(b.index - 1)];
    for (int m = 1; m < b.width * e; ++m) {
      c[fiber.index_of(ComponentId::interior(b.index, m))] =
          div.coefficient(ComponentId::interior(image, b.width * e - m));
    }
  }
  return VerticalDivisor(fiber, std::move(c), Normalization::Unpinned);
}

}  // namespace arakelov::fiber
