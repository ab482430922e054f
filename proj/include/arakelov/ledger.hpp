#pragma once

// Named constants feeding the height bounds. Each entry carries a
// provenance tag: "paper-pinned" for explicit published numbers (the three
// Bruin coefficients) and "placeholder" for the implicit O(1) constants,
// which default to 1.
//
// Text format, one entry per key, each preceded by its provenance line:
//
//   #provenance: placeholder
//   c_MU = 3/2
//
// Other lines starting with '#' and blank lines are ignored. Keys not
// listed in a file keep their defaults.

#include "arakelov/rational.hpp"

#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace arakelov {

enum class Provenance { PaperPinned, Placeholder };

const char* provenance_name(Provenance p);

struct LedgerEntry {
  std::string key;
  Rational value;
  Provenance provenance;
};

class ConstantLedger {
 public:
  // Default values; see known_keys() for the key set.
  ConstantLedger();
  ConstantLedger(const ConstantLedger& other);
  ConstantLedger& operator=(const ConstantLedger& other);

  static const std::vector<std::string>& known_keys();

  static ConstantLedger parse(std::string_view text);
  static ConstantLedger load(const std::string& path);

  // Throws InvalidLedger for unknown keys. Records the key as used.
  const Rational& get(const std::string& key) const;
  Provenance provenance(const std::string& key) const;

  // Throws InvalidLedger for unknown keys or non-positive values.
  void set(const std::string& key, const Rational& value, Provenance provenance);

  const std::vector<LedgerEntry>& entries() const { return entries_; }

  // Keys read through get() so far, in key order.
  std::vector<std::string> used_keys() const;
  std::vector<std::string> used_placeholders() const;
  void clear_usage() const;

  std::string to_text() const;

 private:
  std::size_t index(const std::string& key) const;

  std::vector<LedgerEntry> entries_;
  mutable std::mutex usage_mu_;
  mutable std::set<std::string> used_;
};

}  // namespace arakelov
