#include "arakelov/ledger.hpp"

#include "arakelov/error.hpp"

#include <fstream>
#include <sstream>

namespace arakelov {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<LedgerEntry> default_entries() {
  const auto pinned = Provenance::PaperPinned;
  const auto placeholder = Provenance::Placeholder;
  return {
      {"bruin_a", Rational(11, 125), pinned},
      {"bruin_b", Rational(77, 10), pinned},
      {"bruin_c", Rational(16000), pinned},
      {"a0_integral", Rational(1), placeholder},
      {"a0_integral_e", Rational(1), placeholder},
      {"c_MU", Rational(1), placeholder},
      {"c_mumford", Rational(1), placeholder},
      {"c_bezout_err3", Rational(1), placeholder},
      {"c_bezout_err1", Rational(1), placeholder},
      {"gamma", Rational(1), placeholder},
      {"gamma1", Rational(1), placeholder},
  };
}

}  // namespace

const char* provenance_name(Provenance p) {
  return p == Provenance::PaperPinned ? "paper-pinned" : "placeholder";
}

ConstantLedger::ConstantLedger() : entries_(default_entries()) {}

ConstantLedger::ConstantLedger(const ConstantLedger& other) : entries_(other.entries_) {}

ConstantLedger& ConstantLedger::operator=(const ConstantLedger& other) {
  if (this != &other) {
    entries_ = other.entries_;
    std::lock_guard<std::mutex> lock(usage_mu_);
    used_.clear();
  }
  return *this;
}

const std::vector<std::string>& ConstantLedger::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& e : default_entries()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

std::size_t ConstantLedger::index(const std::string& key) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].key == key) return i;
  throw Error(Errc::InvalidLedger, "unknown ledger key '" + key + "'");
}

const Rational& ConstantLedger::get(const std::string& key) const {
  const std::size_t i = index(key);
  {
    std::lock_guard<std::mutex> lock(usage_mu_);
    used_.insert(key);
  }
  return entries_[i].value;
}

Provenance ConstantLedger::provenance(const std::string& key) const { return entries_[index(key)].provenance; }

void ConstantLedger::set(const std::string& key, const Rational& value, Provenance provenance) {
  const std::size_t i = index(key);
  if (value <= 0) throw Error(Errc::InvalidLedger, "ledger value for '" + key + "' must be > 0");
  entries_[i].value = value;
  entries_[i].provenance = provenance;
}

std::vector<std::string> ConstantLedger::used_keys() const {
  std::lock_guard<std::mutex> lock(usage_mu_);
  return {used_.begin(), used_.end()};
}

std::vector<std::string> ConstantLedger::used_placeholders() const {
  std::vector<std::string> out;
  for (const auto& k : used_keys())
    if (provenance(k) == Provenance::Placeholder) out.push_back(k);
  return out;
}

void ConstantLedger::clear_usage() const {
  std::lock_guard<std::mutex> lock(usage_mu_);
  used_.clear();
}

ConstantLedger ConstantLedger::parse(std::string_view text) {
  ConstantLedger ledger;
  std::set<std::string> seen;
  bool have_pending = false;
  Provenance pending = Provenance::Placeholder;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    const std::string where = "ledger line " + std::to_string(line_no) + ": ";
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view tag = "#provenance:";
      if (line.substr(0, tag.size()) == tag) {
        const std::string_view v = trim(line.substr(tag.size()));
        if (v == "paper-pinned") {
          pending = Provenance::PaperPinned;
        } else if (v == "placeholder") {
          pending = Provenance::Placeholder;
        } else {
          throw Error(Errc::InvalidLedger, where + "unknown provenance '" + std::string(v) + "'");
        }
        have_pending = true;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::InvalidLedger, where + "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (!have_pending) throw Error(Errc::InvalidLedger, where + "'" + key + "' has no #provenance line");
    if (!seen.insert(key).second) throw Error(Errc::InvalidLedger, where + "duplicate key '" + key + "'");
    Rational q;
    try {
      q = parse_rational(value);
    } catch (const Error& e) {
      throw Error(Errc::InvalidLedger, where + "bad value for '" + key + "'");
    }
    ledger.set(key, q, pending);
    have_pending = false;
  }
  return ledger;
}

ConstantLedger ConstantLedger::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidLedger, "cannot read ledger file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ConstantLedger::to_text() const {
  std::string out;
  for (const auto& e : entries_) {
    out += "#provenance: ";
    out += provenance_name(e.provenance);
    out += "\n" + e.key + " = " + to_string(e.value) + "\n";
  }
  return out;
}

}  // namespace arakelov
