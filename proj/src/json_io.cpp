#include "arakelov/json_io.hpp"

namespace arakelov::json_io {

Json rational(const Rational& q) { return to_string(q); }

Json component(const fiber::ComponentId& c) {
  switch (c.kind()) {
    case fiber::ComponentId::Kind::Infinity: return Json{{"t", "inf"}};
    case fiber::ComponentId::Kind::Zero: return Json{{"t", "zero"}};
    case fiber::ComponentId::Kind::Interior: break;
  }
  return Json{{"t", "int"}, {"n", c.branch()}, {"m", c.position()}};
}

Json complex(const theta::Complex& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json fiber_summary(const fiber::SpecialFiber& f) {
  Json branches = Json::array();
  for (const auto& b : f.branches()) {
    branches.push_back({{"n", b.index}, {"width", b.width}, {"interior_length", b.interior_length}});
  }
  Json basis = Json::array();
  for (std::size_t i = 0; i < f.basis_size(); ++i) basis.push_back(component(f.component_at(i)));
  return Json{{"p", f.p()},
              {"e", f.e()},
              {"f", f.params().f},
              {"s", f.s()},
              {"genus", f.genus()},
              {"eichler_mass", rational(f.eichler_mass())},
              {"branches", branches},
              {"basis", basis}};
}

Json divisor(const fiber::VerticalDivisor& d) {
  const auto& f = d.fiber();
  Json coeffs = Json::array();
  for (std::size_t i = 0; i < f.basis_size(); ++i) {
    coeffs.push_back({{"component", component(f.component_at(i))}, {"value", rational(d.coefficients()[i])}});
  }
  return Json{{"p", f.p()},
              {"e", f.e()},
              {"f", f.params().f},
              {"units", "log #k(v) = f log p"},
              {"normalization",
               d.normalization() == fiber::Normalization::ZeroAtInfinity ? "zero_at_infinity" : "unpinned"},
              {"coefficients", coeffs}};
}

Json intersection_matrix(const fiber::SpecialFiber& f, const fiber::IntersectionMatrix& m) {
  Json basis = Json::array();
  for (std::size_t i = 0; i < f.basis_size(); ++i) basis.push_back(component(f.component_at(i)));
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m.at(i, j));
    rows.push_back(row);
  }
  return Json{{"p", f.p()}, {"e", f.e()}, {"f", f.params().f}, {"basis", basis}, {"matrix", rows}};
}

Json bound_expr(const BoundExpr& e, std::int64_t p) {
  Json terms = Json::array();
  for (auto it = e.terms().rbegin(); it != e.terms().rend(); ++it) {
    terms.push_back({{"p_power", it->first.first}, {"log_power", it->first.second}, {"coeff", rational(it->second)}});
  }
  const Evaluation ev = e.evaluate(p);
  return Json{{"expr", e.to_string()},
              {"terms", terms},
              {"lower", rational(ev.lower)},
              {"upper", rational(ev.upper)},
              {"approx", ev.approx}};
}

Json ledger_entries(const std::vector<LedgerEntry>& entries) {
  Json out = Json::array();
  for (const auto& e : entries) {
    out.push_back({{"key", e.key}, {"value", rational(e.value)}, {"provenance", provenance_name(e.provenance)}});
  }
  return out;
}

Json assembly_trace(const heights::AssembledBound& b) {
  const auto& t = b.trace;
  const std::int64_t p = t.p;
  return Json{
      {"p", p},
      {"err_mode", heights::err_mode_name(t.err_mode)},
      {"genus", t.genus},
      {"n0", t.n0.get_str()},
      {"wd", {{"d", t.wd.d}, {"deg_bound", bound_expr(t.wd.deg_bound, p)}, {"height_bound", bound_expr(t.wd.height_bound, p)}}},
      {"bezout",
       {{"dv", 2},
        {"dw", 2},
        {"main_term", bound_expr(t.bezout.main_term, p)},
        {"error_term", bound_expr(t.bezout.error_term, p)},
        {"total", bound_expr(t.bezout.total, p)}}},
      {"theta_height", bound_expr(t.theta_height, p)},
      {"theta_height_no_mumford", bound_expr(t.theta_height_no_mumford, p)},
      {"j_height", bound_expr(t.j_height, p)},
      {"j_height_no_mumford", bound_expr(t.j_height_no_mumford, p)},
      {"constants", ledger_entries(t.constants)},
      {"b", {{"upper", rational(b.bound)}, {"approx", b.approx}}},
  };
}

Json winding_report(const modsym::WindingReport& r) {
  return Json{{"p", r.p},
              {"g", r.g},
              {"dim_plus", r.dim_plus},
              {"dim_minus", r.dim_minus},
              {"dim_Je", r.dim_Je},
              {"ratio", rational(r.ratio)},
              {"brumer_weak", r.brumer_weak}};
}

std::string brumer_csv(const std::vector<modsym::WindingReport>& reports) {
  std::string out = "p,g,dim_plus,dim_minus,dim_Je,ratio,brumer_weak\n";
  for (const auto& r : reports) {
    out += std::to_string(r.p) + "," + std::to_string(r.g) + "," + std::to_string(r.dim_plus) + "," +
           std::to_string(r.dim_minus) + "," + std::to_string(r.dim_Je) + "," + to_string(r.ratio) + "," +
           (r.brumer_weak ? "true" : "false") + "\n";
  }
  return out;
}

Json theta_value(const theta::ThetaValue& v) {
  return Json{{"value", complex(v.value)},
              {"norm_an", v.norm_an},
              {"truncation_radius", v.truncation_radius},
              {"error_estimate", v.error_estimate},
              {"value_error", v.value_error}};
}

}  // namespace arakelov::json_io
