#pragma once

// JSON encodings shared by the command-line tool and the tests.
//   rational   "num/den" in lowest terms, denominator always present
//   component  {"t": "inf"} | {"t": "zero"} | {"t": "int", "n": n, "m": m}
//   complex    {"re": x, "im": y}

#include "arakelov/bound_expr.hpp"
#include "arakelov/fiber.hpp"
#include "arakelov/heights.hpp"
#include "arakelov/modsym.hpp"
#include "arakelov/theta.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace arakelov::json_io {

using Json = nlohmann::ordered_json;

Json rational(const Rational& q);
Json component(const fiber::ComponentId& c);
Json complex(const theta::Complex& z);

Json fiber_summary(const fiber::SpecialFiber& f);
Json divisor(const fiber::VerticalDivisor& d);
Json intersection_matrix(const fiber::SpecialFiber& f, const fiber::IntersectionMatrix& m);

// Terms plus the enclosure of the value at p.
Json bound_expr(const BoundExpr& e, std::int64_t p);
Json ledger_entries(const std::vector<LedgerEntry>& entries);
Json assembly_trace(const heights::AssembledBound& b);

Json winding_report(const modsym::WindingReport& r);
std::string brumer_csv(const std::vector<modsym::WindingReport>& reports);

Json theta_value(const theta::ThetaValue& v);

}  // namespace arakelov::json_io
