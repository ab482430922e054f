#include "arakelov/cli.hpp"

#include "arakelov/error.hpp"
#include "arakelov/fiber.hpp"
#include "arakelov/heights.hpp"
#include "arakelov/json_io.hpp"
#include "arakelov/ledger.hpp"
#include "arakelov/modsym.hpp"
#include "arakelov/theta.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

namespace arakelov::cli {

namespace {

using json_io::Json;

struct LedgerChoice {
  ConstantLedger ledger;
  bool from_file = false;
};

LedgerChoice resolve_ledger(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("ARAKELOV_LEDGER"); env && *env) path = env;
  }
  LedgerChoice c;
  if (!path.empty()) {
    c.ledger = ConstantLedger::load(path);
    c.from_file = true;
  }
  return c;
}

void placeholder_notice(const LedgerChoice& c, std::ostream& err) {
  const auto used = c.ledger.used_placeholders();
  if (used.empty()) return;
  err << "notice: " << (c.from_file ? "ledger" : "built-in ledger defaults") << "; placeholder constants used:";
  for (const auto& k : used) err << ' ' << k << '=' << to_string(c.ledger.get(k));
  err << '\n';
}

double parse_real(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error(Errc::InvalidArgument, "cannot read " + what + " '" + s + "'");
  return v;
}

// Accepts "x", "yi", "x+yi", "x-yi", "i", "-i" (also with 'j').
theta::Complex parse_complex(std::string s) {
  std::erase(s, ' ');
  if (s.empty()) throw Error(Errc::InvalidArgument, "empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, "complex number"), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not at the start and not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : body.substr(0, split);
  std::string im = split == std::string::npos ? body : body.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, "complex number"), parse_real(im, "complex number")};
}

fiber::SpecialFiber make_fiber(std::int64_t p, int e, int f) { return fiber::build_special_fiber({p, e, f}); }

struct FiberFlags {
  std::int64_t p = 0;
  int e = 1;
  int f = 1;
};

void add_fiber_flags(CLI::App* sub, FiberFlags& flags) {
  sub->add_option("--p", flags.p, "prime p > 17")->required();
  sub->add_option("--e", flags.e, "ramification index e_v")->default_val(1);
  sub->add_option("--f", flags.f, "residual degree f_v")->default_val(1);
}

heights::ErrMode parse_err_mode(const std::string& s) {
  if (s == "p3") return heights::ErrMode::P3;
  if (s == "autissier") return heights::ErrMode::Autissier;
  throw Error(Errc::InvalidArgument, "err-mode must be p3 or autissier");
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations on the arithmetic of X_0(p)", "arakelov-cli"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  std::string ledger_path;
  auto add_ledger = [&](CLI::App* sub) {
    sub->add_option("--ledger", ledger_path, "constant ledger file (default: $ARAKELOV_LEDGER or built-ins)");
  };

  std::function<void()> action;

  FiberFlags ff;
  auto* fiber_cmd = app.add_subcommand("fiber", "special fiber layout");
  add_fiber_flags(fiber_cmd, ff);
  add_ledger(fiber_cmd);
  fiber_cmd->callback([&] {
    action = [&] { emit(out, json_io::fiber_summary(make_fiber(ff.p, ff.e, ff.f))); };
  });

  std::string target = "zero", method = "closed";
  std::optional<int> tn, tm;
  auto* phi_cmd = app.add_subcommand("phi", "vertical divisor Phi for a target component");
  add_fiber_flags(phi_cmd, ff);
  phi_cmd->add_option("--target", target, "zero|inf|int")
      ->required()
      ->check(CLI::IsMember({"zero", "inf", "int"}));
  phi_cmd->add_option("--n", tn, "branch index for --target int");
  phi_cmd->add_option("--m", tm, "position on the branch for --target int");
  phi_cmd->add_option("--method", method, "closed|solve")->check(CLI::IsMember({"closed", "solve"}));
  add_ledger(phi_cmd);
  phi_cmd->callback([&] {
    if (target == "int" && (!tn || !tm)) throw CLI::ValidationError("--target int needs --n and --m");
    if (target != "int" && (tn || tm)) throw CLI::ValidationError("--n/--m only apply to --target int");
    action = [&] {
      const auto f = make_fiber(ff.p, ff.e, ff.f);
      fiber::ComponentId c = target == "zero" ? fiber::ComponentId::zero()
                             : target == "inf" ? fiber::ComponentId::infinity()
                                               : fiber::ComponentId::interior(*tn, *tm);
      f.index_of(c);  // range check before solving
      const auto d = method == "closed" ? fiber::closed_form_phi(f, c) : fiber::solve_vertical_divisor(f, c);
      emit(out, Json{{"command", "phi"}, {"target", json_io::component(c)}, {"method", method},
                     {"divisor", json_io::divisor(d)}});
    };
  });

  auto* omega_cmd = app.add_subcommand("omega", "vertical part (g-1) Phi_{C_0} of the dualizing sheaf");
  add_fiber_flags(omega_cmd, ff);
  add_ledger(omega_cmd);
  omega_cmd->callback([&] {
    action = [&] {
      const auto f = make_fiber(ff.p, ff.e, ff.f);
      emit(out, Json{{"command", "omega"}, {"divisor", json_io::divisor(fiber::phi_omega(f))}});
    };
  });

  auto* cusp_cmd = app.add_subcommand("cusp", "class of the cuspidal divisor (0) - (inf)");
  add_fiber_flags(cusp_cmd, ff);
  add_ledger(cusp_cmd);
  cusp_cmd->callback([&] {
    action = [&] {
      const auto f = make_fiber(ff.p, ff.e, ff.f);
      emit(out, Json{{"command", "cusp"}, {"divisor", json_io::divisor(fiber::cuspidal_divisor_class(f))}});
    };
  });

  auto* matrix_cmd = app.add_subcommand("matrix", "intersection matrix of the special fiber");
  add_fiber_flags(matrix_cmd, ff);
  add_ledger(matrix_cmd);
  matrix_cmd->callback([&] {
    action = [&] {
      const auto f = make_fiber(ff.p, ff.e, ff.f);
      emit(out, json_io::intersection_matrix(f, fiber::intersection_matrix(f)));
    };
  });

  std::int64_t bp = 0;
  std::string err_mode = "p3";
  auto* bound_cmd = app.add_subcommand("bound", "height bound b(p) for quadratic points");
  bound_cmd->add_option("--p", bp, "prime p > 71")->required();
  bound_cmd->add_option("--err-mode", err_mode, "p3|autissier")->check(CLI::IsMember({"p3", "autissier"}));
  add_ledger(bound_cmd);
  bound_cmd->callback([&] {
    action = [&] {
      LedgerChoice lc = resolve_ledger(ledger_path);
      const auto b = heights::assemble_b(bp, lc.ledger, parse_err_mode(err_mode));
      emit(out, json_io::assembly_trace(b));
      placeholder_notice(lc, err);
    };
  });

  int dv = 0, dw = 0;
  std::string degv, degw, hv, hw;
  auto* bez_cmd = app.add_subcommand("bezout", "arithmetic Bezout bound");
  bez_cmd->add_option("--p", bp, "prime p > 17")->required();
  bez_cmd->add_option("--dv", dv, "dim V")->required();
  bez_cmd->add_option("--dw", dw, "dim W")->required();
  bez_cmd->add_option("--degv", degv, "deg V (rational)")->required();
  bez_cmd->add_option("--degw", degw, "deg W (rational)")->required();
  bez_cmd->add_option("--hv", hv, "height of V (rational)")->required();
  bez_cmd->add_option("--hw", hw, "height of W (rational)")->required();
  bez_cmd->add_option("--err-mode", err_mode, "p3|autissier")->check(CLI::IsMember({"p3", "autissier"}));
  add_ledger(bez_cmd);
  bez_cmd->callback([&] {
    action = [&] {
      const Rational qdv = parse_rational(degv), qdw = parse_rational(degw);
      const Rational qhv = parse_rational(hv), qhw = parse_rational(hw);
      if (qdv <= 0 || qdw <= 0) throw Error(Errc::InvalidArgument, "degrees must be > 0");
      if (qhv < 0 || qhw < 0) throw Error(Errc::InvalidArgument, "heights must be >= 0");
      LedgerChoice lc = resolve_ledger(ledger_path);
      const auto b = heights::bezout_bound(bp, dv, dw, qdv, qdw, qhv, qhw, lc.ledger, parse_err_mode(err_mode));
      emit(out, Json{{"p", bp},
                     {"dv", dv},
                     {"dw", dw},
                     {"err_mode", err_mode},
                     {"main_term", json_io::bound_expr(b.main_term, bp)},
                     {"error_term", json_io::bound_expr(b.error_term, bp)},
                     {"total", json_io::bound_expr(b.total, bp)}});
      placeholder_notice(lc, err);
    };
  });

  auto* wind_cmd = app.add_subcommand("winding", "winding quotient and Atkin-Lehner dimensions");
  wind_cmd->add_option("--p", bp, "prime p > 3")->required();
  add_ledger(wind_cmd);
  wind_cmd->callback([&] {
    action = [&] {
      Json j = json_io::winding_report(modsym::winding_report(bp));
      j["sturm_bound"] = modsym::sturm_bound(bp);
      emit(out, j);
    };
  });

  std::int64_t from = 0, to = 0;
  int jobs = 1;
  std::string format = "json", out_path;
  auto* scan_cmd = app.add_subcommand("brumer-scan", "winding dimensions over a range of primes");
  scan_cmd->add_option("--from", from, "smallest p (> 17)")->required();
  scan_cmd->add_option("--to", to, "largest p")->required();
  scan_cmd->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  scan_cmd->add_option("--out", out_path, "json|csv (format), or a file path to write to");
  scan_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  add_ledger(scan_cmd);
  scan_cmd->callback([&] {
    if (out_path == "csv" || out_path == "json") {
      format = out_path;
      out_path.clear();
    }
    action = [&] {
      const auto reports = modsym::brumer_scan(from, to, jobs);
      std::string text;
      if (format == "csv") {
        text = json_io::brumer_csv(reports);
      } else {
        Json arr = Json::array();
        for (const auto& r : reports) arr.push_back(json_io::winding_report(r));
        text = Json{{"from", from}, {"to", to}, {"reports", arr}}.dump(2) + "\n";
      }
      if (out_path.empty()) {
        out << text;
      } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw Error(Errc::InvalidArgument, "cannot write '" + out_path + "'");
        file << text;
      }
    };
  });

  std::vector<std::string> tau_s, z_s;
  double tol = 1e-12;
  auto* theta_cmd = app.add_subcommand("theta", "Riemann theta function and its analytic norm (g = 1, 2)");
  theta_cmd->add_option("--tau", tau_s, "period matrix entries, row-major (1 or 4 complex numbers)")->required();
  theta_cmd->add_option("--z", z_s, "argument (g complex numbers)")->required();
  theta_cmd->add_option("--tol", tol, "tolerance on the analytic norm");
  add_ledger(theta_cmd);
  theta_cmd->callback([&] {
    action = [&] {
      if (!(tol > 0)) throw Error(Errc::InvalidArgument, "tolerance must be > 0");
      std::vector<theta::Complex> tau, z;
      for (const auto& s : tau_s) tau.push_back(parse_complex(s));
      for (const auto& s : z_s) z.push_back(parse_complex(s));
      const theta::PeriodMatrix pm(tau);
      const auto v = theta::theta_eval(pm, z, tol);
      Json jt = Json::array(), jz = Json::array();
      for (const auto& c : tau) jt.push_back(json_io::complex(c));
      for (const auto& c : z) jz.push_back(json_io::complex(c));
      Json j{{"g", pm.genus()}, {"tau", jt}, {"z", jz}, {"tol", tol}};
      j.update(json_io::theta_value(v));
      emit(out, j);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    // Validate the ledger file up front for every subcommand.
    resolve_ledger(ledger_path);
    if (action) action();
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_internal(e.code()) ? kExitInternal : kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"arakelov-cli"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace arakelov::cli
