#include "stillwater/run.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "stillwater/random.hpp"

namespace stillwater {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

FieldFile state_file(const State& s, const Field& beta, bool div_u, bool curl_u) {
  FieldFile f{s.grid(), {{"eta", s.eta}, {"beta", beta}, {"u1", s.u[0]}, {"u2", s.u[1]}}};
  if (div_u) f.fields.emplace_back("div_u", divergence(s.u));
  if (curl_u) f.fields.emplace_back("curl_u", curl(s.u));
  return f;
}

State read_state(const FieldFile& f) {
  return {VectorField(f.get("u1"), f.get("u2")), f.get("eta")};
}

std::string format_number(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string branch_csv_header() { return "kappa,eta_max,depth_min,residual,power_relerr,h1_u,h2_eta"; }

std::string branch_csv_row(double kappa, const BranchPoint& p, const DiagnosticsReport& d) {
  return format_number(kappa) + "," + format_number(d.eta_max) + "," + format_number(d.depth_min) + "," +
         format_number(p.residual) + "," + format_number(d.power.relerr) + "," + format_number(d.u_h1) + "," +
         format_number(d.eta_h2);
}

namespace {

Problem make_problem(const RunConfig& c) {
  return Problem(make_bathymetry(c.bathymetry, c.grid()), c.params(), c.forcing, c.solver.dealias);
}

SolveResult solve_point(double kappa, const Problem& prob, const RunConfig& c) {
  const State init = State::zeros(prob.grid());
  return c.method == RunConfig::Method::picard ? picard_solve(kappa, prob, init, c.solver)
                                               : newton_solve(kappa, prob, init, c.solver);
}

json params_json(const RunConfig& c) {
  const Params p = c.params();
  json j{{"A", p.A}, {"G", p.G}, {"L1", c.L1}, {"L2", c.L2}, {"N1", c.N1}, {"N2", c.N2},
         {"dealias", c.solver.dealias}};
  if (c.dimensional) j["kappa_per_kappa_hat"] = nondimensionalize(*c.dimensional).kappa(1.0);
  return j;
}

json diagnostics_json(const DiagnosticsReport& d, const IdentityCheck& ids) {
  json j{{"power_lhs", d.power.lhs},
         {"power_rhs", d.power.rhs},
         {"power_relerr", d.power.relerr},
         {"continuity", d.continuity},
         {"lemma_mean", d.lemma_mean},
         {"u_l2", d.u_l2},
         {"u_h1", d.u_h1},
         {"u_h2", d.u_h2},
         {"eta_h2", d.eta_h2},
         {"eta_h3", d.eta_h3},
         {"phi_l2", d.phi_l2},
         {"phi_hm1", d.phi_hm1},
         {"eta_max", d.eta_max},
         {"depth_min", d.depth_min},
         {"identities_ok", ids.ok()}};
  j["apriori_ratio"] = d.apriori_ratio ? json(*d.apriori_ratio) : json(nullptr);
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw Error("cannot write " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string numbered(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.swf1", stem, i);
  return buf;
}

// Files a previous run may have left that this run would otherwise not overwrite.
void clear_outputs(const fs::path& dir, const char* stem) {
  if (!fs::exists(dir)) return;
  const std::string prefix = std::string(stem) + "_";
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string n = e.path().filename().string();
    if (e.is_regular_file() && n.rfind(prefix, 0) == 0 && e.path().extension() == ".swf1") fs::remove(e.path());
  }
}

IdentityThresholds thresholds(const RunConfig& c) {
  IdentityThresholds t;
  t.tol_nonlinear = c.solver.tol_nonlinear;
  return t;
}

int run_solve(const RunConfig& cfg, std::ostream& log) {
  if (cfg.kappas.empty()) throw ConfigError("solve mode needs run.kappa, run.kappa_hat or a schedule");
  const Problem prob = make_problem(cfg);
  const std::size_t n = cfg.kappas.size();

  struct Outcome {
    std::optional<SolveResult> result;
    std::string error;
    std::exception_ptr fatal;
  };
  std::vector<Outcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        outcomes[i].result = solve_point(cfg.kappas[i], prob, cfg);
      } catch (const ConvergenceError& e) {
        outcomes[i].error = e.what();
      } catch (const DepthViolation& e) {
        outcomes[i].error = e.what();
      } catch (const RangeViolation& e) {
        outcomes[i].error = e.what();
      } catch (...) {
        outcomes[i].fatal = std::current_exception();
      }
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(cfg.jobs, n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const Outcome& o : outcomes)
    if (o.fatal) std::rethrow_exception(o.fatal);

  fs::create_directories(cfg.out);
  clear_outputs(cfg.out, "state");
  json points = json::array();
  int status = exit_code::ok;
  for (std::size_t i = 0; i < n; ++i) {
    const double kappa = cfg.kappas[i];
    json p{{"kappa", kappa}};
    const Outcome& o = outcomes[i];
    if (!o.result) {
      p["converged"] = false;
      p["error"] = o.error;
      log << "kappa " << format_number(kappa) << ": " << o.error << "\n";
      status = exit_code::no_convergence;
      points.push_back(std::move(p));
      continue;
    }
    const SolveResult& r = *o.result;
    const std::string name = n == 1 ? "state.swf1" : numbered("state", i);
    write_field_file(cfg.out / name, state_file(r.state, prob.beta(), cfg.emit_div, cfg.emit_curl));
    const DiagnosticsReport d = diagnose(r.state, kappa, prob);
    const IdentityCheck ids = check_identities(d, thresholds(cfg));
    p["converged"] = true;
    p["file"] = name;
    p["iterations"] = r.iterations;
    p["krylov_iterations"] = r.krylov_iterations;
    p["residual"] = r.residual;
    p["history"] = r.history;
    p["diagnostics"] = diagnostics_json(d, ids);
    log << "kappa " << format_number(kappa) << ": " << r.iterations << " iterations, residual "
        << format_number(r.residual) << ", eta_max " << format_number(d.eta_max) << ", identities "
        << (ids.ok() ? "ok" : "violated") << " -> " << name << "\n";
    points.push_back(std::move(p));
  }
  write_json(cfg.out / "report.json",
             json{{"mode", "solve"},
                  {"method", cfg.method == RunConfig::Method::picard ? "picard" : "newton"},
                  {"params", params_json(cfg)},
                  {"points", std::move(points)}});
  return status;
}

int run_continue(const RunConfig& cfg, std::ostream& log) {
  if (cfg.kappas.empty()) throw ConfigError("continue mode needs a kappa schedule (run.kappa or run.schedule)");
  ContinuationSettings cs = cfg.continuation;
  if (cs.mode == ContinuationSettings::Mode::natural) {
    cs.schedule = cfg.kappas;
    if (cs.schedule.front() != 0) cs.schedule.insert(cs.schedule.begin(), 0.0);
    for (std::size_t i = 1; i < cs.schedule.size(); ++i)
      if (!(cs.schedule[i] > cs.schedule[i - 1])) throw ConfigError("run: kappa schedule must be strictly increasing");
  } else {
    cs.kappa_target = *std::max_element(cfg.kappas.begin(), cfg.kappas.end());
    if (!(cs.kappa_target > 0)) throw ConfigError("run: arclength continuation needs a positive target kappa");
    if (!(cs.ds > 0) || !(cs.ds_min > 0) || !(cs.ds_max >= cs.ds))
      throw ConfigError("run: need 0 < ds_min, 0 < ds <= ds_max");
  }
  const Problem prob = make_problem(cfg);

  fs::create_directories(cfg.out);
  clear_outputs(cfg.out, "point");
  std::ofstream csv(cfg.out / "branch.csv", std::ios::binary | std::ios::trunc);
  if (!csv) throw Error("cannot write " + (cfg.out / "branch.csv").string());
  csv << branch_csv_header() << "\n";
  json points = json::array();
  std::size_t index = 0;
  bool identities_ok = true;

  const IdentityThresholds t = thresholds(cfg);
  const Branch branch = continue_branch(prob, cs, cfg.solver, [&](const BranchPoint& p) {
    const DiagnosticsReport d = diagnose(p.state, p.kappa, prob);
    const IdentityCheck ids = check_identities(d, t);
    identities_ok = identities_ok && ids.ok();
    const std::string name = numbered("point", index++);
    write_field_file(cfg.out / name, state_file(p.state, prob.beta(), cfg.emit_div, cfg.emit_curl));
    csv << branch_csv_row(p.kappa, p, d) << "\n" << std::flush;
    json j{{"kappa", p.kappa},
           {"file", name},
           {"newton_iterations", p.newton_iterations},
           {"halvings", p.halvings},
           {"step", p.step},
           {"residual", p.residual},
           {"inverse_depth", p.blowup.inverse_depth},
           {"diagnostics", diagnostics_json(d, ids)}};
    points.push_back(std::move(j));
    log << "kappa " << format_number(p.kappa) << ": eta_max " << format_number(d.eta_max) << ", depth_min "
        << format_number(d.depth_min) << ", residual " << format_number(p.residual) << ", identities "
        << (ids.ok() ? "ok" : "violated") << "\n";
  });
  csv.close();

  write_json(cfg.out / "report.json",
             json{{"mode", "continue"},
                  {"continuation", cs.mode == ContinuationSettings::Mode::natural ? "natural" : "arclength"},
                  {"params", params_json(cfg)},
                  {"termination", to_string(branch.termination)},
                  {"detail", branch.detail},
                  {"identities_ok", identities_ok},
                  {"points", std::move(points)}});
  log << "termination: " << to_string(branch.termination) << (branch.detail.empty() ? "" : " (" + branch.detail + ")")
      << "\n";
  return branch.termination == Termination::step_failure ? exit_code::no_convergence : exit_code::ok;
}

// ---- verify mode ----

RhsPair random_rhs(const Grid& g, Rng& rng, int K) {
  VectorField phi(random_field(g, rng, K), random_field(g, rng, K));
  phi[0] += rng.uniform(-1, 1);
  phi[1] += rng.uniform(-1, 1);
  return {random_field(g, rng, K), std::move(phi)};
}

// Mean-zero eta with |eta| <= 0.5, so the depth stays above 1/2.
State random_state(const Grid& g, Rng& rng, int K, double scale) {
  State s{VectorField(random_field(g, rng, K), random_field(g, rng, K)), random_field(g, rng, K)};
  const double e = s.eta.max_abs();
  if (e > 0) s.eta *= 0.5 * rng.uniform(0.2, 1.0) / e;
  s.u[0] *= scale;
  s.u[1] *= scale;
  s.eta *= std::min(1.0, 2 * scale);
  return s;
}

double l2_pair(const RhsPair& r) { return std::hypot(norm_l2(r.g), norm_l2(r.phi)); }

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

}  // namespace

std::vector<VerifyCheck> verify_suite(const RunConfig& cfg) {
  std::vector<VerifyCheck> out;
  const Problem prob = make_problem(cfg);
  const Grid& g = prob.grid();
  const Params& p = prob.params();
  Rng rng(cfg.seed);
  const int K = std::max(1, std::min(g.size(0), g.size(1)) / 8);
  auto guarded = [&](const std::string& name, const std::function<VerifyCheck()>& fn) {
    try {
      out.push_back(fn());
    } catch (const Error& e) {
      out.push_back({name, false, e.what()});
    }
  };

  guarded("principal_inverse", [&] {
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
      PairSpectrum r = to_spectrum(random_rhs(g, rng, K));
      PairSpectrum diff = apply_principal(invert_principal(r, p), p);
      diff.axpy(-1.0, r);
      worst = std::max(worst, std::sqrt(rhs_inner(diff, diff) / rhs_inner(r, r)));
    }
    return VerifyCheck{"principal_inverse", worst <= 1e-11, "max relative error " + sci(worst) + " (limit 1e-11)"};
  });

  guarded("linear_solve", [&] {
    double worst = 0;
    KrylovSettings ks = cfg.solver.krylov();
    ks.tolerance = std::min(ks.tolerance, 1e-11);
    for (int i = 0; i < 3; ++i) {
      const RhsPair r = random_rhs(g, rng, K);
      const State x = solve_linear(r, prob, ks);
      worst = std::max(worst, linear_residual(x, r, prob) / rhs_norm(r));
    }
    return VerifyCheck{"linear_solve", worst <= 1e-10, "max relative residual " + sci(worst) + " (limit 1e-10)"};
  });

  guarded("decomposition_identity", [&] {
    double worst = 0;
    for (int i = 0; i < 5; ++i) {
      const State s = random_state(g, rng, K, 1.0);
      const double kappa = i % 2 ? 1.0 : 0.0;
      RhsPair a = residual_full(s, kappa, prob);
      const RhsPair b = residual_direct(s, kappa, prob);
      const double scale = std::max(l2_pair(a), l2_pair(b));
      a.axpy(-1.0, b);
      worst = std::max(worst, l2_pair(a) / scale);
    }
    return VerifyCheck{"decomposition_identity", worst <= 1e-9, "max relative gap " + sci(worst) + " (limit 1e-9)"};
  });

  guarded("zero_forcing_uniqueness", [&] {
    double worst = 0;
    for (int i = 0; i < 3; ++i) {
      const SolveResult r = newton_solve(0.0, prob, random_state(g, rng, K, 1e-3), cfg.solver);
      worst = std::max(worst, state_norm(r.state));
    }
    return VerifyCheck{"zero_forcing_uniqueness", worst <= 1e-10, "max ||x|| " + sci(worst) + " (limit 1e-10)"};
  });

  const double kappa = cfg.kappas.empty() ? 0.1 : cfg.kappas.front();
  std::optional<SolveResult> solved;
  guarded("solution_identities", [&] {
    solved = newton_solve(kappa, prob, State::zeros(g), cfg.solver);
    const DiagnosticsReport d = diagnose(solved->state, kappa, prob);
    const IdentityCheck ids = check_identities(d, thresholds(cfg));
    return VerifyCheck{"solution_identities", ids.ok(),
                       "kappa " + format_number(kappa) + ": power relerr " + sci(d.power.relerr) + ", continuity " +
                           sci(d.continuity) + ", lemma mean " + sci(d.lemma_mean)};
  });

  guarded("residual_contract", [&] {
    if (!solved) return VerifyCheck{"residual_contract", false, "no solution to check"};
    const double res = l2_pair(residual_full(solved->state, kappa, prob));
    const double bound =
        cfg.solver.tol_nonlinear * (1 + std::abs(kappa) * norm_l2(forcing_map(solved->state.eta, prob)));
    return VerifyCheck{"residual_contract", res <= bound, "residual " + sci(res) + " (limit " + sci(bound) + ")"};
  });

  guarded("picard_newton_agreement", [&] {
    const double ks = std::min(kappa, 0.1);
    const SolveResult a = picard_solve(ks, prob, State::zeros(g), cfg.solver);
    const SolveResult b = newton_solve(ks, prob, State::zeros(g), cfg.solver);
    State diff = a.state;
    diff.axpy(-1.0, b.state);
    const double gap = state_norm(diff);
    return VerifyCheck{"picard_newton_agreement", gap <= 1e-8,
                       "kappa " + format_number(ks) + ": gap " + sci(gap) + " (limit 1e-8)"};
  });

  guarded("swf1_round_trip", [&] {
    if (!solved) return VerifyCheck{"swf1_round_trip", false, "no solution to check"};
    const FieldFile f = state_file(solved->state, prob.beta(), true, true);
    const FieldFile back = decode_field_file(encode_field_file(f));
    bool same = back.fields.size() == f.fields.size() && back.grid == f.grid;
    for (std::size_t i = 0; same && i < f.fields.size(); ++i) {
      const auto x = f.fields[i].second.samples(), y = back.fields[i].second.samples();
      same = back.fields[i].first == f.fields[i].first &&
             std::equal(x.begin(), x.end(), y.begin(), y.end(),
                        [](double u, double v) { return std::memcmp(&u, &v, sizeof u) == 0; });
    }
    return VerifyCheck{"swf1_round_trip", same, same ? "bitwise identical" : "samples differ"};
  });

  for (int axis = 0; axis < 2; ++axis) {
    const std::string name = "symmetry_axis" + std::to_string(axis + 1);
    guarded(name, [&] {
      if (!solved) return VerifyCheck{name, false, "no solution to check"};
      try {
        const double v = symmetry_check(solved->state, axis, prob);
        return VerifyCheck{name, v <= 1e-8, "derivative norm " + sci(v) + " (limit 1e-8)"};
      } catch (const PreconditionViolation&) {
        return VerifyCheck{name, true, "not applicable: data varies along this axis"};
      }
    });
  }
  return out;
}

namespace {

int run_verify(const RunConfig& cfg, std::ostream& log) {
  const std::vector<VerifyCheck> checks = verify_suite(cfg);
  bool ok = true;
  json j = json::array();
  for (const VerifyCheck& c : checks) {
    ok = ok && c.pass;
    log << (c.pass ? "pass " : "FAIL ") << c.name << ": " << c.detail << "\n";
    j.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  fs::create_directories(cfg.out);
  write_json(cfg.out / "verify.json", json{{"mode", "verify"}, {"params", params_json(cfg)}, {"pass", ok}, {"checks", j}});
  return ok ? exit_code::ok : exit_code::verification;
}

}  // namespace

int run(Mode mode, const RunConfig& cfg, std::ostream& log) {
  try {
    switch (mode) {
      case Mode::solve:
        return run_solve(cfg, log);
      case Mode::continue_branch:
        return run_continue(cfg, log);
      case Mode::verify:
        return run_verify(cfg, log);
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::config;
  } catch (const BadSpec& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::config;
  } catch (const NonPositiveScale& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::config;
  } catch (const FormatError& e) {
    log << "input error: " << e.what() << "\n";
    return exit_code::config;
  } catch (const ConvergenceError& e) {
    log << "no convergence: " << e.what() << "\n";
    return exit_code::no_convergence;
  } catch (const DepthViolation& e) {
    log << "no convergence: " << e.what() << "\n";
    return exit_code::no_convergence;
  } catch (const RangeViolation& e) {
    log << "no convergence: " << e.what() << "\n";
    return exit_code::no_convergence;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::failure;
  }
  return exit_code::failure;
}

}  // namespace stillwater
