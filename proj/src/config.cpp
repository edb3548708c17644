#include "stillwater/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "stillwater/errors.hpp"
#include "stillwater/io.hpp"

namespace stillwater {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"grid", {"L", "N", "L1", "L2", "N1", "N2"}},
      {"dimensional", {"alpha", "g", "mu", "sigma", "H"}},
      {"nondimensional", {"A", "G"}},
      {"bathymetry",
       {"kind", "amplitude", "center1", "center2", "semi_axis1", "semi_axis2", "cutoff", "invert", "seed", "decay",
        "max_mode", "path"}},
      {"forcing", {"phi", "psi", "tau", "nu1", "nu2", "coefficients", "y_max"}},
      {"solver",
       {"method", "tol_nonlinear", "max_picard", "max_newton", "fd_epsilon", "tol_lin", "krylov_restart", "krylov_max",
        "dealias", "polish_steps"}},
      {"run",
       {"kappa", "kappa_hat", "schedule", "first", "count", "target", "target_hat", "continuation", "ds", "ds_min",
        "ds_max", "max_steps", "max_halvings", "eta_max", "depth_min", "kappa_max", "out", "seed", "jobs", "emit"}},
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  bool has_section(const std::string& s) const { return tree_.get_child_optional(s).has_value(); }
  bool has(const std::string& s, const std::string& k) const {
    return tree_.get_optional<std::string>(pt::ptree::path_type(s + "." + k, '.')).has_value();
  }

  std::string str(const std::string& s, const std::string& k, const std::string& fallback) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(s + "." + k, '.'));
    return v ? trim(*v) : fallback;
  }

  double real(const std::string& s, const std::string& k, double fallback) const {
    if (!has(s, k)) return fallback;
    return parse_real(str(s, k, ""), s + "." + k);
  }

  long long integer(const std::string& s, const std::string& k, long long fallback) const {
    if (!has(s, k)) return fallback;
    const std::string v = str(s, k, "");
    std::size_t pos = 0;
    long long x = 0;
    try {
      x = std::stoll(v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != v.size()) throw ConfigError(s + "." + k + ": expected an integer, got '" + v + "'");
    return x;
  }

  bool boolean(const std::string& s, const std::string& k, bool fallback) const {
    if (!has(s, k)) return fallback;
    const std::string v = str(s, k, "");
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError(s + "." + k + ": expected a boolean, got '" + v + "'");
  }

  std::vector<double> reals(const std::string& s, const std::string& k) const {
    std::vector<double> out;
    std::stringstream ss(str(s, k, ""));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item), s + "." + k));
    return out;
  }

  static std::string trim(const std::string& v) {
    const auto b = v.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    return v.substr(b, v.find_last_not_of(" \t") - b + 1);
  }

  static double parse_real(const std::string& v, const std::string& key) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    double x = 0;
    try {
      x = std::stod(v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != v.size() || std::isnan(x)) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return x;
  }

 private:
  const pt::ptree& tree_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

// Coefficients j = 0, 1, ... until the first missing one; one past the
// degree cap so that validate() reports the overflow.
template <class T>
std::vector<T> collect(int max_degree, const std::function<std::optional<T>(int)>& at) {
  std::vector<T> out;
  for (int j = 0; j <= max_degree + 1; ++j) {
    auto c = at(j);
    if (!c) break;
    out.push_back(std::move(*c));
  }
  return out;
}

void load_coefficients(RunConfig& cfg, const std::filesystem::path& path) {
  const FieldFile f = [&] {
    try {
      return read_field_file(path);
    } catch (const Error& e) {
      throw ConfigError(std::string("forcing.coefficients: ") + e.what());
    }
  }();
  const Grid g = cfg.grid();
  if (!(f.grid == g))
    throw ConfigError("forcing.coefficients: grid of " + path.string() + " differs from [grid]");
  auto field = [&](const std::string& name) { const auto s = f.get(name).samples();
    return Field(g, std::vector<double>(s.begin(), s.end())); };
  ForcingSpec& fs = cfg.forcing;
  const int cap = fs.max_degree;
  if (fs.phi_kind == ForcingSpec::VectorKind::polynomial)
    fs.phi_coeffs = collect<VectorField>(cap, [&](int j) -> std::optional<VectorField> {
      const std::string a = "phi" + std::to_string(j) + "_1", b = "phi" + std::to_string(j) + "_2";
      if (!f.has(a) && !f.has(b)) return std::nullopt;
      return VectorField(f.has(a) ? field(a) : Field(g), f.has(b) ? field(b) : Field(g));
    });
  if (fs.psi_kind == ForcingSpec::ScalarKind::polynomial)
    fs.psi_coeffs = collect<Field>(cap, [&](int j) -> std::optional<Field> {
      const std::string a = "psi" + std::to_string(j);
      if (!f.has(a)) return std::nullopt;
      return field(a);
    });
  if (fs.tau_kind == ForcingSpec::TensorKind::polynomial)
    fs.tau_coeffs = collect<SymTensorField>(cap, [&](int j) -> std::optional<SymTensorField> {
      const std::string p = "tau" + std::to_string(j) + "_";
      if (!f.has(p + "11") && !f.has(p + "12") && !f.has(p + "22")) return std::nullopt;
      auto get = [&](const std::string& n) { return f.has(p + n) ? field(p + n) : Field(g); };
      return SymTensorField{get("11"), get("12"), get("22")};
    });
}

}  // namespace

Grid RunConfig::grid() const { return Grid(L1, L2, N1, N2); }

Params RunConfig::params() const {
  Params p;
  if (dimensional) {
    const Nondimensionalization nd = nondimensionalize(*dimensional);
    p.A = nd.A;
    p.G = nd.G;
  } else if (nondimensional) {
    p.A = nondimensional->first;
    p.G = nondimensional->second;
  }
  p.L = {L1, L2};
  return p;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  for (const auto& [section, body] : tree) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (!body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
      throw ConfigError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) throw ConfigError("config: unknown key " + section + "." + key);
  }
  const Reader r(tree);
  RunConfig c;

  // Grid
  const double L = r.real("grid", "L", 1.0);
  const long long N = r.integer("grid", "N", 64);
  c.L1 = r.real("grid", "L1", L);
  c.L2 = r.real("grid", "L2", L);
  const long long n1 = r.integer("grid", "N1", N), n2 = r.integer("grid", "N2", N);
  if (n1 < 8 || n2 < 8 || n1 % 2 || n2 % 2 || n1 > (1 << 14) || n2 > (1 << 14))
    throw ConfigError("grid: N1 and N2 must be even and between 8 and 16384");
  c.N1 = static_cast<int>(n1);
  c.N2 = static_cast<int>(n2);
  if (!(c.L1 > 0) || !(c.L2 > 0) || !std::isfinite(c.L1) || !std::isfinite(c.L2))
    throw ConfigError("grid: periods L1 and L2 must be positive and finite");

  // Parameters
  const bool dim = r.has_section("dimensional"), nondim = r.has_section("nondimensional");
  if (dim && nondim)
    throw ConfigError("config: [dimensional] and [nondimensional] are mutually exclusive; give exactly one");
  if (!dim && !nondim) throw ConfigError("config: one of [dimensional] or [nondimensional] is required");
  if (dim) {
    for (const char* k : {"alpha", "g", "mu", "sigma", "H"})
      if (!r.has("dimensional", k)) throw ConfigError(std::string("dimensional.") + k + " is required");
    DimensionalParams d;
    d.alpha = r.real("dimensional", "alpha", 0);
    d.g = r.real("dimensional", "g", 0);
    d.mu = r.real("dimensional", "mu", 0);
    d.sigma = r.real("dimensional", "sigma", 0);
    d.H = r.real("dimensional", "H", 0);
    try {
      (void)nondimensionalize(d);
    } catch (const Error& e) {
      throw ConfigError(std::string("dimensional: ") + e.what());
    }
    c.dimensional = d;
  } else {
    for (const char* k : {"A", "G"})
      if (!r.has("nondimensional", k)) throw ConfigError(std::string("nondimensional.") + k + " is required");
    c.nondimensional = std::make_pair(r.real("nondimensional", "A", 0), r.real("nondimensional", "G", 0));
  }
  try {
    c.params().validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("parameters: ") + e.what());
  }

  // Bathymetry
  BathymetrySpec& b = c.bathymetry;
  const std::string kind = r.str("bathymetry", "kind", "flat");
  if (kind == "flat")
    b.kind = BathymetrySpec::Kind::flat;
  else if (kind == "half_ellipse")
    b.kind = BathymetrySpec::Kind::half_ellipse;
  else if (kind == "random")
    b.kind = BathymetrySpec::Kind::random;
  else if (kind == "samples")
    b.kind = BathymetrySpec::Kind::samples;
  else
    throw ConfigError("bathymetry.kind: expected flat, half_ellipse, random or samples, got '" + kind + "'");
  b.amplitude = r.real("bathymetry", "amplitude", b.kind == BathymetrySpec::Kind::flat ? 0.0 : 1.0);
  if (r.has("bathymetry", "center1") || r.has("bathymetry", "center2"))
    b.center = std::array<double, 2>{r.real("bathymetry", "center1", c.L1 / 2), r.real("bathymetry", "center2", c.L2 / 2)};
  b.semi_axes = {r.real("bathymetry", "semi_axis1", c.L1 / 4), r.real("bathymetry", "semi_axis2", c.L2 / 4)};
  b.cutoff = r.real("bathymetry", "cutoff", b.cutoff);
  b.invert = r.boolean("bathymetry", "invert", b.invert);
  const long long bseed = r.integer("bathymetry", "seed", 0);
  if (bseed < 0) throw ConfigError("bathymetry.seed must be >= 0");
  b.seed = static_cast<std::uint64_t>(bseed);
  b.decay = r.real("bathymetry", "decay", b.decay);
  b.max_mode = static_cast<int>(r.integer("bathymetry", "max_mode", b.max_mode));
  if (r.has("bathymetry", "path")) b.path = resolve(base_dir, r.str("bathymetry", "path", "")).string();
  try {
    b.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("bathymetry: ") + e.what());
  }

  // Forcing
  ForcingSpec& f = c.forcing;
  const std::string phi = r.str("forcing", "phi", "zero");
  if (phi == "zero")
    f.phi_kind = ForcingSpec::VectorKind::zero;
  else if (phi == "constant")
    f.phi_kind = ForcingSpec::VectorKind::constant;
  else if (phi == "gravity")
    f.phi_kind = ForcingSpec::VectorKind::gravity_affine;
  else if (phi == "polynomial")
    f.phi_kind = ForcingSpec::VectorKind::polynomial;
  else
    throw ConfigError("forcing.phi: expected zero, constant, gravity or polynomial, got '" + phi + "'");
  f.nu = {r.real("forcing", "nu1", 1.0), r.real("forcing", "nu2", 0.0)};
  const std::string psi = r.str("forcing", "psi", "zero"), tau = r.str("forcing", "tau", "zero");
  if (psi != "zero" && psi != "polynomial") throw ConfigError("forcing.psi: expected zero or polynomial");
  if (tau != "zero" && tau != "polynomial") throw ConfigError("forcing.tau: expected zero or polynomial");
  f.psi_kind = psi == "zero" ? ForcingSpec::ScalarKind::zero : ForcingSpec::ScalarKind::polynomial;
  f.tau_kind = tau == "zero" ? ForcingSpec::TensorKind::zero : ForcingSpec::TensorKind::polynomial;
  f.y_max = r.real("forcing", "y_max", f.y_max);
  const bool poly = phi == "polynomial" || psi == "polynomial" || tau == "polynomial";
  if (poly && !r.has("forcing", "coefficients"))
    throw ConfigError("forcing.coefficients: polynomial forcing needs a coefficient file");
  if (r.has("forcing", "coefficients")) {
    c.coefficients = resolve(base_dir, r.str("forcing", "coefficients", ""));
    load_coefficients(c, c.coefficients);
  }
  try {
    f.validate(c.grid());
  } catch (const Error& e) {
    throw ConfigError(std::string("forcing: ") + e.what());
  }

  // Solver
  SolveSettings& s = c.solver;
  const std::string method = r.str("solver", "method", "newton");
  if (method == "newton")
    c.method = RunConfig::Method::newton;
  else if (method == "picard")
    c.method = RunConfig::Method::picard;
  else
    throw ConfigError("solver.method: expected newton or picard, got '" + method + "'");
  s.tol_nonlinear = r.real("solver", "tol_nonlinear", s.tol_nonlinear);
  s.max_picard = static_cast<int>(r.integer("solver", "max_picard", s.max_picard));
  s.max_newton = static_cast<int>(r.integer("solver", "max_newton", s.max_newton));
  s.fd_epsilon = r.real("solver", "fd_epsilon", s.fd_epsilon);
  s.tol_lin = r.real("solver", "tol_lin", s.tol_lin);
  s.krylov_restart = static_cast<int>(r.integer("solver", "krylov_restart", s.krylov_restart));
  s.krylov_max = static_cast<int>(r.integer("solver", "krylov_max", s.krylov_max));
  s.dealias = r.boolean("solver", "dealias", s.dealias);
  s.polish_steps = static_cast<int>(r.integer("solver", "polish_steps", s.polish_steps));
  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }

  // Run
  auto to_nondim = [&](double khat, const std::string& key) {
    if (!c.dimensional) throw ConfigError("run." + key + " needs a [dimensional] block");
    return nondimensionalize(*c.dimensional).kappa(khat);
  };
  if (r.has("run", "kappa") && r.has("run", "kappa_hat"))
    throw ConfigError("run: kappa and kappa_hat are mutually exclusive");
  if (r.has("run", "kappa")) c.kappas = r.reals("run", "kappa");
  if (r.has("run", "kappa_hat"))
    for (double k : r.reals("run", "kappa_hat")) c.kappas.push_back(to_nondim(k, "kappa_hat"));

  const std::string schedule = r.str("run", "schedule", "list");
  if (schedule == "geometric") {
    if (r.has("run", "target") == r.has("run", "target_hat"))
      throw ConfigError("run: a geometric schedule needs exactly one of target or target_hat");
    const double target =
        r.has("run", "target") ? r.real("run", "target", 0) : to_nondim(r.real("run", "target_hat", 0), "target_hat");
    const double first = r.real("run", "first", 0.1);
    const long long count = r.integer("run", "count", 10);
    if (count < 1 || count > 100000) throw ConfigError("run.count must be between 1 and 100000");
    try {
      c.kappas = geometric_schedule(first, target, static_cast<int>(count));
    } catch (const Error& e) {
      throw ConfigError(std::string("run: ") + e.what());
    }
    c.kappas.erase(c.kappas.begin());
  } else if (schedule != "list") {
    throw ConfigError("run.schedule: expected list or geometric, got '" + schedule + "'");
  }
  for (double k : c.kappas)
    if (!std::isfinite(k) || k < 0) throw ConfigError("run: kappa values must be finite and >= 0");

  ContinuationSettings& cs = c.continuation;
  const std::string cont = r.str("run", "continuation", "natural");
  if (cont == "natural")
    cs.mode = ContinuationSettings::Mode::natural;
  else if (cont == "arclength")
    cs.mode = ContinuationSettings::Mode::arclength;
  else
    throw ConfigError("run.continuation: expected natural or arclength, got '" + cont + "'");
  cs.ds = r.real("run", "ds", cs.ds);
  cs.ds_min = r.real("run", "ds_min", cs.ds_min);
  cs.ds_max = r.real("run", "ds_max", cs.ds_max);
  cs.max_steps = static_cast<int>(r.integer("run", "max_steps", cs.max_steps));
  cs.max_halvings = static_cast<int>(r.integer("run", "max_halvings", cs.max_halvings));
  cs.eta_max = r.real("run", "eta_max", cs.eta_max);
  cs.depth_min = r.real("run", "depth_min", cs.depth_min);
  cs.kappa_max = r.real("run", "kappa_max", cs.kappa_max);
  if (cs.max_halvings < 0 || cs.max_halvings > 60) throw ConfigError("run.max_halvings must be between 0 and 60");
  if (cs.max_steps < 1) throw ConfigError("run.max_steps must be >= 1");

  c.out = resolve(base_dir, r.str("run", "out", "out"));
  const long long seed = r.integer("run", "seed", 0);
  if (seed < 0) throw ConfigError("run.seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  const long long jobs = r.integer("run", "jobs", 1);
  if (jobs < 1 || jobs > 1024) throw ConfigError("run.jobs must be between 1 and 1024");
  c.jobs = static_cast<int>(jobs);
  if (r.has("run", "emit")) set_emit(c, r.str("run", "emit", ""));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

void apply_environment(RunConfig& cfg) {
  if (const char* out = std::getenv("STILLWATER_OUT"); out && *out) cfg.out = out;
  if (const char* t = std::getenv("STILLWATER_THREADS"); t && *t) {
    char* end = nullptr;
    const long n = std::strtol(t, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024) throw ConfigError("STILLWATER_THREADS must be an integer in [1, 1024]");
    cfg.jobs = static_cast<int>(n);
  }
}

void set_emit(RunConfig& cfg, const std::string& list) {
  cfg.emit_div = cfg.emit_curl = false;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    if (item == "div_u")
      cfg.emit_div = true;
    else if (item == "curl_u")
      cfg.emit_curl = true;
    else
      throw ConfigError("emit: unknown field '" + item + "' (expected div_u or curl_u)");
  }
}

}  // namespace stillwater
