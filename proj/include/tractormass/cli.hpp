#pragma once

// Run configuration and the verify / mass / aspect commands. Argument parsing
// lives in tools/tmass.cpp; everything here is callable from tests.

#include "tractormass/families.hpp"
#include "tractormass/mass.hpp"
#include "tractormass/tractor.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace tractormass {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInconclusive = 2, kExitConfig = 64 };

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : Error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  std::string command = "mass";
  int dim = 3;
  std::string family = "hyperbolic";
  std::map<std::string, std::string> params;
  std::string chi_file;
  std::string route = "both";
  int level = 3;
  EpsilonSchedule schedule;
  double tol = 1e-3;          // cross-route relative tolerance
  double extract_tol = 1e-6;  // Richardson convergence tolerance
  std::string out;            // empty: stdout
  std::string csv;            // optional aspect CSV for `mass`
  std::uint64_t seed = 20240601;

  void validate() const {
    if (command != "verify" && command != "mass" && command != "aspect") {
      throw ConfigError("command", "expected verify | mass | aspect");
    }
    if (dim < kMinDim || dim > kMaxDim) throw ConfigError("dim", "must lie in [3, 6]");
    static const std::vector<std::string> families{"hyperbolic", "schwarzschild-ads",
                                                   "aspect-perturbation", "custom"};
    if (std::find(families.begin(), families.end(), family) == families.end()) {
      throw ConfigError("family", "expected hyperbolic | schwarzschild-ads | "
                                  "aspect-perturbation | custom");
    }
    if (route != "tractor" && route != "michel" && route != "both") {
      throw ConfigError("route", "expected tractor | michel | both");
    }
    if (level < 1 || level > 12) throw ConfigError("level", "must lie in [1, 12]");
    if (!(tol > 0.0)) throw ConfigError("tol", "must be positive");
    if (!(extract_tol > 0.0)) throw ConfigError("extract-tol", "must be positive");
    try {
      schedule.validate();
    } catch (const DomainError& e) {
      throw ConfigError("schedule", e.what());
    }
  }
};

// ---------------------------------------------------------------------------
// Parsing helpers.

namespace detail {
inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& field, const std::string& v) {
  std::istringstream is(v);
  T x{};
  if (!(is >> x) || !(is >> std::ws).eof()) throw ConfigError(field, "cannot parse '" + v + "'");
  return x;
}
}  // namespace detail

/// Set one configuration key; keys match the long flag names.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_number;
  if (key == "command") c.command = value;
  else if (key == "dim") c.dim = parse_number<int>(key, value);
  else if (key == "family") c.family = value;
  else if (key == "param") {
    const auto eq = value.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("param", "expected key=value");
    c.params[detail::trim(value.substr(0, eq))] = detail::trim(value.substr(eq + 1));
  } else if (key == "chi") c.chi_file = value;
  else if (key == "route") c.route = value;
  else if (key == "level") c.level = parse_number<int>(key, value);
  else if (key == "eps0") c.schedule.eps0 = parse_number<double>(key, value);
  else if (key == "ratio") c.schedule.ratio = parse_number<double>(key, value);
  else if (key == "count") c.schedule.count = parse_number<int>(key, value);
  else if (key == "stages") c.schedule.stages = parse_number<int>(key, value);
  else if (key == "tol") c.tol = parse_number<double>(key, value);
  else if (key == "extract-tol") c.extract_tol = parse_number<double>(key, value);
  else if (key == "out") c.out = value;
  else if (key == "csv") c.csv = value;
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else throw ConfigError(key, "unknown configuration key");
}

/// Flat `key = value` lines; `#` starts a comment; `param` may repeat.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config", path + ":" + std::to_string(no) + ": expected key = value");
    }
    kv.emplace_back(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return kv;
}

inline SphericalAspect load_chi(const RunConfig& c) {
  if (c.chi_file.empty()) return SphericalAspect::constant(c.dim, 1.0);
  std::ifstream in(c.chi_file);
  if (!in) throw ConfigError("chi", "cannot open '" + c.chi_file + "'");
  try {
    return SphericalAspect::from_json(c.dim, nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("chi", e.what());
  } catch (const DomainError& e) {
    throw ConfigError("chi", e.what());
  }
}

namespace detail {
inline double param_double(const RunConfig& c, const std::string& k, double fallback) {
  const auto it = c.params.find(k);
  return it == c.params.end() ? fallback : parse_number<double>("param " + k, it->second);
}

inline MetricField build_piece(const RunConfig& c, const std::string& name) {
  if (name == "hyperbolic") return hyperbolic_metric(c.dim);
  if (name == "schwarzschild-ads") return schwarzschild_ads(c.dim, param_double(c, "m", 0.1));
  if (name == "aspect-perturbation") {
    const auto pit = c.params.find("profile");
    const AspectProfile profile = parse_profile(pit == c.params.end() ? "trace" : pit->second);
    std::optional<int> decay;
    if (c.params.count("decay")) decay = parse_number<int>("param decay", c.params.at("decay"));
    return aspect_perturbation(c.dim, load_chi(c), profile, decay);
  }
  throw ConfigError("family", "unknown piece '" + name + "'");
}
}  // namespace detail

/// The metric h compared against the hyperbolic background.
inline MetricField build_metric(const RunConfig& c) {
  static const std::vector<std::string> known{"m", "profile", "decay", "pieces"};
  for (const auto& [k, v] : c.params) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError("param", "unknown parameter '" + k + "'");
    }
  }
  try {
    if (c.family != "custom") return detail::build_piece(c, c.family);
    const auto it = c.params.find("pieces");
    if (it == c.params.end()) throw ConfigError("param", "custom family needs pieces=a,b,...");
    std::optional<MetricField> sum;
    std::stringstream ss(it->second);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      MetricField h = detail::build_piece(c, detail::trim(piece));
      sum = sum ? superpose(*sum, h) : h;
    }
    if (!sum) throw ConfigError("param", "pieces is empty");
    sum->family = "custom";
    return *sum;
  } catch (const DomainError& e) {
    throw ConfigError("family", e.what());
  }
}

inline nlohmann::json config_params(const RunConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : c.params) j[k] = v;
  if (c.family == "aspect-perturbation" || c.family == "custom") {
    j["chi"] = load_chi(c).to_json();
  }
  return j;
}

inline MassOptions mass_options(const RunConfig& c) {
  MassOptions o;
  o.extraction.schedule = c.schedule;
  o.extraction.tol = c.extract_tol;
  return o;
}

// ---------------------------------------------------------------------------
// Output.

inline void write_text(const RunConfig& c, const std::string& path, const std::string& text,
                       std::ostream& stdout_stream) {
  if (path.empty() || path == "-") {
    stdout_stream << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("out", "cannot write '" + path + "'");
  f << text;
  (void)c;
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string aspect_csv(const QuadratureRule& q, const MassReport& t) {
  const int n = q.sphere_dim + 1;
  std::string s = "node,weight";
  for (int i = 1; i <= n; ++i) s += ",omega_" + std::to_string(i);
  s += ",aspect,err\n";
  for (std::size_t k = 0; k < q.size(); ++k) {
    s += std::to_string(k) + "," + fmt17(q.weights[k]);
    for (int i = 0; i < n; ++i) s += "," + fmt17(q.nodes[k](i));
    s += "," + fmt17(t.aspect[k]) + "," + fmt17(t.aspect_err[k]) + "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Check bookkeeping.

enum class CheckStatus { pass, fail, inconclusive };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double value = 0.0;
  double tol = 0.0;
  std::string detail;
};

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "fail";
}

inline CheckResult bound_check(std::string name, double value, double tol) {
  const bool ok = std::isfinite(value) && value <= tol;
  return {std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, value, tol, ""};
}

inline int exit_code(const std::vector<CheckResult>& checks) {
  bool inconclusive = false;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::fail) return kExitFail;
    inconclusive = inconclusive || c.status == CheckStatus::inconclusive;
  }
  return inconclusive ? kExitInconclusive : kExitPass;
}

inline nlohmann::json to_json(const CheckResult& c) {
  nlohmann::json j{{"name", c.name}, {"status", to_string(c.status)}, {"tol", c.tol}};
  j["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

inline CheckResult equivalence_check(const MetricField& g, const MetricField& h) {
  const EquivalenceResult e = check_equivalence(g, h);
  CheckResult c{"equivalence_order", CheckStatus::pass, e.order, g.dim - 0.1, ""};
  if (e.inconclusive) {
    c.status = CheckStatus::inconclusive;
    c.detail = "non-monotone residuals";
  } else if (!e.pass) {
    c.status = CheckStatus::fail;
    c.detail = "rho^2 (h - g) decays more slowly than rho^n";
  }
  return c;
}

// ---------------------------------------------------------------------------
// Random inputs for the verification suite.

namespace detail {
inline Vec random_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = N(rng);
  return v.normalized();
}

inline Mat random_symmetric(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = U(rng);
  return m;
}

/// A trace-free (for any conformally flat metric) quadratic field A + B(x).
inline Sym2Field random_trace_free_field(std::mt19937_64& rng, int n) {
  Mat A = random_symmetric(rng, n);
  A -= (A.trace() / n) * Mat::Identity(n, n);
  std::vector<Mat> B;
  for (int k = 0; k < n; ++k) {
    Mat b = random_symmetric(rng, n);
    b -= (b.trace() / n) * Mat::Identity(n, n);
    B.push_back(b);
  }
  return {[A, B](const Vec& x) -> Mat {
    Mat m = A;
    for (std::size_t k = 0; k < B.size(); ++k) m += x(k) * x(k) * B[k];
    return m;
  }};
}
}  // namespace detail

struct VerifyResult {
  std::vector<CheckResult> checks;
  nlohmann::json nodes = nlohmann::json::array();
};

/// The invariant suite for the pair (hyperbolic g, h).
inline VerifyResult run_verify(const RunConfig& c, const MetricField& h) {
  const int n = c.dim;
  const MetricField g = hyperbolic_metric(n);
  const auto rho = adapted_rho(n);
  std::mt19937_64 rng(c.seed);
  VerifyResult out;
  auto& checks = out.checks;

  checks.push_back(equivalence_check(g, h));
  const bool class_ok = checks.back().status == CheckStatus::pass;

  // extraction and cocycle algebra at random directions
  ExtractionOptions opt;
  opt.schedule = c.schedule;
  opt.tol = c.extract_tol;
  const int ndir = 20;
  std::vector<Vec> dirs;
  for (int i = 0; i < ndir; ++i) dirs.push_back(detail::random_direction(rng, n));
  Convergence worst_status = Convergence::converged;
  double trace_excess = 0.0;
  std::vector<AsymptoticData> gh, hg;
  for (const Vec& w : dirs) {
    gh.push_back(extract_asymptotics(g, h, rho, w, opt));
    hg.push_back(extract_asymptotics(h, g, rho, w, opt));
    const auto& d = gh.back();
    worst_status = worst(worst_status, worst(d.status, hg.back().status));
    trace_excess = std::max(
        trace_excess, std::abs(d.mu0_inf.trace()) - (3.0 * n * d.err_mu0 + 1e-12));
    out.nodes.push_back({{"omega", std::vector<double>(w.data(), w.data() + n)},
                         {"status", to_string(d.status)},
                         {"mu_inf", d.mu_inf},
                         {"err", d.err_mu}});
  }
  {
    CheckResult ex{"extraction", CheckStatus::pass, 0.0, c.extract_tol, to_string(worst_status)};
    if (worst_status == Convergence::divergent) ex.status = CheckStatus::fail;
    if (worst_status == Convergence::inconclusive) ex.status = CheckStatus::inconclusive;
    checks.push_back(ex);
  }
  const bool extraction_ok = worst_status == Convergence::converged && class_ok;
  const auto gated = [&](CheckResult r) {
    // cocycle identities are only meaningful for converged extractions
    if (!extraction_ok && r.status == CheckStatus::fail) r.status = CheckStatus::inconclusive;
    return r;
  };
  checks.push_back(gated(bound_check("mu0_trace_free", std::max(trace_excess, 0.0), 0.0)));

  // antisymmetry c(g, h) + c(h, g) = 0, in units of the reported error
  double anti = 0.0;
  for (int i = 0; i < ndir; ++i) {
    const CocycleDensity a1 = c1_density(gh[i]), b1 = c1_density(hg[i]);
    const CocycleDensity a2 = c2_density(gh[i]), b2 = c2_density(hg[i]);
    const CocycleDensity a = combined_c_density(gh[i]), b = combined_c_density(hg[i]);
    const auto ratio = [](const CocycleDensity& x, const CocycleDensity& y) {
      return std::abs(x.value + y.value) / (5.0 * (x.err + y.err) + 1e-300);
    };
    anti = std::max({anti, ratio(a1, b1), ratio(a2, b2), ratio(a, b)});
  }
  checks.push_back(gated(bound_check("cocycle_antisymmetry", anti, 1.0)));

  // additivity on (g, h, k) with k = h plus a fixed normal perturbation
  {
    const MetricField extra = aspect_perturbation(
        n, SphericalAspect(n, {{0, 0, 0.05}, {1, 1, 0.02}}), AspectProfile::normal);
    const MetricField k = superpose(h.perturbation ? h : hyperbolic_metric(n), extra);
    double add = 0.0;
    for (int i = 0; i < ndir; ++i) {
      const AsymptoticData gk = extract_asymptotics(g, k, rho, dirs[i], opt);
      const AsymptoticData hk = extract_asymptotics(h, k, rho, dirs[i], opt);
      const auto res = [&](auto f) {
        const CocycleDensity x = f(gk), y = f(gh[i]), z = f(hk);
        return std::abs(x.value - y.value - z.value) / (5.0 * (x.err + y.err + z.err) + 1e-300);
      };
      add = std::max({add, res([](const AsymptoticData& d) { return c1_density(d); }),
                      res([](const AsymptoticData& d) { return c2_density(d); }),
                      res([](const AsymptoticData& d) { return combined_c_density(d); })});
    }
    checks.push_back(gated(bound_check("cocycle_additivity", add, 1.0)));
  }

  // alignment invariance, pure matrix arithmetic
  {
    double comb = 0.0, c1max = 0.0, c2max = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Mat mu = detail::random_symmetric(rng, n);
      const MatrixDensities before = densities_from_mu(mu);
      const MatrixDensities after = densities_from_mu(alignment_transform({mu, 0, n}));
      comb = std::max(comb, std::abs(before.combined - after.combined));
      c1max = std::max(c1max, std::abs(before.c1 - after.c1));
      c2max = std::max(c2max, std::abs(before.c2 - after.c2));
    }
    checks.push_back(bound_check("alignment_invariance", comb, 1e-12));
    checks.push_back({"alignment_c1_not_invariant",
                      c1max > 1e-6 ? CheckStatus::pass : CheckStatus::fail, c1max, 1e-6, ""});
    checks.push_back({"alignment_c2_not_invariant",
                      c2max > 1e-6 ? CheckStatus::pass : CheckStatus::fail, c2max, 1e-6, ""});
  }

  // tractor identities
  {
    const ScaleRef ref = reference_scale(n), hyp = hyperbolic_scale(n);
    double norm = 0.0, par = 0.0, bdry = 0.0;
    for (int i = 0; i < 5; ++i) {
      std::uniform_real_distribution<double> R(0.5, 0.95);
      const Vec x = R(rng) * detail::random_direction(rng, n);
      const TractorTriple I = scale_tractor(ref, x);
      norm = std::max(norm, std::abs(tractor_pairing(I, I) - 1.0));
      for (int a = 0; a < n; ++a) {
        const TractorTriple d =
            tractor_derivative([&ref](const Vec& y) { return scale_tractor(ref, y); }, x, a);
        par = std::max({par, std::abs(d.top), d.middle.cwiseAbs().maxCoeff(), std::abs(d.bottom)});
      }
      const Vec w = detail::random_direction(rng, n);
      const TractorTriple N = normal_tractor(ref, w);
      const TractorTriple Ib = scale_tractor(ref, w, 1e-3);
      bdry = std::max({bdry, std::abs(Ib.top - N.top), (Ib.middle - N.middle).cwiseAbs().maxCoeff(),
                       std::abs(Ib.bottom - N.bottom)});
    }
    checks.push_back(bound_check("scale_tractor_norm", norm, 1e-8));
    checks.push_back(bound_check("scale_tractor_parallel", par, 1e-5));
    checks.push_back(bound_check("scale_tractor_boundary_normal", bdry, 1e-6));
    double lemma = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Sym2Field phi = detail::random_trace_free_field(rng, n);
      std::uniform_real_distribution<double> R(0.3, 0.8);
      const Vec x = R(rng) * detail::random_direction(rng, n);
      lemma = std::max(lemma, splitting_residual(hyp, phi, x).max());
    }
    checks.push_back(bound_check("splitting_normalisation", lemma, 1e-4));
  }

  // KID residuals
  {
    double kid = 0.0;
    std::uniform_real_distribution<double> R(0.0, 0.9);
    for (int i = 0; i < 50; ++i) {
      const Vec x = R(rng) * detail::random_direction(rng, n);
      for (const auto& V : kid_basis(n)) {
        kid = std::max(kid, kid_residual(V, g, x).cwiseAbs().maxCoeff());
      }
    }
    checks.push_back(bound_check("kid_residual", kid, 1e-6));
  }
  return out;
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline int cmd_verify(const RunConfig& c, std::ostream& os = std::cout) {
  c.validate();
  const MetricField h = build_metric(c);
  const VerifyResult v = run_verify(c, h);
  const int code = exit_code(v.checks);
  nlohmann::json j;
  j["command"] = "verify";
  j["n"] = c.dim;
  j["family"] = c.family;
  j["params"] = config_params(c);
  j["seed"] = c.seed;
  j["checks"] = nlohmann::json::array();
  for (const auto& ch : v.checks) j["checks"].push_back(to_json(ch));
  j["nodes"] = v.nodes;
  j["result"] = code == kExitPass ? "pass" : code == kExitFail ? "fail" : "inconclusive";
  write_text(c, c.out, dump(j), os);
  return code;
}

inline int cmd_mass(const RunConfig& c, std::ostream& os = std::cout) {
  c.validate();
  const int n = c.dim;
  const MetricField g = hyperbolic_metric(n);
  const MetricField h = build_metric(c);
  const QuadratureRule q = sphere_quadrature(n - 1, c.level);
  const MassOptions opt = mass_options(c);
  std::vector<CheckResult> checks{equivalence_check(g, h)};
  nlohmann::json j;
  j["command"] = "mass";
  j["reports"] = nlohmann::json::array();
  std::optional<MassReport> t, m;
  const auto status_check = [](const std::string& name, Convergence s) {
    CheckResult r{name, CheckStatus::pass, 0.0, 0.0, to_string(s)};
    if (s == Convergence::divergent) r.status = CheckStatus::fail;
    if (s == Convergence::inconclusive) r.status = CheckStatus::inconclusive;
    return r;
  };
  if (c.route != "michel" || !c.csv.empty()) t = tractor_mass(g, h, q, opt);
  if (c.route != "tractor") m = michel_mass(g, h, q, opt);
  for (auto* r : {&t, &m}) {
    if (!*r) continue;
    if (r == &t && c.route == "michel") continue;
    (*r)->params = config_params(c);
    (*r)->family = c.family;
    checks.push_back(status_check((*r)->route + "_convergence", (*r)->status));
    j["reports"].push_back(to_json(**r));
  }
  if (t && m) {
    const RouteComparison cmp = compare_routes(*t, *m, c.tol);
    j["comparison"] = to_json(cmp);
    CheckResult r = bound_check("route_agreement", cmp.max_rel, c.tol);
    if (!cmp.conclusive && r.status == CheckStatus::fail) r.status = CheckStatus::inconclusive;
    checks.push_back(r);
  } else {
    j["comparison"] = nullptr;
  }
  j["checks"] = nlohmann::json::array();
  for (const auto& ch : checks) j["checks"].push_back(to_json(ch));
  const int code = exit_code(checks);
  j["result"] = code == kExitPass ? "pass" : code == kExitFail ? "fail" : "inconclusive";
  if (!c.csv.empty()) write_text(c, c.csv, aspect_csv(q, *t), os);
  write_text(c, c.out, dump(j), os);
  return code;
}

inline int cmd_aspect(const RunConfig& c, std::ostream& os = std::cout) {
  c.validate();
  const int n = c.dim;
  const MetricField g = hyperbolic_metric(n);
  const MetricField h = build_metric(c);
  const QuadratureRule q = sphere_quadrature(n - 1, c.level);
  const MassReport t = tractor_mass(g, h, q, mass_options(c));
  write_text(c, c.out, aspect_csv(q, t), os);
  std::vector<CheckResult> checks{equivalence_check(g, h)};
  CheckResult s{"extraction", CheckStatus::pass, 0.0, 0.0, to_string(t.status)};
  if (t.status == Convergence::divergent) s.status = CheckStatus::fail;
  if (t.status == Convergence::inconclusive) s.status = CheckStatus::inconclusive;
  checks.push_back(s);
  return exit_code(checks);
}

/// Dispatch with exception-to-exit-code mapping; messages go to `err`.
inline int run_command(const RunConfig& c, std::ostream& os = std::cout,
                       std::ostream& err = std::cerr) {
  try {
    if (c.command == "verify") return cmd_verify(c, os);
    if (c.command == "mass") return cmd_mass(c, os);
    if (c.command == "aspect") return cmd_aspect(c, os);
    c.validate();
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace tractormass
