#pragma once

// Energy-momentum by two routes: quadrature of the combined cocycle density
// against the KID boundary values, and the limit of the Michel flux through
// the level spheres of rho.

#include "tractormass/cocycle.hpp"
#include "tractormass/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <map>

namespace tractormass {

struct MassOptions {
  ExtractionOptions extraction;
  double multiple = 1.0;  // normalisation of the combined cocycle
};

struct EpsRow {
  double eps = 0.0;
  std::vector<double> values;  // one entry per KID solution V_0 .. V_n
};

struct MassReport {
  std::string route;
  int n = 3;
  std::string family;
  nlohmann::json params = nlohmann::json::object();
  double p0 = 0.0;
  Vec p;
  Vec err;  // (err p0, err p_1, ...)
  Convergence status = Convergence::converged;
  std::vector<EpsRow> eps_table;
  std::size_t node_count = 0;
  std::map<std::string, bool> checks;
  // tractor route: the combined density at every node
  std::vector<double> aspect;
  std::vector<double> aspect_err;
  std::vector<Convergence> node_status;

  Vec P() const {
    Vec v(n + 1);
    v(0) = p0;
    v.tail(n) = p;
    return v;
  }
};

inline nlohmann::json to_json(const MassReport& r) {
  nlohmann::json j;
  j["route"] = r.route;
  j["n"] = r.n;
  j["family"] = r.family;
  j["params"] = r.params;
  j["p0"] = r.p0;
  j["p"] = std::vector<double>(r.p.data(), r.p.data() + r.p.size());
  j["err"] = std::vector<double>(r.err.data(), r.err.data() + r.err.size());
  j["status"] = to_string(r.status);
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : r.eps_table) table.push_back({{"eps", row.eps}, {"values", row.values}});
  j["eps_table"] = table;
  j["node_count"] = r.node_count;
  j["checks"] = r.checks;
  return j;
}

inline nlohmann::json default_params(const MetricField& h) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : h.params) j[k] = v;
  return j;
}

namespace detail {
inline MassReport report_skeleton(const std::string& route, const MetricField& h,
                                  const QuadratureRule& quad) {
  MassReport r;
  r.route = route;
  r.n = h.dim;
  r.family = h.family;
  r.params = default_params(h);
  r.node_count = quad.size();
  r.p = Vec::Zero(h.dim);
  r.err = Vec::Zero(h.dim + 1);
  return r;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Tractor route.

inline MassReport tractor_mass(const MetricField& g, const MetricField& h,
                               const QuadratureRule& quad, const MassOptions& opt = {}) {
  const int n = g.dim;
  if (quad.sphere_dim != n - 1) throw DomainError("quadrature dimension does not match n - 1");
  const auto rho = adapted_rho(n);
  MassReport r = detail::report_skeleton("tractor", h, quad);
  const auto eps = opt.extraction.schedule.values();
  for (double e : eps) r.eps_table.push_back({e, std::vector<double>(n + 1, 0.0)});
  bool trace_free = true;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Vec& w = quad.nodes[q];
    const AsymptoticData d = extract_asymptotics(g, h, rho, w, opt.extraction);
    const CocycleDensity c = combined_c_density(d, opt.multiple);
    const double wt = quad.weights[q];
    r.p0 += wt * c.value;
    r.p += wt * c.value * w;
    r.err(0) += std::abs(wt) * c.err;
    r.err.tail(n) += std::abs(wt) * c.err * w.cwiseAbs();
    r.aspect.push_back(c.value);
    r.aspect_err.push_back(c.err);
    r.node_status.push_back(d.status);
    r.status = worst(r.status, d.status);
    trace_free = trace_free && std::abs(d.mu0_inf.trace()) <= 3.0 * n * d.err_mu0 + 1e-12;
    for (std::size_t k = 0; k < eps.size(); ++k) {
      const double ck =
          opt.multiple * (d.mu0_nn_samples[k] - ((n * n - 1.0) / n) * d.mu_samples[k]);
      r.eps_table[k].values[0] += wt * ck;
      for (int i = 0; i < n; ++i) r.eps_table[k].values[i + 1] += wt * ck * w(i);
    }
  }
  r.checks["extraction_converged"] = r.status == Convergence::converged;
  r.checks["mu0_trace_free"] = trace_free;
  return r;
}

// ---------------------------------------------------------------------------
// Michel route.

enum class MichelForm { decomposed, undecomposed };

/// Pointwise data shared by all KID solutions at x.
struct MichelPoint {
  Mat ginv;
  Mat lambda;
  std::vector<Mat> nabla_lambda;  // nabla_lambda[k](i, j) = nabla_k lambda_ij
  double tr = 0.0;
  Vec dtr;                        // d_a tr lambda
  Vec div;                        // g^ik nabla_k lambda_ia
};

inline MichelPoint michel_point(const MetricField& g, const MetricField& h, const Vec& x) {
  const int n = g.dim;
  MichelPoint m;
  m.ginv = inverse_metric(g.eval(x));
  const auto [lam, dlam] = metric_difference_jet(g, h, x);
  m.lambda = lam;
  const Christoffel G = christoffels(g, x);
  m.nabla_lambda.assign(n, Mat::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    Mat t = dlam[k];
    for (int l = 0; l < n; ++l) {
      t -= G[l].row(k).transpose() * lam.row(l) + lam.col(l) * G[l].row(k);
    }
    m.nabla_lambda[k] = t;
  }
  m.tr = m.ginv.cwiseProduct(lam).sum();
  m.dtr = Vec::Zero(n);
  m.div = Vec::Zero(n);
  for (int a = 0; a < n; ++a) m.dtr(a) = m.ginv.cwiseProduct(m.nabla_lambda[a]).sum();
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) m.div(a) += m.ginv(i, k) * m.nabla_lambda[k](i, a);
  return m;
}

inline Vec michel_integrand(const MichelPoint& m, double V, const Vec& dV,
                            MichelForm form = MichelForm::decomposed) {
  const auto n = static_cast<double>(m.lambda.rows());
  const Vec up = m.ginv * dV;
  if (form == MichelForm::undecomposed) {
    return V * (m.div - m.dtr) - m.lambda * up + m.tr * dV;
  }
  // lambda0 = lambda - (tr / n) g; nabla g = 0
  const Vec div0 = m.div - m.dtr / n;
  const Vec l0up = m.lambda * up - (m.tr / n) * dV;
  return (V * div0 - l0up) + ((n - 1.0) / n) * (m.tr * dV - V * m.dtr);
}

/// V (nabla^i lambda_ia - nabla_a tr lambda) - lambda_ia nabla^i V + tr lambda nabla_a V.
inline Vec michel_integrand(const MetricField& g, const MetricField& h, const KIDSolution& V,
                            const Vec& x, MichelForm form = MichelForm::decomposed) {
  return michel_integrand(michel_point(g, h, x), V.eval(x), V.grad(x), form);
}

/// Flux of the Michel vector field through the level sphere rho = eps for each
/// KID solution, with the unit conormal along d rho.
inline std::vector<double> michel_flux(const MetricField& g, const MetricField& h,
                                       const QuadratureRule& quad, double eps,
                                       MichelForm form = MichelForm::decomposed) {
  const int n = g.dim;
  const auto kids = kid_basis(n);
  const auto rho = adapted_rho(n);
  const double r = canonical_radius(eps);
  const double area = std::pow(2.0 * r / (1.0 - r * r), n - 1);
  std::vector<double> flux(n + 1, 0.0);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Vec x = r * quad.nodes[q];
    const MichelPoint m = michel_point(g, h, x);
    const Vec drho = rho.grad(x);
    const Vec nu_up = m.ginv * drho / std::sqrt(drho.dot(m.ginv * drho));
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const Vec M = michel_integrand(m, kids[k].eval(x), kids[k].grad(x), form);
      flux[k] += quad.weights[q] * area * M.dot(nu_up);
    }
  }
  return flux;
}

inline MassReport michel_mass(const MetricField& g, const MetricField& h,
                              const QuadratureRule& quad, const MassOptions& opt = {}) {
  const int n = g.dim;
  if (quad.sphere_dim != n - 1) throw DomainError("quadrature dimension does not match n - 1");
  const EpsilonSchedule& s = opt.extraction.schedule;
  s.validate();
  MassReport r = detail::report_skeleton("michel", h, quad);
  for (double e : s.values()) r.eps_table.push_back({e, michel_flux(g, h, quad, e)});
  Vec P(n + 1);
  for (int k = 0; k <= n; ++k) {
    std::vector<double> f;
    for (const auto& row : r.eps_table) f.push_back(row.values[k]);
    const Extrapolation ex = richardson(f, s.ratio, s.stages, opt.extraction.tol);
    P(k) = ex.value;
    r.err(k) = ex.err;
    r.status = worst(r.status, ex.status);
  }
  r.p0 = P(0);
  r.p = P.tail(n);
  r.checks["flux_converged"] = r.status == Convergence::converged;
  return r;
}

// ---------------------------------------------------------------------------

struct RouteComparison {
  Vec rel;  // componentwise over (p0, p)
  double max_rel = 0.0;
  double tol = 1e-3;
  bool pass = false;
  bool conclusive = true;
};

/// |P_t - P_m| / max(|P_t|_inf, |P_m|_inf, 1e-8), componentwise.
inline RouteComparison compare_routes(const MassReport& t, const MassReport& m, double tol = 1e-3,
                                      double floor = 1e-8) {
  RouteComparison c;
  c.tol = tol;
  const Vec a = t.P(), b = m.P();
  const double den =
      std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), floor});
  c.rel = (a - b).cwiseAbs() / den;
  c.max_rel = c.rel.maxCoeff();
  c.conclusive = t.status == Convergence::converged && m.status == Convergence::converged;
  c.pass = c.max_rel < tol;
  return c;
}

inline nlohmann::json to_json(const RouteComparison& c) {
  return {{"rel", std::vector<double>(c.rel.data(), c.rel.data() + c.rel.size())},
          {"max_rel", c.max_rel},
          {"tol", c.tol},
          {"pass", c.pass},
          {"conclusive", c.conclusive}};
}

}  // namespace tractormass
