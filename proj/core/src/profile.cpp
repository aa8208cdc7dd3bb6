#include "frontlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

double envelope_derivative(const KppEnvelope& g, double u, double side) {
  if (g.g_prime) return g.g_prime(u);
  const double eps = 1e-5;
  const double f1 = (g.g(u + side * eps) - g.g(u)) / (side * eps);
  const double f2 = (g.g(u + side * eps / 2) - g.g(u)) / (side * eps / 2);
  return 2.0 * f2 - f1;
}

// g(U)/U with the U -> 0 limit g'(0) = 1 substituted below resolution.
inline double g_ratio(const KppEnvelope& g, double logU) {
  if (logU < -32.0) return 1.0;
  const double U = std::exp(logU);
  return g.g(U) / U;
}

struct RunStorage {
  double x0 = 0, h = 0;
  std::vector<double> U, Uprime, logU;
  std::size_t tail_begin = 0;
};

struct RunOutput {
  double lnA = 0;        // measured lim of ln(U) + gamma*x
  double end_w = 0;      // same quantity at the last node (residual probe)
  RunStorage store;
  bool hit_cap = false;
};

// Forward integration of U'' + cU' + g(U) = 0 from the unstable manifold
// of the saddle (1,0).  Chart 1 carries (U, V); once U < 0.6 the run
// switches to (l, r, w) = (ln U, -V/U, ln U + gamma x), whose fixed point
// r = gamma is forward-attracting, so the deep tail keeps full relative
// precision.  w converges to ln A with A = lim U e^{gamma x}.
RunOutput integrate_profile(const KppEnvelope& g, double gamma, double c,
                            double s, const ProfileOptions& opt,
                            double x_start, bool store) {
  RunOutput out;
  const double dx = opt.grid_h / opt.substeps;
  const double kappa = std::min(1.0, 1.0 / (gamma * gamma) - 1.0);
  const double logU_stop =
      std::max(-575.0, std::log(10.0) * -std::max(9.0, 4.7 / kappa));

  double x = x_start;
  double U = 1.0 - opt.delta1;
  double V = -s * opt.delta1;

  if (store) {
    out.store.x0 = x;
    out.store.h = opt.grid_h;
  }
  auto push = [&](double u, double v, double lu) {
    out.store.U.push_back(u);
    out.store.Uprime.push_back(v);
    out.store.logU.push_back(lu);
  };
  if (store) push(U, V, std::log(U));

  // chart 1
  auto rhs1 = [&](double u, double v, double& du, double& dv) {
    du = v;
    dv = -c * v - g.g(u);
  };
  auto rk4_1 = [&](double& u, double& v) {
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    rhs1(u, v, k1u, k1v);
    rhs1(u + 0.5 * dx * k1u, v + 0.5 * dx * k1v, k2u, k2v);
    rhs1(u + 0.5 * dx * k2u, v + 0.5 * dx * k2v, k3u, k3v);
    rhs1(u + dx * k3u, v + dx * k3v, k4u, k4v);
    u += dx / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += dx / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  };

  while (U > 0.6) {
    for (int j = 0; j < opt.substeps; ++j) rk4_1(U, V);
    x += opt.grid_h;
    if (store) push(U, V, std::log(U));
    if (x - x_start > opt.x_cap) {
      out.hit_cap = true;
      out.lnA = out.end_w = std::log(U) + gamma * x;
      return out;
    }
  }

  // chart 2
  if (store) out.store.tail_begin = out.store.U.size() - 1;
  double l = std::log(U);
  double r = -V / U;
  double w = l + gamma * x;

  auto rhs2 = [&](double l_, double r_, double& dl, double& dr, double& dw) {
    dl = -r_;
    dr = r_ * r_ - c * r_ + g_ratio(g, l_);
    dw = gamma - r_;
  };
  auto rk4_2 = [&](double& l_, double& r_, double& w_) {
    double a1, b1, c1, a2, b2, c2, a3, b3, c3, a4, b4, c4;
    rhs2(l_, r_, a1, b1, c1);
    rhs2(l_ + 0.5 * dx * a1, r_ + 0.5 * dx * b1, a2, b2, c2);
    rhs2(l_ + 0.5 * dx * a2, r_ + 0.5 * dx * b2, a3, b3, c3);
    rhs2(l_ + dx * a3, r_ + dx * b3, a4, b4, c4);
    l_ += dx / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
    r_ += dx / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);
    w_ += dx / 6.0 * (c1 + 2 * c2 + 2 * c3 + c4);
  };

  while (l > logU_stop || std::abs(r - gamma) > opt.r_tail_tol) {
    for (int j = 0; j < opt.substeps; ++j) rk4_2(l, r, w);
    x += opt.grid_h;
    if (store) {
      const double u = std::exp(l);  // may underflow to 0; logU keeps it
      push(u, -r * u, l);
    }
    if (x - x_start > opt.x_cap) {
      out.hit_cap = true;
      break;
    }
    if (!std::isfinite(r) || !std::isfinite(l))
      throw SolverFailure("profile integration lost finiteness");
  }
  out.lnA = w;
  out.end_w = w;
  return out;
}

}  // namespace

FrontProfile solve_profile(const KppEnvelope& g, double gamma,
                           const ProfileOptions& opt) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw std::domain_error("solve_profile: gamma must lie in (0,1)");
  const double c = gamma + 1.0 / gamma;
  const double g1 = envelope_derivative(g, 1.0, -1.0);
  if (!(g1 < -1e-8))
    throw SolverFailure(
        "solve_profile: envelope has a degenerate saddle at u=1 (g'(1) ~ 0); "
        "the unstable-manifold start is undefined");
  const double s = 0.5 * (-c + std::sqrt(c * c - 4.0 * g1));

  // pass 1 measures the normalization constant, pass 2 re-runs with the
  // start shifted so lim U e^{gamma x} = 1 lands on the stored grid.
  const RunOutput probe = integrate_profile(g, gamma, c, s, opt, 0.0, false);
  if (probe.hit_cap && std::abs(probe.lnA) > 1e3)
    throw SolverFailure("solve_profile: tail did not settle within x_cap");
  const RunOutput run = integrate_profile(g, gamma, c, s, opt,
                                          -probe.lnA / gamma, true);

  FrontProfile p;
  p.gamma = gamma;
  p.speed = c;
  p.h = opt.grid_h;
  p.envelope = g;

  // trim the flat saddle approach: grid starts once U <= 1 - 1e-8
  const auto& st = run.store;
  std::size_t i0 = 0;
  while (i0 + 1 < st.U.size() && st.U[i0] > 1.0 - 1e-8) ++i0;
  if (st.U.size() - i0 < 16)
    throw SolverFailure("solve_profile: degenerate profile grid");
  p.x0 = st.x0 + static_cast<double>(i0) * st.h;
  p.U.assign(st.U.begin() + i0, st.U.end());
  p.U_prime.assign(st.Uprime.begin() + i0, st.Uprime.end());
  p.log_U.assign(st.logU.begin() + i0, st.logU.end());
  p.tail_begin = st.tail_begin > i0 ? st.tail_begin - i0 : 0;
  p.normalization_residual = std::abs(std::expm1(run.end_w));
  return p;
}

SubSolutionMap build_sub_solution_map(std::shared_ptr<const FrontProfile> p) {
  SubSolutionMap m;
  m.profile = std::move(p);
  const auto& pr = *m.profile;
  const double gamma = pr.gamma;
  m.alpha = gamma * gamma;
  m.kappa = std::min(1.0, 1.0 / m.alpha - 1.0);

  // small-v amplitude anchored where U ~ 1e-6 (v^kappa still resolvable)
  std::size_t ia = pr.size() - 1;
  for (std::size_t i = pr.tail_begin; i < pr.size(); ++i)
    if (pr.log_U[i] < std::log(1e-6)) {
      ia = i;
      break;
    }
  const double xa = pr.x_at(ia);
  const double ya = std::expm1(pr.log_U[ia] + gamma * xa);  // y - 1
  m.c1 = ya / std::exp(-gamma * xa * m.kappa);

  // large-v tail exponent from the saddle eigenvalue at u = 1
  const double c = pr.speed;
  const double g1 = envelope_derivative(pr.envelope, 1.0, -1.0);
  const double s = 0.5 * (-c + std::sqrt(c * c - 4.0 * g1));
  m.gp = s / gamma;
  m.log_c2 = std::log1p(-pr.U.front()) + m.gp * gamma * pr.x_min();
  return m;
}

SubSolutionMap build_sub_solution_map(const KppEnvelope& g, double alpha,
                                      const ProfileOptions& opt) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("sub-solution map: alpha must lie in (0,1)");
  auto p = std::make_shared<FrontProfile>(
      solve_profile(g, std::sqrt(alpha), opt));
  return build_sub_solution_map(std::move(p));
}

namespace {

// cubic Hermite on the uniform grid
double hermite_U(const FrontProfile& p, double x) {
  double t = (x - p.x0) / p.h;
  if (t < 0.0) t = 0.0;
  auto i = static_cast<std::size_t>(t);
  if (i >= p.size() - 1) i = p.size() - 2;
  const double s = t - static_cast<double>(i);
  const double u0 = p.U[i], u1 = p.U[i + 1];
  const double m0 = p.U_prime[i] * p.h, m1 = p.U_prime[i + 1] * p.h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * u0 + (s3 - 2 * s2 + s) * m0 +
         (-2 * s3 + 3 * s2) * u1 + (s3 - s2) * m1;
}

double hermite_Uprime(const FrontProfile& p, double x) {
  double t = (x - p.x0) / p.h;
  if (t < 0.0) t = 0.0;
  auto i = static_cast<std::size_t>(t);
  if (i >= p.size() - 1) i = p.size() - 2;
  const double s = t - static_cast<double>(i);
  const double u0 = p.U_prime[i], u1 = p.U_prime[i + 1];
  // U'' = -cU' - g(U) is available exactly; Hermite on U' with it
  const double g0 = p.envelope.g(p.U[i]), g1v = p.envelope.g(p.U[i + 1]);
  const double m0 = (-p.speed * u0 - g0) * p.h;
  const double m1 = (-p.speed * u1 - g1v) * p.h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * u0 + (s3 - 2 * s2 + s) * m0 +
         (-2 * s3 + 3 * s2) * u1 + (s3 - s2) * m1;
}

}  // namespace

double eval_h_log(const SubSolutionMap& m, double log_v) {
  const auto& p = *m.profile;
  const double x = -log_v / p.gamma;
  if (x > p.x_max()) {
    const double v = std::exp(log_v);
    return v * (1.0 + m.c1 * std::exp(m.kappa * log_v));
  }
  if (x < p.x_min()) {
    return 1.0 - std::exp(m.log_c2 - m.gp * log_v);
  }
  return std::min(1.0, std::max(0.0, hermite_U(p, x)));
}

double eval_h(const SubSolutionMap& m, double v) {
  if (v < 0.0) throw std::domain_error("eval_h: v must be >= 0");
  if (v == 0.0) return 0.0;
  return eval_h_log(m, std::log(v));
}

double h_inverse(const SubSolutionMap& m, double w) {
  if (!(w >= 0.0) || !(w < 1.0))
    throw std::domain_error("h_inverse: w must lie in [0,1)");
  if (w == 0.0) return 0.0;
  double hi = 1.0;
  while (eval_h(m, hi) < w) {
    hi *= 2.0;
    if (hi > 1e300) throw SolverFailure("h_inverse: no bracketing v");
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (eval_h(m, mid) < w ? lo : hi) = mid;
    if (hi - lo <= 1e-14 * std::max(1.0, lo)) break;
  }
  return 0.5 * (lo + hi);
}

ProfileReport check_profile(const FrontProfile& p, const SubSolutionMap& m) {
  ProfileReport rep;
  const auto& g = p.envelope.g;
  const double c = p.speed, gamma = p.gamma, h = p.h;
  const std::size_t n = p.size();

  // (A.1a) residual: 6th-order central derivative of the stored U'
  for (std::size_t i = 3; i + 3 < n; ++i) {
    const double Upp =
        (-p.U_prime[i - 3] + 9 * p.U_prime[i - 2] - 45 * p.U_prime[i - 1] +
         45 * p.U_prime[i + 1] - 9 * p.U_prime[i + 2] + p.U_prime[i + 3]) /
        (60.0 * h);
    const double res = std::abs(Upp + c * p.U_prime[i] + g(p.U[i]));
    rep.max_ode_residual = std::max(rep.max_ode_residual, res);
  }

  // Lemma A.1 margins where both sides sit above double rounding
  rep.lemma_ok = true;
  rep.lemma_margin_min = 1e300;
  rep.lemma_neg_Uprime_min = 1e300;
  bool any = false;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (std::min(p.U[i], 1.0 - p.U[i]) <= 1e-9) continue;
    any = true;
    const double neg_up = -p.U_prime[i];
    const double margin = gamma * g(p.U[i]) - neg_up;
    rep.lemma_neg_Uprime_min = std::min(rep.lemma_neg_Uprime_min, neg_up);
    rep.lemma_margin_min = std::min(rep.lemma_margin_min, margin);
    if (!(neg_up > 0.0) || !(margin > 0.0)) rep.lemma_ok = false;
  }
  if (!any) rep.lemma_ok = false;

  // (2.5d) identity through the evaluation path, on an unaligned log grid
  {
    const double ds = 0.03;
    const double s_lo = std::max(-gamma * p.x_max() + 6 * ds, std::log(1e-8));
    const double s_hi = std::min(-gamma * p.x_min() - 6 * ds, std::log(1e8));
    const auto M = static_cast<std::size_t>((s_hi - s_lo) / ds);
    std::vector<double> phi(M), dphi(M);
    for (std::size_t j = 0; j < M; ++j) {
      const double sv = s_lo + static_cast<double>(j) * ds;
      phi[j] = eval_h_log(m, sv);
      dphi[j] = -hermite_Uprime(*m.profile, -sv / m.profile->gamma) /
                m.profile->gamma;
    }
    double hpp_max = -1e300, incr = 1e300, lev = 1e300;
    for (std::size_t j = 3; j + 3 < M; ++j) {
      const double ddphi =
          (-dphi[j - 3] + 9 * dphi[j - 2] - 45 * dphi[j - 1] +
           45 * dphi[j + 1] - 9 * dphi[j + 2] + dphi[j + 3]) /
          (60.0 * ds);
      const double res =
          std::abs(m.alpha * (ddphi - dphi[j]) - dphi[j] + g(phi[j]));
      rep.max_identity_residual = std::max(rep.max_identity_residual, res);
      const double sv = s_lo + static_cast<double>(j) * ds;
      const double v = std::exp(sv);
      hpp_max = std::max(hpp_max, (ddphi - dphi[j]) / (v * v));
      incr = std::min(incr, phi[j + 1] - phi[j]);
      lev = std::min(lev, v - phi[j]);
    }
    rep.h_concavity_max = hpp_max;
    rep.h_increasing_margin = incr;
    rep.h_le_v_margin = lev;
  }

  rep.h_prime_at_zero = eval_h(m, 1e-10) / 1e-10;
  rep.normalization_residual = p.normalization_residual;
  rep.pass = rep.max_ode_residual <= 1e-8 && rep.lemma_ok &&
             rep.normalization_residual <= 1e-4 &&
             std::abs(rep.h_prime_at_zero - 1.0) <= 1e-4 &&
             rep.max_identity_residual <= 1e-5 && rep.h_concavity_max < 0.0 &&
             rep.h_increasing_margin > 0.0 && rep.h_le_v_margin >= 0.0;
  return rep;
}

}  // namespace frontlab
