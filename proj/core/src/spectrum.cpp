#include "frontlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

// Symmetric finite-difference discretization of (B psi')' + (a - q'/2) psi
// on [-R,R] with zero boundary values; n interior nodes, h = 2R/(n+1).
// The a - q'/2 potential is the exact symmetrization of the q psi' psi
// term in the quadratic form (integration by parts, q Lipschitz).
struct Tridiag {
  std::vector<double> diag, off;
};

Tridiag assemble(const CoefficientField& f, double R, int n) {
  Tridiag T;
  const double h = 2.0 * R / (n + 1);
  T.diag.resize(n);
  T.off.resize(n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = -R + (i + 1) * h;
    const double Bl = f.B(x - 0.5 * h), Br = f.B(x + 0.5 * h);
    const double qp = (f.q(x + h) - f.q(x - h)) / (2.0 * h);
    T.diag[i] = -(Bl + Br) / (h * h) + f.a(x) - 0.5 * qp;
    if (i + 1 < n) T.off[i] = Br / (h * h);
  }
  return T;
}

// eigenvalues strictly below sigma, by the Sturm/LDL^T inertia count
int count_below(const Tridiag& T, double sigma) {
  const auto n = T.diag.size();
  int cnt = 0;
  double q = T.diag[0] - sigma;
  if (q < 0) ++cnt;
  for (std::size_t i = 1; i < n; ++i) {
    double denom = q;
    if (std::abs(denom) < 1e-300) denom = denom < 0 ? -1e-300 : 1e-300;
    q = T.diag[i] - sigma - T.off[i - 1] * T.off[i - 1] / denom;
    if (q < 0) ++cnt;
  }
  return cnt;
}

double top_eigenvalue(const Tridiag& T) {
  const auto n = static_cast<int>(T.diag.size());
  double lo = T.diag[0], hi = T.diag[0];
  for (int i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(T.off[i - 1]) : 0.0) +
                     (i + 1 < n ? std::abs(T.off[i]) : 0.0);
    lo = std::min(lo, T.diag[i] - r);
    hi = std::max(hi, T.diag[i] + r);
  }
  hi += 1.0;
  for (int it = 0; it < 120 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    (count_below(T, mid) == n ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double lambda0_raw(const CoefficientField& f, double R, int n) {
  return top_eigenvalue(assemble(f, R, n));
}

}  // namespace

SpectralBounds compute_lambda0(const CoefficientField& f, double R, int n) {
  if (n < 1000)
    throw std::invalid_argument("compute_lambda0: n >= 1000 required");
  if (!(R > 0.0)) throw std::invalid_argument("compute_lambda0: R > 0");

  SpectralBounds b;
  const double l_Rn = lambda0_raw(f, R, n);
  const double l_R2n = lambda0_raw(f, R, 2 * n);
  const double l_2R2n = lambda0_raw(f, 2 * R, 2 * n);
  const double l_2R4n = lambda0_raw(f, 2 * R, 4 * n);
  const double rich_R = (4.0 * l_R2n - l_Rn) / 3.0;
  const double rich_2R = (4.0 * l_2R4n - l_2R2n) / 3.0;

  b.lambda0 = rich_2R;
  b.truncation_radius = 2.0 * R;
  b.spread = std::abs(rich_2R - rich_R);
  b.accuracy_warning = b.spread > 1e-4;
  b.evidence = {{R, n, l_Rn, false},        {R, 2 * n, l_R2n, false},
                {2 * R, 2 * n, l_2R2n, false}, {2 * R, 4 * n, l_2R4n, false},
                {R, 2 * n, rich_R, true},   {2 * R, 4 * n, rich_2R, true}};
  return b;
}

double compute_lambda1(const CoefficientField& f, int n) {
  const double sab = std::sqrt(f.aB_minus);
  double lo = -200.0, hi = 200.0;
  if (f.kind == FieldKind::Random) {
    lo = f.window_lo;
    hi = f.window_hi;
  }
  const double h = (hi - lo) / (n - 1);
  double inf = 1e300;
  for (int i = 0; i < n; ++i) {
    const double x = lo + i * h;
    const double v = f.a(x) + sab * (sab - std::abs(f.q(x))) / f.B(x);
    inf = std::min(inf, v);
  }
  // Lipschitz padding for the whole expression
  const double lip =
      f.lipschitz * (1.0 + sab / f.B_minus +
                     sab * (sab + f.q_plus) / (f.B_minus * f.B_minus));
  return inf - lip * h / 2.0;
}

SpectralBounds compute_spectral_bounds(const CoefficientField& f, double R,
                                       int n) {
  SpectralBounds b = compute_lambda0(f, R, n);
  b.lambda1 = compute_lambda1(f);
  return b;
}

double Eigenfunction::phi_at(std::size_t i) const {
  return std::exp(log_phi[i]);
}

double Eigenfunction::log_phi_interp(double x, const CoefficientField& f) const {
  double t = (x - xl) / h;
  if (t < 0.0) t = 0.0;
  auto i = static_cast<std::size_t>(t);
  if (i >= size() - 1) i = size() - 2;
  const double s = t - static_cast<double>(i);
  const double y0 = log_phi[i], y1 = log_phi[i + 1];
  // d log phi / dx = psi / B at the nodes
  const double m0 = psi[i] / f.B(x_at(i)) * h;
  const double m1 = psi[i + 1] / f.B(x_at(i + 1)) * h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
}

Eigenfunction solve_phi_window(const CoefficientField& f, double lambda,
                               double xl, double xr, int n) {
  if (!(xl < 0.0) || !(xr > 0.0))
    throw std::invalid_argument("solve_phi: window must contain x = 0");
  if (n < 10) throw std::invalid_argument("solve_phi: n too small");

  // snap the grid so a node lands exactly on x = 0
  double h = (xr - xl) / n;
  const auto k0 = static_cast<long>(std::llround(-xl / h));
  xl = -static_cast<double>(k0) * h;
  xr = xl + n * h;

  Eigenfunction e;
  e.lambda = lambda;
  e.xl = xl;
  e.xr = xr;
  e.h = h;
  e.psi.assign(n + 1, 0.0);
  e.log_phi.assign(n + 1, 0.0);

  const double disc =
      f.q(xr) * f.q(xr) + 4.0 * f.B(xr) * (lambda - f.a(xr));
  if (disc <= 0.0)
    throw SpectralInfeasibility(
        "solve_phi: no real decaying branch at the right end "
        "(lambda at or below the local spectrum)");
  const double psi_R = 0.5 * (-f.q(xr) - std::sqrt(disc));

  const double psi_cap =
      10.0 * (std::sqrt(f.B_plus * (std::abs(lambda) + f.a_plus)) + f.q_plus +
              1.0);

  // leftward Riccati sweep; log phi integrated alongside (both RK4)
  auto rhs = [&](double x, double psi, double& dpsi, double& dlog) {
    const double B = f.B(x);
    dpsi = lambda - f.a(x) - psi * (psi + f.q(x)) / B;
    dlog = psi / B;
  };
  const int sub = std::max(1, static_cast<int>(std::ceil(h / 0.005)));
  const double dz = h / sub;  // step in z = -x (leftward)

  double psi = psi_R, lg = 0.0;
  e.psi[n] = psi;
  e.log_phi[n] = 0.0;
  double sup = std::abs(psi);
  for (int i = n; i-- > 0;) {
    const double x1 = xl + (i + 1) * h;
    for (int j = 0; j < sub; ++j) {
      const double x = x1 - j * dz;
      double k1p, k1l, k2p, k2l, k3p, k3l, k4p, k4l;
      rhs(x, psi, k1p, k1l);
      rhs(x - 0.5 * dz, psi - 0.5 * dz * k1p, k2p, k2l);
      rhs(x - 0.5 * dz, psi - 0.5 * dz * k2p, k3p, k3l);
      rhs(x - dz, psi - dz * k3p, k4p, k4l);
      psi -= dz / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
      lg -= dz / 6.0 * (k1l + 2 * k2l + 2 * k3l + k4l);
      if (!(std::abs(psi) < psi_cap)) {
        std::ostringstream os;
        os << "solve_phi: Riccati blow-up near x = " << x - dz
           << " (lambda <= lambda0 or truncation too tight)";
        throw SpectralInfeasibility(os.str());
      }
    }
    e.psi[i] = psi;
    e.log_phi[i] = lg;
    sup = std::max(sup, std::abs(psi));
  }

  // normalize phi(0) = 1
  const auto i0 = static_cast<std::size_t>(std::llround(-xl / h));
  const double shift = e.log_phi[i0];
  for (auto& v : e.log_phi) v -= shift;

  e.sup_psi = sup;
  e.right_decay_ok = e.log_phi[n] <= -6.0 * std::log(10.0);
  e.bound_warning = sup > std::sqrt(f.aB_minus) + 1e-12;
  return e;
}

Eigenfunction solve_phi(const CoefficientField& f, double lambda, double R,
                        int n) {
  return solve_phi_window(f, lambda, -R, R, n);
}

Eigenfunction solve_phi_left(const CoefficientField& f, double lambda,
                             double R, int n) {
  const Eigenfunction m = solve_phi(reflect(f), lambda, R, n);
  Eigenfunction e;
  e.lambda = lambda;
  e.xl = -m.xr;
  e.xr = -m.xl;
  e.h = m.h;
  const auto sz = m.size();
  e.psi.resize(sz);
  e.log_phi.resize(sz);
  for (std::size_t i = 0; i < sz; ++i) {
    e.psi[i] = -m.psi[sz - 1 - i];
    e.log_phi[i] = m.log_phi[sz - 1 - i];
  }
  e.sup_psi = m.sup_psi;
  e.right_decay_ok = false;
  e.bound_warning = m.bound_warning;
  e.mirrored = true;
  return e;
}

namespace {

struct LineFit {
  double slope = 0, intercept = 0, max_resid = 0;
};

LineFit fit_window(const Eigenfunction& e, double lo, double hi) {
  if (lo < e.xl - 1e-9 || hi > e.xr + 1e-9 || !(hi > lo))
    throw std::invalid_argument("decay_rate: window outside the grid");
  const auto i0 = static_cast<std::size_t>(std::ceil((lo - e.xl) / e.h));
  const auto i1 = static_cast<std::size_t>(std::floor((hi - e.xl) / e.h));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(i1 - i0 + 1);
  for (auto i = i0; i <= i1; ++i) {
    const double x = e.x_at(i), y = e.log_phi[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  LineFit f;
  f.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / m;
  for (auto i = i0; i <= i1; ++i)
    f.max_resid = std::max(
        f.max_resid, std::abs(e.log_phi[i] - f.slope * e.x_at(i) - f.intercept));
  return f;
}

}  // namespace

DecayRate decay_rate(const Eigenfunction& e, Interval window) {
  DecayRate d;
  const LineFit right = fit_window(e, window.lo, window.hi);
  d.tau_plus = -right.slope;
  d.max_fit_residual = right.max_resid;
  if (e.xl <= -window.hi) {
    const LineFit left = fit_window(e, -window.hi, -window.lo);
    d.tau_minus = -left.slope;
    d.max_fit_residual = std::max(d.max_fit_residual, left.max_resid);
    d.discrepancy = std::abs(d.tau_plus - d.tau_minus) /
                    std::max(std::abs(d.tau_plus), std::abs(d.tau_minus));
  } else {
    d.tau_minus = d.tau_plus;
  }
  d.fit_warning =
      d.max_fit_residual >
      0.02 * std::abs(d.tau_plus) * window.length() + 1e-9;
  return d;
}

WidthEstimate estimate_width_constant(const CoefficientField& f,
                                      const std::vector<double>& lambdas,
                                      double R, int n) {
  if (lambdas.empty())
    throw std::invalid_argument("estimate_width_constant: empty lambda list");
  WidthEstimate w;
  w.lambda_range = {*std::min_element(lambdas.begin(), lambdas.end()),
                    *std::max_element(lambdas.begin(), lambdas.end())};
  const double log2 = std::log(2.0);
  for (double lambda : lambdas) {
    const Eigenfunction e = solve_phi(f, lambda, R, n);
    const double pad = std::min(5.0, R / 10.0);
    const auto i0 = static_cast<std::size_t>(std::ceil(pad / e.h));
    const auto i1 = e.size() - 1 - i0;
    const std::size_t stride = std::max<std::size_t>(1, (i1 - i0) / 4000);
    const double ds = e.h * static_cast<double>(stride);

    double max_gap = -1.0;
    WidthEvidence ev{0, 0, 0, lambda};
    for (auto i = i0; i <= i1; i += stride) {
      for (auto j = i + stride; j <= i1; j += stride) {
        if (e.log_phi[i] - e.log_phi[j] < log2) {
          const double gap = e.x_at(j) - e.x_at(i);
          if (gap > max_gap) {
            max_gap = gap;
            ev.c = e.x_at(i);
            ev.d = e.x_at(j);
            ev.ratio = std::exp(e.log_phi[i] - e.log_phi[j]);
          }
        }
      }
    }
    const double window_len = e.x_at(i1) - e.x_at(i0);
    if (max_gap >= window_len - ds)
      throw SolverFailure(
          "estimate_width_constant: no doubling length inside the window "
          "(lambda too close to lambda0?)");
    const double L = std::max(max_gap, 0.0) + ds;
    if (L > w.L) w.L = L;
    w.evidence.push_back(ev);
  }
  return w;
}

EnergyCheck energy_check(const Eigenfunction& e, const CoefficientField& f,
                         double lambda0, double c, double d) {
  EnergyCheck chk;
  if (!(e.lambda > lambda0))
    throw std::invalid_argument("energy_check: lambda must exceed lambda0");
  chk.M = (lambda0 + (f.B_plus + f.q_plus) *
                         (1.0 + std::sqrt(f.a_plus / f.B_minus))) /
          (e.lambda - lambda0);
  auto ic = static_cast<std::size_t>(std::llround((c - e.xl) / e.h));
  auto id = static_cast<std::size_t>(std::llround((d - e.xl) / e.h));
  if (ic >= id || id >= e.size())
    throw std::invalid_argument("energy_check: bad interval");
  double mlog = -1e300;
  for (auto i = ic; i <= id; ++i) mlog = std::max(mlog, e.log_phi[i]);
  // scaled trapezoid of phi^2
  double acc = 0.0;
  for (auto i = ic; i < id; ++i) {
    const double f0 = std::exp(2.0 * (e.log_phi[i] - mlog));
    const double f1 = std::exp(2.0 * (e.log_phi[i + 1] - mlog));
    acc += 0.5 * (f0 + f1) * e.h;
  }
  chk.lhs = acc;
  chk.rhs = chk.M * (std::exp(2.0 * (e.log_phi[ic] - mlog)) +
                     std::exp(2.0 * (e.log_phi[id] - mlog)));
  chk.pass = chk.lhs <= chk.rhs * (1.0 + 1e-9);
  return chk;
}

}  // namespace frontlab
