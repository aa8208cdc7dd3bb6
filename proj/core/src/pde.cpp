#include "frontlab/pde.hpp"

#include <algorithm>
#include <cmath>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

// Thomas algorithm; bands are left intact, cp/dp are scratch.
void solve_tridiag(const std::vector<double>& lo, const std::vector<double>& di,
                   const std::vector<double>& up, std::vector<double>& rhs,
                   std::vector<double>& cp, std::vector<double>& dp) {
  const std::size_t n = di.size();
  cp[0] = up[0] / di[0];
  dp[0] = rhs[0] / di[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = di[i] - lo[i] * cp[i - 1];
    cp[i] = up[i] / m;
    dp[i] = (rhs[i] - lo[i] * dp[i - 1]) / m;
  }
  rhs[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = dp[i] - cp[i] * rhs[i + 1];
}

}  // namespace

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = x_at(i);
  return xs;
}

State make_state(double t, std::vector<double> values) {
  for (double v : values)
    if (!(v >= -1e-10) || !(v <= 1.0 + 1e-10))
      throw std::domain_error("state values must lie in [-1e-10, 1+1e-10]");
  for (auto& v : values) v = std::min(1.0, std::max(0.0, v));
  return State{t, std::move(values)};
}

Parabolic1D::Parabolic1D(Grid1D grid, const KppReaction& reaction,
                         BoundaryPolicy bc, DriftScheme drift)
    : grid_(grid), f_(reaction.f), bc_(std::move(bc)), lip_(reaction.lip_u) {
  const int n = grid_.n;
  if (n < 3) throw std::invalid_argument("Parabolic1D: n >= 3 required");
  const double h = grid_.h();
  Bh_.resize(n - 1);
  qn_.resize(n);
  for (int i = 0; i + 1 < n; ++i)
    Bh_[i] = reaction.field.B(grid_.x_at(i) + 0.5 * h);
  for (int i = 0; i < n; ++i) qn_[i] = reaction.field.q(grid_.x_at(i));

  // implicit operator A (diffusion + drift); bands stored as A's action
  lo_.assign(n, 0.0);
  di_.assign(n, 0.0);
  up_.assign(n, 0.0);
  const double ih2 = 1.0 / (h * h), ih = 1.0 / h;
  for (int i = 1; i + 1 < n; ++i) {
    lo_[i] = Bh_[i - 1] * ih2;
    up_[i] = Bh_[i] * ih2;
    di_[i] = -(Bh_[i - 1] + Bh_[i]) * ih2;
    const double q = qn_[i];
    if (drift == DriftScheme::Upwind1) {
      if (q >= 0.0) {
        up_[i] += q * ih;
        di_[i] -= q * ih;
      } else {
        lo_[i] += -q * ih;
        di_[i] -= -q * ih;
      }
    } else {
      up_[i] += 0.5 * q * ih;
      lo_[i] -= 0.5 * q * ih;
    }
  }
  if (bc_.kind == BoundaryPolicy::HomogeneousFlux) {
    di_[0] = -2.0 * Bh_[0] * ih2;
    up_[0] = 2.0 * Bh_[0] * ih2;
    lo_[n - 1] = 2.0 * Bh_[n - 2] * ih2;
    di_[n - 1] = -2.0 * Bh_[n - 2] * ih2;
  }
  // PinnedToFunctions: boundary rows become identity rows in build_bands.
}

void Parabolic1D::build_bands(double dt) const {
  if (cached_dt_ == dt) return;
  const int n = grid_.n;
  l_.assign(n, 0.0);
  d_.assign(n, 0.0);
  u_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    l_[i] = -dt * lo_[i];
    d_[i] = 1.0 - dt * di_[i];
    u_[i] = -dt * up_[i];
  }
  if (bc_.kind == BoundaryPolicy::PinnedToFunctions) {
    l_[0] = u_[0] = 0.0;
    d_[0] = 1.0;
    l_[n - 1] = u_[n - 1] = 0.0;
    d_[n - 1] = 1.0;
  }
  cached_dt_ = dt;
}

void Parabolic1D::step(State& s, double dt) const {
  if (dt > dt_max() * (1.0 + 1e-12))
    throw SolverFailure("Parabolic1D::step: dt exceeds the monotone bound");
  const int n = grid_.n;
  build_bands(dt);
  const double t1 = s.t + dt;

  std::vector<double>& u = s.values;
  std::vector<double> rhs(u);
  for (int i = 0; i < n; ++i) {
    rhs[i] += dt * f_(grid_.x_at(i), u[i]);
    if (source) rhs[i] += dt * source(s.t, grid_.x_at(i));
  }
  if (bc_.kind == BoundaryPolicy::PinnedToFunctions) {
    rhs[0] = bc_.left(t1);
    rhs[n - 1] = bc_.right(t1);
  }

  std::vector<double> cp(static_cast<std::size_t>(n)),
      dp(static_cast<std::size_t>(n));
  solve_tridiag(l_, d_, u_, rhs, cp, dp);
  if (!source)  // manufactured solutions may legitimately leave [0,1]
    for (auto& v : rhs) v = std::min(1.0, std::max(0.0, v));
  u = std::move(rhs);
  s.t = t1;
}

void Parabolic1D::evolve(State& s, double t1, double dt,
                         const std::vector<double>& output_times,
                         const std::function<void(const State&)>& observer) const {
  std::vector<double> marks;
  for (double t : output_times)
    if (t > s.t + 1e-12 && t <= t1 + 1e-12) marks.push_back(t);
  std::sort(marks.begin(), marks.end());
  if (marks.empty() || marks.back() < t1 - 1e-12) marks.push_back(t1);

  for (double target : marks) {
    const double span = target - s.t;
    const int steps = std::max(1, static_cast<int>(std::ceil(span / dt - 1e-9)));
    const double dte = span / steps;
    for (int k = 0; k < steps; ++k) step(s, dte);
    s.t = target;  // absorb accumulated roundoff
    const bool requested =
        std::any_of(output_times.begin(), output_times.end(),
                    [&](double t) { return std::abs(t - target) <= 1e-12; });
    if (observer && requested) observer(s);
  }
}

ComparisonReport check_comparison(const std::vector<State>& sub,
                                  const std::vector<State>& super) {
  if (sub.size() != super.size())
    throw std::invalid_argument("check_comparison: trajectory lengths differ");
  ComparisonReport rep;
  for (std::size_t k = 0; k < sub.size(); ++k) {
    if (sub[k].values.size() != super[k].values.size())
      throw std::invalid_argument("check_comparison: grid mismatch");
    for (std::size_t i = 0; i < sub[k].values.size(); ++i)
      rep.max_violation =
          std::max(rep.max_violation, sub[k].values[i] - super[k].values[i]);
  }
  rep.pass = rep.max_violation <= 1e-6 + 1e-4;
  return rep;
}

Parabolic2D::Parabolic2D(Grid2D grid, std::function<double(double)> f,
                         double lip,
                         std::function<double(double, double, double)> boundary)
    : grid_(grid), f_(std::move(f)), bc_(std::move(boundary)), lip_(lip) {
  if (grid_.nx < 3 || grid_.ny < 3)
    throw std::invalid_argument("Parabolic2D: nx, ny >= 3 required");
}

void Parabolic2D::step(std::vector<double>& u, double& t, double dt) const {
  if (dt > dt_max() * (1.0 + 1e-12))
    throw SolverFailure("Parabolic2D::step: dt exceeds the monotone bound");
  const int nx = grid_.nx, ny = grid_.ny;
  const double t1 = t + dt;
  const double rx = dt / (grid_.hx() * grid_.hx());
  const double ry = dt / (grid_.hy() * grid_.hy());
  auto at = [&](int i, int j) -> double& {
    return u[static_cast<std::size_t>(j) * nx + i];
  };

  for (auto& v : u) v += dt * f_(v);

  // x-sweeps
  {
    std::vector<double> lo(nx, -rx), di(nx, 1 + 2 * rx), up(nx, -rx),
        rhs(nx), cp(nx), dp(nx);
    lo[0] = up[0] = 0;
    di[0] = 1;
    lo[nx - 1] = up[nx - 1] = 0;
    di[nx - 1] = 1;
    for (int j = 0; j < ny; ++j) {
      const double y = grid_.yl + j * grid_.hy();
      for (int i = 0; i < nx; ++i) rhs[i] = at(i, j);
      rhs[0] = bc_(t1, grid_.xl, y);
      rhs[nx - 1] = bc_(t1, grid_.xr, y);
      solve_tridiag(lo, di, up, rhs, cp, dp);
      for (int i = 0; i < nx; ++i) at(i, j) = rhs[i];
    }
  }
  // y-sweeps
  {
    std::vector<double> lo(ny, -ry), di(ny, 1 + 2 * ry), up(ny, -ry),
        rhs(ny), cp(ny), dp(ny);
    lo[0] = up[0] = 0;
    di[0] = 1;
    lo[ny - 1] = up[ny - 1] = 0;
    di[ny - 1] = 1;
    for (int i = 0; i < nx; ++i) {
      const double x = grid_.xl + i * grid_.hx();
      for (int j = 0; j < ny; ++j) rhs[j] = at(i, j);
      rhs[0] = bc_(t1, x, grid_.yl);
      rhs[ny - 1] = bc_(t1, x, grid_.yr);
      solve_tridiag(lo, di, up, rhs, cp, dp);
      for (int j = 0; j < ny; ++j) at(i, j) = rhs[j];
    }
  }
  for (auto& v : u) v = std::min(1.0, std::max(0.0, v));
  t = t1;
}

void Parabolic2D::evolve(std::vector<double>& u, double& t, double t1,
                         double dt) const {
  const double span = t1 - t;
  const int steps = std::max(1, static_cast<int>(std::ceil(span / dt - 1e-9)));
  const double dte = span / steps;
  for (int k = 0; k < steps; ++k) step(u, t, dte);
  t = t1;
}

}  // namespace frontlab
