#pragma once

#include <functional>
#include <vector>

#include "frontlab/reaction.hpp"

namespace frontlab {

struct Grid1D {
  double xl = 0, xr = 0;
  int n = 0;  // node count
  double h() const { return (xr - xl) / (n - 1); }
  double x_at(int i) const { return xl + i * h(); }
  std::vector<double> nodes() const;
};

struct State {
  double t = 0;
  std::vector<double> values;
};

enum class DriftScheme {
  Upwind1,    // strictly monotone first-order upwinding (acceptance runs)
  Centered2,  // second-order centered; monotone while h|q| <= 2B
};

struct BoundaryPolicy {
  enum Kind { PinnedToFunctions, HomogeneousFlux } kind = HomogeneousFlux;
  // Dirichlet values for PinnedToFunctions.
  std::function<double(double t)> left, right;

  static BoundaryPolicy pinned(std::function<double(double)> l,
                               std::function<double(double)> r) {
    return {PinnedToFunctions, std::move(l), std::move(r)};
  }
  static BoundaryPolicy no_flux() { return {}; }
};

/// IMEX stepper for u_t = (B u_x)_x + q u_x + f(x,u): diffusion and drift
/// implicit (tridiagonal M-matrix, solved by the Thomas algorithm),
/// reaction explicit.  The step map is order-preserving for
/// dt <= 0.9 / Lip_u(f), independent of h; that comparison property is
/// what the sandwich construction rests on, so time integration stays
/// first-order (no unconditionally monotone implicit scheme does better).
class Parabolic1D {
 public:
  Parabolic1D(Grid1D grid, const KppReaction& reaction,
              BoundaryPolicy bc = BoundaryPolicy::no_flux(),
              DriftScheme drift = DriftScheme::Upwind1);

  /// One IMEX step.  Throws SolverFailure if dt exceeds the monotone bound.
  void step(State& s, double dt) const;

  /// Advances to t1, landing exactly on it, and invokes `observer`
  /// (if set) at every requested output time.
  void evolve(State& s, double t1, double dt,
              const std::vector<double>& output_times = {},
              const std::function<void(const State&)>& observer = {}) const;

  double dt_max() const { return 0.9 / std::max(lip_, 1e-300); }
  const Grid1D& grid() const { return grid_; }

  /// Optional manufactured-solution source term s(t, x).
  std::function<double(double, double)> source;

 private:
  // An instance caches per-dt bands, so it is not reentrant: concurrent
  // evolve calls must use separate Parabolic1D instances.
  Grid1D grid_;
  std::function<double(double, double)> f_;
  BoundaryPolicy bc_;
  double lip_ = 0;
  // cached coefficient samples
  std::vector<double> Bh_;   // B at half nodes, size n-1
  std::vector<double> qn_;   // q at nodes
  std::vector<double> lo_, di_, up_;  // implicit operator bands (per dt)
  mutable double cached_dt_ = -1;
  mutable std::vector<double> l_, d_, u_;
  void build_bands(double dt) const;
};

/// Validates an initial state: values within [-1e-10, 1+1e-10], clamped
/// to [0,1] on return.  Throws std::domain_error otherwise.
State make_state(double t, std::vector<double> values);

struct ComparisonReport {
  double max_violation = 0;  // max over nodes/times of (sub - super)
  bool pass = false;         // <= 1e-6 + 1e-4 scheme allowance
};

/// Nodewise order check for two trajectories sampled on the same grids.
ComparisonReport check_comparison(const std::vector<State>& sub,
                                  const std::vector<State>& super);

/// Rectangular-grid variant used by the multi-d checks: locally
/// one-dimensional splitting, each factor an implicit monotone
/// tridiagonal sweep, reaction explicit.  Constant-in-y data stays
/// constant in y exactly.
class Parabolic2D {
 public:
  struct Grid2D {
    double xl = 0, xr = 0, yl = 0, yr = 0;
    int nx = 0, ny = 0;
    double hx() const { return (xr - xl) / (nx - 1); }
    double hy() const { return (yr - yl) / (ny - 1); }
  };

  /// f(u) with constant-in-x linearization (the multi-d theorems assume
  /// f_u(x,0) = a constant); boundary pinned to g(t,x,y) on all edges.
  Parabolic2D(Grid2D grid, std::function<double(double)> f, double lip,
              std::function<double(double, double, double)> boundary);

  void step(std::vector<double>& u, double& t, double dt) const;
  void evolve(std::vector<double>& u, double& t, double t1, double dt) const;
  double dt_max() const { return 0.9 / std::max(lip_, 1e-300); }
  const Grid2D& grid() const { return grid_; }

 private:
  Grid2D grid_;
  std::function<double(double)> f_;
  std::function<double(double, double, double)> bc_;
  double lip_ = 0;
};

}  // namespace frontlab
