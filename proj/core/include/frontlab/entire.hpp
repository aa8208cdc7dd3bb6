#pragma once

#include <vector>

#include "frontlab/pde.hpp"
#include "frontlab/profile.hpp"
#include "frontlab/spectrum.hpp"

namespace frontlab {

struct Atom {
  double lambda = 0;
  double weight = 0;  // > 0
};

/// Finite atomic measure on (lambda0, lambda1).
struct SpectralMeasure {
  std::vector<Atom> atoms;
  double mu0() const;
  double mu1() const;
  /// Throws InvalidFieldError unless all weights are positive.
  void validate() const;
};

/// Space-time samples of the mode superposition
/// v_mu(t,x) = sum_i w_i e^{lambda_i t} phi_{lambda_i}(x),
/// stored as log v (row-major over t_grid x x_grid).
struct VBundle {
  std::vector<double> t_grid, x_grid;
  std::vector<double> log_v;
  double at_log(std::size_t it, std::size_t ix) const {
    return log_v[it * x_grid.size() + ix];
  }
};

/// Exact superposition; requires one eigenfunction per atom (matching
/// lambda within 1e-12), all solved on windows covering x_grid.
VBundle build_v_mu(const SpectralMeasure& mu,
                   const std::vector<Eigenfunction>& phis,
                   const CoefficientField& field,
                   const std::vector<double>& t_grid,
                   const std::vector<double>& x_grid);

/// Pointwise log v evaluator used for boundary data and initial rows.
double log_v_mu_at(const SpectralMeasure& mu,
                   const std::vector<Eigenfunction>& phis,
                   const CoefficientField& field, double t, double x);

struct SandwichPair {
  std::vector<double> w;      // h(v_mu) nodewise
  std::vector<double> v_cap;  // min(v_mu, 1)
};

/// w = h(v) and min(v,1) from a log-v row.  Refuses (ComparisonFailure)
/// unless every atom's Riccati certificate sup|psi_i| <= sqrt(alpha (aB)_-)
/// holds: that inequality is exactly the gradient hypothesis making h(v)
/// a sub-solution, so building the pair without it would be unjustified.
SandwichPair build_sandwich(const std::vector<double>& log_v_row,
                            const SubSolutionMap& map,
                            const std::vector<Eigenfunction>& phis,
                            const CoefficientField& field);

struct EntireTolerances {
  double sandwich = 1e-4;     // max allowed w - u or u - min(v,1)
  double monotone_k = 1e-6;   // max allowed decrease between u_k's
  double monotone_t = 1e-6;   // max allowed nodewise decrease in t
};

struct EntireSolverParams {
  Grid1D grid;
  double dt = 1e-3;
  std::vector<double> t_out;      // output times (window start = t_out[0])
  std::vector<double> k_schedule = {10, 20, 40, 80};
  double convergence_tol = 1e-5;  // |u_{k+1} - u_k| target at window start
  EntireTolerances tol;
};

struct ConvergenceEntry {
  double k = 0;
  double delta = 0;  // sup |u_k - u_prev| at window start
};

struct EntireSolutionBundle {
  std::vector<double> t_grid, x_grid;
  std::vector<double> u, w, v_cap, log_v;  // row-major t x x
  double alpha = 0;
  std::vector<double> k_schedule;
  std::vector<ConvergenceEntry> history;
  double max_sandwich_violation = 0;
  double max_t_decrease = 0;    // largest drop of u between output rows
  double max_k_decrease = 0;    // largest drop between consecutive u_k

  std::size_t idx(std::size_t it, std::size_t ix) const {
    return it * x_grid.size() + ix;
  }
};

/// Backward-limiting construction: for each k, solves the PDE forward
/// from t = -k with initial datum w_mu(-k, .), boundary pinned to the
/// sandwich (left: w_mu, right: min(v_mu,1)); returns the last u_k on the
/// output window with the convergence history.  Throws
/// SolverIntegrityError / ComparisonFailure when the monotonicity or
/// sandwich tolerances are exceeded.
EntireSolutionBundle construct_entire_solution(
    const KppReaction& reaction, const SpectralMeasure& mu,
    const std::vector<Eigenfunction>& phis, const SubSolutionMap& map,
    const EntireSolverParams& params);

/// Rightmost level crossing per output time, linear interpolation.
/// Throws DiagnosticsError when a row has no crossing.
std::vector<double> front_position(const EntireSolutionBundle& b,
                                   double level = 0.5);
std::vector<double> front_position_row(const std::vector<double>& x_grid,
                                       const std::vector<double>& u_row,
                                       double level);

struct WidthSeries {
  double eps = 0;
  std::vector<double> L;  // per output time
  double sup = 0;
};

/// Diameter of {x : eps <= u <= 1-eps} per output time; empty set gives 0.
WidthSeries interface_width(const EntireSolutionBundle& b, double eps);

struct SpeedFit {
  double c = 0;
  double residual = 0;      // max |X - fit|
  bool low_confidence = false;  // residual > 10% of the drift over the window
};

/// Least-squares slope of X(t) over the index window [i0, i1].
SpeedFit asymptotic_speed(const std::vector<double>& t,
                          const std::vector<double>& X, std::size_t i0,
                          std::size_t i1);

}  // namespace frontlab
