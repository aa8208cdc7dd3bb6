#pragma once

#include <memory>
#include <vector>

#include "frontlab/reaction.hpp"

namespace frontlab {

/// Traveling-front profile of u_t = u_xx + g(u) at speed gamma + 1/gamma,
/// normalized so that U(x) e^{gamma x} -> 1 as x -> +infty.
///
/// Stored on a uniform x grid together with U' and, in the right tail,
/// log U (so tail ratios keep full relative precision).
struct FrontProfile {
  double gamma = 0;
  double speed = 0;                // gamma + 1/gamma
  double x0 = 0, h = 0;            // x_grid[i] = x0 + i*h
  std::vector<double> U;
  std::vector<double> U_prime;
  std::vector<double> log_U;       // valid from tail_begin on
  std::size_t tail_begin = 0;      // first index with chart-2 (log) data
  double normalization_residual = 0;  // |U e^{gamma x} - 1| at the right end
  KppEnvelope envelope;

  double x_at(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
  std::size_t size() const { return U.size(); }
  double x_min() const { return x0; }
  double x_max() const { return x_at(U.size() - 1); }
};

struct ProfileOptions {
  double grid_h = 0.01;      // uniform storage spacing
  int substeps = 5;          // RK4 substeps per grid cell
  double delta1 = 1e-9;      // departure distance from the saddle (1,0)
  double r_tail_tol = 1e-9;  // stop once |r - gamma| falls below this
  double x_cap = 4000.0;     // hard safety cap on the integration span
};

/// Solves the profile ODE by forward phase-plane integration off the
/// unstable manifold of (1,0), switching to logarithmic variables once
/// U < 0.6.  Two passes: the first measures the normalization constant
/// lim U e^{gamma x}, the second re-runs with the start shifted so the
/// limit is 1.  Throws std::domain_error unless 0 < gamma < 1, and
/// SolverFailure when the envelope has a degenerate saddle (g'(1) = 0).
FrontProfile solve_profile(const KppEnvelope& g, double gamma,
                           const ProfileOptions& opt = {});

/// h_{g,alpha}(v) = U_{g,sqrt(alpha)}(-ln(v)/sqrt(alpha)): the map turning
/// solutions of the linearized equation into sub-solutions.
struct SubSolutionMap {
  double alpha = 0;
  std::shared_ptr<const FrontProfile> profile;

  // Tail models beyond the stored grid: h = v (1 + c1 v^kappa) for small v,
  // h = 1 - exp(log_c2 - gp * ln v) for large v; exponents are analytic,
  // amplitudes matched at the grid ends.
  double kappa = 0, c1 = 0;
  double gp = 0, log_c2 = 0;
};

SubSolutionMap build_sub_solution_map(std::shared_ptr<const FrontProfile> p);
SubSolutionMap build_sub_solution_map(const KppEnvelope& g, double alpha,
                                      const ProfileOptions& opt = {});

/// h(v) for v >= 0; throws std::domain_error for v < 0.
double eval_h(const SubSolutionMap& m, double v);
/// Same map evaluated from ln v (safe when v itself would overflow).
double eval_h_log(const SubSolutionMap& m, double log_v);
/// Monotone bisection inverse of eval_h on [0, 1).
double h_inverse(const SubSolutionMap& m, double w);

struct ProfileReport {
  double max_ode_residual = 0;      // |U'' + c U' + g(U)|, 4th-order FD
  double max_identity_residual = 0; // |alpha v^2 h'' - v h' + g(h)| on log grid
  double lemma_margin_min = 0;      // min of gamma g(U) + U' over checked nodes
  double lemma_neg_Uprime_min = 0;  // min of -U' over checked nodes
  bool lemma_ok = false;            // 0 < -U' < gamma g(U) strictly
  double h_prime_at_zero = 0;
  double h_le_v_margin = 0;         // min of v - h(v) over the log grid
  double h_increasing_margin = 0;   // min forward difference of h
  double h_concavity_max = 0;       // max h'' over the log grid (want < 0)
  double normalization_residual = 0;
  bool pass = false;
};

/// Residual and inequality report for a profile/map pair.  Nodes with
/// min(U, 1-U) <= 1e-9 are excluded from the strict Lemma margins: below
/// that the margins sink under double rounding.
ProfileReport check_profile(const FrontProfile& p, const SubSolutionMap& m);

}  // namespace frontlab
