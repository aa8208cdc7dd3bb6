#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frontlab/coefficients.hpp"

namespace frontlab {

struct Lambda0Evidence {
  double R = 0;
  int n = 0;
  double lambda0 = 0;     // raw truncated value
  bool extrapolated = false;
};

/// lambda0: top of the quadratic-form spectrum; lambda1: the sharp
/// sandwich threshold inf_x { a + sqrt((aB)_-)(sqrt((aB)_-) - |q|)/B }.
struct SpectralBounds {
  double lambda0 = 0;
  double lambda1 = 0;
  double truncation_radius = 0;
  double spread = 0;              // |extrap(2R) - extrap(R)|
  bool accuracy_warning = false;  // spread > 1e-4
  std::vector<Lambda0Evidence> evidence;

  bool feasible() const { return lambda0 < lambda1; }
  /// Admissible alpha window (1 - (lambda1 - mu1)/a_plus, 1) for a
  /// measure with top atom mu1.
  Interval alpha_window(double mu1, double a_plus) const {
    return {1.0 - (lambda1 - mu1) / a_plus, 1.0};
  }
};

/// Top eigenvalue of the symmetrized operator (B psi')' + (a - q'/2) psi
/// on [-R,R] with zero boundary values; symmetric tridiagonal bisection,
/// Richardson-extrapolated over (R,2R) x (n,2n).  Requires n >= 1000.
SpectralBounds compute_lambda0(const CoefficientField& f, double R, int n);

/// Grid infimum of the lambda1 formula with Lipschitz padding.
double compute_lambda1(const CoefficientField& f, int n = 200001);

/// Both bounds in one call (shared truncation parameters).
SpectralBounds compute_spectral_bounds(const CoefficientField& f, double R,
                                       int n);

/// Decaying generalized eigenfunction at lambda > lambda0, via Riccati
/// shooting for psi = B phi'/phi from the frozen-coefficient stable root
/// at the right end, then phi = exp(int psi/B) with phi(0) = 1.
struct Eigenfunction {
  double lambda = 0;
  double xl = 0, xr = 0, h = 0;   // grid: x_i = xl + i*h, includes x = 0
  std::vector<double> psi;
  std::vector<double> log_phi;    // log phi, log_phi(0) = 0
  double sup_psi = 0;             // sup |psi| over the grid
  bool right_decay_ok = false;    // phi(xr) <= 1e-6 phi(0)
  bool bound_warning = false;     // sup|psi| exceeded sqrt((aB)_-)
  bool mirrored = false;          // true for left-decaying solves

  std::size_t size() const { return psi.size(); }
  double x_at(std::size_t i) const { return xl + static_cast<double>(i) * h; }
  double phi_at(std::size_t i) const;
  /// log phi at arbitrary x by Hermite interpolation (d log phi/dx = psi/B
  /// is stored, so the interpolant keeps full tail accuracy).
  double log_phi_interp(double x, const CoefficientField& f) const;
};

Eigenfunction solve_phi(const CoefficientField& f, double lambda, double R,
                        int n);
/// Asymmetric window variant (used by long one-sided speed runs).
Eigenfunction solve_phi_window(const CoefficientField& f, double lambda,
                               double xl, double xr, int n);
/// Left-decaying mirror solution psi_lambda.
Eigenfunction solve_phi_left(const CoefficientField& f, double lambda,
                             double R, int n);

struct DecayRate {
  double tau_plus = 0;    // slope of -log phi on the right window
  double tau_minus = 0;   // same on the mirrored left window
  double discrepancy = 0; // |tau+ - tau-| / max(tau+, tau-)
  double max_fit_residual = 0;
  bool fit_warning = false;

  double tau() const { return tau_plus; }
};

/// Least-squares decay rates over window [w.lo, w.hi] (right side) and
/// its reflection (left side).
DecayRate decay_rate(const Eigenfunction& e, Interval window);

struct WidthEvidence {
  double c = 0, d = 0, ratio = 0; // binding pair phi(c)/phi(d)
  double lambda = 0;
};

struct WidthEstimate {
  double L = 0;
  Interval lambda_range;
  double factor = 2.0;
  std::vector<WidthEvidence> evidence;
};

/// Smallest grid L such that phi_lambda(c) >= 2 phi_lambda(d) for all
/// sampled lambda in the list and all c <= d - L inside the window.
/// The doubling constant of the theory (6MN^2) involves an unquantified
/// Harnack constant; this is the direct empirical search replacing it.
WidthEstimate estimate_width_constant(const CoefficientField& f,
                                      const std::vector<double>& lambdas,
                                      double R, int n);

struct EnergyCheck {
  double lhs = 0, rhs = 0, M = 0;
  bool pass = false;
};

/// Energy inequality int_c^d phi^2 <= M (phi(c)^2 + phi(d)^2) with
/// M = [lambda0 + (B+ + q+)(1 + sqrt(a+/B-))]/(lambda - lambda0).
EnergyCheck energy_check(const Eigenfunction& e, const CoefficientField& f,
                         double lambda0, double c, double d);

}  // namespace frontlab
