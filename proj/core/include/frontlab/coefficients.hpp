#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace frontlab {

enum class FieldKind { Homogeneous, Bump, Periodic, Random };

struct Bump {
  double center = 0.0;
  double width = 1.0;      // Gaussian width; support truncated at 8*width
  double amplitude = 0.0;
};

/// The coefficient triple (a, B, q) of the reaction-diffusion operator
/// together with certified bounds.  a is the linearization rate of the
/// reaction at u = 0, B the diffusivity, q the drift.
///
/// Invariants (validated by the factories and re-checkable on refined
/// grids): 0 < B_minus <= B <= B_plus, |q| <= q_plus, 0 < a_minus <= a
/// <= a_plus, aB_minus <= a*B, all pointwise on the sampled window.
struct CoefficientField {
  std::function<double(double)> a;
  std::function<double(double)> B;
  std::function<double(double)> q;

  double a_minus = 0, a_plus = 0;
  double B_minus = 0, B_plus = 0;
  double q_plus = 0;
  double aB_minus = 0;
  double lipschitz = 0;  // common Lipschitz constant for a, B, q

  FieldKind kind = FieldKind::Homogeneous;
  double cell = 0.0;        // cell length, Periodic kind only
  double window_lo = -1e300; // x-range on which the field is defined
  double window_hi = 1e300;

  /// q_plus <= 2 sqrt((aB)_-) is required by the sandwich construction.
  bool usable_for_sandwich() const;
};

struct FieldCheck {
  bool pass = true;
  double worst_a_low = 0, worst_a_high = 0;
  double worst_B_low = 0, worst_B_high = 0;
  double worst_q = 0, worst_aB = 0;
  std::string note;
};

/// Constant field with exact bounds.  Throws InvalidFieldError on
/// non-positive a0 or B0.
CoefficientField make_homogeneous(double a0, double B0, double q0);

/// Adds smooth compactly supported Gaussian bumps to the reaction rate a
/// of `base`.  Bounds are recomputed by dense sampling with Lipschitz
/// padding; for non-negative amplitudes the lower bound stays exactly at
/// base.a_minus.  Throws InvalidFieldError if a is driven <= 0.
CoefficientField make_bump_field(const CoefficientField& base,
                                 const std::vector<Bump>& bumps);

/// Periodic field a(x) = a0 * (1 + amp * sin(2 pi x / cell)), constant B, q.
CoefficientField make_periodic_field(double a0, double B0, double q0,
                                     double cell, double amp);

enum class RandomModel { PoissonBumps, SmoothedCheckerboard };

/// Two stock stationary-ergodic models for the reaction rate a (B and q
/// stay at their base values):
///  - PoissonBumps: unit-cell Poisson point process of Gaussian bumps,
///    combined by pointwise max so a stays in [a0, a0 + amp_hi];
///  - SmoothedCheckerboard: iid uniform cell values mollified by a
///    Gaussian of width `mollifier_width`.
/// Cell randomness is counter-based in (seed, cell index), so a
/// realization is a pure function of (spec, seed, window) and extends
/// consistently to larger windows.
struct RandomMediumSpec {
  RandomModel model = RandomModel::PoissonBumps;
  double intensity = 0.5;        // PoissonBumps: expected points per unit cell
  double amp_lo = 0.0, amp_hi = 0.5;
  double mollifier_width = 0.25; // bump width / checkerboard mollifier
  double a0 = 1.0, B0 = 1.0, q0 = 0.0;
};

struct Interval {
  double lo = 0, hi = 0;
  double length() const { return hi - lo; }
};

CoefficientField sample_random_medium(const RandomMediumSpec& spec,
                                      std::uint64_t seed, Interval window);

/// Spatially reflected field x -> -x (used for left-decaying solves).
CoefficientField reflect(const CoefficientField& f);

/// Re-checks the certified bounds on an n-point grid over [lo, hi],
/// with Lipschitz slack between samples.
FieldCheck check_field(const CoefficientField& f, double lo, double hi, int n);

}  // namespace frontlab
