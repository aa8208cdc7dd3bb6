#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/coefficients.hpp"

namespace frontlab {

/// KPP comparison envelope g: g(0) = g(1) = 0, g'(0) = 1, 0 < g(u) <= u
/// and g'(u) <= 1 on (0,1), with finite integral of (u - g(u))/u^2.
struct KppEnvelope {
  std::function<double(double)> g;
  std::function<double(double)> g_prime;  // optional analytic derivative
  double g_prime_at_0 = 1.0;
  std::string name;  // "logistic", "cubic", or empty for custom
};

/// Stock envelopes: "logistic" g(u) = u(1-u) and "cubic"
/// g(u) = u(1-u)(1-u/2).  Throws std::invalid_argument for other names.
KppEnvelope make_envelope(const std::string& name);

/// Reaction f(x,u) squeezed between a(x) g(u) and a(x) u.
struct KppReaction {
  std::function<double(double, double)> f;
  CoefficientField field;
  KppEnvelope envelope;
  double lip_u = 0.0;  // Lipschitz constant of f in u (time-step bound)
};

/// The canonical instance f(x,u) = a(x) g(u).
KppReaction make_reaction(const CoefficientField& field, const KppEnvelope& g);

struct MarginEntry {
  std::string name;
  double value = 0;   // worst-case margin; >= -1e-12 passes
  bool pass = true;
};

struct ValidationReport {
  bool pass = true;
  std::vector<MarginEntry> margins;
  double kpp_integral = 0;  // quadrature of (u - g(u))/u^2 over (0,1)
  std::string summary() const;
};

/// Checks f(x,0) = f(x,1) = 0 and a g <= f <= a u on the given grids,
/// plus the envelope laws for g.  Failures are report entries, not errors.
ValidationReport validate_reaction(const KppReaction& r,
                                   const std::vector<double>& x_grid,
                                   const std::vector<double>& u_grid);

}  // namespace frontlab
