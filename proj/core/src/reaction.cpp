#include "frontlab/reaction.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace frontlab {

KppEnvelope make_envelope(const std::string& name) {
  KppEnvelope e;
  e.name = name;
  if (name == "logistic") {
    e.g = [](double u) { return u * (1.0 - u); };
    e.g_prime = [](double u) { return 1.0 - 2.0 * u; };
  } else if (name == "cubic") {
    e.g = [](double u) { return u * (1.0 - u) * (1.0 - 0.5 * u); };
    e.g_prime = [](double u) { return 1.0 - 3.0 * u + 1.5 * u * u; };
  } else {
    throw std::invalid_argument("unknown envelope: " + name +
                                " (stock: logistic, cubic)");
  }
  return e;
}

KppReaction make_reaction(const CoefficientField& field,
                          const KppEnvelope& env) {
  KppReaction r;
  r.field = field;
  r.envelope = env;
  auto a = field.a;
  auto g = env.g;
  r.f = [a, g](double x, double u) { return a(x) * g(u); };
  // |f_u| <= a_plus * max|g'|; for the stock envelopes max|g'| = 1.
  double gmax = 1.0;
  if (env.g_prime) {
    const int m = 2001;
    gmax = 0.0;
    for (int i = 0; i < m; ++i)
      gmax = std::max(gmax, std::abs(env.g_prime(i / double(m - 1))));
  }
  r.lip_u = field.a_plus * gmax;
  return r;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL");
  for (const auto& m : margins)
    os << "  " << m.name << "=" << m.value << (m.pass ? "" : " [FAIL]");
  return os.str();
}

namespace {

double derivative_at(const std::function<double(double)>& g, double u0,
                     double side) {
  // one-sided Richardson: 2 f(eps/2) - f(eps) kills the linear error term
  const double eps = 1e-5;
  const double f1 = (g(u0 + side * eps) - g(u0)) / (side * eps);
  const double f2 = (g(u0 + side * eps / 2) - g(u0)) / (side * eps / 2);
  return 2.0 * f2 - f1;
}

// integral of (u - g(u))/u^2 over [eps, 1], composite Simpson
double kpp_integral(const std::function<double(double)>& g, double eps) {
  const int n = 20000;  // even
  const double h = (1.0 - eps) / n;
  auto f = [&](double u) { return (u - g(u)) / (u * u); };
  double s = f(eps) + f(1.0);
  for (int i = 1; i < n; ++i) s += f(eps + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

ValidationReport validate_reaction(const KppReaction& r,
                                   const std::vector<double>& x_grid,
                                   const std::vector<double>& u_grid) {
  constexpr double kTol = -1e-12;
  ValidationReport rep;
  auto push = [&](const std::string& name, double margin) {
    MarginEntry m{name, margin, margin >= kTol};
    rep.pass = rep.pass && m.pass;
    rep.margins.push_back(m);
  };

  const auto& g = r.envelope.g;

  // envelope laws (1.3)/(1.3a)
  push("g(0)", -std::abs(g(0.0)));
  push("g(1)", -std::abs(g(1.0)));
  push("g_prime_at_0", -std::abs(derivative_at(g, 0.0, +1.0) - 1.0) + 1e-7);
  double g_pos = 1e300, g_le_u = 1e300, gp_le_1 = 1e300;
  for (double u : u_grid) {
    if (u <= 0.0 || u >= 1.0) continue;
    g_pos = std::min(g_pos, g(u));
    g_le_u = std::min(g_le_u, u - g(u));
    if (r.envelope.g_prime)
      gp_le_1 = std::min(gp_le_1, 1.0 - r.envelope.g_prime(u));
  }
  if (!r.envelope.g_prime) {
    for (std::size_t i = 0; i + 1 < u_grid.size(); ++i) {
      const double du = u_grid[i + 1] - u_grid[i];
      if (du <= 0) continue;
      gp_le_1 = std::min(gp_le_1, 1.0 - (g(u_grid[i + 1]) - g(u_grid[i])) / du);
    }
  }
  push("g_positive", g_pos);
  push("g_le_u", g_le_u);
  push("g_prime_le_1", gp_le_1 + 1e-10);

  // finiteness of int (u-g)/u^2: quadrature must stabilize as eps -> 0
  const double i6 = kpp_integral(g, 1e-6);
  const double i8 = kpp_integral(g, 1e-8);
  rep.kpp_integral = i8;
  push("kpp_integral_converged", 1e-4 - std::abs(i8 - i6));

  // reaction laws (1.2)
  double f0 = 0, f1 = 0, lower = 1e300, upper = 1e300;
  for (double x : x_grid) {
    const double ax = r.field.a(x);
    f0 = std::max(f0, std::abs(r.f(x, 0.0)));
    f1 = std::max(f1, std::abs(r.f(x, 1.0)));
    for (double u : u_grid) {
      if (u < 0.0 || u > 1.0) continue;
      const double fv = r.f(x, u);
      lower = std::min(lower, fv - ax * g(u));
      upper = std::min(upper, ax * u - fv);
    }
  }
  push("f(x,0)", -f0);
  push("f(x,1)", -f1);
  push("f_ge_ag", lower);
  push("f_le_au", upper);
  return rep;
}

}  // namespace frontlab
