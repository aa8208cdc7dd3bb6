#include "frontlab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "frontlab/errors.hpp"
#include "frontlab/rng.hpp"

namespace frontlab {

namespace {

constexpr double kBumpSupportWidths = 8.0;  // e^{-64} is below double noise

double gaussian_bump(double x, const Bump& b) {
  const double r = (x - b.center) / b.width;
  if (std::abs(r) > kBumpSupportWidths) return 0.0;
  return b.amplitude * std::exp(-r * r);
}

// max |d/dx exp(-(x/w)^2)| = sqrt(2/e)/w
double bump_lipschitz(const Bump& b) {
  return std::abs(b.amplitude) * std::sqrt(2.0 / std::exp(1.0)) / b.width;
}

}  // namespace

bool CoefficientField::usable_for_sandwich() const {
  return q_plus <= 2.0 * std::sqrt(aB_minus) + 1e-15;
}

CoefficientField make_homogeneous(double a0, double B0, double q0) {
  if (!(a0 > 0.0) || !(B0 > 0.0))
    throw InvalidFieldError("make_homogeneous: a0 and B0 must be positive");
  CoefficientField f;
  f.a = [a0](double) { return a0; };
  f.B = [B0](double) { return B0; };
  f.q = [q0](double) { return q0; };
  f.a_minus = f.a_plus = a0;
  f.B_minus = f.B_plus = B0;
  f.q_plus = std::abs(q0);
  f.aB_minus = a0 * B0;
  f.lipschitz = 0.0;
  f.kind = FieldKind::Homogeneous;
  return f;
}

CoefficientField make_bump_field(const CoefficientField& base,
                                 const std::vector<Bump>& bumps) {
  if (bumps.empty()) return base;

  auto list = std::make_shared<std::vector<Bump>>(bumps);
  auto base_a = base.a;
  auto a = [base_a, list](double x) {
    double v = base_a(x);
    for (const auto& b : *list) v += gaussian_bump(x, b);
    return v;
  };

  double lip = base.lipschitz;
  double lo = 0, hi = 0;
  for (const auto& b : *list) {
    lip += bump_lipschitz(b);
    lo = std::min(lo, b.center - kBumpSupportWidths * b.width);
    hi = std::max(hi, b.center + kBumpSupportWidths * b.width);
  }

  // Dense sampling over the perturbed region plus Lipschitz padding.
  const int n = 20001;
  const double h = (hi - lo) / (n - 1);
  double a_min = base.a_minus, a_max = base.a_plus;
  bool all_nonneg = true;
  for (const auto& b : *list) all_nonneg = all_nonneg && b.amplitude >= 0.0;
  double smin = 1e300, smax = -1e300;
  for (int i = 0; i < n; ++i) {
    const double v = a(lo + i * h);
    smin = std::min(smin, v);
    smax = std::max(smax, v);
  }
  const double pad = lip * h / 2.0;
  a_min = std::min(a_min, smin - pad);
  a_max = std::max(a_max, smax + pad);
  if (all_nonneg) a_min = std::max(a_min, base.a_minus);
  if (!(a_min > 0.0))
    throw InvalidFieldError("make_bump_field: bumps drive a(x) <= 0");

  CoefficientField f = base;
  f.a = a;
  f.a_minus = a_min;
  f.a_plus = a_max;
  f.aB_minus = a_min * base.B_minus;  // B untouched by bumps
  f.lipschitz = lip;
  f.kind = FieldKind::Bump;
  return f;
}

CoefficientField make_periodic_field(double a0, double B0, double q0,
                                     double cell, double amp) {
  if (!(a0 > 0.0) || !(B0 > 0.0) || !(cell > 0.0))
    throw InvalidFieldError("make_periodic_field: a0, B0, cell must be positive");
  if (std::abs(amp) >= 1.0)
    throw InvalidFieldError("make_periodic_field: |amp| must be < 1");
  CoefficientField f;
  const double k = 2.0 * M_PI / cell;
  f.a = [a0, amp, k](double x) { return a0 * (1.0 + amp * std::sin(k * x)); };
  f.B = [B0](double) { return B0; };
  f.q = [q0](double) { return q0; };
  f.a_minus = a0 * (1.0 - std::abs(amp));
  f.a_plus = a0 * (1.0 + std::abs(amp));
  f.B_minus = f.B_plus = B0;
  f.q_plus = std::abs(q0);
  f.aB_minus = f.a_minus * B0;
  f.lipschitz = a0 * std::abs(amp) * k;
  f.kind = FieldKind::Periodic;
  f.cell = cell;
  return f;
}

namespace {

struct PoissonRealization {
  std::vector<Bump> bumps;  // sorted by center
  double margin = 0;
};

PoissonRealization realize_poisson(const RandomMediumSpec& spec,
                                   std::uint64_t seed, Interval window) {
  PoissonRealization out;
  out.margin = kBumpSupportWidths * spec.mollifier_width + 1.0;
  const auto klo = static_cast<std::int64_t>(
      std::floor(window.lo - out.margin));
  const auto khi = static_cast<std::int64_t>(
      std::ceil(window.hi + out.margin));
  for (std::int64_t k = klo; k <= khi; ++k) {
    auto rng = rng_stream(seed, k);
    std::poisson_distribution<int> count(spec.intensity);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    std::uniform_real_distribution<double> amp(spec.amp_lo, spec.amp_hi);
    const int m = count(rng);
    for (int j = 0; j < m; ++j) {
      Bump b;
      b.center = static_cast<double>(k) + pos(rng);
      b.amplitude = amp(rng);
      b.width = spec.mollifier_width;
      out.bumps.push_back(b);
    }
  }
  std::sort(out.bumps.begin(), out.bumps.end(),
            [](const Bump& a, const Bump& b) { return a.center < b.center; });
  return out;
}

std::vector<double> realize_checkerboard(const RandomMediumSpec& spec,
                                         std::uint64_t seed,
                                         std::int64_t klo, std::int64_t khi) {
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(khi - klo + 1));
  for (std::int64_t k = klo; k <= khi; ++k) {
    auto rng = rng_stream(seed, k);
    std::uniform_real_distribution<double> amp(spec.amp_lo, spec.amp_hi);
    vals.push_back(amp(rng));
  }
  return vals;
}

}  // namespace

CoefficientField sample_random_medium(const RandomMediumSpec& spec,
                                      std::uint64_t seed, Interval window) {
  if (!(spec.a0 > 0.0) || !(spec.B0 > 0.0))
    throw InvalidFieldError("sample_random_medium: base a0, B0 must be positive");
  if (spec.amp_hi < spec.amp_lo)
    throw InvalidFieldError("sample_random_medium: empty amplitude range");
  if (!(spec.mollifier_width > 0.0))
    throw InvalidFieldError("sample_random_medium: mollifier width must be positive");
  if (spec.a0 + std::min(spec.amp_lo, 0.0) <= 0.0)
    throw InvalidFieldError("sample_random_medium: amplitudes drive a <= 0");

  CoefficientField f;
  const double a0 = spec.a0;
  const double wlo = window.lo, whi = window.hi;

  if (spec.model == RandomModel::PoissonBumps) {
    if (spec.amp_lo < 0.0)
      throw InvalidFieldError(
          "sample_random_medium: PoissonBumps needs non-negative amplitudes");
    auto real = std::make_shared<PoissonRealization>(
        realize_poisson(spec, seed, window));
    const double support = kBumpSupportWidths * spec.mollifier_width;
    const double lo_ok = wlo - 0.5, hi_ok = whi + 0.5;
    f.a = [a0, real, support, lo_ok, hi_ok](double x) {
      if (x < lo_ok || x > hi_ok)
        throw std::domain_error("random field evaluated outside its window");
      // bumps combined by max: bounded by a0 + amp_hi regardless of overlap
      double best = 0.0;
      const auto& bs = real->bumps;
      auto it = std::lower_bound(
          bs.begin(), bs.end(), x - support,
          [](const Bump& b, double v) { return b.center < v; });
      for (; it != bs.end() && it->center <= x + support; ++it)
        best = std::max(best, gaussian_bump(x, *it));
      return a0 + best;
    };
    f.a_minus = a0;
    f.a_plus = a0 + spec.amp_hi;
    f.lipschitz = std::sqrt(2.0 / std::exp(1.0)) * spec.amp_hi /
                  spec.mollifier_width;
  } else {
    const double margin = kBumpSupportWidths * spec.mollifier_width + 1.0;
    const auto klo = static_cast<std::int64_t>(std::floor(wlo - margin));
    const auto khi = static_cast<std::int64_t>(std::ceil(whi + margin));
    auto vals = std::make_shared<std::vector<double>>(
        realize_checkerboard(spec, seed, klo, khi));
    const double w = spec.mollifier_width;
    const double lo_ok = wlo - 0.5, hi_ok = whi + 0.5;
    f.a = [a0, vals, klo, khi, w, lo_ok, hi_ok](double x) {
      if (x < lo_ok || x > hi_ok)
        throw std::domain_error("random field evaluated outside its window");
      // cell indicator mollified by a Gaussian: weights telescope to 1
      const double s = w * std::sqrt(2.0);
      const auto ja = std::max(
          klo, static_cast<std::int64_t>(std::floor(x - kBumpSupportWidths * w - 1)));
      const auto jb = std::min(
          khi, static_cast<std::int64_t>(std::ceil(x + kBumpSupportWidths * w)));
      double acc = 0.0;
      for (std::int64_t j = ja; j <= jb; ++j) {
        const double t0 = (x - static_cast<double>(j)) / s;
        const double t1 = (x - static_cast<double>(j) - 1.0) / s;
        const double wk = 0.5 * (std::erf(t0) - std::erf(t1));
        acc += wk * (*vals)[static_cast<std::size_t>(j - klo)];
      }
      return a0 + acc;
    };
    f.a_minus = a0 + spec.amp_lo;
    f.a_plus = a0 + spec.amp_hi;
    f.lipschitz = (spec.amp_hi - spec.amp_lo) /
                  (spec.mollifier_width * std::sqrt(2.0 * M_PI));
  }

  const double B0 = spec.B0, q0 = spec.q0;
  f.B = [B0](double) { return B0; };
  f.q = [q0](double) { return q0; };
  f.B_minus = f.B_plus = B0;
  f.q_plus = std::abs(q0);
  f.aB_minus = f.a_minus * B0;
  f.kind = FieldKind::Random;
  f.window_lo = wlo;
  f.window_hi = whi;
  return f;
}

CoefficientField reflect(const CoefficientField& f) {
  CoefficientField r = f;
  auto a = f.a, B = f.B, q = f.q;
  r.a = [a](double x) { return a(-x); };
  r.B = [B](double x) { return B(-x); };
  r.q = [q](double x) { return -q(-x); };  // drift flips sign under x -> -x
  r.window_lo = -f.window_hi;
  r.window_hi = -f.window_lo;
  return r;
}

FieldCheck check_field(const CoefficientField& f, double lo, double hi, int n) {
  FieldCheck c;
  const double h = (hi - lo) / (n - 1);
  const double slack = f.lipschitz * h / 2.0 + 1e-12;
  double a_low = 1e300, a_high = -1e300, B_low = 1e300, B_high = -1e300;
  double q_worst = 0, aB_low = 1e300;
  for (int i = 0; i < n; ++i) {
    const double x = lo + i * h;
    const double a = f.a(x), B = f.B(x), q = f.q(x);
    a_low = std::min(a_low, a);
    a_high = std::max(a_high, a);
    B_low = std::min(B_low, B);
    B_high = std::max(B_high, B);
    q_worst = std::max(q_worst, std::abs(q));
    aB_low = std::min(aB_low, a * B);
  }
  c.worst_a_low = a_low - f.a_minus;
  c.worst_a_high = f.a_plus - a_high;
  c.worst_B_low = B_low - f.B_minus;
  c.worst_B_high = f.B_plus - B_high;
  c.worst_q = f.q_plus - q_worst;
  c.worst_aB = aB_low - f.aB_minus;
  c.pass = c.worst_a_low >= -slack && c.worst_a_high >= -slack &&
           c.worst_B_low >= -slack && c.worst_B_high >= -slack &&
           c.worst_q >= -slack && c.worst_aB >= -2.0 * slack &&
           a_low > 0.0 && B_low > 0.0;
  if (!c.pass) c.note = "certified bounds violated beyond Lipschitz slack";
  return c;
}

}  // namespace frontlab
