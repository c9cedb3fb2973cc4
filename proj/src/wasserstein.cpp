#include "mlebound/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mlebound/parallel.hpp"

namespace mlebound {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double horner(const double* c, int degree, double x) {
  double acc = c[degree];
  for (int i = degree - 1; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

// Antiderivative of Phi.
double phi_integral(double x) { return x * std_normal_cdf(x) + std_normal_pdf(x); }

// Integral of (c - Phi) over [a, b].
double signed_piece(double c, double a, double b) {
  return c * (b - a) - (phi_integral(b) - phi_integral(a));
}

// Integral of |c - Phi| over [a, b] for finite a <= b and 0 < c < 1.
double abs_piece(double c, double a, double b) {
  if (!(b > a)) return 0.0;
  const double q = std_normal_quantile(c);
  if (b <= q) return signed_piece(c, a, b);
  if (a >= q) return -signed_piece(c, a, b);
  return signed_piece(c, a, q) - signed_piece(c, q, b);
}

// Contribution of interval i in 0..N: (-inf, x_1], [x_i, x_{i+1}], [x_N, inf).
double interval_contribution(std::span<const double> x, std::size_t i) {
  const std::size_t n = x.size();
  if (i == 0) return phi_integral(x[0]);  // F_emp = 0 to the left of the sample
  if (i == n) return std_normal_pdf(x[n - 1]) - x[n - 1] * std_normal_sf(x[n - 1]);
  const double c = static_cast<double>(i) / static_cast<double>(n);
  return abs_piece(c, x[i - 1], x[i]);
}

std::vector<double> sorted_values(const SampleSet& s) {
  if (s.size() == 0) throw std::invalid_argument("empirical W1 needs at least one sample");
  std::vector<double> v(s.values().begin(), s.values().end());
  if (!s.is_sorted()) std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

void NormalParams::validate() const {
  if (!std::isfinite(mean) || !std::isfinite(sd) || sd < 0.0) {
    throw std::invalid_argument("normal parameters must be finite with sd >= 0");
  }
}

SampleSet::SampleSet(std::vector<double> values, bool sorted)
    : values_(std::move(values)), sorted_(sorted) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("sample set contains a non-finite value");
  }
  if (sorted_ && !std::is_sorted(values_.begin(), values_.end())) {
    throw std::invalid_argument("sample set flagged sorted but is not");
  }
}

SampleSet SampleSet::sorted() const {
  if (sorted_) return *this;
  std::vector<double> v = values_;
  std::sort(v.begin(), v.end());
  return SampleSet(std::move(v), true);
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal quantile needs 0 < p < 1");

  static constexpr double a[] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                                 1.9715909503065514427e+3, 1.3731693765509461125e+4,
                                 4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                 3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[] = {1.0,
                                 4.2313330701600911252e+1, 6.8718700749205790830e+2,
                                 5.3941960214247511077e+3, 2.1213794301586595867e+4,
                                 3.9307895800092710610e+4, 2.8729085735721942674e+4,
                                 5.2264952788528545610e+3};
  static constexpr double c[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                 5.76949722146069140550e0, 3.64784832476320460504e0,
                                 1.27045825245236838258e0, 2.41780725177450611770e-1,
                                 2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[] = {1.0,
                                 2.05319162663775882187e0, 1.67638483018380384940e0,
                                 6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                 1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                 1.05075007164441684324e-9};
  static constexpr double e[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                 1.78482653991729133580e0, 2.96560571828504891230e-1,
                                 2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                 2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[] = {1.0,
                                 5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                 1.48753612908506148525e-2, 7.86869131145613259100e-4,
                                 1.84631831751005468180e-5, 1.42151175831644588870e-7,
                                 2.04426310338993978564e-15};

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(a, 7, r) / horner(b, 7, r);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = horner(c, 7, r) / horner(d, 7, r);
  } else {
    r -= 5.0;
    x = horner(e, 7, r) / horner(f, 7, r);
  }
  return q < 0.0 ? -x : x;
}

double exact_w1_normal(const NormalParams& a, const NormalParams& b) {
  a.validate();
  b.validate();
  const double delta = std::abs(a.mean - b.mean);
  const double s = std::abs(a.sd - b.sd);
  if (s == 0.0) return delta;
  return s * std::sqrt(2.0 / std::numbers::pi) * std::exp(-delta * delta / (2.0 * s * s)) +
         delta * (1.0 - 2.0 * std_normal_cdf(-delta / s));
}

double empirical_w1_std_normal(const SampleSet& samples) {
  const std::vector<double> x = sorted_values(samples);
  const std::size_t intervals = x.size() + 1;
  const std::size_t chunks = chunk_count(intervals, kIndexChunk);
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t ch = 0; ch < chunks; ++ch) {
    const std::size_t hi = std::min(intervals, (ch + 1) * kIndexChunk);
    double acc = 0.0;
    for (std::size_t i = ch * kIndexChunk; i < hi; ++i) acc += interval_contribution(x, i);
    partial[ch] = acc;
  }
  return ordered_sum(partial);
}

double empirical_w1_std_normal_serial(const SampleSet& samples) {
  const std::vector<double> x = sorted_values(samples);
  double total = 0.0;
  for (std::size_t i = 0; i <= x.size(); ++i) total += interval_contribution(x, i);
  return total;
}

double quantile_coupling_w1(const SampleSet& samples) {
  const std::vector<double> x = sorted_values(samples);
  const double n = static_cast<double>(x.size());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += std::abs(x[i] - std_normal_quantile((static_cast<double>(i) + 0.5) / n));
  }
  return total / n;
}

}  // namespace mlebound
