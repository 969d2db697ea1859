#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace calderon {

inline constexpr double pi = 3.14159265358979323846;

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

// Precondition / schema violations. The CLI maps these to exit code 2.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures: divergence, non-convergence, blow-up. CLI exit code 3.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 operator*(double c, const Vec3& a) {
  return {c * a[0], c * a[1], c * a[2]};
}

inline std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// Neumaier compensated summation. Adding terms in a fixed order makes
// reductions reproducible across runs regardless of worker count.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct NeumaierSumC {
  NeumaierSum re, im;
  void add(cplx v) {
    re.add(v.real());
    im.add(v.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

// C^inf monotone step: 0 on (-inf, 0], 1 on [1, inf).
inline double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

inline double smooth_step_deriv(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  const double ap = a / (u * u);
  const double bp = -b / ((1.0 - u) * (1.0 - u));
  const double denom = (a + b) * (a + b);
  return (ap * b - a * bp) / denom;
}

// Deterministic, roughly equal-area point set on the unit sphere.
inline std::vector<Vec3> fibonacci_sphere(int m) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(m));
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < m; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / m;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
  }
  return pts;
}

}  // namespace calderon
