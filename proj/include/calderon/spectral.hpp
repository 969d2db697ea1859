#pragma once

// Periodic-grid discretization of R^n (n = 2, 3) on the torus [-L, L)^n:
// complex scalar fields, unitary-convention discrete Fourier transforms
// (FFTW-backed), Fourier multipliers, masked quadrature and Sobolev norms.
//
// Conventions:
//   * sites        x_i = -L + i * dx,          dx = 2L / N
//   * frequencies  xi_m = m * (pi / L),        m in {-N/2, ..., N/2 - 1}
//   * forward transform  f_hat(xi) = (2 pi)^{-n/2} * sum_x f(x) e^{-i xi.x} dx^n
// so Parseval holds exactly on the lattice:
//   sum_xi |f_hat|^2 * (pi/L)^n = sum_x |f|^2 * dx^n.

#include <fftw3.h>

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <utility>

#include "calderon/util.hpp"

namespace calderon {

struct Grid {
  int n = 3;       // dimension
  int N = 0;       // samples per axis, even
  double L = 0.0;  // torus half-width

  double dx() const { return 2.0 * L / N; }
  std::size_t size() const { return ipow(N, n); }
  double cell_volume() const { return std::pow(dx(), n); }
  double freq_step() const { return pi / L; }
  double freq_cell() const { return std::pow(pi / L, n); }

  // FFT-ordered axis index -> signed integer mode in [-N/2, N/2).
  int mode_of(int i) const { return i < N / 2 ? i : i - N; }
  double coord_of(int i) const { return -L + i * dx(); }
  double freq_of(int i) const { return mode_of(i) * freq_step(); }

  bool operator==(const Grid& o) const {
    return n == o.n && N == o.N && L == o.L;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

inline Grid create_grid(int n, int N, double L) {
  if (n != 2 && n != 3) throw validation_error("create_grid: n must be 2 or 3");
  if (N % 2 != 0) throw validation_error("create_grid: N must be even");
  if (N < 4) throw validation_error("create_grid: N too small");
  if (!(L > 0.0)) throw validation_error("create_grid: L must be positive");
  return Grid{n, N, L};
}

using Idx3 = std::array<int, 3>;

// Visit all sites in flat row-major order (axis 0 slowest). Unused axes
// report index 0.
template <class F>
inline void for_each_site(const Grid& g, F&& f) {
  const int N = g.N;
  std::size_t flat = 0;
  if (g.n == 3) {
    for (int i0 = 0; i0 < N; ++i0)
      for (int i1 = 0; i1 < N; ++i1)
        for (int i2 = 0; i2 < N; ++i2, ++flat) f(flat, Idx3{i0, i1, i2});
  } else {
    for (int i0 = 0; i0 < N; ++i0)
      for (int i1 = 0; i1 < N; ++i1, ++flat) f(flat, Idx3{i0, i1, 0});
  }
}

inline Vec3 site_position(const Grid& g, const Idx3& i) {
  return {g.coord_of(i[0]), g.coord_of(i[1]),
          g.n == 3 ? g.coord_of(i[2]) : 0.0};
}

inline Vec3 site_frequency(const Grid& g, const Idx3& i) {
  return {g.freq_of(i[0]), g.freq_of(i[1]), g.n == 3 ? g.freq_of(i[2]) : 0.0};
}

inline std::size_t flat_index(const Grid& g, const Idx3& i) {
  std::size_t f = static_cast<std::size_t>(i[0]) * g.N + i[1];
  if (g.n == 3) f = f * g.N + i[2];
  return f;
}

namespace detail {

// Process-lifetime FFTW plan cache. Plan creation is not thread-safe and is
// serialized; new-array execution on distinct buffers is safe.
inline fftw_plan fft_plan(int n, int N, int sign) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(n, N, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const std::size_t total = ipow(N, n);
  std::vector<cplx> in(total), out(total);
  std::array<int, 3> dims{N, N, N};
  fftw_plan p = fftw_plan_dft(
      n, dims.data(), reinterpret_cast<fftw_complex*>(in.data()),
      reinterpret_cast<fftw_complex*>(out.data()), sign,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

inline void run_dft(const Grid& g, int sign, const std::vector<cplx>& in,
                    std::vector<cplx>& out) {
  fftw_plan p = fft_plan(g.n, g.N, sign);
  fftw_execute_dft(p,
                   reinterpret_cast<fftw_complex*>(
                       const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

inline int parity(const Idx3& i) { return (i[0] + i[1] + i[2]) & 1; }

}  // namespace detail

enum class Domain { space, frequency };

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(const Grid& g, Domain d)
      : grid_(g), domain_(d), v_(g.size(), cplx{0.0, 0.0}) {}

  template <class F>
  static ScalarField sample(const Grid& g, F&& f) {
    ScalarField out(g, Domain::space);
    for_each_site(g, [&](std::size_t flat, const Idx3& i) {
      out.v_[flat] = cplx(f(site_position(g, i)));
    });
    return out;
  }

  const Grid& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  std::vector<cplx>& data() { return v_; }
  const std::vector<cplx>& data() const { return v_; }
  cplx& operator[](std::size_t i) { return v_[i]; }
  const cplx& operator[](std::size_t i) const { return v_[i]; }
  std::size_t size() const { return v_.size(); }

  ScalarField to_frequency() const {
    if (domain_ == Domain::frequency) return *this;
    ScalarField out(grid_, Domain::frequency);
    detail::run_dft(grid_, FFTW_FORWARD, v_, out.v_);
    const double scale = grid_.cell_volume() *
                         std::pow(2.0 * pi, -0.5 * grid_.n);
    for_each_site(grid_, [&](std::size_t flat, const Idx3& i) {
      out.v_[flat] *= detail::parity(i) ? -scale : scale;
    });
    return out;
  }

  ScalarField to_space() const {
    if (domain_ == Domain::space) return *this;
    ScalarField tmp(grid_, Domain::frequency);
    for_each_site(grid_, [&](std::size_t flat, const Idx3& i) {
      tmp.v_[flat] = detail::parity(i) ? -v_[flat] : v_[flat];
    });
    ScalarField out(grid_, Domain::space);
    detail::run_dft(grid_, FFTW_BACKWARD, tmp.v_, out.v_);
    const double scale = std::pow(2.0 * pi, 0.5 * grid_.n) /
                         std::pow(2.0 * grid_.L, grid_.n);
    for (auto& z : out.v_) z *= scale;
    return out;
  }

  ScalarField to(Domain d) const {
    return d == Domain::space ? to_space() : to_frequency();
  }

 private:
  Grid grid_{};
  Domain domain_ = Domain::space;
  std::vector<cplx> v_;
};

// Returns a field in the same domain as the input; coefficients are
// multiplied by m(xi) mode-wise.
template <class M>
inline ScalarField apply_fourier_multiplier(const ScalarField& f, M&& m) {
  ScalarField g = f.to_frequency();
  for_each_site(g.grid(), [&](std::size_t flat, const Idx3& i) {
    const cplx w = cplx(m(site_frequency(g.grid(), i)));
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
      throw validation_error("apply_fourier_multiplier: non-finite value");
    g[flat] *= w;
  });
  return f.domain() == Domain::frequency ? g : g.to_space();
}

// d/dx_axis by the exact multiplier i*xi_axis.
inline ScalarField derivative(const ScalarField& f, int axis) {
  ScalarField g = f.to_frequency();
  const Grid& gr = g.grid();
  for_each_site(gr, [&](std::size_t flat, const Idx3& i) {
    g[flat] *= cplx(0.0, gr.freq_of(i[axis]));
  });
  return f.domain() == Domain::frequency ? g : g.to_space();
}

inline ScalarField laplacian(const ScalarField& f) {
  ScalarField g = f.to_frequency();
  const Grid& gr = g.grid();
  for_each_site(gr, [&](std::size_t flat, const Idx3& i) {
    const Vec3 xi = site_frequency(gr, i);
    g[flat] *= -dot(xi, xi);
  });
  return f.domain() == Domain::frequency ? g : g.to_space();
}

struct Region {
  enum class Kind { All, Ball, Shell };
  Kind kind = Kind::All;
  double r1 = 0.0, r2 = 0.0;

  static Region all() { return {}; }
  static Region ball(double r) { return {Kind::Ball, 0.0, r}; }
  static Region shell(double a, double b) { return {Kind::Shell, a, b}; }

  bool contains(double r) const {
    switch (kind) {
      case Kind::All: return true;
      case Kind::Ball: return r < r2;
      case Kind::Shell: return r1 <= r && r < r2;
    }
    return false;
  }
  double max_radius() const { return kind == Kind::All ? 0.0 : r2; }
};

// sum f(x) g(x) 1_region(x) dx^n over the lattice, deterministic order.
// Bilinear: conjugate g yourself for a sesquilinear pairing.
inline cplx integrate(const ScalarField& f, const ScalarField& g,
                      const Region& region = Region::all()) {
  if (f.grid() != g.grid()) throw validation_error("integrate: grid mismatch");
  if (region.kind != Region::Kind::All && region.max_radius() >= f.grid().L)
    throw validation_error("integrate: region radius must be < L");
  const ScalarField fs = f.to_space();
  const ScalarField gs = g.to_space();
  const Grid& gr = f.grid();
  NeumaierSumC acc;
  if (region.kind == Region::Kind::All) {
    for (std::size_t i = 0; i < fs.size(); ++i) acc.add(fs[i] * gs[i]);
  } else {
    for_each_site(gr, [&](std::size_t flat, const Idx3& i) {
      if (region.contains(norm(site_position(gr, i))))
        acc.add(fs[flat] * gs[flat]);
    });
  }
  return acc.value() * gr.cell_volume();
}

// ( sum_xi (1 + |xi|^2)^s |f_hat(xi)|^2 (pi/L)^n )^{1/2}.
inline double sobolev_norm(const ScalarField& f, double s) {
  const ScalarField g = f.to_frequency();
  const Grid& gr = g.grid();
  NeumaierSum acc;
  for_each_site(gr, [&](std::size_t flat, const Idx3& i) {
    const Vec3 xi = site_frequency(gr, i);
    acc.add(std::pow(1.0 + dot(xi, xi), s) * std::norm(g[flat]));
  });
  return std::sqrt(acc.value() * gr.freq_cell());
}

inline double l2_norm(const ScalarField& f) { return sobolev_norm(f, 0.0); }

// H^1 norm restricted to the ball |x| < radius, derivatives spectral.
inline double h1_ball_norm(const ScalarField& f, double radius) {
  if (!(radius < f.grid().L))
    throw validation_error("h1_ball_norm: radius must be < L");
  const Grid& gr = f.grid();
  const ScalarField fs = f.to_space();
  std::vector<ScalarField> parts;
  parts.push_back(fs);
  for (int d = 0; d < gr.n; ++d) parts.push_back(derivative(fs, d));
  NeumaierSum acc;
  for_each_site(gr, [&](std::size_t flat, const Idx3& i) {
    if (norm(site_position(gr, i)) < radius)
      for (const auto& p : parts) acc.add(std::norm(p[flat]));
  });
  return std::sqrt(acc.value() * gr.cell_volume());
}

// Pointwise helpers (same grid and domain required).

inline ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  if (a.grid() != b.grid() || a.domain() != b.domain())
    throw validation_error("multiply: field mismatch");
  ScalarField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

inline ScalarField lin_comb(cplx ca, const ScalarField& a, cplx cb,
                            const ScalarField& b) {
  if (a.grid() != b.grid() || a.domain() != b.domain())
    throw validation_error("lin_comb: field mismatch");
  ScalarField out = a;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = ca * a[i] + cb * b[i];
  return out;
}

inline ScalarField conjugate(const ScalarField& a) {
  ScalarField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(out[i]);
  return out;
}

inline ScalarField scale(const ScalarField& a, cplx c) {
  ScalarField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= c;
  return out;
}

inline double max_abs(const ScalarField& a) {
  double m = 0.0;
  for (const auto& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace calderon
