#pragma once

// Test-only helpers. The oracles here evaluate Fourier series and products by
// direct summation so they share no code path with the FFT-based routines.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "sqg/spectral.hpp"

namespace sqg::testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Random conjugate-symmetric field supported on |k_i| <= cutoff.
inline SpectralField random_band_limited(const GridPtr& grid, std::uint64_t seed, int cutoff = -1,
                                         bool mean_free = true) {
  if (cutoff < 0) cutoff = grid->dealias_cutoff();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  SpectralField f(grid);
  for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
    for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
      if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
      if (k1 == 0 && k2 == 0) {
        f.at(0, 0) = mean_free ? 0.0 : nd(rng);
        continue;
      }
      const Complex c(nd(rng), nd(rng));
      f.at(k1, k2) = c;
      f.at(-k1, -k2) = std::conj(c);
    }
  }
  return f;
}

/// Direct evaluation of sum_k c_k exp(2 pi i k.x) at one point.
inline double evaluate(const SpectralField& f, double x, double y) {
  const Grid& g = *f.grid;
  Complex acc{};
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (f.coeffs[s] == Complex{}) continue;
    acc += f.coeffs[s] * std::exp(Complex(0.0, kTwoPi * (g.k1(s) * x + g.k2(s) * y)));
  }
  return acc.real();
}

/// div(v theta) restricted to the dealias mask, from the exact convolution
///   (v_j theta)^(k) = sum_{p+q=k} v_j^(p) theta^(q)
/// over integer wavevectors (no wrap-around).
inline SpectralField convolution_divergence(const SpectralField& theta, const SpectralField& v1,
                                            const SpectralField& v2) {
  const Grid& g = *theta.grid;
  const int cut = g.dealias_cutoff();
  SpectralField out(theta.grid);
  for (int k1 = -cut; k1 <= cut; ++k1) {
    for (int k2 = -cut; k2 <= cut; ++k2) {
      Complex f1{};
      Complex f2{};
      for (int p1 = -cut; p1 <= cut; ++p1) {
        for (int p2 = -cut; p2 <= cut; ++p2) {
          const int q1 = k1 - p1;
          const int q2 = k2 - p2;
          if (std::abs(q1) > cut || std::abs(q2) > cut) continue;
          const Complex th = theta.at(q1, q2);
          f1 += v1.at(p1, p2) * th;
          f2 += v2.at(p1, p2) * th;
        }
      }
      out.at(k1, k2) = Complex(0.0, kTwoPi) * (static_cast<double>(k1) * f1 + static_cast<double>(k2) * f2);
    }
  }
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
  return m;
}

inline double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (const auto& z : a.coeffs) m = std::max(m, std::abs(z));
  return m;
}

template <class F>
PhysicalField sample(const GridPtr& grid, F f) {
  PhysicalField out(grid);
  for (int i = 0; i < grid->n(); ++i)
    for (int j = 0; j < grid->n(); ++j) out(i, j) = f(i * grid->dx(), j * grid->dx());
  return out;
}

}  // namespace sqg::testing
