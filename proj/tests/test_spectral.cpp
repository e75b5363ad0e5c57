#include <cmath>
#include <algorithm>
#include <functional>
#include <random>

#include "doctest.h"
#include "sqg/errors.hpp"
#include "sqg/spectral.hpp"
#include "support.hpp"

using namespace sqg;
using sqg::testing::kTwoPi;

namespace {

SpectralField cos_y(const GridPtr& g, double amp = 1.0) {
  SpectralField f(g);
  f.at(0, 1) = 0.5 * amp;
  f.at(0, -1) = 0.5 * amp;
  return f;
}

PhysicalField random_physical(const GridPtr& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PhysicalField f(g);
  for (auto& v : f.values) v = u(rng);
  return f;
}

}  // namespace

TEST_CASE("make_grid builds the wavevector tables") {
  const auto g = make_grid(8);
  CHECK(g->dx() == 0.125);
  std::vector<int> ks;
  for (int a = 0; a < 8; ++a) ks.push_back(g->wavenumber(a));
  std::sort(ks.begin(), ks.end());
  CHECK(ks == std::vector<int>{-4, -3, -2, -1, 0, 1, 2, 3});

  const auto g12 = make_grid(12);
  CHECK(g12->dealias_cutoff() == 4);
  CHECK(g12->retained(g12->slot(4, -4)));
  CHECK_FALSE(g12->retained(g12->slot(5, 0)));
  CHECK_FALSE(g12->retained(g12->slot(0, -5)));
  std::size_t kept = 0;
  for (std::size_t s = 0; s < g12->size(); ++s) kept += g12->retained(s);
  CHECK(kept == 9 * 9);

  CHECK_THROWS_AS(make_grid(7), ConfigError);
  CHECK_THROWS_AS(make_grid(6), ConfigError);
  CHECK_THROWS_AS(make_grid(0), ConfigError);
}

TEST_CASE("forward transform normalisation") {
  const auto g = make_grid(16);
  SUBCASE("zero field") {
    const auto F = spectral::forward(PhysicalField(g));
    CHECK(testing::max_abs(F) == 0.0);
  }
  SUBCASE("single mode cos(2 pi y)") {
    const auto F = spectral::forward(testing::sample(g, [](double, double y) { return std::cos(kTwoPi * y); }));
    CHECK(std::abs(F.at(0, 1) - 0.5) < 1e-12);
    CHECK(std::abs(F.at(0, -1) - 0.5) < 1e-12);
    SpectralField expect = cos_y(g);
    CHECK(testing::max_abs_diff(F, expect) < 1e-12);
    CHECK(symmetry_defect(F) == 0.0);
  }
}

TEST_CASE("inverse transform") {
  const auto g = make_grid(16);
  CHECK(testing::max_abs_diff(spectral::inverse(SpectralField(g)).values, PhysicalField(g).values) == 0.0);

  SpectralField F(g);
  F.at(1, 0) = 0.5;
  F.at(-1, 0) = 0.5;
  const auto f = spectral::inverse(F);
  const auto expect = testing::sample(g, [](double x, double) { return std::cos(kTwoPi * x); });
  CHECK(testing::max_abs_diff(f.values, expect.values) < 1e-12);

  SUBCASE("asymmetric input is rejected") {
    SpectralField bad(g);
    bad.at(2, 3) = Complex(1.0, 0.0);
    CHECK_THROWS_AS(spectral::inverse(bad), DataIntegrityError);
  }
}

TEST_CASE("transform roundtrips") {
  for (int n : {8, 16, 32, 50}) {
    const auto g = make_grid(n);
    for (unsigned seed = 0; seed < 5; ++seed) {
      const auto f = random_physical(g, seed);
      CHECK(testing::max_abs_diff(spectral::inverse(spectral::forward(f)).values, f.values) < 1e-12);
      const auto F = testing::random_band_limited(g, seed, n / 2 - 1, false);
      CHECK(testing::max_abs_diff(spectral::forward(spectral::inverse(F)), F) < 1e-12);
    }
  }
}

TEST_CASE("fractional Laplacian multipliers") {
  const auto g = make_grid(16);
  const auto th = cos_y(g);
  CHECK(testing::max_abs_diff(spectral::frac_laplacian_half(th), kTwoPi * cos_y(g)) < 1e-12);

  SpectralField c(g);
  c.at(0, 0) = 3.0;
  CHECK(testing::max_abs(spectral::frac_laplacian_half(c)) == 0.0);
  CHECK(testing::max_abs(spectral::inv_frac_laplacian_half(c)) == 0.0);

  SpectralField two(g);
  two.at(1, 0) = two.at(-1, 0) = 0.5;
  two.at(2, 0) = two.at(-2, 0) = 0.5;
  SpectralField expect(g);
  expect.at(1, 0) = expect.at(-1, 0) = 0.5 * kTwoPi;
  expect.at(2, 0) = expect.at(-2, 0) = 0.5 * 2.0 * kTwoPi;
  CHECK(testing::max_abs_diff(spectral::frac_laplacian_half(two), expect) < 1e-12);

  CHECK(testing::max_abs_diff(spectral::inv_frac_laplacian_half(th), (1.0 / kTwoPi) * cos_y(g)) < 1e-15);
  CHECK(testing::max_abs(spectral::inv_frac_laplacian_half(SpectralField(g))) == 0.0);

  const auto r = testing::random_band_limited(g, 11, 7);
  CHECK(testing::max_abs_diff(spectral::frac_laplacian_half(spectral::inv_frac_laplacian_half(r)), r) < 1e-12);
}

TEST_CASE("Helmholtz filter") {
  const auto g = make_grid(16);
  const auto r = testing::random_band_limited(g, 3, 7, false);
  const auto same = spectral::helmholtz_inverse(r, 0.0);
  CHECK(same.coeffs == r.coeffs);
  CHECK(spectral::helmholtz_apply(r, 0.0).coeffs == r.coeffs);

  const auto filtered = spectral::helmholtz_inverse(cos_y(g), 0.5);
  const double m = 1.0 / (1.0 + std::numbers::pi * std::numbers::pi);
  CHECK(std::abs(filtered.at(0, 1) - 0.5 * m) < 1e-15);
  CHECK(m == doctest::Approx(0.0920).epsilon(1e-3));

  const auto amplified = spectral::helmholtz_apply(cos_y(g), 0.1);
  CHECK(std::abs(amplified.at(0, 1).real() - 0.5 * (1.0 + kTwoPi * kTwoPi * 0.01)) < 1e-14);
  CHECK(2.0 * amplified.at(0, 1).real() == doctest::Approx(1.3948).epsilon(1e-4));

  for (double alpha : {0.01, 0.1, 0.5, 1.0}) {
    CHECK(testing::max_abs_diff(spectral::helmholtz_inverse(spectral::helmholtz_apply(r, alpha), alpha), r) < 1e-12);
    CHECK(spectral::helmholtz_apply(r, alpha).coeffs[0] == r.coeffs[0]);
    CHECK(spectral::l2_norm_sq(spectral::helmholtz_inverse(r, alpha)) <= spectral::l2_norm_sq(r));
  }
}

TEST_CASE("perpendicular gradient and gradient") {
  const auto g = make_grid(16);
  const auto psi = (1.0 / kTwoPi) * cos_y(g);
  const auto [v1, v2] = spectral::perp_gradient(psi);
  const auto u1 = spectral::inverse(v1);
  const auto u2 = spectral::inverse(v2);
  const auto s = testing::sample(g, [](double, double y) { return std::sin(kTwoPi * y); });
  CHECK(testing::max_abs_diff(u1.values, s.values) < 1e-12);
  CHECK(testing::max_abs(v2) == 0.0);

  SpectralField c(g);
  c.at(0, 0) = 2.0;
  CHECK(testing::max_abs(spectral::perp_gradient(c).first) == 0.0);
  CHECK(testing::max_abs(spectral::gradient(c).second) == 0.0);

  const auto [gx, gy] = spectral::gradient(cos_y(g));
  CHECK(testing::max_abs(gx) == 0.0);
  const auto gyp = spectral::inverse(gy);
  const auto expect = testing::sample(g, [](double, double y) { return -kTwoPi * std::sin(kTwoPi * y); });
  CHECK(testing::max_abs_diff(gyp.values, expect.values) < 1e-12);

  SUBCASE("velocity is divergence free mode by mode") {
    const auto r = testing::random_band_limited(make_grid(32), 5, 15);
    const auto [w1, w2] = spectral::perp_gradient(r);
    // Relative to the size of the individual terms 2 pi k_j v_j.
    const double scale = kTwoPi * 16 * std::max(testing::max_abs(w1), testing::max_abs(w2));
    CHECK(testing::max_abs(spectral::divergence(w1, w2)) <= 1e-14 * scale);
  }
}

TEST_CASE("Parseval for the gradient against pointwise quadrature") {
  // Band-limited data: the grid quadrature of |grad f|^2 is exact, and the
  // gradient is evaluated by direct summation of the differentiated series.
  const auto g = make_grid(16);
  const auto f = testing::random_band_limited(g, 17, 5);
  SpectralField dfx(g);
  SpectralField dfy(g);
  for (std::size_t s = 0; s < g->size(); ++s) {
    dfx.coeffs[s] = Complex(0.0, kTwoPi * g->k1(s)) * f.coeffs[s];
    dfy.coeffs[s] = Complex(0.0, kTwoPi * g->k2(s)) * f.coeffs[s];
  }
  double quad = 0.0;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      const double x = i * g->dx();
      const double y = j * g->dx();
      const double a = testing::evaluate(dfx, x, y);
      const double b = testing::evaluate(dfy, x, y);
      quad += (a * a + b * b) * g->dx() * g->dx();
    }
  }
  const double spectral_sum = spectral::grad_l2_norm_sq(f);
  CHECK(std::abs(quad - spectral_sum) <= 1e-10 * spectral_sum);
}

TEST_CASE("dealias mask boundary and idempotence") {
  const auto g = make_grid(12);
  SpectralField f(g);
  f.at(5, 0) = f.at(-5, 0) = 1.0;
  f.at(4, 0) = f.at(-4, 0) = 2.0;
  const auto d = spectral::dealias(f);
  CHECK(d.at(5, 0) == Complex{});
  CHECK(d.at(4, 0) == Complex(2.0, 0.0));
  CHECK(spectral::dealias(d).coeffs == d.coeffs);

  const auto r = testing::random_band_limited(make_grid(32), 9, 15);
  const auto once = spectral::dealias(r);
  CHECK(spectral::dealias(once).coeffs == once.coeffs);
}

TEST_CASE("dealiased pseudo-spectral product matches the convolution oracle") {
  const auto g = make_grid(16);
  for (unsigned trial = 0; trial < 5; ++trial) {
    const auto th = testing::random_band_limited(g, 100 + trial);
    const auto v1 = testing::random_band_limited(g, 200 + trial);
    const auto v2 = testing::random_band_limited(g, 300 + trial);
    PhysicalField p1 = spectral::inverse(v1);
    PhysicalField p2 = spectral::inverse(v2);
    const PhysicalField pt = spectral::inverse(th);
    for (std::size_t s = 0; s < pt.values.size(); ++s) {
      p1.values[s] *= pt.values[s];
      p2.values[s] *= pt.values[s];
    }
    const auto pseudo = spectral::dealias(spectral::divergence(spectral::forward(p1), spectral::forward(p2)));
    const auto exact = testing::convolution_divergence(th, v1, v2);
    CHECK(testing::max_abs_diff(pseudo, exact) < 1e-12);
  }
}

TEST_CASE("multipliers commute and the filter is a contraction") {
  const auto g = make_grid(32);
  const auto r = testing::random_band_limited(g, 21, 15);
  const std::vector<std::function<SpectralField(const SpectralField&)>> ops{
      [](const SpectralField& f) { return spectral::frac_laplacian_half(f); },
      [](const SpectralField& f) { return spectral::inv_frac_laplacian_half(f); },
      [](const SpectralField& f) { return spectral::helmholtz_inverse(f, 0.05); },
      [](const SpectralField& f) { return spectral::helmholtz_apply(f, 0.05); },
      [](const SpectralField& f) { return spectral::perp_gradient(f).first; },
      [](const SpectralField& f) { return spectral::gradient(f).second; },
      [](const SpectralField& f) { return spectral::dealias(f); },
  };
  for (std::size_t a = 0; a < ops.size(); ++a) {
    for (std::size_t b = a + 1; b < ops.size(); ++b) {
      const auto ab = ops[a](ops[b](r));
      const auto ba = ops[b](ops[a](r));
      CHECK(testing::max_abs_diff(ab, ba) <= 1e-12 * std::max(1.0, testing::max_abs(ab)));
    }
  }
}
