#include "sqg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "sqg/errors.hpp"

namespace sqg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// The FFTW planner is not re-entrant; plan execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// One pair of plans plus its scratch buffer per grid size and thread.
class FftPlan {
 public:
  explicit FftPlan(int n) : n_(n), size_(static_cast<std::size_t>(n) * n) {
    buf_ = fftw_alloc_complex(size_);
    std::lock_guard lock(planner_mutex());
    fwd_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  Complex* data() { return reinterpret_cast<Complex*>(buf_); }
  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }

 private:
  int n_;
  std::size_t size_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

FftPlan& plan_for(int n) {
  thread_local std::map<int, std::unique_ptr<FftPlan>> cache;
  auto& p = cache[n];
  if (!p) p = std::make_unique<FftPlan>(n);
  return *p;
}

template <class Multiplier>
SpectralField apply_multiplier(const SpectralField& f, Multiplier m) {
  SpectralField out(f.grid);
  const Grid& g = *f.grid;
  for (std::size_t s = 0; s < g.size(); ++s) out.coeffs[s] = f.coeffs[s] * m(g, s);
  return out;
}

// 2 pi i k, vanishing on the Nyquist line where -k aliases onto k.
Complex ddx_symbol(const Grid& g, std::size_t s, int k) {
  if (g.nyquist(s)) return {0.0, 0.0};
  return {0.0, kTwoPi * k};
}

}  // namespace

Grid::Grid(int n) : n_(n), dx_(0.0) {
  if (n < 8 || n % 2 != 0) {
    throw ConfigError("grid size must be even and >= 8, got " + std::to_string(n));
  }
  dx_ = 1.0 / n;
  const std::size_t total = size();
  k1_.resize(total);
  k2_.resize(total);
  ksq_phys_.resize(total);
  mask_.resize(total);
  conj_.resize(total);
  const int cut = n / 3;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const std::size_t s = static_cast<std::size_t>(a) * n + b;
      const int ka = wavenumber(a);
      const int kb = wavenumber(b);
      k1_[s] = ka;
      k2_[s] = kb;
      ksq_phys_[s] = kTwoPi * kTwoPi * (static_cast<double>(ka) * ka + static_cast<double>(kb) * kb);
      mask_[s] = (std::abs(ka) <= cut && std::abs(kb) <= cut) ? 1 : 0;
      conj_[s] = static_cast<std::size_t>((n - a) % n) * n + static_cast<std::size_t>((n - b) % n);
    }
  }
}

std::size_t Grid::slot(int k1, int k2) const noexcept {
  const int a = ((k1 % n_) + n_) % n_;
  const int b = ((k2 % n_) + n_) % n_;
  return static_cast<std::size_t>(a) * n_ + b;
}

GridPtr make_grid(int n) { return std::make_shared<const Grid>(n); }

PhysicalField::PhysicalField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}

SpectralField::SpectralField(GridPtr g) : grid(std::move(g)), coeffs(grid->size(), Complex{}) {}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  for (std::size_t s = 0; s < coeffs.size(); ++s) coeffs[s] += o.coeffs[s];
  return *this;
}

SpectralField& SpectralField::operator*=(double c) {
  for (auto& z : coeffs) z *= c;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator*(double c, SpectralField a) { return a *= c; }

double symmetry_defect(const SpectralField& f) {
  const Grid& g = *f.grid;
  double worst = 0.0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    worst = std::max(worst, std::abs(f.coeffs[g.conjugate_slot(s)] - std::conj(f.coeffs[s])));
  }
  return worst;
}

void require_finite(const SpectralField& f, const char* what) {
  for (const auto& z : f.coeffs) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw NumericalOverflowError(std::string("non-finite values in ") + what);
    }
  }
}

namespace spectral {

SpectralField forward(const PhysicalField& f) {
  const Grid& g = *f.grid;
  FftPlan& plan = plan_for(g.n());
  Complex* buf = plan.data();
  for (std::size_t s = 0; s < g.size(); ++s) buf[s] = Complex(f.values[s], 0.0);
  plan.forward();
  SpectralField out(f.grid);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t s = 0; s < g.size(); ++s) out.coeffs[s] = buf[s] * scale;
  // Restore exact symmetry: the imaginary input was identically zero.
  for (std::size_t s = 0; s < g.size(); ++s) {
    const std::size_t c = g.conjugate_slot(s);
    if (c < s) continue;
    const Complex avg = 0.5 * (out.coeffs[s] + std::conj(out.coeffs[c]));
    out.coeffs[s] = avg;
    out.coeffs[c] = std::conj(avg);
  }
  return out;
}

PhysicalField inverse(const SpectralField& f) {
  const Grid& g = *f.grid;
  double largest = 1.0;
  for (const auto& z : f.coeffs) largest = std::max(largest, std::abs(z));
  const double defect = symmetry_defect(f);
  if (defect > 1e-10 * largest) {
    throw DataIntegrityError("spectral field is not conjugate symmetric (defect " +
                             std::to_string(defect) + ")");
  }
  FftPlan& plan = plan_for(g.n());
  Complex* buf = plan.data();
  std::copy(f.coeffs.begin(), f.coeffs.end(), buf);
  plan.backward();
  PhysicalField out(f.grid);
  for (std::size_t s = 0; s < g.size(); ++s) out.values[s] = buf[s].real();
  return out;
}

SpectralField frac_laplacian_half(const SpectralField& f) {
  return apply_multiplier(f, [](const Grid& g, std::size_t s) {
    return Complex(std::sqrt(g.k2_phys(s)), 0.0);
  });
}

SpectralField inv_frac_laplacian_half(const SpectralField& f) {
  return apply_multiplier(f, [](const Grid& g, std::size_t s) {
    const double k = std::sqrt(g.k2_phys(s));
    return Complex(k > 0.0 ? 1.0 / k : 0.0, 0.0);
  });
}

SpectralField helmholtz_inverse(const SpectralField& f, double alpha) {
  if (alpha == 0.0) return f;
  const double a2 = alpha * alpha;
  return apply_multiplier(f, [a2](const Grid& g, std::size_t s) {
    return Complex(1.0 / (1.0 + a2 * g.k2_phys(s)), 0.0);
  });
}

SpectralField helmholtz_apply(const SpectralField& f, double alpha) {
  if (alpha == 0.0) return f;
  const double a2 = alpha * alpha;
  return apply_multiplier(f, [a2](const Grid& g, std::size_t s) {
    return Complex(1.0 + a2 * g.k2_phys(s), 0.0);
  });
}

std::pair<SpectralField, SpectralField> perp_gradient(const SpectralField& psi) {
  auto v1 = apply_multiplier(psi, [](const Grid& g, std::size_t s) { return -ddx_symbol(g, s, g.k2(s)); });
  auto v2 = apply_multiplier(psi, [](const Grid& g, std::size_t s) { return ddx_symbol(g, s, g.k1(s)); });
  return {std::move(v1), std::move(v2)};
}

std::pair<SpectralField, SpectralField> gradient(const SpectralField& f) {
  auto gx = apply_multiplier(f, [](const Grid& g, std::size_t s) { return ddx_symbol(g, s, g.k1(s)); });
  auto gy = apply_multiplier(f, [](const Grid& g, std::size_t s) { return ddx_symbol(g, s, g.k2(s)); });
  return {std::move(gx), std::move(gy)};
}

SpectralField divergence(const SpectralField& a, const SpectralField& b) {
  const Grid& g = *a.grid;
  SpectralField out(a.grid);
  for (std::size_t s = 0; s < g.size(); ++s) {
    out.coeffs[s] = ddx_symbol(g, s, g.k1(s)) * a.coeffs[s] + ddx_symbol(g, s, g.k2(s)) * b.coeffs[s];
  }
  return out;
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out(f.grid);
  const Grid& g = *f.grid;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (g.retained(s)) out.coeffs[s] = f.coeffs[s];
  }
  return out;
}

double inner(const SpectralField& f, const SpectralField& g) {
  double acc = 0.0;
  for (std::size_t s = 0; s < f.coeffs.size(); ++s) acc += (f.coeffs[s] * std::conj(g.coeffs[s])).real();
  return acc;
}

double l2_norm_sq(const SpectralField& f) {
  double acc = 0.0;
  for (const auto& z : f.coeffs) acc += std::norm(z);
  return acc;
}

double grad_l2_norm_sq(const SpectralField& f) {
  const Grid& g = *f.grid;
  double acc = 0.0;
  for (std::size_t s = 0; s < g.size(); ++s) acc += g.k2_phys(s) * std::norm(f.coeffs[s]);
  return acc;
}

}  // namespace spectral
}  // namespace sqg
