#pragma once

// Periodic unit-square grid, Fourier transforms and the diagonal Fourier
// multipliers used by the SQG model.
//
// Conventions: basis e^{2 pi i k.x} on [0,1]^2, so the physical wavevector of
// slot k is 2 pi k. Coefficients are normalised so that a unit-amplitude
// cosine mode cos(2 pi k.x) has coeff(k) = coeff(-k) = 1/2, which makes
// Parseval read  int f g dx = sum_k f_hat(k) conj(g_hat(k)).

#include <complex>
#include <memory>
#include <utility>
#include <vector>

namespace sqg {

using Complex = std::complex<double>;

class Grid {
 public:
  /// Rejects odd n and n < 8 with ConfigError.
  explicit Grid(int n);

  int n() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  /// Integer wavenumber of FFT index a, in {-n/2, ..., n/2-1}.
  int wavenumber(int a) const noexcept { return a < n_ / 2 ? a : a - n_; }
  int k1(std::size_t slot) const noexcept { return k1_[slot]; }
  int k2(std::size_t slot) const noexcept { return k2_[slot]; }
  /// Physical |k|^2, i.e. 4 pi^2 (k1^2 + k2^2).
  double k2_phys(std::size_t slot) const noexcept { return ksq_phys_[slot]; }
  bool retained(std::size_t slot) const noexcept { return mask_[slot] != 0; }
  /// Largest per-axis wavenumber kept by the dealias mask (floor(n/3)).
  int dealias_cutoff() const noexcept { return n_ / 3; }

  /// Slot holding wavevector (k1, k2); components are taken modulo n.
  std::size_t slot(int k1, int k2) const noexcept;
  /// Slot holding -k for the wavevector stored in `slot`.
  std::size_t conjugate_slot(std::size_t slot) const noexcept { return conj_[slot]; }
  /// True for slots on the Nyquist line (k1 or k2 equal to -n/2).
  bool nyquist(std::size_t slot) const noexcept {
    return k1_[slot] == -n_ / 2 || k2_[slot] == -n_ / 2;
  }

 private:
  int n_;
  double dx_;
  std::vector<int> k1_;
  std::vector<int> k2_;
  std::vector<double> ksq_phys_;
  std::vector<unsigned char> mask_;
  std::vector<std::size_t> conj_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int n);

/// Real samples on the grid. values[i*n + j] is the value at (i*dx, j*dx).
struct PhysicalField {
  GridPtr grid;
  std::vector<double> values;

  explicit PhysicalField(GridPtr g);
  double& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * grid->n() + j]; }
  double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * grid->n() + j]; }
};

/// Fourier coefficients of a real field, one per wavevector slot.
struct SpectralField {
  GridPtr grid;
  std::vector<Complex> coeffs;

  explicit SpectralField(GridPtr g);

  Complex& at(int k1, int k2) { return coeffs[grid->slot(k1, k2)]; }
  Complex at(int k1, int k2) const { return coeffs[grid->slot(k1, k2)]; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator*=(double c);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator*(double c, SpectralField a);

/// Largest |coeff(-k) - conj(coeff(k))| over all slots.
double symmetry_defect(const SpectralField& f);

/// Throws NumericalOverflowError if any coefficient is not finite.
void require_finite(const SpectralField& f, const char* what);

namespace spectral {

SpectralField forward(const PhysicalField& f);

/// Throws DataIntegrityError when conjugate symmetry is violated by more than
/// 1e-10 (relative to the largest coefficient, floored at 1).
PhysicalField inverse(const SpectralField& f);

SpectralField frac_laplacian_half(const SpectralField& f);
/// Zero mode is projected to zero.
SpectralField inv_frac_laplacian_half(const SpectralField& f);
SpectralField helmholtz_inverse(const SpectralField& f, double alpha);
SpectralField helmholtz_apply(const SpectralField& f, double alpha);

/// (-d/dy, d/dx). Odd-order multipliers vanish on the Nyquist line so that
/// the output stays the transform of a real field.
std::pair<SpectralField, SpectralField> perp_gradient(const SpectralField& psi);
std::pair<SpectralField, SpectralField> gradient(const SpectralField& f);
/// Spectral divergence 2 pi i (k1 a + k2 b).
SpectralField divergence(const SpectralField& a, const SpectralField& b);

/// 2/3-rule projection: zero every slot with |k1| > n/3 or |k2| > n/3.
SpectralField dealias(const SpectralField& f);

/// L2 inner product int f g dx evaluated via Parseval.
double inner(const SpectralField& f, const SpectralField& g);
double l2_norm_sq(const SpectralField& f);
/// int |grad f|^2 dx.
double grad_l2_norm_sq(const SpectralField& f);

}  // namespace spectral
}  // namespace sqg
