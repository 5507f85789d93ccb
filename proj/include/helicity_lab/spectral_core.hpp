#pragma once

#include <cmath>
#include <compare>
#include <functional>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "helicity_lab/vec3.hpp"

namespace hlab {

/// Integer mode index on the 2pi-periodic torus.
struct WaveVector {
  int kx = 0;
  int ky = 0;
  int kz = 0;

  constexpr auto operator<=>(const WaveVector&) const = default;
  constexpr WaveVector operator-() const { return {-kx, -ky, -kz}; }

  constexpr int linf() const {
    const int ax = kx < 0 ? -kx : kx;
    const int ay = ky < 0 ? -ky : ky;
    const int az = kz < 0 ? -kz : kz;
    return ax > ay ? (ax > az ? ax : az) : (ay > az ? ay : az);
  }
  constexpr int norm2() const { return kx * kx + ky * ky + kz * kz; }
  double norm() const { return std::sqrt(static_cast<double>(norm2())); }
  constexpr bool is_zero() const { return kx == 0 && ky == 0 && kz == 0; }
  Vec3 as_vec() const { return {double(kx), double(ky), double(kz)}; }
};

/// Lexicographically positive half of the lattice; each real mode pair
/// {k, -k} has exactly one canonical member.
constexpr bool is_canonical(const WaveVector& k) {
  if (k.kx != 0) return k.kx > 0;
  if (k.ky != 0) return k.ky > 0;
  return k.kz > 0;
}

/// Dense association WaveVector -> T over the cube |k|_inf <= k_max.
template <class T>
class ModeCube {
 public:
  ModeCube() : ModeCube(0) {}
  explicit ModeCube(int k_max)
      : k_max_(k_max), side_(2 * k_max + 1), data_(std::size_t(side_) * side_ * side_, T{}) {}

  int k_max() const { return k_max_; }
  bool contains(const WaveVector& k) const { return k.linf() <= k_max_; }

  T& operator[](const WaveVector& k) { return data_[offset(k)]; }
  const T& operator[](const WaveVector& k) const { return data_[offset(k)]; }

  /// Value at k, or T{} outside the cube.
  T get(const WaveVector& k) const { return contains(k) ? data_[offset(k)] : T{}; }

  std::span<const T> values() const { return data_; }
  std::span<T> values() { return data_; }

  WaveVector mode_at(std::size_t offset) const {
    const int z = int(offset % side_);
    const int y = int((offset / side_) % side_);
    const int x = int(offset / (std::size_t(side_) * side_));
    return {x - k_max_, y - k_max_, z - k_max_};
  }

  /// Visits modes in ascending lexicographic order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < data_.size(); ++i) f(mode_at(i), data_[i]);
  }
  template <class F>
  void for_each(F&& f) {
    for (std::size_t i = 0; i < data_.size(); ++i) f(mode_at(i), data_[i]);
  }

  bool operator==(const ModeCube&) const = default;

 private:
  std::size_t offset(const WaveVector& k) const {
    return (std::size_t(k.kx + k_max_) * side_ + std::size_t(k.ky + k_max_)) * side_ +
           std::size_t(k.kz + k_max_);
  }

  int k_max_;
  int side_;
  std::vector<T> data_;
};

/// Unconstrained vector coefficients (intermediate products, gradients).
using VectorSpectrum = ModeCube<CVec3>;
using ScalarSpectrum = ModeCube<Complex>;

struct Tolerances {
  double representation = 1e-12;
  double quadrature = 1e-10;
};

class SpectralField;
namespace detail {
SpectralField make_field_mirrored(VectorSpectrum coeffs);
}

/// Real, exact, divergence-free vector field stored by its Fourier
/// coefficients. Invariants (reality, transversality, zero mean, support)
/// hold for every instance; the only ways in are leray_project and
/// operations that map valid fields to valid fields.
class SpectralField {
 public:
  SpectralField() : SpectralField(0) {}
  static SpectralField zero(int k_max) { return SpectralField(k_max); }

  int k_max() const { return coeffs_.k_max(); }
  CVec3 operator[](const WaveVector& k) const { return coeffs_.get(k); }
  const VectorSpectrum& coefficients() const { return coeffs_; }

  /// Same field in a larger cube, or with modes above k_max dropped.
  SpectralField with_k_max(int k_max) const;

  /// Largest coefficient magnitude over all modes.
  double max_amplitude() const;
  /// Number of modes with nonzero coefficient.
  std::size_t nonzero_modes() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator*=(double s);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a += (-1.0) * b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  bool operator==(const SpectralField&) const = default;

 private:
  explicit SpectralField(int k_max) : coeffs_(k_max) {}
  explicit SpectralField(VectorSpectrum coeffs) : coeffs_(std::move(coeffs)) {}

  friend SpectralField leray_project(const VectorSpectrum&, const Tolerances&);
  friend SpectralField detail::make_field_mirrored(VectorSpectrum);

  VectorSpectrum coeffs_;
};

/// Real scalar function on the torus (mean allowed).
class ScalarField {
 public:
  ScalarField() : coeffs_(0) {}
  /// Validates reality; sub-tolerance asymmetry is symmetrized.
  static ScalarField from_coefficients(const ScalarSpectrum& raw, const Tolerances& tol = {});
  static ScalarField constant(double value);

  int k_max() const { return coeffs_.k_max(); }
  Complex operator[](const WaveVector& k) const { return coeffs_.get(k); }
  const ScalarSpectrum& coefficients() const { return coeffs_; }

  bool operator==(const ScalarField&) const = default;

 private:
  explicit ScalarField(ScalarSpectrum c) : coeffs_(std::move(c)) {}
  ScalarSpectrum coeffs_;
};

/// Samples of a vector field at x_j = 2 pi j / n, row-major (x, y, z).
class GridSampling {
 public:
  GridSampling(int n, std::vector<Vec3> values);

  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  const Vec3& at(int i, int j, int l) const { return values_[index(i, j, l)]; }
  const Vec3& operator[](std::size_t flat) const { return values_[flat]; }
  std::span<const Vec3> values() const { return values_; }

  std::size_t index(int i, int j, int l) const { return (std::size_t(i) * n_ + j) * n_ + l; }
  Vec3 point(std::size_t flat) const;

 private:
  int n_;
  std::vector<Vec3> values_;
};

class ScalarGrid {
 public:
  ScalarGrid(int n, std::vector<double> values);
  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t flat) const { return values_[flat]; }
  std::span<const double> values() const { return values_; }

 private:
  int n_;
  std::vector<double> values_;
};

/// Point coordinates of flat grid index `flat` on an n^3 grid.
Vec3 grid_point(int n, std::size_t flat);

/// Smallest resolution that represents a band k_max exactly.
constexpr int min_resolution(int k_max) { return 2 * k_max + 2; }
/// Throws AliasingError when n < min_resolution(k_max).
void require_resolution(int n, int k_max, const char* what);

/// Removes the longitudinal part and the mean of `raw`. Throws InputError
/// if `raw` violates reality symmetry beyond tol.representation.
SpectralField leray_project(const VectorSpectrum& raw, const Tolerances& tol = {});

/// Max over modes of |c_{-k} - conj(c_k)|.
double reality_residual(const VectorSpectrum& raw);
/// Max over modes of |k . c_k|.
double divergence_residual(const VectorSpectrum& raw);

GridSampling sample(const SpectralField& field, int n);
ScalarGrid sample(const ScalarField& field, int n);
/// Sampling of coefficients that are only required to be real-symmetric.
GridSampling sample_raw(const VectorSpectrum& raw, int n);

struct Analysis {
  SpectralField field;
  /// Energy of everything discarded: modes outside the band, the mean,
  /// and the longitudinal part.
  double residual_energy = 0.0;
  /// Quadrature energy of the input grid.
  double input_energy = 0.0;
  double relative_residual() const;
};

Analysis analyze(const GridSampling& grid, int k_max, const Tolerances& tol = {});
/// Discrete Fourier coefficients of the grid restricted to |k|_inf <= k_max.
VectorSpectrum analyze_raw(const GridSampling& grid, int k_max);
ScalarField analyze(const ScalarGrid& grid, int k_max, const Tolerances& tol = {});

struct ScalarAnalysis {
  ScalarField field;
  double residual_energy = 0.0;  // (2pi)^3 times the energy outside the cube
  double input_energy = 0.0;
};
ScalarAnalysis analyze_scalar(const ScalarGrid& grid, int k_max, const Tolerances& tol = {});

/// Trigonometric-series evaluation at arbitrary points; caches the nonzero
/// canonical modes of the field.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const SpectralField& field);
  Vec3 operator()(const Vec3& x) const;

 private:
  int k_max_;
  std::vector<WaveVector> modes_;
  std::vector<CVec3> coeffs_;
};

class ScalarEvaluator {
 public:
  explicit ScalarEvaluator(const ScalarField& field);
  double value(const Vec3& x) const { return value_and_gradient(x).first; }
  std::pair<double, Vec3> value_and_gradient(const Vec3& x) const;

 private:
  int k_max_;
  double mean_;
  std::vector<WaveVector> modes_;
  std::vector<Complex> coeffs_;
};

/// Direct trigonometric-series evaluation at an arbitrary point.
Vec3 evaluate(const SpectralField& field, const Vec3& x);
double evaluate(const ScalarField& field, const Vec3& x);
/// Value and gradient of a scalar series at x.
std::pair<double, Vec3> evaluate_with_gradient(const ScalarField& field, const Vec3& x);

/// Exact coefficients of (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x).
SpectralField abc_field(double a, double b, double c);

/// Name of the portable generator behind random_field.
inline constexpr const char* kRandomAlgorithm = "mt19937_64/uniform53";

/// Independent uniform real and imaginary parts in [-amplitude, amplitude]
/// for each canonical mode in lexicographic order, then Leray projected.
SpectralField random_field(int k_max, std::uint64_t seed, double amplitude);

/// Quadrature of sum_j f(x_j) (2pi/n)^3 with compensated summation.
double grid_integral(std::size_t count, int n, const std::function<double(std::size_t)>& f);

}  // namespace hlab
