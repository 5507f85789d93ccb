#include "helicity_lab/spectral_core.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "fft.hpp"
#include "helicity_lab/error.hpp"
#include "helicity_lab/summation.hpp"

namespace hlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_abs(const VectorSpectrum& raw) {
  double m = 0.0;
  for (const auto& c : raw.values()) m = std::max(m, std::sqrt(norm2(c)));
  return m;
}

// Transversality test with a round-off allowance, so projecting an
// already-projected coefficient leaves it bit-identical.
bool is_transverse(const WaveVector& k, const CVec3& c) {
  const Complex kd = double(k.kx) * c[0] + double(k.ky) * c[1] + double(k.kz) * c[2];
  const double scale =
      std::abs(k.kx) * std::abs(c[0]) + std::abs(k.ky) * std::abs(c[1]) + std::abs(k.kz) * std::abs(c[2]);
  return std::abs(kd) <= 32.0 * kEps * scale;
}

// Repeats the projection until the round-off test passes; a remainder that
// is only round-off of a longitudinal vector is set to zero.
CVec3 project_mode(const WaveVector& k, CVec3 c) {
  const double size = std::sqrt(norm2(c));
  for (int pass = 0; pass < 4; ++pass) {
    if (is_transverse(k, c)) return c;
    const Complex kd = double(k.kx) * c[0] + double(k.ky) * c[1] + double(k.kz) * c[2];
    const Complex s = kd / double(k.norm2());
    c = {c[0] - s * double(k.kx), c[1] - s * double(k.ky), c[2] - s * double(k.kz)};
    if (std::sqrt(norm2(c)) <= 64.0 * kEps * size) return CVec3{};
  }
  return c;
}

// Projects the canonical half, mirrors it, and clears the mean.
void enforce_invariants(VectorSpectrum& coeffs) {
  coeffs.for_each([&](const WaveVector& k, CVec3& c) {
    if (!is_canonical(k)) return;
    c = project_mode(k, c);
    coeffs[-k] = conj(c);
  });
  coeffs[WaveVector{}] = CVec3{};
}

std::vector<Complex> component_buffer(const VectorSpectrum& raw, int comp, int n) {
  std::vector<Complex> buf(std::size_t(n) * n * n);
  raw.for_each([&](const WaveVector& k, const CVec3& c) {
    if (c[comp] == Complex{}) return;
    const std::size_t idx =
        (std::size_t(detail::wrap(k.kx, n)) * n + detail::wrap(k.ky, n)) * n + detail::wrap(k.kz, n);
    buf[idx] = c[comp];
  });
  return buf;
}

struct RawAnalysis {
  VectorSpectrum retained;
  double outside_sum = 0.0;  // sum of |c|^2 over bins outside the band
};

RawAnalysis analyze_bins(const GridSampling& grid, int k_max) {
  const int n = grid.n();
  const std::size_t count = grid.size();
  const double inv = 1.0 / double(count);
  RawAnalysis out{VectorSpectrum(k_max), 0.0};
  CompensatedSum outside;
  for (int comp = 0; comp < 3; ++comp) {
    std::vector<Complex> buf(count);
    for (std::size_t f = 0; f < count; ++f) buf[f] = grid[f][comp];
    detail::fft3d_forward(n, buf);
    for (int i = 0; i < n; ++i) {
      const int kx = detail::signed_mode(i, n);
      for (int j = 0; j < n; ++j) {
        const int ky = detail::signed_mode(j, n);
        for (int l = 0; l < n; ++l) {
          const int kz = detail::signed_mode(l, n);
          const Complex c = buf[(std::size_t(i) * n + j) * n + l] * inv;
          const WaveVector k{kx, ky, kz};
          if (k.linf() <= k_max) {
            out.retained[k][comp] = c;
          } else {
            outside.add(std::norm(c));
          }
        }
      }
    }
  }
  out.outside_sum = outside.value();
  return out;
}

std::array<std::vector<Complex>, 3> axis_phases(int k_max, const Vec3& x) {
  std::array<std::vector<Complex>, 3> e;
  for (int a = 0; a < 3; ++a) {
    e[a].resize(std::size_t(k_max) + 1);
    for (int m = 0; m <= k_max; ++m) e[a][m] = std::polar(1.0, m * x[a]);
  }
  return e;
}

Complex phase(const std::array<std::vector<Complex>, 3>& e, const WaveVector& k) {
  auto axis = [&](int a, int m) { return m >= 0 ? e[a][m] : std::conj(e[a][-m]); };
  return axis(0, k.kx) * axis(1, k.ky) * axis(2, k.kz);
}

}  // namespace

namespace detail {

SpectralField make_field_mirrored(VectorSpectrum coeffs) {
  enforce_invariants(coeffs);
  return SpectralField(std::move(coeffs));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SpectralField

SpectralField SpectralField::with_k_max(int k_max) const {
  VectorSpectrum out(k_max);
  coeffs_.for_each([&](const WaveVector& k, const CVec3& c) {
    if (out.contains(k)) out[k] = c;
  });
  return SpectralField(std::move(out));
}

double SpectralField::max_amplitude() const { return max_abs(coeffs_); }

std::size_t SpectralField::nonzero_modes() const {
  return std::size_t(std::count_if(coeffs_.values().begin(), coeffs_.values().end(),
                                   [](const CVec3& c) { return norm2(c) != 0.0; }));
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (other.k_max() > k_max()) *this = with_k_max(other.k_max());
  other.coeffs_.for_each([&](const WaveVector& k, const CVec3& c) { coeffs_[k] = coeffs_[k] + c; });
  enforce_invariants(coeffs_);
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_.values()) c = s * c;
  enforce_invariants(coeffs_);
  return *this;
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField ScalarField::from_coefficients(const ScalarSpectrum& raw, const Tolerances& tol) {
  double scale = 1.0;
  for (const auto& c : raw.values()) scale = std::max(scale, std::abs(c));
  ScalarSpectrum out(raw.k_max());
  double worst = 0.0;
  raw.for_each([&](const WaveVector& k, const Complex& c) {
    worst = std::max(worst, std::abs(raw[-k] - std::conj(c)));
    if (is_canonical(k)) {
      const Complex sym = 0.5 * (c + std::conj(raw[-k]));
      out[k] = sym;
      out[-k] = std::conj(sym);
    } else if (k.is_zero()) {
      out[k] = c.real();
    }
  });
  if (worst > tol.representation * scale) {
    std::ostringstream msg;
    msg << "scalar coefficients violate reality symmetry (residual " << worst << ")";
    throw InputError(msg.str());
  }
  return ScalarField(std::move(out));
}

ScalarField ScalarField::constant(double value) {
  ScalarSpectrum c(0);
  c[WaveVector{}] = value;
  return ScalarField(std::move(c));
}

// ---------------------------------------------------------------------------
// Grids

GridSampling::GridSampling(int n, std::vector<Vec3> values) : n_(n), values_(std::move(values)) {
  if (n < 1 || values_.size() != std::size_t(n) * n * n) {
    throw InputError("grid sample count does not match n^3");
  }
}

Vec3 GridSampling::point(std::size_t flat) const { return grid_point(n_, flat); }

ScalarGrid::ScalarGrid(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  if (n < 1 || values_.size() != std::size_t(n) * n * n) {
    throw InputError("grid sample count does not match n^3");
  }
}

Vec3 grid_point(int n, std::size_t flat) {
  const double h = kTwoPi / n;
  const std::size_t l = flat % n;
  const std::size_t j = (flat / n) % n;
  const std::size_t i = flat / (std::size_t(n) * n);
  return {h * double(i), h * double(j), h * double(l)};
}

void require_resolution(int n, int k_max, const char* what) {
  if (n < min_resolution(k_max)) {
    std::ostringstream msg;
    msg << what << ": resolution n=" << n << " aliases band k_max=" << k_max << " (need n >= "
        << min_resolution(k_max) << ")";
    throw AliasingError(msg.str());
  }
}

// ---------------------------------------------------------------------------
// Projection

double reality_residual(const VectorSpectrum& raw) {
  double worst = 0.0;
  raw.for_each([&](const WaveVector& k, const CVec3& c) {
    worst = std::max(worst, std::sqrt(norm2(raw[-k] - conj(c))));
  });
  return worst;
}

double divergence_residual(const VectorSpectrum& raw) {
  double worst = 0.0;
  raw.for_each([&](const WaveVector& k, const CVec3& c) {
    worst = std::max(worst, std::abs(dot(to_complex(k.as_vec()), c)));
  });
  return worst;
}

SpectralField leray_project(const VectorSpectrum& raw, const Tolerances& tol) {
  const double residual = reality_residual(raw);
  if (residual > tol.representation * std::max(1.0, max_abs(raw))) {
    std::ostringstream msg;
    msg << "coefficients violate reality symmetry c(-k) = conj(c(k)) (residual " << residual << ")";
    throw InputError(msg.str());
  }
  VectorSpectrum out(raw.k_max());
  raw.for_each([&](const WaveVector& k, const CVec3& c) {
    if (!is_canonical(k)) return;
    const CVec3 sym = 0.5 * (c + conj(raw[-k]));
    const CVec3 p = project_mode(k, sym);
    out[k] = p;
    out[-k] = conj(p);
  });
  return SpectralField(std::move(out));
}

// ---------------------------------------------------------------------------
// Sampling and analysis

GridSampling sample_raw(const VectorSpectrum& raw, int n) {
  require_resolution(n, raw.k_max(), "sample");
  double scale = 1.0;
  for (const auto& c : raw.values()) scale += std::sqrt(norm2(c));
  const std::size_t count = std::size_t(n) * n * n;
  std::vector<Vec3> values(count);
  double worst_imag = 0.0;
  for (int comp = 0; comp < 3; ++comp) {
    auto buf = component_buffer(raw, comp, n);
    detail::fft3d_backward(n, buf);
    for (std::size_t f = 0; f < count; ++f) {
      values[f][comp] = buf[f].real();
      worst_imag = std::max(worst_imag, std::abs(buf[f].imag()));
    }
  }
  if (worst_imag > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "sampled values carry imaginary residue " << worst_imag;
    throw InputError(msg.str());
  }
  return GridSampling(n, std::move(values));
}

GridSampling sample(const SpectralField& field, int n) { return sample_raw(field.coefficients(), n); }

ScalarGrid sample(const ScalarField& field, int n) {
  require_resolution(n, field.k_max(), "sample");
  const std::size_t count = std::size_t(n) * n * n;
  std::vector<Complex> buf(count);
  field.coefficients().for_each([&](const WaveVector& k, const Complex& c) {
    buf[(std::size_t(detail::wrap(k.kx, n)) * n + detail::wrap(k.ky, n)) * n + detail::wrap(k.kz, n)] = c;
  });
  detail::fft3d_backward(n, buf);
  std::vector<double> values(count);
  for (std::size_t f = 0; f < count; ++f) values[f] = buf[f].real();
  return ScalarGrid(n, std::move(values));
}

VectorSpectrum analyze_raw(const GridSampling& grid, int k_max) {
  require_resolution(grid.n(), k_max, "analyze");
  return analyze_bins(grid, k_max).retained;
}

double Analysis::relative_residual() const {
  return input_energy > 0.0 ? residual_energy / input_energy : 0.0;
}

Analysis analyze(const GridSampling& grid, int k_max, const Tolerances& tol) {
  require_resolution(grid.n(), k_max, "analyze");
  RawAnalysis raw = analyze_bins(grid, k_max);
  SpectralField field = leray_project(raw.retained, tol);

  CompensatedSum removed;
  removed.add(raw.outside_sum);
  raw.retained.for_each([&](const WaveVector& k, const CVec3& c) { removed.add(norm2(c - field[k])); });

  const int n = grid.n();
  const double input = grid_integral(grid.size(), n, [&](std::size_t f) {
    const Vec3& v = grid[f];
    return dot(v, v);
  });
  return Analysis{std::move(field), kBoxVolume * removed.value(), input};
}

ScalarAnalysis analyze_scalar(const ScalarGrid& grid, int k_max, const Tolerances& tol) {
  const int n = grid.n();
  require_resolution(n, k_max, "analyze");
  std::vector<Complex> buf(grid.values().begin(), grid.values().end());
  detail::fft3d_forward(n, buf);
  const double inv = 1.0 / double(grid.size());
  ScalarSpectrum raw(k_max);
  CompensatedSum outside, total;
  for (std::size_t f = 0; f < buf.size(); ++f) {
    buf[f] *= inv;
    const double e = std::norm(buf[f]);
    total.add(e);
    const std::size_t i = f / (std::size_t(n) * n), j = (f / n) % n, l = f % n;
    const WaveVector k{detail::signed_mode(int(i), n), detail::signed_mode(int(j), n), detail::signed_mode(int(l), n)};
    if (raw.contains(k)) {
      raw[k] = buf[f];
    } else {
      outside.add(e);
    }
  }
  ScalarAnalysis out{ScalarField::from_coefficients(raw, tol), kBoxVolume * outside.value(),
                     kBoxVolume * total.value()};
  return out;
}

ScalarField analyze(const ScalarGrid& grid, int k_max, const Tolerances& tol) {
  return analyze_scalar(grid, k_max, tol).field;
}

// ---------------------------------------------------------------------------
// Point evaluation

FieldEvaluator::FieldEvaluator(const SpectralField& field) : k_max_(field.k_max()) {
  field.coefficients().for_each([&](const WaveVector& k, const CVec3& c) {
    if (!is_canonical(k) || norm2(c) == 0.0) return;
    modes_.push_back(k);
    coeffs_.push_back(c);
  });
}

Vec3 FieldEvaluator::operator()(const Vec3& x) const {
  const auto e = axis_phases(k_max_, x);
  Vec3 out{0.0, 0.0, 0.0};
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const Complex p = phase(e, modes_[m]);
    for (int a = 0; a < 3; ++a) out[a] += 2.0 * (coeffs_[m][a] * p).real();
  }
  return out;
}

ScalarEvaluator::ScalarEvaluator(const ScalarField& field)
    : k_max_(field.k_max()), mean_(field[WaveVector{}].real()) {
  field.coefficients().for_each([&](const WaveVector& k, const Complex& c) {
    if (!is_canonical(k) || c == Complex{}) return;
    modes_.push_back(k);
    coeffs_.push_back(c);
  });
}

std::pair<double, Vec3> ScalarEvaluator::value_and_gradient(const Vec3& x) const {
  const auto e = axis_phases(k_max_, x);
  double value = mean_;
  Vec3 grad{0.0, 0.0, 0.0};
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const WaveVector& k = modes_[m];
    const Complex term = coeffs_[m] * phase(e, k);
    value += 2.0 * term.real();
    // d/dx_a of 2 Re(c e^{ik.x}) = -2 k_a Im(c e^{ik.x})
    grad[0] -= 2.0 * k.kx * term.imag();
    grad[1] -= 2.0 * k.ky * term.imag();
    grad[2] -= 2.0 * k.kz * term.imag();
  }
  return {value, grad};
}

Vec3 evaluate(const SpectralField& field, const Vec3& x) { return FieldEvaluator(field)(x); }

double evaluate(const ScalarField& field, const Vec3& x) { return ScalarEvaluator(field).value(x); }

std::pair<double, Vec3> evaluate_with_gradient(const ScalarField& field, const Vec3& x) {
  return ScalarEvaluator(field).value_and_gradient(x);
}

// ---------------------------------------------------------------------------
// Generators

SpectralField abc_field(double a, double b, double c) {
  const Complex i{0.0, 1.0};
  VectorSpectrum coeffs(1);
  coeffs[{0, 0, 1}] = {-i * a / 2.0, a / 2.0, 0.0};
  coeffs[{0, 1, 0}] = {c / 2.0, 0.0, -i * c / 2.0};
  coeffs[{1, 0, 0}] = {0.0, -i * b / 2.0, b / 2.0};
  return detail::make_field_mirrored(std::move(coeffs));
}

SpectralField random_field(int k_max, std::uint64_t seed, double amplitude) {
  std::mt19937_64 gen(seed);
  auto uniform = [&] {
    const double u = double(gen() >> 11) * 0x1.0p-53;
    return amplitude * (2.0 * u - 1.0);
  };
  VectorSpectrum raw(k_max);
  raw.for_each([&](const WaveVector& k, CVec3& c) {
    if (!is_canonical(k)) return;
    for (int a = 0; a < 3; ++a) {
      const double re = uniform();
      const double im = uniform();
      c[a] = {re, im};
    }
    raw[-k] = conj(c);
  });
  return leray_project(raw);
}

double grid_integral(std::size_t count, int n, const std::function<double(std::size_t)>& f) {
  const std::size_t rows = std::size_t(n) * n;
  const std::size_t row_len = count / rows;
  const double total = deterministic_sum(rows, [&](std::size_t r) {
    CompensatedSum s;
    for (std::size_t l = 0; l < row_len; ++l) s.add(f(r * row_len + l));
    return s.value();
  });
  const double h = kTwoPi / n;
  return total * h * h * h;
}

}  // namespace hlab
