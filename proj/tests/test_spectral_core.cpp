#include <doctest.h>

#include <random>

#include "helicity_lab/error.hpp"
#include "helicity_lab/spectral_core.hpp"

using namespace hlab;

namespace {

std::vector<Vec3> random_points(int count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<Vec3> out(count);
  for (auto& p : out) p = {u(gen), u(gen), u(gen)};
  return out;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  const int k = std::max(a.k_max(), b.k_max());
  return (a.with_k_max(k) - b.with_k_max(k)).max_amplitude();
}

}  // namespace

TEST_CASE("exactly one of k and -k is canonical") {
  VectorSpectrum cube(3);
  cube.for_each([](const WaveVector& k, const CVec3&) {
    if (k.is_zero()) {
      CHECK_FALSE(is_canonical(k));
    } else {
      CHECK(is_canonical(k) != is_canonical(-k));
    }
  });
}

TEST_CASE("mode cube visits modes lexicographically and round-trips offsets") {
  ScalarSpectrum c(2);
  std::vector<WaveVector> seen;
  c.for_each([&](const WaveVector& k, const Complex&) { seen.push_back(k); });
  REQUIRE(seen.size() == 125);
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  CHECK(seen.front() == WaveVector{-2, -2, -2});
  CHECK(seen.back() == WaveVector{2, 2, 2});
  CHECK(c.get({3, 0, 0}) == Complex{});
}

TEST_CASE("abc coefficients evaluate to the closed form") {
  const double A = 0.7, B = -1.3, C = 2.1;
  const SpectralField w = abc_field(A, B, C);
  CHECK(w.nonzero_modes() == 6);
  for (const Vec3& x : random_points(50, 3)) {
    const Vec3 v = evaluate(w, x);
    CHECK(v[0] == doctest::Approx(A * std::sin(x[2]) + C * std::cos(x[1])).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(B * std::sin(x[0]) + A * std::cos(x[2])).epsilon(1e-14));
    CHECK(v[2] == doctest::Approx(C * std::sin(x[1]) + B * std::cos(x[0])).epsilon(1e-14));
  }
}

TEST_CASE("leray projection removes divergence and mean, and is idempotent") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorSpectrum raw(3);
  raw.for_each([&](const WaveVector& k, CVec3& c) {
    if (!is_canonical(k)) return;
    for (auto& x : c) x = {u(gen), u(gen)};
    raw[-k] = conj(c);
  });
  raw[{0, 0, 0}] = CVec3{1.0, 2.0, 3.0};
  const SpectralField w = leray_project(raw);
  CHECK(divergence_residual(w.coefficients()) < 1e-14);
  CHECK(norm2(w[{0, 0, 0}]) == 0.0);
  CHECK(reality_residual(w.coefficients()) == 0.0);
  CHECK(leray_project(w.coefficients()) == w);

  // Transverse part agrees with the textbook formula c - (k.c) k / |k|^2.
  const WaveVector k{1, -2, 3};
  const CVec3 c = raw[k];
  const Complex kd = dot(to_complex(k.as_vec()), c);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(w[k][i] - (c[i] - kd * k.as_vec()[i] / double(k.norm2()))) < 1e-15);
  }
}

TEST_CASE("leray projection of a purely longitudinal mode gives zero") {
  VectorSpectrum raw(12);
  raw[{12, 0, 0}] = CVec3{Complex(0.3, 0.1), 0.0, 0.0};
  raw[{-12, 0, 0}] = conj(raw[{12, 0, 0}]);
  raw[{3, 4, 0}] = CVec3{Complex(0.3), Complex(0.4), 0.0};
  raw[{-3, -4, 0}] = conj(raw[{3, 4, 0}]);
  const SpectralField w = leray_project(raw);
  CHECK(w.nonzero_modes() == 0);
}

TEST_CASE("leray projection rejects coefficients that are not real-symmetric") {
  VectorSpectrum raw(1);
  raw[{0, 1, 0}] = CVec3{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(leray_project(raw), InputError);
}

TEST_CASE("sample agrees with point evaluation and analyze inverts it") {
  const SpectralField w = random_field(3, 9, 1.0);
  const int n = min_resolution(3);
  const GridSampling g = sample(w, n);
  const FieldEvaluator eval(w);
  for (std::size_t f = 0; f < g.size(); f += 37) {
    const Vec3 v = eval(g.point(f));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(v[i] - g[f][i]) < 1e-12);
  }
  const Analysis a = analyze(g, 3);
  CHECK(max_diff(a.field, w) < 1e-14);
  CHECK(a.relative_residual() < 1e-24);
}

TEST_CASE("analyze reports out-of-band content") {
  // (0, 0, sin 3x) analyzed with band 2: everything is discarded.
  const int n = 8;
  std::vector<Vec3> v(std::size_t(n) * n * n);
  for (std::size_t f = 0; f < v.size(); ++f) v[f] = {0.0, 0.0, std::sin(3.0 * grid_point(n, f)[0])};
  const Analysis a = analyze(GridSampling(n, v), 2);
  CHECK(a.field.max_amplitude() < 1e-16);
  CHECK(a.relative_residual() == doctest::Approx(1.0));
  CHECK(a.input_energy == doctest::Approx(kBoxVolume / 2.0));
}

TEST_CASE("resolution below 2k+2 is refused") {
  const SpectralField w = random_field(3, 1, 1.0);
  CHECK_THROWS_AS(sample(w, 7), AliasingError);
  CHECK_NOTHROW(sample(w, 8));
}

TEST_CASE("random fields are reproducible, real, transverse and zero-mean") {
  const SpectralField a = random_field(4, 17, 0.5);
  CHECK(a == random_field(4, 17, 0.5));
  CHECK_FALSE(a == random_field(4, 18, 0.5));
  CHECK(reality_residual(a.coefficients()) == 0.0);
  CHECK(norm2(a[{0, 0, 0}]) == 0.0);
  CHECK(divergence_residual(a.coefficients()) < 1e-14);
  CHECK(a.max_amplitude() <= 0.5 * std::sqrt(6.0));
}

TEST_CASE("Parseval between coefficient and grid energy") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SpectralField w = random_field(4, seed, 1.0);
    const int n = min_resolution(4);
    const GridSampling g = sample(w, n);
    const double quad = grid_integral(g.size(), n, [&](std::size_t f) { return dot(g[f], g[f]); });
    double spec = 0.0;
    for (const auto& c : w.coefficients().values()) spec += norm2(c);
    CHECK(quad == doctest::Approx(kBoxVolume * spec).epsilon(1e-12));
  }
}

TEST_CASE("field arithmetic keeps the invariants") {
  const SpectralField a = random_field(2, 1, 1.0);
  const SpectralField b = random_field(3, 2, 1.0);
  const SpectralField s = a + b;
  CHECK(s.k_max() == 3);
  CHECK(max_diff(s - b, a) < 1e-15);
  CHECK(leray_project(s.coefficients()) == s);
  CHECK(leray_project((0.3 * s).coefficients()) == 0.3 * s);
  CHECK(a.with_k_max(5).with_k_max(2) == a);
}

TEST_CASE("scalar fields: validation, evaluation and gradient") {
  ScalarSpectrum c(2);
  c[{1, 2, 0}] = {0.3, -0.2};
  CHECK_THROWS_AS(ScalarField::from_coefficients(c), InputError);
  c[{-1, -2, 0}] = {0.3, 0.2};
  c[{0, 0, 0}] = 1.5;
  const ScalarField f = ScalarField::from_coefficients(c);
  for (const Vec3& x : random_points(10, 4)) {
    const double phase = x[0] + 2.0 * x[1];
    const double expect = 1.5 + 0.6 * std::cos(phase) + 0.4 * std::sin(phase);
    const auto [v, grad] = evaluate_with_gradient(f, x);
    CHECK(v == doctest::Approx(expect).epsilon(1e-14));
    const double d = -0.6 * std::sin(phase) + 0.4 * std::cos(phase);
    CHECK(grad[0] == doctest::Approx(d).epsilon(1e-13));
    CHECK(grad[1] == doctest::Approx(2.0 * d).epsilon(1e-13));
    CHECK(std::abs(grad[2]) < 1e-15);
  }
  const ScalarGrid g = sample(f, 6);
  const ScalarField back = analyze(g, 2);
  double err = 0.0;
  back.coefficients().for_each([&](const WaveVector& k, const Complex& v) { err = std::max(err, std::abs(v - c[k])); });
  CHECK(err < 1e-15);
}

TEST_CASE("grid integral of a constant is the box volume") {
  CHECK(grid_integral(512, 8, [](std::size_t) { return 1.0; }) == doctest::Approx(kBoxVolume).epsilon(1e-15));
}
