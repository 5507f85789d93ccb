#include <doctest.h>

#include "helicity_lab/curl_ops.hpp"
#include "helicity_lab/error.hpp"
#include "helicity_lab/functionals.hpp"

using namespace hlab;

namespace {

// Brute-force midpoint quadrature of w . A by point evaluation (no FFT).
double direct_helicity(const SpectralField& w, int n) {
  const FieldEvaluator ew(w);
  const FieldEvaluator ea(curl_inv(w));
  const double h = kTwoPi / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const Vec3 x{(i + 0.5) * h, (j + 0.5) * h, (l + 0.5) * h};
        sum += dot(ew(x), ea(x));
      }
  return sum * h * h * h;
}

}  // namespace

TEST_CASE("ABC(1,1,1) has H = E = 3 (2pi)^3") {
  const SpectralField w = abc_field(1.0, 1.0, 1.0);
  const double v = 3.0 * 8.0 * kPi * kPi * kPi;
  CHECK(helicity_spectral(w) == doctest::Approx(v).epsilon(1e-14));
  CHECK(energy(w) == doctest::Approx(v).epsilon(1e-14));
  CHECK(helicity_quadrature(w, 4) == doctest::Approx(v).epsilon(1e-14));
  CHECK(energy_quadrature(w, 4) == doctest::Approx(v).epsilon(1e-14));
}

TEST_CASE("single helical mode: H = 2 (2pi)^3 s |a|^2 / |k|") {
  const WaveVector k{1, 2, -2};
  const Complex a{0.3, -0.7};
  for (int s : {+1, -1}) {
    const SpectralField v = helical_mode_field(k, s, a);
    CHECK(helicity_spectral(v) == doctest::Approx(2.0 * kBoxVolume * s * std::norm(a) / 3.0).epsilon(1e-14));
    CHECK(energy(v) == doctest::Approx(2.0 * kBoxVolume * std::norm(a)).epsilon(1e-14));
  }
}

TEST_CASE("both helicity routes against direct point quadrature") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SpectralField w = random_field(2, seed, 1.0);
    const double direct = direct_helicity(w, 6);
    CHECK(helicity_spectral(w) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(helicity_quadrature(w, 6) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("inner product matches energy and is symmetric") {
  const SpectralField a = random_field(3, 4, 1.0);
  const SpectralField b = random_field(2, 5, 1.0);
  CHECK(inner_product(a, a) == doctest::Approx(energy(a)).epsilon(1e-14));
  CHECK(inner_product(a, b) == doctest::Approx(inner_product(b, a)).epsilon(1e-14));
  CHECK(helicity_spectral(a) == doctest::Approx(inner_product(a, curl_inv(a))).epsilon(1e-12));
}

TEST_CASE("partial helicity") {
  const SpectralField w = random_field(2, 8, 1.0);
  const int n = min_resolution(2);
  CHECK(partial_helicity(ScalarField::constant(2.5), w, n) == doctest::Approx(2.5 * helicity_spectral(w)).epsilon(1e-12));
  CHECK_THROWS_AS(partial_helicity(ScalarField::from_coefficients(ScalarSpectrum(2)), w, n), AliasingError);

  // f = cos z, w = (sin z + sin 2z, cos z + cos 2z, 0): F = (3/4)(2pi)^3.
  VectorSpectrum raw(2);
  for (int m : {1, 2}) {
    raw[{0, 0, m}] = CVec3{Complex(0.0, -0.5), Complex(0.5, 0.0), 0.0};
    raw[{0, 0, -m}] = CVec3{Complex(0.0, 0.5), Complex(0.5, 0.0), 0.0};
  }
  ScalarSpectrum c(1);
  c[{0, 0, 1}] = 0.5;
  c[{0, 0, -1}] = 0.5;
  const double F = partial_helicity(ScalarField::from_coefficients(c), leray_project(raw), 8);
  CHECK(F == doctest::Approx(0.75 * kBoxVolume).epsilon(1e-14));
}

TEST_CASE("two-point integral") {
  const SpectralField w = random_field(1, 3, 1.0);
  // G = (v1 . v2) cos(x1 - x2) in x only: (1/2) sum over |k_x| = 1 of |c|^2 (2pi)^6.
  const DensityKernel g = [](const Vec3& x1, const Vec3& x2, const Vec3& v1, const Vec3& v2) {
    return dot(v1, v2) * std::cos(x1[0] - x2[0]);
  };
  double expect = 0.0;
  w.coefficients().for_each([&](const WaveVector& k, const CVec3& c) {
    if ((k.kx == 1 || k.kx == -1) && k.ky == 0 && k.kz == 0) expect += 0.5 * norm2(c);
  });
  expect *= kBoxVolume * kBoxVolume;
  CHECK(integral_invariant_2pt(g, w, 4) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(integral_invariant_2pt(g, w, 18), InputError);
}

TEST_CASE("kernel alignment of 2 curl^-1") {
  const KernelMap k2 = [](const SpectralField& w) { return 2.0 * curl_inv(w); };
  const SpectralField w = random_field(2, 12, 1.0);
  const AlignmentReport r = check_kernel_alignment(k2, w, min_resolution(4));
  CHECK(r.c_w == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.residual < 1e-14);
  CHECK(r.variation < 1e-12);

  const KernelMap id = [](const SpectralField& w) { return w; };
  CHECK(check_kernel_alignment(id, w, min_resolution(4)).residual > 0.1);
  CHECK_THROWS_AS(check_kernel_alignment(k2, SpectralField::zero(2), 10), DegenerateFieldError);
}

TEST_CASE("commutator: Beltrami self-bracket, antisymmetry, Lie bracket") {
  const SpectralField abc = abc_field(1.0, 0.5, 0.25);
  CHECK(commutator(abc, abc, min_resolution(2)).max_amplitude() < 1e-14);

  const SpectralField w = random_field(2, 41, 1.0);
  const SpectralField u = random_field(2, 42, 1.0);
  const int n = min_resolution(4);
  const SpectralField a = commutator(w, u, n);
  const SpectralField b = commutator(u, w, n);
  CHECK((a + b).max_amplitude() < 1e-13);

  // (w . grad) u - (u . grad) w by central differences of point evaluation.
  const FieldEvaluator ew(w), eu(u);
  const Vec3 p{1.0, 2.0, 0.5};
  const double h = 1e-5;
  Vec3 wu{0, 0, 0}, uw{0, 0, 0};
  const Vec3 wp = ew(p), up = eu(p);
  for (int j = 0; j < 3; ++j) {
    Vec3 pa = p, pb = p;
    pa[j] += h;
    pb[j] -= h;
    const Vec3 du = (1.0 / (2.0 * h)) * (eu(pa) - eu(pb));
    const Vec3 dw = (1.0 / (2.0 * h)) * (ew(pa) - ew(pb));
    wu = wu + wp[j] * du;
    uw = uw + up[j] * dw;
  }
  const Vec3 fd = wu - uw;
  const Vec3 got = evaluate(a, p);
  for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(fd[i]).epsilon(1e-7));
}

TEST_CASE("derivative of helicity along transport vanishes") {
  const SpectralField w = random_field(3, 7, 1.0);
  const SpectralField u = random_field(2, 8, 1.0);
  const double scale = std::sqrt(energy(w) * energy(u));
  const int n = min_resolution(5);
  CHECK(std::abs(derivative_vanishing_test(w, u, n)) < 1e-12 * scale);
  CHECK(std::abs(derivative_pairing(w, w, u, n)) > 1e-3 * scale);
}

TEST_CASE("functional records carry value, resolution and tolerances") {
  const auto r = functional_record("H", 1.5, 10, Tolerances{}, {{"seed", 3}});
  CHECK(r["functional"] == "H");
  CHECK(r["value"] == 1.5);
  CHECK(r["resolution"] == 10);
  CHECK(r["tolerances"]["quadrature"] == 1e-10);
  CHECK(r["metadata"]["seed"] == 3);
}
