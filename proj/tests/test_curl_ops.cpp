#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "helicity_lab/curl_ops.hpp"
#include "helicity_lab/error.hpp"

using namespace hlab;

namespace {

double max_diff(const SpectralField& a, const SpectralField& b) {
  const int k = std::max(a.k_max(), b.k_max());
  return (a.with_k_max(k) - b.with_k_max(k)).max_amplitude();
}

}  // namespace

TEST_CASE("helical frame is orthonormal, right-handed and mirror-consistent") {
  VectorSpectrum cube(3);
  cube.for_each([](const WaveVector& k, const CVec3&) {
    if (k.is_zero()) return;
    const HelicalFrame f = helical_frame(k);
    const Vec3 kh = (1.0 / k.norm()) * k.as_vec();
    CHECK(std::abs(dot(f.e1, f.e1) - 1.0) < 1e-15);
    CHECK(std::abs(dot(f.e2, f.e2) - 1.0) < 1e-15);
    CHECK(std::abs(dot(f.e1, f.e2)) < 1e-15);
    CHECK(std::abs(dot(f.e1, kh)) < 1e-15);
    if (is_canonical(k)) {
      const Vec3 c = cross(f.e1, f.e2);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(c[i] - kh[i]) < 1e-15);
      const HelicalFrame m = helical_frame(-k);
      CHECK(m.e1 == f.e1);
      CHECK(m.e2 == -1.0 * f.e2);
    }
  });
  CHECK_THROWS_AS(helical_frame({0, 0, 0}), InputError);
}

TEST_CASE("i k x h_s = s |k| h_s on the polarization vectors") {
  for (const WaveVector k : {WaveVector{1, 0, 0}, WaveVector{0, 0, 3}, WaveVector{-2, 1, 4}, WaveVector{1, -1, -1}}) {
    for (int s : {+1, -1}) {
      const CVec3 h = helical_vector(k, s);
      const CVec3 lhs = Complex(0.0, 1.0) * cross(to_complex(k.as_vec()), h);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(lhs[i] - s * k.norm() * h[i]) < 1e-14);
      CHECK(std::abs(hdot(h, h) - 1.0) < 1e-15);
      CHECK(std::abs(hdot(helical_vector(k, -s), h)) < 1e-15);
    }
  }
}

TEST_CASE("curl against the closed form and against finite differences") {
  // curl (0, 0, sin x) = (0, -cos x, 0)
  VectorSpectrum raw(1);
  raw[{1, 0, 0}] = CVec3{0.0, 0.0, Complex(0.0, -0.5)};
  raw[{-1, 0, 0}] = CVec3{0.0, 0.0, Complex(0.0, 0.5)};
  const SpectralField c = curl(leray_project(raw));
  const Vec3 x{0.4, 1.1, 2.7};
  const Vec3 v = evaluate(c, x);
  CHECK(std::abs(v[0]) < 1e-15);
  CHECK(v[1] == doctest::Approx(-std::cos(x[0])).epsilon(1e-14));
  CHECK(std::abs(v[2]) < 1e-15);

  const SpectralField w = random_field(3, 23, 1.0);
  const FieldEvaluator ew(w);
  const SpectralField cw = curl(w);
  const double h = 1e-5;
  for (const Vec3 p : {Vec3{0.1, 0.2, 0.3}, Vec3{5.0, 1.0, 3.3}}) {
    // central differences for d w_i / d x_j
    double J[3][3];
    for (int j = 0; j < 3; ++j) {
      Vec3 a = p, b = p;
      a[j] += h;
      b[j] -= h;
      const Vec3 d = (1.0 / (2.0 * h)) * (ew(a) - ew(b));
      for (int i = 0; i < 3; ++i) J[i][j] = d[i];
    }
    const Vec3 expect{J[2][1] - J[1][2], J[0][2] - J[2][0], J[1][0] - J[0][1]};
    const Vec3 got = evaluate(cw, p);
    for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-7));
  }
}

TEST_CASE("curl_inv inverts curl on both sides") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SpectralField w = random_field(4, seed, 1.0);
    CHECK(max_diff(curl_inv(curl(w)), w) < 1e-14);
    CHECK(max_diff(curl(curl_inv(w)), w) < 1e-14);
  }
}

TEST_CASE("helical decomposition: symmetry, reconstruction, diagonal curl") {
  const SpectralField w = random_field(3, 31, 1.0);
  const HelicalDecomposition d = helical_decompose(w);
  const HelicalDecomposition dc = helical_decompose(curl(w));
  d.plus().for_each([&](const WaveVector& k, const Complex&) {
    if (k.is_zero()) return;
    for (int s : {+1, -1}) {
      CHECK(d.amplitude(-k, s) == std::conj(d.amplitude(k, s)));
      CHECK(std::abs(dc.amplitude(k, s) - s * k.norm() * d.amplitude(k, s)) < 1e-13);
    }
  });
  CHECK(max_diff(helical_reconstruct(d), w) < 1e-15);

  HelicalDecomposition bad(1);
  bad.amplitude({1, 0, 0}, +1) = 1.0;
  CHECK_THROWS_AS(helical_reconstruct(bad), InputError);
}

TEST_CASE("helical mode fields are curl eigenfields") {
  const WaveVector k{2, -1, 1};
  const SpectralField v = helical_mode_field(k, -1, {0.3, 0.4});
  CHECK(max_diff(curl(v), -k.norm() * v) < 1e-14);
  const Complex a = helical_decompose(v).amplitude(k, -1);
  CHECK(std::abs(a - Complex(0.3, 0.4)) < 1e-15);
  CHECK(std::abs(helical_decompose(v).amplitude(k, +1)) < 1e-15);
  CHECK_THROWS_AS(helical_mode_field({0, 0, 0}, +1, 1.0), InputError);
}

TEST_CASE("decomposition CSV lists nonzero amplitudes with eigenvalues") {
  std::ostringstream out;
  write_decomposition_csv(out, helical_decompose(helical_mode_field({0, 0, 2}, +1, 1.0)));
  const std::string text = out.str();
  CHECK(text.rfind("kx,ky,kz,sign,re,im,lambda\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  CHECK(text.find("0,0,2,+,") != std::string::npos);
  CHECK(text.find("0,0,-2,+,") != std::string::npos);
}
