#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helicity_lab/curl_ops.hpp"
#include "helicity_lab/error.hpp"
#include "helicity_lab/field_io.hpp"
#include "helicity_lab/functionals.hpp"
#include "helicity_lab/homotopy.hpp"

using namespace hlab;

namespace {

const Complex I{0.0, 1.0};

double max_diff(const SpectralField& a, const SpectralField& b) {
  const int k = std::max(a.k_max(), b.k_max());
  return (a.with_k_max(k) - b.with_k_max(k)).max_amplitude();
}

}  // namespace

TEST_CASE("single-mode endpoints follow the analytic trace") {
  const WaveVector k0{1, 0, 0}, k1{0, 1, 1};
  const Complex a0{0.4, 0.2}, a1{-0.1, 0.5};
  const SpectralField w0 = helical_mode_field(k0, +1, a0);
  const SpectralField w1 = helical_mode_field(k1, +1, a1);
  const double q0 = 2.0 * kBoxVolume * std::norm(a0) / k0.norm();  // H(w0)
  const double q1 = 2.0 * kBoxVolume * std::norm(a1) / k1.norm();

  const HelicityPath p = positive_path(w0, w1);
  CHECK(p.mode0().k == k0);
  CHECK(p.mode1().k == k1);
  CHECK_FALSE(p.same_mode());
  CHECK(p.raw(0.0) == w0);
  CHECK(p.raw(1.0) == w1);

  for (const TraceSample& s : sample_trace(p, 41)) {
    double expect;
    // w0 = c0 v0 exactly, so the first leg is (1 + 4t) w0 and the last (5 - 4t) w1.
    if (s.t <= 0.25) {
      expect = (1.0 + 4.0 * s.t) * (1.0 + 4.0 * s.t) * q0;
    } else if (s.t <= 0.75) {
      const double phi = kPi * s.t - kPi / 4.0;
      expect = 4.0 * std::cos(phi) * std::cos(phi) * q0 + 4.0 * std::sin(phi) * std::sin(phi) * q1;
    } else {
      expect = (5.0 - 4.0 * s.t) * (5.0 - 4.0 * s.t) * q1;
    }
    CHECK(s.h_raw == doctest::Approx(expect).epsilon(1e-13));
    CHECK(s.h_closed_form == doctest::Approx(expect).epsilon(1e-13));
    CHECK(s.scale == 1.0);
  }
}

TEST_CASE("rescaled path holds the level and returns the endpoints") {
  const WaveVector k0{1, 1, 0}, k1{0, 0, 2};
  const SpectralField w0 = helical_mode_field(k0, +1, {0.3, -0.1});
  // |a1|^2 |k0| = |a0|^2 |k1| gives equal helicity.
  const double r = std::sqrt(0.1 * k1.norm() / k0.norm());
  const SpectralField w1 = helical_mode_field(k1, +1, r);
  const double c = helicity_spectral(w0);
  REQUIRE(helicity_spectral(w1) == doctest::Approx(c).epsilon(1e-14));

  const HelicityPath p = constant_helicity_path(w0, w1);
  CHECK(p.rescaled());
  CHECK(p.level() == c);
  CHECK(p(0.0) == w0.with_k_max(2));
  CHECK(p(1.0) == w1);
  for (const TraceSample& s : sample_trace(p, 101)) CHECK(s.h_rescaled == doctest::Approx(c).epsilon(1e-13));
  const ContinuityReport cr = continuity(p, 101);
  CHECK(cr.lipschitz > 0.0);
  CHECK(cr.lipschitz < 1e3);
}

TEST_CASE("negative path mirrors the positive one") {
  const SpectralField w0 = helical_mode_field({1, 0, 0}, -1, 0.5);
  const SpectralField w1 = helical_mode_field({0, 2, 0}, -1, 0.5 * std::sqrt(2.0));
  const HelicityPath p = constant_helicity_path(w0, w1);
  CHECK(p.kind() == PathKind::Negative);
  for (const TraceSample& s : sample_trace(p, 51)) {
    CHECK(s.h_raw < 0.0);
    CHECK(s.h_rescaled == doctest::Approx(p.level()).epsilon(1e-13));
  }
  CHECK_THROWS_AS(positive_path(w0, w1), InputError);
}

TEST_CASE("same eigenfield at both ends") {
  const WaveVector k{0, 1, 0};
  const Complex a{0.3, 0.4};
  const SpectralField w0 = helical_mode_field(k, +1, a);

  SUBCASE("parallel") {
    const HelicityPath p = positive_path(w0, 2.0 * w0);
    CHECK(p.same_mode());
    for (const TraceSample& s : sample_trace(p, 41)) CHECK(s.h_raw == doctest::Approx(s.h_closed_form).epsilon(1e-13));
  }
  SUBCASE("quarter turn") {
    const HelicityPath p = positive_path(w0, helical_mode_field(k, +1, I * a));
    CHECK_FALSE(p.same_mode());
    CHECK(p.mode1().k == k);
    CHECK(std::abs(p.mode1().phase - I * p.mode0().phase) < 1e-15);
    for (const TraceSample& s : sample_trace(p, 41)) {
      CHECK(s.h_raw > 0.0);
      CHECK(s.h_raw == doctest::Approx(s.h_closed_form).epsilon(1e-13));
    }
  }
  SUBCASE("antiparallel with nothing else to use") {
    CHECK_THROWS_AS(positive_path(w0, -1.0 * w0), InputError);
  }
  SUBCASE("antiparallel falls back to another mode") {
    const SpectralField w1 = -1.0 * w0 + helical_mode_field({1, 1, 1}, +1, 0.5);
    REQUIRE(helicity_spectral(w1) > 0.0);
    const HelicityPath p = positive_path(w0, w1);
    CHECK(p.mode1().k == WaveVector{1, 1, 1});
  }
}

TEST_CASE("generic fields: trace matches the closed form") {
  const SpectralField w0 = abc_field(1.0, 0.8, 0.6);
  const SpectralField w1 = abc_field(0.5, 1.2, 0.9).with_k_max(2) + helical_mode_field({2, 1, 0}, -1, 0.05);
  const HelicityPath p = positive_path(w0, w1);
  for (const TraceSample& s : sample_trace(p, 101)) {
    CHECK(s.h_raw > 0.0);
    CHECK(s.h_raw == doctest::Approx(s.h_closed_form).epsilon(1e-12));
  }
}

TEST_CASE("rescaling preconditions") {
  const SpectralField w0 = helical_mode_field({1, 0, 0}, +1, 0.5);
  const SpectralField w1 = helical_mode_field({0, 1, 0}, +1, 0.6);
  const HelicityPath p = positive_path(w0, w1);
  CHECK_THROWS_AS(rescale_to_level(p, helicity_spectral(w0)), InputError);
  CHECK_THROWS_AS(rescale_to_level(p, -1.0), InputError);
  CHECK_THROWS_AS(p.raw(1.5), InputError);
  CHECK_THROWS_AS(positive_path(w0, helical_mode_field({0, 1, 0}, -1, 0.6)), InputError);
}

TEST_CASE("zero-helicity path") {
  VectorSpectrum r0(1), r1(1);
  r0[{0, 0, 1}] = CVec3{0.0, -0.5 * I, 0.0};
  r0[{0, 0, -1}] = CVec3{0.0, 0.5 * I, 0.0};
  r1[{1, 0, 0}] = CVec3{0.0, 0.0, -0.5 * I};
  r1[{-1, 0, 0}] = CVec3{0.0, 0.0, 0.5 * I};
  const SpectralField w0 = leray_project(r0);
  const SpectralField w1 = leray_project(r1);
  const HelicityPath p = constant_helicity_path(w0, w1);
  CHECK(p.kind() == PathKind::Zero);
  CHECK(max_diff(p(0.25), 0.5 * w0) < 1e-16);
  CHECK(p(0.5).nonzero_modes() == 0);
  for (const TraceSample& s : sample_trace(p, 21)) CHECK(std::abs(s.h_raw) < 1e-15);
  CHECK_THROWS_AS(zero_path(w0, abc_field(1, 1, 1)), InputError);
  CHECK_THROWS_AS(rescale_to_level(p, 1.0), InputError);
}

TEST_CASE("export writes one field per sample and the trace") {
  const auto dir = std::filesystem::temp_directory_path() / "helicity_lab_test_export";
  std::filesystem::remove_all(dir);
  const SpectralField w0 = helical_mode_field({1, 0, 0}, +1, 0.5);
  const SpectralField w1 = helical_mode_field({0, 1, 0}, +1, 0.5);
  const HelicityPath p = constant_helicity_path(w0, w1);
  export_path(dir.string(), p, 5);
  for (int i = 0; i < 5; ++i) CHECK(std::filesystem::exists(dir / ("path_00" + std::to_string(i) + ".json")));
  CHECK(io::read_field((dir / "path_000.json").string()) == w0);
  CHECK(io::read_field((dir / "path_004.json").string()) == w1);
  CHECK(io::read_json_file((dir / "path_002.json").string())["metadata"]["t"] == 0.5);
  std::ifstream trace(dir / "trace.csv");
  std::string line;
  int lines = 0;
  std::getline(trace, line);
  CHECK(line == "t,H_raw,scale,H_rescaled");
  while (std::getline(trace, line)) ++lines;
  CHECK(lines == 5);
  std::filesystem::remove_all(dir);
}
