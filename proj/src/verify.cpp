#include "helicity_lab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>

#include "helicity_lab/curl_ops.hpp"
#include "helicity_lab/field_io.hpp"
#include "helicity_lab/functionals.hpp"
#include "helicity_lab/homotopy.hpp"

namespace hlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
  const int k = std::max(a.k_max(), b.k_max());
  const SpectralField d = a.with_k_max(k) - b.with_k_max(k);
  return d.max_amplitude();
}

double l2_norm(const SpectralField& w) { return std::sqrt(energy(w)); }

CheckGroup timed(std::string id, std::string title, double budget, const std::function<void(CheckGroup&)>& body) {
  CheckGroup g;
  g.id = std::move(id);
  g.title = std::move(title);
  g.budget_seconds = budget;
  const auto start = std::chrono::steady_clock::now();
  body(g);
  g.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return g;
}

void add(CheckGroup& g, std::string name, double value, Relation r, double threshold) {
  g.checks.push_back(make_check(std::move(name), value, r, threshold));
}

// Largest |k.c| relative to sum |k_i||c_i| over modes.
double relative_divergence(const SpectralField& w) {
  double worst = 0.0;
  w.coefficients().for_each([&](const WaveVector& k, const CVec3& c) {
    const Vec3 kv = k.as_vec();
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) scale += std::abs(kv[i]) * std::abs(c[i]);
    if (scale > 0.0) worst = std::max(worst, std::abs(dot(to_complex(kv), c)) / scale);
  });
  return worst;
}

// Random field carrying only helical amplitudes of one sign (or both with
// equal magnitude when sign == 0).
SpectralField signed_field(int k_max, std::uint64_t seed, int sign) {
  std::mt19937_64 gen(seed);
  auto uniform = [&] { return double(gen() >> 11) * 0x1.0p-53; };
  HelicalDecomposition d(k_max);
  d.plus().for_each([&](const WaveVector& k, const Complex&) {
    if (!is_canonical(k)) return;
    const Complex a(2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0);
    if (sign >= 0) {
      d.amplitude(k, +1) = a;
      d.amplitude(-k, +1) = std::conj(a);
    }
    if (sign <= 0) {
      const Complex b = sign == 0 ? a * Complex(0.0, 1.0) : a;
      d.amplitude(k, -1) = b;
      d.amplitude(-k, -1) = std::conj(b);
    }
  });
  return helical_reconstruct(d);
}

double trace_mismatch(const HelicityPath& path, int samples) {
  double worst = 0.0;
  for (const auto& s : sample_trace(path, samples)) worst = std::max(worst, rel(s.h_raw, s.h_closed_form));
  return worst;
}

double level_mismatch(const HelicityPath& path, int samples) {
  double worst = 0.0;
  for (const auto& s : sample_trace(path, samples)) worst = std::max(worst, rel(s.h_rescaled, path.level()));
  return worst;
}

PushforwardOptions loose() {
  PushforwardOptions o;
  o.max_residual = 1e-2;
  return o;
}

}  // namespace

// ---------------------------------------------------------------------------

Check make_check(std::string name, double value, Relation relation, double threshold) {
  Check c{std::move(name), value, relation, threshold, false};
  switch (relation) {
    case Relation::Below: c.pass = value < threshold; break;
    case Relation::AtMost: c.pass = value <= threshold; break;
    case Relation::Above: c.pass = value > threshold; break;
    case Relation::AtLeast: c.pass = value >= threshold; break;
    case Relation::Equal: c.pass = value == threshold; break;
  }
  return c;
}

bool CheckGroup::checks_pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::Below: return "<";
    case Relation::AtMost: return "<=";
    case Relation::Above: return ">";
    case Relation::AtLeast: return ">=";
    case Relation::Equal: return "==";
  }
  return "?";
}

ScalarField trig_profile(const WaveVector& k, double a, double b) {
  ScalarSpectrum c(k.linf());
  // a cos + b sin = Re((a - i b) e^{ik.x})
  c[k] = Complex(a / 2.0, -b / 2.0);
  c[-k] = std::conj(c[k]);
  return ScalarField::from_coefficients(c);
}

ShearExample energy_control_example() {
  ShearExample ex;
  VectorSpectrum raw(1);
  raw[{1, 0, 0}] = CVec3{0.0, 0.0, Complex(0.0, -0.5)};
  raw[{-1, 0, 0}] = CVec3{0.0, 0.0, Complex(0.0, 0.5)};
  ex.w = leray_project(raw);
  ex.chain = DiffeoChain({ShearMap(Axis::X, trig_profile({0, 0, 1}, 0.0, 0.5))});
  return ex;
}

PartialHelicityExample partial_helicity_example() {
  PartialHelicityExample ex;
  VectorSpectrum raw(2);
  for (int m : {1, 2}) {
    raw[{0, 0, m}] = CVec3{Complex(0.0, -0.5), Complex(0.5, 0.0), 0.0};
    raw[{0, 0, -m}] = CVec3{Complex(0.0, 0.5), Complex(0.5, 0.0), 0.0};
  }
  ex.w = leray_project(raw);
  ex.f = trig_profile({0, 0, 1}, 1.0);
  ex.chain = DiffeoChain({ShearMap(Axis::Z, trig_profile({1, 0, 0}, 0.5)),
                          ShearMap(Axis::X, trig_profile({0, 1, 0}, 0.5))});
  return ex;
}

std::pair<SpectralField, SpectralField> path_endpoints() {
  const SpectralField w0 = abc_field(1.0, 1.0, 1.0);
  const DiffeoChain chain({ShearMap(Axis::X, trig_profile({0, 1, 0}, 0.3))});
  const int k_out = 12;
  return {w0, pushforward(chain, w0, k_out, min_resolution(k_out)).field};
}

// ---------------------------------------------------------------------------
// Acceptance criteria

CheckGroup criterion_route_equivalence() {
  return timed("1", "route equivalence", 10.0, [](CheckGroup& g) {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const SpectralField w = random_field(4, seed, 1.0);
      const double hs = helicity_spectral(w);
      const double hq = helicity_quadrature(w, min_resolution(4));
      worst = std::max(worst, std::abs(hs - hq) / std::max(1.0, std::abs(hs)));
    }
    add(g, "max |H_spec - H_quad| / max(1,|H|), 20 fields", worst, Relation::Below, 1e-10);
  });
}

CheckGroup criterion_abc_benchmark() {
  return timed("2", "ABC benchmark", 1.0, [](CheckGroup& g) {
    const SpectralField w = abc_field(1.0, 1.0, 1.0);
    const double oracle = 3.0 * kBoxVolume;
    add(g, "H spectral vs 3(2pi)^3", rel(helicity_spectral(w), oracle), Relation::Below, 1e-10);
    add(g, "H quadrature vs 3(2pi)^3", rel(helicity_quadrature(w, 8), oracle), Relation::Below, 1e-10);
    add(g, "E spectral vs 3(2pi)^3", rel(energy(w), oracle), Relation::Below, 1e-10);
    add(g, "E quadrature vs 3(2pi)^3", rel(energy_quadrature(w, 8), oracle), Relation::Below, 1e-10);
    add(g, "max |curl w - w|", max_coeff_diff(curl(w), w), Relation::Below, 1e-14);
  });
}

CheckGroup criterion_eigenrelation() {
  return timed("3", "helical eigenrelation", 5.0, [](CheckGroup& g) {
    double worst = 0.0;
    VectorSpectrum cube(4);
    cube.for_each([&](const WaveVector& k, const CVec3&) {
      if (!is_canonical(k)) return;
      for (int s : {+1, -1}) {
        const SpectralField v = helical_mode_field(k, s, Complex(1.0, 0.0));
        worst = std::max(worst, max_coeff_diff(curl(v), HelicalDecomposition::eigenvalue(k, s) * v));
      }
    });
    add(g, "max |curl v - s|k| v|, |k|_inf <= 4, both signs", worst, Relation::Below, 1e-12);
  });
}

CheckGroup criterion_diffeo_invariance() {
  return timed("4", "diffeomorphism invariance", 60.0, [](CheckGroup& g) {
    const int k_max = 3;
    const int k_out = k_max + 8;
    double worst_ratio = 0.0;
    double worst_change = 0.0;
    double min_energy_change = std::numeric_limits<double>::infinity();
    for (std::uint64_t fs = 41; fs <= 45; ++fs) {
      const SpectralField w = random_field(k_max, fs, 1.0);
      const double h = helicity_spectral(w);
      for (std::uint64_t cs = 51; cs <= 55; ++cs) {
        const DiffeoChain chain = random_shear_chain(cs, 3, 2, 0.5);
        const PushforwardResult r = pushforward(chain, w, k_out, min_resolution(k_out), loose());
        const double dh = rel(helicity_spectral(r.field), h);
        worst_change = std::max(worst_change, dh);
        worst_ratio = std::max(worst_ratio, dh / std::max(1e-8, 10.0 * r.projection_residual));
        min_energy_change = std::min(min_energy_change, rel(energy(r.field), energy(w)));
      }
    }
    add(g, "max relative dH / max(1e-8, 10 residual), 25 pairs", worst_ratio, Relation::Below, 1.0);
    add(g, "max relative dH, 25 pairs", worst_change, Relation::Below, 1e-3);
    add(g, "min relative dE over random pairs", min_energy_change, Relation::Above, 0.0);
    const ShearExample ex = energy_control_example();
    const PushforwardResult r = pushforward(ex.chain, ex.w, ex.k_out, min_resolution(ex.k_out));
    add(g, "x-shear control: relative dE", rel(energy(r.field), energy(ex.w)), Relation::Above, 1e-2);
  });
}

CheckGroup criterion_transport(const VerifyOptions& options) {
  return timed("5", "transport conservation", 120.0, [&](CheckGroup& g) {
    const SpectralField w = abc_field(1.0, 1.0, 1.0).with_k_max(6);
    const SpectralField u = random_field(2, 11, 0.5);
    const DriftReport d = attribute_helicity_drift(w, u, 1e-3, options.transport_t_end, 4);
    add(g, "|relative helicity drift| at dt", std::abs(d.drift_dt), Relation::Below, 1e-6);
    add(g, "|relative helicity drift| at k_max + 4", std::abs(d.drift_refined), Relation::Below, 1e-6);
    add(g, "relative energy change", std::abs(d.energy_change), Relation::Above, 1e-3);
    add(g, "dt-halving ratio of temporal drift", d.halving_ratio, Relation::AtLeast, 12.0);
    add(g, "dt-halving ratio of temporal drift", d.halving_ratio, Relation::AtMost, 20.0);
  });
}

CheckGroup criterion_kernel_alignment() {
  return timed("6", "kernel alignment", 10.0, [](CheckGroup& g) {
    const KernelMap k2 = [](const SpectralField& w) { return 2.0 * curl_inv(w); };
    double worst_c = 0.0, worst_res = 0.0, worst_var = 0.0;
    for (std::uint64_t seed = 61; seed <= 70; ++seed) {
      const SpectralField w = random_field(3, seed, 1.0);
      const AlignmentReport r = check_kernel_alignment(k2, w, min_resolution(6));
      worst_c = std::max(worst_c, std::abs(r.c_w - 2.0));
      worst_res = std::max(worst_res, r.residual);
      worst_var = std::max(worst_var, r.variation);
    }
    add(g, "max |c_w - 2|, 10 fields", worst_c, Relation::Below, 1e-8);
    add(g, "max parallelism residual", worst_res, Relation::Below, 1e-10);
    add(g, "max pointwise variation of c_w", worst_var, Relation::Below, 1e-8);
    const SpectralField fixed = random_field(3, 99, 1.0);
    const KernelMap frozen = [&](const SpectralField&) { return 2.0 * curl_inv(fixed); };
    const AlignmentReport r = check_kernel_alignment(frozen, random_field(3, 61, 1.0), min_resolution(6));
    add(g, "fixed-field control residual", r.residual, Relation::Above, 0.1);
  });
}

CheckGroup criterion_derivative_vanishing() {
  return timed("7", "derivative vanishing", 20.0, [](CheckGroup& g) {
    double worst = 0.0;
    int control_hits = 0;
    const int n = min_resolution(6);
    for (std::uint64_t i = 0; i < 10; ++i) {
      const SpectralField w = random_field(3, 71 + i, 1.0);
      const SpectralField u = random_field(3, 81 + i, 1.0);
      const double scale = std::sqrt(energy(w) * energy(u));
      worst = std::max(worst, std::abs(derivative_vanishing_test(w, u, n)) / scale);
      // w in place of curl^{-1} w
      if (std::abs(derivative_pairing(w, w, u, n)) > 1e-3 * scale) ++control_hits;
    }
    add(g, "max |2<curl^-1 w, [w,u]>| / sqrt(E(w)E(u))", worst, Relation::Below, 1e-9);
    add(g, "corrupted-integrand pairs above 1e-3 scale (of 10)", control_hits, Relation::AtLeast, 8.0);
  });
}

CheckGroup criterion_path_construction() {
  return timed("8", "path construction", 30.0, [](CheckGroup& g) {
    const auto [w0, w1] = path_endpoints();
    const double c = helicity_spectral(w0);
    const HelicityPath raw = positive_path(w0, w1);
    const HelicityPath path = rescale_to_level(raw, c);
    add(g, "max |H(w(t)) - c| / c, 101 samples", level_mismatch(path, 101), Relation::Below, 1e-10);
    add(g, "w(0) - w0 (max coefficient)", max_coeff_diff(path(0.0), w0), Relation::Equal, 0.0);
    add(g, "w(1) - w1 (max coefficient)", max_coeff_diff(path(1.0), w1), Relation::Equal, 0.0);
    add(g, "raw trace vs closed form, relative", trace_mismatch(raw, 101), Relation::Below, 1e-10);

    const ShearExample ex = energy_control_example();
    const SpectralField z1 = pushforward(ex.chain, ex.w, ex.k_out, min_resolution(ex.k_out)).field;
    const HelicityPath zero = zero_path(ex.w, z1);
    double worst = 0.0;
    for (int i = 0; i < 101; ++i) {
      const SpectralField w = zero(i / 100.0);
      const double e = energy(w);
      if (e > 0.0) worst = std::max(worst, std::abs(helicity_spectral(w)) / e);
    }
    add(g, "zero path max |H| / E", worst, Relation::Below, 1e-10);
  });
}

CheckGroup criterion_partial_helicity() {
  return timed("9", "partial-helicity equivariance", 30.0, [](CheckGroup& g) {
    const PartialHelicityExample ex = partial_helicity_example();
    const int k_out = ex.k_out;
    const double f0 = partial_helicity(ex.f, ex.w, min_resolution(ex.f.k_max() + ex.w.k_max()));
    const PushforwardResult pw = pushforward(ex.chain, ex.w, k_out, min_resolution(k_out));
    const ScalarTransportResult pf = transport_scalar(ex.chain, ex.f, k_out, min_resolution(k_out));
    const double lagrangian = partial_helicity(pf.field, pw.field, min_resolution(2 * k_out));
    const double naive = partial_helicity(ex.f, pw.field, min_resolution(ex.f.k_max() + k_out));
    add(g, "Lagrangian action: relative change of F", rel(lagrangian, f0), Relation::Below, 1e-6);
    add(g, "naive action: relative change of F", rel(naive, f0), Relation::Above, 1e-3);
  });
}

CheckGroup criterion_round_trip(const VerifyOptions& options) {
  return timed("10", "round trip and determinism", 0.0, [&](CheckGroup& g) {
    const auto dir = std::filesystem::temp_directory_path() / "helicity_lab_verify";
    std::filesystem::create_directories(dir);
    int mismatches = 0;
    std::vector<SpectralField> fields{abc_field(1.0, 1.0, 1.0), path_endpoints().second};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) fields.push_back(random_field(4, seed, 1.0));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string file = (dir / ("field_" + std::to_string(i) + ".json")).string();
      io::write_field(file, fields[i]);
      if (!(io::read_field(file) == fields[i])) ++mismatches;
      const auto text = io::field_to_json(fields[i]).dump();
      if (!(io::field_from_json(nlohmann::json::parse(text)) == fields[i])) ++mismatches;
    }
    std::filesystem::remove_all(dir);
    add(g, "field file round-trip mismatches", mismatches, Relation::Equal, 0.0);
    if (options.determinism) {
      VerifyOptions sub = options;
      sub.determinism = false;
      sub.transport_t_end = std::min(options.transport_t_end, 0.1);
      const std::string a = verify_report(run_verify(sub)).dump();
      const std::string b = verify_report(run_verify(sub)).dump();
      add(g, "differing verify reports across two seeded runs", a == b ? 0.0 : 1.0, Relation::Equal, 0.0);
    }
  });
}

// ---------------------------------------------------------------------------
// Module invariants

CheckGroup invariants_spectral_core() {
  return timed("spectral-core", "field representation", 0.0, [](CheckGroup& g) {
    double div = 0.0, mean = 0.0, reality = 0.0, sa = 0.0, as = 0.0, parseval = 0.0;
    int non_idempotent = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const int k = 4;
      const int n = min_resolution(k);
      const SpectralField w = random_field(k, seed, 1.0);
      div = std::max(div, relative_divergence(w));
      mean = std::max(mean, std::sqrt(norm2(w[{0, 0, 0}])));
      reality = std::max(reality, reality_residual(w.coefficients()));

      const GridSampling grid = sample(w, n);
      const SpectralField back = analyze(grid, k).field;
      as = std::max(as, max_coeff_diff(back, w) / w.max_amplitude());
      const GridSampling again = sample(back, n);
      double peak = 0.0, diff = 0.0;
      for (std::size_t f = 0; f < grid.size(); ++f) {
        peak = std::max(peak, norm(grid[f]));
        diff = std::max(diff, norm(grid[f] - again[f]));
      }
      sa = std::max(sa, diff / peak);
      parseval = std::max(parseval, rel(energy_quadrature(w, n), energy(w)));

      // Raw real spectrum with divergence and mean.
      std::mt19937_64 gen(seed + 1000);
      auto uniform = [&] { return double(gen() >> 11) * 0x1.0p-53 - 0.5; };
      VectorSpectrum raw(k);
      raw.for_each([&](const WaveVector& m, CVec3& c) {
        if (!is_canonical(m)) return;
        for (auto& x : c) x = {uniform(), uniform()};
        raw[-m] = conj(c);
      });
      raw[{0, 0, 0}] = CVec3{uniform(), uniform(), uniform()};
      const SpectralField once = leray_project(raw);
      if (!(leray_project(once.coefficients()) == once)) ++non_idempotent;
      div = std::max(div, relative_divergence(once));
      mean = std::max(mean, std::sqrt(norm2(once[{0, 0, 0}])));
    }
    add(g, "max |k.c| / sum |k_i||c_i|", div, Relation::AtMost, 32.0 * kEps);
    add(g, "max |c_0|", mean, Relation::Equal, 0.0);
    add(g, "reality residual", reality, Relation::Below, 1e-12);
    add(g, "analyze(sample(w)) - w, relative max norm", as, Relation::Below, 1e-12);
    add(g, "sample(analyze(g)) - g, relative max norm", sa, Relation::Below, 1e-12);
    add(g, "leray_project not idempotent (count)", non_idempotent, Relation::Equal, 0.0);
    add(g, "Parseval: quadrature vs spectral energy", parseval, Relation::Below, 1e-10);
  });
}

CheckGroup invariants_curl_ops() {
  return timed("curl-ops", "curl and helical basis", 0.0, [](CheckGroup& g) {
    double inv = 0.0, conj_sym = 0.0, diag = 0.0, recon = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const SpectralField w = random_field(4, seed, 1.0);
      const double a = w.max_amplitude();
      inv = std::max({inv, max_coeff_diff(curl_inv(curl(w)), w) / a, max_coeff_diff(curl(curl_inv(w)), w) / a});
      const HelicalDecomposition d = helical_decompose(w);
      const HelicalDecomposition dc = helical_decompose(curl(w));
      double amax = 0.0;
      d.plus().for_each([&](const WaveVector& k, const Complex&) {
        for (int s : {+1, -1}) amax = std::max(amax, std::abs(d.amplitude(k, s)));
      });
      d.plus().for_each([&](const WaveVector& k, const Complex&) {
        if (k.is_zero()) return;
        for (int s : {+1, -1}) {
          conj_sym = std::max(conj_sym, std::abs(d.amplitude(-k, s) - std::conj(d.amplitude(k, s))));
          const double lambda = HelicalDecomposition::eigenvalue(k, s);
          diag = std::max(diag, std::abs(dc.amplitude(k, s) - lambda * d.amplitude(k, s)) / (amax * k.norm()));
        }
      });
      recon = std::max(recon, max_coeff_diff(helical_reconstruct(d), w) / a);
    }
    add(g, "curl_inv two-sided inverse, relative max norm", inv, Relation::Below, 1e-12);
    add(g, "max |a_s(-k) - conj a_s(k)|", conj_sym, Relation::Equal, 0.0);
    add(g, "curl diagonal on helical amplitudes", diag, Relation::Below, 1e-12);
    add(g, "helical reconstruct(decompose(w)) - w", recon, Relation::Below, 1e-12);
  });
}

CheckGroup invariants_functionals() {
  return timed("functionals", "functionals", 0.0, [](CheckGroup& g) {
    const SpectralField plus = signed_field(3, 7, +1);
    const SpectralField minus = signed_field(3, 7, -1);
    const SpectralField balanced = signed_field(3, 7, 0);
    add(g, "H(+ amplitudes only)", helicity_spectral(plus), Relation::Above, 0.0);
    add(g, "-H(- amplitudes only)", -helicity_spectral(minus), Relation::Above, 0.0);
    add(g, "|H| / E with equal +/- magnitudes", std::abs(helicity_spectral(balanced)) / energy(balanced),
        Relation::Below, 1e-12);

    double scaling = 0.0, route = 0.0, comm = 0.0, two_point = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const SpectralField w = random_field(3, seed, 1.0);
      const SpectralField u = random_field(2, seed + 50, 1.0);
      const double lam = 2.5;
      scaling = std::max({scaling, rel(helicity_spectral(lam * w), lam * lam * helicity_spectral(w)),
                          rel(energy(lam * w), lam * lam * energy(w))});
      route = std::max(route, std::abs(helicity_spectral(w) - helicity_quadrature(w, 8)) /
                                  std::max(1.0, std::abs(helicity_spectral(w))));

      const int n = min_resolution(w.k_max() + u.k_max());
      const GridSampling pointwise = commutator_pointwise(w, u, n);
      const GridSampling spectral = sample(commutator(w, u, n), n);
      const double l2 = grid_integral(pointwise.size(), n, [&](std::size_t f) {
        const Vec3 d = pointwise[f] - spectral[f];
        return dot(d, d);
      });
      comm = std::max(comm, std::sqrt(l2));

      // G = v1 . v2 integrates to |mean w|^2 (2pi)^6 = 0.
      const SpectralField small = random_field(1, seed, 1.0);
      const DensityKernel g2 = [](const Vec3&, const Vec3&, const Vec3& a, const Vec3& b) { return dot(a, b); };
      two_point = std::max(two_point, std::abs(integral_invariant_2pt(g2, small, 4)) / (energy(small) * kBoxVolume));
    }
    add(g, "quadratic scaling of H and E", scaling, Relation::Below, 1e-12);
    add(g, "route equivalence", route, Relation::Below, 1e-10);
    add(g, "pointwise commutator vs curl(u x w), L2", comm, Relation::Below, 1e-9);
    add(g, "two-point integral of w(x1).w(x2), relative", two_point, Relation::Below, 1e-12);
  });
}

CheckGroup invariants_diffeo() {
  return timed("diffeo-action", "diffeomorphism action", 0.0, [](CheckGroup& g) {
    const SpectralField w = random_field(3, 5, 1.0);
    add(g, "identity chain push-forward", max_coeff_diff(pushforward({}, w, 3, 8).field, w) / w.max_amplitude(),
        Relation::Below, 1e-12);

    const ShearExample ex = energy_control_example();
    const DiffeoChain own({ShearMap(Axis::Z, trig_profile({1, 0, 0}, 0.5))});
    add(g, "z-shear along (0,0,sin x) leaves it unchanged",
        max_coeff_diff(pushforward(own, ex.w, 4, 10).field, ex.w), Relation::Below, 1e-12);

    const SpectralField pushed = pushforward(ex.chain, ex.w, ex.k_out, min_resolution(ex.k_out)).field;
    const ScalarField f = trig_profile({1, 0, 0}, 1.0);
    const ScalarField moved = transport_scalar(ex.chain, f, ex.k_out, min_resolution(ex.k_out)).field;
    std::mt19937_64 gen(17);
    auto uniform = [&] { return kTwoPi * (double(gen() >> 11) * 0x1.0p-53); };
    double closed = 0.0, scalar_closed = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Vec3 x{uniform(), uniform(), uniform()};
      const double a = 0.5;
      const double s = std::sin(x[0] - a * std::sin(x[2]));
      const Vec3 expect{a * std::cos(x[2]) * s, 0.0, s};
      closed = std::max(closed, norm(evaluate(pushed, x) - expect));
      scalar_closed = std::max(scalar_closed, std::abs(evaluate(moved, x) - std::cos(x[0] - a * std::sin(x[2]))));
    }
    add(g, "x-shear push-forward vs closed form, max pointwise", closed, Relation::Below, 1e-10);
    add(g, "scalar transport vs closed form, max pointwise", scalar_closed, Relation::Below, 1e-10);

    const DiffeoChain chain = random_shear_chain(51, 3, 2, 0.5);
    const PushforwardResult there = pushforward(chain, w, 11, min_resolution(11), loose());
    const PushforwardResult back = pushforward(chain.inverse(), there.field, 11, min_resolution(11), loose());
    const double ret = l2_norm(back.field - w.with_k_max(11)) / l2_norm(w);
    add(g, "chain then inverse: relative L2 return / 10 (r1 + r2)",
        ret / (10.0 * (there.projection_residual + back.projection_residual)), Relation::Below, 1.0);

    FlowState still{abc_field(1.0, 1.0, 1.0).with_k_max(2), SpectralField::zero(2), 0.0, 0.05};
    const AdvectResult r0 = advect(still, 1.0);
    add(g, "advect with u = 0 changes w", max_coeff_diff(r0.state.w, still.w), Relation::Equal, 0.0);
    FlowState self{abc_field(1.0, 1.0, 1.0).with_k_max(2), abc_field(1.0, 1.0, 1.0), 0.0, 0.05};
    const AdvectResult r1 = advect(self, 1.0);
    add(g, "advect with u = w (Beltrami), max change", max_coeff_diff(r1.state.w, self.w), Relation::Below, 1e-12);
  });
}

CheckGroup invariants_homotopy() {
  return timed("homotopy", "constant-helicity paths", 0.0, [](CheckGroup& g) {
    const auto [w0, w1] = path_endpoints();
    const HelicityPath path = constant_helicity_path(w0, w1);
    const ContinuityReport coarse = continuity(path, 101);
    const ContinuityReport fine = continuity(path, 201);
    add(g, "max adjacent step shrinks on refinement (ratio 201/101 samples)", fine.max_step / coarse.max_step,
        Relation::Below, 0.75);
    add(g, "estimated Lipschitz constant", fine.lipschitz, Relation::Above, 0.0);

    double div = 0.0, reality = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const SpectralField w = path(i / 20.0);
      div = std::max(div, relative_divergence(w));
      reality = std::max(reality, reality_residual(w.coefficients()));
    }
    add(g, "path samples: max |k.c| / sum |k_i||c_i|", div, Relation::AtMost, 32.0 * kEps);
    add(g, "path samples: reality residual", reality, Relation::Below, 1e-12);

    // Same eigenfield at both ends: the n0 = n1 branch of the trace.
    const WaveVector k{1, 2, 0};
    const SpectralField s0 = helical_mode_field(k, +1, {1.0, 0.5}) + helical_mode_field({0, 0, 1}, +1, {0.2, 0.0});
    const SpectralField s1 = 2.0 * helical_mode_field(k, +1, {1.0, 0.5}) + helical_mode_field({1, 0, 0}, -1, {0.3, 0.0});
    const HelicityPath same = positive_path(s0, s1);
    add(g, "same-mode path selected", same.same_mode() ? 1.0 : 0.0, Relation::Equal, 1.0);
    add(g, "same-mode trace vs closed form", trace_mismatch(same, 101), Relation::Below, 1e-10);

    const SpectralField n0 = signed_field(2, 21, -1);
    const SpectralField n1 = signed_field(3, 22, -1);
    const HelicityPath neg = negative_path(n0, n1);
    add(g, "negative path trace vs closed form", trace_mismatch(neg, 101), Relation::Below, 1e-10);
    const SpectralField n1_level = std::sqrt(helicity_spectral(n0) / helicity_spectral(n1)) * n1;
    const HelicityPath neg_level = rescale_to_level(negative_path(n0, n1_level), helicity_spectral(n0));
    add(g, "negative path level", level_mismatch(neg_level, 101), Relation::Below, 1e-10);
  });
}

// ---------------------------------------------------------------------------

std::vector<CheckGroup> run_verify(const VerifyOptions& options) {
  std::vector<CheckGroup> out;
  out.push_back(criterion_route_equivalence());
  out.push_back(criterion_abc_benchmark());
  out.push_back(criterion_eigenrelation());
  out.push_back(criterion_diffeo_invariance());
  out.push_back(criterion_transport(options));
  out.push_back(criterion_kernel_alignment());
  out.push_back(criterion_derivative_vanishing());
  out.push_back(criterion_path_construction());
  out.push_back(criterion_partial_helicity());
  out.push_back(criterion_round_trip(options));
  out.push_back(invariants_spectral_core());
  out.push_back(invariants_curl_ops());
  out.push_back(invariants_functionals());
  out.push_back(invariants_diffeo());
  out.push_back(invariants_homotopy());
  return out;
}

nlohmann::json verify_report(const std::vector<CheckGroup>& groups) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& g : groups) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : g.checks) {
      checks.push_back({{"name", c.name},
                        {"value", c.value},
                        {"relation", relation_symbol(c.relation)},
                        {"threshold", c.threshold},
                        {"pass", c.pass}});
    }
    out.push_back({{"id", g.id}, {"title", g.title}, {"pass", g.checks_pass()}, {"checks", std::move(checks)}});
  }
  return out;
}

}  // namespace hlab
