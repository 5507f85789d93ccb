#include "helicity_lab/diffeo.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "helicity_lab/curl_ops.hpp"
#include "helicity_lab/error.hpp"
#include "helicity_lab/field_io.hpp"
#include "helicity_lab/functionals.hpp"
#include "helicity_lab/summation.hpp"

namespace hlab {

namespace {

int component(const WaveVector& k, Axis a) {
  switch (a) {
    case Axis::X: return k.kx;
    case Axis::Y: return k.ky;
    case Axis::Z: return k.kz;
  }
  return 0;
}

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

Axis parse_axis(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  throw InputError("shear axis must be x, y or z (got '" + s + "')");
}

ScalarField negated(const ScalarField& f) {
  ScalarSpectrum c = f.coefficients();
  for (auto& v : c.values()) v = -v;
  return ScalarField::from_coefficients(c);
}

void check_residual(double residual, const PushforwardOptions& options, int k_out, const char* what) {
  if (residual > options.max_residual) {
    std::ostringstream msg;
    msg << what << ": truncation to k_out=" << k_out << " discards relative " << residual << " (bound "
        << options.max_residual << "); raise k_out";
    throw TruncationError(msg.str());
  }
}

// curl(P_K (u x w)) on a fixed dealiased grid; u is sampled once.
class TransportRhs {
 public:
  TransportRhs(const SpectralField& u, int k_w, int n) : k_w_(k_w), n_(n), u_grid_(sample(u, n)) {}

  // Stage values need not be projected; only the step result is.
  VectorSpectrum operator()(const VectorSpectrum& w) const {
    const GridSampling gw = sample_raw(w, n_);
    std::vector<Vec3> prod(gw.size());
    for (std::size_t f = 0; f < gw.size(); ++f) prod[f] = cross(u_grid_[f], gw[f]);
    VectorSpectrum p = analyze_raw(GridSampling(n_, std::move(prod)), k_w_);
    p.for_each([&](const WaveVector& k, CVec3& c) { c = Complex(0.0, 1.0) * cross(to_complex(k.as_vec()), c); });
    return p;
  }

 private:
  int k_w_;
  int n_;
  GridSampling u_grid_;
};

// a + s b over equal cubes.
VectorSpectrum axpy(const VectorSpectrum& a, double s, const VectorSpectrum& b) {
  VectorSpectrum out = a;
  const auto o = out.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = o[i] + s * bv[i];
  return out;
}

FlowSample measure(const SpectralField& w, double t, double residual) {
  return {t, helicity_spectral(w), energy(w), residual};
}

}  // namespace

// ---------------------------------------------------------------------------
// Shears

ShearMap::ShearMap(Axis axis, ScalarField profile) : axis_(axis), profile_(std::move(profile)), eval_(profile_) {
  profile_.coefficients().for_each([&](const WaveVector& k, const Complex& c) {
    if (c != Complex{} && component(k, axis_) != 0) {
      throw InputError(std::string("shear profile along ") + axis_name(axis_) +
                       " must not depend on that coordinate");
    }
  });
}

Vec3 ShearMap::apply(const Vec3& p) const {
  Vec3 q = p;
  q[int(axis_)] += eval_.value(p);
  return q;
}

Vec3 ShearMap::apply_inverse(const Vec3& q) const {
  Vec3 p = q;
  p[int(axis_)] -= eval_.value(q);
  return p;
}

Vec3 ShearMap::push_vector(const Vec3& p, const Vec3& v) const {
  const Vec3 grad = eval_.value_and_gradient(p).second;
  Vec3 out = v;
  out[int(axis_)] += dot(grad, v);
  return out;
}

ShearMap ShearMap::inverse() const { return ShearMap(axis_, negated(profile_)); }

Vec3 DiffeoChain::apply(const Vec3& p) const {
  Vec3 q = p;
  for (const auto& m : maps_) q = m.apply(q);
  return q;
}

Vec3 DiffeoChain::apply_inverse(const Vec3& q) const {
  Vec3 p = q;
  for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) p = it->apply_inverse(p);
  return p;
}

DiffeoChain DiffeoChain::inverse() const {
  std::vector<ShearMap> inv;
  inv.reserve(maps_.size());
  for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) inv.push_back(it->inverse());
  return DiffeoChain(std::move(inv));
}

DiffeoChain random_shear_chain(std::uint64_t seed, int length, int max_mode, double max_amplitude) {
  std::mt19937_64 gen(seed);
  auto uniform = [&] { return double(gen() >> 11) * 0x1.0p-53; };
  DiffeoChain chain;
  for (int s = 0; s < length; ++s) {
    const Axis axis = Axis(s % 3);
    ScalarSpectrum c(max_mode);
    double bound = 0.0;
    c.for_each([&](const WaveVector& k, Complex& v) {
      if (!is_canonical(k) || component(k, axis) != 0) return;
      v = {2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0};
      bound += 2.0 * std::abs(v);
    });
    // sup |g| <= sum of 2|c_m| over canonical modes
    const double scale = bound > 0.0 ? max_amplitude * (0.5 + 0.5 * uniform()) / bound : 0.0;
    c.for_each([&](const WaveVector& k, Complex& v) {
      if (is_canonical(k)) {
        v *= scale;
        c[-k] = std::conj(v);
      }
    });
    chain.append(ShearMap(axis, ScalarField::from_coefficients(c)));
  }
  return chain;
}

// ---------------------------------------------------------------------------
// Group action on fields and scalars

PushforwardResult pushforward(const DiffeoChain& chain, const SpectralField& w, int k_out, int n,
                              const PushforwardOptions& options) {
  require_resolution(n, k_out, "pushforward");
  const FieldEvaluator eval(w);
  const std::size_t count = std::size_t(n) * n * n;
  std::vector<Vec3> values(count);
  const std::size_t rows = std::size_t(n) * n;
  parallel_for(rows, [&](std::size_t r) {
    for (std::size_t l = 0; l < std::size_t(n); ++l) {
      const std::size_t f = r * n + l;
      values[f] = chain.pull_back_and_push(grid_point(n, f), eval).second;
    }
  });
  Analysis a = analyze(GridSampling(n, std::move(values)), k_out);
  const double residual = std::sqrt(a.relative_residual());
  check_residual(residual, options, k_out, "pushforward");
  return {std::move(a.field), residual};
}

ScalarTransportResult transport_scalar(const DiffeoChain& chain, const ScalarField& f, int k_out, int n,
                                       const PushforwardOptions& options) {
  require_resolution(n, k_out, "transport_scalar");
  const ScalarEvaluator eval(f);
  const std::size_t count = std::size_t(n) * n * n;
  std::vector<double> values(count);
  const std::size_t rows = std::size_t(n) * n;
  parallel_for(rows, [&](std::size_t r) {
    for (std::size_t l = 0; l < std::size_t(n); ++l) {
      const std::size_t idx = r * n + l;
      values[idx] = eval.value(chain.apply_inverse(grid_point(n, idx)));
    }
  });
  ScalarAnalysis a = analyze_scalar(ScalarGrid(n, std::move(values)), k_out);
  const double residual = a.input_energy > 0.0 ? std::sqrt(a.residual_energy / a.input_energy) : 0.0;
  check_residual(residual, options, k_out, "transport_scalar");
  return {std::move(a.field), residual};
}

// ---------------------------------------------------------------------------
// Transport flow

namespace {
bool five_smooth(int n) {
  for (int f : {2, 3, 5})
    while (n % f == 0) n /= f;
  return n == 1;
}
}  // namespace

int dealiased_resolution(int k_w, int k_u) {
  // Product modes reach k_w + k_u; aliases stay outside |k| <= k_w when
  // n > 2 k_w + k_u. Even sizes keep the Nyquist plane out of the band.
  int n = std::max(2 * k_w + k_u + 1, min_resolution(std::max(k_w, k_u)));
  while (n % 2 != 0 || !five_smooth(n)) ++n;
  return n;
}

AdvectResult advect(FlowState state, double t_end, const AdvectOptions& options) {
  if (!(state.dt > 0.0)) throw InputError("advect: dt must be positive");
  if (t_end < state.t) throw InputError("advect: t_end precedes the current time");
  const int k_w = state.w.k_max();
  const int n = options.product_resolution > 0 ? options.product_resolution : dealiased_resolution(k_w, state.u.k_max());
  if (n <= 2 * k_w + state.u.k_max()) {
    std::ostringstream msg;
    msg << "advect: product grid n=" << n << " aliases into the retained band (need n > "
        << 2 * k_w + state.u.k_max() << ")";
    throw AliasingError(msg.str());
  }
  const TransportRhs rhs(state.u.with_k_max(state.u.k_max()), k_w, n);

  AdvectResult result;
  const double t0 = state.t;
  const double e0 = energy(state.w);
  const auto steps = static_cast<long>(std::ceil((t_end - t0) / state.dt - 1e-9));
  result.series.reserve(std::size_t(steps) + 1);
  result.series.push_back(measure(state.w, t0, 0.0));

  for (long i = 0; i < steps; ++i) {
    const double t_next = std::min(t_end, t0 + double(i + 1) * state.dt);
    const double h = t_next - state.t;
    const VectorSpectrum& w = state.w.coefficients();
    const VectorSpectrum k1 = rhs(w);
    const VectorSpectrum k2 = rhs(axpy(w, 0.5 * h, k1));
    const VectorSpectrum k3 = rhs(axpy(w, 0.5 * h, k2));
    const VectorSpectrum k4 = rhs(axpy(w, h, k3));
    VectorSpectrum next = w;
    {
      const auto o = next.values();
      const auto a = k1.values(), b = k2.values(), c = k3.values(), d = k4.values();
      for (std::size_t j = 0; j < o.size(); ++j) o[j] = o[j] + (h / 6.0) * (a[j] + 2.0 * b[j] + 2.0 * c[j] + d[j]);
    }

    double peak = 0.0;
    for (const auto& c : next.values()) peak = std::max(peak, std::sqrt(norm2(c)));
    const double scale = std::max(1e-300, peak * std::sqrt(3.0) * k_w);
    const double residual = divergence_residual(next) / scale;
    state.w = leray_project(next);
    state.t = t_next;

    FlowSample s = measure(state.w, state.t, residual);
    if (!std::isfinite(s.energy) || s.energy > options.blowup_factor * std::max(e0, 1e-300)) {
      std::ostringstream msg;
      msg << "advect: energy grew from " << e0 << " to " << s.energy << " by t=" << state.t
          << " (limit " << options.blowup_factor << "x); reduce dt or the advecting amplitude";
      throw BlowUpError(msg.str());
    }
    result.series.push_back(s);
  }
  result.state = std::move(state);
  return result;
}

DriftReport attribute_helicity_drift(const SpectralField& w, const SpectralField& u, double dt, double t_end,
                                     int refine_by, const AdvectOptions& options) {
  DriftReport r;
  r.h0 = helicity_spectral(w);
  const double denom = std::abs(r.h0) > 0.0 ? std::abs(r.h0) : 1.0;
  auto run = [&](const SpectralField& w0, double step, double* energy_change) {
    FlowState s{w0, u, 0.0, step};
    AdvectOptions o = options;
    if (w0.k_max() != w.k_max()) o.product_resolution = 0;
    const AdvectResult res = advect(std::move(s), t_end, o);
    if (energy_change != nullptr) {
      const double e0 = res.series.front().energy;
      *energy_change = (res.series.back().energy - e0) / e0;
    }
    return (res.series.back().helicity - res.series.front().helicity) / denom;
  };
  r.drift_dt = run(w, dt, &r.energy_change);
  r.drift_half = run(w, dt / 2.0, nullptr);
  r.drift_quarter = run(w, dt / 4.0, nullptr);
  r.drift_refined = run(w.with_k_max(w.k_max() + refine_by), dt, nullptr);
  r.temporal = r.drift_dt - r.drift_quarter;
  r.spatial = r.drift_refined - r.drift_dt;
  const double finer = r.drift_half - r.drift_quarter;
  r.halving_ratio = finer != 0.0 ? (r.drift_dt - r.drift_half) / finer : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Files

nlohmann::json chain_to_json(const DiffeoChain& chain) {
  nlohmann::json maps = nlohmann::json::array();
  for (const auto& m : chain.maps()) {
    maps.push_back({{"axis", axis_name(m.axis())}, {"profile_modes", io::scalar_modes_to_json(m.profile())}});
  }
  return {{"chain", std::move(maps)}};
}

DiffeoChain chain_from_json(const nlohmann::json& doc) {
  try {
    DiffeoChain chain;
    for (const auto& m : doc.at("chain")) {
      chain.append(ShearMap(parse_axis(m.at("axis").get<std::string>()), io::scalar_from_modes(m.at("profile_modes"))));
    }
    return chain;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed chain document: ") + e.what());
  }
}

DiffeoChain read_chain(const std::string& path) { return chain_from_json(io::read_json_file(path)); }

void write_series_csv(std::ostream& out, const std::vector<FlowSample>& series) {
  out << "t,H,E,projection_residual\n";
  for (const auto& s : series) {
    out << io::format_double(s.t) << ',' << io::format_double(s.helicity) << ',' << io::format_double(s.energy)
        << ',' << io::format_double(s.projection_residual) << '\n';
  }
}

}  // namespace hlab
