#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "helicity_lab/spectral_core.hpp"

namespace hlab {

enum class Axis { X = 0, Y = 1, Z = 2 };

/// x_axis -> x_axis + g(other coordinates). The Jacobian is unit
/// triangular, so the map preserves volume exactly and has the explicit
/// inverse x_axis -> x_axis - g.
class ShearMap {
 public:
  /// Throws InputError if the profile depends on the sheared coordinate.
  ShearMap(Axis axis, ScalarField profile);

  Axis axis() const { return axis_; }
  const ScalarField& profile() const { return profile_; }

  Vec3 apply(const Vec3& p) const;
  Vec3 apply_inverse(const Vec3& q) const;
  /// D(shear)(p) v.
  Vec3 push_vector(const Vec3& p, const Vec3& v) const;
  ShearMap inverse() const;

 private:
  Axis axis_;
  ScalarField profile_;
  ScalarEvaluator eval_;
};

/// Composition in application order: maps()[0] acts first.
class DiffeoChain {
 public:
  DiffeoChain() = default;
  explicit DiffeoChain(std::vector<ShearMap> maps) : maps_(std::move(maps)) {}

  const std::vector<ShearMap>& maps() const { return maps_; }
  bool empty() const { return maps_.empty(); }
  void append(ShearMap m) { maps_.push_back(std::move(m)); }

  Vec3 apply(const Vec3& p) const;
  Vec3 apply_inverse(const Vec3& q) const;
  /// Pulls q back to p = chain^{-1}(q) and returns (p, DPhi(p) v(p)).
  template <class VectorAt>
  std::pair<Vec3, Vec3> pull_back_and_push(const Vec3& q, VectorAt&& v) const;
  /// Reversed sequence of inverted shears.
  DiffeoChain inverse() const;

 private:
  std::vector<ShearMap> maps_;
};

struct PushforwardOptions {
  /// Relative L^2 size of the discarded part above which the result is refused.
  double max_residual = 1e-6;
};

struct PushforwardResult {
  SpectralField field;
  /// sqrt(discarded energy / sampled energy).
  double projection_residual = 0.0;
};

/// Phi_* w sampled in Lagrangian form, (Phi_* w)(q) = DPhi(p) w(p) with
/// p = Phi^{-1}(q), then analyzed to k_out. Throws TruncationError when the
/// residual exceeds options.max_residual.
PushforwardResult pushforward(const DiffeoChain& chain, const SpectralField& w, int k_out, int n,
                              const PushforwardOptions& options = {});

struct ScalarTransportResult {
  ScalarField field;
  double projection_residual = 0.0;
};

/// f o Phi^{-1} analyzed to k_out.
ScalarTransportResult transport_scalar(const DiffeoChain& chain, const ScalarField& f, int k_out, int n,
                                       const PushforwardOptions& options = {});

/// Random chain of `length` shears cycling through the axes; each profile
/// has modes with |m|_inf <= max_mode in the two free coordinates and
/// max |g| <= max_amplitude.
DiffeoChain random_shear_chain(std::uint64_t seed, int length, int max_mode, double max_amplitude);

// ---------------------------------------------------------------------------
// Transport flow d/dt w = [w, u] = curl(u x w)

struct FlowState {
  SpectralField w;
  SpectralField u;
  double t = 0.0;
  double dt = 1e-3;
};

struct FlowSample {
  double t = 0.0;
  double helicity = 0.0;
  double energy = 0.0;
  /// Relative divergence removed by re-projecting after the step.
  double projection_residual = 0.0;
};

struct AdvectOptions {
  /// Product grid; 0 selects the smallest even 5-smooth n with n > 2 k_w + k_u.
  int product_resolution = 0;
  double blowup_factor = 1e3;
};

struct AdvectResult {
  FlowState state;
  std::vector<FlowSample> series;
};

/// Smallest even 5-smooth product grid that keeps aliases of u x w out of
/// the retained band |k|_inf <= k_w.
int dealiased_resolution(int k_w, int k_u);

/// Classical RK4 with fixed step state.dt up to t_end. The field keeps the
/// truncation of state.w; u x w is formed on a grid fine enough that no
/// aliased product mode lands in the retained band.
AdvectResult advect(FlowState state, double t_end, const AdvectOptions& options = {});

struct DriftReport {
  double h0 = 0.0;
  double drift_dt = 0.0;        // (H(t_end) - H0) / |H0| at dt
  double drift_half = 0.0;      // at dt/2
  double drift_quarter = 0.0;   // at dt/4
  double drift_refined = 0.0;   // at dt with truncation raised by refine_by
  double temporal = 0.0;        // drift_dt - drift_quarter
  double spatial = 0.0;         // drift_refined - drift_dt
  /// (drift_dt - drift_half) / (drift_half - drift_quarter); 2^p for order p.
  double halving_ratio = 0.0;
  double energy_change = 0.0;   // (E(t_end) - E0) / E0 at dt
};

/// Separates time-stepping drift (dt halving) from truncation drift
/// (re-running with k_max(w) + refine_by).
DriftReport attribute_helicity_drift(const SpectralField& w, const SpectralField& u, double dt, double t_end,
                                     int refine_by = 4, const AdvectOptions& options = {});

// ---------------------------------------------------------------------------
// Files

/// {"chain": [{"axis": "x", "profile_modes": [{"k": [..], "re": r, "im": i}]}]}
nlohmann::json chain_to_json(const DiffeoChain& chain);
DiffeoChain chain_from_json(const nlohmann::json& doc);
DiffeoChain read_chain(const std::string& path);

/// CSV t,H,E,projection_residual.
void write_series_csv(std::ostream& out, const std::vector<FlowSample>& series);

// ---------------------------------------------------------------------------

template <class VectorAt>
std::pair<Vec3, Vec3> DiffeoChain::pull_back_and_push(const Vec3& q, VectorAt&& v) const {
  std::vector<Vec3> points(maps_.size() + 1);
  points.back() = q;
  for (std::size_t i = maps_.size(); i-- > 0;) points[i] = maps_[i].apply_inverse(points[i + 1]);
  Vec3 vec = v(points.front());
  for (std::size_t i = 0; i < maps_.size(); ++i) vec = maps_[i].push_vector(points[i], vec);
  return {points.front(), vec};
}

}  // namespace hlab
