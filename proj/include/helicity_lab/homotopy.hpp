#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "helicity_lab/spectral_core.hpp"

namespace hlab {

/// A real unit-norm curl eigenfield v built from one helical mode pair,
/// together with an endpoint's expansion coefficient along it.
struct EigenComponent {
  WaveVector k;          // canonical member of the pair
  int sign = +1;         // helicity sign of the eigenvalue
  Complex phase{1, 0};   // unit complex amplitude direction of a_s(k)
  double coefficient = 0.0;
  double eigenvalue = 0.0;  // s |k|
  SpectralField field;   // the unit-norm v itself
};

enum class PathKind { Positive, Negative, Zero };

/// t in [0, 1] -> field, with the data of the piecewise construction.
class HelicityPath {
 public:
  PathKind kind() const { return kind_; }
  bool rescaled() const { return rescaled_; }
  double level() const { return level_; }
  const SpectralField& start() const { return w0_; }
  const SpectralField& end() const { return w1_; }
  /// Chosen components (positive/negative paths only).
  const EigenComponent& mode0() const { return v0_; }
  const EigenComponent& mode1() const { return v1_; }
  /// True when both ends use the same eigenfield, which changes the middle
  /// segment of the trace.
  bool same_mode() const { return same_mode_; }

  /// Raw path value before any level rescaling.
  SpectralField raw(double t) const;
  /// Scale factor (c / H(raw(t)))^{1/2}, or 1 for raw paths.
  double scale(double t) const;
  SpectralField operator()(double t) const;

  /// Closed-form helicity of raw(t) from the endpoint helicities and the
  /// chosen coefficients.
  double closed_form_trace(double t) const;

 private:
  friend HelicityPath positive_path(const SpectralField&, const SpectralField&);
  friend HelicityPath negative_path(const SpectralField&, const SpectralField&);
  friend HelicityPath zero_path(const SpectralField&, const SpectralField&, double);
  friend HelicityPath rescale_to_level(const HelicityPath&, double, int);
  friend HelicityPath signed_path(const SpectralField&, const SpectralField&, int);

  PathKind kind_ = PathKind::Zero;
  bool rescaled_ = false;
  double level_ = 0.0;
  SpectralField w0_, w1_;
  double h0_ = 0.0, h1_ = 0.0;
  EigenComponent v0_, v1_;
  bool same_mode_ = false;
};

/// Requires H(w0) > 0 and H(w1) > 0; the raw path keeps H > 0.
HelicityPath positive_path(const SpectralField& w0, const SpectralField& w1);
/// Requires H(w0) < 0 and H(w1) < 0; mirror image through the negative modes.
HelicityPath negative_path(const SpectralField& w0, const SpectralField& w1);
/// Requires |H(w_j)| <= tol * E(w_j); w(t) = (1-2t) w0, then (2t-1) w1.
HelicityPath zero_path(const SpectralField& w0, const SpectralField& w1, double tol = 1e-10);

/// Multiplies each raw sample by (c / H)^{1/2}. Requires H(w0) = H(w1) = c to
/// relative 1e-9 and sign(H) = sign(c) at `samples` uniform t values.
HelicityPath rescale_to_level(const HelicityPath& path, double c, int samples = 101);

/// Dispatches on the sign of H(w0) to the positive, negative or zero path,
/// rescaled to H(w0) for nonzero levels.
HelicityPath constant_helicity_path(const SpectralField& w0, const SpectralField& w1, int samples = 101);

struct TraceSample {
  double t = 0.0;
  double h_raw = 0.0;
  double scale = 1.0;
  double h_rescaled = 0.0;
  double h_closed_form = 0.0;
};

std::vector<TraceSample> sample_trace(const HelicityPath& path, int samples = 101);

struct ContinuityReport {
  double max_step = 0.0;   // max adjacent coefficient-space L^2 distance
  double lipschitz = 0.0;  // max_step / dt
};
ContinuityReport continuity(const HelicityPath& path, int samples = 101);

/// Writes <dir>/path_<i>.json for each sample plus <dir>/trace.csv
/// (t,H_raw,scale,H_rescaled).
void export_path(const std::string& dir, const HelicityPath& path, int samples = 101);

}  // namespace hlab
