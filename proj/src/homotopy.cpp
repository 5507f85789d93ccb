#include "helicity_lab/homotopy.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "helicity_lab/curl_ops.hpp"
#include "helicity_lab/error.hpp"
#include "helicity_lab/field_io.hpp"
#include "helicity_lab/functionals.hpp"

namespace hlab {

namespace {

// Unit L^2 norm of a h_s(k) e^{ik.x} + conj requires |a| = 1 / sqrt(2 (2pi)^3).
const double kPairNorm = std::sqrt(2.0 * kBoxVolume);
constexpr double kTieTolerance = 1e-12;
// Amplitudes below this fraction of the field's largest coefficient count as zero.
constexpr double kZeroAmplitude = 1e-12;
constexpr int kCheckSamples = 101;

EigenComponent make_component(const WaveVector& k, int sign, Complex phase, double coefficient) {
  EigenComponent v;
  v.k = k;
  v.sign = sign;
  v.phase = phase;
  v.coefficient = coefficient;
  v.eigenvalue = HelicalDecomposition::eigenvalue(k, sign);
  v.field = helical_mode_field(k, sign, phase / kPairNorm);
  return v;
}

// Canonical mode with the largest |a_s(k)|; near-ties go to the
// lexicographically smallest k. Optionally skips one mode.
std::optional<WaveVector> dominant_mode(const HelicalDecomposition& d, int sign, double threshold,
                                        std::optional<WaveVector> exclude = std::nullopt) {
  std::optional<WaveVector> best;
  double best_mag = 0.0;
  d.plus().for_each([&](const WaveVector& k, const Complex&) {
    if (!is_canonical(k) || (exclude && *exclude == k)) return;
    const double mag = std::abs(d.amplitude(k, sign));
    if (mag <= threshold) return;
    if (!best || mag > best_mag * (1.0 + kTieTolerance)) {
      best = k;
      best_mag = mag;
    }
  });
  return best;
}

EigenComponent aligned_component(const HelicalDecomposition& d, const WaveVector& k, int sign) {
  const Complex a = d.amplitude(k, sign);
  return make_component(k, sign, a / std::abs(a), kPairNorm * std::abs(a));
}

double threshold_for(const SpectralField& w) { return kZeroAmplitude * w.max_amplitude(); }

const char* sign_word(int sign) { return sign > 0 ? "positive" : "negative"; }

}  // namespace

HelicityPath signed_path(const SpectralField& w0_in, const SpectralField& w1_in, int sign) {
  const int k_max = std::max(w0_in.k_max(), w1_in.k_max());
  const SpectralField w0 = w0_in.with_k_max(k_max);
  const SpectralField w1 = w1_in.with_k_max(k_max);
  const double h0 = helicity_spectral(w0);
  const double h1 = helicity_spectral(w1);
  if (!(sign * h0 > 0.0) || !(sign * h1 > 0.0)) {
    std::ostringstream msg;
    msg << sign_word(sign) << " path needs both endpoint helicities " << sign_word(sign) << " (got " << h0
        << ", " << h1 << ")";
    throw InputError(msg.str());
  }

  const HelicalDecomposition d0 = helical_decompose(w0);
  const HelicalDecomposition d1 = helical_decompose(w1);
  const auto k0 = dominant_mode(d0, sign, threshold_for(w0));
  const auto k1 = dominant_mode(d1, sign, threshold_for(w1));
  if (!k0 || !k1) {
    throw InternalInconsistency(std::string("no nonzero ") + sign_word(sign) +
                                " helical amplitude although the helicity has that sign");
  }

  HelicityPath p;
  p.kind_ = sign > 0 ? PathKind::Positive : PathKind::Negative;
  p.w0_ = w0;
  p.w1_ = w1;
  p.h0_ = h0;
  p.h1_ = h1;
  p.v0_ = aligned_component(d0, *k0, sign);

  if (*k1 != *k0) {
    p.v1_ = aligned_component(d1, *k1, sign);
  } else {
    // Same mode pair: split w1's amplitude along v0 and its quarter-turn
    // partner, both unit eigenfields of that pair.
    const Complex rel = std::conj(p.v0_.phase) * d1.amplitude(*k0, sign);
    const double along = kPairNorm * rel.real();
    const double across = kPairNorm * rel.imag();
    const double threshold = kPairNorm * threshold_for(w1);
    if (along > threshold && along >= std::abs(across)) {
      p.v1_ = p.v0_;
      p.v1_.coefficient = along;
      p.same_mode_ = true;
    } else if (std::abs(across) > threshold) {
      const Complex quarter = Complex(0.0, across > 0.0 ? 1.0 : -1.0) * p.v0_.phase;
      p.v1_ = make_component(*k0, sign, quarter, std::abs(across));
    } else if (const auto alt = dominant_mode(d1, sign, threshold_for(w1), *k0)) {
      p.v1_ = aligned_component(d1, *alt, sign);
    } else {
      throw InputError(std::string("endpoint w1 has its only ") + sign_word(sign) +
                       " helical content antiparallel to w0's chosen eigenfield; no admissible path");
    }
  }

  for (int i = 0; i < kCheckSamples; ++i) {
    const double t = double(i) / (kCheckSamples - 1);
    const double h = helicity_spectral(p.raw(t));
    if (!(sign * h > 0.0)) {
      std::ostringstream msg;
      msg << sign_word(sign) << " path lost its sign at t=" << t << " (H=" << h << ")";
      throw InternalInconsistency(msg.str());
    }
  }
  return p;
}

HelicityPath positive_path(const SpectralField& w0, const SpectralField& w1) { return signed_path(w0, w1, +1); }

HelicityPath negative_path(const SpectralField& w0, const SpectralField& w1) { return signed_path(w0, w1, -1); }

HelicityPath zero_path(const SpectralField& w0_in, const SpectralField& w1_in, double tol) {
  const int k_max = std::max(w0_in.k_max(), w1_in.k_max());
  HelicityPath p;
  p.kind_ = PathKind::Zero;
  p.w0_ = w0_in.with_k_max(k_max);
  p.w1_ = w1_in.with_k_max(k_max);
  p.h0_ = helicity_spectral(p.w0_);
  p.h1_ = helicity_spectral(p.w1_);
  if (std::abs(p.h0_) > tol * energy(p.w0_) || std::abs(p.h1_) > tol * energy(p.w1_)) {
    std::ostringstream msg;
    msg << "zero path needs zero endpoint helicity (got " << p.h0_ << ", " << p.h1_ << ")";
    throw InputError(msg.str());
  }
  return p;
}

HelicityPath rescale_to_level(const HelicityPath& path, double c, int samples) {
  if (path.kind_ == PathKind::Zero) throw InputError("zero-helicity paths are not rescaled");
  const int sign = path.kind_ == PathKind::Positive ? +1 : -1;
  if (!(sign * c > 0.0)) throw InputError("target level has the wrong sign for this path");
  for (double h : {path.h0_, path.h1_}) {
    if (std::abs(h - c) > 1e-9 * std::abs(c)) {
      std::ostringstream msg;
      msg << "endpoint helicity " << h << " differs from target level " << c;
      throw InputError(msg.str());
    }
  }
  for (int i = 0; i < samples; ++i) {
    const double t = samples > 1 ? double(i) / (samples - 1) : 0.0;
    if (!(sign * helicity_spectral(path.raw(t)) > 0.0)) {
      throw InputError("raw path helicity changes sign; cannot rescale");
    }
  }
  HelicityPath out = path;
  out.rescaled_ = true;
  out.level_ = c;
  return out;
}

HelicityPath constant_helicity_path(const SpectralField& w0, const SpectralField& w1, int samples) {
  const double h0 = helicity_spectral(w0);
  if (std::abs(h0) <= 1e-10 * energy(w0)) return zero_path(w0, w1);
  const HelicityPath raw = h0 > 0.0 ? positive_path(w0, w1) : negative_path(w0, w1);
  return rescale_to_level(raw, h0, samples);
}

SpectralField HelicityPath::raw(double t) const {
  if (t < 0.0 || t > 1.0) throw InputError("path parameter must lie in [0, 1]");
  if (t == 0.0) return w0_;
  if (t == 1.0) return w1_;
  if (kind_ == PathKind::Zero) {
    return t <= 0.5 ? (1.0 - 2.0 * t) * w0_ : (2.0 * t - 1.0) * w1_;
  }
  const SpectralField a = v0_.coefficient * v0_.field;
  const SpectralField b = v1_.coefficient * v1_.field;
  if (t <= 0.25) return (8.0 * t) * a + (1.0 - 4.0 * t) * w0_;
  if (t <= 0.75) {
    const double phi = kPi * t - kPi / 4.0;
    return (2.0 * std::cos(phi)) * a + (2.0 * std::sin(phi)) * b;
  }
  return (8.0 - 8.0 * t) * b + (4.0 * t - 3.0) * w1_;
}

double HelicityPath::scale(double t) const {
  // Endpoints are returned as given; H(w1) = c holds there only to the
  // rescaling precondition.
  if (!rescaled_ || t == 0.0 || t == 1.0) return 1.0;
  return std::sqrt(level_ / helicity_spectral(raw(t)));
}

SpectralField HelicityPath::operator()(double t) const {
  SpectralField w = raw(t);
  if (!rescaled_ || t == 0.0 || t == 1.0) return w;
  const double s = std::sqrt(level_ / helicity_spectral(w));
  return s * std::move(w);
}

double HelicityPath::closed_form_trace(double t) const {
  if (kind_ == PathKind::Zero) {
    return t <= 0.5 ? (1.0 - 2.0 * t) * (1.0 - 2.0 * t) * h0_ : (2.0 * t - 1.0) * (2.0 * t - 1.0) * h1_;
  }
  const double c0 = v0_.coefficient;
  const double c1 = v1_.coefficient;
  const double l0 = v0_.eigenvalue;
  const double l1 = v1_.eigenvalue;
  if (t <= 0.25) return 16.0 * t * c0 * c0 / l0 + (1.0 - 4.0 * t) * (1.0 - 4.0 * t) * h0_;
  if (t <= 0.75) {
    const double phi = kPi * t - kPi / 4.0;
    const double cs = std::cos(phi);
    const double sn = std::sin(phi);
    if (same_mode_) return 4.0 * (cs * c0 + sn * c1) * (cs * c0 + sn * c1) / l0;
    return 4.0 * c0 * c0 / l0 * cs * cs + 4.0 * c1 * c1 / l1 * sn * sn;
  }
  return 16.0 * (1.0 - t) * c1 * c1 / l1 + (4.0 * t - 3.0) * (4.0 * t - 3.0) * h1_;
}

std::vector<TraceSample> sample_trace(const HelicityPath& path, int samples) {
  std::vector<TraceSample> out;
  out.reserve(std::size_t(samples));
  for (int i = 0; i < samples; ++i) {
    TraceSample s;
    s.t = samples > 1 ? double(i) / (samples - 1) : 0.0;
    const SpectralField raw = path.raw(s.t);
    s.h_raw = helicity_spectral(raw);
    s.scale = path.scale(s.t);
    s.h_rescaled = s.scale == 1.0 ? s.h_raw : helicity_spectral(s.scale * raw);
    s.h_closed_form = path.closed_form_trace(s.t);
    out.push_back(s);
  }
  return out;
}

ContinuityReport continuity(const HelicityPath& path, int samples) {
  ContinuityReport r;
  if (samples < 2) return r;
  const double dt = 1.0 / (samples - 1);
  SpectralField prev = path(0.0);
  for (int i = 1; i < samples; ++i) {
    SpectralField cur = path(double(i) * dt);
    r.max_step = std::max(r.max_step, std::sqrt(energy(cur - prev)));
    prev = std::move(cur);
  }
  r.lipschitz = r.max_step / dt;
  return r;
}

void export_path(const std::string& dir, const HelicityPath& path, int samples) {
  std::filesystem::create_directories(dir);
  std::ofstream trace(std::filesystem::path(dir) / "trace.csv");
  if (!trace) throw InputError("cannot write trace in " + dir);
  trace << "t,H_raw,scale,H_rescaled\n";
  const auto samples_out = sample_trace(path, samples);
  for (std::size_t i = 0; i < samples_out.size(); ++i) {
    const auto& s = samples_out[i];
    std::ostringstream name;
    name << "path_" << std::setw(3) << std::setfill('0') << i << ".json";
    io::write_field((std::filesystem::path(dir) / name.str()).string(), path(s.t), {{"t", s.t}});
    trace << io::format_double(s.t) << ',' << io::format_double(s.h_raw) << ',' << io::format_double(s.scale)
          << ',' << io::format_double(s.h_rescaled) << '\n';
  }
}

}  // namespace hlab
