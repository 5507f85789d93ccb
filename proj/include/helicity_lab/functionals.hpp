#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "helicity_lab/spectral_core.hpp"

namespace hlab {

/// H = (2pi)^3 sum_k (|a_+(k)|^2 - |a_-(k)|^2) / |k|.
double helicity_spectral(const SpectralField& w);
/// Grid quadrature of w . curl^{-1} w.
double helicity_quadrature(const SpectralField& w, int n);
/// E = (2pi)^3 sum_k |c_k|^2.
double energy(const SpectralField& w);
/// Volume integral of |w|^2 on an n^3 grid.
double energy_quadrature(const SpectralField& w, int n);

/// (2pi)^3 sum_k a_k . conj(b_k), the L^2 inner product of two fields.
double inner_product(const SpectralField& a, const SpectralField& b);

/// Integral of f (w . curl^{-1} w). Needs n >= 2 (k_max(f) + k_max(w)) + 2.
double partial_helicity(const ScalarField& f, const SpectralField& w, int n);

/// Two-point density G(x1, x2, w(x1), w(x2)).
using DensityKernel = std::function<double(const Vec3& x1, const Vec3& x2, const Vec3& v1, const Vec3& v2)>;

struct TwoPointOptions {
  /// O(n^6) guard.
  int max_resolution = 16;
};

/// Double grid sum of G times (2pi)^6 / n^6.
double integral_invariant_2pt(const DensityKernel& g, const SpectralField& w, int n,
                              const TwoPointOptions& options = {});

using KernelMap = std::function<SpectralField(const SpectralField&)>;

struct AlignmentReport {
  /// ||w x curl K(w)|| / || |w| |curl K(w)| || in L^2.
  double residual = 0.0;
  /// <curl K(w), w> / <w, w>.
  double c_w = 0.0;
  /// Spread (max - min) of (w . curl K(w)) / |w|^2 where |w| > floor.
  double variation = 0.0;
};

struct AlignmentOptions {
  /// Relative to max |w| over the grid.
  double floor = 1e-6;
};

AlignmentReport check_kernel_alignment(const KernelMap& kernel, const SpectralField& w, int n,
                                       const AlignmentOptions& options = {});

/// [w, u] = curl(u x w) with the product truncated at k_max(w) + k_max(u).
/// Needs n >= 2 (k_max(w) + k_max(u)) + 2.
SpectralField commutator(const SpectralField& w, const SpectralField& u, int n);

/// (w . grad) u - (u . grad) w assembled pointwise from spectral
/// derivatives on an n^3 grid, returned as samples.
GridSampling commutator_pointwise(const SpectralField& w, const SpectralField& u, int n);

/// 2 * integral of curl^{-1} w . [w, u]; zero for every w, u.
double derivative_vanishing_test(const SpectralField& w, const SpectralField& u, int n);
/// Same integral with curl^{-1} w replaced by an arbitrary field v.
double derivative_pairing(const SpectralField& v, const SpectralField& w, const SpectralField& u, int n);

/// {"functional", "value", "resolution", "tolerances", "metadata"}.
nlohmann::json functional_record(const std::string& name, double value, int resolution, const Tolerances& tol,
                                 const nlohmann::json& metadata = nlohmann::json::object());

}  // namespace hlab
