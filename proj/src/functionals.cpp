#include "helicity_lab/functionals.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "helicity_lab/curl_ops.hpp"
#include "helicity_lab/error.hpp"
#include "helicity_lab/summation.hpp"

namespace hlab {

namespace {

const Complex kI{0.0, 1.0};

// Coefficients of the partial derivative d/dx_axis of each component.
VectorSpectrum derivative(const SpectralField& w, int axis) {
  VectorSpectrum out(w.k_max());
  w.coefficients().for_each([&](const WaveVector& k, const CVec3& c) {
    const int ka = axis == 0 ? k.kx : axis == 1 ? k.ky : k.kz;
    out[k] = (kI * double(ka)) * c;
  });
  return out;
}

}  // namespace

double helicity_spectral(const SpectralField& w) {
  const HelicalDecomposition d = helical_decompose(w);
  CompensatedSum sum;
  d.plus().for_each([&](const WaveVector& k, const Complex& ap) {
    if (k.is_zero()) return;
    sum.add((std::norm(ap) - std::norm(d.amplitude(k, -1))) / k.norm());
  });
  return kBoxVolume * sum.value();
}

double helicity_quadrature(const SpectralField& w, int n) {
  require_resolution(n, w.k_max(), "helicity_quadrature");
  const GridSampling gw = sample(w, n);
  const GridSampling ga = sample(curl_inv(w), n);
  return grid_integral(gw.size(), n, [&](std::size_t f) { return dot(gw[f], ga[f]); });
}

double energy(const SpectralField& w) {
  CompensatedSum sum;
  for (const auto& c : w.coefficients().values()) sum.add(norm2(c));
  return kBoxVolume * sum.value();
}

double energy_quadrature(const SpectralField& w, int n) {
  const GridSampling g = sample(w, n);
  return grid_integral(g.size(), n, [&](std::size_t f) { return dot(g[f], g[f]); });
}

double inner_product(const SpectralField& a, const SpectralField& b) {
  CompensatedSum sum;
  a.coefficients().for_each([&](const WaveVector& k, const CVec3& c) { sum.add(hdot(b[k], c).real()); });
  return kBoxVolume * sum.value();
}

double partial_helicity(const ScalarField& f, const SpectralField& w, int n) {
  require_resolution(n, f.k_max() + w.k_max(), "partial_helicity");
  const ScalarGrid gf = sample(f, n);
  const GridSampling gw = sample(w, n);
  const GridSampling ga = sample(curl_inv(w), n);
  return grid_integral(gw.size(), n, [&](std::size_t i) { return gf[i] * dot(gw[i], ga[i]); });
}

double integral_invariant_2pt(const DensityKernel& g, const SpectralField& w, int n,
                              const TwoPointOptions& options) {
  if (n > options.max_resolution) {
    std::ostringstream msg;
    const double evaluations = std::pow(double(n), 6);
    msg << "two-point invariant at n=" << n << " needs " << evaluations
        << " kernel evaluations; cap is n=" << options.max_resolution;
    throw InputError(msg.str());
  }
  require_resolution(n, w.k_max(), "integral_invariant_2pt");
  const GridSampling gw = sample(w, n);
  const std::size_t count = gw.size();
  const double total = deterministic_sum(count, [&](std::size_t i) {
    const Vec3 x1 = gw.point(i);
    CompensatedSum row;
    for (std::size_t j = 0; j < count; ++j) row.add(g(x1, gw.point(j), gw[i], gw[j]));
    return row.value();
  });
  const double h3 = std::pow(kTwoPi / n, 3);
  return total * h3 * h3;
}

AlignmentReport check_kernel_alignment(const KernelMap& kernel, const SpectralField& w, int n,
                                       const AlignmentOptions& options) {
  const SpectralField ck = curl(kernel(w));
  require_resolution(n, w.k_max() + ck.k_max(), "check_kernel_alignment");
  const GridSampling gw = sample(w, n);
  const GridSampling gk = sample(ck, n);

  double max_w = 0.0;
  for (const auto& v : gw.values()) max_w = std::max(max_w, norm(v));
  const double floor = options.floor * max_w;
  if (max_w == 0.0) throw DegenerateFieldError("kernel alignment: |w| vanishes on the whole grid");

  const std::size_t count = gw.size();
  const double cross2 = grid_integral(count, n, [&](std::size_t f) {
    const Vec3 c = cross(gw[f], gk[f]);
    return dot(c, c);
  });
  const double scale2 = grid_integral(count, n, [&](std::size_t f) { return dot(gw[f], gw[f]) * dot(gk[f], gk[f]); });

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t f = 0; f < count; ++f) {
    const double m = norm(gw[f]);
    if (m <= floor) continue;
    const double ratio = dot(gw[f], gk[f]) / (m * m);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }

  AlignmentReport r;
  r.residual = scale2 > 0.0 ? std::sqrt(cross2 / scale2) : 0.0;
  r.c_w = inner_product(ck, w) / inner_product(w, w);
  r.variation = hi - lo;
  return r;
}

SpectralField commutator(const SpectralField& w, const SpectralField& u, int n) {
  const int k_prod = w.k_max() + u.k_max();
  require_resolution(n, k_prod, "commutator");
  const GridSampling gw = sample(w, n);
  const GridSampling gu = sample(u, n);
  std::vector<Vec3> prod(gw.size());
  for (std::size_t f = 0; f < gw.size(); ++f) prod[f] = cross(gu[f], gw[f]);
  // curl annihilates the gradient part and the mean, so projecting first
  // leaves curl(u x w) unchanged.
  const Analysis a = analyze(GridSampling(n, std::move(prod)), k_prod);
  return curl(a.field);
}

GridSampling commutator_pointwise(const SpectralField& w, const SpectralField& u, int n) {
  require_resolution(n, std::max(w.k_max(), u.k_max()), "commutator_pointwise");
  const GridSampling gw = sample(w, n);
  const GridSampling gu = sample(u, n);
  std::array<GridSampling, 3> dw{sample_raw(derivative(w, 0), n), sample_raw(derivative(w, 1), n),
                                 sample_raw(derivative(w, 2), n)};
  std::array<GridSampling, 3> du{sample_raw(derivative(u, 0), n), sample_raw(derivative(u, 1), n),
                                 sample_raw(derivative(u, 2), n)};
  std::vector<Vec3> out(gw.size(), Vec3{0.0, 0.0, 0.0});
  for (std::size_t f = 0; f < gw.size(); ++f) {
    for (int j = 0; j < 3; ++j) {
      out[f] = out[f] + gw[f][j] * du[j][f] - gu[f][j] * dw[j][f];
    }
  }
  return GridSampling(n, std::move(out));
}

double derivative_pairing(const SpectralField& v, const SpectralField& w, const SpectralField& u, int n) {
  return 2.0 * inner_product(v, commutator(w, u, n));
}

double derivative_vanishing_test(const SpectralField& w, const SpectralField& u, int n) {
  return derivative_pairing(curl_inv(w), w, u, n);
}

nlohmann::json functional_record(const std::string& name, double value, int resolution, const Tolerances& tol,
                                 const nlohmann::json& metadata) {
  return {{"functional", name},
          {"value", value},
          {"resolution", resolution},
          {"tolerances", {{"representation", tol.representation}, {"quadrature", tol.quadrature}}},
          {"metadata", metadata}};
}

}  // namespace hlab
