#pragma once

#include <iosfwd>

#include "helicity_lab/spectral_core.hpp"

namespace hlab {

/// Orthonormal polarization frame {e1, e2, k/|k|} (right-handed).
struct HelicalFrame {
  Vec3 e1;
  Vec3 e2;
};

/// Frame for k != 0. Computed for the canonical member of {k, -k} and
/// extended by e1(-k) = e1(k), e2(-k) = -e2(k).
HelicalFrame helical_frame(const WaveVector& k);

/// h_s(k) = (e1 + i s e2) / sqrt(2), s = +1 or -1; i k x h_s = s |k| h_s.
CVec3 helical_vector(const WaveVector& k, int sign);

/// Amplitudes a_s(k) of a field in the helical basis; curl acts on
/// a_s(k) as multiplication by s|k|.
class HelicalDecomposition {
 public:
  explicit HelicalDecomposition(int k_max) : plus_(k_max), minus_(k_max) {}

  int k_max() const { return plus_.k_max(); }
  Complex amplitude(const WaveVector& k, int sign) const { return sign > 0 ? plus_.get(k) : minus_.get(k); }
  Complex& amplitude(const WaveVector& k, int sign) { return sign > 0 ? plus_[k] : minus_[k]; }
  static double eigenvalue(const WaveVector& k, int sign) { return sign * k.norm(); }

  const ScalarSpectrum& plus() const { return plus_; }
  const ScalarSpectrum& minus() const { return minus_; }

 private:
  ScalarSpectrum plus_;
  ScalarSpectrum minus_;
};

SpectralField curl(const SpectralField& w);
/// Torus Biot-Savart operator: c_k -> i k x c_k / |k|^2.
SpectralField curl_inv(const SpectralField& w);

HelicalDecomposition helical_decompose(const SpectralField& w);
/// Throws InputError if amplitudes violate a_s(-k) = conj(a_s(k)).
SpectralField helical_reconstruct(const HelicalDecomposition& d, const Tolerances& tol = {});

/// Real field a h_s(k) e^{ik.x} + conj, i.e. a_s(k) = a, a_s(-k) = conj(a).
SpectralField helical_mode_field(const WaveVector& k, int sign, Complex a);

/// CSV kx,ky,kz,sign,re,im,lambda for every nonzero amplitude.
void write_decomposition_csv(std::ostream& out, const HelicalDecomposition& d);

}  // namespace hlab
