#include "helicity_lab/curl_ops.hpp"

#include <ostream>
#include <sstream>

#include "helicity_lab/error.hpp"
#include "helicity_lab/field_io.hpp"

namespace hlab {

namespace detail {
SpectralField make_field_mirrored(VectorSpectrum coeffs);
}

namespace {

const Complex kI{0.0, 1.0};

Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

HelicalFrame canonical_frame(const WaveVector& k) {
  const Vec3 khat = normalized(k.as_vec());
  const Vec3 e1 = (k.kx == 0 && k.ky == 0) ? Vec3{1.0, 0.0, 0.0} : normalized(cross(k.as_vec(), Vec3{0, 0, 1}));
  return {e1, cross(khat, e1)};
}

CVec3 i_cross(const WaveVector& k, const CVec3& c) { return kI * cross(to_complex(k.as_vec()), c); }

}  // namespace

HelicalFrame helical_frame(const WaveVector& k) {
  if (k.is_zero()) throw InputError("helical frame is undefined at k = 0");
  if (is_canonical(k)) return canonical_frame(k);
  const HelicalFrame f = canonical_frame(-k);
  return {f.e1, (-1.0) * f.e2};
}

CVec3 helical_vector(const WaveVector& k, int sign) {
  const HelicalFrame f = helical_frame(k);
  const double r = 1.0 / std::sqrt(2.0);
  return {r * Complex(f.e1[0], sign * f.e2[0]), r * Complex(f.e1[1], sign * f.e2[1]),
          r * Complex(f.e1[2], sign * f.e2[2])};
}

SpectralField curl(const SpectralField& w) {
  VectorSpectrum out(w.k_max());
  w.coefficients().for_each([&](const WaveVector& k, const CVec3& c) {
    if (is_canonical(k)) out[k] = i_cross(k, c);
  });
  return detail::make_field_mirrored(std::move(out));
}

SpectralField curl_inv(const SpectralField& w) {
  VectorSpectrum out(w.k_max());
  w.coefficients().for_each([&](const WaveVector& k, const CVec3& c) {
    if (is_canonical(k)) out[k] = (1.0 / k.norm2()) * i_cross(k, c);
  });
  return detail::make_field_mirrored(std::move(out));
}

HelicalDecomposition helical_decompose(const SpectralField& w) {
  HelicalDecomposition d(w.k_max());
  w.coefficients().for_each([&](const WaveVector& k, const CVec3& c) {
    if (!is_canonical(k)) return;
    for (int s : {+1, -1}) {
      const Complex a = hdot(helical_vector(k, s), c);
      d.amplitude(k, s) = a;
      d.amplitude(-k, s) = std::conj(a);
    }
  });
  return d;
}

SpectralField helical_reconstruct(const HelicalDecomposition& d, const Tolerances& tol) {
  double scale = 1.0;
  double worst = 0.0;
  for (int s : {+1, -1}) {
    const ScalarSpectrum& amps = s > 0 ? d.plus() : d.minus();
    amps.for_each([&](const WaveVector& k, const Complex& a) {
      scale = std::max(scale, std::abs(a));
      worst = std::max(worst, std::abs(amps[-k] - std::conj(a)));
    });
    if (std::abs(amps[WaveVector{}]) != 0.0) throw InputError("helical amplitude at k = 0 is not allowed");
  }
  if (worst > tol.representation * scale) {
    std::ostringstream msg;
    msg << "helical amplitudes violate reality symmetry (residual " << worst << ")";
    throw InputError(msg.str());
  }
  VectorSpectrum out(d.k_max());
  out.for_each([&](const WaveVector& k, CVec3& c) {
    if (!is_canonical(k)) return;
    const Complex ap = 0.5 * (d.amplitude(k, +1) + std::conj(d.amplitude(-k, +1)));
    const Complex am = 0.5 * (d.amplitude(k, -1) + std::conj(d.amplitude(-k, -1)));
    c = ap * helical_vector(k, +1) + am * helical_vector(k, -1);
  });
  return detail::make_field_mirrored(std::move(out));
}

SpectralField helical_mode_field(const WaveVector& k, int sign, Complex a) {
  if (k.is_zero()) throw InputError("helical mode needs k != 0");
  HelicalDecomposition d(k.linf());
  d.amplitude(k, sign) = a;
  d.amplitude(-k, sign) = std::conj(a);
  return helical_reconstruct(d);
}

void write_decomposition_csv(std::ostream& out, const HelicalDecomposition& d) {
  out << "kx,ky,kz,sign,re,im,lambda\n";
  d.plus().for_each([&](const WaveVector& k, const Complex&) {
    for (int s : {+1, -1}) {
      const Complex a = d.amplitude(k, s);
      if (a == Complex{}) continue;
      out << k.kx << ',' << k.ky << ',' << k.kz << ',' << (s > 0 ? "+" : "-") << ','
          << io::format_double(a.real()) << ',' << io::format_double(a.imag()) << ','
          << io::format_double(HelicalDecomposition::eigenvalue(k, s)) << '\n';
    }
  });
}

}  // namespace hlab
