#include "helicity_lab/field_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "helicity_lab/error.hpp"

namespace hlab::io {

namespace {

WaveVector parse_wave_vector(const Json& k) {
  if (!k.is_array() || k.size() != 3) throw InputError("mode index must be an array of three integers");
  for (const auto& v : k) {
    if (!v.is_number_integer()) throw InputError("mode index components must be integers");
  }
  return {k[0].get<int>(), k[1].get<int>(), k[2].get<int>()};
}

Json wave_vector_json(const WaveVector& k) { return Json::array({k.kx, k.ky, k.kz}); }

int parse_k_max(const Json& doc) {
  if (!doc.is_object() || !doc.contains("k_max") || !doc["k_max"].is_number_integer()) {
    throw InputError("document needs an integer k_max");
  }
  const int k_max = doc["k_max"].get<int>();
  if (k_max < 0) throw InputError("k_max must be nonnegative");
  return k_max;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
}

SpectralField field_from_json_unguarded(const Json& doc, const Tolerances& tol) {
  const int k_max = parse_k_max(doc);
  if (!doc.contains("modes") || !doc["modes"].is_array()) throw InputError("field document needs a modes array");
  VectorSpectrum raw(k_max);
  std::set<WaveVector> seen;
  for (const auto& m : doc["modes"]) {
    const WaveVector k = parse_wave_vector(m.at("k"));
    if (!raw.contains(k)) {
      std::ostringstream msg;
      msg << "mode (" << k.kx << "," << k.ky << "," << k.kz << ") lies outside k_max=" << k_max;
      throw InputError(msg.str());
    }
    if (!seen.insert(k).second) throw InputError("duplicate mode in field document");
    const auto& re = m.at("re");
    const auto& im = m.at("im");
    if (!re.is_array() || re.size() != 3 || !im.is_array() || im.size() != 3) {
      throw InputError("mode amplitudes need three re and three im entries");
    }
    for (int a = 0; a < 3; ++a) raw[k][a] = {re[a].get<double>(), im[a].get<double>()};
  }
  double scale = 1.0;
  for (const auto& c : raw.values()) scale = std::max(scale, std::sqrt(norm2(c)));
  if (std::sqrt(norm2(raw[WaveVector{}])) > tol.representation * scale) {
    throw InputError("field has a nonzero mean mode; exact fields have zero mean");
  }
  if (divergence_residual(raw) > tol.representation * scale * (2.0 * k_max + 1.0)) {
    throw InputError("field is not divergence-free (k . c_k != 0)");
  }
  return leray_project(raw, tol);
}

ScalarField scalar_from_modes_unguarded(const Json& modes, const Tolerances& tol) {
  if (!modes.is_array()) throw InputError("scalar modes must be an array");
  int k_max = 0;
  for (const auto& m : modes) k_max = std::max(k_max, parse_wave_vector(m.at("k")).linf());
  ScalarSpectrum raw(k_max);
  std::set<WaveVector> seen;
  for (const auto& m : modes) {
    const WaveVector k = parse_wave_vector(m.at("k"));
    if (!seen.insert(k).second) throw InputError("duplicate scalar mode");
    raw[k] = {m.at("re").get<double>(), m.value("im", 0.0)};
  }
  return ScalarField::from_coefficients(raw, tol);
}

}  // namespace

Json field_to_json(const SpectralField& field, const Json& metadata) {
  Json modes = Json::array();
  field.coefficients().for_each([&](const WaveVector& k, const CVec3& c) {
    if (norm2(c) == 0.0) return;
    modes.push_back({{"k", wave_vector_json(k)},
                     {"re", {c[0].real(), c[1].real(), c[2].real()}},
                     {"im", {c[0].imag(), c[1].imag(), c[2].imag()}}});
  });
  Json doc{{"k_max", field.k_max()}, {"modes", std::move(modes)}};
  if (!metadata.empty()) doc["metadata"] = metadata;
  return doc;
}

SpectralField field_from_json(const Json& doc, const Tolerances& tol) {
  return guarded([&] { return field_from_json_unguarded(doc, tol); });
}

void write_field(const std::string& path, const SpectralField& field, const Json& metadata) {
  write_json_file(path, field_to_json(field, metadata));
}

SpectralField read_field(const std::string& path, const Tolerances& tol) {
  return field_from_json(read_json_file(path), tol);
}

Json scalar_modes_to_json(const ScalarField& f) {
  Json modes = Json::array();
  f.coefficients().for_each([&](const WaveVector& k, const Complex& c) {
    if (c == Complex{}) return;
    modes.push_back({{"k", wave_vector_json(k)}, {"re", c.real()}, {"im", c.imag()}});
  });
  return modes;
}

ScalarField scalar_from_modes(const Json& modes, const Tolerances& tol) {
  return guarded([&] { return scalar_from_modes_unguarded(modes, tol); });
}

Json scalar_to_json(const ScalarField& f) {
  return {{"k_max", f.k_max()}, {"modes", scalar_modes_to_json(f)}};
}

ScalarField scalar_from_json(const Json& doc, const Tolerances& tol) {
  return guarded([&] {
    const int k_max = parse_k_max(doc);
    ScalarField f = scalar_from_modes_unguarded(doc.at("modes"), tol);
    if (f.k_max() > k_max) throw InputError("scalar mode lies outside declared k_max");
    return f;
  });
}

void write_grid_csv(std::ostream& out, const GridSampling& grid) {
  out << "x,y,z,wx,wy,wz\n";
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const Vec3 p = grid.point(f);
    const Vec3& v = grid[f];
    out << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(p[2]) << ','
        << format_double(v[0]) << ',' << format_double(v[1]) << ',' << format_double(v[2]) << '\n';
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << doc.dump(2) << '\n';
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace hlab::io
