#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "helicity_lab/spectral_core.hpp"

namespace hlab::io {

using Json = nlohmann::json;

/// {"k_max": K, "modes": [{"k": [kx,ky,kz], "re": [3], "im": [3]}, ...],
///  "metadata": {...}}. Only nonzero modes are written, both k and -k.
Json field_to_json(const SpectralField& field, const Json& metadata = Json::object());
/// Validates support, reality, transversality and zero mean before
/// constructing the field; throws InputError on any violation.
SpectralField field_from_json(const Json& doc, const Tolerances& tol = {});

void write_field(const std::string& path, const SpectralField& field,
                 const Json& metadata = Json::object());
SpectralField read_field(const std::string& path, const Tolerances& tol = {});

/// Scalar mode list [{"k": [..], "re": x, "im": y}, ...].
Json scalar_modes_to_json(const ScalarField& f);
ScalarField scalar_from_modes(const Json& modes, const Tolerances& tol = {});

/// {"k_max": K, "modes": [...]} for standalone scalar files.
Json scalar_to_json(const ScalarField& f);
ScalarField scalar_from_json(const Json& doc, const Tolerances& tol = {});

/// CSV with header x,y,z,wx,wy,wz.
void write_grid_csv(std::ostream& out, const GridSampling& grid);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

/// Full round-trip precision for doubles in text output.
std::string format_double(double v);

}  // namespace hlab::io
