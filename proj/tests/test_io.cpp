#include <doctest.h>

#include <filesystem>
#include <algorithm>
#include <fstream>
#include <sstream>

#include "helicity_lab/diffeo.hpp"
#include "helicity_lab/error.hpp"
#include "helicity_lab/field_io.hpp"

using namespace hlab;
using io::Json;

TEST_CASE("field JSON round trip is bit-exact") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpectralField w = random_field(3, seed, 1.0);
    CHECK(io::field_from_json(io::field_to_json(w)) == w);
    CHECK(io::field_from_json(Json::parse(io::field_to_json(w).dump())) == w);
  }
  const auto path = (std::filesystem::temp_directory_path() / "helicity_lab_test_io.json").string();
  const SpectralField w = abc_field(0.1, 1.0 / 3.0, std::sqrt(2.0));
  io::write_field(path, w, {{"note", "abc"}});
  CHECK(io::read_field(path) == w);
  CHECK(io::read_json_file(path)["metadata"]["note"] == "abc");
  std::filesystem::remove(path);
}

TEST_CASE("only nonzero modes are written, both k and -k") {
  const Json doc = io::field_to_json(abc_field(1.0, 0.0, 0.0));
  CHECK(doc["k_max"] == 1);
  CHECK(doc["modes"].size() == 2);
  CHECK_FALSE(doc.contains("metadata"));
}

TEST_CASE("malformed and inconsistent field documents are rejected") {
  const auto bad = [](const char* text) { return io::field_from_json(Json::parse(text)); };
  // divergent: k = (1,0,0) with c along x
  CHECK_THROWS_AS(bad(R"({"k_max":1,"modes":[{"k":[1,0,0],"re":[1,0,0],"im":[0,0,0]},
                                              {"k":[-1,0,0],"re":[1,0,0],"im":[0,0,0]}]})"),
                  InputError);
  CHECK_THROWS_AS(bad(R"({"k_max":1,"modes":[{"k":[1,0,0],"re":[0,1,0],"im":[0,0,0]},
                                              {"k":[1,0,0],"re":[0,1,0],"im":[0,0,0]}]})"),
                  InputError);
  // reality: -k missing
  CHECK_THROWS_AS(bad(R"({"k_max":1,"modes":[{"k":[1,0,0],"re":[0,1,0],"im":[0,0,0]}]})"), InputError);
  CHECK_THROWS_AS(bad(R"({"k_max":1,"modes":[{"k":[0,0,0],"re":[1,0,0],"im":[0,0,0]}]})"), InputError);
  CHECK_THROWS_AS(bad(R"({"k_max":1,"modes":[{"k":[2,0,0],"re":[0,1,0],"im":[0,0,0]}]})"), InputError);
  CHECK_THROWS_AS(bad(R"({"k_max":1,"modes":[{"k":[1,0],"re":[0,1,0],"im":[0,0,0]}]})"), InputError);
  CHECK_THROWS_AS(bad(R"({"k_max":1,"modes":[{"k":[1,0,0],"re":[0,1],"im":[0,0,0]}]})"), InputError);
  CHECK_THROWS_AS(bad(R"({"k_max":1,"modes":[{"k":[1,0,0],"re":["a",1,0],"im":[0,0,0]}]})"), InputError);
  CHECK_THROWS_AS(bad(R"({"modes":[]})"), InputError);
  CHECK_THROWS_AS(bad(R"({"k_max":-1,"modes":[]})"), InputError);
  CHECK_THROWS_AS(io::read_field("/nonexistent/field.json"), InputError);

  const auto path = (std::filesystem::temp_directory_path() / "helicity_lab_test_garbage.json").string();
  { std::ofstream(path) << "{ not json"; }
  CHECK_THROWS_AS(io::read_field(path), InputError);
  std::filesystem::remove(path);
}

TEST_CASE("scalar documents") {
  ScalarSpectrum c(2);
  c[{1, 2, 0}] = {0.25, -0.5};
  c[{-1, -2, 0}] = {0.25, 0.5};
  c[{0, 0, 0}] = 3.0;
  const ScalarField f = ScalarField::from_coefficients(c);
  CHECK(io::scalar_from_json(io::scalar_to_json(f)) == f);
  CHECK(io::scalar_from_modes(io::scalar_modes_to_json(f)) == f);
  CHECK(io::scalar_from_modes(Json::parse(R"([{"k":[0,1,0],"re":0.5},{"k":[0,-1,0],"re":0.5}])")) ==
        io::scalar_from_modes(Json::parse(R"([{"k":[0,1,0],"re":0.5,"im":0},{"k":[0,-1,0],"re":0.5,"im":0}])")));
  CHECK_THROWS_AS(io::scalar_from_json(Json::parse(R"({"k_max":0,"modes":[{"k":[1,0,0],"re":1},{"k":[-1,0,0],"re":1}]})")),
                  InputError);
  CHECK_THROWS_AS(io::scalar_from_modes(Json::parse(R"([{"k":[1,0,0],"re":1,"im":1}])")), InputError);
  CHECK_THROWS_AS(io::scalar_from_modes(Json::parse(R"([{"k":[1,0,0],"re":1},{"k":[1,0,0],"re":1}])")), InputError);
  CHECK_THROWS_AS(io::scalar_from_modes(Json::parse(R"({"k":[1,0,0]})")), InputError);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("grid CSV has one row per point") {
  const GridSampling g = sample(abc_field(1, 1, 1), 4);
  std::ostringstream out;
  io::write_grid_csv(out, g);
  const std::string s = out.str();
  CHECK(s.rfind("x,y,z,wx,wy,wz\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 65);
}
