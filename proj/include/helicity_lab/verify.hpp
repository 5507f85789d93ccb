#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "helicity_lab/diffeo.hpp"

namespace hlab {

enum class Relation { Below, AtMost, Above, AtLeast, Equal };

/// One numeric property: pass iff `value relation threshold`.
struct Check {
  std::string name;
  double value = 0.0;
  Relation relation = Relation::Below;
  double threshold = 0.0;
  bool pass = false;
};

Check make_check(std::string name, double value, Relation relation, double threshold);

struct CheckGroup {
  std::string id;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  /// Wall-clock budget; 0 means none.
  double budget_seconds = 0.0;

  bool checks_pass() const;
  bool within_budget() const { return budget_seconds <= 0.0 || seconds <= budget_seconds; }
  bool pass() const { return checks_pass() && within_budget(); }
};

struct VerifyOptions {
  /// End time of the transport runs.
  double transport_t_end = 1.0;
  /// Runs the determinism comparison (which reruns the suite).
  bool determinism = true;
};

// Acceptance criteria, numbered as in the README.
CheckGroup criterion_route_equivalence();
CheckGroup criterion_abc_benchmark();
CheckGroup criterion_eigenrelation();
CheckGroup criterion_diffeo_invariance();
CheckGroup criterion_transport(const VerifyOptions& options = {});
CheckGroup criterion_kernel_alignment();
CheckGroup criterion_derivative_vanishing();
CheckGroup criterion_path_construction();
CheckGroup criterion_partial_helicity();
CheckGroup criterion_round_trip(const VerifyOptions& options = {});

// Remaining per-module properties.
CheckGroup invariants_spectral_core();
CheckGroup invariants_curl_ops();
CheckGroup invariants_functionals();
CheckGroup invariants_diffeo();
CheckGroup invariants_homotopy();

/// The ten criteria followed by the module invariants.
std::vector<CheckGroup> run_verify(const VerifyOptions& options = {});

/// Numeric report without timings, so reruns compare byte for byte.
nlohmann::json verify_report(const std::vector<CheckGroup>& groups);

const char* relation_symbol(Relation r);

// Fixed examples used by the suite.

/// w = (0, 0, sin x) under the x-shear x -> x + 0.5 sin z; E changes by 12.5%.
struct ShearExample {
  SpectralField w;
  DiffeoChain chain;
  int k_out = 16;
};
ShearExample energy_control_example();

/// f = cos z is a first integral of w = (sin z + sin 2z, cos z + cos 2z, 0),
/// moved by z -> z + 0.5 cos x followed by x -> x + 0.5 cos y.
struct PartialHelicityExample {
  ScalarField f;
  SpectralField w;
  DiffeoChain chain;
  int k_out = 16;
};
PartialHelicityExample partial_helicity_example();

/// abc(1,1,1) and its push-forward under x -> x + 0.3 cos y.
std::pair<SpectralField, SpectralField> path_endpoints();

/// a cos(k.x) + b sin(k.x) as a ScalarField.
ScalarField trig_profile(const WaveVector& k, double a, double b = 0.0);

}  // namespace hlab
