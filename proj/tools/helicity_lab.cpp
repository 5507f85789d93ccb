// helicity-lab: field generation, functionals, maps, flows, paths, verification.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "helicity_lab/curl_ops.hpp"
#include "helicity_lab/diffeo.hpp"
#include "helicity_lab/error.hpp"
#include "helicity_lab/field_io.hpp"
#include "helicity_lab/functionals.hpp"
#include "helicity_lab/homotopy.hpp"
#include "helicity_lab/verify.hpp"

using namespace hlab;
using Json = nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitTolerance = 3;

struct RunConfig {
  std::string input;
  std::string output;
  std::string format = "json";
  int k_max = 0;  // 0: generator default
  int n = 0;  // 0: smallest admissible
  double dt = 1e-3;
  double t_end = 1.0;
  std::uint64_t seed = 1;
  double tol = 0.0;  // 0: command default

  // gen
  std::string kind;
  std::vector<double> abc{1.0, 1.0, 1.0};
  double amplitude = 1.0;
  std::vector<int> wave{1, 0, 0};
  int sign = +1;
  double re = 1.0, im = 0.0;

  // functional
  std::string partial;
  bool two_point = false;
  std::string decomposition_csv;
  std::string grid_csv;

  // pushforward / advect / path
  std::string chain;
  std::string advecting;
  int k_out = 0;
  std::string target;
  int samples = 101;

  // verify
  bool quick = false;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

void row(const std::string& name, double value) {
  std::cout << "  " << std::left << std::setw(28) << name << fmt(value) << '\n';
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) throw InputError(std::string(what) + " must be positive");
}

int resolution_for(const RunConfig& cfg, int needed_k) {
  const int n = cfg.n > 0 ? cfg.n : min_resolution(needed_k);
  require_resolution(n, needed_k, "--n");
  return n;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  return out;
}

void write_records(const RunConfig& cfg, const std::vector<Json>& records) {
  if (cfg.output.empty()) return;
  auto out = open_out(cfg.output);
  if (cfg.format == "csv") {
    out << "functional,value,resolution\n";
    for (const auto& r : records) {
      out << r["functional"].get<std::string>() << ',' << io::format_double(r["value"].get<double>()) << ','
          << r["resolution"].get<int>() << '\n';
    }
  } else {
    out << Json(records).dump(2) << '\n';
  }
}

// ---------------------------------------------------------------------------

int cmd_gen(const RunConfig& cfg) {
  if (cfg.output.empty()) throw InputError("gen needs --out");
  SpectralField w;
  Json meta;
  if (cfg.kind == "abc") {
    if (cfg.abc.size() != 3) throw InputError("gen abc takes three coefficients A B C");
    w = abc_field(cfg.abc[0], cfg.abc[1], cfg.abc[2]);
    if (cfg.k_max > w.k_max()) w = w.with_k_max(cfg.k_max);
    meta = {{"generator", "abc"}, {"A", cfg.abc[0]}, {"B", cfg.abc[1]}, {"C", cfg.abc[2]}};
  } else if (cfg.kind == "random") {
    const int k_max = cfg.k_max > 0 ? cfg.k_max : 4;
    check_positive(cfg.amplitude, "--amplitude");
    w = random_field(k_max, cfg.seed, cfg.amplitude);
    meta = {{"generator", "random"}, {"seed", cfg.seed}, {"amplitude", cfg.amplitude},
            {"algorithm", kRandomAlgorithm}};
  } else if (cfg.kind == "helical") {
    if (cfg.wave.size() != 3) throw InputError("--k takes three integers");
    if (cfg.sign != 1 && cfg.sign != -1) throw InputError("--sign must be +1 or -1");
    const WaveVector k{cfg.wave[0], cfg.wave[1], cfg.wave[2]};
    w = helical_mode_field(k, cfg.sign, {cfg.re, cfg.im});
    if (cfg.k_max > w.k_max()) w = w.with_k_max(cfg.k_max);
    meta = {{"generator", "helical"}, {"k", cfg.wave}, {"sign", cfg.sign}, {"re", cfg.re}, {"im", cfg.im}};
  } else {
    throw InputError("gen: unknown kind '" + cfg.kind + "' (abc, random, helical)");
  }
  io::write_field(cfg.output, w, meta);
  std::cout << "wrote " << cfg.output << " (k_max " << w.k_max() << ", " << w.nonzero_modes() << " modes)\n";
  return 0;
}

int cmd_functional(const RunConfig& cfg) {
  const SpectralField w = io::read_field(cfg.input);
  const int n = resolution_for(cfg, w.k_max());
  const double tol = cfg.tol > 0.0 ? cfg.tol : Tolerances{}.quadrature;
  Tolerances tols;
  tols.quadrature = tol;

  const double hs = helicity_spectral(w);
  const double hq = helicity_quadrature(w, n);
  const double e = energy(w);
  const double eq = energy_quadrature(w, n);
  std::vector<Json> records{
      functional_record("helicity_spectral", hs, n, tols),
      functional_record("helicity_quadrature", hq, n, tols),
      functional_record("energy", e, n, tols),
      functional_record("energy_quadrature", eq, n, tols),
  };
  std::cout << "functionals of " << cfg.input << " (n=" << n << ")\n";
  row("H (spectral)", hs);
  row("H (quadrature)", hq);
  row("E (spectral)", e);
  row("E (quadrature)", eq);

  if (!cfg.partial.empty()) {
    const ScalarField f = io::scalar_from_json(io::read_json_file(cfg.partial));
    const int np = resolution_for(RunConfig{}, f.k_max() + w.k_max());
    const double F = partial_helicity(f, w, std::max(np, cfg.n));
    records.push_back(functional_record("partial_helicity", F, std::max(np, cfg.n), tols, {{"f", cfg.partial}}));
    row("F (partial helicity)", F);
  }
  if (cfg.two_point) {
    const DensityKernel g = [](const Vec3& x1, const Vec3& x2, const Vec3& v1, const Vec3& v2) {
      const Vec3 d = x1 - x2;
      return dot(v1, v2) * std::cos(d[0]) * std::cos(d[1]) * std::cos(d[2]);
    };
    const double I = integral_invariant_2pt(g, w, n);
    records.push_back(functional_record("two_point", I, n, tols, {{"kernel", "v1.v2 cos(dx)cos(dy)cos(dz)"}}));
    row("two-point integral", I);
  }
  if (!cfg.decomposition_csv.empty()) {
    auto out = open_out(cfg.decomposition_csv);
    write_decomposition_csv(out, helical_decompose(w));
  }
  if (!cfg.grid_csv.empty()) {
    auto out = open_out(cfg.grid_csv);
    io::write_grid_csv(out, sample(w, n));
  }
  write_records(cfg, records);

  const double route = std::abs(hs - hq) / std::max(1.0, std::abs(hs));
  if (route > tol) {
    std::cerr << "helicity routes disagree: " << fmt(route) << " > " << fmt(tol) << '\n';
    return kExitTolerance;
  }
  std::cout << "  routes agree to " << fmt(route) << '\n';
  return 0;
}

int cmd_pushforward(const RunConfig& cfg) {
  const SpectralField w = io::read_field(cfg.input);
  const DiffeoChain chain = read_chain(cfg.chain);
  const int k_out = cfg.k_out > 0 ? cfg.k_out : w.k_max() + 8;
  const int n = resolution_for(cfg, k_out);
  PushforwardOptions opts;
  if (cfg.tol > 0.0) opts.max_residual = cfg.tol;
  const PushforwardResult r = pushforward(chain, w, k_out, n, opts);
  const double h0 = helicity_spectral(w);
  const double h1 = helicity_spectral(r.field);
  std::cout << "push-forward by " << chain.maps().size() << " shears (k_out=" << k_out << ", n=" << n << ")\n";
  row("H before", h0);
  row("H after", h1);
  row("relative change", h0 != 0.0 ? (h1 - h0) / std::abs(h0) : h1 - h0);
  row("E before", energy(w));
  row("E after", energy(r.field));
  row("projection residual", r.projection_residual);
  if (!cfg.output.empty()) {
    io::write_field(cfg.output, r.field,
                    {{"source", cfg.input}, {"chain", cfg.chain}, {"projection_residual", r.projection_residual},
                     {"helicity_before", h0}, {"helicity_after", h1}});
  }
  return 0;
}

int cmd_advect(const RunConfig& cfg) {
  check_positive(cfg.dt, "--dt");
  const SpectralField w = io::read_field(cfg.input);
  const SpectralField u = io::read_field(cfg.advecting);
  AdvectOptions opts;
  opts.product_resolution = cfg.n;
  const AdvectResult r = advect(FlowState{w, u, 0.0, cfg.dt}, cfg.t_end, opts);
  const auto& first = r.series.front();
  const auto& last = r.series.back();
  std::cout << "advect to t=" << fmt(last.t) << " in " << r.series.size() - 1 << " steps\n";
  row("H(0)", first.helicity);
  row("H(t_end)", last.helicity);
  row("relative helicity drift", (last.helicity - first.helicity) / std::abs(first.helicity));
  row("relative energy change", (last.energy - first.energy) / first.energy);
  if (!cfg.output.empty()) {
    auto out = open_out(cfg.output);
    write_series_csv(out, r.series);
  }
  return 0;
}

int cmd_path(const RunConfig& cfg) {
  if (cfg.output.empty()) throw InputError("path needs --out DIR");
  if (cfg.samples < 2) throw InputError("--samples must be >= 2");
  const SpectralField w0 = io::read_field(cfg.input);
  const SpectralField w1 = io::read_field(cfg.target);
  const HelicityPath path = constant_helicity_path(w0, w1, cfg.samples);
  export_path(cfg.output, path, cfg.samples);
  const ContinuityReport c = continuity(path, cfg.samples);
  const char* kind = path.kind() == PathKind::Positive ? "positive" : path.kind() == PathKind::Negative ? "negative" : "zero";
  std::cout << kind << " path with " << cfg.samples << " samples written to " << cfg.output << '\n';
  row("level", path.rescaled() ? path.level() : 0.0);
  row("max adjacent step", c.max_step);
  row("Lipschitz estimate", c.lipschitz);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyOptions opts;
  if (cfg.quick) {
    opts.transport_t_end = 0.1;
    opts.determinism = false;
  }
  const auto groups = run_verify(opts);
  bool ok = true;
  for (const auto& g : groups) {
    ok = ok && g.pass();
    std::cout << (g.pass() ? "PASS " : "FAIL ") << std::left << std::setw(14) << g.id << g.title << " ("
              << std::fixed << std::setprecision(2) << g.seconds << " s";
    if (g.budget_seconds > 0.0) std::cout << " of " << g.budget_seconds << " s";
    std::cout << ")\n" << std::defaultfloat;
    for (const auto& c : g.checks) {
      std::cout << "    " << (c.pass ? "ok   " : "FAIL ") << c.name << ": " << fmt(c.value) << ' '
                << relation_symbol(c.relation) << ' ' << fmt(c.threshold) << '\n';
    }
  }
  if (!cfg.output.empty()) {
    const Json report = verify_report(groups);
    auto out = open_out(cfg.output);
    if (cfg.format == "csv") {
      out << "group,check,value,relation,threshold,pass\n";
      for (const auto& g : report) {
        for (const auto& c : g["checks"]) {
          out << g["id"].get<std::string>() << ",\"" << c["name"].get<std::string>() << "\","
              << io::format_double(c["value"].get<double>()) << ',' << c["relation"].get<std::string>() << ','
              << io::format_double(c["threshold"].get<double>()) << ',' << (c["pass"].get<bool>() ? 1 : 0) << '\n';
        }
      }
    } else {
      out << report.dump(2) << '\n';
    }
  }
  std::cout << (ok ? "all checks passed\n" : "verification FAILED\n");
  return ok ? 0 : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divergence-free fields on the 3-torus: helicity, maps, flows and paths"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.output, "Output file or directory");
    sub->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* gen = app.add_subcommand("gen", "Write a field file");
  gen->add_option("kind", cfg.kind, "abc, random or helical")->required();
  gen->add_option("coefficients", cfg.abc, "A B C for abc")->expected(0, 3);
  gen->add_option("--kmax", cfg.k_max, "Truncation (random: default 4)")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", cfg.seed, "Random seed");
  gen->add_option("--amplitude", cfg.amplitude, "Random coefficient bound");
  gen->add_option("--k", cfg.wave, "Wave vector of a helical mode")->expected(3);
  gen->add_option("--sign", cfg.sign, "Helicity sign of a helical mode");
  gen->add_option("--re", cfg.re, "Real part of the helical amplitude");
  gen->add_option("--im", cfg.im, "Imaginary part of the helical amplitude");
  common(gen);

  auto* fun = app.add_subcommand("functional", "Helicity (both routes), energy and friends");
  fun->add_option("input", cfg.input, "Field file")->required()->check(CLI::ExistingFile);
  fun->add_option("--n", cfg.n, "Quadrature grid");
  fun->add_option("--tol", cfg.tol, "Allowed route disagreement (relative)");
  fun->add_option("--partial", cfg.partial, "Scalar file f for the partial helicity")->check(CLI::ExistingFile);
  fun->add_flag("--two-point", cfg.two_point, "Evaluate a two-point integral (n <= 16)");
  fun->add_option("--decomposition", cfg.decomposition_csv, "Write helical amplitudes as CSV");
  fun->add_option("--grid", cfg.grid_csv, "Write grid samples as CSV");
  common(fun);

  auto* push = app.add_subcommand("pushforward", "Apply a shear chain to a field");
  push->add_option("input", cfg.input, "Field file")->required()->check(CLI::ExistingFile);
  push->add_option("--chain", cfg.chain, "Chain file")->required()->check(CLI::ExistingFile);
  push->add_option("--kout", cfg.k_out, "Output truncation (default k_max + 8)");
  push->add_option("--n", cfg.n, "Sampling grid");
  push->add_option("--tol", cfg.tol, "Largest accepted projection residual");
  common(push);

  auto* adv = app.add_subcommand("advect", "Transport w by a fixed u and record H, E");
  adv->add_option("input", cfg.input, "Field file w")->required()->check(CLI::ExistingFile);
  adv->add_option("--u", cfg.advecting, "Field file u")->required()->check(CLI::ExistingFile);
  adv->add_option("--dt", cfg.dt, "Time step");
  adv->add_option("--t-end", cfg.t_end, "End time");
  adv->add_option("--n", cfg.n, "Product grid (default: smallest alias-free)");
  common(adv);

  auto* pth = app.add_subcommand("path", "Export a constant-helicity path between two fields");
  pth->add_option("from", cfg.input, "Start field")->required()->check(CLI::ExistingFile);
  pth->add_option("to", cfg.target, "End field")->required()->check(CLI::ExistingFile);
  pth->add_option("--samples", cfg.samples, "Number of t samples");
  common(pth);

  auto* ver = app.add_subcommand("verify", "Run the invariant suite");
  ver->add_flag("--quick", cfg.quick, "Short transport runs, no determinism rerun");
  common(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*gen) return cmd_gen(cfg);
    if (*fun) return cmd_functional(cfg);
    if (*push) return cmd_pushforward(cfg);
    if (*adv) return cmd_advect(cfg);
    if (*pth) return cmd_path(cfg);
    if (*ver) return cmd_verify(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Input: return kExitInput;
      case ErrorKind::Tolerance: return kExitTolerance;
      case ErrorKind::Internal: return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
