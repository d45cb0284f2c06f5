// poissonproj command-line front end.
//
// Subcommands: simulate, fit, benchmark, bands, rates.
// Exit codes: 0 success, 2 usage/validation error, 1 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "poissonproj/poissonproj.hpp"

namespace pp = poissonproj;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned resolve_threads(unsigned flag_value) {
  if (const char* env = std::getenv("POISSONPROJ_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) throw UsageError("POISSONPROJ_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  if (flag_value == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  return flag_value;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
  os << content;
  if (!content.empty() && content.back() != '\n') os << '\n';
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

pp::BasisFamily parse_family(const std::string& s) {
  if (s == "trig") return pp::BasisFamily::Trigonometric;
  if (s == "hist") return pp::BasisFamily::DyadicHistogram;
  throw UsageError("unknown family '" + s + "' (expected trig or hist)");
}

pp::CovariateKind parse_design(const std::string& s) {
  if (s == "iid") return pp::CovariateKind::IidUniform;
  if (s == "mixing") return pp::CovariateKind::MixingAr;
  throw UsageError("unknown design '" + s + "' (expected iid or mixing)");
}

pp::PenaltyVariant parse_penalty(const std::string& s) {
  if (s == "known-xi") return pp::PenaltyVariant::KnownXi;
  if (s == "plugin") return pp::PenaltyVariant::Plugin;
  if (s == "dependent") return pp::PenaltyVariant::Dependent;
  if (s == "practical") return pp::PenaltyVariant::Practical;
  throw UsageError("unknown penalty '" + s + "'");
}

// Flags shared by benchmark, bands and rates; a --config file supplies the
// same keys, inline flags take precedence.
struct RunFlags {
  std::string config_path;
  std::optional<std::size_t> n, replicates, cells, grid;
  std::optional<std::string> design, intensity, family, penalty, ns;
  std::optional<double> kappa, xi, ar_coefficient, noise_sd;
  std::optional<std::uint64_t> seed;
  std::optional<int> fixed_m;
  std::optional<bool> strict_partition;
  std::string out;
  unsigned threads = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config_path, "config file (key = value lines, or JSON)");
  cmd->add_option("--n", f.n, "sample size");
  cmd->add_option("--replicates", f.replicates, "Monte Carlo replicates");
  cmd->add_option("--design", f.design, "covariate design: iid | mixing");
  cmd->add_option("--intensity", f.intensity, "intensity: paper | const:<c>");
  cmd->add_option("--family", f.family, "basis family: trig | hist");
  cmd->add_option("--penalty", f.penalty, "penalty: known-xi | plugin | dependent | practical");
  cmd->add_option("--kappa", f.kappa, "practical-penalty constant");
  cmd->add_option("--xi", f.xi, "a-priori sup-norm bound");
  cmd->add_option("--cells", f.cells, "partition cells for plugin/dependent");
  cmd->add_option("--strict-partition", f.strict_partition, "use the theoretical partition size");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--ar", f.ar_coefficient, "AR coefficient of the mixing design");
  cmd->add_option("--noise-sd", f.noise_sd, "noise sd of the mixing design");
  cmd->add_option("--fixed-m", f.fixed_m, "fit a fixed model index instead of selecting");
  cmd->add_option("--threads", f.threads, "worker threads (default: machine parallelism)");
  cmd->add_option("--out", f.out, "output file")->required();
}

void apply_config_file(RunFlags& f) {
  if (f.config_path.empty()) return;
  std::ifstream is(f.config_path, std::ios::binary);
  if (!is) throw UsageError("cannot read config file '" + f.config_path + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  for (const auto& [key, value] : pp::parse_config_document(buf.str())) {
    try {
      if (key == "n") { if (!f.n) f.n = std::stoull(value); }
      else if (key == "replicates") { if (!f.replicates) f.replicates = std::stoull(value); }
      else if (key == "design") { if (!f.design) f.design = value; }
      else if (key == "intensity") { if (!f.intensity) f.intensity = value; }
      else if (key == "family") { if (!f.family) f.family = value; }
      else if (key == "penalty") { if (!f.penalty) f.penalty = value; }
      else if (key == "kappa") { if (!f.kappa) f.kappa = std::stod(value); }
      else if (key == "xi") { if (!f.xi) f.xi = std::stod(value); }
      else if (key == "cells") { if (!f.cells) f.cells = std::stoull(value); }
      else if (key == "strict_partition") { if (!f.strict_partition) f.strict_partition = (value == "true" || value == "1"); }
      else if (key == "seed") { if (!f.seed) f.seed = std::stoull(value); }
      else if (key == "ar") { if (!f.ar_coefficient) f.ar_coefficient = std::stod(value); }
      else if (key == "noise_sd") { if (!f.noise_sd) f.noise_sd = std::stod(value); }
      else if (key == "fixed_m") { if (!f.fixed_m) f.fixed_m = std::stoi(value); }
      else if (key == "grid") { if (!f.grid) f.grid = std::stoull(value); }
      else if (key == "ns") { if (!f.ns) f.ns = value; }
      else throw UsageError("config file: unknown key '" + key + "'");
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("config file: bad value for key '" + key + "'");
    }
  }
}

pp::BenchmarkConfig build_config(const RunFlags& f, std::size_t default_replicates) {
  pp::BenchmarkConfig cfg;
  cfg.n = f.n.value_or(1024);
  cfg.replicates = f.replicates.value_or(default_replicates);
  cfg.covariates.kind = parse_design(f.design.value_or("iid"));
  if (f.ar_coefficient) cfg.covariates.ar_coefficient = *f.ar_coefficient;
  if (f.noise_sd) cfg.covariates.noise_sd = *f.noise_sd;
  cfg.intensity_id = f.intensity.value_or("paper");
  cfg.intensity = pp::intensity_from_id(cfg.intensity_id);
  cfg.family = parse_family(f.family.value_or("hist"));
  cfg.penalty.variant = parse_penalty(f.penalty.value_or("practical"));
  if (cfg.penalty.variant == pp::PenaltyVariant::Practical) {
    if (!f.kappa) throw UsageError("--kappa (or config key kappa) is required for the practical penalty");
    cfg.penalty.kappa = *f.kappa;
  }
  cfg.penalty.xi = f.xi.value_or(10.0);
  if (f.cells) cfg.penalty.partition_cells = *f.cells;
  if (f.strict_partition) cfg.penalty.strict_partition = *f.strict_partition;
  cfg.master_seed = f.seed.value_or(1);
  cfg.fixed_model_index = f.fixed_m;
  cfg.validate();
  return cfg;
}

std::vector<std::size_t> parse_ns_list(const std::string& text) {
  std::vector<std::size_t> ns;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      ns.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw UsageError("bad entry '" + item + "' in --ns list");
    }
  }
  return ns;
}

int run(int argc, char** argv) {
  CLI::App app{"Adaptive projection estimation for Poisson regression"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "draw a synthetic dataset");
  std::size_t sim_n = 0;
  std::string sim_design = "iid", sim_intensity = "paper", sim_out;
  std::uint64_t sim_seed = 1;
  double sim_ar = 0.5, sim_noise = 1.0;
  simulate->add_option("--n", sim_n, "sample size")->required();
  simulate->add_option("--design", sim_design, "iid | mixing");
  simulate->add_option("--intensity", sim_intensity, "paper | const:<c>");
  simulate->add_option("--seed", sim_seed, "seed");
  simulate->add_option("--ar", sim_ar, "AR coefficient (mixing design)");
  simulate->add_option("--noise-sd", sim_noise, "noise sd (mixing design)");
  simulate->add_option("--out", sim_out, "output CSV")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "fit and select a model on a dataset");
  std::string fit_data, fit_family = "hist", fit_penalty = "practical", fit_out;
  std::optional<double> fit_xi, fit_kappa;
  std::optional<std::size_t> fit_cells;
  bool fit_strict = false;
  fit->add_option("--data", fit_data, "dataset CSV")->required();
  fit->add_option("--family", fit_family, "trig | hist");
  fit->add_option("--penalty", fit_penalty, "known-xi | plugin | dependent | practical");
  fit->add_option("--xi", fit_xi, "a-priori sup-norm bound");
  fit->add_option("--kappa", fit_kappa, "practical-penalty constant");
  fit->add_option("--cells", fit_cells, "partition cells for plugin/dependent");
  fit->add_flag("--strict-partition", fit_strict, "use the theoretical partition size");
  fit->add_option("--out", fit_out, "output JSON")->required();

  RunFlags bench_flags, bands_flags, rates_flags;
  auto* benchmark = app.add_subcommand("benchmark", "Monte Carlo error benchmark");
  add_run_flags(benchmark, bench_flags);
  auto* bands = app.add_subcommand("bands", "pointwise quantile bands of the estimator");
  add_run_flags(bands, bands_flags);
  bands->add_option("--grid", bands_flags.grid, "evaluation grid resolution");
  auto* rates = app.add_subcommand("rates", "empirical rate-of-convergence study");
  add_run_flags(rates, rates_flags);
  rates->add_option("--ns", rates_flags.ns, "comma-separated increasing sample sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*simulate) {
    if (sim_n == 0) throw UsageError("--n must be >= 1");
    pp::CovariateProcessSpec spec;
    spec.kind = parse_design(sim_design);
    spec.ar_coefficient = sim_ar;
    spec.noise_sd = sim_noise;
    const pp::Sample sample =
        pp::simulate_dataset(pp::intensity_from_id(sim_intensity), spec, sim_n, sim_seed);
    std::ostringstream os;
    pp::write_dataset_csv(sample, os);
    write_file(sim_out, os.str());
    return 0;
  }

  if (*fit) {
    std::ifstream is(fit_data, std::ios::binary);
    if (!is) throw UsageError("cannot read dataset '" + fit_data + "'");
    const pp::Sample sample = pp::read_dataset_csv(is);
    pp::PenaltySpec spec;
    spec.variant = parse_penalty(fit_penalty);
    if (spec.variant == pp::PenaltyVariant::Practical) {
      if (!fit_kappa) throw UsageError("--kappa is required for the practical penalty");
      spec.kappa = *fit_kappa;
    }
    if (spec.variant == pp::PenaltyVariant::KnownXi || spec.variant == pp::PenaltyVariant::Practical) {
      if (fit_xi) spec.xi = *fit_xi;
    }
    if (fit_cells) spec.partition_cells = *fit_cells;
    spec.strict_partition = fit_strict;
    const pp::ModelCollection collection =
        pp::default_collection(parse_family(fit_family), sample.size());
    const pp::SelectionResult sel = pp::select_model(sample, collection, spec);
    write_file(fit_out, pp::selection_to_json(sel).dump(2));
    return 0;
  }

  if (*benchmark) {
    apply_config_file(bench_flags);
    const pp::BenchmarkConfig cfg = build_config(bench_flags, 500);
    const pp::BenchmarkReport report =
        pp::run_benchmark(cfg, resolve_threads(bench_flags.threads));
    write_file(bench_flags.out, pp::report_to_json(cfg, report).dump(2));
    return 0;
  }

  if (*bands) {
    apply_config_file(bands_flags);
    const pp::BenchmarkConfig cfg = build_config(bands_flags, 100);
    const pp::QuantileBand band = pp::quantile_bands(
        cfg, bands_flags.grid.value_or(512), resolve_threads(bands_flags.threads));
    std::ostringstream os;
    pp::write_bands_csv(band, os);
    write_file(bands_flags.out, os.str());
    return 0;
  }

  if (*rates) {
    apply_config_file(rates_flags);
    if (!rates_flags.ns) throw UsageError("--ns (or config key ns) is required");
    const std::vector<std::size_t> ns = parse_ns_list(*rates_flags.ns);
    pp::BenchmarkConfig cfg = build_config(rates_flags, 100);
    const pp::RateStudyResult result =
        pp::rate_study(cfg, ns, resolve_threads(rates_flags.threads));
    nlohmann::json j = {{"config", pp::config_echo(cfg)},
                        {"ns", result.ns},
                        {"mean_errors", result.mean_errors},
                        {"slope", result.slope}};
    write_file(rates_flags.out, j.dump(2));
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
