#ifndef POISSONPROJ_IO_HPP
#define POISSONPROJ_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "poissonproj/bench.hpp"
#include "poissonproj/sampler.hpp"
#include "poissonproj/selection.hpp"

namespace poissonproj {

inline std::string format_double17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline IntensityFunction intensity_from_id(const std::string& id) {
  if (id == "paper") return test_intensity();
  if (id.rfind("const:", 0) == 0) {
    const double c = std::stod(id.substr(6));
    if (!(c >= 0.0)) throw std::invalid_argument("intensity const must be >= 0");
    return constant_intensity(c);
  }
  throw std::invalid_argument("unknown intensity '" + id + "' (expected paper or const:<c>)");
}

inline std::string family_id(BasisFamily f) {
  return f == BasisFamily::Trigonometric ? "trig" : "hist";
}

inline std::string penalty_id(PenaltyVariant v) {
  switch (v) {
    case PenaltyVariant::KnownXi: return "known-xi";
    case PenaltyVariant::Plugin: return "plugin";
    case PenaltyVariant::Dependent: return "dependent";
    case PenaltyVariant::Practical: return "practical";
  }
  return "";
}

inline std::string design_id(CovariateKind k) {
  return k == CovariateKind::IidUniform ? "iid" : "mixing";
}

// --- dataset CSV -----------------------------------------------------------

inline void write_dataset_csv(const Sample& sample, std::ostream& os) {
  os << "x,y\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    os << format_double17(sample.xs[i]) << ',' << sample.ys[i] << '\n';
  }
}

inline Sample read_dataset_csv(std::istream& is) {
  Sample sample;
  std::string line;
  if (!std::getline(is, line) || line != "x,y") {
    throw std::invalid_argument("dataset CSV must start with header 'x,y'");
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("dataset CSV line " + std::to_string(lineno) + ": missing comma");
    }
    std::size_t pos = 0;
    double x = 0.0;
    long y = 0;
    try {
      x = std::stod(line.substr(0, comma), &pos);
      if (pos != comma) throw std::invalid_argument("");
      y = std::stol(line.substr(comma + 1), &pos);
      if (pos != line.size() - comma - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("dataset CSV line " + std::to_string(lineno) + ": malformed row");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("dataset CSV line " + std::to_string(lineno) + ": x outside [0,1]");
    }
    if (y < 0) {
      throw std::invalid_argument("dataset CSV line " + std::to_string(lineno) + ": negative count");
    }
    sample.xs.push_back(x);
    sample.ys.push_back(y);
  }
  if (sample.size() == 0) throw std::invalid_argument("dataset CSV has no rows");
  return sample;
}

// --- JSON reports ----------------------------------------------------------

inline nlohmann::json config_echo(const BenchmarkConfig& cfg) {
  nlohmann::json j = {
      {"n", cfg.n},
      {"replicates", cfg.replicates},
      {"design", design_id(cfg.covariates.kind)},
      {"intensity", cfg.intensity_id},
      {"family", family_id(cfg.family)},
      {"penalty", penalty_id(cfg.penalty.variant)},
      {"seed", cfg.master_seed},
  };
  switch (cfg.penalty.variant) {
    case PenaltyVariant::KnownXi:
      j["xi"] = cfg.penalty.xi;
      break;
    case PenaltyVariant::Practical:
      j["xi"] = cfg.penalty.xi;
      j["kappa"] = cfg.penalty.kappa;
      break;
    case PenaltyVariant::Plugin:
    case PenaltyVariant::Dependent:
      j["cells"] = cfg.penalty.partition_cells;
      break;
  }
  if (cfg.fixed_model_index) j["fixed_m"] = *cfg.fixed_model_index;
  return j;
}

inline nlohmann::json report_to_json(const BenchmarkConfig& cfg,
                                     const BenchmarkReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : report.records) {
    records.push_back({{"r", rec.r},
                       {"seed", rec.seed},
                       {"error", rec.error},
                       {"chosen_m", rec.chosen_index}});
  }
  return {{"config", config_echo(cfg)},
          {"mean_error", report.mean_error},
          {"sd_error", report.sd_error},
          {"records", records}};
}

inline nlohmann::json selection_to_json(const SelectionResult& sel) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : sel.table) {
    table.push_back({{"m", row.model_index},
                     {"dim", row.dim},
                     {"contrast", row.contrast},
                     {"penalty", row.penalty},
                     {"criterion", row.criterion}});
  }
  nlohmann::json j = {{"chosen_m", sel.chosen_index},
                      {"coefficients", sel.estimate.coefficients},
                      {"table", table}};
  if (sel.mu_hat) j["mu_hat"] = *sel.mu_hat;
  return j;
}

// --- quantile-band CSV -----------------------------------------------------

inline void write_bands_csv(const QuantileBand& band, std::ostream& os) {
  os << "x,q01,q25,q50,q75,q99\n";
  for (std::size_t g = 0; g < band.xs.size(); ++g) {
    os << format_double17(band.xs[g]);
    for (std::size_t q = 0; q < 5; ++q) {
      os << ',' << format_double17(band.quantiles[q][g]);
    }
    os << '\n';
  }
}

// --- flat key=value config documents ----------------------------------------

/// Parses a flat `key = value` document (one pair per line, '#' comments) or,
/// when the first non-space byte is '{', a flat JSON object. Values come back
/// as strings either way.
inline std::vector<std::pair<std::string, std::string>> parse_config_document(
    const std::string& text) {
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  std::vector<std::pair<std::string, std::string>> pairs;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config JSON must be an object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string()) {
        pairs.emplace_back(key, value.get<std::string>());
      } else {
        pairs.emplace_back(key, value.dump());
      }
    }
    return pairs;
  }
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return pairs;
}

}  // namespace poissonproj

#endif  // POISSONPROJ_IO_HPP
