#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cornerlab/counting_forms.hpp"
#include "cornerlab/kernels.hpp"
#include "cornerlab/lp_patterns.hpp"
#include "cornerlab/reduce.hpp"

namespace cornerlab {

inline constexpr std::string_view kVersion = "0.3.0";

enum class Recipe { identity_suite, counterexample_gaps, corner_abundance, lacunary_energy, gowers_suite, pattern_search };

std::string_view to_string(Recipe r) noexcept;
Recipe parse_recipe(std::string_view name);
std::vector<Recipe> all_recipes();

/// Raised for invalid configurations; `field` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  Recipe recipe = Recipe::identity_suite;
  std::size_t d = 1;
  LpExponent p = LpExponent::finite(2.0);
  double N = 1.0;       ///< box side
  std::size_t n = 32;   ///< cells (or lattice steps) per axis; spacing N / n
  std::vector<double> scales;   ///< lacunary scales
  std::vector<double> lambdas;  ///< single scales
  double epsilon = 0.1;
  double density = 0.2;
  std::size_t trials = 1;
  int k = 3;  ///< pattern length
  std::uint64_t seed = 1;
  SumMethod method = SumMethod::direct;
  KernelSampling sampling = KernelSampling::cell_average;
  std::map<std::string, double> tolerances;

  /// Defaults for a recipe, every field filled.
  static ExperimentConfig defaults(Recipe recipe);
  /// Strict parse: unknown keys and wrong types are rejected; absent keys
  /// take the recipe defaults.
  static ExperimentConfig parse(std::string_view json);
  static ExperimentConfig load(const std::filesystem::path& path);
  std::string to_json() const;

  double spacing() const noexcept { return N / static_cast<double>(n); }
  double tolerance(const std::string& key) const;
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

struct Assertion {
  std::string name;
  std::string invariant;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<FormReport> forms;
  std::vector<Assertion> assertions;
  std::map<std::string, Table> tables;
  unsigned threads = 1;
  double budget_tuples = 0.0;
  double wall_clock_seconds = 0.0;
  std::string started_utc;
  std::string version{kVersion};

  bool passed() const noexcept;
  /// Everything except timing is a function of the config.
  std::string to_json(bool with_timing = true) const;
};

/// Executes the recipe deterministically from config.seed.
RunReport run(const ExperimentConfig& config);

enum class OutputFormat { json, csv };
OutputFormat parse_output_format(std::string_view name);

/// report.json always; tables/<name>.csv for the csv format (plus an
/// assertions table, written even when empty).
void emit(const RunReport& report, OutputFormat format, const std::filesystem::path& out_dir);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace cornerlab
