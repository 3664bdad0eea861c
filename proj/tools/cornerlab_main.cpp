#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cornerlab/harness.hpp"
#include "cornerlab/reduce.hpp"

int main(int argc, char** argv) {
  using namespace cornerlab;
  CLI::App app{"cornerlab: corner-counting forms, Gowers norms and identity checks"};
  app.set_version_flag("--version", std::string(kVersion));

  std::string recipe, config_path, out_dir, format = "json";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> names;
  for (Recipe r : all_recipes()) names.emplace_back(to_string(r));

  app.add_option("recipe", recipe, "Experiment recipe")->required()->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--format", format, "Table format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "Override the config seed");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = ExperimentConfig::load(config_path);
    if (to_string(cfg.recipe) != recipe) {
      std::cerr << "error: config recipe '" << to_string(cfg.recipe) << "' does not match '" << recipe << "'\n";
      return 2;
    }
    if (seed) cfg.seed = *seed;
    const RunReport report = run(cfg);
    emit(report, parse_output_format(format), out_dir);
    std::size_t failed = 0;
    for (const auto& a : report.assertions) {
      std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << "  value=" << format_number(a.value)
                << " threshold=" << format_number(a.threshold) << '\n';
      failed += a.passed ? 0 : 1;
    }
    std::cout << "wrote " << out_dir << "/report.json (" << report.wall_clock_seconds << " s)\n";
    return failed == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const CostRefusal& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
