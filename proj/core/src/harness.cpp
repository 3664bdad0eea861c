#include "cornerlab/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cornerlab {

using nlohmann::json;

namespace {

constexpr std::pair<Recipe, std::string_view> kRecipeNames[] = {
    {Recipe::identity_suite, "identity-suite"},       {Recipe::counterexample_gaps, "counterexample-gaps"},
    {Recipe::corner_abundance, "corner-abundance"},   {Recipe::lacunary_energy, "lacunary-energy"},
    {Recipe::gowers_suite, "gowers-suite"},           {Recipe::pattern_search, "pattern-search"},
};

// Tolerance keys each recipe understands.
const std::set<std::string>& tolerance_keys(Recipe r) {
  static const std::map<Recipe, std::set<std::string>> keys = {
      {Recipe::identity_suite, {"identity", "telescoping", "d_spread", "subspace", "constant", "ratio_spread"}},
      {Recipe::counterexample_gaps, {}},
      {Recipe::corner_abundance, {"floor_factor"}},
      {Recipe::lacunary_energy, {"growth", "chain"}},
      {Recipe::gowers_suite, {"fourier", "scaling"}},
      {Recipe::pattern_search, {"search"}},
  };
  return keys.at(r);
}

}  // namespace

std::string_view to_string(Recipe r) noexcept {
  for (const auto& [rec, name] : kRecipeNames)
    if (rec == r) return name;
  return "identity-suite";
}

Recipe parse_recipe(std::string_view name) {
  for (const auto& [rec, n] : kRecipeNames)
    if (n == name) return rec;
  throw ConfigError("recipe", "unknown recipe '" + std::string(name) + "'");
}

std::vector<Recipe> all_recipes() {
  std::vector<Recipe> out;
  for (const auto& [rec, name] : kRecipeNames) out.push_back(rec);
  return out;
}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument("config field '" + field + "': " + message), field_(std::move(field)) {}

ExperimentConfig ExperimentConfig::defaults(Recipe recipe) {
  ExperimentConfig c;
  c.recipe = recipe;
  switch (recipe) {
    case Recipe::identity_suite:
      c.d = 1;
      c.N = 1.0;
      c.n = 32;
      c.trials = 100;
      c.density = 0.5;
      c.tolerances = {{"identity", 1e-8}, {"telescoping", 0.05}, {"d_spread", 1e-10},
                      {"subspace", 1e-8}, {"constant", 1e-3},    {"ratio_spread", 10.0}};
      break;
    case Recipe::counterexample_gaps:
      c.d = 2;
      c.N = 4.0;
      c.n = 128;
      c.k = 3;
      break;
    case Recipe::corner_abundance:
      c.d = 1;
      c.p = LpExponent::finite(3.0);
      c.N = 64.0;
      c.n = 256;
      c.lambdas = {2.0, 4.0, 8.0};
      c.epsilon = 1.0;
      c.density = 0.2;
      c.trials = 10;
      c.tolerances = {{"floor_factor", 0.25}};
      break;
    case Recipe::lacunary_energy:
      c.d = 1;
      c.p = LpExponent::finite(3.0);
      c.N = 256.0;
      c.n = 512;
      c.scales = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
      c.epsilon = 0.1;
      c.density = 0.3;
      c.trials = 3;
      c.tolerances = {{"growth", 1.5}, {"chain", 1e-9}};
      break;
    case Recipe::gowers_suite:
      c.d = 1;
      c.N = 1.0;
      c.n = 64;
      c.trials = 20;
      c.density = 0.5;
      c.tolerances = {{"fourier", 1e-8}, {"scaling", 0.01}};
      break;
    case Recipe::pattern_search:
      c.d = 1;
      c.N = 6.0;
      c.n = 192;
      c.lambdas = {0.5, 0.75, 0.875, 1.0, 1.125};
      c.tolerances = {{"search", 1.0 / 128.0}};
      break;
  }
  return c;
}

double ExperimentConfig::tolerance(const std::string& key) const {
  const auto it = tolerances.find(key);
  if (it != tolerances.end()) return it->second;
  const auto def = defaults(recipe).tolerances;
  const auto jt = def.find(key);
  if (jt == def.end()) throw ConfigError("tolerances." + key, "no such tolerance for this recipe");
  return jt->second;
}

void ExperimentConfig::validate() const {
  if (d == 0 || d > 4) throw ConfigError("d", "dimension must be in 1..4");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("p", e.what());
  }
  if (!(N > 0) || !std::isfinite(N)) throw ConfigError("N", "must be positive");
  if (n == 0) throw ConfigError("n", "must be positive");
  if (!(epsilon > 0) || epsilon > 1) throw ConfigError("epsilon", "must lie in (0, 1]");
  if (!(density > 0) || density > 1) throw ConfigError("density", "must lie in (0, 1]");
  if (trials == 0) throw ConfigError("trials", "must be positive");
  if (k < 3) throw ConfigError("k", "pattern length must be at least 3");
  for (double l : lambdas)
    if (!(l > 0) || !std::isfinite(l)) throw ConfigError("lambdas", "scales must be positive");
  for (double s : scales)
    if (!(s > 0) || !std::isfinite(s)) throw ConfigError("scales", "scales must be positive");
  if (!scales.empty()) {
    try {
      LacunaryScales{scales};
    } catch (const std::invalid_argument& e) {
      throw ConfigError("scales", e.what());
    }
  }
  const auto& allowed = tolerance_keys(recipe);
  for (const auto& [key, v] : tolerances) {
    if (!allowed.count(key)) throw ConfigError("tolerances." + key, "unknown tolerance for this recipe");
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError("tolerances." + key, "must be positive");
  }
  switch (recipe) {
    case Recipe::lacunary_energy:
      if (scales.empty()) throw ConfigError("scales", "required for lacunary-energy");
      if (scales.back() > N) throw ConfigError("scales", "largest scale exceeds N");
      if (epsilon >= 1) throw ConfigError("epsilon", "lacunary-energy needs epsilon < 1");
      if (p.infinite) throw ConfigError("p", "shell windows need finite p");
      break;
    case Recipe::corner_abundance:
      if (lambdas.empty()) throw ConfigError("lambdas", "required for corner-abundance");
      if (p.infinite) throw ConfigError("p", "shell windows need finite p");
      break;
    case Recipe::pattern_search:
      if (lambdas.empty()) throw ConfigError("lambdas", "required for pattern-search");
      [[fallthrough]];
    case Recipe::counterexample_gaps:
      if (p.infinite || p.p != std::floor(p.p) || p.p < 2) throw ConfigError("p", "needs an integer p >= 2");
      break;
    case Recipe::identity_suite:
      if (d > 3) throw ConfigError("d", "identity-suite samples d <= 3");
      break;
    case Recipe::gowers_suite:
      break;
  }
}

namespace {

json p_to_json(LpExponent p) { return p.infinite ? json("inf") : json(p.p); }

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, std::string("wrong type: ") + e.what());
  }
}

std::size_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ConfigError(key, "must be a nonnegative integer");
  return j.get<std::size_t>();
}

double get_real(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "must be a number");
  return j.get<double>();
}

std::vector<double> get_reals(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError(key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_real(v, key));
  return out;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  json j;
  j["recipe"] = std::string(to_string(recipe));
  j["d"] = d;
  j["p"] = p_to_json(p);
  j["N"] = N;
  j["n"] = n;
  j["scales"] = scales;
  j["lambdas"] = lambdas;
  j["epsilon"] = epsilon;
  j["density"] = density;
  j["trials"] = trials;
  j["k"] = k;
  j["seed"] = seed;
  j["method"] = std::string(cornerlab::to_string(method));
  j["sampling"] = std::string(cornerlab::to_string(sampling));
  j["tolerances"] = tolerances;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<document>", "config must be a JSON object");
  if (!j.contains("recipe") || !j["recipe"].is_string()) throw ConfigError("recipe", "required string field");
  ExperimentConfig c = defaults(parse_recipe(j["recipe"].get<std::string>()));
  for (const auto& [key, v] : j.items()) {
    if (key == "recipe") continue;
    else if (key == "d") c.d = get_count(v, key);
    else if (key == "p") {
      if (v.is_string()) {
        if (v.get<std::string>() != "inf") throw ConfigError("p", "string value must be \"inf\"");
        c.p = LpExponent::infinity();
      } else {
        c.p = LpExponent{get_real(v, key), false};
      }
    } else if (key == "N") c.N = get_real(v, key);
    else if (key == "n") c.n = get_count(v, key);
    else if (key == "scales") c.scales = get_reals(v, key);
    else if (key == "lambdas") c.lambdas = get_reals(v, key);
    else if (key == "epsilon") c.epsilon = get_real(v, key);
    else if (key == "density") c.density = get_real(v, key);
    else if (key == "trials") c.trials = get_count(v, key);
    else if (key == "k") c.k = static_cast<int>(get_count(v, key));
    else if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError("seed", "must be an unsigned 64-bit integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "method") {
      try {
        c.method = parse_sum_method(get_as<std::string>(v, key));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw ConfigError("method", e.what());
      }
    } else if (key == "sampling") {
      try {
        c.sampling = parse_kernel_sampling(get_as<std::string>(v, key));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw ConfigError("sampling", e.what());
      }
    } else if (key == "tolerances") {
      if (!v.is_object()) throw ConfigError("tolerances", "must be an object of numbers");
      for (const auto& [tk, tv] : v.items()) c.tolerances[tk] = get_real(tv, "tolerances." + tk);
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool RunReport::passed() const noexcept {
  for (const auto& a : assertions)
    if (!a.passed) return false;
  return true;
}

namespace {

// NaN and infinities are not JSON numbers.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json form_to_json(const FormReport& r) {
  json j;
  j["form"] = r.form;
  j["value"] = number(r.value);
  j["normalization"] = number(r.normalization);
  j["ratio"] = number(r.ratio);
  j["grid"] = {{"shape", r.grid.shape}, {"spacing", r.grid.spacing}, {"origin", r.grid.origin}};
  j["method"] = std::string(to_string(r.method));
  json details = json::object();
  for (const auto& [k, v] : r.details) details[k] = number(v);
  j["details"] = details;
  j["notes"] = r.notes;
  return j;
}

}  // namespace

std::string RunReport::to_json(bool with_timing) const {
  json j;
  j["artifact"] = {{"name", "cornerlab"}, {"version", version}};
  j["config"] = json::parse(config.to_json());
  j["environment"] = {{"threads", threads}, {"budget_tuples", budget_tuples}};
  json forms_j = json::array();
  for (const auto& f : forms) forms_j.push_back(form_to_json(f));
  j["forms"] = forms_j;
  json asserts = json::array();
  for (const auto& a : assertions)
    asserts.push_back({{"name", a.name},
                       {"invariant", a.invariant},
                       {"passed", a.passed},
                       {"value", number(a.value)},
                       {"threshold", number(a.threshold)}});
  j["assertions"] = asserts;
  json tables_j = json::object();
  for (const auto& [name, t] : tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::array();
      for (double v : row) r.push_back(number(v));
      rows.push_back(r);
    }
    tables_j[name] = {{"columns", t.columns}, {"rows", rows}};
  }
  j["tables"] = tables_j;
  j["passed"] = passed();
  if (with_timing) {
    json elapsed = json::array();
    for (const auto& f : forms) elapsed.push_back(f.elapsed_seconds);
    j["timing"] = {{"started_utc", started_utc}, {"wall_clock_seconds", wall_clock_seconds},
                   {"form_elapsed_seconds", elapsed}};
  }
  return j.dump(2);
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "' (expected json or csv)");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + format_number(row[i]);
    s += '\n';
  }
  return s;
}

}  // namespace

void emit(const RunReport& report, OutputFormat format, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / "report.json", report.to_json(true) + "\n");
  if (format != OutputFormat::csv) return;
  const auto dir = out_dir / "tables";
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, t] : report.tables) write_file(dir / (name + ".csv"), csv(t));
  std::string a = "name,passed,value,threshold\n";
  for (const auto& x : report.assertions)
    a += x.name + "," + (x.passed ? "1" : "0") + "," + format_number(x.value) + "," + format_number(x.threshold) + "\n";
  write_file(dir / "assertions.csv", a);
}

}  // namespace cornerlab
