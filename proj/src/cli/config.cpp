#include "twoeq/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "twoeq/deterministic.hpp"
#include "twoeq/errors.hpp"

namespace twoeq::cli {

using nlohmann::json;

namespace {

enum class FieldType { real, integer, unsigned_integer, text, boolean };

struct FieldSpec {
  FieldType type;
  const char* help;
};

const std::map<std::string, FieldSpec>& field_specs() {
  static const std::map<std::string, FieldSpec> specs = {
      {"command", {FieldType::text, "command name (must match the subcommand)"}},
      {"pi", {FieldType::real, "equilibrium gap pi = pi_plus - pi_minus, in (0,1)"}},
      {"pi_plus", {FieldType::real, "attractive frequency equilibrium, in (1/2,1)"}},
      {"V", {FieldType::real, "drift amplitude V > 0 (default 1)"}},
      {"N", {FieldType::integer, "population size N >= 1 (default 1000)"}},
      {"mode", {FieldType::text, "frequency | binary (default frequency)"}},
      {"initial", {FieldType::real, "initial state (default 0.5; sa/diffusion: 0)"}},
      {"value", {FieldType::real, "state for classify and clt (default 0)"}},
      {"steps", {FieldType::integer, "iterations (evolve 1e6 max, simulate 1000, sa 1e5)"}},
      {"replicates", {FieldType::integer, "ensemble size M (default 1; clt 5000, diffusion 1000)"}},
      {"seed", {FieldType::unsigned_integer, "RNG seed, required by stochastic commands"}},
      {"gain", {FieldType::real, "SA gain a, a_k = a/k (default 0.5)"}},
      {"noise_mode", {FieldType::text, "exact_binomial | gaussian | none (default exact_binomial)"}},
      {"tol", {FieldType::real, "evolve convergence tolerance (default 1e-12)"}},
      {"convergence_tol", {FieldType::real, "SA detection tolerance (default 0.02)"}},
      {"convergence_window", {FieldType::integer, "SA detection window (default 1000)"}},
      {"horizon", {FieldType::real, "diffusion horizon T in model time (default 1)"}},
      {"dt", {FieldType::real, "Euler-Maruyama step (default 1/N)"}},
      {"points", {FieldType::integer, "rfi grid size (default 1001)"}},
      {"out", {FieldType::text, "output directory (default .)"}},
      {"svg", {FieldType::boolean, "also write plot.svg"}},
  };
  return specs;
}

[[noreturn]] void field_error(const std::string& key, const std::string& what) {
  throw ValidationError("field '" + key + "': " + what);
}

json convert_override(const std::string& key, const std::string& text) {
  const auto it = field_specs().find(key);
  if (it == field_specs().end()) field_error(key, "unknown field");
  const char* first = text.data();
  const char* last = text.data() + text.size();
  switch (it->second.type) {
    case FieldType::real: {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) field_error(key, "expected a number, got '" + text + "'");
      return v;
    }
    case FieldType::integer: {
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) field_error(key, "expected an integer, got '" + text + "'");
      return v;
    }
    case FieldType::unsigned_integer: {
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) field_error(key, "expected a non-negative integer, got '" + text + "'");
      return v;
    }
    case FieldType::boolean:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      field_error(key, "expected true or false, got '" + text + "'");
    case FieldType::text:
      return text;
  }
  return text;
}

double get_real(const json& doc, const std::string& key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number()) field_error(key, "expected a number");
  const double out = v.get<double>();
  if (!std::isfinite(out)) field_error(key, "must be finite");
  return out;
}

std::optional<double> get_optional_real(const json& doc, const std::string& key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return get_real(doc, key, 0.0);
}

std::int64_t get_integer(const json& doc, const std::string& key,
                         std::int64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  field_error(key, "expected an integer");
}

std::string get_text(const json& doc, const std::string& key,
                     const std::string& fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_string()) field_error(key, "expected a string");
  return v.get<std::string>();
}

std::int64_t default_steps(Command command) {
  switch (command) {
    case Command::evolve: return kDefaultEvolveSteps;
    case Command::simulate: return 1000;
    case Command::sa: return 100000;
    default: return 0;
  }
}

std::int64_t default_replicates(Command command) {
  switch (command) {
    case Command::clt: return 5000;
    case Command::diffusion: return 1000;
    default: return 1;
  }
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::rfi: return "rfi";
    case Command::evolve: return "evolve";
    case Command::simulate: return "simulate";
    case Command::sa: return "sa";
    case Command::clt: return "clt";
    case Command::diffusion: return "diffusion";
    case Command::classify: return "classify";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::rfi, Command::evolve, Command::simulate,
                    Command::sa, Command::clt, Command::diffusion,
                    Command::classify}) {
    if (to_string(c) == name) return c;
  }
  throw ValidationError("unknown command '" + std::string(name) + "'");
}

bool is_stochastic(Command command) {
  return command == Command::simulate || command == Command::sa ||
         command == Command::clt || command == Command::diffusion;
}

ModelParams RunConfig::params() const {
  if (pi_plus) return ModelParams::from_pi_plus(*pi_plus, amplitude, population);
  return ModelParams::from_gap(pi.value_or(0.0), amplitude, population);
}

SAConfig RunConfig::sa_config() const {
  SAConfig cfg;
  cfg.gain = gain;
  cfg.alpha0 = initial;
  cfg.max_steps = steps;
  cfg.noise_mode = noise_mode;
  cfg.convergence_tol = convergence_tol;
  cfg.convergence_window = convergence_window;
  return cfg;
}

double RunConfig::resolved_dt() const {
  return dt.value_or(1.0 / static_cast<double>(population));
}

json RunConfig::to_json() const {
  json j;
  j["command"] = std::string(to_string(command));
  if (pi_plus) j["pi_plus"] = *pi_plus;
  if (pi) j["pi"] = *pi;
  j["V"] = amplitude;
  j["N"] = population;
  switch (command) {
    case Command::rfi:
      j["mode"] = std::string(twoeq::to_string(mode));
      j["points"] = points;
      break;
    case Command::evolve:
      j["mode"] = std::string(twoeq::to_string(mode));
      j["initial"] = initial;
      j["steps"] = steps;
      j["tol"] = tol;
      break;
    case Command::simulate:
      j["mode"] = std::string(twoeq::to_string(mode));
      j["initial"] = initial;
      j["steps"] = steps;
      j["replicates"] = replicates;
      break;
    case Command::sa:
      j["initial"] = initial;
      j["steps"] = steps;
      j["replicates"] = replicates;
      j["gain"] = gain;
      j["noise_mode"] = std::string(twoeq::to_string(noise_mode));
      j["convergence_tol"] = convergence_tol;
      j["convergence_window"] = convergence_window;
      break;
    case Command::clt:
      j["value"] = value;
      j["replicates"] = replicates;
      break;
    case Command::diffusion:
      j["initial"] = initial;
      j["horizon"] = horizon;
      j["dt"] = resolved_dt();
      j["replicates"] = replicates;
      break;
    case Command::classify:
      j["mode"] = std::string(twoeq::to_string(mode));
      j["value"] = value;
      break;
  }
  if (seed) j["seed"] = *seed;
  return j;
}

RunConfig parse_config(Command command, const json& document,
                       const Overrides& overrides) {
  if (!document.is_null() && !document.is_object()) {
    throw ValidationError("config document must be a JSON object");
  }
  json doc = document.is_object() && document.contains("config") &&
                     document.at("config").is_object()
                 ? document.at("config")
                 : (document.is_null() ? json::object() : document);

  for (const auto& [key, _] : doc.items()) {
    if (!field_specs().contains(key)) field_error(key, "unknown field");
  }
  for (const auto& [key, text] : overrides) doc[key] = convert_override(key, text);

  RunConfig cfg;
  cfg.command = command;
  if (doc.contains("command") &&
      get_text(doc, "command", "") != std::string(to_string(command))) {
    field_error("command", "config was written for '" +
                               get_text(doc, "command", "") +
                               "', not '" + std::string(to_string(command)) + "'");
  }

  cfg.pi_plus = get_optional_real(doc, "pi_plus");
  cfg.pi = get_optional_real(doc, "pi");
  if (cfg.pi_plus.has_value() == cfg.pi.has_value()) {
    throw ValidationError("exactly one of 'pi_plus' or 'pi' must be provided");
  }
  cfg.amplitude = get_real(doc, "V", cfg.amplitude);
  cfg.population = get_integer(doc, "N", cfg.population);

  const bool sa_like = command == Command::sa || command == Command::diffusion;
  cfg.mode = parse_representation(get_text(doc, "mode", "frequency"));
  if (sa_like) cfg.mode = Representation::binary;
  cfg.initial = get_real(doc, "initial", sa_like ? 0.0 : 0.5);
  cfg.value = get_real(doc, "value", 0.0);
  cfg.steps = get_integer(doc, "steps", default_steps(command));
  cfg.replicates = get_integer(doc, "replicates", default_replicates(command));
  if (doc.contains("seed") && !doc.at("seed").is_null()) {
    const json& s = doc.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
      field_error("seed", "expected a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.gain = get_real(doc, "gain", cfg.gain);
  cfg.noise_mode = parse_noise_mode(get_text(doc, "noise_mode", "exact_binomial"));
  cfg.tol = get_real(doc, "tol", cfg.tol);
  cfg.convergence_tol = get_real(doc, "convergence_tol", cfg.convergence_tol);
  cfg.convergence_window = get_integer(doc, "convergence_window", cfg.convergence_window);
  cfg.horizon = get_real(doc, "horizon", cfg.horizon);
  cfg.dt = get_optional_real(doc, "dt");
  cfg.points = get_integer(doc, "points", cfg.points);
  cfg.out_dir = get_text(doc, "out", cfg.out_dir);
  if (doc.contains("svg")) {
    if (!doc.at("svg").is_boolean()) field_error("svg", "expected true or false");
    cfg.svg = doc.at("svg").get<bool>();
  }

  // Invariants. Model construction validates the equilibria and amplitude.
  (void)cfg.params();
  if (is_stochastic(command) && !cfg.seed) {
    throw ValidationError("field 'seed': required by the '" +
                          std::string(to_string(command)) + "' command");
  }
  const double lo = domain_lower(cfg.mode);
  if ((command == Command::evolve || command == Command::simulate ||
       command == Command::sa || command == Command::diffusion) &&
      !(cfg.initial >= lo && cfg.initial <= 1.0)) {
    field_error("initial", "must lie in the " +
                               std::string(twoeq::to_string(cfg.mode)) + " domain");
  }
  if ((command == Command::classify || command == Command::clt) &&
      !(cfg.value >= (command == Command::clt ? -1.0 : lo) && cfg.value <= 1.0)) {
    field_error("value", "must lie in the state domain");
  }
  if (command != Command::rfi && command != Command::classify &&
      command != Command::clt && command != Command::diffusion && cfg.steps < 1) {
    field_error("steps", "must be >= 1");
  }
  if (cfg.replicates < 1) field_error("replicates", "must be >= 1");
  if (command == Command::clt && cfg.replicates < 100) {
    field_error("replicates", "clt needs at least 100 replicates");
  }
  if (!(cfg.tol > 0.0)) field_error("tol", "must be > 0");
  if (!(cfg.horizon > 0.0)) field_error("horizon", "must be > 0");
  if (cfg.dt && !(*cfg.dt > 0.0)) field_error("dt", "must be > 0");
  if (cfg.points < 2) field_error("points", "must be >= 2");
  if (command == Command::sa) cfg.sa_config().validate();
  return cfg;
}

RunConfig parse_config_text(Command command, std::string_view text,
                            const Overrides& overrides) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError("config parse error at " + line_column(text, byte) +
                     ": " + e.what());
  }
  return parse_config(command, doc, overrides);
}

const std::map<std::string, std::string>& config_field_help() {
  static const std::map<std::string, std::string> help = [] {
    std::map<std::string, std::string> out;
    for (const auto& [key, spec] : field_specs()) out[key] = spec.help;
    return out;
  }();
  return help;
}

}  // namespace twoeq::cli
