#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "twoeq/model.hpp"
#include "twoeq/stochastic_approx.hpp"

namespace twoeq::cli {

enum class Command { rfi, evolve, simulate, sa, clt, diffusion, classify };

std::string_view to_string(Command command);
Command parse_command(std::string_view name);
bool is_stochastic(Command command);

/// Malformed JSON; the message carries line and column.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fully resolved run request.
struct RunConfig {
  Command command = Command::evolve;

  // Model. Exactly one of pi_plus / pi is given by the user.
  std::optional<double> pi_plus;
  std::optional<double> pi;
  double amplitude = 1.0;
  std::int64_t population = 1000;

  Representation mode = Representation::frequency;
  double initial = 0.5;   // evolve, simulate, sa (alpha0), diffusion (c0)
  double value = 0.0;     // classify state, clt conditioning state
  std::int64_t steps = 0; // command-specific default
  std::int64_t replicates = 1;
  std::optional<std::uint64_t> seed;

  double gain = 0.5;
  NoiseMode noise_mode = NoiseMode::exact_binomial;
  double tol = 1e-12;
  double convergence_tol = 0.02;
  std::int64_t convergence_window = 1000;
  double horizon = 1.0;
  std::optional<double> dt;
  std::int64_t points = 1001;

  // Output options; not part of the provenance record.
  std::string out_dir = ".";
  bool svg = false;

  ModelParams params() const;
  SAConfig sa_config() const;
  double resolved_dt() const;

  /// Provenance record: every field that influences the results.
  nlohmann::json to_json() const;
};

/// Scalar flag overrides keyed by config field name, as typed on the
/// command line (`--N 500` -> {"N", "500"}).
using Overrides = std::map<std::string, std::string>;

/// Builds and validates a config. `document` may be a config object or a
/// previously written summary (its "config" member is used).
RunConfig parse_config(Command command, const nlohmann::json& document,
                       const Overrides& overrides = {});

/// Same, from raw JSON text; syntax errors raise ParseError with line/column.
RunConfig parse_config_text(Command command, std::string_view text,
                            const Overrides& overrides = {});

/// Field names accepted in config files and as `--key value` flags.
const std::map<std::string, std::string>& config_field_help();

}  // namespace twoeq::cli
