#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bden/dynamics.hpp"
#include "bden/engine.hpp"
#include "bden/experiments.hpp"

namespace bden {

/// Malformed or out-of-range configuration. `key()` names the offending key
/// (empty for syntax errors, which carry a line number in the message).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key.empty() ? what : "config key '" + key + "': " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class DynamicsKind { none, drift, selection };

struct InitialSpec {
  enum class Type { complete, edge_list };
  Type type = Type::complete;
  std::size_t n = 30;
  std::string path;
  bool operator==(const InitialSpec&) const = default;
};

/// Everything a run reads from its configuration text, after defaults.
struct RunConfig {
  double lambda = 0.0;
  double mu = 0.0;
  std::size_t m = 0;
  Mechanism mechanism = Mechanism::uniform;
  DynamicsKind dynamics = DynamicsKind::none;
  double alpha = 0.0;
  std::optional<PayoffMatrix> payoff;
  double delta = kDefaultDelta;
  InitialSpec initial;
  std::size_t initial_invaders = 1;
  std::size_t replicates = 1500;
  double t_max = 1e4;
  double burn_in = 1e3;
  double sample_dt = 1.0;
  std::uint64_t event_limit = kDefaultEventLimit;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_path;
  std::vector<SweepAxis> sweep;

  bool operator==(const RunConfig&) const = default;
};

/// Parses JSON configuration text. Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Serializes to text that parse_config maps back to an equal RunConfig.
std::string emit_config(const RunConfig& config);

/// Builds simulation parameters, loading the initial edge list if any.
SimParams to_sim_params(const RunConfig& config);

std::string to_string(Mechanism mechanism);
std::string to_string(DynamicsKind kind);

}  // namespace bden
