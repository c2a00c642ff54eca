#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nslab/forcing.hpp"
#include "nslab/initial_data.hpp"
#include "nslab/solver.hpp"

namespace nslab::app {

inline constexpr const char* kConfigSchema = "nslab.run/1";

/// Malformed or out-of-range configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Equation { stokes, linearized, navier_stokes };

Equation parse_equation(const std::string& name);
std::string to_string(Equation eq);

struct GridConfig {
  int n = 16;
  double box_length = 6.283185307179586;
  double dealias = 2.0 / 3.0;
};

struct PhysicsConfig {
  Equation equation = Equation::navier_stokes;
  double mu = 0.1;
  double T = 1.0;
};

struct SchemeConfig {
  Scheme scheme = Scheme::if_rk4;
  double dt = 1e-2;
  int snapshot_every = 1;
  bool store_pressure = false;
  double cfl_limit = 0.5;
};

/// name plus parameters with every default filled in.
struct MonitorConfig {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

enum class SnapshotPolicy { all, final, none };

struct OutputConfig {
  std::string directory = "nslab_out";
  bool json = true;
  bool csv = true;
  SnapshotPolicy snapshots = SnapshotPolicy::final;
  /// Run in chunks of this length, writing snapshots after each; 0 = off.
  double checkpoint_interval = 0.0;
};

struct RunConfig {
  GridConfig grid;
  PhysicsConfig physics;
  InitialSpec initial;
  std::vector<ForcingTerm> forcing;
  /// Advecting velocity of the linearized equation; absent means w = 0.
  std::optional<InitialSpec> advecting;
  /// When > 0, u0 is projected onto the first `galerkin_modes` divergence-free
  /// modes and the dynamics are restricted to their span.
  int galerkin_modes = 0;
  SchemeConfig scheme;
  std::vector<MonitorConfig> monitors;
  OutputConfig output;
};

/// Monitor names accepted in "monitors".
const std::vector<std::string>& monitor_names();

/// Parses and validates. Throws ConfigError naming the offending key.
RunConfig config_from_json(const nlohmann::json& j);
/// Normalized form: every field written, defaults included.
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

GridSpec make_grid(const RunConfig& cfg);

}  // namespace nslab::app
