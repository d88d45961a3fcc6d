#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prwf/solve.hpp"
#include "prwf/vector.hpp"

namespace prwf::bench {

enum class Experiment { sweep, trace, iters, cdp_sweep, image, landscape, rc_probe };
enum class Profile { desk, paper };

std::string_view to_string(Experiment e) noexcept;
Experiment parse_experiment(std::string_view s);
Profile parse_profile(std::string_view s);

/// Every tunable of one experiment run. Files use flat `key=value` lines;
/// see README for the key list. Unknown keys are errors.
struct ExperimentConfig {
  Experiment experiment = Experiment::sweep;
  Profile profile = Profile::desk;

  std::size_t n = 64;
  Field field = Field::real;
  std::vector<double> mn_ratios;
  std::vector<int> L_values;
  int trials_per_point = 20;
  std::vector<Method> methods;
  std::uint64_t base_seed = 1;
  SolverConfig solver;
  std::string output_path;  // empty: stdout
  bool record_wall_time = true;

  // trace
  double trace_ratio = 2.5;
  int trace_stride = 1;
  std::vector<double> eta_sweep;  // non-empty: RWF once per eta instead of `methods`

  // iters
  int retry_factor = 20;

  // image
  std::string image_input;
  std::string image_output;
  int image_L = 7;

  // landscape
  std::size_t landscape_m = 100;
  std::vector<double> landscape_x{0.5, 0.5};
  double grid_min = -1.0;
  double grid_max = 1.0;
  int grid_points = 101;

  // rc-probe
  std::size_t rc_m = 0;  // 0: round(8 n ln n)
  int rc_probes = 100;
  double rc_alpha = 10.0;
  double rc_beta = 0.0;  // 0: 700 + 4n
  double rc_delta = 0.01;
  bool rc_small_radius = false;  // radius ||x||/(8 sqrt n) instead of ||x||/8
  bool rc_unit_signal = true;

  void validate() const;
};

/// Defaults for an experiment at the given profile.
ExperimentConfig default_config(Experiment experiment, Profile profile);

/// Applies one `key=value` assignment. Throws ConfigError on unknown keys or
/// unparsable values.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Parses config text. The profile comes from `profile_override`, else from a
/// `profile=` line, else desk; its defaults are applied before the file's keys.
ExperimentConfig parse_config(Experiment experiment, std::string_view text,
                              std::optional<Profile> profile_override = std::nullopt);
ExperimentConfig load_config(Experiment experiment, const std::optional<std::string>& path,
                             std::optional<Profile> profile_override = std::nullopt);

}  // namespace prwf::bench
