#include "prwf/bench/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "prwf/bench/errors.hpp"
#include "prwf/errors.hpp"

namespace prwf::bench {

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::sweep: return "sweep";
    case Experiment::trace: return "trace";
    case Experiment::iters: return "iters";
    case Experiment::cdp_sweep: return "cdp-sweep";
    case Experiment::image: return "image";
    case Experiment::landscape: return "landscape";
    case Experiment::rc_probe: return "rc-probe";
  }
  return "?";
}

Experiment parse_experiment(std::string_view s) {
  for (Experiment e : {Experiment::sweep, Experiment::trace, Experiment::iters,
                       Experiment::cdp_sweep, Experiment::image, Experiment::landscape,
                       Experiment::rc_probe})
    if (to_string(e) == s) return e;
  throw ConfigError("unknown experiment '" + std::string(s) + "'");
}

Profile parse_profile(std::string_view s) {
  if (s == "desk") return Profile::desk;
  if (s == "paper") return Profile::paper;
  throw ConfigError("unknown profile '" + std::string(s) + "' (expected desk or paper)");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("bad value '" + std::string(v) + "' for key '" + std::string(key) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean '" + std::string(v) + "' for key '" + std::string(key) + "'");
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> items;
  if (trim(v).empty()) return items;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    items.push_back(trim(v.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view v) {
  std::vector<T> out;
  for (auto item : split_list(v)) out.push_back(parse_number<T>(key, item));
  return out;
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> out;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) out.push_back(lo + i * step);
  return out;
}

}  // namespace

ExperimentConfig default_config(Experiment experiment, Profile profile) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.profile = profile;
  const bool paper = profile == Profile::paper;
  c.n = paper ? 256 : 64;
  c.trials_per_point = paper ? 50 : 20;
  c.field = Field::real;
  switch (experiment) {
    case Experiment::sweep:
      c.mn_ratios = range(1.0, 8.0, paper ? 0.5 : 1.0);
      c.methods = {Method::rwf, Method::twf_lite, Method::wf};
      break;
    case Experiment::trace:
      c.methods = {Method::rwf, Method::wf};
      break;
    case Experiment::iters:
      c.mn_ratios = range(2.0, 8.0, paper ? 0.5 : 1.0);
      c.methods = {Method::rwf};
      break;
    case Experiment::cdp_sweep:
      c.field = Field::complex;
      c.L_values = {2, 3, 4, 5, 6, 7, 8};
      c.methods = {Method::rwf, Method::wf};
      break;
    case Experiment::image:
      c.field = Field::complex;
      c.methods = {Method::rwf};
      break;
    case Experiment::landscape:
      c.n = 2;
      c.methods = {Method::rwf};
      break;
    case Experiment::rc_probe:
      c.n = 32;
      c.methods = {Method::rwf};
      break;
  }
  return c;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view v) {
  try {
    if (key == "experiment") {
      if (parse_experiment(v) != c.experiment)
        throw ConfigError("config is for experiment '" + std::string(v) + "', not '" +
                          std::string(to_string(c.experiment)) + "'");
    } else if (key == "profile") {
      parse_profile(v);  // applied before the remaining keys
    } else if (key == "n") {
      c.n = parse_number<std::size_t>(key, v);
    } else if (key == "field") {
      c.field = parse_field(v);
    } else if (key == "ratios" || key == "mn_ratios") {
      c.mn_ratios = parse_list<double>(key, v);
    } else if (key == "L_values") {
      c.L_values = parse_list<int>(key, v);
    } else if (key == "trials" || key == "trials_per_point") {
      c.trials_per_point = parse_number<int>(key, v);
    } else if (key == "methods") {
      c.methods.clear();
      for (auto item : split_list(v)) c.methods.push_back(parse_method(item));
    } else if (key == "base_seed") {
      c.base_seed = parse_number<std::uint64_t>(key, v);
    } else if (key == "output") {
      c.output_path = std::string(v);
    } else if (key == "record_wall_time") {
      c.record_wall_time = parse_bool(key, v);
    } else if (key == "solver.T") {
      c.solver.max_outer = parse_number<int>(key, v);
    } else if (key == "solver.T1") {
      c.solver.max_inner = parse_number<int>(key, v);
    } else if (key == "solver.budget") {
      c.solver.flat_iteration_budget = parse_number<long>(key, v);
    } else if (key == "solver.beta") {
      c.solver.beta = parse_number<double>(key, v);
    } else if (key == "solver.eta") {
      c.solver.eta = parse_number<double>(key, v);
    } else if (key == "solver.trunc_C") {
      c.solver.trunc_c = parse_number<double>(key, v);
    } else if (key == "solver.trunc_factor") {
      c.solver.trunc_factor = parse_number<double>(key, v);
    } else if (key == "solver.stepsize") {
      if (v == "backtracking")
        c.solver.stepsize = StepsizeMode::backtracking;
      else if (v == "fixed")
        c.solver.stepsize = StepsizeMode::fixed;
      else
        throw ConfigError("solver.stepsize must be backtracking or fixed");
    } else if (key == "solver.fixed_mu") {
      c.solver.fixed_mu = parse_number<double>(key, v);
    } else if (key == "solver.success_nmse") {
      c.solver.success_nmse = parse_number<double>(key, v);
    } else if (key == "solver.max_halvings") {
      c.solver.max_halvings = parse_number<int>(key, v);
    } else if (key == "solver.power_max_iters") {
      c.solver.power.max_iters = parse_number<int>(key, v);
    } else if (key == "solver.power_tol") {
      c.solver.power.tol = parse_number<double>(key, v);
    } else if (key == "trace.ratio") {
      c.trace_ratio = parse_number<double>(key, v);
    } else if (key == "trace.stride") {
      c.trace_stride = parse_number<int>(key, v);
    } else if (key == "trace.eta_sweep") {
      c.eta_sweep = parse_list<double>(key, v);
    } else if (key == "iters.retry_factor") {
      c.retry_factor = parse_number<int>(key, v);
    } else if (key == "image.input") {
      c.image_input = std::string(v);
    } else if (key == "image.output") {
      c.image_output = std::string(v);
    } else if (key == "image.L") {
      c.image_L = parse_number<int>(key, v);
    } else if (key == "landscape.m") {
      c.landscape_m = parse_number<std::size_t>(key, v);
    } else if (key == "landscape.x") {
      c.landscape_x = parse_list<double>(key, v);
    } else if (key == "landscape.min") {
      c.grid_min = parse_number<double>(key, v);
    } else if (key == "landscape.max") {
      c.grid_max = parse_number<double>(key, v);
    } else if (key == "landscape.points") {
      c.grid_points = parse_number<int>(key, v);
    } else if (key == "rc.m") {
      c.rc_m = parse_number<std::size_t>(key, v);
    } else if (key == "rc.probes") {
      c.rc_probes = parse_number<int>(key, v);
    } else if (key == "rc.alpha") {
      c.rc_alpha = parse_number<double>(key, v);
    } else if (key == "rc.beta") {
      c.rc_beta = parse_number<double>(key, v);
    } else if (key == "rc.delta") {
      c.rc_delta = parse_number<double>(key, v);
    } else if (key == "rc.small_radius") {
      c.rc_small_radius = parse_bool(key, v);
    } else if (key == "rc.unit_signal") {
      c.rc_unit_signal = parse_bool(key, v);
    } else {
      throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
  } catch (const ParameterError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

void ExperimentConfig::validate() const {
  try {
    solver.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (n < 1) throw ConfigError("n must be at least 1");
  if (trials_per_point < 1) throw ConfigError("trials must be at least 1");
  for (double r : mn_ratios)
    if (!(r > 0.0)) throw ConfigError("ratios must be positive");
  for (int L : L_values)
    if (L < 1) throw ConfigError("L_values must be at least 1");
  if (methods.empty() && eta_sweep.empty()) throw ConfigError("no methods selected");
  if (trace_stride < 1) throw ConfigError("trace.stride must be at least 1");
  if (retry_factor < 1) throw ConfigError("iters.retry_factor must be at least 1");
  if (image_L < 1) throw ConfigError("image.L must be at least 1");
  if (grid_points < 1) throw ConfigError("landscape.points must be at least 1");
  if (rc_probes < 1) throw ConfigError("rc.probes must be at least 1");
  for (double eta : eta_sweep)
    if (!(eta > 0.0)) throw ConfigError("trace.eta_sweep values must be positive");
}

ExperimentConfig parse_config(Experiment experiment, std::string_view text,
                              std::optional<Profile> profile_override) {
  std::vector<std::pair<std::string, std::string>> assignments;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::optional<Profile> file_profile;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (key == "profile") file_profile = parse_profile(value);
    assignments.emplace_back(key, value);
  }
  const Profile profile = profile_override.value_or(file_profile.value_or(Profile::desk));
  ExperimentConfig cfg = default_config(experiment, profile);
  for (const auto& [k, v] : assignments) apply_setting(cfg, k, v);
  return cfg;
}

ExperimentConfig load_config(Experiment experiment, const std::optional<std::string>& path,
                             std::optional<Profile> profile_override) {
  if (!path) return parse_config(experiment, "", profile_override);
  std::ifstream f(*path, std::ios::binary);
  if (!f) throw IoError("cannot open config '" + *path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(experiment, ss.str(), profile_override);
}

}  // namespace prwf::bench
