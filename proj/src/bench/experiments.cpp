#include "prwf/bench/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <numeric>
#include <thread>

#include "prwf/bench/errors.hpp"
#include "prwf/fft.hpp"
#include "prwf/init.hpp"
#include "prwf/objective.hpp"
#include "prwf/rng.hpp"

namespace prwf::bench {
namespace {

// Domain-separation tags for seed hashing.
constexpr std::uint64_t kTagGaussian = 0x4741555353ULL;  // "GAUSS"
constexpr std::uint64_t kTagCdp = 0x434450ULL;           // "CDP"
constexpr std::uint64_t kTagTrace = 0x5452414345ULL;     // "TRACE"
constexpr std::uint64_t kTagIters = 0x4954455253ULL;     // "ITERS"
constexpr std::uint64_t kTagImage = 0x494D414745ULL;     // "IMAGE"
constexpr std::uint64_t kTagLandscape = 0x4C414E44ULL;   // "LAND"
constexpr std::uint64_t kTagRc = 0x5243ULL;              // "RC"

std::uint64_t method_id(Method m) { return static_cast<std::uint64_t>(m) + 1; }

std::size_t measurements_for(double ratio, std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n))));
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(long v) { return std::to_string(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

struct Aggregate {
  int trials = 0;
  int successes = 0;
  double nmse_sum = 0.0;
  double outer_sum = 0.0;
  double steps_sum = 0.0;
  double wall_sum = 0.0;

  void add(const TrialRecord& r) {
    ++trials;
    successes += r.success ? 1 : 0;
    nmse_sum += r.final_nmse;
    outer_sum += r.outer_iters;
    steps_sum += static_cast<double>(r.total_grad_steps);
    wall_sum += r.wall_time_seconds;
  }
  std::vector<std::string> cells() const {
    const double t = trials;
    return {fmt(trials),       fmt(successes),      fmt(successes / t), fmt(nmse_sum / t),
            fmt(outer_sum / t), fmt(steps_sum / t), fmt(wall_sum / t)};
  }
};

const std::vector<std::string> kAggregateHeader = {
    "trials", "successes", "rate", "mean_nmse", "mean_outer_iters", "mean_grad_steps",
    "mean_wall_time"};

template <typename F>
TrialRecord timed_solve(F&& body, bool time_it) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialRecord rec = body();
  if (time_it)
    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

TrialRecord record_from(const SolverReport& rep, const SolverConfig& solver, std::uint64_t seed,
                        std::size_t n, std::size_t m, Field field, Method method) {
  TrialRecord rec;
  rec.seed = seed;
  rec.n = n;
  rec.m = m;
  rec.field = field;
  rec.method = method;
  rec.final_nmse = rep.final_nmse;
  rec.success = rep.final_nmse < solver.success_nmse;
  rec.outer_iters = rep.outer_iters;
  rec.total_grad_steps = rep.total_grad_steps;
  return rec;
}

SolverConfig with_method(SolverConfig s, Method m) {
  s.method = m;
  return s;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, Method method, double point,
                         std::uint64_t index) {
  return hash_seed({base_seed, method_id(method), std::bit_cast<std::uint64_t>(point), index});
}

std::uint64_t instance_seed(std::uint64_t base_seed, std::uint64_t tag, double point,
                            std::uint64_t index) {
  return hash_seed({base_seed, tag, std::bit_cast<std::uint64_t>(point), index});
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);
}

TrialRecord run_gaussian_trial(std::size_t n, std::size_t m, Field field, Method method,
                               const SolverConfig& solver, std::uint64_t data_seed,
                               std::uint64_t solver_seed, bool time_it) {
  return timed_solve(
      [&] {
        const Signal truth(random_gaussian_vector(n, field, hash_seed({data_seed, 1})), field);
        const auto e = MeasurementEnsemble::gaussian(n, m, field, hash_seed({data_seed, 2}));
        const IntensityVector y = intensities(e, truth.values);
        const SolverReport rep =
            solve(e, y, with_method(solver, method), {&truth, solver_seed, std::nullopt});
        return record_from(rep, solver, solver_seed, n, m, field, method);
      },
      time_it);
}

TrialRecord run_cdp_trial(std::size_t n, std::size_t masks, Method method,
                          const SolverConfig& solver, std::uint64_t data_seed,
                          std::uint64_t solver_seed, bool time_it) {
  return timed_solve(
      [&] {
        const Signal truth(random_gaussian_vector(n, Field::complex, hash_seed({data_seed, 1})),
                           Field::complex);
        const auto e = MeasurementEnsemble::cdp(n, masks, hash_seed({data_seed, 2}));
        const IntensityVector y = intensities(e, truth.values);
        const SolverReport rep =
            solve(e, y, with_method(solver, method), {&truth, solver_seed, std::nullopt});
        return record_from(rep, solver, solver_seed, n, e.m(), Field::complex, method);
      },
      time_it);
}

namespace {

std::vector<Method> sorted_methods(std::vector<Method> methods) {
  std::sort(methods.begin(), methods.end(),
            [](Method a, Method b) { return to_string(a) < to_string(b); });
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  return methods;
}

}  // namespace

ExperimentResult run_sweep(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const auto methods = sorted_methods(cfg.methods);
  std::vector<double> ratios = cfg.mn_ratios;
  std::sort(ratios.begin(), ratios.end());
  const std::size_t trials = static_cast<std::size_t>(cfg.trials_per_point);
  const std::size_t per_method = ratios.size() * trials;
  std::vector<TrialRecord> records(methods.size() * per_method);

  parallel_for(records.size(), jobs, [&](std::size_t idx) {
    const std::size_t mi = idx / per_method;
    const std::size_t ri = (idx % per_method) / trials;
    const std::size_t ti = idx % trials;
    const double ratio = ratios[ri];
    records[idx] = run_gaussian_trial(
        cfg.n, measurements_for(ratio, cfg.n), cfg.field, methods[mi], cfg.solver,
        instance_seed(cfg.base_seed, kTagGaussian, ratio, ti),
        trial_seed(cfg.base_seed, methods[mi], ratio, ti), cfg.record_wall_time);
  });

  ExperimentResult res;
  res.table.header = {"method", "mn_ratio", "n", "m"};
  res.table.header.insert(res.table.header.end(), kAggregateHeader.begin(), kAggregateHeader.end());
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t ri = 0; ri < ratios.size(); ++ri) {
      Aggregate agg;
      for (std::size_t ti = 0; ti < trials; ++ti) agg.add(records[mi * per_method + ri * trials + ti]);
      std::vector<std::string> row = {std::string(to_string(methods[mi])), fmt(ratios[ri]),
                                      fmt(cfg.n), fmt(measurements_for(ratios[ri], cfg.n))};
      const auto cells = agg.cells();
      row.insert(row.end(), cells.begin(), cells.end());
      res.table.add_row(std::move(row));
    }
  }
  return res;
}

ExperimentResult run_trace(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  struct Variant {
    std::string label;
    SolverConfig solver;
  };
  std::vector<Variant> variants;
  if (!cfg.eta_sweep.empty()) {
    for (double eta : cfg.eta_sweep) {
      SolverConfig s = with_method(cfg.solver, Method::rwf);
      s.eta = eta;
      variants.push_back({"RWF(eta=" + fmt(eta) + ")", s});
    }
  } else {
    for (Method m : cfg.methods)
      variants.push_back({std::string(to_string(m)), with_method(cfg.solver, m)});
  }

  const std::size_t n = cfg.n;
  const std::size_t m = measurements_for(cfg.trace_ratio, n);
  const std::uint64_t data_seed = instance_seed(cfg.base_seed, kTagTrace, cfg.trace_ratio, 0);
  const Signal truth(random_gaussian_vector(n, cfg.field, hash_seed({data_seed, 1})), cfg.field);
  const auto e = MeasurementEnsemble::gaussian(n, m, cfg.field, hash_seed({data_seed, 2}));
  const IntensityVector y = intensities(e, truth.values);

  std::vector<std::vector<std::vector<std::string>>> blocks(variants.size());
  parallel_for(variants.size(), jobs, [&](std::size_t vi) {
    SolverConfig s = variants[vi].solver;
    s.record_trace = true;
    const std::uint64_t seed = trial_seed(cfg.base_seed, s.method, cfg.trace_ratio, 0);
    const SolverReport rep = solve(e, y, s, {&truth, seed, std::nullopt});
    auto& rows = blocks[vi];
    const CVector& z0 = rep.init.z0;
    const double f0 = objective_value(e, y, outer_weights(e, y, z0, s), z0);
    rows.push_back({variants[vi].label, "0", "0", fmt(nmse(z0, truth)), fmt(f0)});
    for (std::size_t i = 0; i < rep.trace.size(); ++i) {
      const auto& t = rep.trace[i];
      if (t.step % cfg.trace_stride != 0 && i + 1 != rep.trace.size()) continue;
      rows.push_back({variants[vi].label, fmt(t.step), fmt(t.outer), fmt(t.nmse), fmt(t.objective)});
    }
  });

  ExperimentResult res;
  res.table.header = {"method", "step", "outer", "nmse", "objective"};
  for (auto& b : blocks)
    for (auto& r : b) res.table.add_row(std::move(r));
  return res;
}

ExperimentResult run_iters(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const auto methods = sorted_methods(cfg.methods);
  std::vector<double> ratios = cfg.mn_ratios;
  std::sort(ratios.begin(), ratios.end());
  const std::size_t quota = static_cast<std::size_t>(cfg.trials_per_point);
  const std::size_t cap = quota * static_cast<std::size_t>(cfg.retry_factor);

  ExperimentResult res;
  res.table.header = {"method",   "mn_ratio",         "m",
                      "quota",    "successes",        "attempts",
                      "mean_outer_iters", "mean_grad_steps", "quota_met"};
  for (Method method : methods) {
    for (double ratio : ratios) {
      const std::size_t m = measurements_for(ratio, cfg.n);
      std::vector<TrialRecord> used;
      std::size_t attempts = 0;
      // Fixed-size chunks keep the set of counted trials independent of `jobs`.
      for (std::size_t start = 0; start < cap && used.size() < quota; start += quota) {
        const std::size_t count = std::min(quota, cap - start);
        std::vector<TrialRecord> chunk(count);
        parallel_for(count, jobs, [&](std::size_t k) {
          const std::size_t i = start + k;
          chunk[k] = run_gaussian_trial(cfg.n, m, cfg.field, method, cfg.solver,
                                        instance_seed(cfg.base_seed, kTagIters, ratio, i),
                                        trial_seed(cfg.base_seed, method, ratio, i), false);
        });
        for (std::size_t k = 0; k < count && used.size() < quota; ++k) {
          attempts = start + k + 1;
          if (chunk[k].success) used.push_back(chunk[k]);
        }
      }
      double outer = 0.0, steps = 0.0;
      for (const auto& r : used) {
        outer += r.outer_iters;
        steps += static_cast<double>(r.total_grad_steps);
      }
      const double denom = used.empty() ? std::nan("") : static_cast<double>(used.size());
      const bool met = used.size() == quota;
      res.quota_failed = res.quota_failed || !met;
      res.table.add_row({std::string(to_string(method)), fmt(ratio), fmt(m), fmt(quota),
                         fmt(used.size()), fmt(attempts), fmt(outer / denom), fmt(steps / denom),
                         met ? "true" : "false"});
    }
  }
  return res;
}

ExperimentResult run_cdp_sweep(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  if (!is_power_of_two(cfg.n)) throw ConfigError("cdp-sweep needs n to be a power of two");
  const auto methods = sorted_methods(cfg.methods);
  std::vector<int> Ls = cfg.L_values;
  std::sort(Ls.begin(), Ls.end());
  const std::size_t trials = static_cast<std::size_t>(cfg.trials_per_point);
  const std::size_t per_method = Ls.size() * trials;
  std::vector<TrialRecord> records(methods.size() * per_method);

  parallel_for(records.size(), jobs, [&](std::size_t idx) {
    const std::size_t mi = idx / per_method;
    const std::size_t li = (idx % per_method) / trials;
    const std::size_t ti = idx % trials;
    const double point = Ls[li];
    records[idx] = run_cdp_trial(cfg.n, static_cast<std::size_t>(Ls[li]), methods[mi],
                                 cfg.solver, instance_seed(cfg.base_seed, kTagCdp, point, ti),
                                 trial_seed(cfg.base_seed, methods[mi], point, ti),
                                 cfg.record_wall_time);
  });

  ExperimentResult res;
  res.table.header = {"method", "L", "n", "m"};
  res.table.header.insert(res.table.header.end(), kAggregateHeader.begin(), kAggregateHeader.end());
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t li = 0; li < Ls.size(); ++li) {
      Aggregate agg;
      for (std::size_t ti = 0; ti < trials; ++ti) agg.add(records[mi * per_method + li * trials + ti]);
      std::vector<std::string> row = {std::string(to_string(methods[mi])), fmt(Ls[li]), fmt(cfg.n),
                                      fmt(cfg.n * static_cast<std::size_t>(Ls[li]))};
      const auto cells = agg.cells();
      row.insert(row.end(), cells.begin(), cells.end());
      res.table.add_row(std::move(row));
    }
  }
  return res;
}

ChannelRecovery recover_channel(const std::vector<std::uint8_t>& plane, std::size_t masks,
                                Method method, const SolverConfig& solver, std::uint64_t seed) {
  ChannelRecovery out;
  out.values.assign(plane.size(), 0.0);
  if (std::all_of(plane.begin(), plane.end(), [](std::uint8_t v) { return v == 0; })) {
    out.success = true;  // nothing to recover
    return out;
  }
  // Samples are scaled to [0, 1] and zero-padded to a power-of-two length.
  const std::size_t padded = next_power_of_two(plane.size());
  CVector x(padded);
  for (std::size_t i = 0; i < plane.size(); ++i) x.re[i] = plane[i] / 255.0;
  const Signal truth(x, Field::complex);
  const auto e = MeasurementEnsemble::cdp(padded, masks, hash_seed({seed, 1}));
  const IntensityVector y = intensities(e, x);
  const SolverReport rep =
      solve(e, y, with_method(solver, method), {&truth, hash_seed({seed, 2}), std::nullopt});

  // Undo the global phase using the image's positive mean.
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < padded; ++i) sum += rep.z_final[i];
  const std::complex<double> unrotate =
      std::abs(sum) > 0.0 ? std::conj(sum) / std::abs(sum) : std::complex<double>(1.0);
  for (std::size_t i = 0; i < plane.size(); ++i)
    out.values[i] = 255.0 * (rep.z_final[i] * unrotate).real();
  out.nmse = rep.final_nmse;
  out.success = rep.final_nmse < solver.success_nmse;
  out.outer_iters = rep.outer_iters;
  out.grad_steps = rep.total_grad_steps;
  return out;
}

ExperimentResult run_image(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  if (cfg.image_input.empty()) throw ConfigError("image.input is required");
  const PpmImage input = read_ppm(cfg.image_input);
  const auto methods = sorted_methods(cfg.methods);

  std::vector<ChannelRecovery> rec(methods.size() * 3);
  const std::uint64_t seed = instance_seed(cfg.base_seed, kTagImage, cfg.image_L, 0);
  parallel_for(rec.size(), jobs, [&](std::size_t idx) {
    rec[idx] = recover_channel(input.channels[idx % 3], static_cast<std::size_t>(cfg.image_L),
                               methods[idx / 3], cfg.solver, seed);
  });

  ExperimentResult res;
  res.table.header = {"method", "channel", "width", "height", "nmse", "success", "outer_iters",
                      "grad_steps"};
  static constexpr const char* kChannel[] = {"R", "G", "B"};
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    PpmImage out(input.width, input.height);
    for (int c = 0; c < 3; ++c) {
      const auto& r = rec[mi * 3 + c];
      for (std::size_t p = 0; p < out.pixels(); ++p)
        out.channels[c][p] =
            static_cast<std::uint8_t>(std::lround(std::clamp(r.values[p], 0.0, 255.0)));
      res.table.add_row({std::string(to_string(methods[mi])), kChannel[c], fmt(input.width),
                         fmt(input.height), fmt(r.nmse), r.success ? "true" : "false",
                         fmt(r.outer_iters), fmt(r.grad_steps)});
    }
    std::string path = cfg.image_output;
    if (path.empty()) {
      path = cfg.output_path.empty()
                 ? std::string("recovered.ppm")
                 : std::filesystem::path(cfg.output_path).replace_extension(".ppm").string();
    }
    if (methods.size() > 1) {
      std::filesystem::path p(path);
      p.replace_filename(p.stem().string() + "_" + std::string(to_string(methods[mi])) +
                         p.extension().string());
      path = p.string();
    }
    write_ppm(path, out);
    res.extra_files.push_back(path);
  }
  return res;
}

ExperimentResult run_landscape(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  if (cfg.landscape_x.size() != 2) throw ConfigError("landscape.x must have two entries");
  CVector x(2);
  x.re = cfg.landscape_x;
  const std::uint64_t seed = instance_seed(cfg.base_seed, kTagLandscape, 0.0, 0);
  const auto e = MeasurementEnsemble::gaussian(2, cfg.landscape_m, Field::real, hash_seed({seed, 1}));
  const IntensityVector y = intensities(e, x);
  const InitReport init = spectral_init(e, y, cfg.solver.power, hash_seed({seed, 2}));
  const WeightVector weighted = compute_weights(e, y, init.z0, cfg.solver.eta);
  const WeightVector unit = unit_weights(e.m());

  const int p = cfg.grid_points;
  auto coord = [&](int i) {
    return p == 1 ? cfg.grid_min
                  : cfg.grid_min + (cfg.grid_max - cfg.grid_min) * i / static_cast<double>(p - 1);
  };
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(p) * p);
  parallel_for(rows.size(), jobs, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / p;
    const int j = static_cast<int>(idx) % p;
    CVector z(2);
    z.re = {coord(i), coord(j)};
    rows[idx] = {fmt(z.re[0]), fmt(z.re[1]), fmt(objective_value(e, y, weighted, z)),
                 fmt(objective_value(e, y, unit, z))};
  });
  ExperimentResult res;
  res.table.header = {"z1", "z2", "f_weighted", "f_unweighted"};
  res.table.rows = std::move(rows);
  return res;
}

ExperimentResult run_rc_probe(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const std::size_t m =
      cfg.rc_m > 0 ? cfg.rc_m
                   : static_cast<std::size_t>(std::llround(8.0 * n * std::log(static_cast<double>(n))));
  const std::uint64_t seed = instance_seed(cfg.base_seed, kTagRc, static_cast<double>(m), 0);
  CVector xv = random_gaussian_vector(n, cfg.field, hash_seed({seed, 1}));
  if (cfg.rc_unit_signal) xv = scaled(xv, 1.0 / norm(xv));
  const Signal x(xv, cfg.field);
  const auto e = MeasurementEnsemble::gaussian(n, m, cfg.field, hash_seed({seed, 2}));
  const IntensityVector y = intensities(e, x.values);
  const double radius =
      norm(x.values) / 8.0 / (cfg.rc_small_radius ? std::sqrt(static_cast<double>(n)) : 1.0);
  const RCOptions opts{cfg.rc_alpha, cfg.rc_beta, cfg.rc_delta, cfg.solver.eta};

  // Probe 0 is z = x; probes 1..P are z = x + s h with ||h|| = 1, s in (0, radius].
  const std::size_t probes = static_cast<std::size_t>(cfg.rc_probes);
  std::vector<RCReport> reports(probes + 1);
  std::vector<double> radii(probes + 1, 0.0);
  parallel_for(probes + 1, jobs, [&](std::size_t i) {
    CVector z = x.values;
    if (i > 0) {
      Rng rng(hash_seed({seed, 3, i}));
      CVector h = random_gaussian_vector(n, cfg.field, rng.next_u64());
      h = scaled(h, 1.0 / norm(h));
      radii[i] = radius * rng.uniform();
      axpy(radii[i], h, z);
    }
    reports[i] = rc_probe(e, y, x, z, opts);
  });

  ExperimentResult res;
  res.table.header = {"probe",          "s",           "lhs",         "rhs",
                      "satisfied",      "curvature_rhs", "curvature_ok", "smoothness_rhs",
                      "smoothness_ok",  "in_region"};
  auto b = [](bool v) { return std::string(v ? "1" : "0"); };
  std::size_t satisfied = 0;
  for (std::size_t i = 0; i <= probes; ++i) {
    const auto& r = reports[i];
    if (i > 0 && r.satisfied) ++satisfied;
    res.table.add_row({fmt(i), fmt(radii[i]), fmt(r.lhs_curvature), fmt(r.rc_rhs()), b(r.satisfied),
                       fmt(r.curvature_rhs), b(r.curvature_satisfied), fmt(r.smoothness_rhs),
                       b(r.smoothness_satisfied), b(r.inside_region)});
  }
  // Summary: fraction of the random probes (excluding probe 0) satisfying RC.
  res.table.add_row({"fraction", "", "", "", fmt(static_cast<double>(satisfied) / probes), "", "",
                     "", "", ""});
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs) {
  switch (cfg.experiment) {
    case Experiment::sweep: return run_sweep(cfg, jobs);
    case Experiment::trace: return run_trace(cfg, jobs);
    case Experiment::iters: return run_iters(cfg, jobs);
    case Experiment::cdp_sweep: return run_cdp_sweep(cfg, jobs);
    case Experiment::image: return run_image(cfg, jobs);
    case Experiment::landscape: return run_landscape(cfg, jobs);
    case Experiment::rc_probe: return run_rc_probe(cfg, jobs);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace prwf::bench
