// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N]
//
// Exit status is 0 when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "prwf/bench/experiments.hpp"
#include "prwf/fft.hpp"
#include "prwf/metrics.hpp"
#include "prwf/objective.hpp"
#include "prwf/rng.hpp"
#include "prwf/solve.hpp"

using namespace prwf;
using namespace prwf::bench;
namespace fs = std::filesystem;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

fs::path scratch() {
  static const fs::path d = [] {
    fs::path p = fs::temp_directory_path() / ("prwf_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

std::size_t column(const CsvTable& t, const std::string& name) {
  return static_cast<std::size_t>(std::find(t.header.begin(), t.header.end(), name) - t.header.begin());
}

// Value of `col` in the row whose first two cells are (key0, key1).
double lookup(const CsvTable& t, const std::string& key0, const std::string& key1,
              const std::string& col) {
  const std::size_t c = column(t, col);
  for (const auto& r : t.rows)
    if (r[0] == key0 && r[1] == key1) return std::stod(r[c]);
  return std::nan("");
}

// Planted real signal normalized to ||x|| = 1, the scale the convergence
// results are stated at.
Signal unit_signal(std::size_t n, std::uint64_t seed) {
  const auto v = random_gaussian_vector(n, Field::real, seed);
  return Signal(scaled(v, 1.0 / norm(v)), Field::real);
}

std::size_t ln_measurements(std::size_t n) {
  return static_cast<std::size_t>(std::llround(8.0 * n * std::log(static_cast<double>(n))));
}

Outcome gradient_correctness() {
  Rng r(20240601);
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const Field f = inst % 2 ? Field::complex : Field::real;
    const std::size_t n = 1 + r.below(16);
    const std::size_t m = 1 + r.below(64);
    const auto e = MeasurementEnsemble::gaussian(n, m, f, r.next_u64());
    const auto y = intensities(e, random_gaussian_vector(n, f, r.next_u64()));
    const auto z = random_gaussian_vector(n, f, r.next_u64());
    const auto w = compute_weights(e, y, random_gaussian_vector(n, f, r.next_u64()));
    const auto v = random_gaussian_vector(n, f, r.next_u64());
    const double t = 1e-6;
    CVector zp = z, zm = z;
    axpy(t, v, zp);
    axpy(-t, v, zm);
    const double fd = (objective_value(e, y, w, zp) - objective_value(e, y, w, zm)) / (2.0 * t);
    const double an = 2.0 * inner(wirtinger_gradient(e, y, w, z), v).real();
    worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-300));
  }
  return {worst <= 1e-6, "worst relative error " + fmt(worst) + " over 50 instances"};
}

Outcome distance_oracle() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t n = 1 + s % 16;
    const auto z = random_gaussian_vector(n, Field::complex, hash_seed({s, 1}));
    const auto x = random_gaussian_vector(n, Field::complex, hash_seed({s, 2}));
    double brute = INFINITY;
    for (int k = 0; k < 4096; ++k) {
      const cd ph = std::polar(1.0, 2.0 * std::numbers::pi * k / 4096.0);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += std::norm(z[i] - x[i] * ph);
      brute = std::min(brute, std::sqrt(acc));
    }
    const double d = dist(z, x, Field::complex);
    worst = std::max(worst, std::abs(d - brute) / (norm(z) + norm(x)));
  }
  return {worst <= 1e-5, "worst |closed - grid| / (|z|+|x|) = " + fmt(worst)};
}

Outcome weight_bounds() {
  const double eta = 0.9;
  double wmin = INFINITY, wmax = 0.0, emin = INFINITY, emax = 0.0;
  std::size_t in_region = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Field f = s % 2 ? Field::complex : Field::real;
    const std::size_t n = 4 + s % 13;
    const auto e = MeasurementEnsemble::gaussian(n, 6 * n, f, hash_seed({s, 10}));
    const auto x = random_gaussian_vector(n, f, hash_seed({s, 11}));
    const auto y = intensities(e, x);
    // Arbitrary points, including far-away ones with huge residuals.
    const double scale = std::pow(10.0, static_cast<double>(s % 7) - 2.0);
    const auto z = scaled(random_gaussian_vector(n, f, hash_seed({s, 12})), scale);
    for (double w : compute_weights(e, y, z, eta).omegas) {
      wmin = std::min(wmin, w);
      wmax = std::max(wmax, w);
    }
    // Points near x, kept only when inside E(z).
    CVector zn = x;
    axpy(1e-3 * static_cast<double>(1 + s % 10), random_gaussian_vector(n, f, hash_seed({s, 13})), zn);
    if (in_region_E(e, y, zn)) {
      ++in_region;
      for (double w : compute_weights(e, y, zn, eta).omegas) {
        emin = std::min(emin, w);
        emax = std::max(emax, w);
      }
    }
  }
  const double cap = 1.0 / eta;
  const bool ok = wmin > 0.0 && wmax <= cap && in_region > 0 && emin >= 1.0 && emax <= cap;
  return {ok, "all weights in [" + fmt(wmin) + ", " + fmt(wmax) + "], region-E weights in [" +
                  fmt(emin) + ", " + fmt(emax) + "] over " + std::to_string(in_region) +
                  " in-region points"};
}

Outcome init_quality() {
  const std::size_t n = 64, m = ln_measurements(n);
  int ok = 0;
  std::vector<double> ratios;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto e = MeasurementEnsemble::gaussian(n, m, Field::real, hash_seed({4, t, 1}));
    const Signal x = unit_signal(n, hash_seed({4, t, 2}));
    const auto rep = spectral_init(e, intensities(e, x.values), {}, hash_seed({4, t, 3}));
    const double r = nmse(rep.z0, x);
    ratios.push_back(r);
    if (r <= 1.0 / 8.0) ++ok;
  }
  std::sort(ratios.begin(), ratios.end());
  const double frac = ok / 50.0;
  return {frac >= 0.9, "m = " + std::to_string(m) + ", dist(z0,x) <= |x|/8 in " + std::to_string(ok) +
                           "/50 trials (median dist/|x| = " + fmt(ratios[25]) + ")"};
}

Outcome geometric_convergence() {
  const std::size_t n = 64, m = 8 * n;
  const double mu = 0.2 / static_cast<double>(n);
  int ok = 0, entered = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto e = MeasurementEnsemble::gaussian(n, m, Field::real, hash_seed({5, t, 1}));
    const Signal x = unit_signal(n, hash_seed({5, t, 2}));
    const auto y = intensities(e, x.values);

    SolverConfig reach;
    reach.stop_in_region = true;
    SolveOptions o;
    o.ground_truth = &x;
    o.seed = hash_seed({5, t, 3});
    const auto pre = solve(e, y, reach, o);
    if (!in_region_E(e, y, pre.z_final)) continue;
    ++entered;

    SolverConfig fixed;
    fixed.stepsize = StepsizeMode::fixed;
    fixed.fixed_mu = mu;
    fixed.record_trace = true;
    fixed.max_inner = 4000;
    const auto w = compute_weights(e, y, pre.z_final, fixed.eta);
    const auto run = inner_gd(e, y, w, pre.z_final, fixed, &x);
    bool holds = true;
    for (const auto& tr : run.trace)
      holds = holds && tr.nmse <= (1.0 / 8.0) * std::pow(1.0 - mu / 4.0, static_cast<double>(tr.step - 1));
    if (holds && !run.trace.empty()) ++ok;
  }
  const double frac = ok / 20.0;
  return {frac >= 0.9, "bound held in " + std::to_string(ok) + "/20 trials (" +
                           std::to_string(entered) + " entered E)"};
}

Outcome phase_transition() {
  auto cfg = parse_config(Experiment::sweep,
                          "n=64\nfield=real\nratios=3,8\ntrials=20\nmethods=RWF,TWF-lite,WF\n"
                          "record_wall_time=false\n",
                          Profile::desk);
  const auto t = run_sweep(cfg, jobs()).table;
  const double rwf3 = lookup(t, "RWF", "3", "rate"), twf3 = lookup(t, "TWF-lite", "3", "rate");
  const double wf3 = lookup(t, "WF", "3", "rate"), rwf8 = lookup(t, "RWF", "8", "rate");
  const bool ok = rwf3 >= twf3 && twf3 >= wf3 && rwf8 == 1.0 && rwf3 >= 0.5;
  return {ok, "m/n=3 rates RWF " + fmt(rwf3) + ", TWF-lite " + fmt(twf3) + ", WF " + fmt(wf3) +
                  "; RWF at m/n=8 " + fmt(rwf8)};
}

Outcome outer_trend() {
  auto cfg = parse_config(Experiment::iters, "n=64\nfield=real\nratios=2.5,8\nmethods=RWF\n",
                          Profile::desk);
  const auto res = run_iters(cfg, jobs());
  const double lo = lookup(res.table, "RWF", "2.5", "mean_outer_iters");
  const double hi = lookup(res.table, "RWF", "8", "mean_outer_iters");
  const bool ok = hi <= 2.0 && lo > hi && !res.quota_failed;
  return {ok, "mean outer iterations " + fmt(lo) + " at m/n=2.5, " + fmt(hi) + " at m/n=8" +
                  (res.quota_failed ? " (quota missed)" : "")};
}

Outcome cdp_recovery() {
  auto cfg = parse_config(Experiment::cdp_sweep,
                          "n=128\nL_values=2,3,4,5,6,7,8\ntrials=10\nmethods=RWF,WF\n"
                          "record_wall_time=false\n",
                          Profile::desk);
  const auto t = run_cdp_sweep(cfg, jobs()).table;
  bool ordered = true;
  std::string rates;
  for (int L = 2; L <= 8; ++L) {
    const double r = lookup(t, "RWF", std::to_string(L), "rate");
    const double w = lookup(t, "WF", std::to_string(L), "rate");
    ordered = ordered && r >= w;
    rates += " L" + std::to_string(L) + "=" + fmt(r) + "/" + fmt(w);
  }
  const double r8 = lookup(t, "RWF", "8", "rate");
  return {r8 >= 0.9 && ordered, "RWF/WF rates" + rates};
}

Outcome image_pipeline() {
  PpmImage img(8, 8);
  for (std::size_t p = 0; p < img.pixels(); ++p) {
    const std::size_t i = p / 8, j = p % 8;
    img.channels[0][p] = static_cast<std::uint8_t>(32 * i + 3);
    img.channels[1][p] = static_cast<std::uint8_t>(32 * j + 7);
    img.channels[2][p] = static_cast<std::uint8_t>((i * j * 37 + 11) % 256);
  }
  const auto in = scratch() / "synthetic.ppm", out = scratch() / "recovered.ppm";
  write_ppm(in.string(), img);
  auto cfg = parse_config(Experiment::image,
                          "image.input=" + in.string() + "\nimage.output=" + out.string() +
                              "\nimage.L=7\nmethods=RWF\n",
                          Profile::desk);
  const auto res = run_image(cfg, jobs());
  double worst = 0.0;
  for (const auto& r : res.table.rows) worst = std::max(worst, std::stod(r[column(res.table, "nmse")]));
  bool parsed = false;
  try {
    const auto back = read_ppm(out.string());
    parsed = back.width == 8 && back.height == 8;
  } catch (const std::exception&) {
  }
  return {res.table.rows.size() == 3 && worst < 1e-5 && parsed,
          "worst channel NMSE " + fmt(worst) + (parsed ? ", output parses as 8x8" : ", output unreadable")};
}

Outcome fft_correctness() {
  double worst = 0.0;
  std::vector<cd> delta(64, 0.0);
  delta[0] = 1.0;
  for (const auto& v : fft(delta, FftDirection::forward)) worst = std::max(worst, std::abs(v - 1.0));
  for (std::size_t n : {2u, 16u, 256u, 1024u}) {
    const auto v = random_gaussian_vector(n, Field::complex, n).to_complex();
    const auto f = fft(v, FftDirection::forward);
    const auto b = fft(f, FftDirection::inverse);
    double ev = 0.0, ef = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(b[i] - v[i]));
      ev += std::norm(v[i]);
      ef += std::norm(f[i]);
    }
    worst = std::max(worst, std::abs(ef - n * ev) / ef);
  }
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto v = random_gaussian_vector(16, Field::complex, 900 + s).to_complex();
    const auto f = fft(v, FftDirection::forward);
    for (std::size_t k = 0; k < 16; ++k) {
      cd acc = 0.0;
      for (std::size_t t = 0; t < 16; ++t)
        acc += v[t] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * t) / 16.0);
      worst = std::max(worst, std::abs(acc - f[k]));
    }
  }
  return {worst <= 1e-10, "worst identity error " + fmt(worst)};
}

Outcome regularity() {
  auto cfg = parse_config(Experiment::rc_probe,
                          "n=32\nfield=real\nrc.probes=100\nrc.alpha=10\nrc.beta=828\nrc.delta=0.01\n",
                          Profile::desk);
  const auto t = run_rc_probe(cfg, jobs()).table;
  const double frac = std::stod(t.rows.back()[column(t, "satisfied")]);
  return {frac >= 0.95, "m = " + std::to_string(ln_measurements(32)) + ", RC satisfied in a fraction " +
                            fmt(frac) + " of 100 probes"};
}

Outcome determinism() {
  const fs::path dir = scratch();
  PpmImage img(4, 4);
  for (std::size_t p = 0; p < img.pixels(); ++p)
    for (int c = 0; c < 3; ++c) img.channels[c][p] = static_cast<std::uint8_t>(17 * p + 60 * c);
  write_ppm((dir / "det.ppm").string(), img);

  struct Case {
    std::string sub, config;
  };
  const std::vector<Case> cases = {
      {"sweep", "n=16\nratios=2,4\ntrials=6\nmethods=RWF,WF,TWF-lite\nrecord_wall_time=false\n"},
      {"trace", "n=16\ntrace.ratio=3\nmethods=RWF,WF\n"},
      {"iters", "n=16\nratios=3,8\ntrials=4\nmethods=RWF\n"},
      {"cdp-sweep", "n=16\nL_values=3,6\ntrials=4\nmethods=RWF,WF\nrecord_wall_time=false\n"},
      {"landscape", "landscape.points=21\n"},
      {"rc-probe", "n=16\nrc.probes=20\n"},
      {"image", "image.input=" + (dir / "det.ppm").string() + "\nmethods=RWF\nimage.L=5\n"},
  };
  std::string bad;
  for (const auto& c : cases) {
    const auto cfg = dir / ("det_" + c.sub + ".cfg");
    spit(cfg, c.config);
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      const int j = k == 0 ? 1 : 4;
      const auto out = dir / ("det_" + c.sub + "_" + std::to_string(j) + ".csv");
      const std::string cmd = std::string(PRWF_BENCH_EXE) + " " + c.sub + " --config " +
                              cfg.string() + " --jobs " + std::to_string(j) + " --out " +
                              out.string() + " > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      outputs[k] = slurp(out);
      if (c.sub == "image") outputs[k] += slurp(fs::path(out).replace_extension(".ppm"));
      if (rc != 0) outputs[k] = "exit " + std::to_string(rc);
    }
    if (outputs[0].empty() || outputs[0] != outputs[1]) bad += " " + c.sub;
  }
  return {bad.empty(), bad.empty() ? "7 experiments byte-identical at --jobs 1 and 4"
                                   : "differs or failed:" + bad};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0: no runtime limit
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "gradient correctness", 5, gradient_correctness},
    {2, "distance oracle", 1, distance_oracle},
    {3, "weight bounds", 1, weight_bounds},
    {4, "initialization quality", 30, init_quality},
    {5, "geometric convergence", 60, geometric_convergence},
    {6, "phase-transition ordering", 600, phase_transition},
    {7, "outer-iteration trend", 600, outer_trend},
    {8, "CDP recovery", 600, cdp_recovery},
    {9, "image pipeline", 60, image_pipeline},
    {10, "FFT correctness", 1, fft_correctness},
    {11, "regularity-condition diagnostics", 60, regularity},
    {12, "determinism", 0, determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  bool all_ok = true;
  bool ran = false;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    std::printf("criterion %d (%s): %s: %s; %.2f s%s\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, in_time ? "" : " (over time limit)");
    std::fflush(stdout);
    all_ok = all_ok && pass;
  }
  std::error_code ec;
  fs::remove_all(scratch(), ec);
  if (!ran) {
    std::fprintf(stderr, "no such criterion\n");
    return 2;
  }
  return all_ok ? 0 : 1;
}
