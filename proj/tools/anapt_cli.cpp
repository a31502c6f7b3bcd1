// anapt: zero-dimensional sublevel-set persistence of 1-D time series with
// statistical noise cutoffs.
//
// Subcommands:
//   persist    series CSV -> diagram CSV
//   analyze    series CSV -> cutoff report JSON (+ labeled diagram CSV)
//   cutoff     closed-form lifetime cutoff for known parameters
//   calibrate  rho | compensation constants via Monte Carlo
//   baseline   entropy | bootstrap | sigma comparison methods
//   simulate   signal generators with optional additive noise
//   render     diagram CSV + cutoff -> SVG scatter with noise band
//
// The ANAPT_CALIBRATION environment variable may point to a calibration JSON
// (as written by `calibrate`) to override the built-in constants.

#include "anapt/anapt.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;

anapt::TimeSeries<double> load_series(const std::string& path, double rate) {
  std::ifstream in(path);
  if (!in) throw anapt::Error("cannot open input file: " + path);
  auto s = anapt::read_series_csv(in, rate);
  s.validate();
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw anapt::Error("cannot open output file: " + path);
  return out;
}

anapt::CalibrationTables load_calibration(const std::optional<std::string>& flag_path) {
  std::string path;
  if (flag_path) {
    path = *flag_path;
  } else if (const char* env = std::getenv("ANAPT_CALIBRATION")) {
    path = env;
  } else {
    return anapt::CalibrationTables::defaults();
  }
  std::ifstream in(path);
  if (!in) throw anapt::Error("cannot open calibration file: " + path);
  return anapt::calibration_from_json(json::parse(in));
}

int run(int argc, char** argv) {
  CLI::App app{"additive-noise analysis of persistence thresholds"};
  app.require_subcommand(1);

  std::string input, output, family_s = "gaussian", kind_s = "sinusoid";
  double alpha = 0.001, rate = 1.0, param = 1.0;
  std::uint64_t seed = 0;
  std::optional<std::string> calib_path;

  // persist
  auto* persist = app.add_subcommand("persist", "compute a sublevel-set persistence diagram");
  persist->add_option("--input", input)->required();
  persist->add_option("--output", output)->required();
  persist->add_option("--rate", rate, "sample rate when the CSV has no time column");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "full pipeline: diagram, cutoffs, labels");
  std::string labeled_out;
  analyze->add_option("--input", input)->required();
  analyze->add_option("--output", output, "report JSON path (stdout if omitted)");
  analyze->add_option("--diagram-out", labeled_out, "labeled diagram CSV path");
  analyze->add_option("--family", family_s);
  analyze->add_option("--alpha", alpha);
  analyze->add_option("--rate", rate);
  analyze->add_option("--calibration", calib_path, "calibration JSON overriding defaults");

  // cutoff
  auto* cut = app.add_subcommand("cutoff", "closed-form cutoff for known parameters");
  Eigen::Index cut_n = 2;
  cut->add_option("--family", family_s);
  cut->add_option("--param", param)->required();
  cut->add_option("--alpha", alpha);
  cut->add_option("--n", cut_n)->required();

  // calibrate rho|compensation
  auto* calib = app.add_subcommand("calibrate", "Monte Carlo calibration of the constants");
  calib->require_subcommand(1);
  int trials = 10;
  Eigen::Index rho_n = 100000;
  auto* calib_rho = calib->add_subcommand("rho", "mean/median lifetime ratio");
  calib_rho->add_option("--family", family_s);
  calib_rho->add_option("--n", rho_n);
  calib_rho->add_option("--trials", trials);
  calib_rho->add_option("--seed", seed);
  calib_rho->add_option("--output", output);
  auto* calib_comp = calib->add_subcommand("compensation", "compensation constants c1, c2");
  calib_comp->add_option("--family", family_s);
  calib_comp->add_option("--trials", trials, "trials per sweep point")->default_val(30);
  calib_comp->add_option("--seed", seed);
  calib_comp->add_option("--output", output);

  // baseline entropy|bootstrap|sigma
  auto* base = app.add_subcommand("baseline", "comparison methods");
  base->require_subcommand(1);
  double cutoff_hz = 0.0;
  int order = 2, resamples = 1000;
  double percentile = 0.95;
  auto* base_entropy = base->add_subcommand("entropy", "persistent-entropy labels");
  base_entropy->add_option("--input", input)->required();
  base_entropy->add_option("--rate", rate);
  auto* base_boot = base->add_subcommand("bootstrap", "residual-resampling bottleneck threshold");
  base_boot->add_option("--input", input)->required();
  base_boot->add_option("--rate", rate);
  base_boot->add_option("--resamples", resamples);
  base_boot->add_option("--percentile", percentile);
  base_boot->add_option("--cutoff-hz", cutoff_hz, "filter cutoff (default: 2x dominant)");
  base_boot->add_option("--order", order);
  base_boot->add_option("--seed", seed);
  auto* base_sigma = base->add_subcommand("sigma", "residual sigma estimates");
  base_sigma->add_option("--input", input)->required();
  base_sigma->add_option("--rate", rate);
  base_sigma->add_option("--cutoff-hz", cutoff_hz);
  base_sigma->add_option("--order", order);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a signal, optionally with noise");
  double amplitude = 1.0, t_a = 0.0, t_b = 1.0, sim_rate = 40.0;
  std::optional<double> snr_db, noise_param;
  std::string noise_family = "gaussian";
  sim->add_option("--kind", kind_s, "wood1|wood2|wood3|quasiperiodic|lorenz_x|sinusoid");
  sim->add_option("--amplitude", amplitude);
  sim->add_option("--t0", t_a);
  sim->add_option("--t1", t_b);
  sim->add_option("--rate", sim_rate);
  sim->add_option("--snr-db", snr_db, "additive Gaussian noise at this SNR");
  sim->add_option("--noise-param", noise_param, "explicit noise parameter instead of SNR");
  sim->add_option("--noise-family", noise_family);
  sim->add_option("--seed", seed);
  sim->add_option("--output", output)->required();

  // render
  auto* render = app.add_subcommand("render", "diagram CSV -> SVG");
  double render_cutoff = 0.0;
  render->add_option("--input", input)->required();
  render->add_option("--cutoff", render_cutoff)->required();
  render->add_option("--output", output)->required();

  CLI11_PARSE(app, argc, argv);

  if (persist->parsed()) {
    const auto dgm = anapt::sublevel_persistence(load_series(input, rate));
    auto out = open_out(output);
    anapt::write_diagram_csv(out, dgm);
    return 0;
  }

  if (analyze->parsed()) {
    const auto family = anapt::family_from_name(family_s);
    const auto tables = load_calibration(calib_path);
    const auto series = load_series(input, rate);
    const auto dgm = anapt::sublevel_persistence(series);
    const auto rep =
        anapt::anapt_from_diagram(dgm, family, alpha, tables.at(family).constants);
    const json j = anapt::report_to_json(rep);
    if (output.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      open_out(output) << j.dump(2) << "\n";
    }
    if (!labeled_out.empty()) {
      std::vector<anapt::PairLabel> labels(dgm.pairs.size(), anapt::PairLabel::noise);
      for (const auto i : rep.signal_pairs) labels[i] = anapt::PairLabel::signal;
      auto out = open_out(labeled_out);
      anapt::write_diagram_csv(out, dgm, &labels);
    }
    return 0;
  }

  if (cut->parsed()) {
    const auto model = anapt::NoiseModel<double>::make(anapt::family_from_name(family_s), param);
    std::cout << anapt::detail::fmt17(anapt::cutoff(model, anapt::CutoffQuery{alpha, cut_n}))
              << "\n";
    return 0;
  }

  if (calib_rho->parsed()) {
    const auto family = anapt::family_from_name(family_s);
    const auto est = anapt::estimate_rho(family, rho_n, trials, seed);
    const json j{{"family", family_s}, {"rho", est.rho}, {"sd", est.sd}};
    if (output.empty())
      std::cout << j.dump(2) << "\n";
    else
      open_out(output) << j.dump(2) << "\n";
    return 0;
  }

  if (calib_comp->parsed()) {
    const auto family = anapt::family_from_name(family_s);
    auto tables = anapt::CalibrationTables::defaults();
    tables.at(family).constants = anapt::fit_compensation_constants(family, trials, seed);
    tables.recalibrated = true;
    tables.seed = seed;
    tables.trials = trials;
    const json j = anapt::calibration_to_json(tables);
    if (output.empty())
      std::cout << j.dump(2) << "\n";
    else
      open_out(output) << j.dump(2) << "\n";
    return 0;
  }

  if (base_entropy->parsed()) {
    const auto dgm = anapt::sublevel_persistence(load_series(input, rate));
    const auto labels = anapt::persistent_entropy_separation(dgm);
    json jl = json::array();
    for (const auto l : labels) jl.push_back(l == anapt::PairLabel::signal ? "signal" : "noise");
    std::cout << json{{"method", "persistent_entropy"}, {"labels", jl}}.dump(2) << "\n";
    return 0;
  }

  if (base_boot->parsed()) {
    const auto series = load_series(input, rate);
    anapt::BootstrapConfig cfg;
    cfg.resamples = resamples;
    cfg.percentile = percentile;
    cfg.filter_cutoff_hz = cutoff_hz;
    cfg.filter_order = order;
    cfg.seed = seed;
    const double thr = anapt::bootstrap_cutoff(series, cfg);
    std::cout << json{{"method", "bottleneck_bootstrap"}, {"threshold", thr}}.dump(2) << "\n";
    return 0;
  }

  if (base_sigma->parsed()) {
    const auto series = load_series(input, rate);
    const double fc = cutoff_hz > 0 ? cutoff_hz : 2.0 * anapt::dominant_frequency(series);
    const json j{{"method", "residual_sigma"},
                 {"lowpass", anapt::lowpass_residual_sigma(series, fc, order)},
                 {"lowpass_cutoff_hz", fc},
                 {"spline", anapt::spline_residual_sigma(series)}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (sim->parsed()) {
    anapt::SignalSpec spec;
    spec.kind = anapt::signal_kind_from_name(kind_s);
    spec.amplitude = amplitude;
    spec.t_a = t_a;
    spec.t_b = t_b;
    spec.sample_rate = sim_rate;
    if (spec.kind == anapt::SignalKind::lorenz_x) {
      spec.sample_rate = sim_rate > 0 ? sim_rate : 200.0;
    }
    auto series = anapt::generate<double>(spec);
    if (snr_db || noise_param) {
      const auto fam = anapt::family_from_name(noise_family);
      const double p = noise_param ? *noise_param : anapt::sigma_from_snr(series, *snr_db);
      series = anapt::add_noise(series, anapt::NoiseModel<double>::make(fam, p), seed);
    }
    auto out = open_out(output);
    anapt::write_series_csv(out, series);
    return 0;
  }

  if (render->parsed()) {
    std::ifstream in(input);
    if (!in) throw anapt::Error("cannot open input file: " + input);
    const auto dgm = anapt::read_diagram_csv(in);
    auto out = open_out(output);
    anapt::render_svg(out, dgm, render_cutoff);
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
