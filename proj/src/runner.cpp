// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "lmgdpt/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lmgdpt/error.hpp"
#include "lmgdpt/parity_echo.hpp"
#include "parallel.hpp"

namespace lmgdpt {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Echo samples closer than this (in ln L) to the double-precision floor
// trigger the extended-precision path in automatic mode.
constexpr double kAutoMargin = 13.8;  // ln 1e6
// Agreement required between the two echo paths where both are resolved.
constexpr double kCrossCheckTolerance = 1e-6;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Shortest decimal form that round-trips.
std::string shortest(double x) {
  char buf[40];
  for (int p = 1; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vector_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

RealVector dense_log_echo(const QuantumState& psi, const SpectralDecomposition& spec, const RealVector& times) {
  return loschmidt_echo(psi, spec, times).values.array().log().matrix();
}

ParityWeights parity_weights(const QuantumState& psi) {
  double even = 0.0;
  for (Index k = 0; k < psi.dim(); k += 2) even += std::norm(psi.amplitudes()[k]);
  even = std::clamp(even, 0.0, 1.0);
  return {even, 1.0 - even};
}

json config_json(const ExperimentConfig& c) {
  json out;
  out["j"] = c.j_list;
  out["h0"] = c.h0;
  out["h"] = c.h_list;
  out["gamma_x"] = c.gamma_x;
  out["t_max"] = c.t_max;
  out["n_t"] = c.n_t;
  out["grid"] = c.grid_override ? json::array({c.grid_override->first, c.grid_override->second}) : json("auto");
  out["initial_state"] = c.initial_state.to_string();
  out["compute_husimi"] = c.compute_husimi;
  out["richardson_check"] = c.richardson_check;
  out["compute_polar_rate"] = c.compute_polar_rate;
  out["polar_every"] = c.polar_every;
  out["hp_compare"] = c.hp_compare;
  out["exponent_reading"] = to_string(c.exponent_reading);
  out["rate_reading"] = to_string(c.rate_reading);
  out["precision"] = to_string(c.precision);
  out["precision_bits"] = c.precision_bits;
  out["degeneracy_threshold"] = c.degeneracy_threshold ? json(*c.degeneracy_threshold) : json("default");
  out["kappa_min"] = number_or_null(c.kinks.kappa_min);
  out["kappa_factor"] = c.kinks.kappa_factor;
  out["t_merge"] = c.kinks.t_merge;
  out["prominence"] = number_or_null(c.peaks.prominence);
  out["prominence_fraction"] = c.peaks.prominence_fraction;
  out["pair_window"] = c.pair_window ? json(*c.pair_window) : json(nullptr);
  out["husimi_dump_every"] = c.husimi_dump_every;
  out["output_dir"] = c.output_dir;
  out["threads"] = c.threads;
  return out;
}

json detection_json(const KinkDetection& kinks, const PeakDetection* peaks, const DptReport& report) {
  json out;
  out["critical_times"] = vector_json(kinks.times);
  out["kink_sharpness"] = vector_json(kinks.sharpness);
  out["entropy_peak_times"] = peaks ? vector_json(peaks->times) : json::array();
  out["peak_prominences"] = peaks ? vector_json(peaks->prominences) : json::array();
  json pairs = json::array();
  for (const auto& [tc, tm] : report.pairs) pairs.push_back({tc, tm});
  out["pairs"] = pairs;
  if (report.fit) {
    out["fit"] = {{"slope", report.fit->slope},
                  {"intercept", report.fit->intercept},
                  {"correlation", report.fit->correlation}};
  } else {
    out["fit"] = nullptr;
  }
  out["thresholds"] = {{"kappa_min", number_or_null(kinks.kappa_min_used)},
                       {"t_merge", kinks.t_merge_used},
                       {"prominence", peaks ? number_or_null(peaks->prominence_used) : json(nullptr)},
                       {"pair_window", number_or_null(report.pair_window)}};
  return out;
}

json hp_comparison_json(const QuenchResult& r) {
  if (r.hp_comparison.empty()) return nullptr;
  json readings = json::array();
  const HpReadingComparison* best = &r.hp_comparison.front();
  for (const auto& c : r.hp_comparison) {
    readings.push_back({{"reading", to_string(c.reading)},
                        {"relative_sup_mismatch", number_or_null(c.relative_mismatch)},
                        {"min_rate", c.min_rate}});
    if (c.relative_mismatch < best->relative_mismatch) best = &c;
  }
  return {{"window", r.hp_window}, {"readings", readings}, {"closest", to_string(best->reading)}};
}

json result_metadata(const QuenchResult& r, const ExperimentConfig& c) {
  return {{"j", r.j},
          {"h0", r.h0},
          {"h", r.h},
          {"gamma_x", r.gamma_x},
          {"g", r.g},
          {"initial_state", r.initial_state},
          {"precision", r.precision_used},
          {"precision_bits", r.precision_bits},
          {"log_echo_floor", r.log_floor},
          {"echo_floor", kEchoFloor},
          {"degeneracy_threshold", r.degeneracy_threshold},
          {"grid", json::array({r.grid.first, r.grid.second})},
          {"rate_reading", to_string(c.rate_reading)},
          {"exponent_reading", to_string(c.exponent_reading)},
          {"plateau_samples", r.r.flagged()},
          {"richardson_max_correction",
           r.production_richardson ? json(r.richardson_max_correction) : json(nullptr)},
          {"hp_comparison", hp_comparison_json(r)}};
}

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

void write_text(const std::string& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell.push_back(ch);
    }
  }
  cells.push_back(cell);
  return cells;
}

}  // namespace

QuenchResult compute_quench(const ExperimentConfig& config, double j_value, double h) {
  const SpinQuantumNumber j = SpinQuantumNumber::from_value(j_value);
  const LmgParameters p0 = LmgParameters::make(j, config.h0, config.gamma_x);
  const LmgParameters p1 = LmgParameters::make(j, h, config.gamma_x);
  const double n = 2.0 * j.value();

  QuenchResult res;
  res.j = j.value();
  res.h0 = config.h0;
  res.h = h;
  res.gamma_x = config.gamma_x;
  res.times = uniform_times(config.t_max, config.n_t);

  const AngularMomentumSet ops = build_angular_momentum(j);
  const SpectralDecomposition spec0 = hermitian_eigendecomposition(build_hamiltonian(p0));
  res.degeneracy_threshold = config.degeneracy_threshold.value_or(default_degeneracy_threshold(spec0.eigenvalues[0]));
  const GroundMultiplet gm = ground_multiplet(spec0, ops, res.degeneracy_threshold);
  res.g = gm.g();

  InitialStateChoice choice = config.initial_state;
  if (choice.kind == InitialStateChoice::Kind::automatic) {
    choice = res.g == 2 ? InitialStateChoice::superposition() : InitialStateChoice::eigenstate(0);
  }
  res.initial_state = choice.to_string();
  const QuantumState psi0 = initial_state(gm, choice);
  auto spec1 = std::make_shared<const SpectralDecomposition>(hermitian_eigendecomposition(build_hamiltonian(p1)));

  // Double-precision echoes.
  std::vector<const QuantumState*> tracked = {&psi0};
  for (const auto& s : gm.states) tracked.push_back(&s);
  std::optional<QuantumState> superposition;
  if (res.g == 2) {
    superposition = initial_state(gm, InitialStateChoice::superposition());
    tracked.push_back(&*superposition);
  }
  std::vector<RealVector> logs;
  for (const QuantumState* s : tracked) logs.push_back(dense_log_echo(*s, *spec1, res.times));

  const double eps = std::numeric_limits<double>::epsilon();
  const double double_floor =
      std::max(std::log(kEchoFloor), 2.0 * std::log(10.0 * eps * std::sqrt(static_cast<double>(j.dim()))));
  double lowest = 0.0;
  for (const auto& l : logs) lowest = std::min(lowest, l.minCoeff());

  bool extended = config.precision == PrecisionMode::extended;
  if (config.precision == PrecisionMode::automatic) extended = lowest < double_floor + kAutoMargin;

  if (extended) {
    const ExtendedPrecisionEcho ep(p0, p1, config.precision_bits);
    res.precision_used = "extended";
    res.precision_bits = ep.bits();
    res.log_floor = std::max(std::log(kEchoFloor), ep.log_floor(config.n_t));
    const double h_norm = spec1->eigenvalues.cwiseAbs().maxCoeff();
    std::map<std::pair<double, double>, RealVector> cache;
    for (std::size_t i = 0; i < tracked.size(); ++i) {
      const ParityWeights w = parity_weights(*tracked[i]);
      const auto key = std::make_pair(std::round(w.even * 1e9), std::round(w.odd * 1e9));
      auto it = cache.find(key);
      if (it == cache.end()) {
        const std::vector<double> mp = ep.log_echo(w, config.t_max, config.n_t);
        it = cache.emplace(key, Eigen::Map<const RealVector>(mp.data(), static_cast<Index>(mp.size()))).first;
      }
      // Both paths must agree wherever double precision still resolves the echo.
      for (Index k = 0; k < res.times.size(); ++k) {
        // Dense amplitude error: rounding of the states plus eigenvalue error
        // eps |H| turned into phase error over time t.
        const double amp_err = 10.0 * eps * (std::sqrt(static_cast<double>(j.dim())) + h_norm * res.times[k]);
        const double tol = kCrossCheckTolerance + 2.0 * amp_err * std::exp(-0.5 * logs[i][k]);
        if (logs[i][k] > double_floor + 2.0 * kAutoMargin && std::abs(logs[i][k] - it->second[k]) > tol) {
          std::ostringstream msg;
          msg << std::setprecision(12) << "extended-precision echo disagrees with the dense echo at t = " << res.times[k] << " (ln L "
              << it->second[k] << " vs " << logs[i][k] << ")";
          throw NumericalError(msg.str(), std::abs(logs[i][k] - it->second[k]));
        }
      }
      logs[i] = it->second;
    }
  } else {
    res.precision_used = "double";
    res.precision_bits = 53;
    res.log_floor = double_floor;
  }

  res.log_echo = logs[0];
  res.log_echo_ground.assign(logs.begin() + 1, logs.begin() + 1 + res.g);
  if (res.g == 2) res.log_echo_superposition = logs.back();

  res.r = rate_from_log_echo(res.times, res.log_echo, n, res.log_floor);
  EchoBundle bundle{res.times, res.log_echo_ground, res.log_floor};
  res.r_s = net_rate(bundle, n);
  res.r_m = min_rate(bundle, n, config.rate_reading);
  res.kinks = detect_critical_times(res.r, config.kinks);

  const double w_pair = config.pair_window.value_or(std::numeric_limits<double>::quiet_NaN());
  res.grid = config.grid_override.value_or(default_grid_size(j));
  if (config.compute_husimi || config.compute_polar_rate) {
    auto grid = std::make_shared<const SphereGrid>(build_sphere_grid(res.grid.first, res.grid.second));
    const HusimiEvaluator evaluator(j, grid);
    const Propagator prop(spec1, psi0);
    if (config.compute_husimi) {
      res.wehrl = wehrl_timeseries(prop, res.times, evaluator, config.threads);
      res.production = entropy_production_rate(*res.wehrl);
      res.peaks = detect_entropy_peaks(*res.production, config.peaks);
      if (config.richardson_check) {
        // Central differences of step dt/2 from midpoint samples, then
        // Richardson extrapolation against the step-dt estimate.
        const Index nt = res.times.size();
        const double dt = res.wehrl->dt();
        RealVector mid_times(nt - 1);
        for (Index k = 0; k + 1 < nt; ++k) mid_times[k] = res.times[k] + 0.5 * dt;
        const TimeSeries mid = wehrl_timeseries(prop, mid_times, evaluator, config.threads);
        RealVector rich = RealVector::Constant(nt, std::numeric_limits<double>::quiet_NaN());
        double worst = 0.0;
        for (Index k = 1; k + 1 < nt; ++k) {
          const double half = (mid.values[k] - mid.values[k - 1]) / dt;
          rich[k] = (4.0 * half - res.production->values[k]) / 3.0;
          worst = std::max(worst, std::abs(rich[k] - res.production->values[k]));
        }
        res.production_richardson = std::move(rich);
        res.richardson_max_correction = worst;
      }
    }
    if (config.compute_polar_rate) {
      RealVector polar = RealVector::Constant(res.times.size(), std::numeric_limits<double>::quiet_NaN());
      const Index stride = std::max<Index>(config.polar_every, 1);
      const Index count = (res.times.size() + stride - 1) / stride;
      detail::parallel_for(count, config.threads, [&](std::ptrdiff_t i) {
        const Index k = i * stride;
        polar[k] = evaluator.polar_rate(prop.at(res.times[k]), config.gamma_x);
      });
      res.polar = std::move(polar);
    }
  }
  res.report = pair_and_fit(res.kinks.times, res.peaks.times, w_pair);

  if (config.hp_compare) {
    RealVector le(res.times.size()), rr(res.times.size());
    for (Index k = 0; k < res.times.size(); ++k) {
      le[k] = hp_loschmidt(j.value(), config.h0, h, config.gamma_x, res.times[k], config.exponent_reading);
      rr[k] = hp_rate(config.h0, h, config.gamma_x, res.times[k], config.exponent_reading);
    }
    res.hp_echo = std::move(le);
    res.hp_rate = std::move(rr);

    res.hp_window = std::min(config.t_max, 2.0 * 2.0 * M_PI / hp_omega(h, config.gamma_x));
    for (ExponentReading reading :
         {ExponentReading::as_printed, ExponentReading::squared, ExponentReading::gaussian_overlap}) {
      double sup = 0.0, peak = 0.0, lowest = INFINITY;
      for (Index k = 0; k < res.times.size() && res.times[k] <= res.hp_window; ++k) {
        const double approx = hp_rate(config.h0, h, config.gamma_x, res.times[k], reading);
        sup = std::max(sup, std::abs(res.r.r.values[k] - approx));
        peak = std::max(peak, res.r.r.values[k]);
        lowest = std::min(lowest, approx);
      }
      res.hp_comparison.push_back({reading, peak > 0.0 ? sup / peak : INFINITY, lowest});
    }
  }
  return res;
}

std::string run_stem(double j, double h0, double h) {
  const SpinQuantumNumber sj = SpinQuantumNumber::from_value(j);
  return "quench_j" + std::to_string(sj.twice()) + "_h0" + shortest(h0) + "_h" + shortest(h);
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(); }

bool RunManifest::all_ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunEntry& e) { return e.ok; });
}

void write_timeseries_csv(const QuenchResult& r, const std::string& path) {
  std::ostringstream out;
  out << "t,L,log_L,L_gs1";
  if (r.g == 2) out << ",L_gs2,L_sup";
  out << ",r,r_s,r_m,plateau";
  if (r.wehrl) out << ",S_Q,Pi_Q";
  if (r.production_richardson) out << ",Pi_Q_rich";
  if (r.polar) out << ",Pi_polar";
  if (r.hp_rate) out << ",L_hp,r_hp";
  out << "\n";
  for (Index k = 0; k < r.times.size(); ++k) {
    out << fmt17(r.times[k]) << ',' << fmt17(std::exp(r.log_echo[k])) << ',' << fmt17(r.log_echo[k]) << ','
        << fmt17(std::exp(r.log_echo_ground[0][k]));
    if (r.g == 2) {
      out << ',' << fmt17(std::exp(r.log_echo_ground[1][k])) << ',' << fmt17(std::exp((*r.log_echo_superposition)[k]));
    }
    out << ',' << fmt17(r.r.r.values[k]) << ',' << fmt17(r.r_s.r.values[k]) << ',' << fmt17(r.r_m.r.values[k]) << ','
        << (r.r.plateau[static_cast<std::size_t>(k)] ? 1 : 0);
    if (r.wehrl) out << ',' << fmt17(r.wehrl->values[k]) << ',' << fmt17(r.production->values[k]);
    if (r.production_richardson) out << ',' << fmt17((*r.production_richardson)[k]);
    if (r.polar) out << ',' << fmt17((*r.polar)[k]);
    if (r.hp_rate) out << ',' << fmt17((*r.hp_echo)[k]) << ',' << fmt17((*r.hp_rate)[k]);
    out << "\n";
  }
  write_text(path, out.str());
}

void write_detection_json(const QuenchResult& r, const ExperimentConfig& config, const std::string& path) {
  json out = detection_json(r.kinks, r.wehrl ? &r.peaks : nullptr, r.report);
  out["run"] = result_metadata(r, config);
  write_text(path, out.dump(2) + "\n");
}

RunEntry run_quench(const ExperimentConfig& config, double j, double h) {
  RunEntry entry;
  entry.j = j;
  entry.h = h;
  const auto start = std::chrono::steady_clock::now();
  try {
    const QuenchResult res = compute_quench(config, j, h);
    const std::string stem = run_stem(j, config.h0, h);
    const fs::path dir(config.output_dir);
    entry.csv_path = (dir / (stem + ".csv")).string();
    entry.detection_path = (dir / (stem + "_detect.json")).string();
    write_timeseries_csv(res, entry.csv_path);
    write_detection_json(res, config, entry.detection_path);

    if (config.husimi_dump_every > 0 && res.wehrl) {
      const SpinQuantumNumber sj = SpinQuantumNumber::from_value(j);
      auto grid = std::make_shared<const SphereGrid>(build_sphere_grid(res.grid.first, res.grid.second));
      const HusimiEvaluator evaluator(sj, grid);
      const LmgParameters p0 = LmgParameters::make(sj, config.h0, config.gamma_x);
      const SpectralDecomposition spec0 = hermitian_eigendecomposition(build_hamiltonian(p0));
      const GroundMultiplet gm =
          ground_multiplet(spec0, build_angular_momentum(sj), res.degeneracy_threshold);
      const QuantumState psi0 = initial_state(gm, InitialStateChoice::parse(res.initial_state));
      const Propagator prop(std::make_shared<const SpectralDecomposition>(hermitian_eigendecomposition(
                                build_hamiltonian(LmgParameters::make(sj, h, config.gamma_x)))),
                            psi0);
      for (Index k = 0; k < res.times.size(); k += config.husimi_dump_every) {
        const HusimiField q = evaluator.husimi(prop.at(res.times[k]));
        std::ostringstream out;
        out << "theta,phi,Q\n";
        for (Index a = 0; a < grid->n_theta(); ++a) {
          for (Index b = 0; b < grid->n_phi(); ++b) {
            out << fmt17(grid->theta[a]) << ',' << fmt17(grid->phi[b]) << ',' << fmt17(q.values(a, b)) << "\n";
          }
        }
        const std::string path = (dir / (stem + "_husimi_k" + std::to_string(k) + ".csv")).string();
        write_text(path, out.str());
        entry.extra_paths.push_back(path);
      }
    }
    entry.detail_json = result_metadata(res, config).dump();
    entry.ok = true;
  } catch (const ValidationError& e) {
    entry.error_code = 1;
    entry.error = e.what();
  } catch (const NumericalError& e) {
    entry.error_code = 2;
    entry.error = e.what();
  } catch (const std::exception& e) {
    entry.error_code = 2;
    entry.error = e.what();
  }
  entry.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return entry;
}

namespace {

std::vector<std::pair<double, double>> unique_pairs(const ExperimentConfig& config) {
  std::vector<std::pair<double, double>> pairs;
  for (double j : config.j_list) {
    for (double h : config.h_list) {
      const auto p = std::make_pair(j, h);
      if (std::find(pairs.begin(), pairs.end(), p) != pairs.end()) {
        log_warning("sweep: duplicate run (j = " + shortest(j) + ", h = " + shortest(h) + ") dropped");
        continue;
      }
      pairs.push_back(p);
    }
  }
  return pairs;
}

void write_manifest(const ExperimentConfig& config, RunManifest& manifest, const std::string& name) {
  json runs = json::array();
  for (const auto& e : manifest.runs) {
    json item = {{"j", e.j}, {"h", e.h}, {"ok", e.ok}, {"seconds", e.seconds}};
    if (e.ok) {
      item["csv"] = e.csv_path;
      if (!e.detection_path.empty()) item["detection"] = e.detection_path;
      if (!e.extra_paths.empty()) item["husimi_snapshots"] = e.extra_paths;
      if (!e.detail_json.empty()) item["details"] = json::parse(e.detail_json);
    } else {
      item["error_code"] = e.error_code;
      item["error"] = e.error;
    }
    runs.push_back(std::move(item));
  }
  const json doc = {{"version", kVersion}, {"config", config_json(config)}, {"runs", runs}, {"ok", manifest.all_ok()}};
  manifest.manifest_path = (fs::path(config.output_dir) / name).string();
  write_text(manifest.manifest_path, doc.dump(2) + "\n");
}

}  // namespace

RunManifest run_sweep(const ExperimentConfig& config) {
  validate_config(config);
  const auto pairs = unique_pairs(config);
  RunManifest manifest;
  manifest.runs.resize(pairs.size());
  const int outer = std::min<int>(detail::resolve_threads(config.threads), static_cast<int>(pairs.size()));
  ExperimentConfig inner = config;
  if (outer > 1) inner.threads = 1;
  detail::parallel_for(static_cast<std::ptrdiff_t>(pairs.size()), outer, [&](std::ptrdiff_t i) {
    manifest.runs[static_cast<std::size_t>(i)] = run_quench(inner, pairs[i].first, pairs[i].second);
  });
  write_manifest(config, manifest, "manifest.json");
  return manifest;
}

RunManifest run_hp(const ExperimentConfig& config) {
  validate_config(config);
  const RealVector times = uniform_times(config.t_max, config.n_t);
  RunManifest manifest;
  for (const auto& [j, h] : unique_pairs(config)) {
    RunEntry e;
    e.j = j;
    e.h = h;
    try {
      SpinQuantumNumber::from_value(j);
      std::ostringstream out;
      out << "t,L_hp,r_hp\n";
      for (Index k = 0; k < times.size(); ++k) {
        out << fmt17(times[k]) << ','
            << fmt17(hp_loschmidt(j, config.h0, h, config.gamma_x, times[k], config.exponent_reading)) << ','
            << fmt17(hp_rate(config.h0, h, config.gamma_x, times[k], config.exponent_reading)) << "\n";
      }
      e.csv_path = (fs::path(config.output_dir) / ("hp_" + run_stem(j, config.h0, h).substr(7) + ".csv")).string();
      write_text(e.csv_path, out.str());
      const HpParameters hp = hp_parameters(j, h, config.gamma_x);
      e.detail_json = json{{"theta_h", hp.theta_h},
                           {"omega_h", hp.omega_h},
                           {"xi_h", hp.xi_h},
                           {"alpha_h", hp.alpha_h},
                           {"exponent_reading", to_string(config.exponent_reading)}}
                          .dump();
      e.ok = true;
    } catch (const ValidationError& ex) {
      e.error_code = 1;
      e.error = ex.what();
    } catch (const std::exception& ex) {
      e.error_code = 2;
      e.error = ex.what();
    }
    manifest.runs.push_back(std::move(e));
  }
  write_manifest(config, manifest, "hp_manifest.json");
  return manifest;
}

void analyze_csv(const std::string& csv_path, const ExperimentConfig& config, const std::string& out_path) {
  std::ifstream in(csv_path);
  if (!in) throw ValidationError("cannot open '" + csv_path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("'" + csv_path + "' is empty");
  const std::vector<std::string> header = split_csv_line(line);
  auto column = [&](const std::string& name) -> int {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int ct = column("t"), cr = column("r"), cp = column("plateau"), cpi = column("Pi_Q");
  if (ct < 0 || cr < 0) throw ValidationError("'" + csv_path + "' lacks the t or r column");

  std::vector<double> t, r, pi;
  std::vector<bool> plateau;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ValidationError(csv_path + ": line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(header.size()));
    }
    t.push_back(std::strtod(cells[static_cast<std::size_t>(ct)].c_str(), nullptr));
    r.push_back(std::strtod(cells[static_cast<std::size_t>(cr)].c_str(), nullptr));
    plateau.push_back(cp >= 0 && cells[static_cast<std::size_t>(cp)] == "1");
    if (cpi >= 0) pi.push_back(std::strtod(cells[static_cast<std::size_t>(cpi)].c_str(), nullptr));
  }
  const auto to_vec = [](const std::vector<double>& v) {
    return RealVector(Eigen::Map<const RealVector>(v.data(), static_cast<Index>(v.size())));
  };
  RateFunction rf{TimeSeries::make(to_vec(t), to_vec(r)), plateau};
  const KinkDetection kinks = detect_critical_times(rf, config.kinks);
  PeakDetection peaks;
  if (cpi >= 0) peaks = detect_entropy_peaks(TimeSeries::make(to_vec(t), to_vec(pi)), config.peaks);
  const DptReport report =
      pair_and_fit(kinks.times, peaks.times, config.pair_window.value_or(std::numeric_limits<double>::quiet_NaN()));
  json out = detection_json(kinks, cpi >= 0 ? &peaks : nullptr, report);
  out["source"] = csv_path;
  write_text(out_path, out.dump(2) + "\n");
}

}  // namespace lmgdpt
