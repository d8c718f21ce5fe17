// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "lmgdpt/dpt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "lmgdpt/error.hpp"

namespace lmgdpt {

namespace {

// Second differences below this (in rate units) are rounding noise.
constexpr double kCurvatureNoise = 1e-9;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

double log_sum_exp(const std::vector<RealVector>& logs, Index k) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& l : logs) top = std::max(top, l[k]);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (const auto& l : logs) sum += std::exp(l[k] - top);
  return top + std::log(sum);
}

RateFunction from_logs(const RealVector& times, const RealVector& log_echo, double n, double log_floor) {
  if (!(n > 0.0)) throw ValidationError("rate function: system size must be positive");
  RateFunction out{TimeSeries::make(times, -log_echo / n), std::vector<bool>(static_cast<std::size_t>(times.size()))};
  for (Index k = 0; k < times.size(); ++k) {
    out.plateau[static_cast<std::size_t>(k)] = !(log_echo[k] >= log_floor);
  }
  return out;
}

}  // namespace

std::string to_string(RateReading r) { return r == RateReading::max_echo ? "max_echo" : "min_echo"; }

RateReading parse_rate_reading(const std::string& text) {
  if (text == "max_echo") return RateReading::max_echo;
  if (text == "min_echo") return RateReading::min_echo;
  throw ValidationError("rate_reading: expected max_echo or min_echo, got '" + text + "'");
}

TimeSeries loschmidt_echo(const QuantumState& psi0, const SpectralDecomposition& spec, const RealVector& times) {
  if (psi0.dim() != spec.dim()) throw ValidationError("loschmidt_echo: state and spectrum dimensions differ");
  const RealVector w = (spec.eigenvectors.adjoint() * psi0.amplitudes()).cwiseAbs2();
  RealVector values(times.size());
  for (Index k = 0; k < times.size(); ++k) {
    Complex a(0.0, 0.0);
    for (Index n = 0; n < w.size(); ++n) a += w[n] * std::polar(1.0, -spec.eigenvalues[n] * times[k]);
    values[k] = std::norm(a);
  }
  return TimeSeries::make(times, std::move(values));
}

Index RateFunction::flagged() const { return std::count(plateau.begin(), plateau.end(), true); }

RateFunction rate_function(const TimeSeries& echo, double n, double floor) {
  RealVector logs(echo.size());
  for (Index k = 0; k < echo.size(); ++k) {
    if (echo.values[k] < 0.0) throw ValidationError("rate_function: negative echo value");
    // An exact zero stays finite; it is below the floor and flagged anyway.
    logs[k] = std::log(std::max(echo.values[k], std::numeric_limits<double>::denorm_min()));
  }
  return from_logs(echo.times, logs, n, std::log(floor));
}

RateFunction rate_from_log_echo(const RealVector& times, const RealVector& log_echo, double n, double log_floor) {
  if (times.size() != log_echo.size()) throw ValidationError("rate function: times and echo differ in length");
  return from_logs(times, log_echo, n, log_floor);
}

void EchoBundle::validate() const {
  if (log_echoes.empty()) throw ValidationError("echo bundle: no ground-state echoes");
  for (const auto& l : log_echoes) {
    if (l.size() != times.size()) throw ValidationError("echo bundle: echo length differs from the time grid");
  }
}

RateFunction net_rate(const EchoBundle& bundle, double n) {
  bundle.validate();
  RealVector logs(bundle.times.size());
  for (Index k = 0; k < logs.size(); ++k) logs[k] = log_sum_exp(bundle.log_echoes, k);
  return from_logs(bundle.times, logs, n, bundle.log_floor);
}

RateFunction min_rate(const EchoBundle& bundle, double n, RateReading reading) {
  bundle.validate();
  RealVector logs(bundle.times.size());
  for (Index k = 0; k < logs.size(); ++k) {
    double pick = bundle.log_echoes.front()[k];
    for (const auto& l : bundle.log_echoes) {
      pick = reading == RateReading::max_echo ? std::max(pick, l[k]) : std::min(pick, l[k]);
    }
    logs[k] = pick;
  }
  return from_logs(bundle.times, logs, n, bundle.log_floor);
}

KinkDetection detect_critical_times(const RateFunction& r, const KinkOptions& options) {
  KinkDetection out;
  out.t_merge_used = options.t_merge;
  const Index n = r.r.size();
  if (n < 3) return out;
  const double dt = r.r.dt();
  const RealVector& v = r.r.values;
  auto usable = [&](Index k) { return !r.plateau[static_cast<std::size_t>(k)] && std::isfinite(v[k]); };

  std::vector<double> curvature(static_cast<std::size_t>(n), -1.0);
  std::vector<double> valid;
  for (Index k = 1; k + 1 < n; ++k) {
    if (!(usable(k - 1) && usable(k) && usable(k + 1))) continue;
    const double c = std::abs(v[k - 1] - 2.0 * v[k] + v[k + 1]) / (dt * dt);
    curvature[static_cast<std::size_t>(k)] = c;
    valid.push_back(c);
  }
  out.kappa_min_used = std::isfinite(options.kappa_min) ? options.kappa_min : options.kappa_factor * median(valid);

  struct Candidate {
    double t, value, sharpness;
  };
  std::vector<Candidate> candidates;
  for (Index k = 1; k + 1 < n; ++k) {
    const double c = curvature[static_cast<std::size_t>(k)];
    if (c < 0.0) continue;
    if (!(v[k] > v[k - 1] && v[k] >= v[k + 1])) continue;
    if (c <= out.kappa_min_used || c * dt * dt <= kCurvatureNoise) continue;
    candidates.push_back({r.r.times[k], v[k], c});
  }

  for (std::size_t i = 0; i < candidates.size();) {
    std::size_t end = i + 1;
    while (end < candidates.size() && candidates[end].t - candidates[end - 1].t < options.t_merge) ++end;
    std::size_t best = i;
    double sharp = 0.0;
    for (std::size_t c = i; c < end; ++c) {
      if (candidates[c].value > candidates[best].value) best = c;
      sharp = std::max(sharp, candidates[c].sharpness);
    }
    out.times.push_back(candidates[best].t);
    out.sharpness.push_back(sharp);
    i = end;
  }
  return out;
}

PeakDetection detect_entropy_peaks(const TimeSeries& pi, const PeakOptions& options) {
  PeakDetection out;
  out.t_merge_used = options.t_merge;
  const Index n = pi.size();
  if (n < 3) return out;
  const RealVector& x = pi.values;
  const double range = x.maxCoeff() - x.minCoeff();
  out.prominence_used = std::isfinite(options.prominence) ? options.prominence : options.prominence_fraction * range;

  struct Candidate {
    double t, value, prominence;
  };
  std::vector<Candidate> candidates;
  Index i = 1;
  while (i + 1 < n) {
    if (!(x[i - 1] < x[i])) {
      ++i;
      continue;
    }
    Index ahead = i + 1;
    while (ahead < n - 1 && x[ahead] == x[i]) ++ahead;
    if (x[ahead] < x[i]) {
      double left_min = x[i];
      for (Index k = i - 1; k >= 0 && x[k] <= x[i]; --k) left_min = std::min(left_min, x[k]);
      double right_min = x[i];
      for (Index k = ahead; k < n && x[k] <= x[i]; ++k) right_min = std::min(right_min, x[k]);
      const double prom = x[i] - std::max(left_min, right_min);
      if (prom > 0.0 && prom >= out.prominence_used) {
        const double t = 0.5 * (pi.times[i] + pi.times[ahead - 1]);
        candidates.push_back({t, x[i], prom});
      }
    }
    i = ahead;
  }

  for (std::size_t c = 0; c < candidates.size();) {
    std::size_t end = c + 1;
    while (end < candidates.size() && candidates[end].t - candidates[end - 1].t < options.t_merge) ++end;
    std::size_t best = c;
    for (std::size_t k = c; k < end; ++k) {
      if (candidates[k].value > candidates[best].value) best = k;
    }
    out.times.push_back(candidates[best].t);
    out.prominences.push_back(candidates[best].prominence);
    c = end;
  }
  return out;
}

DptReport pair_and_fit(const std::vector<double>& t_c, const std::vector<double>& t_m, double w_pair) {
  DptReport rep;
  rep.critical_times = t_c;
  rep.entropy_peak_times = t_m;
  std::vector<double> sorted_c = t_c;
  std::sort(sorted_c.begin(), sorted_c.end());
  if (std::isfinite(w_pair)) {
    rep.pair_window = w_pair;
  } else if (sorted_c.size() >= 2) {
    std::vector<double> gaps;
    for (std::size_t i = 1; i < sorted_c.size(); ++i) gaps.push_back(sorted_c[i] - sorted_c[i - 1]);
    rep.pair_window = 0.5 * median(gaps);
  } else {
    rep.pair_window = std::numeric_limits<double>::infinity();
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t a = 0; a < t_c.size(); ++a) {
    for (std::size_t b = 0; b < t_m.size(); ++b) {
      const double d = std::abs(t_c[a] - t_m[b]);
      if (d <= rep.pair_window) candidates.emplace_back(d, a, b);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<bool> used_c(t_c.size(), false), used_m(t_m.size(), false);
  for (const auto& [d, a, b] : candidates) {
    if (used_c[a] || used_m[b]) continue;
    used_c[a] = used_m[b] = true;
    rep.pairs.emplace_back(t_c[a], t_m[b]);
  }
  std::sort(rep.pairs.begin(), rep.pairs.end());

  const std::size_t np = rep.pairs.size();
  if (np >= 2) {
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : rep.pairs) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(np);
    my /= static_cast<double>(np);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& [x, y] : rep.pairs) {
      sxx += (x - mx) * (x - mx);
      syy += (y - my) * (y - my);
      sxy += (x - mx) * (y - my);
    }
    if (sxx > 0.0) {
      const double slope = sxy / sxx;
      const double corr = syy > 0.0 ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
      rep.fit = LinearFit{slope, my - slope * mx, corr};
    }
  }
  return rep;
}

}  // namespace lmgdpt
