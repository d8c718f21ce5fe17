// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "lmgdpt/phase_space.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include <fftw3.h>
#include <gsl/gsl_integration.h>

#include "lmgdpt/error.hpp"
#include "parallel.hpp"

namespace lmgdpt {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr double kNormTolerance = 1e-6;
constexpr double kDerivativeTolerance = 1e-6;

double prefactor(SpinQuantumNumber j) { return (2.0 * j.value() + 1.0) / (4.0 * M_PI); }

}  // namespace

SphereGrid build_sphere_grid(Index n_theta, Index n_phi) {
  if (n_theta < 2 || n_phi < 2) throw ValidationError("sphere grid: n_theta and n_phi must be at least 2");
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n_theta));
  if (table == nullptr) throw NumericalError("sphere grid: Gauss-Legendre table allocation failed", n_theta);
  SphereGrid g;
  g.theta.resize(n_theta);
  g.theta_weights.resize(n_theta);
  for (Index i = 0; i < n_theta; ++i) {
    double x = 0.0, w = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &x, &w, table);
    // GSL lists nodes in ascending x; store ascending theta = acos(x).
    g.theta[n_theta - 1 - i] = std::acos(x);
    g.theta_weights[n_theta - 1 - i] = w;
  }
  gsl_integration_glfixed_table_free(table);
  g.phi.resize(n_phi);
  for (Index l = 0; l < n_phi; ++l) g.phi[l] = 2.0 * M_PI * static_cast<double>(l) / static_cast<double>(n_phi);
  g.phi_weight = 2.0 * M_PI / static_cast<double>(n_phi);
  return g;
}

std::pair<Index, Index> default_grid_size(SpinQuantumNumber j) {
  // 2j + 8 integrates Q exactly, but Q ln Q is not smooth at the zeros of Q
  // and converges only algebraically; the fixed margin keeps scrambled states
  // converged to ~1e-6 at small j.
  const Index n_theta = j.twice() + 96;
  return {n_theta, 2 * n_theta};
}

double HusimiField::normalization() const {
  double sum = 0.0;
  for (Index k = 0; k < values.rows(); ++k) sum += grid->theta_weights[k] * values.row(k).sum();
  return prefactor(j) * grid->phi_weight * sum;
}

TimeSeries TimeSeries::make(RealVector times, RealVector values) {
  if (times.size() != values.size()) throw ValidationError("time series: times and values differ in length");
  const Index n = times.size();
  if (n >= 2) {
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw ValidationError("time series: times must be strictly increasing");
    const double tol = 1e-12 * std::max({std::abs(times[0]), std::abs(times[n - 1]), dt});
    for (Index k = 1; k < n; ++k) {
      if (std::abs(times[k] - times[k - 1] - dt) > tol) {
        throw ValidationError("time series: times are not uniformly spaced");
      }
    }
  }
  return TimeSeries{std::move(times), std::move(values)};
}

struct HusimiEvaluator::Fields {
  Eigen::MatrixXcd f;
  Eigen::MatrixXcd f_theta;
  Eigen::MatrixXcd f_phi;
};

HusimiEvaluator::HusimiEvaluator(SpinQuantumNumber j, std::shared_ptr<const SphereGrid> grid)
    : j_(j), grid_(std::move(grid)), plan_(nullptr) {
  if (!grid_) throw ValidationError("husimi: null grid");
  const Index nt = grid_->n_theta();
  const Index dim = j.dim();
  const std::vector<double> hlb = half_log_binomials(j);
  profile_.resize(nt, dim);
  dprofile_.resize(nt, dim);
  for (Index k = 0; k < nt; ++k) {
    const double th = grid_->theta[k];
    const RealVector d = coherent_profile(j, th, hlb);
    const double tan_half = std::tan(0.5 * th);
    for (Index i = 0; i < dim; ++i) {
      const double m = j.m_at(i);
      profile_(k, i) = d[i];
      dprofile_(k, i) = d[i] * (-0.5 * (j.value() + m) * tan_half + 0.5 * (j.value() - m) / tan_half);
    }
  }
  // e^{i m phi} = e^{i s phi} e^{i (m - s) phi} with s = j - floor(j); the
  // common factor has unit modulus and cancels in every bilinear f* g below.
  const Index nphi = grid_->n_phi();
  const double shift = j.value() - std::floor(j.value());
  bins_.resize(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) {
    const long m_int = std::lround(j.m_at(i) - shift);
    bins_[static_cast<std::size_t>(i)] = static_cast<int>(((m_int % nphi) + nphi) % nphi);
  }
  std::vector<fftw_complex> scratch(static_cast<std::size_t>(nphi));
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(nphi), scratch.data(), scratch.data(), FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan_ == nullptr) throw NumericalError("husimi: FFT plan creation failed", static_cast<double>(nphi));
}

HusimiEvaluator::~HusimiEvaluator() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

HusimiEvaluator::Fields HusimiEvaluator::amplitudes(const ComplexVector& psi, bool derivatives) const {
  if (psi.size() != j_.dim()) throw ValidationError("husimi: state dimension does not match j");
  const Index nt = grid_->n_theta();
  const Index nphi = grid_->n_phi();
  const Index dim = j_.dim();
  const auto plan = static_cast<fftw_plan>(plan_);
  std::vector<Complex> buf(static_cast<std::size_t>(nphi));
  auto ring = [&](auto coefficient, Eigen::MatrixXcd& out, Index k) {
    std::fill(buf.begin(), buf.end(), Complex(0.0, 0.0));
    for (Index i = 0; i < dim; ++i) buf[static_cast<std::size_t>(bins_[static_cast<std::size_t>(i)])] += coefficient(i);
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plan, data, data);
    for (Index l = 0; l < nphi; ++l) out(k, l) = buf[static_cast<std::size_t>(l)];
  };

  Fields fields;
  fields.f.resize(nt, nphi);
  if (derivatives) {
    fields.f_theta.resize(nt, nphi);
    fields.f_phi.resize(nt, nphi);
  }
  for (Index k = 0; k < nt; ++k) {
    ring([&](Index i) { return profile_(k, i) * psi[i]; }, fields.f, k);
    if (derivatives) {
      ring([&](Index i) { return dprofile_(k, i) * psi[i]; }, fields.f_theta, k);
      ring([&](Index i) { return Complex(0.0, j_.m_at(i)) * profile_(k, i) * psi[i]; }, fields.f_phi, k);
    }
  }
  return fields;
}

HusimiField HusimiEvaluator::husimi(const QuantumState& psi) const {
  const Fields fields = amplitudes(psi.amplitudes(), false);
  return HusimiField{grid_, fields.f.cwiseAbs2(), j_};
}

double HusimiEvaluator::wehrl(const QuantumState& psi) const { return wehrl_entropy(husimi(psi)); }

double HusimiEvaluator::polar_rate(const QuantumState& psi, double gamma_x) const {
  const Fields fields = amplitudes(psi.amplitudes(), true);
  const SphereGrid& g = *grid_;
  const double two_j = 2.0 * j_.value();
  Complex total(0.0, 0.0);
  double theta_sum = 0.0, cot_sum = 0.0, scale = 0.0;
  for (Index k = 0; k < g.n_theta(); ++k) {
    const double th = g.theta[k];
    const double c2 = std::pow(std::cos(0.5 * th), 2);
    const double s2 = std::pow(std::sin(0.5 * th), 2);
    const double tan_half = std::tan(0.5 * th);
    const double sin_th = std::sin(th);
    const double cos_th = std::cos(th);
    Complex ring(0.0, 0.0);
    double ring_theta = 0.0, ring_cot = 0.0, ring_scale = 0.0;
    for (Index l = 0; l < g.n_phi(); ++l) {
      const Complex f = fields.f(k, l);
      const double q = std::norm(f);
      const double q_theta = 2.0 * std::real(std::conj(f) * fields.f_theta(k, l));
      const double q_phi = 2.0 * std::real(std::conj(f) * fields.f_phi(k, l));
      ring_theta += sin_th * q_theta;
      ring_cot += 2.0 * cos_th * q;
      ring_scale += std::abs(sin_th * q_theta) + std::abs(2.0 * cos_th * q);
      if (q <= kQFloor) continue;
      const Complex e = std::polar(1.0, -g.phi[l]);
      const Complex a = e * c2 * Complex(two_j * tan_half * q + q_theta, -q_phi / sin_th);
      const Complex b = std::conj(e) * s2 * Complex(two_j / tan_half * q - q_theta, q_phi / sin_th);
      const Complex sum = a + b;
      ring += sum * sum / q;
    }
    total += g.theta_weights[k] * ring;
    theta_sum += g.theta_weights[k] * ring_theta;
    cot_sum += g.theta_weights[k] * ring_cot;
    scale += g.theta_weights[k] * ring_scale;
  }
  // Integration by parts in u = cos(theta): int (sin(theta) dQ/dtheta + 2 u Q) du dphi = 0.
  // The integrand is a polynomial the grid integrates exactly once it resolves Q.
  const double mismatch = std::abs(theta_sum + cot_sum);
  if (mismatch > kDerivativeTolerance * scale + 1e-300) {
    std::ostringstream msg;
    msg << "polar rate: theta-derivative consistency check failed (relative mismatch " << mismatch / scale
        << "); refine the grid";
    throw NumericalError(msg.str(), mismatch / scale);
  }
  return (2.0 * j_.value() + 1.0) / (16.0 * M_PI * j_.value()) * gamma_x * g.phi_weight * total.imag();
}

double HusimiEvaluator::generator_rate(const QuantumState& psi, const ComplexMatrix& h) const {
  if (h.rows() != j_.dim() || h.cols() != j_.dim()) throw ValidationError("husimi: Hamiltonian dimension mismatch");
  const Fields fields = amplitudes(psi.amplitudes(), false);
  const ComplexVector dpsi = Complex(0.0, -1.0) * (h * psi.amplitudes());
  const Fields dfields = amplitudes(dpsi, false);
  const SphereGrid& g = *grid_;
  double total = 0.0;
  for (Index k = 0; k < g.n_theta(); ++k) {
    double ring = 0.0;
    for (Index l = 0; l < g.n_phi(); ++l) {
      const double q = std::norm(fields.f(k, l));
      const double dq = 2.0 * std::real(std::conj(fields.f(k, l)) * dfields.f(k, l));
      ring += q > kQFloor ? dq * (std::log(q) + 1.0) : dq;
    }
    total += g.theta_weights[k] * ring;
  }
  return -prefactor(j_) * g.phi_weight * total;
}

HusimiField husimi(const QuantumState& state, const SphereGrid& grid) {
  const SpinQuantumNumber j = SpinQuantumNumber::from_twice(static_cast<int>(state.dim() - 1));
  const HusimiEvaluator evaluator(j, std::make_shared<const SphereGrid>(grid));
  return evaluator.husimi(state);
}

double wehrl_entropy(const HusimiField& field) {
  const double norm = field.normalization();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    std::ostringstream msg;
    msg << "wehrl: Husimi normalization " << norm << " misses 1 by more than " << kNormTolerance
        << "; refine the grid";
    throw NumericalError(msg.str(), norm);
  }
  const SphereGrid& g = *field.grid;
  double sum = 0.0;
  for (Index k = 0; k < field.values.rows(); ++k) {
    double ring = 0.0;
    for (Index l = 0; l < field.values.cols(); ++l) {
      const double q = field.values(k, l);
      if (q > kQFloor) ring += q * std::log(q);
    }
    sum += g.theta_weights[k] * ring;
  }
  return -prefactor(field.j) * g.phi_weight * sum;
}

TimeSeries wehrl_timeseries(const std::vector<QuantumState>& states, const RealVector& times,
                            const SphereGrid& grid, int threads) {
  if (static_cast<Index>(states.size()) != times.size()) {
    throw ValidationError("wehrl_timeseries: states and times differ in length");
  }
  if (states.empty()) return TimeSeries::make(times, RealVector());
  const SpinQuantumNumber j = SpinQuantumNumber::from_twice(static_cast<int>(states.front().dim() - 1));
  const HusimiEvaluator evaluator(j, std::make_shared<const SphereGrid>(grid));
  RealVector values(times.size());
  detail::parallel_for(times.size(), threads, [&](std::ptrdiff_t k) {
    values[k] = evaluator.wehrl(states[static_cast<std::size_t>(k)]);
  });
  return TimeSeries::make(times, std::move(values));
}

TimeSeries wehrl_timeseries(const Propagator& propagator, const RealVector& times, const HusimiEvaluator& evaluator,
                            int threads) {
  RealVector values(times.size());
  detail::parallel_for(times.size(), threads,
                       [&](std::ptrdiff_t k) { values[k] = evaluator.wehrl(propagator.at(times[k])); });
  return TimeSeries::make(times, std::move(values));
}

TimeSeries entropy_production_rate(const TimeSeries& s) {
  const Index n = s.size();
  if (n < 3) throw ValidationError("entropy_production_rate: needs at least 3 samples");
  const double dt = s.dt();
  const RealVector& v = s.values;
  RealVector out(n);
  out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt);
  for (Index k = 1; k + 1 < n; ++k) out[k] = (v[k + 1] - v[k - 1]) / (2.0 * dt);
  out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dt);
  return TimeSeries{s.times, std::move(out)};
}

double polar_entropy_rate(const QuantumState& state, const SphereGrid& grid, const LmgParameters& p) {
  if (state.dim() != p.j.dim()) throw ValidationError("polar_entropy_rate: state dimension does not match j");
  const HusimiEvaluator evaluator(p.j, std::make_shared<const SphereGrid>(grid));
  return evaluator.polar_rate(state, p.gamma_x);
}

}  // namespace lmgdpt
