// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Quadrature on the unit sphere, Husimi-Q fields, Wehrl entropy and the
// entropy production rate.
//
// The Husimi amplitude f(theta, phi) = <Omega|psi> = sum_m d_m(theta) e^{i m phi} psi_m
// is a trigonometric polynomial in phi, so each theta ring is evaluated with
// one length-n_phi inverse FFT. Theta nodes are Gauss-Legendre in cos(theta);
// they never coincide with a pole, which the 1/sin(theta) factors of the
// polar rate estimator rely on.

#ifndef LMGDPT_PHASE_SPACE_HPP
#define LMGDPT_PHASE_SPACE_HPP

#include <memory>
#include <utility>
#include <vector>

#include "lmgdpt/lmg.hpp"

namespace lmgdpt {

inline constexpr double kQFloor = 1e-300;

struct SphereGrid {
  RealVector theta;          // ascending in theta
  RealVector theta_weights;  // Gauss-Legendre weights in cos(theta); sum 2
  RealVector phi;            // 2 pi l / n_phi
  double phi_weight;         // 2 pi / n_phi

  Index n_theta() const noexcept { return theta.size(); }
  Index n_phi() const noexcept { return phi.size(); }
  double weight(Index k, Index l) const noexcept { (void)l; return theta_weights[k] * phi_weight; }
};

/// Requires n_theta >= 2 and n_phi >= 2.
SphereGrid build_sphere_grid(Index n_theta, Index n_phi);

/// (2j + 96, 4j + 192).
std::pair<Index, Index> default_grid_size(SpinQuantumNumber j);

struct HusimiField {
  std::shared_ptr<const SphereGrid> grid;
  Eigen::MatrixXd values;  // n_theta x n_phi
  SpinQuantumNumber j;

  /// (2j+1)/(4 pi) sum w Q.
  double normalization() const;
};

struct TimeSeries {
  RealVector times;
  RealVector values;

  /// Throws ValidationError unless lengths agree and times are strictly
  /// increasing and uniform within 1e-12 relative.
  static TimeSeries make(RealVector times, RealVector values);
  Index size() const noexcept { return times.size(); }
  double dt() const noexcept { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// Precomputed theta tables and FFT plans for one (j, grid) pair. Evaluation
/// methods are const and may be called concurrently.
class HusimiEvaluator {
 public:
  HusimiEvaluator(SpinQuantumNumber j, std::shared_ptr<const SphereGrid> grid);
  ~HusimiEvaluator();
  HusimiEvaluator(const HusimiEvaluator&) = delete;
  HusimiEvaluator& operator=(const HusimiEvaluator&) = delete;

  SpinQuantumNumber j() const noexcept { return j_; }
  const SphereGrid& grid() const noexcept { return *grid_; }

  HusimiField husimi(const QuantumState& psi) const;
  /// Throws NumericalError (carrying the measured norm) if the field
  /// normalization misses 1 by more than 1e-6.
  double wehrl(const QuantumState& psi) const;
  /// Polar-coordinate entropy production rate for H = -h Jz - gamma_x/(2j) Jx^2.
  /// The field term drops out. Throws NumericalError when the grid fails the
  /// theta-derivative consistency check.
  double polar_rate(const QuantumState& psi, double gamma_x) const;
  /// d S_Q / dt from Q and dQ/dt = 2 Re(conj(f) g), g the Husimi amplitude of -i H psi.
  double generator_rate(const QuantumState& psi, const ComplexMatrix& h) const;

 private:
  struct Fields;
  Fields amplitudes(const ComplexVector& psi, bool derivatives) const;

  SpinQuantumNumber j_;
  std::shared_ptr<const SphereGrid> grid_;
  Eigen::MatrixXd profile_;      // d_m(theta_k), n_theta x dim
  Eigen::MatrixXd dprofile_;     // d/dtheta d_m(theta_k)
  std::vector<int> bins_;        // FFT bin of each basis index
  void* plan_;
};

HusimiField husimi(const QuantumState& state, const SphereGrid& grid);

/// -(2j+1)/(4 pi) sum w Q ln Q over Q > kQFloor.
double wehrl_entropy(const HusimiField& field);

TimeSeries wehrl_timeseries(const std::vector<QuantumState>& states, const RealVector& times,
                            const SphereGrid& grid, int threads = 0);
/// Streaming variant: states are produced on the fly from the propagator.
TimeSeries wehrl_timeseries(const Propagator& propagator, const RealVector& times,
                            const HusimiEvaluator& evaluator, int threads = 0);

/// Central differences, second-order one-sided at the ends. Needs >= 3 samples.
TimeSeries entropy_production_rate(const TimeSeries& s);

double polar_entropy_rate(const QuantumState& state, const SphereGrid& grid, const LmgParameters& p);

}  // namespace lmgdpt

#endif  // LMGDPT_PHASE_SPACE_HPP
