// Copyright 2026 The quanta Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUANTA_TRANSFORM_HPP
#define QUANTA_TRANSFORM_HPP

#include "quanta/core.hpp"

namespace quanta {

  /// First two moments of w(eta) exp(-alpha eta), factored to survive underflow:
  ///
  ///   Phi(alpha)   =  exp(-alpha * shift) * m0
  ///   -Phi'(alpha) =  exp(-alpha * shift) * m1
  ///
  /// with shift = w.support_start().
  struct LaplaceMoments {
    double shift = 0.0;
    double m0 = 0.0;
    double m1 = 0.0;

    double log_phi(double alpha) const;
    /// -Phi'/Phi, the mean of the tilted distribution.
    double mean() const { return m1 / m0; }
  };

  /// Throws DomainError for alpha <= 0.
  LaplaceMoments laplace_moments(const WeightDensity& w, double alpha);

  /// Phi(alpha) = integral of w(eta) exp(-alpha eta) over [0, inf).
  double phi(const WeightDensity& w, double alpha);
  double log_phi(const WeightDensity& w, double alpha);
  /// Phi'(alpha) from the kernel -eta exp(-alpha eta).
  double phi_derivative(const WeightDensity& w, double alpha);

  /// Y(alpha) = -Phi'(alpha)/Phi(alpha). Throws DegenerateDensityError if Phi = 0.
  double mean_resonator_energy(const WeightDensity& w, double alpha);

  struct ThetaPoint {
    double alpha = 0.0;
    double omega = 0.0;
    double value = 0.0;
    double log_value = 0.0;
  };

  /// Theta(alpha, omega) = Phi(alpha) exp(alpha omega) (beta - omega)^(p/n).
  /// Throws DomainError unless alpha > 0 and omega < beta.
  ThetaPoint theta(const WeightDensity& w, double alpha, double omega, const EnsembleConfig& config);

  /// Stationary point of log Theta.
  ///
  /// The two equations are Phi'(alpha0)/Phi(alpha0) + omega0 = 0 and
  /// alpha0 - r/(beta - omega0) = 0 with r = p/n; the ratio r is what makes
  /// n Y + p X = n beta and X = 1/alpha0 hold together.
  struct SaddleSolution {
    double alpha0 = 0.0;
    double omega0 = 0.0;
    double energy_residual = 0.0;  ///< Y(alpha0) - omega0
    double alpha_residual = 0.0;   ///< alpha0 - r/(beta - omega0)
    int iterations = 0;
  };

  struct SaddleOptions {
    int max_iterations = 200;
    double tolerance = 1e-12;
  };

  /// Bisection on g(omega) = Y(r/(beta - omega)) - omega over (0, beta).
  /// Throws NoSaddleError if g has no sign change or the cap is hit.
  SaddleSolution solve_saddle(const WeightDensity& w, const EnsembleConfig& config,
                              const SaddleOptions& options = {});

  struct AsymptoticEnergies {
    double resonator = 0.0;  ///< Y
    double molecule = 0.0;   ///< X
  };

  /// Y = omega0, X = (beta - omega0)/r.
  AsymptoticEnergies asymptotic_energies(const SaddleSolution& s, const EnsembleConfig& config);

}

#endif
