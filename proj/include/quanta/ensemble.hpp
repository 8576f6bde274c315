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

#ifndef QUANTA_ENSEMBLE_HPP
#define QUANTA_ENSEMBLE_HPP

#include <vector>

#include "quanta/core.hpp"

namespace quanta {

  struct SpectralPoint {
    double nu = 0.0;
    double u = 0.0;
  };

  /// Planck spectral energy density (8 pi nu^2 / c^3) h nu / (exp(h nu / k T) - 1).
  SpectralPoint planck_u(double nu, double temperature, const PhysicalConstants& constants = {});

  /// Entropy of one resonator with energy quantum epsilon:
  /// S = k ((1 + x) log(1 + x) - x log x), x = U / epsilon; S(0) = 0.
  double planck_entropy(double energy, double epsilon, const PhysicalConstants& constants = {});

  /// dS/dU = (k / epsilon) log(1 + epsilon / U).
  double planck_entropy_slope(double energy, double epsilon, const PhysicalConstants& constants = {});

  /// Temperature from 1/T = dS/dU: T = epsilon / (k log(1 + epsilon / U)).
  /// Inverts the comb law U = epsilon / (exp(epsilon / kT) - 1).
  double wien_temperature(double energy, double epsilon, const PhysicalConstants& constants = {});

  struct ConvolutionOptions {
    /// Continuous parts are convolved on x_i = i * E_total / grid_intervals.
    int grid_intervals = 512;
  };

  /// The n-fold convolution phi(x) of w restricted to x <= E_total, i.e. the
  /// density of the total resonator energy eta_1 + ... + eta_n. Atoms come back
  /// as a comb, continuous weight as a table on the convolution grid.
  WeightDensity phi_convolution(const WeightDensity& w, int n, double e_total,
                                const ConvolutionOptions& options = {});

  /// Surface integrals I, I', I'' and the mean energies they define
  /// (n Y I = I', p X I = I'').
  ///
  /// The common 1/(p-1)! factor is dropped, and the integrals themselves are
  /// kept as logarithms because they overflow a double long before the ratios
  /// lose accuracy; I() etc. may therefore return inf.
  struct MicrocanonicalResult {
    double log_i = 0.0;
    double log_i_prime = 0.0;
    double log_i_second = 0.0;
    double resonator_energy = 0.0;  ///< Y
    double molecule_energy = 0.0;   ///< X

    double i() const;
    double i_prime() const;
    double i_second() const;
  };

  /// Exact finite-(n, p) mean energies: sums over atoms for combs, Simpson
  /// quadrature on the convolution grid for continuous parts.
  /// Throws NoStatesError when nothing lies in [0, E_total].
  MicrocanonicalResult exact_mean_energies(const WeightDensity& w, const EnsembleConfig& config,
                                           const ConvolutionOptions& options = {});

  struct ConvergenceRow {
    int n = 0;
    int p = 0;
    double exact = 0.0;       ///< Y from the microcanonical integrals
    double asymptotic = 0.0;  ///< omega0 from the saddle point
    double error = 0.0;       ///< |exact - asymptotic|
  };

  /// Exact vs. saddle-point resonator energy at fixed beta and r = p/n for each
  /// n. Rows follow n_list order; they are computed concurrently.
  std::vector<ConvergenceRow> convergence_study(const WeightDensity& w, double beta, double r,
                                                const std::vector<int>& n_list,
                                                const ConvolutionOptions& options = {});

}

#endif
