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

#ifndef QUANTA_INVERSE_HPP
#define QUANTA_INVERSE_HPP

// From a measured law Y(alpha) back to the weight w(eta).
//
// Y = -d log Phi / d alpha fixes Phi up to a multiplicative constant; w then
// follows from Phi by inverting the Laplace transform. Only a finite window
// of real alpha is ever sampled, so the inversion here is a regularised
// nonnegative least-squares fit on an eta grid: w is determined up to the
// constant and up to the resolution the regulariser allows, not uniquely.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "quanta/core.hpp"

namespace quanta {

  /// log Phi on the curve's alpha grid, anchored so that log_phi[0] = 0.
  ///
  /// The true transform is Phi(alpha) = Phi(anchor_alpha) * exp(log_phi); the
  /// factor Phi(anchor_alpha) cannot be recovered from Y and is left to the
  /// caller.
  struct LogPhiSamples {
    std::vector<double> alpha;
    std::vector<double> log_phi;
    double anchor_alpha = 0.0;

    std::vector<double> phi() const;
  };

  /// Cumulative trapezoid integral of -Y d alpha. Throws DomainError for
  /// fewer than 2 samples.
  LogPhiSamples reconstruct_log_phi(const EnergyCurve& curve);

  struct Atom {
    double position = 0.0;
    double mass = 0.0;
    std::size_t first = 0;  ///< first grid node of the window
    std::size_t last = 0;   ///< last grid node of the window (inclusive)
  };

  struct AtomDetectionOptions {
    std::size_t window = 3;     ///< cells per window
    double threshold = 0.05;    ///< fraction of the total mass a window must exceed
  };

  /// Windows of `window` consecutive nodes whose mass exceeds the threshold and
  /// is a local maximum among neighbouring windows become atoms at their
  /// mass-weighted centroid; heavier windows win, atoms never share a node.
  /// Returned in increasing position.
  std::vector<Atom> detect_atoms(std::span<const double> eta_grid, std::span<const double> masses,
                                 const AtomDetectionOptions& options = {});

  struct ReconstructionOptions {
    double eta_max = 6.0;
    std::size_t grid_size = 601;
    double lambda = 1e-6;
    long max_passes = 100000;
    /// Bound on the projected gradient, relative to max |A^T Phi|.
    double kkt_tolerance = 1e-13;
    /// Extra unknowns at geometrically spaced eta beyond eta_max, so that
    /// weight outside the grid is not folded back onto it. 0 disables them.
    std::size_t tail_columns = 64;
    AtomDetectionOptions atoms;
  };

  struct Reconstruction {
    std::vector<double> eta_grid;
    std::vector<double> masses;
    std::vector<Atom> atoms;
    std::vector<double> tail_eta;
    std::vector<double> tail_masses;
    double residual = 0.0;  ///< RMS misfit on the Phi samples
    double lambda = 0.0;
    double kkt_residual = 0.0;
    long passes = 0;
    bool converged = false;

    double step() const { return eta_grid.size() > 1 ? eta_grid[1] - eta_grid[0] : 0.0; }
    double total_mass() const;

    /// Detected atoms as a comb on the grid lattice, every other node as a
    /// piecewise-linear density (node mass / cell width), and each tail node
    /// as a single atom.
    WeightDensity to_density() const;
  };

  /// min over m >= 0 of sum_j (sum_k exp(-alpha_j eta_k) m_k - Phi_j)^2 + lambda |m|^2
  /// by the Lawson-Hanson active-set method, starting from m = 0. The sum over k
  /// runs over the grid and the tail nodes; only grid masses enter atoms and
  /// to_density().
  ///
  /// Hitting max_passes does not throw: the best iterate comes back with
  /// converged = false.
  Reconstruction reconstruct_weight(std::span<const double> alpha, std::span<const double> phi_values,
                                    const ReconstructionOptions& options = {});

  struct SingularityVerdict {
    bool singular = false;
    double limit = 0.0;           ///< extrapolated mass at eta0 -> 0
    double exponent = 0.0;        ///< best-fit q in mass ~ a + b eta0^q
    double reference_mass = 0.0;  ///< mass on [0, max eta0]
    std::vector<double> eta0;
    std::vector<double> mass;
  };

  /// Whether the cumulative mass of w keeps a finite limit as eta0 -> 0, i.e.
  /// whether w holds an atom at zero. Fits a + b eta0^q over the last 4
  /// points, q in {0.5, 1, 2}; singular iff a > 1e-6 * reference_mass.
  SingularityVerdict singularity_test(const WeightDensity& w, std::span<const double> eta0_descending);

  enum class DivergenceClass { Convergent, Divergent, Inconclusive };

  const char* to_string(DivergenceClass c);

  struct DivergenceVerdict {
    DivergenceClass classification = DivergenceClass::Inconclusive;
    std::vector<double> band_integrals;
    std::vector<double> ratios;  ///< band_integrals[j+1] / band_integrals[j]; 0 when both vanish
    std::string diagnostic;
  };

  /// Mean resonator energy as a function of the quantum epsilon = h nu and alpha.
  using EnergyLaw = std::function<double(double epsilon, double alpha)>;

  /// The family obtained by stretching w: w_eps(eta) = w(eta / eps), so that
  /// Y(eps, alpha) = eps * Y_w(eps * alpha). The unit comb stretches into the
  /// comb of spacing eps, a constant density stays constant.
  EnergyLaw dilation_family(WeightDensity w);

  /// Integrates (8 pi nu^2 / c^3) Y(h nu, 1/kT) over the dyadic bands
  /// [2^j, 2^(j+1)] kT/h, j < doublings, and classifies the tail: convergent if
  /// the last 3 band ratios are <= 0.5, divergent if all are >= 0.9.
  DivergenceVerdict total_energy_divergence(const EnergyLaw& law, double temperature, int doublings = 20,
                                            const PhysicalConstants& constants = {});

}

#endif
