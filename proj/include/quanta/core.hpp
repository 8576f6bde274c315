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

#ifndef QUANTA_CORE_HPP
#define QUANTA_CORE_HPP

// Energy-weight densities w(eta) of a single resonator, the ensemble
// parameters of the microcanonical surface and the sampled energy curves
// shared by the forward and inverse computations.
//
// Naming note: the classical text uses h both for the total energy of the
// surface and for Planck's constant, and k both for Boltzmann's constant and
// for the molecule/resonator ratio p/n. Here the surface energy is
// EnsembleConfig::e_total, the ratio is EnsembleConfig::ratio(), and k_B / h
// only ever mean the physical constants.

#include <cstddef>
#include <string>
#include <variant>
#include <utility>
#include <vector>

namespace quanta {

  /// Physical constants; reduced units (all ones) unless stated otherwise.
  struct PhysicalConstants {
    double k_boltzmann = 1.0;
    double h_planck = 1.0;
    double c_light = 1.0;

    bool valid() const { return k_boltzmann > 0 && h_planck > 0 && c_light > 0; }
  };

  /// Point masses on the lattice eta = k*epsilon, k = 0, 1, 2, ...
  ///
  /// masses[k] sits at k*epsilon. When tail_mass > 0 the lattice continues
  /// past the listed masses: every atom k >= masses.size() carries tail_mass.
  /// The infinite unit comb is {epsilon, {1}, 1}.
  struct CombPart {
    double epsilon = 1.0;
    std::vector<double> masses;
    double tail_mass = 0.0;

    bool infinite() const { return tail_mass > 0; }
    /// Mass of atom k (0 for k beyond a finite comb).
    double mass_at(std::size_t k) const;
  };

  /// Piecewise-linear density through (eta[i], value[i]), zero past the last knot.
  struct TablePart {
    std::vector<double> eta;
    std::vector<double> value;
  };

  enum class AnalyticShape {
    Constant,     ///< w = c on [0, inf)
    Exponential,  ///< w = c exp(-eta)
    InverseSqrt,  ///< w = c / sqrt(eta) on (0, 1], zero beyond
  };

  /// Closed-form reference densities. They extend to infinity (or blow up at
  /// zero), which a table cannot represent; used as oracles.
  struct AnalyticPart {
    AnalyticShape shape = AnalyticShape::Constant;
    double coefficient = 1.0;
  };

  using DensityPart = std::variant<CombPart, TablePart, AnalyticPart>;

  enum class DensityKind { Comb, Tabulated, Analytic, Mixture };

  const char* to_string(DensityKind kind);

  /// The weight w(eta) of one resonator: a sum of parts. The transform, the
  /// cumulative mass and every other linear functional act part by part.
  class WeightDensity {
  public:
    WeightDensity() = default;
    explicit WeightDensity(std::vector<DensityPart> parts) : parts_(std::move(parts)) {}

    static WeightDensity comb(double epsilon, std::vector<double> masses, double tail_mass = 0.0);
    /// All atoms of mass 1 at k*epsilon, k = 0, 1, 2, ... without end.
    static WeightDensity unit_comb(double epsilon);
    static WeightDensity tabulated(std::vector<double> eta, std::vector<double> value);
    static WeightDensity constant(double coefficient = 1.0);
    static WeightDensity exponential(double coefficient = 1.0);
    static WeightDensity inverse_sqrt(double coefficient = 1.0);
    static WeightDensity mixture(const WeightDensity& a, const WeightDensity& b);

    DensityKind kind() const;
    const std::vector<DensityPart>& parts() const { return parts_; }

    /// c * w.
    WeightDensity scaled(double c) const;

    /// Smallest eta carrying weight (position of the lowest atom with positive
    /// mass, or the start of the continuous support). Zero for an empty density.
    double support_start() const;

  private:
    std::vector<DensityPart> parts_;
  };

  struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
  };

  ValidationReport validate(const WeightDensity& w);

  /// Integral of w over [0, eta0]; atoms at eta <= eta0 count in full.
  double cumulative_mass(const WeightDensity& w, double eta0);

  /// Surface parameters: n resonators, p molecules, total energy e_total.
  struct EnsembleConfig {
    int n = 1;
    int p = 1;
    double e_total = 1.0;

    /// E_total / n, the energy per resonator on the renormalised surface.
    double beta() const { return e_total / n; }
    /// p / n; the "k" of the second saddle equation in the classical text.
    double ratio() const { return static_cast<double>(p) / n; }

    static EnsembleConfig from_beta(int n, int p, double beta) { return {n, p, n * beta}; }
  };

  /// Throws DomainError unless n >= 1, p >= 1, e_total > 0.
  void check(const EnsembleConfig& config);

  /// Strictly increasing positive inverse-energy grid.
  class AlphaGrid {
  public:
    explicit AlphaGrid(std::vector<double> alpha);
    static AlphaGrid linear(double lo, double hi, std::size_t count);
    static AlphaGrid logarithmic(double lo, double hi, std::size_t count);

    const std::vector<double>& values() const& { return alpha_; }
    std::vector<double> values() && { return std::move(alpha_); }
    std::size_t size() const { return alpha_.size(); }
    double operator[](std::size_t i) const { return alpha_[i]; }

  private:
    std::vector<double> alpha_;
  };

  /// Mean resonator energy Y sampled against inverse temperature alpha.
  class EnergyCurve {
  public:
    /// Rejects unsorted or non-positive alpha, negative Y, and Y increasing in
    /// alpha by more than kMonotoneTolerance.
    EnergyCurve(std::vector<double> alpha, std::vector<double> energy);

    static constexpr double kMonotoneTolerance = 1e-9;

    const std::vector<double>& alpha() const { return alpha_; }
    const std::vector<double>& energy() const { return energy_; }
    std::size_t size() const { return alpha_.size(); }

  private:
    std::vector<double> alpha_;
    std::vector<double> energy_;
  };

}

#endif
