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

#include "quanta/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "numeric.hpp"
#include "quanta/errors.hpp"
#include "quanta/transform.hpp"

namespace quanta {

  std::vector<double> LogPhiSamples::phi() const {
    std::vector<double> out(log_phi.size());
    std::transform(log_phi.begin(), log_phi.end(), out.begin(), [](double l) { return std::exp(l); });
    return out;
  }

  LogPhiSamples reconstruct_log_phi(const EnergyCurve& curve) {
    if (curve.size() < 2)
      throw DomainError("reconstruct_log_phi: need at least 2 samples");
    const auto& a = curve.alpha();
    const auto& y = curve.energy();
    LogPhiSamples out;
    out.alpha = a;
    out.anchor_alpha = a.front();
    out.log_phi.assign(a.size(), 0.0);
    detail::CompensatedSum acc;
    for (std::size_t j = 1; j < a.size(); ++j) {
      acc.add(-0.5 * (y[j] + y[j - 1]) * (a[j] - a[j - 1]));
      out.log_phi[j] = acc.value();
    }
    return out;
  }

  std::vector<Atom> detect_atoms(std::span<const double> eta_grid, std::span<const double> masses,
                                 const AtomDetectionOptions& options) {
    if (eta_grid.size() != masses.size())
      throw DomainError("detect_atoms: grid and masses differ in length");
    const std::size_t n = masses.size();
    const std::size_t width = std::max<std::size_t>(1, std::min(options.window, n));
    std::vector<Atom> atoms;
    if (n == 0)
      return atoms;
    const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
    if (!(total > 0))
      return atoms;

    const std::size_t count = n - width + 1;
    std::vector<double> window(count, 0.0);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t k = i; k < i + width; ++k)
        window[i] += masses[k];

    const double threshold = options.threshold * total;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < count; ++i) {
      if (!(window[i] > threshold))
        continue;
      if (i > 0 && window[i - 1] > window[i])
        continue;
      if (i + 1 < count && window[i + 1] > window[i])
        continue;
      candidates.push_back(i);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t l, std::size_t r) { return window[l] > window[r]; });

    std::vector<bool> taken(n, false);
    for (std::size_t i : candidates) {
      bool free = true;
      for (std::size_t k = i; k < i + width; ++k)
        free = free && !taken[k];
      if (!free)
        continue;
      double moment = 0.0;
      for (std::size_t k = i; k < i + width; ++k) {
        taken[k] = true;
        moment += masses[k] * eta_grid[k];
      }
      atoms.push_back({moment / window[i], window[i], i, i + width - 1});
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.position < r.position; });
    return atoms;
  }

  double Reconstruction::total_mass() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

  WeightDensity Reconstruction::to_density() const {
    const std::size_t n = masses.size();
    const double h = step();
    if (n < 2 || !(h > 0))
      throw DomainError("reconstruction: grid too small for a density");
    std::vector<double> rest = masses;
    std::vector<double> comb;
    for (const Atom& atom : atoms) {
      const auto node = static_cast<std::size_t>(std::clamp(std::lround(atom.position / h), 0L, long(n) - 1));
      if (comb.size() <= node)
        comb.resize(node + 1, 0.0);
      comb[node] += atom.mass;
      for (std::size_t k = atom.first; k <= atom.last; ++k)
        rest[k] = 0.0;
    }
    std::vector<double> value(n);
    for (std::size_t k = 0; k < n; ++k)
      value[k] = rest[k] / (k == 0 || k + 1 == n ? 0.5 * h : h);

    std::vector<DensityPart> parts;
    if (!comb.empty())
      parts.emplace_back(CombPart{h, std::move(comb), 0.0});
    if (std::any_of(value.begin(), value.end(), [](double v) { return v > 0; }))
      parts.emplace_back(TablePart{eta_grid, std::move(value)});
    for (std::size_t i = 0; i < tail_eta.size() && i < tail_masses.size(); ++i)
      if (tail_masses[i] > 0)
        parts.emplace_back(CombPart{tail_eta[i], {0.0, tail_masses[i]}, 0.0});
    return WeightDensity(std::move(parts));
  }

  namespace {

    using Eigen::MatrixXd;
    using Eigen::VectorXd;

    // Solves Q_PP z = c_P with one step of iterative refinement.
    VectorXd solve_passive(const MatrixXd& q, const VectorXd& c, const std::vector<Eigen::Index>& passive) {
      const auto k = static_cast<Eigen::Index>(passive.size());
      MatrixXd sub(k, k);
      VectorXd rhs(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        rhs(i) = c(passive[std::size_t(i)]);
        for (Eigen::Index j = 0; j < k; ++j)
          sub(i, j) = q(passive[std::size_t(i)], passive[std::size_t(j)]);
      }
      const Eigen::LDLT<MatrixXd> ldlt(sub);
      VectorXd z = ldlt.solve(rhs);
      z += ldlt.solve(rhs - sub * z);
      return z;
    }

  }

  Reconstruction reconstruct_weight(std::span<const double> alpha, std::span<const double> phi_values,
                                    const ReconstructionOptions& options) {
    if (alpha.size() != phi_values.size() || alpha.empty())
      throw DomainError("reconstruct_weight: alpha and Phi samples differ in length or are empty");
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      if (!(alpha[j] > 0) || !std::isfinite(alpha[j]))
        throw DomainError("reconstruct_weight: alpha samples must be positive");
      if (!(phi_values[j] > 0) || !std::isfinite(phi_values[j]))
        throw DomainError("reconstruct_weight: Phi samples must be positive");
    }
    if (!(options.eta_max > 0))
      throw DomainError("reconstruct_weight: eta_max must be positive");
    if (options.grid_size < 16)
      throw DomainError("reconstruct_weight: grid_size must be >= 16");
    if (!(options.lambda > 0))
      throw DomainError("reconstruct_weight: lambda must be positive");

    const auto rows = static_cast<Eigen::Index>(alpha.size());
    const auto grid = static_cast<Eigen::Index>(options.grid_size);
    Reconstruction out;
    out.lambda = options.lambda;
    out.eta_grid.resize(options.grid_size);
    for (std::size_t k = 0; k < options.grid_size; ++k)
      out.eta_grid[k] = options.eta_max * double(k) / double(options.grid_size - 1);
    if (options.tail_columns > 0) {
      // up to where exp(-alpha_min eta) is negligible
      const double alpha_min = *std::min_element(alpha.begin(), alpha.end());
      const double first = options.eta_max + out.step();
      const double last = std::max(2.0 * options.eta_max, 40.0 / alpha_min);
      const double ratio = std::log(last / first) / double(std::max<std::size_t>(1, options.tail_columns - 1));
      for (std::size_t k = 0; k < options.tail_columns; ++k)
        out.tail_eta.push_back(first * std::exp(ratio * double(k)));
    }
    const auto cols = grid + static_cast<Eigen::Index>(out.tail_eta.size());
    auto node = [&](Eigen::Index k) {
      return k < grid ? out.eta_grid[std::size_t(k)] : out.tail_eta[std::size_t(k - grid)];
    };

    MatrixXd a(rows, cols);
    VectorXd b(rows);
    for (Eigen::Index j = 0; j < rows; ++j) {
      b(j) = phi_values[std::size_t(j)];
      for (Eigen::Index k = 0; k < cols; ++k)
        a(j, k) = std::exp(-alpha[std::size_t(j)] * node(k));
    }
    MatrixXd q = a.transpose() * a;
    q.diagonal().array() += options.lambda;
    const VectorXd c = a.transpose() * b;
    const double scale = std::max(c.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double tol = options.kkt_tolerance * scale;

    VectorXd x = VectorXd::Zero(cols);
    std::vector<bool> in_passive(std::size_t(cols), false);
    std::vector<Eigen::Index> passive;
    Eigen::Index blocked = -1;

    auto kkt = [&](const VectorXd& grad) {
      double worst = 0.0;
      for (Eigen::Index k = 0; k < cols; ++k)
        worst = std::max(worst, in_passive[std::size_t(k)] ? std::abs(grad(k)) : std::max(grad(k), 0.0));
      return worst;
    };

    VectorXd grad = c - q * x;  // negative gradient of the objective
    long passes = 0;
    while (true) {
      const double violation = kkt(grad);
      if (violation <= tol) {
        out.converged = true;
        break;
      }
      if (passes >= options.max_passes)
        break;

      Eigen::Index enter = -1;
      double best = tol;
      for (Eigen::Index k = 0; k < cols; ++k) {
        if (!in_passive[std::size_t(k)] && k != blocked && grad(k) > best) {
          best = grad(k);
          enter = k;
        }
      }
      if (enter >= 0) {
        in_passive[std::size_t(enter)] = true;
        passive.push_back(enter);
      } else if (blocked >= 0 || passive.empty()) {
        break;  // only a stalled candidate is left; report as not converged
      }

      // inner loop: move towards the unconstrained optimum on the passive set
      while (true) {
        ++passes;
        const VectorXd z = solve_passive(q, c, passive);
        bool feasible = true;
        for (Eigen::Index i = 0; i < z.size(); ++i)
          feasible = feasible && z(i) > 0;
        if (feasible) {
          for (Eigen::Index i = 0; i < z.size(); ++i)
            x(passive[std::size_t(i)]) = z(i);
          blocked = -1;
          break;
        }
        double step = 1.0;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
          const double xi = x(passive[std::size_t(i)]);
          if (z(i) <= 0)
            step = std::min(step, xi / (xi - z(i)));
        }
        for (Eigen::Index i = 0; i < z.size(); ++i) {
          const Eigen::Index k = passive[std::size_t(i)];
          x(k) += step * (z(i) - x(k));
        }
        std::vector<Eigen::Index> kept;
        for (Eigen::Index k : passive) {
          if (x(k) > 0) {
            kept.push_back(k);
          } else {
            x(k) = 0.0;
            in_passive[std::size_t(k)] = false;
          }
        }
        // an index that leaves on the same pass it entered would cycle
        if (enter >= 0 && !in_passive[std::size_t(enter)] && step == 0.0)
          blocked = enter;
        passive = std::move(kept);
        if (passive.empty() || passes >= options.max_passes)
          break;
      }
      grad = c - q * x;
    }

    out.passes = passes;
    out.kkt_residual = kkt(grad) / scale;
    out.masses.assign(x.data(), x.data() + grid);
    out.tail_masses.assign(x.data() + grid, x.data() + cols);
    const VectorXd misfit = a * x - b;
    out.residual = std::sqrt(misfit.squaredNorm() / double(rows));
    out.atoms = detect_atoms(out.eta_grid, out.masses, options.atoms);
    return out;
  }

  SingularityVerdict singularity_test(const WeightDensity& w, std::span<const double> eta0_descending) {
    if (eta0_descending.size() < 4)
      throw DomainError("singularity_test: need at least 4 eta0 values");
    for (std::size_t i = 0; i < eta0_descending.size(); ++i) {
      if (!(eta0_descending[i] > 0))
        throw DomainError("singularity_test: eta0 values must be positive");
      if (i > 0 && !(eta0_descending[i] < eta0_descending[i - 1]))
        throw DomainError("singularity_test: eta0 values must be strictly decreasing");
    }
    SingularityVerdict v;
    v.eta0.assign(eta0_descending.begin(), eta0_descending.end());
    for (double e : v.eta0)
      v.mass.push_back(cumulative_mass(w, e));
    v.reference_mass = v.mass.front();

    const std::size_t first = v.eta0.size() - 4;
    double best_sse = std::numeric_limits<double>::infinity();
    for (double q : {0.5, 1.0, 2.0}) {
      double t[4], m[4], tm = 0, mm = 0;
      for (std::size_t i = 0; i < 4; ++i) {
        t[i] = std::pow(v.eta0[first + i], q);
        m[i] = v.mass[first + i];
        tm += t[i] / 4;
        mm += m[i] / 4;
      }
      double stt = 0, stm = 0;
      for (std::size_t i = 0; i < 4; ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        stm += (t[i] - tm) * (m[i] - mm);
      }
      const double slope = stt > 0 ? stm / stt : 0.0;
      const double intercept = mm - slope * tm;
      double sse = 0;
      for (std::size_t i = 0; i < 4; ++i) {
        const double r = m[i] - intercept - slope * t[i];
        sse += r * r;
      }
      if (sse < best_sse) {
        best_sse = sse;
        v.limit = intercept;
        v.exponent = q;
      }
    }
    v.singular = v.reference_mass > 0 && v.limit > 1e-6 * v.reference_mass;
    return v;
  }

  const char* to_string(DivergenceClass c) {
    switch (c) {
    case DivergenceClass::Convergent:
      return "convergent";
    case DivergenceClass::Divergent:
      return "divergent";
    case DivergenceClass::Inconclusive:
      return "inconclusive";
    }
    return "?";
  }

  EnergyLaw dilation_family(WeightDensity w) {
    return [w = std::move(w)](double epsilon, double alpha) {
      return epsilon * mean_resonator_energy(w, epsilon * alpha);
    };
  }

  DivergenceVerdict total_energy_divergence(const EnergyLaw& law, double temperature, int doublings,
                                            const PhysicalConstants& k) {
    if (!(temperature > 0))
      throw DomainError("total_energy_divergence: T must be positive");
    if (doublings < 4)
      throw DomainError("total_energy_divergence: need at least 4 bands");
    DivergenceVerdict v;
    const double kt = k.k_boltzmann * temperature;
    const double alpha = 1.0 / kt;
    const double nu_unit = kt / k.h_planck;
    const double prefactor = 8.0 * std::numbers::pi / (k.c_light * k.c_light * k.c_light);
    using Rule = boost::math::quadrature::gauss<double, 20>;
    try {
      for (int j = 0; j < doublings; ++j) {
        const double lo = std::ldexp(nu_unit, j);
        bool finite = true;
        const double band = Rule::integrate(
            [&](double nu) {
              const double y = law(k.h_planck * nu, alpha);
              finite = finite && std::isfinite(y);
              return prefactor * nu * nu * y;
            },
            lo, 2.0 * lo);
        if (!finite || !std::isfinite(band)) {
          v.diagnostic = "non-finite energy in band " + std::to_string(j);
          return v;
        }
        v.band_integrals.push_back(band);
      }
    } catch (const std::exception& e) {
      v.diagnostic = e.what();
      return v;
    }
    for (std::size_t j = 0; j + 1 < v.band_integrals.size(); ++j) {
      const double p0 = v.band_integrals[j], p1 = v.band_integrals[j + 1];
      v.ratios.push_back(p0 > 0 ? p1 / p0 : (p1 > 0 ? std::numeric_limits<double>::infinity() : 0.0));
    }
    const auto tail = std::span(v.ratios).last(3);
    if (std::all_of(tail.begin(), tail.end(), [](double r) { return r <= 0.5; }))
      v.classification = DivergenceClass::Convergent;
    else if (std::all_of(tail.begin(), tail.end(), [](double r) { return r >= 0.9; }))
      v.classification = DivergenceClass::Divergent;
    else
      v.diagnostic = "band ratios between 0.5 and 0.9";
    return v;
  }

}
