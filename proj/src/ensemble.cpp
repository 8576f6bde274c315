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

#include "quanta/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <numbers>
#include <sstream>

#include "numeric.hpp"
#include "quanta/errors.hpp"
#include "quanta/transform.hpp"

namespace quanta {

  namespace {

    using detail::kNegInf;

    double log_binomial(long long top, long long k) {
      if (k < 0 || k > top)
        return kNegInf;
      k = std::min(k, top - k);
      if (top <= 60) {
        // exact: every partial product C(top, j) is an integer below 2^64
        unsigned __int128 c = 1;
        for (long long j = 1; j <= k; ++j)
          c = c * static_cast<unsigned __int128>(top - k + j) / static_cast<unsigned __int128>(j);
        return std::log(static_cast<double>(static_cast<std::uint64_t>(c)));
      }
      return std::lgamma(double(top) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(top - k) + 1);
    }

    // A measure on [0, E]: atoms on the lattice m * epsilon (log weights) plus
    // a continuous density sampled at x_i = i * step, stored as
    // exp(cont_log_scale) * cont[i].
    struct GridMeasure {
      double e_total = 0.0;
      double epsilon = 0.0;
      std::vector<double> log_atoms;
      double step = 0.0;
      std::vector<double> cont;
      double cont_log_scale = kNegInf;

      bool has_atoms() const {
        return std::any_of(log_atoms.begin(), log_atoms.end(), [](double a) { return a != kNegInf; });
      }
      bool has_cont() const { return cont_log_scale != kNegInf; }

      // linear interpolation of the scaled continuous samples, zero off [0, E]
      double cont_at(double x) const {
        if (x < 0)
          return 0.0;
        const double s = x / step;
        const auto i = static_cast<std::size_t>(s);
        if (i + 1 >= cont.size())
          return i + 1 == cont.size() && s - double(i) < 1e-9 ? cont.back() : 0.0;
        const double f = s - double(i);
        return cont[i] * (1 - f) + cont[i + 1] * f;
      }

      void normalise_cont(double log_scale) {
        const double peak = cont.empty() ? 0.0 : *std::max_element(cont.begin(), cont.end());
        if (!(peak > 0)) {
          std::fill(cont.begin(), cont.end(), 0.0);
          cont_log_scale = kNegInf;
          return;
        }
        for (double& v : cont)
          v /= peak;
        cont_log_scale = log_scale + std::log(peak);
      }
    };

    const CombPart* single_comb(const WeightDensity& w) {
      const CombPart* found = nullptr;
      for (const auto& part : w.parts()) {
        if (const auto* c = std::get_if<CombPart>(&part)) {
          if (found && found->epsilon != c->epsilon)
            throw DomainError("phi_convolution: combs with different spacings do not share a lattice");
          found = c;
        }
      }
      return found;
    }

    GridMeasure sample(const WeightDensity& w, double e_total, int intervals) {
      GridMeasure g;
      g.e_total = e_total;
      std::vector<const CombPart*> combs;
      std::vector<DensityPart> continuous;
      for (const auto& part : w.parts()) {
        if (const auto* c = std::get_if<CombPart>(&part))
          combs.push_back(c);
        else
          continuous.push_back(part);
      }
      if (const CombPart* c = single_comb(w)) {
        g.epsilon = c->epsilon;
        const auto count = static_cast<std::size_t>(std::floor(e_total / g.epsilon)) + 1;
        std::vector<double> mass(count, 0.0);
        for (const CombPart* part : combs)
          for (std::size_t k = 0; k < count; ++k)
            mass[k] += part->mass_at(k);
        while (!mass.empty() && double(mass.size() - 1) * g.epsilon > e_total)
          mass.pop_back();
        g.log_atoms.resize(mass.size());
        std::transform(mass.begin(), mass.end(), g.log_atoms.begin(), detail::safe_log);
      } else {
        g.epsilon = e_total;
        g.log_atoms.assign(1, kNegInf);
      }
      g.step = e_total / intervals;
      g.cont.assign(static_cast<std::size_t>(intervals) + 1, 0.0);
      if (!continuous.empty()) {
        // cell averages; well defined for integrable blow-ups at zero
        const WeightDensity cw(std::move(continuous));
        for (int i = 0; i <= intervals; ++i) {
          const double x = i * g.step;
          const double lo = std::max(0.0, x - 0.5 * g.step);
          const double hi = x + 0.5 * g.step;
          g.cont[static_cast<std::size_t>(i)] = (cumulative_mass(cw, hi) - cumulative_mass(cw, lo)) / (hi - lo);
        }
        g.normalise_cont(0.0);
      }
      return g;
    }

    GridMeasure convolve(const GridMeasure& a, const GridMeasure& b) {
      GridMeasure c;
      c.e_total = a.e_total;
      c.epsilon = a.epsilon;
      c.step = a.step;
      const std::size_t na = a.log_atoms.size();
      c.log_atoms.assign(na, kNegInf);
      for (std::size_t m = 0; m < na; ++m) {
        detail::LogSumExp s;
        for (std::size_t j = 0; j <= m; ++j)
          s.add(a.log_atoms[j] + b.log_atoms[m - j]);
        c.log_atoms[m] = s.value();
      }

      const std::size_t ng = a.cont.size();
      c.cont.assign(ng, 0.0);
      struct Piece {
        double log_scale;
        std::vector<double> values;
      };
      std::vector<Piece> pieces;
      if (a.has_cont() && b.has_cont()) {
        Piece p{a.cont_log_scale + b.cont_log_scale + std::log(a.step), std::vector<double>(ng, 0.0)};
        for (std::size_t i = 1; i < ng; ++i) {
          detail::CompensatedSum s;
          s.add(0.5 * a.cont[0] * b.cont[i]);
          for (std::size_t j = 1; j < i; ++j)
            s.add(a.cont[j] * b.cont[i - j]);
          s.add(0.5 * a.cont[i] * b.cont[0]);
          p.values[i] = s.value();
        }
        pieces.push_back(std::move(p));
      }
      // atoms of one factor shift the continuous density of the other
      auto shifted = [&](const GridMeasure& atoms, const GridMeasure& dens) {
        const double top = *std::max_element(atoms.log_atoms.begin(), atoms.log_atoms.end());
        Piece p{top + dens.cont_log_scale, std::vector<double>(ng, 0.0)};
        for (std::size_t i = 0; i < ng; ++i) {
          const double x = double(i) * c.step;
          detail::CompensatedSum s;
          for (std::size_t m = 0; m < atoms.log_atoms.size(); ++m) {
            if (atoms.log_atoms[m] == kNegInf)
              continue;
            const double shift = double(m) * atoms.epsilon;
            if (shift > x)
              break;
            s.add(std::exp(atoms.log_atoms[m] - top) * dens.cont_at(x - shift));
          }
          p.values[i] = s.value();
        }
        pieces.push_back(std::move(p));
      };
      if (a.has_atoms() && b.has_cont())
        shifted(a, b);
      if (b.has_atoms() && a.has_cont())
        shifted(b, a);

      if (pieces.empty())
        return c;
      double top = kNegInf;
      for (const auto& p : pieces)
        top = std::max(top, p.log_scale);
      for (const auto& p : pieces) {
        const double f = std::exp(p.log_scale - top);
        for (std::size_t i = 0; i < ng; ++i)
          c.cont[i] += f * p.values[i];
      }
      c.normalise_cont(top);
      return c;
    }

    bool is_uniform_comb(const WeightDensity& w, double e_total, double& mass) {
      if (w.parts().size() != 1)
        return false;
      const auto* c = std::get_if<CombPart>(&w.parts().front());
      if (!c || c->masses.empty())
        return false;
      mass = c->masses.front();
      if (!(mass > 0))
        return false;
      for (double m : c->masses)
        if (m != mass)
          return false;
      if (c->tail_mass == mass)
        return true;
      return double(c->masses.size() - 1) * c->epsilon >= e_total;
    }

    GridMeasure n_fold(const WeightDensity& w, int n, double e_total, const ConvolutionOptions& options) {
      if (n < 1)
        throw DomainError("phi_convolution: n must be >= 1");
      if (!(e_total > 0))
        throw DomainError("phi_convolution: E_total must be positive");
      if (options.grid_intervals < 2 || options.grid_intervals % 2 != 0)
        throw DomainError("phi_convolution: grid_intervals must be even and >= 2");
      double mass = 0.0;
      if (is_uniform_comb(w, e_total, mass)) {
        // compositions of m into n nonnegative parts: C(m + n - 1, n - 1)
        GridMeasure g;
        g.e_total = e_total;
        g.epsilon = std::get<CombPart>(w.parts().front()).epsilon;
        g.step = e_total / options.grid_intervals;
        g.cont.assign(static_cast<std::size_t>(options.grid_intervals) + 1, 0.0);
        const auto count = static_cast<long long>(std::floor(e_total / g.epsilon)) + 1;
        for (long long m = 0; m < count; ++m) {
          if (double(m) * g.epsilon > e_total)
            break;
          g.log_atoms.push_back(n * std::log(mass) + log_binomial(m + n - 1, n - 1));
        }
        return g;
      }
      GridMeasure base = sample(w, e_total, options.grid_intervals);
      GridMeasure result = base;
      for (int rest = n - 1; rest > 0; rest >>= 1) {
        if (rest & 1)
          result = convolve(result, base);
        if (rest > 1)
          base = convolve(base, base);
      }
      return result;
    }

    double simpson_weight(std::size_t i, std::size_t last, double step) {
      if (i == 0 || i == last)
        return step / 3.0;
      return (i % 2 == 1 ? 4.0 : 2.0) * step / 3.0;
    }

  }

  SpectralPoint planck_u(double nu, double temperature, const PhysicalConstants& k) {
    if (!(nu > 0) || !(temperature > 0))
      throw DomainError("planck_u: nu and T must be positive");
    const double kt = k.k_boltzmann * temperature;
    const double x = k.h_planck * nu / kt;
    // h nu / (exp(x) - 1) = kT * x / expm1(x)
    const double mean = x < 1e-8 ? kt * (1.0 - 0.5 * x) : k.h_planck * nu / std::expm1(x);
    const double prefactor = 8.0 * std::numbers::pi * nu * nu / (k.c_light * k.c_light * k.c_light);
    return {nu, prefactor * mean};
  }

  double planck_entropy(double energy, double epsilon, const PhysicalConstants& k) {
    if (!(energy >= 0) || !(epsilon > 0))
      throw DomainError("planck_entropy: need U >= 0 and epsilon > 0");
    if (energy == 0.0)
      return 0.0;
    const double x = energy / epsilon;
    return k.k_boltzmann * ((1.0 + x) * std::log1p(x) - x * std::log(x));
  }

  double planck_entropy_slope(double energy, double epsilon, const PhysicalConstants& k) {
    if (!(energy > 0) || !(epsilon > 0))
      throw DomainError("planck_entropy_slope: need U > 0 and epsilon > 0");
    return k.k_boltzmann / epsilon * std::log1p(epsilon / energy);
  }

  double wien_temperature(double energy, double epsilon, const PhysicalConstants& k) {
    if (!(energy > 0) || !(epsilon > 0))
      throw DomainError("wien_temperature: need U > 0 and epsilon > 0");
    return 1.0 / planck_entropy_slope(energy, epsilon, k);
  }

  WeightDensity phi_convolution(const WeightDensity& w, int n, double e_total,
                                const ConvolutionOptions& options) {
    if (n == 1)
      return w;
    const GridMeasure g = n_fold(w, n, e_total, options);
    std::vector<DensityPart> parts;
    if (g.has_atoms()) {
      std::vector<double> masses(g.log_atoms.size());
      std::transform(g.log_atoms.begin(), g.log_atoms.end(), masses.begin(),
                     [](double a) { return std::exp(a); });
      parts.emplace_back(CombPart{g.epsilon, std::move(masses), 0.0});
    }
    if (g.has_cont()) {
      TablePart t;
      for (std::size_t i = 0; i < g.cont.size(); ++i) {
        t.eta.push_back(double(i) * g.step);
        t.value.push_back(std::exp(g.cont_log_scale) * g.cont[i]);
      }
      parts.emplace_back(std::move(t));
    }
    return WeightDensity(std::move(parts));
  }

  double MicrocanonicalResult::i() const { return std::exp(log_i); }
  double MicrocanonicalResult::i_prime() const { return std::exp(log_i_prime); }
  double MicrocanonicalResult::i_second() const { return std::exp(log_i_second); }

  MicrocanonicalResult exact_mean_energies(const WeightDensity& w, const EnsembleConfig& config,
                                           const ConvolutionOptions& options) {
    check(config);
    const double e = config.e_total;
    const double power = config.p - 1;
    const GridMeasure g = n_fold(w, config.n, e, options);

    detail::LogSumExp sum_i, sum_first, sum_second;
    auto accumulate = [&](double x, double log_weight) {
      if (log_weight == kNegInf || x > e)
        return;
      const double gap = e - x;
      const double kernel = power == 0 ? 0.0 : power * detail::safe_log(gap);
      const double t = log_weight + kernel;
      sum_i.add(t);
      sum_first.add(t + detail::safe_log(x));
      sum_second.add(t + detail::safe_log(gap));
    };
    for (std::size_t m = 0; m < g.log_atoms.size(); ++m)
      accumulate(double(m) * g.epsilon, g.log_atoms[m]);
    if (g.has_cont()) {
      const std::size_t last = g.cont.size() - 1;
      for (std::size_t i = 0; i <= last; ++i) {
        const double lw = g.cont_log_scale + detail::safe_log(g.cont[i]) +
                          std::log(simpson_weight(i, last, g.step));
        accumulate(double(i) * g.step, lw);
      }
    }

    MicrocanonicalResult r;
    r.log_i = sum_i.value();
    if (r.log_i == kNegInf) {
      std::ostringstream msg;
      msg << "no states: the density has no weight in [0, E_total = " << e << "]";
      throw NoStatesError(msg.str());
    }
    r.log_i_prime = sum_first.value();
    r.log_i_second = sum_second.value();
    r.resonator_energy = std::exp(r.log_i_prime - r.log_i) / config.n;
    r.molecule_energy = std::exp(r.log_i_second - r.log_i) / config.p;
    return r;
  }

  std::vector<ConvergenceRow> convergence_study(const WeightDensity& w, double beta, double r,
                                                const std::vector<int>& n_list,
                                                const ConvolutionOptions& options) {
    if (n_list.empty())
      throw DomainError("convergence_study: empty n list");
    if (!(beta > 0) || !(r > 0))
      throw DomainError("convergence_study: beta and r must be positive");
    std::vector<EnsembleConfig> configs;
    for (int n : n_list) {
      const double rn = r * n;
      const auto p = static_cast<int>(std::llround(rn));
      if (n < 1 || p < 1 || std::abs(rn - p) > 1e-9 * std::max(1.0, rn))
        throw DomainError("convergence_study: r * n must be a positive integer for n = " + std::to_string(n));
      configs.push_back(EnsembleConfig::from_beta(n, p, beta));
    }
    const double omega0 = solve_saddle(w, configs.front()).omega0;

    std::vector<std::future<MicrocanonicalResult>> jobs;
    jobs.reserve(configs.size());
    for (const auto& cfg : configs)
      jobs.push_back(std::async(std::launch::async, [&w, cfg, &options] {
        return exact_mean_energies(w, cfg, options);
      }));
    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const double exact = jobs[i].get().resonator_energy;
      rows.push_back({configs[i].n, configs[i].p, exact, omega0, std::abs(exact - omega0)});
    }
    return rows;
  }

}
