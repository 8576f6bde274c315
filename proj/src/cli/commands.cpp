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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "output.hpp"
#include "quanta/density_spec.hpp"
#include "quanta/ensemble.hpp"
#include "quanta/errors.hpp"
#include "quanta/inverse.hpp"
#include "quanta/transform.hpp"

#ifndef QUANTA_VERSION
#define QUANTA_VERSION "unknown"
#endif

namespace quanta::cli {

  using Json = nlohmann::ordered_json;

  namespace {

    double to_double(const std::string& text, const std::string& what) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text, &used);
      } catch (const std::exception&) {
        throw ParseError("bad number '" + text + "' in " + what);
      }
      if (used != text.size() || !std::isfinite(v))
        throw ParseError("bad number '" + text + "' in " + what);
      return v;
    }

    std::vector<std::string> split(const std::string& s, char sep) {
      std::vector<std::string> out;
      std::string cur;
      std::istringstream is(s);
      while (std::getline(is, cur, sep))
        out.push_back(cur);
      if (!s.empty() && s.back() == sep)
        out.emplace_back();
      return out;
    }

    // Everything a subcommand produces; nothing touches the file system until
    // the computation has finished.
    struct Artifacts {
      std::string csv;
      Json json;
      std::string svg;
      bool json_to_stdout = false;
      int status = kSuccess;
    };

    Json metadata(const RunConfig& c) {
      return {{"command", c.subcommand}, {"version", QUANTA_VERSION}};
    }

    void require_finite(const Table& t, const char* what) {
      if (!t.all_finite())
        throw NumericError(std::string(what) + ": non-finite value in output (check --constants and grid ranges)");
    }

    WeightDensity density_of(const RunConfig& c) {
      if (c.density.empty())
        throw ParseError("--density is required");
      return parse_density(c.density);
    }

    // ---- planck ----

    Artifacts cmd_planck(const RunConfig& c) {
      const auto k = parse_constants(c.constants);
      if (!(c.temperature > 0))
        throw ParseError("--T must be positive");
      const auto grid = parse_grid(c.nu_grid, c.log);
      Table t{{"nu", "u"}, {}};
      for (double nu : grid.values())
        t.add({nu, planck_u(nu, c.temperature, k).u});
      require_finite(t, "planck");

      Artifacts a;
      a.csv = to_csv(t);
      a.json = {{"metadata", metadata(c)},
                {"temperature", c.temperature},
                {"constants", {{"kB", k.k_boltzmann}, {"h", k.h_planck}, {"c", k.c_light}}},
                {"rows", t.rows.size()}};
      a.svg = render_svg({"Planck spectral density, T = " + format_number(c.temperature), "nu", "u", c.log, false},
                         {{"u(nu)", t.column(0), t.column(1)}});
      return a;
    }

    // ---- direct ----

    Artifacts cmd_direct(const RunConfig& c) {
      const auto k = parse_constants(c.constants);
      const auto w = density_of(c);
      if (!c.alpha_grid.empty() && !c.t_grid.empty())
        throw ParseError("--alpha and --T-grid are mutually exclusive");
      std::vector<double> alpha;
      if (!c.t_grid.empty()) {
        for (double temp : parse_grid(c.t_grid, c.log).values())
          alpha.push_back(1.0 / (k.k_boltzmann * temp));
        std::reverse(alpha.begin(), alpha.end());
      } else {
        alpha = parse_grid(c.alpha_grid.empty() ? "0.1:10:100" : c.alpha_grid, c.log).values();
      }
      Table t{{"alpha", "T", "Y"}, {}};
      for (double al : alpha)
        t.add({al, 1.0 / (k.k_boltzmann * al), mean_resonator_energy(w, al)});
      require_finite(t, "direct");

      Artifacts a;
      a.csv = to_csv(t);
      a.json = {{"metadata", metadata(c)}, {"density", c.density}, {"kind", to_string(w.kind())},
                {"rows", t.rows.size()}};
      a.svg = render_svg({"Mean resonator energy", "alpha", "Y", c.log, false}, {{"Y(alpha)", t.column(0), t.column(2)}});
      return a;
    }

    // ---- exact / converge ----

    EnsembleConfig ensemble_of(const RunConfig& c) {
      if (c.e_total && c.beta)
        throw ParseError("--E and --beta are mutually exclusive");
      if (!c.e_total && !c.beta)
        throw ParseError("one of --E or --beta is required");
      EnsembleConfig e = c.e_total ? EnsembleConfig{c.n, c.p, *c.e_total} : EnsembleConfig::from_beta(c.n, c.p, *c.beta);
      try {
        check(e);
      } catch (const DomainError& err) {
        throw ParseError(err.what());
      }
      return e;
    }

    Artifacts cmd_exact(const RunConfig& c) {
      const auto w = density_of(c);
      const auto e = ensemble_of(c);
      const auto r = exact_mean_energies(w, e, {c.grid_intervals});
      Table t{{"n", "p", "E_total", "Y_exact", "X_exact"}, {}};
      t.add({double(e.n), double(e.p), e.e_total, r.resonator_energy, r.molecule_energy});
      require_finite(t, "exact");

      Artifacts a;
      a.csv = to_csv(t);
      a.json = {{"metadata", metadata(c)},
                {"density", c.density},
                {"n", e.n},
                {"p", e.p},
                {"E_total", e.e_total},
                {"Y_exact", r.resonator_energy},
                {"X_exact", r.molecule_energy},
                {"log_I", r.log_i},
                {"log_I_prime", r.log_i_prime},
                {"log_I_second", r.log_i_second}};
      return a;
    }

    Artifacts cmd_converge(const RunConfig& c) {
      const auto w = density_of(c);
      if (!c.beta)
        throw ParseError("--beta is required");
      if (c.n_list.empty())
        throw ParseError("--n-list is empty");
      std::vector<ConvergenceRow> rows;
      try {
        rows = convergence_study(w, *c.beta, c.r, c.n_list, {c.grid_intervals});
      } catch (const DomainError& err) {
        throw ParseError(err.what());
      }
      Table t{{"n", "p", "Y_exact", "Y_asymptotic", "error"}, {}};
      for (const auto& row : rows)
        t.add({double(row.n), double(row.p), row.exact, row.asymptotic, row.error});
      require_finite(t, "converge");

      Artifacts a;
      a.csv = to_csv(t);
      a.json = {{"metadata", metadata(c)}, {"density", c.density}, {"beta", *c.beta}, {"r", c.r},
                {"omega0", rows.front().asymptotic}, {"rows", t.rows.size()}};
      a.svg = render_svg({"Exact vs saddle-point resonator energy", "n", "|Y_exact - omega0|", true, true},
                         {{"error", t.column(0), t.column(4)}});
      return a;
    }

    // ---- invert / singularity ----

    // eta0 = top, top/2, top/4, ... (count values)
    std::vector<double> halving(double top, int count) {
      std::vector<double> out;
      for (int j = 0; j < count; ++j)
        out.push_back(std::ldexp(top, -j));
      return out;
    }

    Json divergence_json(const DivergenceVerdict& v) {
      return {{"classification", to_string(v.classification)},
              {"band_ratios", v.ratios},
              {"diagnostic", v.diagnostic}};
    }

    Json singularity_json(const SingularityVerdict& s) {
      return {{"singular", s.singular},
              {"limit", s.limit},
              {"exponent", s.exponent},
              {"reference_mass", s.reference_mass},
              {"eta0", s.eta0},
              {"mass", s.mass}};
    }

    Artifacts cmd_invert(const RunConfig& c) {
      const auto k = parse_constants(c.constants);
      if (!c.curve.empty() && !c.density.empty())
        throw ParseError("--curve and --density are mutually exclusive");
      if (c.curve.empty() && c.density.empty())
        throw ParseError("one of --curve or --density is required");
      if (!(c.temperature > 0))
        throw ParseError("--T must be positive");

      std::optional<EnergyCurve> curve;
      if (!c.curve.empty()) {
        curve = load_energy_curve(c.curve);
      } else {
        const auto w = parse_density(c.density);
        const auto alpha = parse_grid(c.alpha_grid.empty() ? "0.1:10:200" : c.alpha_grid, true).values();
        std::vector<double> y;
        for (double al : alpha)
          y.push_back(mean_resonator_energy(w, al));
        curve = EnergyCurve(alpha, y);
      }

      ReconstructionOptions opts;
      opts.eta_max = c.eta_max;
      opts.grid_size = c.grid_size;
      opts.lambda = c.lambda;
      opts.max_passes = c.max_passes;
      if (!(opts.eta_max > 0) || opts.grid_size < 16 || !(opts.lambda > 0) || opts.max_passes < 1)
        throw ParseError("need --eta-max > 0, --grid-size >= 16, --lambda > 0, --max-passes >= 1");

      const auto samples = reconstruct_log_phi(*curve);
      const auto rec = reconstruct_weight(samples.alpha, samples.phi(), opts);

      Table t{{"eta", "mass"}, {}};
      for (std::size_t i = 0; i < rec.eta_grid.size(); ++i)
        t.add({rec.eta_grid[i], rec.masses[i]});

      // Below one grid step the reconstruction is linear interpolation, so an
      // atom at zero is exactly a detected atom at node 0.
      const auto density = rec.to_density();
      const auto sing = singularity_test(density, halving(rec.step(), 24));
      const auto div = total_energy_divergence(dilation_family(density), c.temperature, 20, k);

      Json atoms = Json::array();
      for (const auto& at : rec.atoms)
        atoms.push_back({{"position", at.position}, {"mass", at.mass}});
      double tail = 0.0;
      for (double m : rec.tail_masses)
        tail += m;

      Artifacts a;
      a.csv = to_csv(t);
      a.json = {{"metadata", metadata(c)},
                {"source", c.curve.empty() ? "density:" + c.density : "curve:" + c.curve},
                {"samples", curve->size()},
                {"anchor_alpha", samples.anchor_alpha},
                {"eta_max", c.eta_max},
                {"grid_size", c.grid_size},
                {"lambda", rec.lambda},
                {"residual", rec.residual},
                {"kkt_residual", rec.kkt_residual},
                {"passes", rec.passes},
                {"converged", rec.converged},
                {"total_mass", rec.total_mass()},
                {"tail_mass", tail},
                {"atoms", atoms},
                {"singular", sing.singular},
                {"singularity", singularity_json(sing)},
                {"divergence", to_string(div.classification)},
                {"divergence_detail", divergence_json(div)}};
      a.json_to_stdout = c.json.empty();
      a.svg = render_svg({"Recovered weight per grid node", "eta", "mass", false, false},
                         {{"mass", t.column(0), t.column(1)}});
      if (!rec.converged)
        a.status = kNumericFailure;
      return a;
    }

    Artifacts cmd_singularity(const RunConfig& c) {
      const auto k = parse_constants(c.constants);
      const auto w = density_of(c);
      if (!(c.temperature > 0))
        throw ParseError("--T must be positive");
      std::vector<double> eta0 = c.eta0.empty() ? halving(1.0, 21) : c.eta0;
      SingularityVerdict s;
      try {
        s = singularity_test(w, eta0);
      } catch (const DomainError& err) {
        throw ParseError(err.what());
      }
      if (!(s.reference_mass > 0))
        throw DegenerateDensityError("singularity: no weight on [0, " + format_number(eta0.front()) + "]");
      const auto div = total_energy_divergence(dilation_family(w), c.temperature, 20, k);

      Table t{{"eta0", "mass"}, {}};
      for (std::size_t i = 0; i < s.eta0.size(); ++i)
        t.add({s.eta0[i], s.mass[i]});

      Artifacts a;
      a.csv = to_csv(t);
      a.json = singularity_json(s);
      a.json["divergence"] = to_string(div.classification);
      a.json["divergence_detail"] = divergence_json(div);
      a.json["density"] = c.density;
      a.json["metadata"] = metadata(c);
      a.json_to_stdout = c.json.empty();
      a.svg = render_svg({"Cumulative mass near zero", "eta0", "mass on [0, eta0]", true, false},
                         {{"mass", t.column(0), t.column(1)}});
      return a;
    }

    void emit(const RunConfig& c, const Artifacts& a, std::ostream& out) {
      if (!c.plot.empty() && a.svg.empty())
        throw ParseError("--plot is not supported by '" + c.subcommand + "'");
      const std::string json = a.json.dump(2) + "\n";
      if (!c.out.empty())
        write_file(c.out, a.csv);
      else if (!a.json_to_stdout)
        out << a.csv;
      if (!c.json.empty())
        write_file(c.json, json);
      else if (a.json_to_stdout)
        out << json;
      if (!c.plot.empty())
        write_file(c.plot, a.svg);
    }

  }

  std::vector<double> GridSpec::values() const {
    return log ? AlphaGrid::logarithmic(min, max, count).values() : AlphaGrid::linear(min, max, count).values();
  }

  GridSpec parse_grid(const std::string& text, bool log) {
    const auto fields = split(text, ':');
    if (fields.size() != 3)
      throw ParseError("grid '" + text + "': expected min:max:count");
    GridSpec g;
    g.min = to_double(fields[0], "grid '" + text + "'");
    g.max = to_double(fields[1], "grid '" + text + "'");
    const double count = to_double(fields[2], "grid '" + text + "'");
    if (count != std::floor(count) || count < 2 || count > 1e7)
      throw ParseError("grid '" + text + "': count must be an integer >= 2");
    g.count = static_cast<std::size_t>(count);
    g.log = log;
    if (!(g.min < g.max))
      throw ParseError("grid '" + text + "': min must be below max");
    if (log && !(g.min > 0))
      throw ParseError("grid '" + text + "': a log grid needs min > 0");
    return g;
  }

  PhysicalConstants parse_constants(const std::string& text) {
    PhysicalConstants k;
    if (text.empty())
      return k;
    for (const auto& field : split(text, ',')) {
      const auto eq = field.find('=');
      if (eq == std::string::npos)
        throw ParseError("--constants: expected key=value, got '" + field + "'");
      const auto key = field.substr(0, eq);
      const double v = to_double(field.substr(eq + 1), "--constants");
      if (key == "kB")
        k.k_boltzmann = v;
      else if (key == "h")
        k.h_planck = v;
      else if (key == "c")
        k.c_light = v;
      else
        throw ParseError("--constants: unknown key '" + key + "' (use kB, h, c)");
    }
    if (!k.valid())
      throw ParseError("--constants: all constants must be positive");
    return k;
  }

  int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
    static const std::map<std::string, std::function<Artifacts(const RunConfig&)>> commands = {
        {"planck", cmd_planck},   {"direct", cmd_direct}, {"exact", cmd_exact},
        {"converge", cmd_converge}, {"invert", cmd_invert}, {"singularity", cmd_singularity},
    };
    try {
      const auto it = commands.find(c.subcommand);
      if (it == commands.end())
        throw ParseError("unknown subcommand '" + c.subcommand + "'");
      const Artifacts a = it->second(c);
      emit(c, a, out);
      if (a.status == kNumericFailure)
        err << "error: solver stopped at the pass limit before convergence; best iterate written\n";
      return a.status;
    } catch (const ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kUsageFailure;
    } catch (const NumericError& e) {
      err << "error: " << e.what() << '\n';
      return kNumericFailure;
    } catch (const DomainError& e) {
      err << "error: " << e.what() << '\n';
      return kUsageFailure;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kNumericFailure;
    }
  }

  int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"quanta: energy-weight densities, mean-energy laws and their inversion"};
    app.require_subcommand(1);
    RunConfig c;
    double e_total = 0.0, beta = 0.0;

    auto common = [&](CLI::App* sub) {
      sub->add_option("--out", c.out, "CSV output path (default: stdout)");
      sub->add_option("--json", c.json, "JSON summary path");
      sub->add_option("--plot", c.plot, "SVG plot path");
      sub->add_option("--constants", c.constants, "kB=..,h=..,c=.. (default: all 1)");
    };
    auto density = [&](CLI::App* sub) {
      sub->add_option("--density", c.density, "comb:eps=F[,masses=F;..][,tail=F] | table:PATH | const | exp | invsqrt");
    };

    auto* planck = app.add_subcommand("planck", "Planck spectral density u(nu) at temperature T");
    common(planck);
    planck->add_option("--T", c.temperature, "temperature")->capture_default_str();
    planck->add_option("--nu", c.nu_grid, "frequency grid min:max:count")->capture_default_str();
    planck->add_flag("--log", c.log, "logarithmic grid spacing");

    auto* direct = app.add_subcommand("direct", "Mean resonator energy Y(alpha) = -Phi'/Phi");
    common(direct);
    density(direct);
    direct->add_option("--alpha", c.alpha_grid, "alpha grid min:max:count (default 0.1:10:100)");
    direct->add_option("--T-grid", c.t_grid, "temperature grid min:max:count instead of --alpha");
    direct->add_flag("--log", c.log, "logarithmic grid spacing");

    auto* exact = app.add_subcommand("exact", "Exact microcanonical mean energies at finite (n, p, E)");
    common(exact);
    density(exact);
    exact->add_option("--n", c.n, "resonators")->capture_default_str();
    exact->add_option("--p", c.p, "molecules")->capture_default_str();
    auto* e_opt = exact->add_option("--E", e_total, "total energy");
    auto* b_opt = exact->add_option("--beta", beta, "energy per resonator E/n");
    exact->add_option("--grid-intervals", c.grid_intervals, "convolution grid for continuous densities")
        ->capture_default_str();

    auto* converge = app.add_subcommand("converge", "Exact vs saddle-point energy for growing n");
    common(converge);
    density(converge);
    auto* cb_opt = converge->add_option("--beta", beta, "energy per resonator E/n");
    converge->add_option("--r", c.r, "molecules per resonator p/n")->capture_default_str();
    converge->add_option("--n-list", c.n_list, "resonator counts")->delimiter(',')->capture_default_str();
    converge->add_option("--grid-intervals", c.grid_intervals, "convolution grid for continuous densities")
        ->capture_default_str();

    auto* invert = app.add_subcommand("invert", "Recover w(eta) from an energy curve Y(alpha)");
    common(invert);
    density(invert);
    invert->add_option("--curve", c.curve, "CSV with header alpha,Y");
    invert->add_option("--alpha", c.alpha_grid, "log-spaced alpha grid for --density (default 0.1:10:200)");
    invert->add_option("--lambda", c.lambda, "Tikhonov weight")->capture_default_str();
    invert->add_option("--grid-size", c.grid_size, "eta grid nodes")->capture_default_str();
    invert->add_option("--eta-max", c.eta_max, "eta grid end")->capture_default_str();
    invert->add_option("--max-passes", c.max_passes, "active-set pass limit")->capture_default_str();
    invert->add_option("--T", c.temperature, "temperature for the divergence test")->capture_default_str();

    auto* singularity = app.add_subcommand("singularity", "Atom-at-zero and total-energy divergence verdicts");
    common(singularity);
    density(singularity);
    singularity->add_option("--eta0", c.eta0, "strictly decreasing eta0 values (default 1, 1/2, ..., 2^-20)")
        ->delimiter(',');
    singularity->add_option("--T", c.temperature, "temperature for the divergence test")->capture_default_str();

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kSuccess : kUsageFailure;
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    if (e_opt->count() > 0)
      c.e_total = e_total;
    if (b_opt->count() > 0 || cb_opt->count() > 0)
      c.beta = beta;
    return execute(c, out, err);
  }

  int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"quanta"};
    for (const auto& a : args)
      argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
  }

}
