// Command-line front end: closed-form curves, Hopf point queries, slow-flow and
// full-system simulations, and the critical-delay sweeps behind the error table.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vdpdelay/error.hpp"
#include "vdpdelay/reports.hpp"

namespace {

namespace rep = vdpdelay::reports;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Output {
  std::string path = "-";
  std::string format = "csv";
};

struct AlphaOptions {
  std::optional<double> alpha;
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 0;

  rep::Range range(rep::Range defaults) const {
    if (alpha) return {*alpha, *alpha, 1};
    return defaults;
  }
};

void add_output(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.path, "Output file ('-' for stdout)");
  cmd->add_option("--format", out.format, "csv, json or text")->capture_default_str();
}

void add_alpha(CLI::App* cmd, AlphaOptions& a, rep::Range& range) {
  cmd->add_option("--alpha", a.alpha, "Single coupling value");
  cmd->add_option("--alpha-min", range.min, "Grid start")->capture_default_str();
  cmd->add_option("--alpha-max", range.max, "Grid end")->capture_default_str();
  cmd->add_option("--alpha-steps", range.steps, "Grid points")->capture_default_str();
}

void add_scan(CLI::App* cmd, vdpdelay::ScanConfig& scan) {
  cmd->add_option("--step", scan.step, "Integrator step (slow time)")->capture_default_str();
  cmd->add_option("--window", scan.window, "Minimum integration span per probe")->capture_default_str();
  cmd->add_option("--max-window", scan.max_window, "Cap on the adaptive probe span")->capture_default_str();
  cmd->add_option("--tol", scan.tol, "Bisection tolerance on T")->capture_default_str();
  cmd->add_option("--threads", scan.threads, "Worker threads (0: all cores)")->capture_default_str();
}

template <class Emit>
void with_stream(const Output& out, Emit&& emit) {
  if (out.path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream file(out.path);
  if (!file) throw rep::ConfigError("out", "cannot open '" + out.path + "' for writing");
  emit(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability of the in-phase mode of two delay-coupled van der Pol oscillators"};
  app.require_subcommand(1);

  Output out;

  rep::InphaseConfig inphase;
  AlphaOptions inphase_alpha;
  std::optional<double> inphase_T;
  auto* c_inphase = app.add_subcommand("inphase", "Lindstedt amplitude and frequency over an (alpha, T) grid");
  add_alpha(c_inphase, inphase_alpha, inphase.alpha);
  c_inphase->add_option("--T", inphase_T, "Single delay value");
  c_inphase->add_option("--T-min", inphase.T.min)->capture_default_str();
  c_inphase->add_option("--T-max", inphase.T.max)->capture_default_str();
  c_inphase->add_option("--T-steps", inphase.T.steps)->capture_default_str();
  c_inphase->add_option("--eps", inphase.eps)->capture_default_str();
  add_output(c_inphase, out);

  rep::CurvesConfig curves;
  AlphaOptions curves_alpha;
  auto* c_curves = app.add_subcommand("curves", "Closed-form Hopf, saddle-node and mode-birth curves");
  add_alpha(c_curves, curves_alpha, curves.alpha);
  add_output(c_curves, out);

  rep::Fig1Config fig1;
  AlphaOptions fig1_alpha;
  auto* c_fig1 = app.add_subcommand("fig1", "Critical delay versus alpha: series truncations and simulation");
  add_alpha(c_fig1, fig1_alpha, fig1.alpha);
  c_fig1->add_option("--eps", fig1.eps)->capture_default_str();
  add_scan(c_fig1, fig1.scan);
  add_output(c_fig1, out);

  rep::Table1Config table1;
  auto* c_table1 = app.add_subcommand("table1", "Maximum errors of the series truncations against simulation");
  c_table1->add_option("--eps", table1.eps, "Perturbation parameters")->capture_default_str();
  c_table1->add_option("--n-terms", table1.n_terms, "Series truncations")->capture_default_str();
  c_table1->add_option("--alpha-steps", table1.grid_size, "Grid points on [sqrt(2)/3, 1]")->capture_default_str();
  add_scan(c_table1, table1.scan);
  add_output(c_table1, out);

  rep::SimulateConfig sim;
  std::string system = "slow";
  int beta = -1;
  std::optional<std::uint64_t> seed;
  bool random_history = false;
  auto* c_sim = app.add_subcommand("simulate", "Integrate the slow flow or the full system at one point");
  c_sim->add_option("--system", system, "slow or full")->capture_default_str();
  c_sim->add_option("--alpha", sim.params.alpha)->capture_default_str();
  c_sim->add_option("--T", sim.params.T)->capture_default_str();
  c_sim->add_option("--eps", sim.params.eps)->capture_default_str();
  c_sim->add_option("--beta", beta, "Mode sign, +1 or -1")->capture_default_str();
  c_sim->add_option("--step", sim.step)->capture_default_str();
  c_sim->add_option("--window", sim.window, "Integration span")->capture_default_str();
  c_sim->add_option("--A0", sim.initial[0], "Slow-flow history A")->capture_default_str();
  c_sim->add_option("--B0", sim.initial[1], "Slow-flow history B")->capture_default_str();
  c_sim->add_option("--perturbation", sim.perturbation[0], "Full system: offset on x1 history")
      ->capture_default_str();
  c_sim->add_flag("--random-history", random_history, "Random unit-norm slow-flow history");
  c_sim->add_option("--seed", seed, "Seed for --random-history (default 0)");
  add_output(c_sim, out);

  rep::HopfConfig hopf;
  auto* c_hopf = app.add_subcommand("hopf", "Series and Newton Hopf point at one (alpha, eps)");
  c_hopf->add_option("--alpha", hopf.alpha)->capture_default_str();
  c_hopf->add_option("--eps", hopf.eps)->capture_default_str();
  c_hopf->add_option("--n-terms", hopf.n_terms)->capture_default_str();
  add_output(c_hopf, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const rep::Format format = rep::parse_format(out.format);
    auto emit_table = [&](const rep::Table& t) {
      with_stream(out, [&](std::ostream& os) { rep::write_table(os, t, format); });
    };

    if (*c_inphase) {
      inphase.alpha = inphase_alpha.range(inphase.alpha);
      if (inphase_T) inphase.T = {*inphase_T, *inphase_T, 1};
      emit_table(rep::cmd_inphase(inphase));
    } else if (*c_curves) {
      curves.alpha = curves_alpha.range(curves.alpha);
      emit_table(rep::cmd_curves(curves));
    } else if (*c_fig1) {
      fig1.alpha = fig1_alpha.range(fig1.alpha);
      emit_table(rep::cmd_fig1(fig1));
    } else if (*c_table1) {
      emit_table(rep::cmd_table1(table1));
    } else if (*c_hopf) {
      emit_table(rep::cmd_hopf(hopf));
    } else if (*c_sim) {
      if (system == "slow") {
        sim.system = rep::SimSystem::SlowFlow;
      } else if (system == "full") {
        sim.system = rep::SimSystem::Full;
      } else {
        throw rep::ConfigError("system", "expected slow or full, got '" + system + "'");
      }
      if (beta != 1 && beta != -1) throw rep::ConfigError("beta", "must be +1 or -1");
      sim.params.beta = beta > 0 ? vdpdelay::ModeSign::Symmetric : vdpdelay::ModeSign::Antisymmetric;
      if (random_history) sim.random_history_seed = seed.value_or(0);

      const rep::SimulationReport report = rep::cmd_simulate(sim);
      with_stream(out, [&](std::ostream& os) { rep::write_simulation(os, report, format); });
      if (format != rep::Format::Json) {
        std::ostream& info = out.path == "-" ? std::cerr : std::cout;
        if (report.growth) {
          info << "growth_rate(" << report.growth_kind << ")=" << report.growth->rate
               << " r_squared=" << report.growth->r_squared << '\n';
        } else {
          info << "growth_rate unavailable: run shorter than 40 time units or 200 nodes\n";
        }
      }
      if (const auto t = report.trajectory.blow_up_time()) {
        std::cerr << "NonFiniteState: state diverged at t=" << *t << '\n';
        return kExitNumerical;
      }
    }
  } catch (const rep::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const vdpdelay::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
