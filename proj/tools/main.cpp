// Command-line front end: simulate | check | collide.
// Exit codes: 0 pass, 1 check failure, 2 usage/config error,
//             3 numeric non-convergence.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "boltzlp/report.hpp"
#include "boltzlp/runner.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNonConvergence = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "boltzlp: velocity-space collision operator evaluation, weighted-Lp "
      "functional inequality checks and flow diagnostics for the "
      "homogeneous Boltzmann equation"};
  app.require_subcommand(1);

  std::string config_path, out_path, suite_flag, f_path, g_path;
  std::uint64_t seed_value = 0;
  bool seed_set = false;

  CLI::App* sim = app.add_subcommand("simulate",
                                     "integrate df/dt = Q(f,f) and write the "
                                     "trajectory CSV");
  sim->add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  sim->add_option("--out", out_path, "trajectory output path");

  CLI::App* check = app.add_subcommand("check",
                                       "run an inequality suite and emit a "
                                       "JSON report array");
  check->add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  check->add_option("--suite", suite_flag,
                    "estim1 | fonc | estim3 | estim5 | lemma-sym | "
                    "cv-identity | apriori | probe-eps");
  check->add_option("--out", out_path, "report output path");
  check
      ->add_option_function<std::uint64_t>(
          "--seed",
          [&](const std::uint64_t& v) {
            seed_value = v;
            seed_set = true;
          },
          "override the ensemble seed")
      ->expected(1);

  CLI::App* collide = app.add_subcommand(
      "collide", "evaluate Q(g,f) for two snapshots, write gain/loss/total");
  collide->add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  collide->add_option("--f", f_path, "f snapshot (CSV)")->required();
  collide->add_option("--g", g_path, "g snapshot (CSV)")->required();
  collide->add_option("--out", out_path, "output prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }

  try {
    boltzlp::RunConfig config = boltzlp::load_config(config_path);
    if (sim->parsed()) {
      boltzlp::run_simulate(config, out_path);
      return kExitPass;
    }
    if (check->parsed()) {
      std::string suite = suite_flag.empty() ? config.suite : suite_flag;
      if (suite.empty()) {
        std::cerr << "check: no suite selected (config \"suite\" or --suite)"
                  << '\n';
        return kExitUsage;
      }
      std::optional<std::uint64_t> seed;
      if (seed_set) seed = seed_value;
      boltzlp::CheckOutcome outcome =
          boltzlp::run_check(config, suite, seed);
      std::string path = out_path.empty() ? config.out_reports : out_path;
      std::ofstream out(path);
      if (!out) {
        std::cerr << "check: cannot write " << path << '\n';
        return kExitUsage;
      }
      out << outcome.json;
      std::cout << (outcome.all_pass ? "PASS" : "FAIL") << " suite=" << suite
                << " reports=" << path << '\n';
      return outcome.all_pass ? kExitPass : kExitFail;
    }
    if (collide->parsed()) {
      boltzlp::run_collide(config, f_path, g_path, out_path);
      return kExitPass;
    }
  } catch (const boltzlp::NonConvergenceError& err) {
    std::cerr << "numeric non-convergence: " << err.what() << '\n';
    return kExitNonConvergence;
  } catch (const boltzlp::ConfigError& err) {
    std::cerr << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << err.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
