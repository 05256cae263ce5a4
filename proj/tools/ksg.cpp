#include <iostream>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ksg/commands.hpp"

namespace {

using namespace ksg;

int dispatch(const std::string& command, const cli::Config& config, const std::filesystem::path& out) {
  if (command == "precompute-weights") {
    cli::cmd_precompute_weights(config, out, std::cout);
    return cli::kExitOk;
  }
  if (command == "run") {
    solver::RunConfig rc = config.run;
    if (!out.empty()) rc.output.dir = out;
    std::cout << cli::describe(rc) << '\n';
    const auto result = solver::run(rc);
    std::cout << "run: " << result.state.step_index << " steps, " << result.series.size() << " records, "
              << result.seconds << " s\n";
    return cli::kExitOk;
  }
  if (command == "converge-n") {
    const auto rows = cli::cmd_converge_n(config, out, std::cerr);
    std::cout << cli::sweep_csv("N", rows, true);
    return cli::kExitOk;
  }
  if (command == "converge-k") {
    const auto rows = cli::cmd_converge_k(config, out, std::cerr);
    std::cout << cli::sweep_csv("K", rows, false);
    return cli::kExitOk;
  }
  if (command == "validate-ic") {
    cli::cmd_validate_ic(config, out, std::cout);
    return cli::kExitOk;
  }
  const auto report = cli::cmd_oracle_check(config, out, std::cout);
  return report.passed() ? cli::kExitOk : cli::kExitThreshold;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-Galerkin x stochastic Galerkin solver for the homogeneous Boltzmann equation"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  int threads = 0;

  const char* commands[][2] = {
      {"precompute-weights", "build or load the cached weight table"},
      {"run", "integrate the configured problem to t_end"},
      {"converge-n", "error sweep over sweep.n_list"},
      {"converge-k", "error sweep over sweep.k_list"},
      {"validate-ic", "check the projected initial data"},
      {"oracle-check", "compare against direct quadrature (N <= 6)"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "override, section.key=value (repeatable)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitValidation;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const auto config = cli::parse_config(config_path, overrides);
    return dispatch(command, config, out_dir);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return cli::kExitRuntime;
  }
}
