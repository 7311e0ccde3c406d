#include "nlwave/runner.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char **argv) {
  CLI::App app{"Pseudospectral solver for nonlocal wave equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  double until = 0.0;

  auto *run = app.add_subcommand("run", "Run a scenario");
  run->add_option("--config", config_path, "JSON run configuration")->required();
  auto *out_opt = run->add_option("--out", out_dir, "Output directory");
  auto *until_opt = run->add_option("--until", until, "Override the final time");

  auto *validate = app.add_subcommand("validate", "Run the hypothesis checks only");
  validate->add_option("--config", config_path, "JSON run configuration")->required();

  app.add_subcommand("presets", "List symbol, nonlinearity and profile presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("presets")) {
      std::cout << "symbols:";
      for (const auto &n : nlwave::symbol_preset_names()) std::cout << " " << n;
      std::cout << "\nnonlinearity:";
      for (const auto &n : nlwave::nonlinearity_preset_names()) std::cout << " " << n;
      std::cout << "\ninitial_data:";
      for (const auto &n : nlwave::profile_names()) std::cout << " " << n;
      std::cout << "\n";
      return 0;
    }

    nlwave::RunConfig cfg = nlwave::load_config(config_path);

    if (app.got_subcommand("validate")) {
      nlwave::Grid grid = nlwave::make_grid(cfg);
      nlwave::SymbolTable table =
          nlwave::build_symbol_table(grid, nlwave::make_symbols(cfg));
      nlwave::write_checks_report(std::cout, cfg, table,
                                  nlwave::make_nonlinearity(cfg));
      return 0;
    }

    std::optional<std::filesystem::path> dir;
    if (*out_opt) dir = out_dir;
    std::optional<double> t_end;
    if (*until_opt) t_end = until;
    auto result = nlwave::run_scenario(cfg, dir, t_end);
    if (result.exit_code != nlwave::kExitConfigError)
      std::cout << "outcome: " << nlwave::to_string(result.status.outcome)
                << "\nt_reached: " << nlwave::format_double(result.status.t_reached)
                << "\nmax_relative_drift: " << nlwave::format_double(result.max_drift)
                << "\n";
    return result.exit_code;
  } catch (const std::exception &e) {
    std::cerr << "nlwave: " << e.what() << "\n";
    return nlwave::kExitConfigError;
  }
}
