#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Two-phase variational solver for exponential-growth energies"};
  app.require_subcommand(1);

  twophase::cli::CommonFlags flags;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", flags.config, "Problem config file")->required();
    cmd->add_option("--out", flags.out, "Output directory (defaults to the config's output_dir)");
    cmd->add_flag("--force", flags.force, "Reuse a nonempty output directory");
    cmd->add_option("--threads", flags.threads, "Worker threads for assembly (default 1)");
  };

  CLI::App* solve = app.add_subcommand("solve", "Minimize the configured energy");
  add_common(solve, true);

  CLI::App* sweep = app.add_subcommand("sweep-k", "Solve and record per-order convergence");
  add_common(sweep, true);

  CLI::App* fb = app.add_subcommand("freeboundary", "Extract and measure the free boundary");
  std::string fb_input;
  std::string epsilons_text = "0.02,0.05,0.1";
  fb->add_option("--config", fb_input, "Config file or an existing solution directory")
      ->required();
  fb->add_option("--epsilons", epsilons_text, "Comma-separated band widths");
  fb->add_option("--out", flags.out, "Output directory");
  fb->add_flag("--force", flags.force, "Reuse a nonempty output directory");
  fb->add_option("--threads", flags.threads, "Worker threads for assembly (default 1)");

  CLI::App* diag = app.add_subcommand("diagnose", "Run the diagnostic battery on a solution");
  std::string solution_dir;
  diag->add_option("--config", solution_dir, "Solution directory (from a previous solve)")
      ->required();
  diag->add_option("--out", flags.out, "Output directory");
  diag->add_flag("--force", flags.force, "Reuse a nonempty output directory");
  diag->add_option("--threads", flags.threads, "Worker threads for assembly (default 1)");

  CLI::App* oracle = app.add_subcommand("oracle1d", "Brute-force 1D kink-position oracle");
  double a = 0.2, b = 0.2, gp = 0.0, gm = 0.0;
  std::string order = "inf";
  long grid_points = 1000000;
  oracle->add_option("--a", a, "Left boundary magnitude, u(0) = -a")->required();
  oracle->add_option("--b", b, "Right boundary value, u(1) = b")->required();
  oracle->add_option("--gamma-plus", gp, "Positive-phase gamma");
  oracle->add_option("--gamma-minus", gm, "Negative-phase gamma");
  oracle->add_option("--k", order, "Truncation order or \"inf\"");
  oracle->add_option("--grid-points", grid_points, "Search grid size");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return twophase::cli::cmd_solve(flags);
  if (sweep->parsed()) return twophase::cli::cmd_sweep_k(flags);
  if (fb->parsed()) {
    std::vector<double> epsilons;
    std::stringstream ss(epsilons_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) epsilons.push_back(std::stod(item));
    }
    return twophase::cli::cmd_freeboundary(flags, fb_input, epsilons);
  }
  if (diag->parsed()) return twophase::cli::cmd_diagnose(flags, solution_dir);
  if (oracle->parsed()) return twophase::cli::cmd_oracle1d(a, b, gp, gm, order, grid_points);
  return 1;
}
