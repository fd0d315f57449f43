#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qhd/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qhdflow - QHD finite-difference solver for laminar "
               "backward-facing-step channel flow"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<double> re_values;
  std::string case_name;

  auto* run = app.add_subcommand("run", "run one configuration to steady state");
  run->add_option("--config", config_path, "JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "run a list of Reynolds numbers");
  sweep->add_option("--config", config_path, "base JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--re", re_values, "Reynolds numbers")->required();
  sweep->add_option("--out", out_dir, "output directory")->required();

  auto* validate = app.add_subcommand("validate", "built-in verification cases");
  validate->add_option("--case", case_name, "poiseuille or manufactured")
      ->required()
      ->check(CLI::IsMember({"poiseuille", "manufactured"}));
  validate->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return qhd::cmd_run(config_path, out_dir);
  if (sweep->parsed()) return qhd::cmd_sweep(config_path, re_values, out_dir);
  if (validate->parsed()) return qhd::cmd_validate(case_name, out_dir);
  return qhd::exit_code::usage;
}
