#include <iostream>

#include "CLI11.hpp"
#include "app.hpp"

int main(int argc, char** argv) {
  using namespace treewalk::app;
  CLI::App cli{"Random walks on the affine group of a homogeneous tree"};
  cli.set_version_flag("--version", kVersion);
  cli.require_subcommand(1);

  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment config file")->required();
    sub->add_option("--seed", o.seed, "override the config seed");
    sub->add_option("--out", o.out, "output directory");
  };
  auto sampling = [&](CLI::App* sub) {
    sub->add_option("--trajectories", o.trajectories, "number of trajectories")->check(CLI::PositiveNumber);
    sub->add_option("--horizon", o.horizon, "steps per trajectory")->check(CLI::PositiveNumber);
  };

  auto* validate = cli.add_subcommand("validate", "check a config and its step law");
  common(validate);

  auto* simulate = cli.add_subcommand("simulate", "run trajectories and report the height regime");
  common(simulate);
  sampling(simulate);
  simulate->add_flag("--dump", o.dump, "write trajectories.csv");

  auto* verify = cli.add_subcommand("verify", "run verification suites");
  common(verify);
  sampling(verify);
  verify->add_option("--suite", o.suite, "suite to run")
      ->check(CLI::IsMember({"algebra", "regimes", "wald", "renewal", "boundary-limit", "omega-limit", "all"}));
  verify->add_option("--tol", o.tol, "tolerance in combined standard errors")->check(CLI::PositiveNumber);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  if (*validate) return cmd_validate(o, std::cout, std::cerr);
  if (*simulate) return cmd_simulate(o, std::cout, std::cerr);
  return cmd_verify(o, std::cout, std::cerr);
}
