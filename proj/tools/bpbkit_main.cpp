// bpbkit command line: run the corrections on instance files, generate
// near-attaining instances, sweep the distance/epsilon envelope, estimate
// numerical radii against the grid oracle, and demonstrate why the attaining
// pair in the operator correction cannot be relaxed to ball pairs.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bpbkit/cli.hpp"

namespace {

std::uint64_t env_seed_default() {
  const char* s = std::getenv("BPBKIT_SEED");
  if (!s) return 0;
  char* end = nullptr;
  std::uint64_t v = std::strtoull(s, &end, 10);
  return (end && *end == '\0') ? v : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constructive Bishop-Phelps-Bollobas corrections on l1/c0"};
  app.require_subcommand(1);
  const std::uint64_t seed_default = env_seed_default();

  bpbkit::cli::CorrectOptions co;
  co.seed = seed_default;
  CLI::App* correct = app.add_subcommand(
      "correct", "run a correction on an instance file and verify it");
  correct->add_option("instance", co.instance_path, "instance file")->required();
  correct->add_option("--construction", co.construction,
                      "pair-l1 dispatch: first | second")
      ->check(CLI::IsMember({"first", "second"}));
  correct->add_flag("--modulus", co.modulus,
                    "use the |pairing| hypothesis (rotating wrapper)");
  correct->add_flag("--force", co.force,
                    "run even if the hypothesis fails (unverified)");
  correct->add_flag("--normalize", co.normalize,
                    "rescale the operator by 1/nu(T) first");
  correct->add_option("--tol", co.tol, "membership tolerance");
  correct->add_option("--seed", co.seed, "seed for the verification oracle");
  correct->add_option("-o,--output", co.output_path, "report path (default stdout)");

  bpbkit::cli::GenerateOptions go;
  go.seed = seed_default;
  std::string gen_kind = "pair-l1";
  std::string gen_field = "complex";
  CLI::App* generate =
      app.add_subcommand("generate", "emit near-attaining instance files");
  generate->add_option("--kind", gen_kind, "pair-l1 | operator-l1 | operator-c0")
      ->check(CLI::IsMember({"pair-l1", "operator-l1", "operator-c0"}));
  generate->add_option("--n", go.n, "dimension")->check(CLI::PositiveNumber);
  generate->add_option("--epsilon", go.epsilon, "target epsilon in (0,1)");
  generate->add_option("--delta", go.delta,
                       "near-attainment slack (default: half the threshold; "
                       "0 gives an exactly attaining instance)");
  generate->add_option("--seed", go.seed, "master seed");
  generate->add_option("--count", go.count, "number of instances");
  generate->add_option("--field", gen_field, "real | complex")
      ->check(CLI::IsMember({"real", "complex"}));
  generate->add_option("-o,--output", go.output_path,
                       "output path (required for count > 1)");

  bpbkit::cli::SweepOptions so;
  so.seed = seed_default;
  std::string sweep_field = "complex";
  CLI::App* sweep = app.add_subcommand(
      "sweep", "CSV of realized distances against the theorem thresholds");
  sweep->add_option("--kind", so.kind,
                    "pair-first | pair-second | operator-l1 | operator-c0")
      ->check(CLI::IsMember(
          {"pair-first", "pair-second", "operator-l1", "operator-c0"}));
  sweep->add_option("--n", so.n, "dimension")->check(CLI::PositiveNumber);
  sweep->add_option("--epsilons", so.epsilons, "epsilon values")
      ->delimiter(',');
  sweep->add_option("--trials", so.trials, "trials per epsilon");
  sweep->add_option("--seed", so.seed, "master seed");
  sweep->add_option("--field", sweep_field, "real | complex")
      ->check(CLI::IsMember({"real", "complex"}));
  sweep->add_option("-o,--output", so.output_path, "CSV path (default stdout)");

  bpbkit::cli::RadiusOptions ro;
  ro.seed = seed_default;
  CLI::App* radius = app.add_subcommand(
      "radius", "closed-form numerical radius, optionally cross-checked");
  radius->add_option("instance", ro.instance_path, "instance file")->required();
  radius->add_flag("--oracle", ro.oracle, "also run the grid oracle");
  radius->add_option("--resolution", ro.resolution, "oracle sample budget");
  radius->add_option("--seed", ro.seed, "oracle seed");

  bpbkit::cli::DemoOptions dm;
  dm.seed = seed_default;
  CLI::App* demo = app.add_subcommand(
      "demo-counterexample",
      "max |phi(x)| over ball pairs near (e1, e2*) for the shift operator");
  demo->add_option("--epsilon", dm.epsilon, "perturbation radius in (0, 1/2)");
  demo->add_option("--samples", dm.samples, "random sample count")
      ->check(CLI::PositiveNumber);
  demo->add_option("--seed", dm.seed, "sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : bpbkit::cli::kExitError;
  }

  try {
    if (correct->parsed())
      return bpbkit::cli::run_correct(co, std::cout, std::cerr);
    if (generate->parsed()) {
      go.kind = bpbkit::kind_from_string(gen_kind);
      go.field = bpbkit::field_from_string(gen_field);
      return bpbkit::cli::run_generate(go, std::cout, std::cerr);
    }
    if (sweep->parsed()) {
      so.field = bpbkit::field_from_string(sweep_field);
      return bpbkit::cli::run_sweep(so, std::cout, std::cerr);
    }
    if (radius->parsed())
      return bpbkit::cli::run_radius(ro, std::cout, std::cerr);
    if (demo->parsed()) return bpbkit::cli::run_demo(dm, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return bpbkit::cli::kExitError;
}
