#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "fracsys/cli.hpp"

using namespace fracsys;

int main(int argc, char** argv) {
    CLI::App app{"Discrete fractional systems: solvers, positivity checks, identity suite"};
    app.require_subcommand(1);

    const std::map<std::string, KernelVariant> kernels{{"corrected", KernelVariant::Corrected},
                                                       {"literal", KernelVariant::Literal}};

    std::string config_path;
    cli::SolveFlags solve_flags;
    auto* solve = app.add_subcommand("solve", "Solve the system described by a JSON config");
    solve->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
    solve->add_option("-o,--output", solve_flags.output, "Trajectory CSV path (default: stdout)");
    solve->add_option("-r,--report", solve_flags.report, "JSON report path");
    solve->add_option("--kernel", solve_flags.kernel, "Forced-term kernel for series solvers")
        ->transform(CLI::CheckedTransformer(kernels, CLI::ignore_case));
    solve->add_flag("--fail-on-violation", solve_flags.fail_on_violation,
                    "Exit 3 when a positivity check fails");

    auto* compare = app.add_subcommand("compare", "Per-step discrepancy between recursive and series solvers");
    compare->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
    compare->add_option("-r,--report", solve_flags.report, "JSON report path");
    compare->add_option("--kernel", solve_flags.kernel, "Forced-term kernel")
        ->transform(CLI::CheckedTransformer(kernels, CLI::ignore_case));

    cli::PositivityFlags pos_flags;
    auto* positivity = app.add_subcommand("positivity", "Positivity criterion and randomized falsification");
    positivity->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
    positivity->add_option("--tau", pos_flags.tau, "Local horizon for the state scan")->capture_default_str();
    positivity->add_option("--samples", pos_flags.samples, "Random nonnegative initial pairs to try");
    positivity->add_option("--seed", pos_flags.seed, "Seed (default: config seed)");
    positivity->add_option("-r,--report", pos_flags.report, "JSON report path");
    positivity->add_flag("--fail-on-violation", pos_flags.fail_on_violation, "Exit 3 on a violation");

    cli::VerifyFlags verify_flags;
    auto* verify = app.add_subcommand("verify", "Run the discrete identity suite");
    verify->add_option("--seed", verify_flags.seed, "Seed for randomized inputs")->capture_default_str();
    verify->add_option("-r,--report", verify_flags.report, "JSON report path");
    verify->add_option("--perturb-kernel", verify_flags.kernel_perturbation)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kOk : cli::kValidationError;
    }

    if (verify->parsed()) return cli::verify_suite(verify_flags, std::cout, std::cerr);

    cli::RunConfig cfg;
    try {
        cfg = cli::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kValidationError;
    }
    if (solve->parsed()) return cli::run(cfg, solve_flags, std::cout, std::cerr);
    if (compare->parsed()) return cli::run_compare(cfg, solve_flags, std::cout, std::cerr);
    return cli::run_positivity(cfg, pos_flags, std::cout, std::cerr);
}
