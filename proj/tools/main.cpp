#include "commands.hpp"
#include "config.hpp"

#include "cnduality/errors.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace cnduality::cli;

    CLI::App app{"Sutherland / RSvD action-angle duality toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::vector<std::string> tol_flags;
    app.add_option("--tol", tol_flags, "Tolerance override name=value (repeatable)")->take_all();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Integrate one model and write a CSV trajectory");
    simulate->add_option("--config", sim.config_path, "Run config (JSON)")->required();
    simulate->add_option("--out", sim.out_path, "Output CSV path")->required();
    simulate->add_flag("--emit-plot-data", sim.emit_plot_data, "Also write <out>.plot.dat");

    DualizeArgs dual;
    auto* dualize = app.add_subcommand("dualize", "Map states to the dual model");
    dualize->add_option("--config", dual.config_path, "Config with initial_state or states")->required();
    dualize->add_option("--direction", dual.direction, "s2r or r2s")->check(CLI::IsMember({"s2r", "r2s"}));

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify", "Run the randomized verification suite");
    verify->add_option("--seed", ver.seed, "Sampler seed");
    verify->add_option("--n-max", ver.n_max, "Largest particle number")->check(CLI::PositiveNumber);
    verify->add_option("--draws", ver.draws, "Base sample size")->check(CLI::PositiveNumber);
    verify->add_option("--report", ver.report_path, "Write a JSON report here");

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

    TolMap tol;
    try {
        tol = parse_tol_flags(tol_flags);
    } catch (const cnduality::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (*simulate) {
        sim.tol = tol;
        return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*dualize) {
        dual.tol = tol;
        return cmd_dualize(dual, std::cout, std::cerr);
    }
    ver.tol = tol;
    return cmd_verify(ver, std::cout, std::cerr);
}
