#include "runner.hpp"

#include "anosov/error.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    using namespace anosov::lab;

    CLI::App app{"Numerical experiments on Anosov endomorphisms of the torus", "anosov-lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    std::string config_path;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
    const std::map<std::string, std::string> descriptions = {
        {"verify-anosov", "certify hyperbolicity with a sampled cone field"},
        {"preimage-tree", "enumerate all pre-histories of a point to a fixed depth"},
        {"dispersion", "census of unstable directions at random points, with every direction dumped"},
        {"dichotomy-scan", "fraction of random points whose unstable directions disperse"},
        {"angle-decay", "forward decay of angles between unstable directions"},
        {"lyapunov-census", "unstable Lyapunov exponents at random points against the linear model"},
        {"quasi-iso", "geometry of a lifted unstable leaf"},
        {"ergodic-test", "Birkhoff averages of trigonometric observables"},
    };
    std::vector<CLI::App*> commands;
    for (const auto& name : subcommands()) {
        CLI::App* sc = app.add_subcommand(name, descriptions.at(name));
        sc->add_option("--config", config_path, "experiment configuration file")->required()->check(CLI::ExistingFile);
        sc->add_option("--seed", seed, "master seed (overrides [run] seed)");
        sc->add_option("--threads", threads, "worker threads, 0 = all cores (overrides [run] threads)")
            ->check(CLI::NonNegativeNumber);
        sc->add_option("--out", out, "output directory (overrides [run] out)");
        commands.push_back(sc);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    RunRequest request;
    for (CLI::App* sc : commands) {
        if (!sc->parsed()) continue;
        request.subcommand = sc->get_name();
        request.config_path = config_path;
        if (sc->count("--seed")) request.seed = seed;
        if (sc->count("--threads")) request.threads = threads;
        if (sc->count("--out")) request.out = out;
    }

    try {
        const RunOutcome outcome = run(request, std::cerr);
        return exit_code(outcome);
    } catch (const ConfigError& e) {
        std::cerr << "anosov-lab: " << config_path << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "anosov-lab: error: " << e.what() << "\n";
        return 2;
    }
}
