// qhdlab command-line front end.
//
//   qhdlab run <config>         integrate a scenario, emit CSV + summary JSON
//   qhdlab predict <config>     initial-data report only (I0, M0, T*)
//   qhdlab verify <suite>       built-in verification suites
//   qhdlab weights <domain>     weight construction + condition checks
//   qhdlab stationary <config>  shoot a stationary profile
//
// Exit codes: 0 success, 2 config error, 3 solver instability,
// 4 monitor/check failure.

#include "qhdlab/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int emit(const qhdlab::ScenarioResult& res, bool quiet) {
    if (!quiet) std::cout << res.summary.dump(2) << "\n";
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum hydrodynamic blow-up laboratory"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress summary on stdout");

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run a scenario config");
    run_cmd->add_option("config", config_path, "INI scenario file")->required();

    std::string predict_path;
    auto* predict_cmd = app.add_subcommand("predict", "initial-data report only");
    predict_cmd->add_option("config", predict_path, "INI scenario file")->required();

    std::string suite = "all";
    auto* verify_cmd = app.add_subcommand("verify", "run a built-in suite");
    verify_cmd->add_option("suite", suite,
                           "all|numerics|physics|identities|weights|stationary");

    std::string domain;
    int dim = 3;
    double quad_c = 0.5;
    std::vector<double> quad_q;
    std::size_t samples = 10000;
    unsigned seed = 12345;
    std::string out_dir = ".";
    auto* weights_cmd = app.add_subcommand("weights", "weight construction + checks");
    weights_cmd->add_option("domain", domain, "ball|cylinder|box|quadratic")->required();
    weights_cmd->add_option("--dim", dim, "space dimension");
    weights_cmd->add_option("--c", quad_c, "quadratic constant");
    weights_cmd->add_option("--q", quad_q, "quadratic coefficients");
    weights_cmd->add_option("--samples", samples, "interior sample count");
    weights_cmd->add_option("--seed", seed, "sampling seed");
    weights_cmd->add_option("--out", out_dir, "output directory");

    std::string stationary_path;
    auto* stat_cmd = app.add_subcommand("stationary", "shoot a stationary profile");
    stat_cmd->add_option("config", stationary_path, "INI scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return emit(qhdlab::run_scenario(qhdlab::load_scenario(config_path)), quiet);
        if (predict_cmd->parsed())
            return emit(qhdlab::predict_scenario(qhdlab::load_scenario(predict_path)),
                        quiet);
        if (verify_cmd->parsed()) {
            auto checks = qhdlab::verify_suite(suite);
            bool all_ok = true;
            for (const auto& c : checks) {
                std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                          << "  value=" << qhdlab::fmt17(c.value)
                          << "  threshold=" << qhdlab::fmt17(c.threshold) << "\n";
                all_ok = all_ok && c.pass;
            }
            std::cout << (all_ok ? "suite passed" : "suite FAILED") << " (" << suite
                      << ", " << checks.size() << " checks)\n";
            return all_ok ? 0 : 4;
        }
        if (weights_cmd->parsed())
            return emit(qhdlab::run_weights_check(domain, dim, quad_c, quad_q, samples,
                                                  seed, out_dir),
                        quiet);
        if (stat_cmd->parsed())
            return emit(
                qhdlab::run_stationary_scenario(qhdlab::load_scenario(stationary_path)),
                quiet);
    } catch (const qhdlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qhdlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
