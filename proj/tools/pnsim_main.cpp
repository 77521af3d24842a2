// pnsim: pseudo-spectral simulator and Littlewood-Paley decay harness for
// the pressureless compressible Navier-Stokes system on a periodic box.
//
// Exit codes: 0 all verdicts pass, 1 execution error, 2 verdict failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pns/run.hpp"

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pns::Error(pns::ErrorKind::IoFailure, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pressureless Navier-Stokes decay harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string from_path;
    std::string output_dir_flag;

    auto add_common = [&](CLI::App* sub, bool wants_from) {
        sub->add_option("config", config_path, "run configuration file")->required();
        if (wants_from)
            sub->add_option("--from", from_path,
                            "checkpoint (simulate/norms) or norm-series CSV (fit)");
        sub->add_option("--output-dir", output_dir_flag, "override [run] output_dir");
    };

    add_common(app.add_subcommand("simulate", "nonlinear run with decay verdicts"), true);
    add_common(app.add_subcommand("linear", "exact-propagator decay run"), false);
    add_common(app.add_subcommand("gen-data", "generate initial data checkpoint"), false);
    add_common(app.add_subcommand("norms", "instantaneous norms of a checkpoint"), true);
    add_common(app.add_subcommand("fit", "fit a previously written norm CSV"), true);
    add_common(app.add_subcommand("stability", "two-run uniform stability experiment"), false);
    add_common(app.add_subcommand("verify", "projector/semigroup/norm-oracle suite"), false);

    CLI11_PARSE(app, argc, argv);
    std::string sub = app.get_subcommands().front()->get_name();

    try {
        pns::RunConfig cfg = pns::parse_config(read_text(config_path));
        cfg.experiment = sub;
        if (const char* env = std::getenv("PNSIM_OUTPUT_DIR")) cfg.output_dir = env;
        if (!output_dir_flag.empty()) cfg.output_dir = output_dir_flag;
        std::optional<std::string> from;
        if (!from_path.empty()) from = from_path;
        return pns::run(sub, cfg, from, std::cout);
    } catch (const pns::ConfigError& e) {
        for (const auto& v : e.violations()) std::cerr << "error: config: " << v << "\n";
        return 1;
    } catch (const pns::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: unexpected: " << e.what() << "\n";
        return 1;
    }
}
