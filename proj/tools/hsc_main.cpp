// Batch front end: preprocess | train | evaluate | crossval, driven by a
// key=value config file with command-line overrides. Exit codes: 0 success,
// 1 usage/config error, 2 data error, 3 numeric/internal failure.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hsc/cli/commands.hpp"
#include "hsc/cli/config.hpp"
#include "hsc/error.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string model;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t classes = 0;
    bool class_weights = false;
    bool no_class_weights = false;
    bool skip_bad = false;
};

void attach_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "configuration file (key = value lines)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "override the run seed");
    cmd->add_option("--model", o.model, "override the model")
        ->check(CLI::IsMember({"mbdcn", "lscn", "cnn1d", "mlp"}));
    cmd->add_option("--classes", o.classes, "override the class mode (12 or 2)")
        ->check(CLI::IsMember({"12", "2"}));
    cmd->add_flag("--class-weights", o.class_weights, "enable inverse-frequency class weights");
    cmd->add_flag("--no-class-weights", o.no_class_weights, "disable class weights");
    cmd->add_option("--out", o.out, "override the output directory");
    cmd->add_flag("--skip-bad", o.skip_bad, "preprocess: skip recordings that fail to load");
}

hsc::cli::RunConfig resolve(const CLI::App* cmd, const CommonOpts& o) {
    hsc::cli::RunConfig cfg;
    if (!o.config.empty()) cfg = hsc::cli::load_config(o.config);
    if (cmd->count("--seed") > 0) cfg.seed = o.seed;
    if (!o.model.empty()) cfg.model = o.model;
    if (cmd->count("--classes") > 0) cfg.classes = o.classes;
    if (o.class_weights && o.no_class_weights)
        throw hsc::ConfigError("--class-weights conflicts with --no-class-weights");
    if (o.class_weights) cfg.class_weighting = true;
    if (o.no_class_weights) cfg.class_weighting = false;
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.skip_bad) cfg.skip_bad = true;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"heart-sound classification toolkit"};
    app.require_subcommand(1);

    CommonOpts po, to, eo, co;
    CLI::App* pre = app.add_subcommand("preprocess", "condition recordings and cache spectra");
    attach_common(pre, po);
    CLI::App* trn = app.add_subcommand("train", "train a model on the cached spectra");
    attach_common(trn, to);
    CLI::App* evl = app.add_subcommand("evaluate", "score a checkpoint on the test split");
    attach_common(evl, eo);
    CLI::App* cvl = app.add_subcommand("crossval", "train+evaluate over five seeds");
    attach_common(cvl, co);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1; // any usage problem maps to exit code 1
    }

    try {
        if (pre->parsed()) {
            hsc::cli::run_preprocess(resolve(pre, po), std::cout);
        } else if (trn->parsed()) {
            hsc::cli::run_train(resolve(trn, to), std::cout);
        } else if (evl->parsed()) {
            hsc::cli::run_evaluate(resolve(evl, eo), std::cout);
        } else if (cvl->parsed()) {
            hsc::cli::run_crossval(resolve(cvl, co), std::cout);
        }
        return 0;
    } catch (const hsc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const hsc::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const hsc::StateError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const hsc::Error& e) { // DataError, ShapeError, other data-shaped failures
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
