#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memeprobe/commands.hpp"
#include "memeprobe/config.hpp"
#include "memeprobe/error.hpp"

namespace {

struct Flags {
    std::vector<std::string> inputs;
    std::string out_dir = ".";
    std::string format = "records";
    bool drop_incomplete = false;
    std::string config_path;
    std::vector<std::string> specs;
    memeprobe::ConfigOverrides overrides;
    std::vector<std::size_t> sizes;
    std::string scores;
    std::string property = "difficulty";
    std::size_t k = 10;
    bool lowest = false;
    double window = 0.5;
    std::size_t seeds = 10;
};

void add_shared(CLI::App& cmd, Flags& f) {
    cmd.add_option("-i,--input", f.inputs, "Input file (records CSV/JSONL or matrix CSV)");
    cmd.add_option("-o,--out-dir", f.out_dir, "Directory for output files")->capture_default_str();
    cmd.add_option("--format", f.format, "Input format")
        ->check(CLI::IsMember({"records", "matrix"}))
        ->capture_default_str();
    cmd.add_flag("--drop-incomplete", f.drop_incomplete, "Drop models (or probes) with missing records");
    cmd.add_option("-c,--config", f.config_path, "JSON run config; flags override it");
    cmd.add_option("--tau", f.overrides.tau, "Clustering similarity threshold");
    cmd.add_option("--seed", f.overrides.seed, "Base seed for stochastic steps");
    cmd.add_option("--kde-grid", f.overrides.kde_grid, "KDE grid points for JS divergence");
    cmd.add_option("--sizes", f.sizes, "Stability subsample sizes")->delimiter(',');
    cmd.add_option("--repeats", f.overrides.stability_repeats, "Stability repeats per size");
    cmd.add_option("--spec", f.specs, "Extra score, NAME=factor,factor (e.g. Careful=typicality,1-risk)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probe properties, meme scores and analytics from model correctness data", "memeprobe"};
    app.set_version_flag("--version", memeprobe::kVersion);
    app.require_subcommand(1);

    Flags f;
    const std::map<std::string, std::string> help = {
        {"properties", "Per-probe properties, partition and cluster summary"},
        {"scores", "Meme score tables and feature export"},
        {"leaderboard", "Score ranks and rank deltas against accuracy"},
        {"landscape", "Mean properties per dataset"},
        {"heatmap", "Probe similarity matrix ordered by a property"},
        {"stability", "Subsampling stability study"},
        {"route", "Difficulty routing against balanced and single-model baselines"},
        {"topk", "Probes with the highest or lowest value of a property"},
    };
    for (const auto& name : memeprobe::command_names()) {
        auto* cmd = app.add_subcommand(name, help.at(name));
        add_shared(*cmd, f);
        if (name == "leaderboard" || name == "route") {
            cmd->add_option("--scores", f.scores, "Score table (raw fractions, as written to scores_raw.csv)");
        }
        if (name == "topk" || name == "heatmap") {
            cmd->add_option("-p,--property", f.property, "Property name")->capture_default_str();
        }
        if (name == "topk") {
            cmd->add_option("-k", f.k, "Number of probes")->capture_default_str();
            cmd->add_flag("--lowest", f.lowest, "Take the lowest values instead");
        }
        if (name == "route") {
            cmd->add_option("--window", f.window, "Accuracy window for pair selection, in points")
                ->capture_default_str();
            cmd->add_option("--seeds", f.seeds, "Number of balanced-routing seeds")->capture_default_str();
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e);
        return status == 0 ? 0 : 2;  // help and version exit cleanly
    }

    memeprobe::Invocation inv;
    inv.command = app.get_subcommands().front()->get_name();
    inv.inputs.assign(f.inputs.begin(), f.inputs.end());
    inv.out_dir = f.out_dir;
    inv.format = f.format == "matrix" ? memeprobe::InputFormat::Matrix : memeprobe::InputFormat::Records;
    inv.policy = f.drop_incomplete ? memeprobe::IngestPolicy::DropIncomplete : memeprobe::IngestPolicy::Strict;
    if (!f.scores.empty()) inv.scores = f.scores;
    inv.property = f.property;
    inv.k = f.k;
    inv.lowest = f.lowest;
    inv.window_points = f.window;
    inv.route_seeds = f.seeds;

    try {
        if (!f.config_path.empty()) inv.config = memeprobe::load_config(f.config_path);
        if (!f.sizes.empty()) f.overrides.stability_sizes = f.sizes;
        for (const auto& s : f.specs) f.overrides.score_specs.push_back(memeprobe::parse_spec_argument(s));
        memeprobe::apply_overrides(inv.config, f.overrides);
    } catch (const memeprobe::Error& e) {
        std::cerr << "memeprobe: " << inv.command << " failed in module '" << e.module() << "': " << e.what() << '\n';
        return 1;
    }
    return memeprobe::run(inv, std::cerr);
}
