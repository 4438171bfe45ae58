#include "memeprobe/commands.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "memeprobe/analysis.hpp"
#include "memeprobe/analytics.hpp"
#include "memeprobe/error.hpp"
#include "memeprobe/io.hpp"
#include "memeprobe/routing.hpp"

namespace memeprobe {

namespace fs = std::filesystem;

namespace {

constexpr const char* kModule = "cli";

struct Context {
    const Invocation& inv;
    std::ostream& log;
};

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, kModule, "cannot open '" + path.string() + "'");
    return in;
}

void write_output(const Context& ctx, const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path target = ctx.inv.out_dir / name;
    const fs::path temp = ctx.inv.out_dir / ("." + name + ".tmp");
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, kModule, "cannot write '" + temp.string() + "'");
        fmt::print(out, "# memeprobe {} command={} tau={} seed={}\n", kVersion, ctx.inv.command, ctx.inv.config.tau,
                   ctx.inv.config.seed);
        body(out);
        out.flush();
        if (!out) throw Error(ErrorCode::Io, kModule, "failed writing '" + temp.string() + "'");
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        fs::remove(temp, ec);
        throw Error(ErrorCode::Io, kModule, "cannot move output into '" + target.string() + "'");
    }
    fmt::print(ctx.log, "memeprobe: wrote {}\n", target.string());
}

void require_inputs(const Context& ctx, std::size_t min, std::size_t max) {
    const std::size_t n = ctx.inv.inputs.size();
    if (n < min || n > max) {
        const std::string want = min == max ? std::to_string(min) : fmt::format("{} or more", min);
        throw Error(ErrorCode::InvalidArgument, kModule,
                    fmt::format("'{}' takes {} --input file(s), got {}", ctx.inv.command, want, n));
    }
}

std::string file_safe(std::string_view name) {
    std::string out;
    for (char c : name) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        out += ok ? c : '_';
    }
    return out.empty() ? "dataset" : out;
}

std::vector<PerceptionMatrix> load_all(const Context& ctx) {
    std::vector<PerceptionMatrix> matrices;
    for (const auto& path : ctx.inv.inputs) {
        matrices.push_back(load_matrix(path, ctx.inv.format, ctx.inv.policy));
        for (std::size_t a = 0; a + 1 < matrices.size(); ++a) {
            if (matrices[a].dataset_id() == matrices.back().dataset_id()) {
                throw Error(ErrorCode::InvalidArgument, kModule,
                            "dataset '" + matrices.back().dataset_id() + "' appears in more than one input");
            }
        }
    }
    return matrices;
}

Property property_argument(const Invocation& inv) {
    const auto p = parse_property(inv.property);
    if (!p) throw Error(ErrorCode::InvalidArgument, kModule, "unknown property '" + inv.property + "'");
    return *p;
}

// Per-dataset tables followed by their model-wise average when there are several.
std::pair<std::vector<MemeScoreTable>, MemeScoreTable> score_inputs(const Context& ctx,
                                                                    const std::vector<PerceptionMatrix>& matrices) {
    std::vector<MemeScoreTable> tables;
    for (const auto& matrix : matrices) {
        const auto props = compute_properties(matrix, ctx.inv.config.tau);
        tables.push_back(score_catalog(matrix, props, ctx.inv.config.score_specs));
    }
    MemeScoreTable combined = tables.size() == 1 ? tables.front() : average_tables(tables);
    return {std::move(tables), std::move(combined)};
}

void cmd_properties(const Context& ctx) {
    require_inputs(ctx, 1, 1);
    const auto matrix = load_matrix(ctx.inv.inputs.front(), ctx.inv.format, ctx.inv.policy);
    const auto analysis = analyze_probes(matrix, ctx.inv.config.tau);
    write_output(ctx, "properties.csv", [&](std::ostream& out) { io::write_properties_csv(out, analysis.properties); });
    write_output(ctx, "partition.csv",
                 [&](std::ostream& out) { io::write_partition_csv(out, matrix.probe_ids(), analysis.partition); });
    write_output(ctx, "clusters.csv", [&](std::ostream& out) {
        io::write_cluster_summary_csv(out, matrix.probe_ids(), analysis.partition, analysis.cluster_intra);
    });
}

void cmd_scores(const Context& ctx) {
    require_inputs(ctx, 1, SIZE_MAX);
    const auto matrices = load_all(ctx);
    const auto scored = score_inputs(ctx, matrices);
    const auto& tables = scored.first;
    const auto& combined = scored.second;
    if (tables.size() > 1) {
        for (std::size_t t = 0; t < tables.size(); ++t) {
            const std::string stem = "scores_" + file_safe(matrices[t].dataset_id());
            write_output(ctx, stem + ".csv", [&](std::ostream& out) { io::write_score_table_csv(out, tables[t], true); });
            write_output(ctx, stem + "_raw.csv",
                         [&](std::ostream& out) { io::write_score_table_csv(out, tables[t], false); });
        }
    }
    write_output(ctx, "scores.csv", [&](std::ostream& out) { io::write_score_table_csv(out, combined, true); });
    write_output(ctx, "scores_raw.csv", [&](std::ostream& out) { io::write_score_table_csv(out, combined, false); });
    write_output(ctx, "features.csv", [&](std::ostream& out) { io::write_features_csv(out, combined); });
}

void cmd_leaderboard(const Context& ctx) {
    MemeScoreTable table;
    if (ctx.inv.scores) {
        require_inputs(ctx, 0, 0);
        auto in = open_input(*ctx.inv.scores);
        table = io::read_score_table_csv(in);
    } else {
        require_inputs(ctx, 1, SIZE_MAX);
        table = score_inputs(ctx, load_all(ctx)).second;
    }
    const auto board = leaderboard(table);
    write_output(ctx, "leaderboard.csv", [&](std::ostream& out) { io::write_leaderboard_csv(out, board); });
}

void cmd_landscape(const Context& ctx) {
    require_inputs(ctx, 1, SIZE_MAX);
    std::map<std::string, PropertySet> sets;
    for (const auto& matrix : load_all(ctx)) {
        sets.emplace(matrix.dataset_id(), compute_properties(matrix, ctx.inv.config.tau));
    }
    const auto rows = dataset_landscape(sets);
    write_output(ctx, "landscape.csv", [&](std::ostream& out) { io::write_landscape_csv(out, rows); });
}

void cmd_heatmap(const Context& ctx) {
    require_inputs(ctx, 1, 1);
    const Property order_by = property_argument(ctx.inv);
    const auto matrix = load_matrix(ctx.inv.inputs.front(), ctx.inv.format, ctx.inv.policy);
    const auto props = compute_properties(matrix, ctx.inv.config.tau);
    const auto heatmap = heatmap_export(hamming_similarity(matrix), matrix.probe_ids(), props[order_by]);
    write_output(ctx, "heatmap.csv", [&](std::ostream& out) { io::write_heatmap_csv(out, heatmap); });
}

void cmd_stability(const Context& ctx) {
    require_inputs(ctx, 1, 1);
    const auto matrix = load_matrix(ctx.inv.inputs.front(), ctx.inv.format, ctx.inv.policy);
    const auto& cfg = ctx.inv.config;
    StabilityOptions options;
    options.sizes = cfg.stability_sizes;
    options.repeats = cfg.stability_repeats;
    options.seed = cfg.seed;
    options.tau = cfg.tau;
    options.kde_grid = cfg.kde_grid;
    const auto report = subsample_stability(matrix, options, cfg.score_specs);
    write_output(ctx, "stability.csv", [&](std::ostream& out) { io::write_stability_csv(out, report); });
}

void cmd_route(const Context& ctx) {
    require_inputs(ctx, 1, 1);
    if (ctx.inv.route_seeds == 0) throw Error(ErrorCode::InvalidArgument, kModule, "--seeds must be positive");
    auto in = open_input(ctx.inv.inputs.front());
    const auto instance = io::read_routing_instance_csv(in);

    std::string hi = "hi";
    std::string lo = "lo";
    if (ctx.inv.scores) {
        auto scores_in = open_input(*ctx.inv.scores);
        std::tie(hi, lo) = select_pair(io::read_score_table_csv(scores_in), ctx.inv.window_points / 100.0);
    }
    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 0; s < ctx.inv.route_seeds; ++s) seeds.push_back(ctx.inv.config.seed + s);
    const auto report = evaluate_routing(instance, seeds, hi, lo);
    write_output(ctx, "routing.txt", [&](std::ostream& out) { out << format_routing_report(report); });
    write_output(ctx, "routing_seeds.csv",
                 [&](std::ostream& out) { io::write_routing_seeds_csv(out, report.balanced); });
}

void cmd_topk(const Context& ctx) {
    require_inputs(ctx, 1, 1);
    const Property p = property_argument(ctx.inv);
    const auto matrix = load_matrix(ctx.inv.inputs.front(), ctx.inv.format, ctx.inv.policy);
    const auto props = compute_properties(matrix, ctx.inv.config.tau);
    const auto ids = top_k(props.probe_ids, props[p], ctx.inv.k, ctx.inv.lowest ? Direction::Lowest : Direction::Highest);
    write_output(ctx, "topk.csv",
                 [&](std::ostream& out) { io::write_topk_csv(out, property_name(p), ids, props); });
}

using Handler = void (*)(const Context&);

const std::map<std::string, Handler, std::less<>>& handlers() {
    static const std::map<std::string, Handler, std::less<>> table = {
        {"properties", cmd_properties}, {"scores", cmd_scores},       {"leaderboard", cmd_leaderboard},
        {"landscape", cmd_landscape},   {"heatmap", cmd_heatmap},     {"stability", cmd_stability},
        {"route", cmd_route},           {"topk", cmd_topk},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"properties", "scores", "leaderboard", "landscape",
                                                   "heatmap",    "stability", "route",     "topk"};
    return names;
}

PerceptionMatrix load_matrix(const fs::path& path, InputFormat format, IngestPolicy policy) {
    if (format == InputFormat::Matrix) {
        auto in = open_input(path);
        return io::read_matrix_csv(in, path.stem().string());
    }
    const auto records = io::read_records_file(path);
    return ingest_records(records, policy);
}

int run(const Invocation& invocation, std::ostream& log) {
    const auto it = handlers().find(invocation.command);
    if (it == handlers().end()) {
        fmt::print(log, "memeprobe: unknown command '{}'\n", invocation.command);
        return 2;
    }
    try {
        validate(invocation.config);
        fmt::print(log, "memeprobe {} {}: {}\n", kVersion, invocation.command, describe(invocation.config));
        std::error_code ec;
        fs::create_directories(invocation.out_dir, ec);
        if (ec) throw Error(ErrorCode::Io, kModule, "cannot create '" + invocation.out_dir.string() + "'");
        it->second(Context{invocation, log});
        return 0;
    } catch (const Error& e) {
        fmt::print(log, "memeprobe: {} failed in module '{}': {}\n", invocation.command, e.module(), e.what());
    } catch (const std::exception& e) {
        fmt::print(log, "memeprobe: {} failed: {}\n", invocation.command, e.what());
    }
    return 1;
}

}  // namespace memeprobe
