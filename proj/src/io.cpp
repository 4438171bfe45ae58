#include "memeprobe/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "memeprobe/error.hpp"

namespace memeprobe::io {

namespace {

constexpr const char* kModule = "io";

[[noreturn]] void parse_error(const std::string& message) { throw Error(ErrorCode::Parse, kModule, message); }

bool parse_bit(std::string_view text, std::size_t line) {
    if (text == "1") return true;
    if (text == "0") return false;
    parse_error(fmt::format("row {}: expected 0 or 1, got '{}'", line, text));
}

double parse_double(const std::string& text, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        parse_error(fmt::format("row {}: '{}' is not a number", line, text));
    }
}

std::vector<std::string> header_of(const std::vector<CsvRow>& rows, const char* what) {
    if (rows.empty()) parse_error(std::string(what) + " file is empty");
    return rows.front();
}

void expect_header(const CsvRow& header, const std::vector<std::string>& expected, const char* what) {
    if (header != expected) {
        std::string want;
        for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
        parse_error(std::string(what) + " header must be '" + want + "'");
    }
}

}  // namespace

std::vector<CsvRow> read_csv(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool quoted = false;
    bool at_row_start = true;
    bool field_was_quoted = false;
    std::size_t i = 0;
    auto end_row = [&] {
        row.push_back(std::move(field));
        field.clear();
        const bool blank = row.size() == 1 && row[0].empty() && !field_was_quoted;
        if (!blank) rows.push_back(std::move(row));
        row.clear();
        at_row_start = true;
        field_was_quoted = false;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
            } else {
                field += c;
            }
            ++i;
            continue;
        }
        if (at_row_start && c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            ++i;
            continue;
        }
        at_row_start = false;
        if (c == '"' && field.empty()) {
            quoted = true;
            field_was_quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            // tolerated before \n
        } else if (c == '\n') {
            end_row();
        } else {
            field += c;
        }
        ++i;
    }
    if (quoted) parse_error("unterminated quoted field");
    if (!at_row_start || !field.empty()) end_row();
    return rows;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n\r") == std::string_view::npos && !value.starts_with('#')) {
        return std::string(value);
    }
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        out << csv_field(fields[i]);
    }
    out << '\n';
}

std::string format_real(double value) { return fmt::format("{}", value); }

std::string format_percent(double fraction) { return fmt::format("{:.2f}", 100.0 * fraction); }

std::vector<EvaluationRecord> read_records_csv(std::istream& in) {
    const auto rows = read_csv(in);
    expect_header(header_of(rows, "record"), {"dataset", "model", "probe", "correct"}, "record");
    std::vector<EvaluationRecord> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 4) parse_error(fmt::format("row {}: expected 4 fields, got {}", r + 1, row.size()));
        out.push_back({row[0], row[1], row[2], parse_bit(row[3], r + 1)});
    }
    if (out.empty()) parse_error("record file has no records");
    return out;
}

std::vector<EvaluationRecord> read_records_jsonl(std::istream& in) {
    std::vector<EvaluationRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            parse_error(fmt::format("line {}: {}", line_no, e.what()));
        }
        if (!obj.is_object()) parse_error(fmt::format("line {}: expected a JSON object", line_no));
        EvaluationRecord rec;
        try {
            rec.dataset_id = obj.at("dataset").get<std::string>();
            rec.model_id = obj.at("model").get<std::string>();
            rec.probe_id = obj.at("probe").get<std::string>();
            const auto& correct = obj.at("correct");
            if (correct.is_boolean()) {
                rec.correct = correct.get<bool>();
            } else if (correct.is_number_integer() && (correct == 0 || correct == 1)) {
                rec.correct = correct.get<int>() == 1;
            } else {
                parse_error(fmt::format("line {}: 'correct' must be 0, 1, true or false", line_no));
            }
        } catch (const nlohmann::json::exception& e) {
            parse_error(fmt::format("line {}: {}", line_no, e.what()));
        }
        out.push_back(std::move(rec));
    }
    if (out.empty()) parse_error("record file has no records");
    return out;
}

std::vector<EvaluationRecord> read_records_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, kModule, "cannot open '" + path.string() + "'");
    const auto ext = path.extension().string();
    bool jsonl = ext == ".jsonl" || ext == ".ndjson";
    if (!jsonl) {
        char c = 0;
        while (in.get(c) && std::isspace(static_cast<unsigned char>(c))) {
        }
        jsonl = in && c == '{';
        in.clear();
        in.seekg(0);
    }
    return jsonl ? read_records_jsonl(in) : read_records_csv(in);
}

PerceptionMatrix read_matrix_csv(std::istream& in, std::string dataset_id) {
    const auto rows = read_csv(in);
    const auto header = header_of(rows, "matrix");
    if (header.size() < 2 || header[0] != "probe") parse_error("matrix header must be 'probe,<model>...'");
    std::vector<std::string> models(header.begin() + 1, header.end());
    std::vector<std::string> probes;
    std::vector<std::uint8_t> bits;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) {
            parse_error(fmt::format("row {}: expected {} fields, got {}", r + 1, header.size(), row.size()));
        }
        probes.push_back(row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) bits.push_back(parse_bit(row[c], r + 1) ? 1 : 0);
    }
    if (probes.empty()) parse_error("matrix file has no probe rows");

    // canonical order: ids sorted lexicographically, as for record ingestion
    std::vector<std::size_t> probe_order(probes.size());
    std::vector<std::size_t> model_order(models.size());
    for (std::size_t i = 0; i < probe_order.size(); ++i) probe_order[i] = i;
    for (std::size_t j = 0; j < model_order.size(); ++j) model_order[j] = j;
    std::sort(probe_order.begin(), probe_order.end(), [&](auto a, auto b) { return probes[a] < probes[b]; });
    std::sort(model_order.begin(), model_order.end(), [&](auto a, auto b) { return models[a] < models[b]; });
    std::vector<std::string> sorted_probes;
    std::vector<std::string> sorted_models;
    std::vector<std::uint8_t> sorted_bits;
    sorted_bits.reserve(bits.size());
    for (auto j : model_order) sorted_models.push_back(models[j]);
    for (auto i : probe_order) {
        sorted_probes.push_back(probes[i]);
        for (auto j : model_order) sorted_bits.push_back(bits[i * models.size() + j]);
    }
    return PerceptionMatrix(std::move(sorted_probes), std::move(sorted_models), sorted_bits, std::move(dataset_id));
}

void write_matrix_csv(std::ostream& out, const PerceptionMatrix& matrix) {
    std::vector<std::string> header{"probe"};
    header.insert(header.end(), matrix.model_ids().begin(), matrix.model_ids().end());
    write_csv_row(out, header);
    for (std::size_t i = 0; i < matrix.n_probes(); ++i) {
        out << csv_field(matrix.probe_ids()[i]);
        for (std::size_t j = 0; j < matrix.n_models(); ++j) out << (matrix.at(i, j) ? ",1" : ",0");
        out << '\n';
    }
}

void write_records_csv(std::ostream& out, const std::vector<EvaluationRecord>& records) {
    write_csv_row(out, {"dataset", "model", "probe", "correct"});
    for (const auto& r : records) write_csv_row(out, {r.dataset_id, r.model_id, r.probe_id, r.correct ? "1" : "0"});
}

MemeScoreTable read_score_table_csv(std::istream& in) {
    const auto rows = read_csv(in);
    const auto header = header_of(rows, "score table");
    if (header.size() < 2 || header[0] != "model" || header[1] != "accuracy") {
        parse_error("score table header must start with 'model,accuracy'");
    }
    MemeScoreTable table;
    table.score_names.assign(header.begin() + 2, header.end());
    table.scores.assign(table.score_names.size(), {});
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) {
            parse_error(fmt::format("row {}: expected {} fields, got {}", r + 1, header.size(), row.size()));
        }
        table.model_ids.push_back(row[0]);
        table.accuracy.push_back(parse_double(row[1], r + 1));
        for (std::size_t s = 0; s < table.score_names.size(); ++s) {
            table.scores[s].push_back(parse_double(row[s + 2], r + 1));
        }
    }
    if (table.model_ids.empty()) parse_error("score table has no models");
    return table;
}

RoutingInstance read_routing_instance_csv(std::istream& in) {
    const auto rows = read_csv(in);
    expect_header(header_of(rows, "routing instance"), {"item", "level", "hi_correct", "lo_correct"},
                  "routing instance");
    RoutingInstance inst;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 4) parse_error(fmt::format("row {}: expected 4 fields, got {}", r + 1, row.size()));
        inst.item_ids.push_back(row[0]);
        const double level = parse_double(row[1], r + 1);
        if (level != static_cast<int>(level)) parse_error(fmt::format("row {}: level must be an integer", r + 1));
        inst.levels.push_back(static_cast<int>(level));
        inst.hi_correct.push_back(parse_bit(row[2], r + 1));
        inst.lo_correct.push_back(parse_bit(row[3], r + 1));
    }
    if (inst.item_ids.empty()) parse_error("routing instance has no items");
    validate(inst);
    return inst;
}

void write_properties_csv(std::ostream& out, const PropertySet& properties) {
    std::vector<std::string> header{"probe"};
    for (Property p : kAllProperties) header.emplace_back(property_name(p));
    write_csv_row(out, header);
    for (std::size_t i = 0; i < properties.probe_ids.size(); ++i) {
        std::vector<std::string> row{properties.probe_ids[i]};
        for (Property p : kAllProperties) {
            row.push_back(properties.has(p) ? format_real(properties[p][i]) : std::string());
        }
        write_csv_row(out, row);
    }
}

void write_partition_csv(std::ostream& out, const std::vector<std::string>& probe_ids,
                         const ClusterPartition& partition) {
    write_csv_row(out, {"probe", "cluster", "is_prototype"});
    for (std::size_t i = 0; i < probe_ids.size(); ++i) {
        const std::size_t label = partition.assignments[i];
        write_csv_row(out, {probe_ids[i], std::to_string(label), partition.prototypes[label] == i ? "1" : "0"});
    }
}

void write_cluster_summary_csv(std::ostream& out, const std::vector<std::string>& probe_ids,
                               const ClusterPartition& partition, const std::vector<double>& intra) {
    write_csv_row(out, {"cluster", "size", "prototype", "intra_similarity"});
    for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
        write_csv_row(out, {std::to_string(c), std::to_string(partition.clusters[c].size()),
                            probe_ids[partition.prototypes[c]], format_real(intra.at(c))});
    }
}

void write_score_table_csv(std::ostream& out, const MemeScoreTable& table, bool percent) {
    std::vector<std::string> header{"model", "accuracy"};
    header.insert(header.end(), table.score_names.begin(), table.score_names.end());
    write_csv_row(out, header);
    auto fmt_value = [&](double v) { return percent ? format_percent(v) : format_real(v); };
    for (std::size_t j = 0; j < table.n_models(); ++j) {
        std::vector<std::string> row{table.model_ids[j], fmt_value(table.accuracy[j])};
        for (const auto& column : table.scores) row.push_back(fmt_value(column[j]));
        write_csv_row(out, row);
    }
}

void write_features_csv(std::ostream& out, const MemeScoreTable& table) {
    static const std::vector<std::string> names{"Difficulty", "Uniqueness", "Risk", "Surprise", "Typicality", "Bridge"};
    std::vector<std::string> header{"model"};
    header.insert(header.end(), names.begin(), names.end());
    write_csv_row(out, header);
    for (std::size_t j = 0; j < table.n_models(); ++j) {
        std::vector<std::string> row{table.model_ids[j]};
        for (const auto& name : names) row.push_back(format_real(table.column(name)[j]));
        write_csv_row(out, row);
    }
}

void write_leaderboard_csv(std::ostream& out, const Leaderboard& board) {
    std::vector<std::string> header{"rank", "model", "accuracy"};
    for (const auto& name : board.score_names) {
        header.push_back(name);
        header.push_back("delta_" + name);
    }
    write_csv_row(out, header);
    for (const auto& row : board.rows) {
        std::vector<std::string> fields{std::to_string(row.accuracy_rank), row.model_id, format_percent(row.accuracy)};
        for (std::size_t s = 0; s < row.scores.size(); ++s) {
            fields.push_back(format_percent(row.scores[s]));
            fields.push_back(fmt::format("{:+d}", row.deltas[s]));
        }
        write_csv_row(out, fields);
    }
}

void write_landscape_csv(std::ostream& out, const std::vector<LandscapeRow>& rows) {
    std::vector<std::string> header{"dataset", "probes"};
    for (Property p : kAllProperties) header.emplace_back(property_name(p));
    write_csv_row(out, header);
    for (const auto& row : rows) {
        std::vector<std::string> fields{row.dataset, std::to_string(row.n_probes)};
        for (double v : row.means) fields.push_back(format_real(v));
        write_csv_row(out, fields);
    }
}

void write_heatmap_csv(std::ostream& out, const Heatmap& heatmap) {
    std::vector<std::string> header{"probe"};
    header.insert(header.end(), heatmap.labels.begin(), heatmap.labels.end());
    write_csv_row(out, header);
    const std::size_t n = heatmap.labels.size();
    for (std::size_t a = 0; a < n; ++a) {
        out << csv_field(heatmap.labels[a]);
        for (std::size_t b = 0; b < n; ++b) out << ',' << format_real(heatmap.values[a * n + b]);
        out << '\n';
    }
}

void write_stability_csv(std::ostream& out, const StabilityReport& report) {
    write_csv_row(out, {"size", "metric", "name", "value", "pairs"});
    for (const auto& e : report.entries) {
        write_csv_row(out, {std::to_string(e.size), e.metric == StabilityMetric::Js ? "js" : "spearman", e.name,
                            e.value ? format_real(*e.value) : std::string(), std::to_string(e.pairs)});
    }
}

void write_topk_csv(std::ostream& out, std::string_view property, const std::vector<std::string>& ids,
                    const PropertySet& properties) {
    const auto p = parse_property(property);
    if (!p) throw Error(ErrorCode::InvalidArgument, kModule, "unknown property '" + std::string(property) + "'");
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < properties.probe_ids.size(); ++i) index.emplace(properties.probe_ids[i], i);
    write_csv_row(out, {"rank", "probe", std::string(property)});
    for (std::size_t r = 0; r < ids.size(); ++r) {
        write_csv_row(out, {std::to_string(r + 1), ids[r], format_real(properties[*p][index.at(ids[r])])});
    }
}

void write_routing_seeds_csv(std::ostream& out, const BalancedBaseline& baseline) {
    write_csv_row(out, {"seed", "hard", "easy", "overall"});
    for (std::size_t s = 0; s < baseline.seeds.size(); ++s) {
        const auto& r = baseline.per_seed[s];
        write_csv_row(out, {std::to_string(baseline.seeds[s]), format_real(r.hard), format_real(r.easy),
                            format_real(r.overall)});
    }
}

}  // namespace memeprobe::io
