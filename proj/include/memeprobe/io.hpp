#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "memeprobe/analytics.hpp"
#include "memeprobe/clustering.hpp"
#include "memeprobe/memescore.hpp"
#include "memeprobe/perception.hpp"
#include "memeprobe/properties.hpp"
#include "memeprobe/routing.hpp"

namespace memeprobe::io {

using CsvRow = std::vector<std::string>;

/// RFC 4180 reader. Blank lines and lines starting with '#' are skipped.
std::vector<CsvRow> read_csv(std::istream& in);
std::string csv_field(std::string_view value);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest decimal that round-trips the double.
std::string format_real(double value);
std::string format_percent(double fraction);

// Inputs. Record files: CSV `dataset,model,probe,correct` or JSON Lines with
// the same keys. Matrix files: CSV `probe,<model>...` with 0/1 cells.

std::vector<EvaluationRecord> read_records_csv(std::istream& in);
std::vector<EvaluationRecord> read_records_jsonl(std::istream& in);
/// Picks JSON Lines for .jsonl/.ndjson files or content starting with '{'.
std::vector<EvaluationRecord> read_records_file(const std::filesystem::path& path);

PerceptionMatrix read_matrix_csv(std::istream& in, std::string dataset_id = {});
void write_matrix_csv(std::ostream& out, const PerceptionMatrix& matrix);
void write_records_csv(std::ostream& out, const std::vector<EvaluationRecord>& records);

/// Score tables are read back from the raw-fraction variant.
MemeScoreTable read_score_table_csv(std::istream& in);
RoutingInstance read_routing_instance_csv(std::istream& in);

// Outputs.

/// Columns for properties that were not computed are left empty.
void write_properties_csv(std::ostream& out, const PropertySet& properties);
void write_partition_csv(std::ostream& out, const std::vector<std::string>& probe_ids,
                         const ClusterPartition& partition);
void write_cluster_summary_csv(std::ostream& out, const std::vector<std::string>& probe_ids,
                               const ClusterPartition& partition, const std::vector<double>& intra);
/// `percent` writes values x100 with two decimals; otherwise raw fractions.
void write_score_table_csv(std::ostream& out, const MemeScoreTable& table, bool percent);
/// `model` plus the six single-property scores, for external embedding tools.
void write_features_csv(std::ostream& out, const MemeScoreTable& table);
void write_leaderboard_csv(std::ostream& out, const Leaderboard& board);
void write_landscape_csv(std::ostream& out, const std::vector<LandscapeRow>& rows);
void write_heatmap_csv(std::ostream& out, const Heatmap& heatmap);
void write_stability_csv(std::ostream& out, const StabilityReport& report);
void write_topk_csv(std::ostream& out, std::string_view property, const std::vector<std::string>& ids,
                    const PropertySet& properties);
void write_routing_seeds_csv(std::ostream& out, const BalancedBaseline& baseline);

}  // namespace memeprobe::io
