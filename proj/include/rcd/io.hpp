#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rcd/dataset.hpp"
#include "rcd/evaluation.hpp"
#include "rcd/graph.hpp"
#include "rcd/rcd.hpp"
#include "rcd/simulation.hpp"

namespace rcd {

/// Parses CSV text with a header row. Every cell must be a finite number;
/// empty cells, NaN and infinities are rejected with the row and column
/// named. Columns are mean-centered.
Dataset parse_csv(std::string_view text);
Dataset ingest_csv(const std::string& path);

/// Header plus one row per sample, shortest round-trip decimal notation.
std::string to_csv(const Dataset& data);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

nlohmann::json config_to_json(const RcdConfig& config);

nlohmann::json model_to_json(const GroundTruthModel& model);
GroundTruthModel model_from_json(const nlohmann::json& doc);

enum class GraphFormat { Dot, Json };

/// DOT or JSON rendering with lines/arrays sorted for byte-stable output.
/// `metadata` is merged into the JSON document and ignored for DOT.
std::string emit_graph(const CausalGraph& graph, const std::vector<std::string>& names, GraphFormat format,
                       const nlohmann::json& metadata = nlohmann::json::object());

struct NamedGraph {
    std::vector<std::string> names;
    CausalGraph graph;
};

/// Inverse of the JSON form of emit_graph.
NamedGraph graph_from_json(std::string_view text);

/// One row per trial: seed and directed/bi-directed precision, recall, F.
std::string benchmark_csv(const BenchmarkReport& report);
nlohmann::json benchmark_summary(const BenchmarkReport& report);

}  // namespace rcd
