#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

#include "sing/estimate.hpp"
#include "sing/graph.hpp"
#include "sing/map.hpp"
#include "sing/precision.hpp"
#include "sing/samples.hpp"
#include "sing/sing.hpp"

namespace sing::io {

using nlohmann::json;

/// Header row of variable names, then one sample per row. Doubles are written
/// in shortest round-trip form, so a parse of the output reproduces the data
/// exactly. Malformed cells raise IoError naming the row and column.
std::string format_samples_csv(const SampleSet& samples);
SampleSet parse_samples_csv(const std::string& text);
void write_samples_csv(const std::filesystem::path& path, const SampleSet& samples);
SampleSet read_samples_csv(const std::filesystem::path& path);

/// p x p matrix with a header row of names.
std::string format_matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& names);
Eigen::MatrixXd parse_matrix_csv(const std::string& text, std::vector<std::string>* names = nullptr);

/// {p, edges: [[j, k], ...]} with 0-based labels; `names` is optional.
json graph_to_json(const Graph& g, const std::vector<std::string>& names = {});
Graph graph_from_json(const json& j);
/// Dense 0/1 adjacency matrix with a header row.
std::string format_graph_csv(const Graph& g, const std::vector<std::string>& names);

json map_to_json(const TriangularMap& map);
TriangularMap map_from_json(const json& j);

json standardization_to_json(const Standardization& s);
Standardization standardization_from_json(const json& j);

/// Map plus per-component diagnostics and the standardization of the fit data.
json fit_to_json(const FitResult& fit);
/// Restores the map, diagnostics and standardization; information blocks are
/// not serialized and come back empty.
FitResult fit_from_json(const json& j);

json precision_to_json(const PrecisionEstimate& est, const std::vector<std::string>& names);

/// One JSON object per iteration. Wall-clock times are left out unless asked
/// for, so the trace of a run is byte-reproducible.
std::string format_trace_jsonl(const SingResult& result, bool include_timing = false);
std::vector<json> parse_trace_jsonl(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);
/// FNV-1a 64 of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace sing::io
