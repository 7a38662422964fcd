#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pathclust/clustering.hpp"
#include "pathclust/dissimilarity.hpp"
#include "pathclust/generators.hpp"
#include "pathclust/paths.hpp"

namespace pathclust::io {

namespace fs = std::filesystem;
using nlohmann::json;

// Paths ------------------------------------------------------------------

/// Single-column CSV; an optional non-numeric first line is a header.
std::vector<double> read_path_csv(const fs::path& file);
void write_path_csv(const fs::path& file, const std::vector<double>& values);

/// Loads a dataset from a directory holding manifest.json, a manifest file,
/// or a single JSON file with embedded values. Validates before returning.
PathDataset read_dataset(const fs::path& location);

/// Writes manifest.json plus one CSV per path into `dir`.
void write_dataset_dir(const fs::path& dir, const PathDataset& dataset);

json dataset_to_json(const PathDataset& dataset);
PathDataset dataset_from_json(const json& doc);

// Config ------------------------------------------------------------------

json config_to_json(const DissimilarityConfig& cfg);
/// Missing keys keep the values already in `base`; unknown keys are rejected.
DissimilarityConfig config_from_json(const json& doc, DissimilarityConfig base = {});
DissimilarityConfig read_config(const fs::path& file);

// Generator specs ---------------------------------------------------------

using GeneratorSpec = std::variant<FgnSpec, MbmSpec>;

json hurst_fn_to_json(const HurstFunction& h);
HurstFunction hurst_fn_from_json(const json& doc, const std::string& where);
json spec_to_json(const GeneratorSpec& spec);
GeneratorSpec spec_from_json(const json& doc, const std::string& where);

// Results -----------------------------------------------------------------

json clustering_to_json(const Clustering& c);
Clustering clustering_from_json(const json& doc);
void write_clustering_csv(std::ostream& os, const Clustering& c, const PathDataset& dataset);
void write_matrix_csv(std::ostream& os, const DistanceMatrix& d, const PathDataset& dataset);

// Files -------------------------------------------------------------------

json read_json_file(const fs::path& file);
std::string read_text_file(const fs::path& file);
/// Writes `text` to `file`, creating parent directories.
void write_text_file(const fs::path& file, const std::string& text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace pathclust::io
