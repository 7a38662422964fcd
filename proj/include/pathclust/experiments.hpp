#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathclust/clustering.hpp"
#include "pathclust/dissimilarity.hpp"
#include "pathclust/io.hpp"

namespace pathclust {

enum class ProcessType { Fgn, Mbm };
enum class Algorithm { Offline, Online };
enum class FgnMethod { Circulant, Cholesky };

std::string_view to_string(ProcessType p);
std::string_view to_string(Algorithm a);

/// One snapshot of an online schedule: the first `paths` paths are visible.
struct SnapshotPlan {
    std::size_t paths = 0;
    std::size_t length = 0;
};

/// How revealed paths grow in an online schedule.
enum class OnlineGrowth {
    Uniform,    ///< every visible path has the snapshot length
    Staggered,  ///< a path revealed at snapshot s has length n(t) - n(s) + fresh_length
};

struct ExperimentManifest {
    ProcessType process_type = ProcessType::Fgn;
    /// One entry per cluster; n and seed are filled in per run.
    std::vector<io::GeneratorSpec> cluster_specs;
    std::size_t paths_per_cluster = 20;
    std::vector<std::size_t> lengths;
    std::vector<SnapshotPlan> schedule;
    OnlineGrowth growth = OnlineGrowth::Uniform;
    std::size_t fresh_length = 0;
    std::size_t repetitions = 20;
    DissimilarityConfig cfg;
    bool run_offline = true;
    bool run_online = true;
    AssignmentMode assignment_mode = AssignmentMode::CentersOnly;
    std::uint64_t master_seed = 0;
    FgnMethod fgn_method = FgnMethod::Circulant;
    /// mBm grid step; unset means 1/n so that every path spans [0, 1].
    std::optional<double> mbm_dt;

    int kappa() const noexcept { return static_cast<int>(cluster_specs.size()); }
    Measure measure() const noexcept {
        return process_type == ProcessType::Fgn ? Measure::Covariance : Measure::Local;
    }
};

void validate_manifest(const ExperimentManifest& m);
nlohmann::json manifest_to_json(const ExperimentManifest& m);
ExperimentManifest manifest_from_json(const nlohmann::json& doc);
ExperimentManifest read_manifest(const std::filesystem::path& file);

/// kappa = 5, 20 paths per cluster, H in {0.3, ..., 0.7}, lengths 128..2048.
ExperimentManifest default_fgn_manifest();
/// Five Hurst function shapes on the unit interval, localized measure, K = 10.
ExperimentManifest default_mbm_manifest();

struct ReportPoint {
    Algorithm algorithm = Algorithm::Offline;
    std::size_t step = 0;  ///< length index (offline) or snapshot index (online), 0-based
    std::size_t length = 0;
    std::size_t paths = 0;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    double rate = 0.0;
    double seconds = 0.0;
    bool failed = false;
    bool eta_fallback = false;
    std::string error;
};

struct AggregatePoint {
    Algorithm algorithm = Algorithm::Offline;
    std::size_t step = 0;
    std::size_t length = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t count = 0;
    std::size_t failures = 0;
};

struct ExperimentReport {
    ExperimentManifest manifest;
    std::vector<ReportPoint> points;
    std::vector<AggregatePoint> aggregates;

    std::vector<AggregatePoint> curve(Algorithm a) const;
};

/// Draws the labeled dataset of one offline run. Paths are interleaved:
/// path p belongs to cluster p % kappa.
PathDataset make_offline_dataset(const ExperimentManifest& m, std::size_t length,
                                 std::uint64_t run_seed);

/// Full-length path pool of one online repetition and the per-snapshot view.
PathDataset make_online_pool(const ExperimentManifest& m, std::uint64_t run_seed);
PathDataset online_snapshot(const ExperimentManifest& m, const PathDataset& pool, std::size_t t);

ExperimentReport run_offline_sweep(const ExperimentManifest& m);
ExperimentReport run_online_sweep(const ExperimentManifest& m);
/// Runs whichever algorithms the manifest enables and merges the points.
ExperimentReport run_sweep(const ExperimentManifest& m);

void aggregate(ExperimentReport& report);

std::string curves_csv(const ExperimentReport& report);
std::string curves_svg(const ExperimentReport& report);
/// Deterministic JSON: manifest, seeds, rates and aggregates; no timings.
nlohmann::json report_json(const ExperimentReport& report);
nlohmann::json timings_json(const ExperimentReport& report);

/// Writes curves.csv, curves.svg, report.json and timings.json into `dir`.
void emit_curves(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace pathclust
