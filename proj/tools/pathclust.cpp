// pathclust command-line front end.

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pathclust/clustering.hpp"
#include "pathclust/dissimilarity.hpp"
#include "pathclust/error.hpp"
#include "pathclust/experiments.hpp"
#include "pathclust/generators.hpp"
#include "pathclust/io.hpp"
#include "pathclust/rng.hpp"
#include "pathclust/version.hpp"

namespace fs = std::filesystem;
using namespace pathclust;
using nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;

struct ConfigFlags {
    std::string file;
    std::optional<int> K;
    std::string weight_rule;
    std::string m_rule;
    std::string transform;
    std::optional<bool> center;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
    cmd->add_option("--config", f.file, "Dissimilarity config JSON file")->check(CLI::ExistingFile);
    cmd->add_option("--K", f.K, "Localization window for the local measure (default 10)");
    cmd->add_option("--weight-rule", f.weight_rule, "harmonic_telescoping | inverse_square");
    cmd->add_option("--m-rule", f.m_rule, "log2 | sqrt");
    cmd->add_option("--transform", f.transform, "identity | log-damp");
    cmd->add_option("--center", f.center, "Subtract the path mean before forming moments (true|false)");
}

// Built-in defaults, then the config file, then explicit flags.
DissimilarityConfig resolve_config(const ConfigFlags& f) {
    DissimilarityConfig cfg;
    if (!f.file.empty()) cfg = io::config_from_json(io::read_json_file(f.file), cfg);
    if (f.K) cfg.K = *f.K;
    if (!f.weight_rule.empty()) cfg.weight_rule = parse_weight_rule(f.weight_rule);
    if (!f.m_rule.empty()) cfg.m_rule = parse_m_rule(f.m_rule);
    if (!f.transform.empty()) cfg.entry_transform = parse_transform(f.transform);
    if (f.center) cfg.center = *f.center;
    validate_config(cfg);
    return cfg;
}

int default_jobs() { return std::max(1, omp_get_max_threads()); }

void apply_jobs(int jobs) {
    if (jobs < 1) throw Error(Errc::InvalidConfig, "--jobs must be >= 1");
    omp_set_num_threads(jobs);
}

void echo(const json& resolved) { std::cerr << "resolved: " << resolved.dump() << '\n'; }

// generate ------------------------------------------------------------------

struct GenerateArgs {
    std::string spec;
    std::string out;
};

int cmd_generate(const GenerateArgs& a) {
    const json doc = io::read_json_file(a.spec);
    if (!doc.is_object() || !doc.contains("paths") || !doc.at("paths").is_array()) {
        throw Error(Errc::ParseError, a.spec + ": expected an object with a 'paths' array");
    }
    const auto master = doc.value("master_seed", std::uint64_t{0});
    const auto method = doc.value("fgn_method", std::string("circulant"));
    if (method != "circulant" && method != "cholesky") {
        throw Error(Errc::ParseError, "fgn_method: unknown '" + method + "'");
    }

    PathDataset ds;
    std::vector<int> labels;
    json resolved = json::array();
    const auto& entries = doc.at("paths");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string where = "paths[" + std::to_string(i) + "]";
        json entry = entries[i];
        if (!entry.is_object()) throw Error(Errc::ParseError, where + ": expected an object");
        std::ostringstream default_id;
        default_id << "path_" << (i < 100 ? (i < 10 ? "00" : "0") : "") << i;
        const std::string id = entry.value("id", default_id.str());
        if (entry.contains("label")) {
            if (!entry.at("label").is_number_integer()) throw Error(Errc::ParseError, where + ".label: expected integer");
            labels.push_back(entry.at("label").get<int>());
        }
        if (!entry.contains("seed")) entry["seed"] = derive_seed(master, {i});
        entry.erase("id");
        entry.erase("label");
        const io::GeneratorSpec spec = io::spec_from_json(entry, where);

        SamplePath path;
        if (const auto* f = std::get_if<FgnSpec>(&spec)) {
            path = method == "cholesky" ? fgn_cholesky(*f) : fgn_circulant(*f);
        } else {
            path = mbm_riemann_liouville(std::get<MbmSpec>(spec));
        }
        path.id = id;
        ds.paths.push_back(std::move(path));
        json r = io::spec_to_json(spec);
        r["id"] = id;
        resolved.push_back(std::move(r));
    }
    if (!labels.empty()) {
        if (labels.size() != ds.paths.size()) {
            throw Error(Errc::LabelArityMismatch, "either every path or no path must carry a label");
        }
        ds.truth = labels;
    }
    echo({{"command", "generate"}, {"fgn_method", method}, {"paths", resolved}});

    io::write_dataset_dir(a.out, ds);
    std::cout << "id,seed\n";
    for (const auto& r : resolved) std::cout << r.at("id").get<std::string>() << ',' << r.at("seed").get<std::uint64_t>() << '\n';
    return 0;
}

// dist ----------------------------------------------------------------------

struct DistArgs {
    std::string a, b;
    std::string measure = "cov";
    ConfigFlags cfg;
};

int cmd_dist(const DistArgs& a) {
    const DissimilarityConfig cfg = resolve_config(a.cfg);
    const Measure measure = parse_measure(a.measure);
    echo({{"command", "dist"}, {"a", a.a}, {"b", a.b}, {"measure", to_string(measure)}, {"config", io::config_to_json(cfg)}});

    SamplePath x{io::read_path_csv(a.a), 1.0, a.a};
    SamplePath y{io::read_path_csv(a.b), 1.0, a.b};
    validate_path(x);
    validate_path(y);
    std::cout << io::format_double(dissimilarity(measure, x.view(), y.view(), cfg)) << '\n';
    return 0;
}

// cluster -------------------------------------------------------------------

struct ClusterArgs {
    std::string data;
    int kappa = 0;
    std::string mode = "centers-only";
    std::string measure = "cov";
    std::string out;
    int jobs = 0;
    ConfigFlags cfg;
};

json clustering_report(const Clustering& c, const PathDataset& ds) {
    json j = io::clustering_to_json(c);
    json ids = json::array();
    for (const auto& p : ds.paths) ids.push_back(p.id);
    j["ids"] = ids;
    if (ds.truth) j["misclustering_rate"] = misclustering_rate(c, *ds.truth);
    return j;
}

int cmd_cluster(const ClusterArgs& a) {
    const DissimilarityConfig cfg = resolve_config(a.cfg);
    const Measure measure = parse_measure(a.measure);
    const AssignmentMode mode = parse_assignment_mode(a.mode);
    apply_jobs(a.jobs);
    echo({{"command", "cluster"}, {"data", a.data}, {"kappa", a.kappa}, {"mode", to_string(mode)},
          {"measure", to_string(measure)}, {"jobs", a.jobs}, {"config", io::config_to_json(cfg)}});

    const PathDataset ds = io::read_dataset(a.data);
    if (a.kappa < 1 || static_cast<std::size_t>(a.kappa) > ds.size()) {
        throw Error(Errc::KappaOutOfRange, "kappa=" + std::to_string(a.kappa) + " with N=" + std::to_string(ds.size()));
    }
    const DistanceMatrix d = dissimilarity_matrix(ds, measure, cfg);
    const Clustering c = offline_cluster(d, a.kappa, mode);
    const json report = clustering_report(c, ds);

    if (!a.out.empty()) {
        io::write_text_file(fs::path(a.out) / "clustering.json", report.dump(2) + "\n");
        std::ostringstream labels, matrix;
        io::write_clustering_csv(labels, c, ds);
        io::write_matrix_csv(matrix, d, ds);
        io::write_text_file(fs::path(a.out) / "clustering.csv", labels.str());
        io::write_text_file(fs::path(a.out) / "matrix.csv", matrix.str());
    }
    std::cout << report.dump() << '\n';
    return 0;
}

// online --------------------------------------------------------------------

struct OnlineArgs {
    std::string schedule;
    int kappa = 0;
    std::string mode = "centers-only";
    std::string measure = "cov";
    std::string out;
    int jobs = 0;
    ConfigFlags cfg;
};

// schedule.json {"snapshots": [dir, ...]} if present, otherwise every
// subdirectory holding a manifest.json, in name order. A schedule file may
// also be passed directly.
std::vector<fs::path> snapshot_dirs(const fs::path& where) {
    const bool file = fs::is_regular_file(where);
    const fs::path root = file ? where.parent_path() : where;
    if (!file && !fs::is_directory(root)) throw Error(Errc::IoError, "no snapshot schedule at " + where.string());
    std::vector<fs::path> out;
    const fs::path listing = file ? where : root / "schedule.json";
    if (fs::exists(listing)) {
        const json doc = io::read_json_file(listing);
        if (!doc.contains("snapshots") || !doc.at("snapshots").is_array()) {
            throw Error(Errc::ParseError, listing.string() + ": missing 'snapshots' array");
        }
        for (const auto& s : doc.at("snapshots")) {
            if (!s.is_string()) throw Error(Errc::ParseError, listing.string() + ": snapshots must be strings");
            out.push_back(root / s.get<std::string>());
        }
    } else {
        for (const auto& e : fs::directory_iterator(root)) {
            if (e.is_directory() && fs::exists(e.path() / "manifest.json")) out.push_back(e.path());
        }
        std::sort(out.begin(), out.end());
    }
    if (out.empty()) throw Error(Errc::EmptyDataset, "no snapshots under " + root.string());
    return out;
}

int cmd_online(const OnlineArgs& a) {
    const DissimilarityConfig cfg = resolve_config(a.cfg);
    const Measure measure = parse_measure(a.measure);
    const AssignmentMode mode = parse_assignment_mode(a.mode);
    apply_jobs(a.jobs);
    const auto dirs = snapshot_dirs(a.schedule);
    json names = json::array();
    for (const auto& d : dirs) names.push_back(d.filename().string());
    echo({{"command", "online"}, {"data_schedule", a.schedule}, {"snapshots", names}, {"kappa", a.kappa},
          {"mode", to_string(mode)}, {"measure", to_string(measure)}, {"jobs", a.jobs},
          {"config", io::config_to_json(cfg)}});

    OnlineClusterer clusterer(a.kappa, cfg, measure, mode);
    json steps = json::array();
    for (std::size_t t = 0; t < dirs.size(); ++t) {
        const PathDataset ds = io::read_dataset(dirs[t]);
        const OnlineResult r = clusterer.step(ds);
        json j = clustering_report(r.clustering, ds);
        j["snapshot"] = dirs[t].filename().string();
        j["paths"] = ds.size();
        j["eta"] = r.state.eta;
        j["eta_fallback"] = r.state.eta_fallback;
        steps.push_back(j);
        std::cout << j.dump() << '\n';
    }
    if (!a.out.empty()) io::write_text_file(fs::path(a.out) / "online.json", steps.dump(2) + "\n");
    return 0;
}

// sweep ---------------------------------------------------------------------

struct SweepArgs {
    std::string manifest;
    std::string out;
    int jobs = 0;
};

int cmd_sweep(const SweepArgs& a) {
    apply_jobs(a.jobs);
    const ExperimentManifest m = read_manifest(a.manifest);
    validate_manifest(m);
    echo({{"command", "sweep"}, {"jobs", a.jobs}, {"manifest", manifest_to_json(m)}});

    const ExperimentReport report = run_sweep(m);
    emit_curves(report, a.out);
    for (Algorithm alg : {Algorithm::Offline, Algorithm::Online}) {
        const auto curve = report.curve(alg);
        if (curve.empty()) continue;
        std::size_t failures = 0;
        for (const auto& p : curve) failures += p.failures;
        char line[160];
        std::snprintf(line, sizeof line, "%s: first %.4f last %.4f %s, %zu failed runs\n",
                      std::string(to_string(alg)).c_str(), curve.front().mean, curve.back().mean,
                      curve.back().mean < curve.front().mean ? "decreasing" : "not decreasing", failures);
        std::cout << line;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering of stochastic-process sample paths with covariance-based dissimilarities"};
    app.name("pathclust");
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Simulate fGn / mBm paths from a spec file");
    g->add_option("--spec", gen.spec, "JSON spec: {\"paths\": [...], \"master_seed\", \"fgn_method\"}")
        ->required()
        ->check(CLI::ExistingFile);
    g->add_option("--out", gen.out, "Output dataset directory")->required();

    DistArgs dist;
    auto* d = app.add_subcommand("dist", "Dissimilarity between two single-column CSV paths");
    d->add_option("--a", dist.a, "First path CSV")->required()->check(CLI::ExistingFile);
    d->add_option("--b", dist.b, "Second path CSV")->required()->check(CLI::ExistingFile);
    d->add_option("--measure", dist.measure, "cov | local")->capture_default_str();
    add_config_flags(d, dist.cfg);

    ClusterArgs cl;
    cl.jobs = default_jobs();
    auto* c = app.add_subcommand("cluster", "Offline clustering of a dataset");
    c->add_option("--data", cl.data, "Dataset directory or manifest")->required();
    c->add_option("--kappa", cl.kappa, "Number of clusters")->required();
    c->add_option("--mode", cl.mode, "centers-only | literal")->capture_default_str();
    c->add_option("--measure", cl.measure, "cov | local")->capture_default_str();
    c->add_option("--out", cl.out, "Write clustering.json, clustering.csv and matrix.csv here");
    c->add_option("--jobs", cl.jobs, "Worker threads (default: available parallelism)");
    add_config_flags(c, cl.cfg);

    OnlineArgs on;
    on.jobs = default_jobs();
    auto* o = app.add_subcommand("online", "Online clustering over a sequence of snapshots");
    o->add_option("--data-schedule", on.schedule, "Directory of snapshot datasets or a schedule.json")->required();
    o->add_option("--kappa", on.kappa, "Number of clusters")->required();
    o->add_option("--mode", on.mode, "centers-only | literal")->capture_default_str();
    o->add_option("--measure", on.measure, "cov | local")->capture_default_str();
    o->add_option("--out", on.out, "Write online.json here");
    o->add_option("--jobs", on.jobs, "Worker threads (default: available parallelism)");
    add_config_flags(o, on.cfg);

    SweepArgs sw;
    sw.jobs = default_jobs();
    auto* s = app.add_subcommand("sweep", "Run an experiment manifest and write convergence curves");
    s->add_option("--manifest", sw.manifest, "Experiment manifest JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--out", sw.out, "Report directory")->required();
    s->add_option("--jobs", sw.jobs, "Worker threads (default: available parallelism)");

    auto* v = app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (g->parsed()) return cmd_generate(gen);
        if (d->parsed()) return cmd_dist(dist);
        if (c->parsed()) return cmd_cluster(cl);
        if (o->parsed()) return cmd_online(on);
        if (s->parsed()) return cmd_sweep(sw);
        if (v->parsed()) {
            std::cout << "pathclust " << version << '\n';
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_input_error() ? kExitInput : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
