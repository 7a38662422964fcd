#include "pathclust/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "pathclust/error.hpp"
#include "pathclust/generators.hpp"
#include "pathclust/rng.hpp"

namespace pathclust {

namespace {

constexpr std::uint64_t kOfflineTag = 1;
constexpr std::uint64_t kOnlineTag = 2;

using nlohmann::json;

template <class T>
T field(const json& doc, const char* key, const T& fallback) {
    if (!doc.contains(key) || doc.at(key).is_null()) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidManifest, std::string("manifest.") + key + ": " + e.what());
    }
}

SamplePath generate_path(const ExperimentManifest& m, std::size_t cluster, std::size_t length,
                         std::uint64_t seed) {
    const auto& spec = m.cluster_specs.at(cluster);
    SamplePath out;
    if (const auto* f = std::get_if<FgnSpec>(&spec)) {
        FgnSpec s = *f;
        s.n = length;
        s.seed = seed;
        out = m.fgn_method == FgnMethod::Circulant ? fgn_circulant(s) : fgn_cholesky(s);
    } else {
        MbmSpec s = std::get<MbmSpec>(spec);
        s.n = length;
        s.seed = seed;
        s.dt = m.mbm_dt.value_or(1.0 / static_cast<double>(length));
        out = mbm_riemann_liouville(s);
    }
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::size_t first_snapshot_with(const ExperimentManifest& m, std::size_t path) {
    for (std::size_t t = 0; t < m.schedule.size(); ++t)
        if (m.schedule[t].paths > path) return t;
    return m.schedule.size();
}

std::size_t online_length(const ExperimentManifest& m, std::size_t path, std::size_t t) {
    if (m.growth == OnlineGrowth::Uniform) return m.schedule[t].length;
    const std::size_t s = first_snapshot_with(m, path);
    return m.schedule[t].length - m.schedule[s].length + m.fresh_length;
}

}  // namespace

std::string_view to_string(ProcessType p) { return p == ProcessType::Fgn ? "fgn" : "mbm"; }
std::string_view to_string(Algorithm a) { return a == Algorithm::Offline ? "offline" : "online"; }

void validate_manifest(const ExperimentManifest& m) {
    auto fail = [](const std::string& msg) { throw Error(Errc::InvalidManifest, msg); };
    if (m.cluster_specs.size() < 2) fail("need at least 2 clusters");
    for (const auto& s : m.cluster_specs) {
        const bool is_fgn = std::holds_alternative<FgnSpec>(s);
        if (is_fgn != (m.process_type == ProcessType::Fgn)) {
            fail("cluster spec process does not match process_type");
        }
    }
    if (m.paths_per_cluster < 1) fail("paths_per_cluster must be >= 1");
    if (m.repetitions < 1) fail("repetitions must be >= 1");
    if (!m.run_offline && !m.run_online) fail("no algorithm selected");
    if (m.run_offline) {
        if (m.lengths.empty()) fail("offline sweep needs lengths");
        for (std::size_t i = 1; i < m.lengths.size(); ++i)
            if (m.lengths[i] <= m.lengths[i - 1]) fail("lengths must be strictly increasing");
        if (m.lengths.front() < 1) fail("lengths must be positive");
    }
    if (m.run_online) {
        if (m.schedule.empty()) fail("online sweep needs a schedule");
        for (std::size_t t = 0; t < m.schedule.size(); ++t) {
            if (m.schedule[t].paths < 1 || m.schedule[t].length < 1) fail("empty snapshot in schedule");
            if (t > 0 && (m.schedule[t].paths < m.schedule[t - 1].paths ||
                          m.schedule[t].length < m.schedule[t - 1].length)) {
                fail("schedule paths and lengths must be nondecreasing");
            }
        }
        if (m.growth == OnlineGrowth::Staggered && m.fresh_length < 1) {
            fail("staggered growth needs fresh_length >= 1");
        }
    }
    validate_config(m.cfg);
}

json manifest_to_json(const ExperimentManifest& m) {
    json clusters = json::array();
    for (const auto& s : m.cluster_specs) {
        if (const auto* f = std::get_if<FgnSpec>(&s)) {
            clusters.push_back({{"hurst", f->hurst}, {"sigma", f->sigma}});
        } else {
            const auto& b = std::get<MbmSpec>(s);
            clusters.push_back({{"hurst_fn", io::hurst_fn_to_json(b.hurst_fn)}, {"sigma", b.sigma}});
        }
    }
    json schedule = json::array();
    for (const auto& s : m.schedule) schedule.push_back({{"paths", s.paths}, {"length", s.length}});
    std::string algorithm = m.run_offline && m.run_online ? "both" : (m.run_offline ? "offline" : "online");
    json doc = {
        {"process_type", std::string(to_string(m.process_type))},
        {"clusters", clusters},
        {"paths_per_cluster", m.paths_per_cluster},
        {"lengths", m.lengths},
        {"online",
         {{"schedule", schedule},
          {"growth", m.growth == OnlineGrowth::Uniform ? "uniform" : "staggered"},
          {"fresh_length", m.fresh_length}}},
        {"repetitions", m.repetitions},
        {"config", io::config_to_json(m.cfg)},
        {"algorithm", algorithm},
        {"assignment_mode", std::string(to_string(m.assignment_mode))},
        {"master_seed", m.master_seed},
        {"fgn_method", m.fgn_method == FgnMethod::Circulant ? "circulant" : "cholesky"},
        {"mbm_dt", m.mbm_dt ? json(*m.mbm_dt) : json(nullptr)},
    };
    return doc;
}

ExperimentManifest manifest_from_json(const json& doc) {
    if (!doc.is_object()) throw Error(Errc::InvalidManifest, "manifest must be a JSON object");
    static const std::set<std::string> known = {
        "process_type", "clusters", "paths_per_cluster", "lengths", "online", "repetitions",
        "config", "algorithm", "assignment_mode", "master_seed", "fgn_method", "mbm_dt", "comment"};
    for (const auto& [key, _] : doc.items()) {
        if (!known.contains(key)) throw Error(Errc::InvalidManifest, "manifest." + key + ": unknown field");
    }
    ExperimentManifest m;
    const auto process = field<std::string>(doc, "process_type", "fgn");
    if (process == "fgn") {
        m.process_type = ProcessType::Fgn;
    } else if (process == "mbm") {
        m.process_type = ProcessType::Mbm;
    } else {
        throw Error(Errc::InvalidManifest, "manifest.process_type: unknown '" + process + "'");
    }
    if (!doc.contains("clusters") || !doc.at("clusters").is_array()) {
        throw Error(Errc::InvalidManifest, "manifest.clusters: missing array");
    }
    std::size_t i = 0;
    for (json c : doc.at("clusters")) {
        c["process"] = process;
        if (!c.contains("n")) c["n"] = 2;
        c.erase("seed");
        m.cluster_specs.push_back(io::spec_from_json(c, "manifest.clusters[" + std::to_string(i++) + "]"));
    }
    m.paths_per_cluster = field<std::size_t>(doc, "paths_per_cluster", m.paths_per_cluster);
    m.lengths = field<std::vector<std::size_t>>(doc, "lengths", {});
    if (doc.contains("online")) {
        const auto& on = doc.at("online");
        for (const auto& s : field<json>(on, "schedule", json::array())) {
            m.schedule.push_back({field<std::size_t>(s, "paths", 0), field<std::size_t>(s, "length", 0)});
        }
        const auto growth = field<std::string>(on, "growth", "uniform");
        if (growth == "uniform") {
            m.growth = OnlineGrowth::Uniform;
        } else if (growth == "staggered") {
            m.growth = OnlineGrowth::Staggered;
        } else {
            throw Error(Errc::InvalidManifest, "manifest.online.growth: unknown '" + growth + "'");
        }
        m.fresh_length = field<std::size_t>(on, "fresh_length", 0);
    }
    m.repetitions = field<std::size_t>(doc, "repetitions", m.repetitions);
    if (doc.contains("config")) m.cfg = io::config_from_json(doc.at("config"));
    const auto algorithm = field<std::string>(doc, "algorithm", "both");
    if (algorithm == "offline") {
        m.run_online = false;
    } else if (algorithm == "online") {
        m.run_offline = false;
    } else if (algorithm != "both") {
        throw Error(Errc::InvalidManifest, "manifest.algorithm: unknown '" + algorithm + "'");
    }
    m.assignment_mode = parse_assignment_mode(field<std::string>(doc, "assignment_mode", "centers-only"));
    m.master_seed = field<std::uint64_t>(doc, "master_seed", 0);
    const auto method = field<std::string>(doc, "fgn_method", "circulant");
    if (method == "circulant") {
        m.fgn_method = FgnMethod::Circulant;
    } else if (method == "cholesky") {
        m.fgn_method = FgnMethod::Cholesky;
    } else {
        throw Error(Errc::InvalidManifest, "manifest.fgn_method: unknown '" + method + "'");
    }
    if (doc.contains("mbm_dt") && !doc.at("mbm_dt").is_null()) m.mbm_dt = field<double>(doc, "mbm_dt", 1.0);
    validate_manifest(m);
    return m;
}

ExperimentManifest read_manifest(const std::filesystem::path& file) {
    return manifest_from_json(io::read_json_file(file));
}

ExperimentManifest default_fgn_manifest() {
    ExperimentManifest m;
    m.process_type = ProcessType::Fgn;
    for (double h : {0.3, 0.4, 0.5, 0.6, 0.7}) m.cluster_specs.push_back(FgnSpec{h, 2.0, 2, 0});
    m.cfg.entry_transform = EntryTransform::LogDamp;
    m.paths_per_cluster = 20;
    m.lengths = {128, 256, 512, 1024, 2048};
    m.schedule = {{25, 128}, {50, 256}, {75, 512}, {100, 1024}, {100, 2048}};
    m.repetitions = 20;
    m.master_seed = 20180615;
    return m;
}

ExperimentManifest default_mbm_manifest() {
    ExperimentManifest m;
    m.process_type = ProcessType::Mbm;
    const std::vector<HurstFunction> shapes = {
        hurst::Constant{0.3},
        hurst::Constant{0.7},
        hurst::Linear{0.2, 0.6},
        hurst::Linear{0.8, -0.6},
        hurst::Logistic{0.1, 0.5, 0.5, 20.0},
    };
    for (const auto& h : shapes) m.cluster_specs.push_back(MbmSpec{h, 2, 1.0, 0, 1000.0});
    m.paths_per_cluster = 20;
    m.lengths = {128, 256, 512, 1024, 2048};
    m.schedule = {{25, 128}, {50, 256}, {75, 512}, {100, 1024}, {100, 2048}};
    m.repetitions = 20;
    m.cfg.K = 10;
    m.cfg.entry_transform = EntryTransform::LogDamp;
    m.master_seed = 20180616;
    return m;
}

std::vector<AggregatePoint> ExperimentReport::curve(Algorithm a) const {
    std::vector<AggregatePoint> out;
    for (const auto& p : aggregates)
        if (p.algorithm == a) out.push_back(p);
    return out;
}

PathDataset make_offline_dataset(const ExperimentManifest& m, std::size_t length,
                                 std::uint64_t run_seed) {
    const auto kappa = m.cluster_specs.size();
    const std::size_t total = kappa * m.paths_per_cluster;
    PathDataset ds;
    ds.paths.resize(total);
    ds.truth = std::vector<int>(total);
    for (std::size_t p = 0; p < total; ++p) {
        const std::size_t c = p % kappa;
        ds.paths[p] = generate_path(m, c, length, derive_seed(run_seed, {p}));
        ds.paths[p].id = "c" + std::to_string(c + 1) + "_p" + std::to_string(p);
        (*ds.truth)[p] = static_cast<int>(c + 1);
    }
    return ds;
}

PathDataset make_online_pool(const ExperimentManifest& m, std::uint64_t run_seed) {
    const auto kappa = m.cluster_specs.size();
    const std::size_t total = m.schedule.back().paths;
    PathDataset pool;
    pool.paths.resize(total);
    pool.truth = std::vector<int>(total);
    for (std::size_t p = 0; p < total; ++p) {
        const std::size_t c = p % kappa;
        const std::size_t len = online_length(m, p, m.schedule.size() - 1);
        pool.paths[p] = generate_path(m, c, len, derive_seed(run_seed, {p}));
        pool.paths[p].id = "c" + std::to_string(c + 1) + "_p" + std::to_string(p);
        (*pool.truth)[p] = static_cast<int>(c + 1);
    }
    return pool;
}

PathDataset online_snapshot(const ExperimentManifest& m, const PathDataset& pool, std::size_t t) {
    const std::size_t count = std::min(m.schedule[t].paths, pool.size());
    PathDataset snap;
    snap.truth = std::vector<int>();
    for (std::size_t p = 0; p < count; ++p) {
        SamplePath path = pool.paths[p];
        path.values.resize(std::min(path.values.size(), online_length(m, p, t)));
        snap.paths.push_back(std::move(path));
        snap.truth->push_back((*pool.truth)[p]);
    }
    return snap;
}

ExperimentReport run_offline_sweep(const ExperimentManifest& m) {
    validate_manifest(m);
    ExperimentReport report;
    report.manifest = m;
    const std::size_t units = m.lengths.size() * m.repetitions;
    report.points.resize(units);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t u = 0; u < static_cast<std::ptrdiff_t>(units); ++u) {
        const std::size_t li = static_cast<std::size_t>(u) / m.repetitions;
        const std::size_t rep = static_cast<std::size_t>(u) % m.repetitions;
        auto& pt = report.points[static_cast<std::size_t>(u)];
        pt.algorithm = Algorithm::Offline;
        pt.step = li;
        pt.length = m.lengths[li];
        pt.paths = m.cluster_specs.size() * m.paths_per_cluster;
        pt.repetition = rep;
        pt.seed = derive_seed(m.master_seed, {kOfflineTag, li, rep});
        const auto start = std::chrono::steady_clock::now();
        try {
            const PathDataset ds = make_offline_dataset(m, pt.length, pt.seed);
            const auto d = dissimilarity_matrix(ds, m.measure(), m.cfg);
            const auto c = offline_cluster(d, m.kappa(), m.assignment_mode);
            pt.rate = misclustering_rate(c, *ds.truth);
        } catch (const std::exception& e) {
            pt.failed = true;
            pt.rate = std::nan("");
            pt.error = e.what();
        }
        pt.seconds = seconds_since(start);
    }
    aggregate(report);
    return report;
}

ExperimentReport run_online_sweep(const ExperimentManifest& m) {
    validate_manifest(m);
    ExperimentReport report;
    report.manifest = m;
    const std::size_t steps = m.schedule.size();
    report.points.resize(steps * m.repetitions);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(m.repetitions); ++r) {
        const auto rep = static_cast<std::size_t>(r);
        const std::uint64_t seed = derive_seed(m.master_seed, {kOnlineTag, rep});
        std::optional<PathDataset> pool;
        std::string pool_error;
        try {
            pool = make_online_pool(m, seed);
        } catch (const std::exception& e) {
            pool_error = e.what();
        }
        OnlineClusterer clusterer(m.kappa(), m.cfg, m.measure(), m.assignment_mode);
        for (std::size_t t = 0; t < steps; ++t) {
            auto& pt = report.points[t * m.repetitions + rep];
            pt.algorithm = Algorithm::Online;
            pt.step = t;
            pt.length = m.schedule[t].length;
            pt.paths = m.schedule[t].paths;
            pt.repetition = rep;
            pt.seed = seed;
            const auto start = std::chrono::steady_clock::now();
            try {
                if (!pool) throw Error(Errc::InvalidSpec, pool_error);
                const PathDataset snap = online_snapshot(m, *pool, t);
                const auto result = clusterer.step(snap);
                pt.rate = misclustering_rate(result.clustering, *snap.truth);
                pt.eta_fallback = result.state.eta_fallback;
            } catch (const std::exception& e) {
                pt.failed = true;
                pt.rate = std::nan("");
                pt.error = e.what();
            }
            pt.seconds = seconds_since(start);
        }
    }
    aggregate(report);
    return report;
}

ExperimentReport run_sweep(const ExperimentManifest& m) {
    validate_manifest(m);
    ExperimentReport report;
    report.manifest = m;
    if (m.run_offline) {
        auto off = run_offline_sweep(m);
        report.points = std::move(off.points);
    }
    if (m.run_online) {
        auto on = run_online_sweep(m);
        report.points.insert(report.points.end(), on.points.begin(), on.points.end());
    }
    aggregate(report);
    return report;
}

void aggregate(ExperimentReport& report) {
    std::map<std::pair<int, std::size_t>, std::vector<const ReportPoint*>> groups;
    for (const auto& p : report.points) groups[{static_cast<int>(p.algorithm), p.step}].push_back(&p);
    report.aggregates.clear();
    for (const auto& [key, pts] : groups) {
        AggregatePoint a;
        a.algorithm = static_cast<Algorithm>(key.first);
        a.step = key.second;
        a.length = pts.front()->length;
        double sum = 0.0;
        for (const auto* p : pts) {
            if (p->failed) {
                ++a.failures;
                continue;
            }
            sum += p->rate;
            ++a.count;
        }
        if (a.count == 0) {
            a.mean = std::nan("");
        } else {
            a.mean = sum / static_cast<double>(a.count);
            double ss = 0.0;
            for (const auto* p : pts)
                if (!p->failed) ss += (p->rate - a.mean) * (p->rate - a.mean);
            a.stderr_ = a.count > 1 ? std::sqrt(ss / static_cast<double>(a.count - 1)) /
                                          std::sqrt(static_cast<double>(a.count))
                                    : 0.0;
        }
        report.aggregates.push_back(a);
    }
}

namespace {

std::string fixed(double v, int digits) {
    if (!std::isfinite(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::vector<Algorithm> algorithms_in(const ExperimentReport& r) {
    std::vector<Algorithm> out;
    for (auto a : {Algorithm::Offline, Algorithm::Online})
        if (!r.curve(a).empty()) out.push_back(a);
    return out;
}

}  // namespace

std::string curves_csv(const ExperimentReport& report) {
    const auto algs = algorithms_in(report);
    std::set<std::size_t> xs;
    for (const auto& a : report.aggregates) xs.insert(a.length);
    std::string out = "x";
    for (auto a : algs) {
        out += "," + std::string(to_string(a)) + "_mean";
        out += "," + std::string(to_string(a)) + "_se";
    }
    out += '\n';
    for (auto x : xs) {
        out += std::to_string(x);
        for (auto alg : algs) {
            const AggregatePoint* hit = nullptr;
            for (const auto& a : report.aggregates)
                if (a.algorithm == alg && a.length == x) hit = &a;
            out += "," + (hit ? fixed(hit->mean, 6) : std::string());
            out += "," + (hit ? fixed(hit->stderr_, 6) : std::string());
        }
        out += '\n';
    }
    return out;
}

std::string curves_svg(const ExperimentReport& report) {
    constexpr double width = 720, height = 440;
    constexpr double left = 70, right = 30, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    std::set<std::size_t> xs;
    double ymax = 0.0;
    for (const auto& a : report.aggregates) {
        xs.insert(a.length);
        if (std::isfinite(a.mean)) ymax = std::max(ymax, a.mean + a.stderr_);
    }
    ymax = std::max(0.1, std::ceil(ymax * 10.0) / 10.0);
    const bool log_x = !xs.empty() && *xs.begin() > 0;
    auto xval = [&](std::size_t x) { return log_x ? std::log2(static_cast<double>(x)) : static_cast<double>(x); };
    double xmin = xs.empty() ? 0.0 : xval(*xs.begin());
    double xmax = xs.empty() ? 1.0 : xval(*xs.rbegin());
    if (xmax - xmin < 1e-12) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    auto px = [&](std::size_t x) { return left + (xval(x) - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return top + (1.0 - y / ymax) * plot_h; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\" viewBox=\"0 0 720 440\">\n";
    s += "<rect width=\"720\" height=\"440\" fill=\"white\"/>\n";
    s += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<text x=\"360\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">mis-clustering rate (" +
         std::string(to_string(report.manifest.process_type)) + ")</text>\n";
    for (int i = 0; i <= 5; ++i) {
        const double y = ymax * i / 5.0;
        s += "<line x1=\"" + fixed(left, 1) + "\" y1=\"" + fixed(py(y), 1) + "\" x2=\"" +
             fixed(left + plot_w, 1) + "\" y2=\"" + fixed(py(y), 1) + "\" stroke=\"#dddddd\"/>\n";
        s += "<text x=\"" + fixed(left - 8, 1) + "\" y=\"" + fixed(py(y) + 4, 1) +
             "\" text-anchor=\"end\">" + fixed(y, 2) + "</text>\n";
    }
    for (auto x : xs) {
        s += "<text x=\"" + fixed(px(x), 1) + "\" y=\"" + fixed(top + plot_h + 18, 1) +
             "\" text-anchor=\"middle\">" + std::to_string(x) + "</text>\n";
    }
    s += "<line x1=\"" + fixed(left, 1) + "\" y1=\"" + fixed(top + plot_h, 1) + "\" x2=\"" +
         fixed(left + plot_w, 1) + "\" y2=\"" + fixed(top + plot_h, 1) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fixed(left, 1) + "\" y1=\"" + fixed(top, 1) + "\" x2=\"" + fixed(left, 1) +
         "\" y2=\"" + fixed(top + plot_h, 1) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fixed(left + plot_w / 2, 1) + "\" y=\"" + fixed(height - 15, 1) +
         "\" text-anchor=\"middle\">path length</text>\n";

    int legend_row = 0;
    for (auto alg : algorithms_in(report)) {
        const bool offline = alg == Algorithm::Offline;
        const std::string color = offline ? "#d62728" : "#1f77b4";
        const std::string dash = offline ? "" : " stroke-dasharray=\"6,4\"";
        std::string points;
        std::string markers;
        for (const auto& a : report.curve(alg)) {
            if (!std::isfinite(a.mean)) continue;
            const std::string cx = fixed(px(a.length), 1), cy = fixed(py(a.mean), 1);
            points += (points.empty() ? "" : " ") + cx + "," + cy;
            markers += "<circle cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"" + dash +
             " points=\"" + points + "\"/>\n";
        s += markers;
        const double ly = top + 12 + 18 * legend_row++;
        s += "<line x1=\"" + fixed(left + plot_w - 120, 1) + "\" y1=\"" + fixed(ly, 1) + "\" x2=\"" +
             fixed(left + plot_w - 90, 1) + "\" y2=\"" + fixed(ly, 1) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"" + dash + "/>\n";
        s += "<text x=\"" + fixed(left + plot_w - 84, 1) + "\" y=\"" + fixed(ly + 4, 1) + "\">" +
             std::string(to_string(alg)) + "</text>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

json report_json(const ExperimentReport& report) {
    json points = json::array();
    for (const auto& p : report.points) {
        json j = {{"algorithm", std::string(to_string(p.algorithm))},
                  {"step", p.step},
                  {"length", p.length},
                  {"paths", p.paths},
                  {"repetition", p.repetition},
                  {"seed", p.seed},
                  {"rate", p.failed ? json(nullptr) : json(p.rate)}};
        if (p.failed) j["error"] = p.error;
        if (p.eta_fallback) j["eta_fallback"] = true;
        points.push_back(std::move(j));
    }
    json aggregates = json::array();
    for (const auto& a : report.aggregates) {
        aggregates.push_back({{"algorithm", std::string(to_string(a.algorithm))},
                              {"step", a.step},
                              {"length", a.length},
                              {"mean", std::isfinite(a.mean) ? json(a.mean) : json(nullptr)},
                              {"stderr", a.stderr_},
                              {"count", a.count},
                              {"failures", a.failures}});
    }
    return {{"manifest", manifest_to_json(report.manifest)}, {"points", points}, {"aggregates", aggregates}};
}

json timings_json(const ExperimentReport& report) {
    json points = json::array();
    double total = 0.0;
    for (const auto& p : report.points) {
        points.push_back({{"algorithm", std::string(to_string(p.algorithm))},
                          {"step", p.step},
                          {"repetition", p.repetition},
                          {"seconds", p.seconds}});
        total += p.seconds;
    }
    return {{"total_seconds", total}, {"points", points}};
}

void emit_curves(const ExperimentReport& report, const std::filesystem::path& dir) {
    if (report.aggregates.empty()) throw Error(Errc::InvalidManifest, "report has no points");
    io::write_text_file(dir / "curves.csv", curves_csv(report));
    io::write_text_file(dir / "curves.svg", curves_svg(report));
    io::write_text_file(dir / "report.json", report_json(report).dump(2) + "\n");
    io::write_text_file(dir / "timings.json", timings_json(report).dump(2) + "\n");
}

}  // namespace pathclust
