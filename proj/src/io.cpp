#include "pathclust/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pathclust/error.hpp"

namespace pathclust::io {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& file, const std::string& text) {
    std::error_code ec;
    if (file.has_parent_path()) fs::create_directories(file.parent_path(), ec);
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + file.string());
    out << text;
    if (!out) throw Error(Errc::IoError, "write failed for " + file.string());
}

json read_json_file(const fs::path& file) {
    const std::string text = read_text_file(file);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, file.string() + ": " + e.what());
    }
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

template <class T>
T get_field(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw Error(Errc::ParseError, where + "." + key + ": missing");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, where + "." + key + ": " + e.what());
    }
}

template <class T>
T get_field_or(const json& obj, const char* key, T fallback, const std::string& where) {
    return obj.contains(key) ? get_field<T>(obj, key, where) : fallback;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw Error(Errc::ParseError, where + "." + key + ": unknown field");
    }
}

std::optional<std::vector<int>> read_truth(const json& doc) {
    if (!doc.contains("truth") || doc.at("truth").is_null()) return std::nullopt;
    return get_field<std::vector<int>>(doc, "truth", "dataset");
}

}  // namespace

std::vector<double> read_path_csv(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(Errc::IoError, "cannot open " + file.string());
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string cell = trim(line);
        if (cell.empty()) continue;
        if (const auto comma = cell.find(','); comma != std::string::npos) {
            throw Error(Errc::ParseError,
                        file.string() + ":" + std::to_string(line_no) + ": expected a single column");
        }
        double v = 0.0;
        if (!parse_double(cell, v)) {
            if (values.empty() && line_no == 1) continue;  // header
            throw Error(Errc::ParseError, file.string() + ":" + std::to_string(line_no) +
                                              ": not a number: '" + cell + "'");
        }
        values.push_back(v);
    }
    return values;
}

void write_path_csv(const fs::path& file, const std::vector<double>& values) {
    std::string text = "value\n";
    for (double v : values) {
        text += format_double(v);
        text += '\n';
    }
    write_text_file(file, text);
}

json dataset_to_json(const PathDataset& ds) {
    json paths = json::array();
    for (const auto& p : ds.paths) {
        paths.push_back({{"id", p.id}, {"dt", p.dt}, {"values", p.values}});
    }
    json doc = {{"paths", paths}};
    if (ds.truth) doc["truth"] = *ds.truth;
    return doc;
}

PathDataset dataset_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("paths") || !doc.at("paths").is_array()) {
        throw Error(Errc::ParseError, "dataset: expected an object with a 'paths' array");
    }
    const double dt = get_field_or<double>(doc, "dt", 1.0, "dataset");
    PathDataset ds;
    std::size_t i = 0;
    for (const auto& entry : doc.at("paths")) {
        const std::string where = "dataset.paths[" + std::to_string(i) + "]";
        SamplePath p;
        p.id = get_field_or<std::string>(entry, "id", "path_" + std::to_string(i), where);
        p.dt = get_field_or<double>(entry, "dt", dt, where);
        p.values = get_field<std::vector<double>>(entry, "values", where);
        ds.paths.push_back(std::move(p));
        ++i;
    }
    ds.truth = read_truth(doc);
    validate_dataset(ds);
    return ds;
}

PathDataset read_dataset(const fs::path& location) {
    fs::path manifest = location;
    if (fs::is_directory(location)) manifest = location / "manifest.json";
    if (!fs::exists(manifest)) throw Error(Errc::IoError, "no dataset at " + location.string());
    const json doc = read_json_file(manifest);
    if (!doc.contains("paths") || !doc.at("paths").is_array()) {
        throw Error(Errc::ParseError, manifest.string() + ": missing 'paths' array");
    }
    const auto& entries = doc.at("paths");
    const bool embedded =
        !entries.empty() && entries.front().is_object() && entries.front().contains("values");
    if (embedded) return dataset_from_json(doc);

    const fs::path base = manifest.parent_path();
    const double dt = get_field_or<double>(doc, "dt", 1.0, "manifest");
    PathDataset ds;
    std::size_t i = 0;
    for (const auto& entry : entries) {
        const std::string where = "manifest.paths[" + std::to_string(i) + "]";
        SamplePath p;
        std::string file;
        if (entry.is_string()) {
            file = entry.get<std::string>();
            p.dt = dt;
        } else if (entry.is_object()) {
            file = get_field<std::string>(entry, "file", where);
            p.dt = get_field_or<double>(entry, "dt", dt, where);
            p.id = get_field_or<std::string>(entry, "id", "", where);
        } else {
            throw Error(Errc::ParseError, where + ": expected a file name or object");
        }
        if (p.id.empty()) p.id = fs::path(file).stem().string();
        p.values = read_path_csv(base / file);
        ds.paths.push_back(std::move(p));
        ++i;
    }
    ds.truth = read_truth(doc);
    validate_dataset(ds);
    return ds;
}

void write_dataset_dir(const fs::path& dir, const PathDataset& ds) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
    json entries = json::array();
    const std::size_t width = std::max<std::size_t>(3, std::to_string(ds.size()).size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::ostringstream name;
        name << "path_" << std::setw(static_cast<int>(width)) << std::setfill('0') << i << ".csv";
        write_path_csv(dir / name.str(), ds.paths[i].values);
        entries.push_back({{"file", name.str()}, {"id", ds.paths[i].id}, {"dt", ds.paths[i].dt}});
    }
    json doc = {{"paths", entries}};
    if (ds.truth) doc["truth"] = *ds.truth;
    write_text_file(dir / "manifest.json", doc.dump(2) + "\n");
}

json config_to_json(const DissimilarityConfig& cfg) {
    return {{"weight_rule", std::string(to_string(cfg.weight_rule))},
            {"m_rule", std::string(to_string(cfg.m_rule))},
            {"entry_transform", std::string(to_string(cfg.entry_transform))},
            {"K", cfg.K},
            {"center", cfg.center}};
}

DissimilarityConfig config_from_json(const json& doc, DissimilarityConfig base) {
    const std::string where = "config";
    if (!doc.is_object()) throw Error(Errc::ParseError, "config: expected an object");
    reject_unknown(doc, {"weight_rule", "m_rule", "entry_transform", "K", "center"}, where);
    if (doc.contains("weight_rule"))
        base.weight_rule = parse_weight_rule(get_field<std::string>(doc, "weight_rule", where));
    if (doc.contains("m_rule")) base.m_rule = parse_m_rule(get_field<std::string>(doc, "m_rule", where));
    if (doc.contains("entry_transform"))
        base.entry_transform = parse_transform(get_field<std::string>(doc, "entry_transform", where));
    if (doc.contains("K")) base.K = get_field<int>(doc, "K", where);
    if (doc.contains("center")) base.center = get_field<bool>(doc, "center", where);
    validate_config(base);
    return base;
}

DissimilarityConfig read_config(const fs::path& file) { return config_from_json(read_json_file(file)); }

json hurst_fn_to_json(const HurstFunction& h) {
    return std::visit(
        [](const auto& f) -> json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, hurst::Constant>) {
                return {{"type", "constant"}, {"value", f.value}};
            } else if constexpr (std::is_same_v<T, hurst::Linear>) {
                return {{"type", "linear"}, {"a", f.a}, {"b", f.b}};
            } else if constexpr (std::is_same_v<T, hurst::Logistic>) {
                return {{"type", "logistic"},
                        {"low", f.low},
                        {"high", f.high},
                        {"midpoint", f.midpoint},
                        {"steepness", f.steepness}};
            } else {
                json knots = json::array();
                for (const auto& [u, h] : f.knots) knots.push_back({u, h});
                return {{"type", "piecewise"}, {"knots", knots}};
            }
        },
        h);
}

HurstFunction hurst_fn_from_json(const json& doc, const std::string& where) {
    if (doc.is_number()) return hurst::Constant{doc.get<double>()};
    const auto type = get_field<std::string>(doc, "type", where);
    if (type == "constant") return hurst::Constant{get_field<double>(doc, "value", where)};
    if (type == "linear") {
        return hurst::Linear{get_field<double>(doc, "a", where), get_field<double>(doc, "b", where)};
    }
    if (type == "logistic") {
        return hurst::Logistic{get_field<double>(doc, "low", where), get_field<double>(doc, "high", where),
                               get_field_or<double>(doc, "midpoint", 0.5, where),
                               get_field_or<double>(doc, "steepness", 10.0, where)};
    }
    if (type == "piecewise") {
        hurst::Piecewise p;
        for (const auto& k : get_field<std::vector<std::vector<double>>>(doc, "knots", where)) {
            if (k.size() != 2) throw Error(Errc::ParseError, where + ".knots: expected [u, H] pairs");
            p.knots.emplace_back(k[0], k[1]);
        }
        return p;
    }
    throw Error(Errc::ParseError, where + ".type: unknown hurst_fn type '" + type + "'");
}

json spec_to_json(const GeneratorSpec& spec) {
    if (const auto* f = std::get_if<FgnSpec>(&spec)) {
        return {{"process", "fgn"}, {"hurst", f->hurst}, {"sigma", f->sigma}, {"n", f->n}, {"seed", f->seed}};
    }
    const auto& m = std::get<MbmSpec>(spec);
    return {{"process", "mbm"},
            {"hurst_fn", hurst_fn_to_json(m.hurst_fn)},
            {"n", m.n},
            {"dt", m.dt},
            {"sigma", m.sigma},
            {"seed", m.seed}};
}

GeneratorSpec spec_from_json(const json& doc, const std::string& where) {
    if (!doc.is_object()) throw Error(Errc::ParseError, where + ": expected an object");
    const auto process = get_field_or<std::string>(doc, "process", "fgn", where);
    try {
        if (process == "fgn") {
            FgnSpec s;
            s.hurst = get_field<double>(doc, "hurst", where);
            s.sigma = get_field_or<double>(doc, "sigma", 1.0, where);
            s.n = get_field<std::size_t>(doc, "n", where);
            s.seed = get_field_or<std::uint64_t>(doc, "seed", 0, where);
            validate(s);
            return s;
        }
        if (process == "mbm") {
            MbmSpec s;
            if (!doc.contains("hurst_fn")) throw Error(Errc::ParseError, where + ".hurst_fn: missing");
            s.hurst_fn = hurst_fn_from_json(doc.at("hurst_fn"), where + ".hurst_fn");
            s.n = get_field<std::size_t>(doc, "n", where);
            s.dt = get_field_or<double>(doc, "dt", 1.0 / static_cast<double>(std::max<std::size_t>(s.n, 1)), where);
            s.sigma = get_field_or<double>(doc, "sigma", 1.0, where);
            s.seed = get_field_or<std::uint64_t>(doc, "seed", 0, where);
            validate(s);
            return s;
        }
    } catch (const Error& e) {
        if (e.code() == Errc::InvalidSpec) throw Error(Errc::InvalidSpec, where + ": " + e.what());
        throw;
    }
    throw Error(Errc::ParseError, where + ".process: unknown process '" + process + "'");
}

json clustering_to_json(const Clustering& c) {
    return {{"kappa", c.kappa}, {"centers", c.centers}, {"assignment", c.assignment}};
}

Clustering clustering_from_json(const json& doc) {
    Clustering c;
    c.kappa = get_field<int>(doc, "kappa", "clustering");
    c.centers = get_field<std::vector<std::size_t>>(doc, "centers", "clustering");
    c.assignment = get_field<std::vector<int>>(doc, "assignment", "clustering");
    return c;
}

void write_clustering_csv(std::ostream& os, const Clustering& c, const PathDataset& ds) {
    os << "path_id,label\n";
    for (std::size_t i = 0; i < c.assignment.size(); ++i) {
        os << (i < ds.size() ? ds.paths[i].id : std::to_string(i)) << ',' << c.assignment[i] << '\n';
    }
}

void write_matrix_csv(std::ostream& os, const DistanceMatrix& d, const PathDataset& ds) {
    os << "id";
    for (const auto& p : ds.paths) os << ',' << p.id;
    os << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        os << ds.paths[i].id;
        for (std::size_t j = 0; j < d.size(); ++j) os << ',' << format_double(d(i, j));
        os << '\n';
    }
}

}  // namespace pathclust::io
