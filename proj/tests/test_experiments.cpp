#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "pathclust/error.hpp"
#include "pathclust/experiments.hpp"
#include "support.hpp"

using namespace pathclust;

namespace {

ExperimentManifest small_fgn(std::size_t per_cluster, std::vector<double> hs) {
    ExperimentManifest m;
    m.process_type = ProcessType::Fgn;
    for (double h : hs) m.cluster_specs.push_back(FgnSpec{h, 1.0, 2, 0});
    m.paths_per_cluster = per_cluster;
    m.lengths = {64, 128, 256};
    m.schedule = {{hs.size(), 64}};
    m.repetitions = 3;
    m.master_seed = 99;
    return m;
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (auto p = s.find('\n'); p != std::string::npos; p = s.find('\n', start)) {
        out.push_back(s.substr(start, p - start));
        start = p + 1;
    }
    return out;
}

void check_report(const ExperimentReport& r) {
    for (const auto& p : r.points) {
        if (p.failed) {
            CHECK_FALSE(p.error.empty());
        } else {
            CHECK(p.rate >= 0.0);
            CHECK(p.rate <= 1.0);
        }
    }
    for (const auto& a : r.aggregates) {
        CHECK(a.count + a.failures == r.manifest.repetitions);
        CHECK(a.stderr_ >= 0.0);
    }
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("two paths two clusters is always perfect") {
    auto m = small_fgn(1, {0.3, 0.7});
    m.schedule = {{2, 64}, {2, 128}};
    const auto r = run_sweep(m);
    check_report(r);
    for (const auto& p : r.points) {
        CHECK_FALSE(p.failed);
        CHECK(p.rate == 0.0);
    }
    CHECK(r.curve(Algorithm::Offline).size() == 3);
    CHECK(r.curve(Algorithm::Online).size() == 2);
}

TEST_CASE("online single snapshot with N = kappa is perfect") {
    auto m = small_fgn(2, {0.2, 0.5, 0.8});
    m.run_offline = false;
    m.schedule = {{3, 100}};
    const auto r = run_online_sweep(m);
    check_report(r);
    REQUIRE(r.points.size() == 3);
    for (const auto& p : r.points) CHECK(p.rate == 0.0);
}

TEST_CASE("staggered growth reports short-path failures instead of crashing") {
    auto m = small_fgn(4, {0.3, 0.7});
    m.run_offline = false;
    m.growth = OnlineGrowth::Staggered;
    m.schedule = {{2, 64}, {4, 128}, {8, 256}};
    for (std::size_t fresh : {1, 2, 16}) {
        m.fresh_length = fresh;
        const auto r = run_online_sweep(m);
        check_report(r);
        for (const auto& p : r.points) {
            if (fresh == 1) {
                CHECK(p.failed);
                CHECK(p.error.find("PathTooShort") != std::string::npos);
            } else {
                CHECK_FALSE(p.failed);
            }
        }
    }
}

TEST_CASE("staggered snapshots extend each other") {
    auto m = small_fgn(3, {0.3, 0.7});
    m.growth = OnlineGrowth::Staggered;
    m.fresh_length = 10;
    m.schedule = {{2, 50}, {4, 80}, {6, 80}, {6, 120}};
    const auto pool = make_online_pool(m, 5);
    std::optional<PathDataset> prev;
    for (std::size_t t = 0; t < m.schedule.size(); ++t) {
        const auto s = online_snapshot(m, pool, t);
        CHECK(s.size() == m.schedule[t].paths);
        CHECK(s.paths[0].size() == m.schedule[t].length - 50 + 10);
        if (prev) CHECK_NOTHROW(check_snapshot_extends(*prev, s));
        prev = s;
    }
    CHECK(online_snapshot(m, pool, 3).paths[5].size() == 120 - 80 + 10);
}

TEST_CASE("mbm manifests run with the localized measure") {
    ExperimentManifest m;
    m.process_type = ProcessType::Mbm;
    m.cluster_specs = {MbmSpec{hurst::Constant{0.3}, 2, 1.0, 0}, MbmSpec{hurst::Linear{0.3, 0.4}, 2, 1.0, 0}};
    m.paths_per_cluster = 2;
    m.lengths = {40, 60};
    m.schedule = {{4, 40}};
    m.repetitions = 2;
    CHECK(m.measure() == Measure::Local);
    const auto r = run_sweep(m);
    check_report(r);
    for (const auto& p : r.points) CHECK_FALSE(p.failed);
}

TEST_CASE("datasets are interleaved and labeled") {
    const auto m = small_fgn(3, {0.3, 0.5, 0.7});
    const auto ds = make_offline_dataset(m, 32, 7);
    REQUIRE(ds.size() == 9);
    for (std::size_t p = 0; p < 9; ++p) {
        CHECK((*ds.truth)[p] == static_cast<int>(p % 3) + 1);
        CHECK(ds.paths[p].size() == 32);
    }
    CHECK(make_offline_dataset(m, 32, 7) == ds);
    CHECK_FALSE(make_offline_dataset(m, 32, 8) == ds);
}

TEST_CASE("manifest validation") {
    auto m = small_fgn(2, {0.3});
    CHECK_THROWS_AS(validate_manifest(m), Error);
    m = small_fgn(2, {0.3, 0.6});
    m.lengths = {128, 128};
    CHECK_THROWS_AS(validate_manifest(m), Error);
    m = small_fgn(2, {0.3, 0.6});
    m.repetitions = 0;
    CHECK_THROWS_AS(validate_manifest(m), Error);
    m = small_fgn(0, {0.3, 0.6});
    CHECK_THROWS_AS(validate_manifest(m), Error);
    m = small_fgn(2, {0.3, 0.6});
    m.schedule = {{4, 100}, {2, 100}};
    CHECK_THROWS_AS(validate_manifest(m), Error);
    m = small_fgn(2, {0.3, 0.6});
    m.cluster_specs.push_back(MbmSpec{});
    CHECK_THROWS_AS(validate_manifest(m), Error);
    CHECK_NOTHROW(validate_manifest(default_fgn_manifest()));
    CHECK_NOTHROW(validate_manifest(default_mbm_manifest()));
}

TEST_CASE("default manifests") {
    const auto f = default_fgn_manifest();
    CHECK(f.kappa() == 5);
    CHECK(f.paths_per_cluster == 20);
    CHECK(f.lengths == std::vector<std::size_t>{128, 256, 512, 1024, 2048});
    CHECK(f.repetitions == 20);
    CHECK(f.schedule.back().paths == 100);
    CHECK(f.schedule.front().paths == 25);
    const auto g = default_mbm_manifest();
    CHECK(g.kappa() == 5);
    CHECK(g.cfg.K == 10);
    CHECK(g.measure() == Measure::Local);
}

TEST_CASE("curve output shapes") {
    auto m = small_fgn(2, {0.3, 0.7});
    m.lengths = {64};
    m.run_online = false;
    const auto one = run_sweep(m);
    const auto l1 = lines(curves_csv(one));
    REQUIRE(l1.size() == 2);
    CHECK(l1[0] == "x,offline_mean,offline_se");
    CHECK(count(curves_svg(one), "<circle") == 1);

    m = small_fgn(2, {0.3, 0.7});
    m.schedule = {{4, 64}, {4, 128}, {4, 256}};
    const auto two = run_sweep(m);
    const auto l2 = lines(curves_csv(two));
    REQUIRE(l2.size() == 4);
    CHECK(l2[0] == "x,offline_mean,offline_se,online_mean,online_se");
    for (std::size_t i = 1; i < 4; ++i) CHECK(count(l2[i], ",") == 4);
    const auto svg = curves_svg(two);
    CHECK(count(svg, "<circle") == 6);
    CHECK(count(svg, "stroke-dasharray") == 2);
}

TEST_CASE("reports are reproducible") {
    auto m = small_fgn(2, {0.3, 0.5, 0.7});
    m.schedule = {{3, 64}, {6, 128}};
    const auto a = run_sweep(m);
    const auto b = run_sweep(m);
    CHECK(report_json(a) == report_json(b));
    CHECK(curves_csv(a) == curves_csv(b));
    CHECK(curves_csv(a) == curves_csv(a));
    CHECK(curves_svg(a) == curves_svg(b));

    const auto dir = std::filesystem::temp_directory_path() / "pathclust_test_emit";
    std::filesystem::remove_all(dir);
    emit_curves(a, dir);
    for (const char* f : {"curves.csv", "curves.svg", "report.json", "timings.json"})
        CHECK(std::filesystem::exists(dir / f));
    CHECK(io::read_text_file(dir / "curves.csv") == curves_csv(a));
    CHECK_THROWS_AS(emit_curves(ExperimentReport{}, dir), Error);
}

}  // TEST_SUITE

TEST_SUITE("experiments_mc") {

TEST_CASE("identical cluster specs give chance-level rates") {
    ExperimentManifest m;
    for (int k = 0; k < 5; ++k) m.cluster_specs.push_back(FgnSpec{0.5, 1.0, 2, 0});
    m.paths_per_cluster = 20;
    m.lengths = {512};
    m.repetitions = 20;
    m.run_online = false;
    m.master_seed = 31337;
    const auto r = run_offline_sweep(m);
    check_report(r);
    REQUIRE(r.aggregates.size() == 1);
    INFO("mean rate " << r.aggregates[0].mean);
    CHECK(r.aggregates[0].mean > 0.4);
}

}  // TEST_SUITE
