#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pathclust/error.hpp"
#include "pathclust/generators.hpp"
#include "pathclust/rng.hpp"
#include "support.hpp"

using namespace pathclust;

namespace {

struct MeanSe {
    double mean = 0, se = 0;
};

MeanSe mean_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1) / n)};
}

double sample_acov(const std::vector<double>& x, std::size_t k) {
    double s = 0;
    for (std::size_t i = 0; i + k < x.size(); ++i) s += x[i] * x[i + k];
    return s / static_cast<double>(x.size() - k);
}

std::vector<double> diff(const std::vector<double>& x) {
    std::vector<double> d(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i) d[i - 1] = x[i] - x[i - 1];
    return d;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// Two-sided Mann-Whitney U test, normal approximation with tie correction.
double rank_sum_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<std::pair<double, int>> all;
    for (double v : a) all.emplace_back(v, 0);
    for (double v : b) all.emplace_back(v, 1);
    std::sort(all.begin(), all.end());
    const double N = static_cast<double>(all.size());
    double ra = 0, ties = 0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        const double rank = (static_cast<double>(i + j) + 1) / 2;
        const double t = static_cast<double>(j - i);
        ties += t * t * t - t;
        for (std::size_t q = i; q < j; ++q)
            if (all[q].second == 0) ra += rank;
        i = j;
    }
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double u = ra - na * (na + 1) / 2;
    const double var = na * nb / 12 * ((N + 1) - ties / (N * (N - 1)));
    const double z = (u - na * nb / 2) / std::sqrt(var);
    return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

// Stationary standard deviation of RL increments at dt = 1, sigma = 1.
double rl_increment_sd(double h) {
    const double a = h - 0.5;
    double s = 1.0;
    for (std::size_t k = 2; k < 2000000; ++k) {
        const double t = std::pow(static_cast<double>(k), a) - std::pow(static_cast<double>(k - 1), a);
        s += t * t;
    }
    return std::sqrt(s) / std::tgamma(h + 0.5);
}

}  // namespace

TEST_SUITE("generators") {

TEST_CASE("counter rng is a pure function of key and counter") {
    const CounterRng a(42), b(42), c(43);
    for (std::uint64_t k = 0; k < 100; ++k) {
        CHECK(a.bits(k) == b.bits(k));
        CHECK(a.bits(k) != c.bits(k));
        const double u = a.uniform(k);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        CHECK(a.normal(k) == b.normal(k));
    }
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
}

TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-15));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-13));
    for (double p = 0.01; p < 1.0; p += 0.01) {
        const double z = normal_quantile(p);
        CHECK(0.5 * std::erfc(-z / std::sqrt(2.0)) == doctest::Approx(p).epsilon(1e-13));
    }
}

TEST_CASE("fgn autocovariance examples") {
    for (std::size_t k = 1; k < 10; ++k) CHECK(std::fabs(fgn_autocovariance(k, 0.5, 3.0)) < 1e-14);
    CHECK(fgn_autocovariance(0, 0.3, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(fgn_autocovariance(1, 0.7, 1.0) == doctest::Approx((std::pow(2.0, 1.4) - 2) / 2).epsilon(1e-14));
    CHECK(fgn_autocovariance(1, 0.7, 1.0) == doctest::Approx(0.3195).epsilon(1e-4));
    for (double h : {0.2, 0.6, 0.9})
        for (std::size_t k = 0; k < 20; ++k)
            CHECK(fgn_autocovariance(k, h, 1.3) ==
                  doctest::Approx(static_cast<double>(oracle::fgn_acov(k, h, 1.3))).epsilon(1e-12));
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(validate(FgnSpec{0.0, 1, 10, 0}), Error);
    CHECK_THROWS_AS(validate(FgnSpec{1.0, 1, 10, 0}), Error);
    CHECK_THROWS_AS(validate(FgnSpec{0.5, 0, 10, 0}), Error);
    CHECK_THROWS_AS(validate(FgnSpec{0.5, 1, 0, 0}), Error);
    CHECK_NOTHROW(validate(FgnSpec{0.5, 1, 1, 0}));
    CHECK_THROWS_AS(validate(MbmSpec{hurst::Constant{0.5}, 1, 1.0, 0}), Error);
    CHECK_THROWS_AS(validate(MbmSpec{hurst::Linear{0.2, 0.8}, 10, 1.0, 0}), Error);
    CHECK_THROWS_AS(validate(MbmSpec{hurst::Constant{0.5}, 10, 0.0, 0}), Error);
    CHECK_THROWS_AS(validate(MbmSpec{hurst::Constant{0.5}, 10, 1.0, 0, -1.0}), Error);
    CHECK_THROWS_AS(validate(MbmSpec{hurst::Piecewise{{{0.5, 0.3}, {0.5, 0.4}}}, 10, 1.0, 0}), Error);
    CHECK_NOTHROW(validate(MbmSpec{hurst::Linear{0.2, 0.6}, 10, 1.0, 0}));
    try {
        fgn_cholesky(FgnSpec{0.5, 1, 5000, 0});
        FAIL("expected size guard");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidSpec);
    }
}

TEST_CASE("hurst function shapes") {
    CHECK(evaluate(hurst::Constant{0.4}, 0.9) == 0.4);
    CHECK(evaluate(hurst::Linear{0.2, 0.6}, 0.5) == doctest::Approx(0.5));
    CHECK(evaluate(hurst::Logistic{0.2, 0.8, 0.5, 10}, 0.5) == doctest::Approx(0.5));
    const hurst::Piecewise pw{{{0.2, 0.3}, {0.6, 0.7}}};
    CHECK(evaluate(pw, 0.0) == 0.3);
    CHECK(evaluate(pw, 0.4) == doctest::Approx(0.5));
    CHECK(evaluate(pw, 1.0) == 0.7);
    CHECK_FALSE(describe(pw).empty());
}

TEST_CASE("generators are deterministic and finite") {
    const FgnSpec f{0.7, 1.5, 300, 99};
    CHECK(fgn_circulant(f) == fgn_circulant(f));
    CHECK(fgn_cholesky(f) == fgn_cholesky(f));
    CHECK(fgn_circulant(f).values != fgn_circulant(FgnSpec{0.7, 1.5, 300, 100}).values);
    const MbmSpec m{hurst::Logistic{0.2, 0.8, 0.5, 10}, 300, 1.0 / 300, 5};
    CHECK(mbm_riemann_liouville(m) == mbm_riemann_liouville(m));
    for (double h : {0.02, 0.3, 0.5, 0.98}) {
        for (const auto& p : {fgn_circulant(FgnSpec{h, 1, 257, 1}), fgn_cholesky(FgnSpec{h, 1, 257, 1})}) {
            CHECK(p.size() == 257);
            CHECK(std::all_of(p.values.begin(), p.values.end(), [](double v) { return std::isfinite(v); }));
        }
    }
    CHECK(fgn_circulant(FgnSpec{0.4, 1, 1, 3}).size() == 1);
    CHECK(fgn_circulant(FgnSpec{0.4, 1, 2, 3}).size() == 2);
}

TEST_CASE("fbm from fgn") {
    CHECK(fbm_from_fgn(support::path({1, 1, 1})).values == std::vector<double>{0, 1, 2, 3});
    CHECK(fbm_from_fgn(support::path({0, 0, 0, 0})).values == std::vector<double>(5, 0.0));
    const auto inc = fgn_circulant(FgnSpec{0.6, 1, 200, 8});
    const auto b = fbm_from_fgn(inc);
    REQUIRE(b.size() == 201);
    const auto back = diff(b.values);
    for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == doctest::Approx(inc.values[i]).epsilon(1e-12));
}

TEST_CASE("mBm at constant H one half is a scaled random walk") {
    const auto p = mbm_riemann_liouville(MbmSpec{hurst::Constant{0.5}, 50, 0.25, 17, 2.0});
    const CounterRng rng(17);
    double s = 0;
    for (std::size_t i = 0; i < 50; ++i) {
        s += rng.normal(i);
        CHECK(p.values[i] == doctest::Approx(2.0 * 0.5 * s).epsilon(1e-12));
    }
}

}  // TEST_SUITE

TEST_SUITE("generators_mc") {

TEST_CASE("cholesky with n = 1 has variance sigma^2") {
    std::vector<double> sq;
    sq.reserve(100000);
    for (std::uint64_t s = 0; s < 100000; ++s) {
        const double v = fgn_cholesky(FgnSpec{0.3, 2.0, 1, derive_seed(901, {s})}).values[0];
        sq.push_back(v * v);
    }
    const double var = std::accumulate(sq.begin(), sq.end(), 0.0) / 1e5;
    CHECK(std::fabs(var / 4.0 - 1.0) < 0.03);
}

TEST_CASE("cholesky at H = 0.5 has no lag-1 correlation") {
    std::vector<double> r;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto x = fgn_cholesky(FgnSpec{0.5, 1.0, 4096, derive_seed(902, {s})}).values;
        r.push_back(sample_acov(x, 1) / sample_acov(x, 0));
    }
    CHECK(std::fabs(mean_se(r).mean) < 0.05);
}

TEST_CASE("cholesky at H = 0.8 matches the closed-form autocovariance") {
    std::vector<std::vector<double>> acov(6);
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto x = fgn_cholesky(FgnSpec{0.8, 1.0, 2048, derive_seed(903, {s})}).values;
        for (std::size_t k = 0; k < 6; ++k) acov[k].push_back(sample_acov(x, k));
    }
    for (std::size_t k = 0; k < 6; ++k) {
        const auto ms = mean_se(acov[k]);
        INFO("lag " << k << " mean " << ms.mean << " se " << ms.se);
        CHECK(std::fabs(ms.mean - fgn_autocovariance(k, 0.8)) < 3 * ms.se);
    }
}

TEST_CASE("circulant and cholesky agree in covariance") {
    for (double h : {0.3, 0.6}) {
        std::vector<std::vector<double>> a(11), b(11);
        for (std::uint64_t s = 0; s < 200; ++s) {
            const auto x = fgn_circulant(FgnSpec{h, 1.0, 1024, derive_seed(904, {s, 0})}).values;
            const auto y = fgn_cholesky(FgnSpec{h, 1.0, 1024, derive_seed(904, {s, 1})}).values;
            for (std::size_t k = 0; k <= 10; ++k) {
                a[k].push_back(sample_acov(x, k));
                b[k].push_back(sample_acov(y, k));
            }
        }
        for (std::size_t k = 0; k <= 10; ++k) {
            const auto ma = mean_se(a[k]), mb = mean_se(b[k]);
            INFO("H " << h << " lag " << k);
            CHECK(std::fabs(ma.mean - mb.mean) < 3 * std::hypot(ma.se, mb.se));
        }
    }
}

TEST_CASE("circulant entries at H = 0.5 are normal") {
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    std::size_t count = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        for (double v : fgn_circulant(FgnSpec{0.5, 1.0, 1000, derive_seed(905, {s})}).values) {
            m1 += v;
            ++count;
        }
    }
    m1 /= static_cast<double>(count);
    for (std::uint64_t s = 0; s < 100; ++s) {
        for (double v : fgn_circulant(FgnSpec{0.5, 1.0, 1000, derive_seed(905, {s})}).values) {
            const double d = v - m1;
            m2 += d * d;
            m3 += d * d * d;
            m4 += d * d * d * d;
        }
    }
    const double c = static_cast<double>(count);
    m2 /= c;
    m3 /= c;
    m4 /= c;
    CHECK(std::fabs(m3 / std::pow(m2, 1.5)) < 0.1);
    CHECK(std::fabs(m4 / (m2 * m2) - 3.0) < 0.2);
}

TEST_CASE("mBm at H = 0.5 has variance t") {
    const std::size_t n = 400;
    const double dt = 1.0 / static_cast<double>(n);
    std::vector<double> sum(n, 0.0);
    for (std::uint64_t s = 0; s < 500; ++s) {
        const auto p = mbm_riemann_liouville(MbmSpec{hurst::Constant{0.5}, n, dt, derive_seed(906, {s})});
        for (std::size_t i = 0; i < n; ++i) sum[i] += p.values[i] * p.values[i];
    }
    for (std::size_t i : {n / 4, n / 2, n}) {
        const double var = sum[i - 1] / 500;
        const double t = static_cast<double>(i) * dt;
        INFO("i " << i << " var " << var << " t " << t);
        CHECK(std::fabs(var / t - 1.0) < 0.05);
    }
}

TEST_CASE("mBm variance scales as t^2H") {
    const std::size_t n = 400;
    for (double c : {0.3, 0.5, 0.7}) {
        std::vector<double> sum(n, 0.0);
        for (std::uint64_t s = 0; s < 500; ++s) {
            const auto p = mbm_riemann_liouville(MbmSpec{hurst::Constant{c}, n, 1.0 / n, derive_seed(907, {s})});
            for (std::size_t i = 0; i < n; ++i) sum[i] += p.values[i] * p.values[i];
        }
        std::vector<double> lx, ly;
        for (std::size_t i = n / 4; i <= n; ++i) {
            lx.push_back(std::log(static_cast<double>(i) / n));
            ly.push_back(std::log(sum[i - 1] / 500));
        }
        const double slope = ols_slope(lx, ly);
        INFO("H " << c << " slope " << slope);
        CHECK(std::fabs(slope - 2 * c) < 0.1);
    }
}

TEST_CASE("mBm with rising H gets rougher early and smoother late") {
    const std::size_t n = 2000;
    // 2H estimated from increment variances at lags 1 and 2 within a quarter
    std::vector<double> v1(2, 0.0), v2(2, 0.0);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto p = mbm_riemann_liouville(MbmSpec{hurst::Linear{0.2, 0.6}, n, 1.0 / n, derive_seed(908, {s})}).values;
        for (int q = 0; q < 2; ++q) {
            const std::size_t lo = q == 0 ? 10 : 3 * n / 4, hi = q == 0 ? n / 4 : n;
            for (std::size_t i = lo + 2; i < hi; ++i) {
                const double d1 = p[i] - p[i - 1], d2 = p[i] - p[i - 2];
                v1[static_cast<std::size_t>(q)] += d1 * d1;
                v2[static_cast<std::size_t>(q)] += d2 * d2;
            }
        }
    }
    const double first = std::log2(v2[0] / v1[0]) / 2, last = std::log2(v2[1] / v1[1]) / 2;
    INFO("first quarter " << first << " last quarter " << last);
    CHECK(first < last);
}

TEST_CASE("RL-mBm increments are indistinguishable from fGn under the covariance dissimilarity") {
    const std::size_t n = 2000;
    for (double h : {0.3, 0.7}) {
        const double sd = rl_increment_sd(h);
        std::vector<double> cross, within;
        for (std::uint64_t s = 0; s < 100; ++s) {
            auto rl = [&](std::uint64_t k) {
                return diff(mbm_riemann_liouville(MbmSpec{hurst::Constant{h}, n + 1, 1.0, derive_seed(909, {s, k})}).values);
            };
            const auto a = rl(0), b = rl(1);
            const auto f = support::fgn(h, n, derive_seed(909, {s, 2}), sd);
            cross.push_back(empirical_dissimilarity(a, f, {}));
            within.push_back(empirical_dissimilarity(a, b, {}));
        }
        const double p = rank_sum_p(cross, within);
        INFO("H " << h << " increment sd " << sd << " p " << p);
        CHECK(p > 0.01);
    }
}

}  // TEST_SUITE
