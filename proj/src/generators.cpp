#include "pathclust/generators.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <list>
#include <memory>
#include <mutex>
#include <sstream>

#include "pathclust/error.hpp"
#include "pathclust/rng.hpp"

namespace pathclust {

void validate(const FgnSpec& spec) {
    if (!(spec.hurst > 0.0 && spec.hurst < 1.0)) {
        throw Error(Errc::InvalidSpec, "hurst must be in (0, 1), got " + std::to_string(spec.hurst));
    }
    if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
        throw Error(Errc::InvalidSpec, "sigma must be > 0, got " + std::to_string(spec.sigma));
    }
    if (spec.n < 1) throw Error(Errc::InvalidSpec, "n must be >= 1");
}

double fgn_autocovariance(std::size_t k, double hurst, double sigma) {
    const double h2 = 2.0 * hurst;
    const double kk = static_cast<double>(k);
    const double up = std::pow(kk + 1.0, h2);
    const double mid = k == 0 ? 0.0 : std::pow(kk, h2);
    const double down = std::pow(std::fabs(kk - 1.0), h2);
    return 0.5 * sigma * sigma * (up - 2.0 * mid + down);
}

namespace {

struct FactorKey {
    double hurst, sigma;
    std::size_t n;
    bool operator==(const FactorKey&) const = default;
};

// A handful of recent Cholesky factors; Monte Carlo loops draw many seeds
// for the same (H, sigma, n).
class FactorCache {
public:
    std::shared_ptr<const Eigen::MatrixXd> get(const FactorKey& key) {
        {
            std::lock_guard lock(mu_);
            for (auto& [k, f] : entries_)
                if (k == key) return f;
        }
        Eigen::MatrixXd cov(key.n, key.n);
        for (std::size_t i = 0; i < key.n; ++i)
            for (std::size_t j = 0; j < key.n; ++j)
                cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    fgn_autocovariance(i > j ? i - j : j - i, key.hurst, key.sigma);
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success) {
            throw Error(Errc::NotPositiveDefinite,
                        "fGn covariance with H=" + std::to_string(key.hurst) +
                            " n=" + std::to_string(key.n));
        }
        auto factor = std::make_shared<const Eigen::MatrixXd>(llt.matrixL());
        std::lock_guard lock(mu_);
        entries_.emplace_front(key, factor);
        if (entries_.size() > 4) entries_.pop_back();
        return factor;
    }

private:
    std::mutex mu_;
    std::list<std::pair<FactorKey, std::shared_ptr<const Eigen::MatrixXd>>> entries_;
};

FactorCache& factor_cache() {
    static FactorCache cache;
    return cache;
}

// FFTW's planner is not reentrant; execution of a finished plan is.
std::mutex& fftw_planner_mutex() {
    static std::mutex mu;
    return mu;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

// In-place forward transform of `buf` (length m).
void forward_fft(FftwBuffer& buf, std::size_t m) {
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(m), buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace

SamplePath fgn_cholesky(const FgnSpec& spec, std::size_t max_n) {
    validate(spec);
    if (spec.n > max_n) {
        throw Error(Errc::InvalidSpec, "n=" + std::to_string(spec.n) +
                                           " exceeds the Cholesky size limit " + std::to_string(max_n));
    }
    const auto factor = factor_cache().get({spec.hurst, spec.sigma, spec.n});
    const CounterRng rng(spec.seed);
    std::vector<double> xi(spec.n);
    for (std::size_t j = 0; j < spec.n; ++j) xi[j] = rng.normal(j);
    SamplePath out;
    out.values.assign(spec.n, 0.0);
    const auto& L = *factor;
    for (std::size_t i = 0; i < spec.n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j)
            s += L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * xi[j];
        out.values[i] = s;
    }
    return out;
}

SamplePath fgn_circulant(const FgnSpec& spec) {
    validate(spec);
    const CounterRng rng(spec.seed);
    SamplePath out;
    if (spec.n == 1) {
        out.values = {spec.sigma * rng.normal(0)};
        return out;
    }
    const std::size_t n = spec.n;
    const std::size_t m = 2 * (n - 1);

    FftwBuffer buf(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t lag = k < n ? k : m - k;
        buf.data[k][0] = fgn_autocovariance(lag, spec.hurst, spec.sigma);
        buf.data[k][1] = 0.0;
    }
    forward_fft(buf, m);

    std::vector<double> lambda(m);
    double scale = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        lambda[k] = buf.data[k][0];
        scale = std::max(scale, std::fabs(lambda[k]));
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (lambda[k] < -1e-10 * scale) {
            throw Error(Errc::EmbeddingNotNonnegative,
                        "eigenvalue " + std::to_string(lambda[k]) + " at frequency " +
                            std::to_string(k) + "; use the Cholesky generator");
        }
        lambda[k] = std::max(lambda[k], 0.0);
    }

    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double amp = std::sqrt(lambda[k] * inv_m);
        buf.data[k][0] = amp * rng.normal(2 * k);
        buf.data[k][1] = amp * rng.normal(2 * k + 1);
    }
    forward_fft(buf, m);
    out.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.values[j] = buf.data[j][0];
    return out;
}

SamplePath fbm_from_fgn(const SamplePath& increments) {
    validate_path(increments);
    SamplePath out;
    out.dt = increments.dt;
    out.id = increments.id;
    out.values.resize(increments.size() + 1);
    out.values[0] = 0.0;
    for (std::size_t i = 0; i < increments.size(); ++i) {
        out.values[i + 1] = out.values[i] + increments.values[i];
    }
    return out;
}

double evaluate(const HurstFunction& h, double u) {
    struct Visitor {
        double u;
        double operator()(const hurst::Constant& c) const { return c.value; }
        double operator()(const hurst::Linear& l) const { return l.a + l.b * u; }
        double operator()(const hurst::Logistic& g) const {
            return g.low + (g.high - g.low) / (1.0 + std::exp(-g.steepness * (u - g.midpoint)));
        }
        double operator()(const hurst::Piecewise& p) const {
            const auto& k = p.knots;
            if (k.empty()) return std::nan("");
            if (u <= k.front().first) return k.front().second;
            if (u >= k.back().first) return k.back().second;
            auto hi = std::upper_bound(k.begin(), k.end(), u,
                                       [](double x, const auto& knot) { return x < knot.first; });
            auto lo = hi - 1;
            const double frac = (u - lo->first) / (hi->first - lo->first);
            return lo->second + frac * (hi->second - lo->second);
        }
    };
    return std::visit(Visitor{u}, h);
}

std::string describe(const HurstFunction& h) {
    std::ostringstream os;
    std::visit(
        [&os](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, hurst::Constant>) {
                os << "constant(" << f.value << ")";
            } else if constexpr (std::is_same_v<T, hurst::Linear>) {
                os << "linear(" << f.a << " + " << f.b << " u)";
            } else if constexpr (std::is_same_v<T, hurst::Logistic>) {
                os << "logistic(" << f.low << " -> " << f.high << ", mid " << f.midpoint
                   << ", steep " << f.steepness << ")";
            } else {
                os << "piecewise(" << f.knots.size() << " knots)";
            }
        },
        h);
    return os.str();
}

void validate(const MbmSpec& spec) {
    if (spec.n < 2) throw Error(Errc::InvalidSpec, "n must be >= 2");
    if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) {
        throw Error(Errc::InvalidSpec, "dt must be > 0");
    }
    if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
        throw Error(Errc::InvalidSpec, "sigma must be > 0");
    }
    if (const auto* p = std::get_if<hurst::Piecewise>(&spec.hurst_fn)) {
        if (p->knots.empty()) throw Error(Errc::InvalidSpec, "piecewise hurst_fn needs knots");
        for (std::size_t i = 1; i < p->knots.size(); ++i) {
            if (!(p->knots[i].first > p->knots[i - 1].first)) {
                throw Error(Errc::InvalidSpec, "piecewise knots must be strictly increasing");
            }
        }
    }
    constexpr double eps = 0.01;
    for (std::size_t i = 1; i <= spec.n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(spec.n);
        const double h = evaluate(spec.hurst_fn, u);
        if (!(h > eps && h < 1.0 - eps)) {
            throw Error(Errc::InvalidSpec, "hurst_fn(" + std::to_string(u) + ") = " +
                                               std::to_string(h) + " outside (0.01, 0.99)");
        }
    }
}

SamplePath mbm_riemann_liouville(const MbmSpec& spec) {
    validate(spec);
    const std::size_t n = spec.n;
    const CounterRng rng(spec.seed);
    std::vector<double> xi(n);
    for (std::size_t j = 0; j < n; ++j) xi[j] = rng.normal(j);

    std::vector<double> log_lag(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) log_lag[k] = std::log(static_cast<double>(k));

    // kernel[k] = k^(H - 1/2), rebuilt only when H changes between grid points.
    std::vector<double> kernel(n + 1, 0.0);
    std::size_t kernel_len = 0;
    double kernel_h = std::nan("");

    SamplePath out;
    out.dt = spec.dt;
    out.values.resize(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double h = evaluate(spec.hurst_fn, static_cast<double>(i) / static_cast<double>(n));
        if (h != kernel_h) {
            kernel_h = h;
            kernel_len = 0;
        }
        for (; kernel_len < i; ++kernel_len) {
            const std::size_t k = kernel_len + 1;
            kernel[k] = std::exp((h - 0.5) * log_lag[k]);
        }
        double s = 0.0;
        for (std::size_t k = 1; k <= i; ++k) s += kernel[k] * xi[i - k];
        const double coef = spec.sigma * std::pow(spec.dt, h) / std::tgamma(h + 0.5);
        out.values[i - 1] = coef * s;
    }
    return out;
}

}  // namespace pathclust
