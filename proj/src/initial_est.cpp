#include "pfar/initial_est.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "pfar/error.hpp"

namespace pfar {

namespace {
constexpr double kPi = std::numbers::pi;
}

Periodogram periodogram(std::span<const double> z) {
    const std::size_t n = z.size();
    if (n < 4) {
        fail_data("short-series", "periodogram needs at least 4 observations");
    }
    std::vector<double> in(z.begin(), z.end());
    std::vector<std::complex<double>> out;
    Eigen::FFT<double> fft;
    fft.fwd(out, in);

    Periodogram pg;
    pg.n = n;
    const std::size_t half = n / 2;
    pg.freqs.resize(half);
    pg.ordinates.resize(half);
    const double scale = 1.0 / (2.0 * kPi * static_cast<double>(n));
    for (std::size_t j = 1; j <= half; ++j) {
        pg.freqs[j - 1] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
        pg.ordinates[j - 1] = std::norm(out[j]) * scale;
    }
    return pg;
}

int gph_bandwidth(std::size_t n, double delta) {
    const int m = static_cast<int>(std::floor(std::pow(static_cast<double>(n), delta)));
    return std::min(std::max(2, m), static_cast<int>(n / 2));
}

GphFit gph_estimate(const Periodogram& pg, int m) {
    if (m < 2 || static_cast<std::size_t>(m) > pg.ordinates.size()) {
        fail_usage("invalid-bandwidth", "GPH bandwidth must satisfy 2 <= m <= n/2");
    }
    std::vector<double> a(m), y(m);
    double abar = 0.0;
    for (int j = 0; j < m; ++j) {
        if (!(pg.ordinates[j] > 0.0)) {
            fail_numerical("degenerate-periodogram", "periodogram ordinate " + std::to_string(j + 1) + " is zero");
        }
        a[j] = std::log(2.0 * std::sin(0.5 * pg.freqs[j]));
        y[j] = std::log(pg.ordinates[j]);
        abar += a[j];
    }
    abar /= m;
    double s = 0.0, sy = 0.0, ybar = 0.0;
    for (int j = 0; j < m; ++j) {
        s += (a[j] - abar) * (a[j] - abar);
        sy += (a[j] - abar) * y[j];
        ybar += y[j];
    }
    ybar /= m;
    GphFit fit;
    fit.m = m;
    fit.d = -sy / (2.0 * s);
    fit.hurst_raw = fit.d + 0.5;
    fit.hurst = std::clamp(fit.hurst_raw, kHurstFloor, kHurstCeil);
    fit.clamped = fit.hurst != fit.hurst_raw;
    if (m > 2) {
        const double slope = sy / s;
        double rss = 0.0;
        for (int j = 0; j < m; ++j) {
            const double r = y[j] - ybar - slope * (a[j] - abar);
            rss += r * r;
        }
        fit.residual_scale = std::sqrt(rss / (m - 2));
    }
    return fit;
}

GlseFit glse_fit(const SeriesSample& series, HurstIndex hurst) {
    const auto period = static_cast<std::size_t>(series.period);
    // A trailing partial cycle is dropped (for T = 2: odd length loses its
    // last value); every remaining transition is a row.
    const std::size_t used = series.size() / period * period;
    if (used < 2 * period) {
        fail_data("short-series", "GLSE needs at least two full cycles");
    }
    const std::size_t rows = used - 1;
    const auto r = static_cast<Eigen::Index>(rows);
    const auto cols = static_cast<Eigen::Index>(period);

    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(r, cols);
    Eigen::VectorXd response(r);
    for (std::size_t t = 1; t <= rows; ++t) {
        design(static_cast<Eigen::Index>(t - 1), series.season(t + 1) - 1) = series.values[t - 1];
        response[static_cast<Eigen::Index>(t - 1)] = series.values[t];
    }
    const ToeplitzCov omega = ToeplitzCov::fgn(hurst, rows);
    const Eigen::MatrixXd w = omega.solve(design);
    const Eigen::MatrixXd a = design.transpose() * w;
    const Eigen::VectorXd b = w.transpose() * response;

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * std::max(hi, 1e-300)) || !(hi > 0.0)) {
        fail_data("insufficient-excitation", "the GLSE normal matrix is singular");
    }
    GlseFit fit;
    fit.rows = rows;
    fit.condition = hi / lo;
    const Eigen::VectorXd phi = a.llt().solve(b);
    fit.phi.assign(phi.data(), phi.data() + phi.size());
    return fit;
}

std::vector<double> glse_phi(const SeriesSample& series, HurstIndex hurst) { return glse_fit(series, hurst).phi; }

std::pair<double, double> alt_phi_estimator(const SeriesSample& series, HurstIndex hurst, AltCovariance cov) {
    if (series.period != 2) {
        fail_usage("unsupported-period", "the ratio estimators are defined for period 2");
    }
    if (series.size() < 8) {
        fail_data("short-series", "the ratio estimators need at least 8 observations");
    }
    const std::size_t start = series.season(1) == 1 ? 0 : 1;
    const std::size_t k = (series.size() - start - 1) / 2;  // pairs with a following season-1 value
    Eigen::VectorXd x1(k), x2(k), x1s(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        x1[e] = series.values[start + 2 * i];
        x2[e] = series.values[start + 2 * i + 1];
        x1s[e] = series.values[start + 2 * i + 2];
    }
    const ToeplitzCov sigma = ToeplitzCov::fgn(hurst, k, cov == AltCovariance::seasonal ? 2 : 1);
    const double d2 = sigma.inverse_form(x1, x1);
    const double d1 = sigma.inverse_form(x2, x2);
    if (!(d1 > 0.0) || !(d2 > 0.0)) {
        fail_data("insufficient-excitation", "a seasonal vector of the ratio estimator is zero");
    }
    return {sigma.inverse_form(x2, x1s) / d1, sigma.inverse_form(x1, x2) / d2};
}

std::string to_string(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::initial: return "initial";
        case EstimateMethod::onestep: return "onestep";
        case EstimateMethod::alt_initial: return "alt-initial";
        case EstimateMethod::par_ols: return "par-ols";
        case EstimateMethod::far: return "far";
    }
    return "unknown";
}

ThetaEstimate initial_estimate(const SeriesSample& series, const InitialOptions& opts) {
    if (!(opts.delta > 0.5 && opts.delta < 2.0 / 3.0)) {
        fail_usage("invalid-delta", "bandwidth exponent must lie in (1/2, 2/3)");
    }
    const auto period = static_cast<std::size_t>(series.period);
    if (series.size() < 4 * period) {
        fail_data("short-series", "estimation needs at least 4T observations");
    }
    const SeriesSample z = aggregate_z(series);
    const Periodogram pg = periodogram(z.values);
    const GphFit gph = gph_estimate(pg, gph_bandwidth(z.size(), opts.delta));

    const double h_phi = opts.phi_hurst ? *opts.phi_hurst : gph.hurst;
    const GlseFit glse = glse_fit(series, HurstIndex(h_phi));

    ThetaEstimate est;
    est.phi_hat = glse.phi;
    est.hurst_hat = gph.hurst;
    est.method = EstimateMethod::initial;
    est.m_used = gph.m;
    est.diagnostics.hurst_raw = gph.hurst_raw;
    est.diagnostics.hurst_clamped = gph.clamped;
    est.diagnostics.gph_residual_scale = gph.residual_scale;
    est.diagnostics.glse_condition = glse.condition;
    est.diagnostics.n_z = z.size();
    est.diagnostics.rows = glse.rows;
    return est;
}

}  // namespace pfar
