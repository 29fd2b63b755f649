#include "pfar/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pfar/error.hpp"

namespace pfar {

namespace {

constexpr double kPi = std::numbers::pi;

void require_period_two(const PfarParams& params, const char* what) {
    if (params.period() != 2) {
        fail_usage("unsupported-period", std::string(what) + " is only defined for period 2");
    }
}

int wrap_season(long long s, int period) {
    const long long r = ((s - 1) % period + period) % period;
    return static_cast<int>(r) + 1;
}

}  // namespace

PfarParams::PfarParams(std::vector<double> phi, HurstIndex hurst) : phi_(std::move(phi)), hurst_(hurst) {
    if (phi_.empty()) {
        fail_usage("invalid-period", "period must be at least 1");
    }
    for (const double p : phi_) {
        if (!(std::abs(p) < 1.0)) {
            fail_usage("invalid-phi", "seasonal coefficients must lie in (-1, 1)");
        }
    }
}

double PfarParams::product() const noexcept {
    double c = 1.0;
    for (const double p : phi_) {
        c *= p;
    }
    return c;
}

int SeriesSample::season(std::size_t t) const noexcept {
    return wrap_season(static_cast<long long>(origin_index) + static_cast<long long>(t) - 1, period);
}

std::size_t default_burn_in(const PfarParams& params) {
    const int period = params.period();
    const double c = std::abs(params.product());
    std::size_t burn = 1000;
    if (c > 0.0) {
        const double needed = period * std::log(1e-12) / std::log(c);
        burn = std::max(burn, static_cast<std::size_t>(std::floor(needed)) + 1);
    }
    const auto t = static_cast<std::size_t>(period);
    return (burn + t - 1) / t * t;
}

SeriesSample simulate_pfar(const PfarParams& params, std::size_t n, std::uint64_t seed,
                           std::optional<std::size_t> burn) {
    const auto period = static_cast<std::size_t>(params.period());
    std::size_t b = burn ? *burn : default_burn_in(params);
    b = (b + period - 1) / period * period;

    SeriesSample out;
    out.period = params.period();
    out.origin_index = 1;
    const std::size_t total = b + n;
    if (total == 0) {
        return out;
    }
    const std::vector<double> eps = sample_fgn(params.hurst(), total, seed);
    out.values.resize(n);
    double x = 0.0;
    for (std::size_t t = 1; t <= total; ++t) {
        x = params.phi()[(t - 1) % period] * x + eps[t - 1];
        if (t > b) {
            out.values[t - b - 1] = x;
        }
    }
    return out;
}

std::vector<double> ma_weights(const PfarParams& params, int season, std::size_t count) {
    const int period = params.period();
    if (season < 1 || season > period) {
        fail_usage("invalid-season", "season must lie in 1..T");
    }
    std::vector<double> h(count, 0.0);
    if (count == 0) {
        return h;
    }
    h[0] = 1.0;
    for (std::size_t k = 1; k < count; ++k) {
        h[k] = h[k - 1] * params.phi_at(wrap_season(season - static_cast<long long>(k) + 1, period));
    }
    return h;
}

double subseq_spectral_density(const PfarParams& params, int season, double lam) {
    const int period = params.period();
    if (season < 1 || season > period) {
        fail_usage("invalid-season", "season must lie in 1..T");
    }
    const double f = fgn_spectral_density(params.hurst(), lam);
    const std::complex<double> z = std::polar(1.0, -lam);
    std::complex<double> num = 0.0;
    std::complex<double> zj = 1.0;
    double w = 1.0;
    for (int j = 0; j < period; ++j) {
        num += w * zj;
        w *= params.phi_at(wrap_season(season - j, period));
        zj *= z;
    }
    // zj == z^T here
    const std::complex<double> den = 1.0 - params.product() * zj;
    return std::norm(num / den) * f;
}

ZTransfer z_transfer(const PfarParams& params, double lam) {
    require_period_two(params, "the aggregated-series transfer function");
    const double p1 = params.phi()[0];
    const double p2 = params.phi()[1];
    const std::complex<double> z = std::polar(1.0, -lam);
    const std::complex<double> z2 = z * z;
    const std::complex<double> num = z * (1.0 + p1 * z);
    const std::complex<double> den = 1.0 - p1 * p2 * z2;
    const std::complex<double> den2 = den * den;

    ZTransfer t;
    t.value = 1.0 + (1.0 + p2) * num / den;
    t.d_phi[0] = (1.0 + p2) * (z2 / den + num * p2 * z2 / den2);
    t.d_phi[1] = num / den + (1.0 + p2) * num * p1 * z2 / den2;
    return t;
}

double z_spectral_density(const PfarParams& params, double lam) {
    const ZTransfer t = z_transfer(params, lam);
    return std::norm(t.value) * fgn_spectral_density(params.hurst(), lam);
}

ZDensityGradient z_spectral_density_grad(const PfarParams& params, double lam) {
    const ZTransfer t = z_transfer(params, lam);
    const SpectralValue f = fgn_spectral_density_dh(params.hurst(), lam);
    const double g2 = std::norm(t.value);
    ZDensityGradient out;
    out.value = g2 * f.value;
    out.grad[0] = g2 * f.d_hurst;
    for (int i = 0; i < 2; ++i) {
        out.grad[i + 1] = 2.0 * std::real(std::conj(t.value) * t.d_phi[i]) * f.value;
    }
    return out;
}

ZDensityGradient z_series_density_grad(const PfarParams& params, double omega) {
    const ZDensityGradient a = z_spectral_density_grad(params, 0.5 * omega);
    const ZDensityGradient b = z_spectral_density_grad(params, kPi - 0.5 * omega);
    ZDensityGradient out;
    out.value = 0.5 * (a.value + b.value);
    for (int i = 0; i < 3; ++i) {
        out.grad[i] = 0.5 * (a.grad[i] + b.grad[i]);
    }
    return out;
}

namespace {

// Integral over (0, pi] of cos(2k lam) times p (and its gradient), k = 0..max_lag,
// on one fixed mesh. The piece (0, cutoff] uses p ~ c0 lam^{1-2H}.
ZAutocov integrate_on_mesh(const PfarParams& params, const Mesh& mesh, std::size_t max_lag, bool with_gradient) {
    const std::size_t lags = max_lag + 1;
    const int comps = with_gradient ? 4 : 1;
    std::vector<std::vector<double>> acc(comps, std::vector<double>(lags, 0.0));

    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const double lam = mesh.nodes[i];
        std::array<double, 4> vals{};
        if (with_gradient) {
            const ZDensityGradient g = z_spectral_density_grad(params, lam);
            vals = {g.value, g.grad[0], g.grad[1], g.grad[2]};
        } else {
            vals[0] = z_spectral_density(params, lam);
        }
        for (int c = 0; c < comps; ++c) {
            vals[c] *= mesh.weights[i];
        }
        // cos(2k lam) by the Chebyshev recurrence.
        const double c1 = std::cos(2.0 * lam);
        double prev = 1.0;
        double cur = c1;
        for (int c = 0; c < comps; ++c) {
            acc[c][0] += vals[c];
        }
        for (std::size_t k = 1; k < lags; ++k) {
            for (int c = 0; c < comps; ++c) {
                acc[c][k] += vals[c] * cur;
            }
            const double next = 2.0 * c1 * cur - prev;
            prev = cur;
            cur = next;
        }
    }

    // Inner piece: p = c0 lam^{beta}, beta = 1 - 2H, and cos(2k lam) = 1 there.
    const double h = params.hurst().value();
    const double eps = mesh.inner_cutoff;
    const double s = 2.0 - 2.0 * h;
    const double es = std::pow(eps, s);
    const ZTransfer g0 = z_transfer(params, 0.0);
    const double half_c = 0.5 * fgn_spectral_constant(params.hurst());
    const double g0sq = std::norm(g0.value);
    const double c0 = half_c * g0sq;
    std::array<double, 4> inner{};
    inner[0] = c0 * es / s;
    if (with_gradient) {
        const double dc0 = c0 * fgn_spectral_constant_dlog(params.hurst());
        inner[1] = dc0 * es / s - 2.0 * c0 * es * (std::log(eps) / s - 1.0 / (s * s));
        for (int i = 0; i < 2; ++i) {
            inner[i + 2] = half_c * 2.0 * std::real(std::conj(g0.value) * g0.d_phi[i]) * es / s;
        }
    }

    ZAutocov out;
    out.panels = mesh.panels;
    out.gamma.resize(lags);
    for (std::size_t k = 0; k < lags; ++k) {
        out.gamma[k] = 2.0 * (acc[0][k] + inner[0]);
    }
    if (with_gradient) {
        for (int c = 0; c < 3; ++c) {
            out.dgamma[c].resize(lags);
            for (std::size_t k = 0; k < lags; ++k) {
                out.dgamma[c][k] = 2.0 * (acc[c + 1][k] + inner[c + 1]);
            }
        }
    }
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (const double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace

ZAutocov z_autocov_sequence(const PfarParams& params, std::size_t max_lag, const QuadratureSpec& quad,
                            bool with_gradient) {
    require_period_two(params, "the aggregated-series covariance");
    const double oscillation = 2.0 * static_cast<double>(max_lag);
    ZAutocov prev = integrate_on_mesh(params, graded_mesh(quad, kPi, oscillation, 1), max_lag, with_gradient);
    int mult = 1;
    for (int d = 0; d < quad.max_doublings; ++d) {
        mult *= 2;
        ZAutocov next = integrate_on_mesh(params, graded_mesh(quad, kPi, oscillation, mult), max_lag, with_gradient);
        // Tolerances are relative to the largest entry of each sequence.
        bool ok = max_abs_diff(next.gamma, prev.gamma) <= quad.rel_tol * max_abs(next.gamma);
        if (with_gradient) {
            for (int c = 0; c < 3; ++c) {
                ok = ok && max_abs_diff(next.dgamma[c], prev.dgamma[c]) <= quad.rel_tol * max_abs(next.dgamma[c]);
            }
        }
        if (ok) {
            return next;
        }
        prev = std::move(next);
    }
    fail_numerical("quadrature-nonconvergence", "covariance quadrature did not reach the requested tolerance");
}

double z_autocov(const PfarParams& params, long long lag, const QuadratureSpec& quad) {
    const auto k = static_cast<std::size_t>(lag < 0 ? -lag : lag);
    return z_autocov_sequence(params, k, quad, false).gamma[k];
}

SeriesSample aggregate_z(const SeriesSample& series) {
    const auto period = static_cast<std::size_t>(series.period);
    if (period == 0) {
        fail_usage("invalid-period", "period must be at least 1");
    }
    const std::size_t start = (period - static_cast<std::size_t>(wrap_season(series.origin_index, series.period) - 1)) % period;
    SeriesSample z;
    z.period = 1;
    z.origin_index = 1;
    if (series.size() < start + period) {
        fail_data("short-series", "series is shorter than one full cycle");
    }
    const std::size_t blocks = (series.size() - start) / period;
    z.values.resize(blocks, 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t u = 0; u < period; ++u) {
            z.values[b] += series.values[start + b * period + u];
        }
    }
    return z;
}

}  // namespace pfar
