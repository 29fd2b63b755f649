#include "pfar/fit.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "pfar/error.hpp"
#include "pfar/onestep.hpp"

namespace pfar {

std::string to_string(FitModel m) {
    switch (m) {
        case FitModel::pfar: return "pfar";
        case FitModel::par: return "par";
        case FitModel::far: return "far";
    }
    return "?";
}

FitModel parse_fit_model(const std::string& name) {
    if (name == "pfar") return FitModel::pfar;
    if (name == "par") return FitModel::par;
    if (name == "far") return FitModel::far;
    fail_usage("invalid-model", "unknown model '" + name + "' (expected pfar, par or far)");
}

PredictionError prediction_error(const SeriesSample& series, const std::vector<double>& phi) {
    if (phi.size() != static_cast<std::size_t>(series.period)) {
        fail_usage("dimension-mismatch", "coefficient count differs from the period");
    }
    PredictionError e;
    double s2 = 0.0, s1 = 0.0;
    for (std::size_t t = 2; t <= series.size(); ++t) {
        const double r = series.values[t - 1] - phi[series.season(t) - 1] * series.values[t - 2];
        s2 += r * r;
        s1 += std::abs(r);
        ++e.n;
    }
    if (e.n == 0) {
        fail_data("short-series", "need at least two observations to score predictions");
    }
    e.rmse = std::sqrt(s2 / static_cast<double>(e.n));
    e.mae = s1 / static_cast<double>(e.n);
    return e;
}

std::vector<double> par_ols(const SeriesSample& series) {
    // At H = 1/2 the fGn covariance is exactly the identity.
    return glse_phi(series, HurstIndex(0.5));
}

namespace {

void require_excitation(const SeriesSample& series) {
    const auto [lo, hi] = std::minmax_element(series.values.begin(), series.values.end());
    if (series.values.empty() || *lo == *hi) {
        fail_data("insufficient-excitation", "series is constant");
    }
}

std::vector<std::pair<std::string, double>> named(const std::vector<double>& phi, std::optional<double> hurst) {
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t u = 0; u < phi.size(); ++u) {
        out.emplace_back("phi(" + std::to_string(u + 1) + ")", phi[u]);
    }
    if (hurst) out.emplace_back("H", *hurst);
    return out;
}

}  // namespace

FitResult fit_model(const SeriesSample& series, FitModel model, const FitOptions& opts) {
    if (series.size() < 4 * static_cast<std::size_t>(series.period)) {
        fail_data("short-series", "fitting needs at least 4T observations");
    }
    require_excitation(series);
    FitResult r;
    r.model = model;
    std::vector<double> phi;
    switch (model) {
        case FitModel::par: {
            phi = par_ols(series);
            r.parameters = named(phi, std::nullopt);
            r.method = to_string(EstimateMethod::par_ols);
            break;
        }
        case FitModel::far: {
            SeriesSample flat = series;
            flat.period = 1;
            flat.origin_index = 1;
            ThetaEstimate est = initial_estimate(flat, InitialOptions{opts.delta, std::nullopt});
            est.method = EstimateMethod::far;
            phi = est.phi_hat;
            r.parameters = named(phi, est.hurst_hat);
            r.method = to_string(est.method);
            const PredictionError e = prediction_error(flat, phi);
            r.rmse = e.rmse;
            r.mae = e.mae;
            r.n_used = e.n;
            return r;
        }
        case FitModel::pfar: {
            ThetaEstimate est = initial_estimate(series, InitialOptions{opts.delta, std::nullopt});
            if (opts.onestep && series.period == 2) {
                est = one_step(est, aggregate_z(series).values);
            }
            phi = est.phi_hat;
            r.parameters = named(phi, est.hurst_hat);
            r.method = to_string(est.method);
            break;
        }
    }
    const PredictionError e = prediction_error(series, phi);
    r.rmse = e.rmse;
    r.mae = e.mae;
    r.n_used = e.n;
    return r;
}

std::vector<double> block_average(const std::vector<double>& values, std::size_t width) {
    if (width == 0) {
        fail_usage("invalid-aggregate", "aggregation width must be positive");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i + width <= values.size(); i += width) {
        double s = 0.0;
        for (std::size_t j = 0; j < width; ++j) s += values[i + j];
        out.push_back(s / static_cast<double>(width));
    }
    return out;
}

}  // namespace pfar
