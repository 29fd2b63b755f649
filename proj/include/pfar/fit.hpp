#pragma once

// Real-series fitting: PFAR pipeline, PAR (white-noise periodic AR by
// per-season OLS) and FAR (T = 1) baselines, scored by one-step-ahead
// in-sample predictions X_hat_t = phi(season(t)) X_{t-1}.

#include <string>
#include <utility>
#include <vector>

#include "pfar/initial_est.hpp"
#include "pfar/model.hpp"

namespace pfar {

enum class FitModel { pfar, par, far };
std::string to_string(FitModel m);
FitModel parse_fit_model(const std::string& name);

struct FitResult {
    FitModel model = FitModel::pfar;
    std::vector<std::pair<std::string, double>> parameters;
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t n_used = 0;
    std::string method;  // estimator tag of the reported parameters
};

struct PredictionError {
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t n = 0;
};
PredictionError prediction_error(const SeriesSample& series, const std::vector<double>& phi);

// Per-season ordinary least squares (GLSE with identity covariance).
std::vector<double> par_ols(const SeriesSample& series);

struct FitOptions {
    double delta = kDefaultDelta;
    bool onestep = true;  // used when T = 2
};

FitResult fit_model(const SeriesSample& series, FitModel model, const FitOptions& opts = {});

// Mean of consecutive groups of `width` values; a trailing partial group is
// dropped.
std::vector<double> block_average(const std::vector<double>& values, std::size_t width);

}  // namespace pfar
