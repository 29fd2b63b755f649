#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfar/fgn.hpp"
#include "pfar/model.hpp"

namespace pfar {

struct Periodogram {
    std::vector<double> freqs;      // 2 pi j / n, j = 1..floor(n/2)
    std::vector<double> ordinates;  // |sum_t z_t e^{i t lam_j}|^2 / (2 pi n)
    std::size_t n = 0;
};

Periodogram periodogram(std::span<const double> z);

inline constexpr double kHurstFloor = 0.01;
inline constexpr double kHurstCeil = 0.99;
inline constexpr double kDefaultDelta = 0.6;

struct GphFit {
    double d = 0.0;
    double hurst_raw = 0.0;  // d + 1/2
    double hurst = 0.0;      // clamped into [kHurstFloor, kHurstCeil]
    bool clamped = false;
    int m = 0;
    double residual_scale = 0.0;
};

// Log-periodogram regression on a_j = log(2 sin(lam_j / 2)), j = 1..m.
GphFit gph_estimate(const Periodogram& pg, int m);

// m = max(2, floor(n^delta)), capped at floor(n/2).
int gph_bandwidth(std::size_t n, double delta);

// Generalized least squares for phi(1..T) using every interleaved row:
// row t carries X_t in the column of season(t+1), response X_{t+1}, error
// covariance Omega = [rho_H(i-j)]. The series is first cut to whole cycles.
struct GlseFit {
    std::vector<double> phi;
    std::size_t rows = 0;
    double condition = 0.0;  // of D' Omega^{-1} D
};
GlseFit glse_fit(const SeriesSample& series, HurstIndex hurst);
std::vector<double> glse_phi(const SeriesSample& series, HurstIndex hurst);

// Covariance used by the ratio estimators for T = 2: seasonal (lag stride
// 2, the fGn covariance between same-season innovations) or unit-lag
// (stride 1).
enum class AltCovariance { seasonal, unit_lag };

// Ratio estimators built from the seasonal vectors x1 = (X_1, X_3, ...) and
// x2 = (X_2, X_4, ...):
//   phi(2) = x1' S^{-1} x2 / x1' S^{-1} x1,  phi(1) = x2' S^{-1} x1+ / x2' S^{-1} x2,
// where x1+ = (X_3, X_5, ...).
std::pair<double, double> alt_phi_estimator(const SeriesSample& series, HurstIndex hurst,
                                            AltCovariance cov = AltCovariance::seasonal);

enum class EstimateMethod { initial, onestep, alt_initial, par_ols, far };
std::string to_string(EstimateMethod m);

struct EstimateDiagnostics {
    double hurst_raw = 0.0;
    bool hurst_clamped = false;
    bool projected = false;  // one-step result pulled back into the box
    double gph_residual_scale = 0.0;
    double glse_condition = 0.0;
    double info_condition = 0.0;
    std::size_t n_z = 0;
    std::size_t rows = 0;
};

struct ThetaEstimate {
    std::vector<double> phi_hat;
    double hurst_hat = 0.5;
    EstimateMethod method = EstimateMethod::initial;
    int m_used = 0;
    EstimateDiagnostics diagnostics;
};

struct InitialOptions {
    double delta = kDefaultDelta;
    // When set, the coefficient stage uses this Hurst index instead of the
    // GPH estimate (the GPH estimate is still reported).
    std::optional<double> phi_hurst;
};

// GPH on the aggregated series for H, then GLSE with that H for phi.
ThetaEstimate initial_estimate(const SeriesSample& series, const InitialOptions& opts = {});

}  // namespace pfar
