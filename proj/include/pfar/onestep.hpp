#pragma once

// Gaussian likelihood of the aggregated series Z (T = 2), its score, the
// spectral Fisher information, and the one-step Newton update.
// Parameter order throughout: (H, phi(1), phi(2)).

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pfar/initial_est.hpp"
#include "pfar/model.hpp"
#include "pfar/quadrature.hpp"

namespace pfar {

struct FisherInfo {
    int dim = 0;
    Eigen::MatrixXd matrix;
};

// aggregated: the density of Z in its own time scale,
//   p_Z(w) = (p(w/2) + p(pi - w/2)) / 2,
// which is what Cov(Z_0, Z_k) = int e^{i2k lam} p(lam) d lam implies.
// literal: p(lam) itself used as if it were the density of Z.
enum class FisherForm { aggregated, literal };

// (1/4pi) int_{-pi}^{pi} grad log p grad log p' d lam, graded quadrature with
// doubling refinement.
FisherInfo fisher_info(const PfarParams& theta, const QuadratureSpec& quad = {},
                       FisherForm form = FisherForm::aggregated);

class ZLikelihoodContext {
public:
    // Any symmetric positive definite covariance with symmetric derivatives.
    ZLikelihoodContext(Eigen::MatrixXd gamma, std::vector<Eigen::MatrixXd> dgamma);

    std::size_t n() const noexcept { return static_cast<std::size_t>(gamma_.rows()); }
    std::size_t dim() const noexcept { return dgamma_.size(); }
    const Eigen::MatrixXd& gamma() const noexcept { return gamma_; }
    const Eigen::MatrixXd& dgamma(std::size_t i) const { return dgamma_.at(i); }
    const Eigen::MatrixXd& gamma_inverse() const noexcept { return inverse_; }
    double log_det() const noexcept { return log_det_; }
    // tr(Gamma^{-1} dGamma_i)
    double trace_term(std::size_t i) const { return trace_.at(i); }

private:
    Eigen::MatrixXd gamma_;
    std::vector<Eigen::MatrixXd> dgamma_;
    Eigen::MatrixXd inverse_;
    double log_det_ = 0.0;
    std::vector<double> trace_;
};

// Gamma[i][j] = Cov(Z_i, Z_j) and its (H, phi1, phi2) derivatives.
ZLikelihoodContext build_context(const PfarParams& theta, std::size_t n, const QuadratureSpec& quad = {});

// -1/2 log det Gamma - 1/2 z' Gamma^{-1} z  (the -n/2 log 2pi constant is omitted)
double log_likelihood(const ZLikelihoodContext& ctx, std::span<const double> z);

// -1/2 tr(Gamma^{-1} dGamma_i) + 1/2 z' Gamma^{-1} dGamma_i Gamma^{-1} z
Eigen::VectorXd score(const ZLikelihoodContext& ctx, std::span<const double> z);

// theta + info^{-1} score / n
Eigen::VectorXd fisher_scoring_update(const Eigen::VectorXd& theta, const Eigen::VectorXd& score,
                                      const Eigen::MatrixXd& info, double n);

struct OneStepOptions {
    QuadratureSpec quad;
    double hurst_floor = kHurstFloor;
    double hurst_ceil = kHurstCeil;
    double margin = 1e-4;
    FisherForm form = FisherForm::aggregated;
};

// One Newton step from an initial estimate using the aggregated series z.
ThetaEstimate one_step(const ThetaEstimate& theta_hat, std::span<const double> z, const OneStepOptions& opts = {});

}  // namespace pfar
