#include "pfar/onestep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pfar/error.hpp"

namespace pfar {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix3d info_on_mesh(const PfarParams& theta, const Mesh& mesh, FisherForm form) {
    Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const ZDensityGradient g = form == FisherForm::aggregated ? z_series_density_grad(theta, mesh.nodes[i])
                                                                   : z_spectral_density_grad(theta, mesh.nodes[i]);
        if (!(g.value > 0.0)) {
            fail_numerical("nonpositive-density", "spectral density vanishes on the quadrature mesh");
        }
        const Eigen::Vector3d d(g.grad[0] / g.value, g.grad[1] / g.value, g.grad[2] / g.value);
        acc.noalias() += mesh.weights[i] * d * d.transpose();
    }
    // Even integrand: (1/4pi) * 2 * int_0^pi.
    return acc / (2.0 * kPi);
}

}  // namespace

FisherInfo fisher_info(const PfarParams& theta, const QuadratureSpec& quad, FisherForm form) {
    if (theta.period() != 2) {
        fail_usage("unsupported-period", "the Fisher information is implemented for period 2");
    }
    // The piece below the inner cutoff is O(eps log^2 eps) and is dropped.
    Eigen::Matrix3d prev = info_on_mesh(theta, graded_mesh(quad, kPi, 0.0, 1), form);
    int mult = 1;
    for (int d = 0; d < quad.max_doublings; ++d) {
        mult *= 2;
        const Eigen::Matrix3d next = info_on_mesh(theta, graded_mesh(quad, kPi, 0.0, mult), form);
        if ((next - prev).cwiseAbs().maxCoeff() <= quad.rel_tol * next.cwiseAbs().maxCoeff()) {
            FisherInfo out;
            out.dim = 3;
            // symmetric by construction; average away rounding asymmetry
            out.matrix = 0.5 * (next + next.transpose());
            return out;
        }
        prev = next;
    }
    fail_numerical("quadrature-nonconvergence", "Fisher information quadrature did not converge");
}

ZLikelihoodContext::ZLikelihoodContext(Eigen::MatrixXd gamma, std::vector<Eigen::MatrixXd> dgamma)
    : gamma_(std::move(gamma)), dgamma_(std::move(dgamma)) {
    const Eigen::Index n = gamma_.rows();
    if (n == 0 || gamma_.cols() != n) {
        fail_usage("dimension-mismatch", "covariance must be a nonempty square matrix");
    }
    for (const auto& d : dgamma_) {
        if (d.rows() != n || d.cols() != n) {
            fail_usage("dimension-mismatch", "derivative matrices must match the covariance");
        }
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(gamma_);
    if (llt.info() != Eigen::Success) {
        fail_numerical("invalid-theta", "covariance of the aggregated series is not positive definite");
    }
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(diag[i] > 0.0)) {
            fail_numerical("invalid-theta", "covariance of the aggregated series is not positive definite");
        }
        log_det_ += 2.0 * std::log(diag[i]);
    }
    inverse_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
    trace_.reserve(dgamma_.size());
    for (const auto& d : dgamma_) {
        trace_.push_back(inverse_.cwiseProduct(d).sum());
    }
}

ZLikelihoodContext build_context(const PfarParams& theta, std::size_t n, const QuadratureSpec& quad) {
    if (n == 0) {
        fail_usage("invalid-length", "context needs n >= 1");
    }
    const ZAutocov seq = z_autocov_sequence(theta, n - 1, quad, true);
    const auto size = static_cast<Eigen::Index>(n);
    auto toeplitz = [size](const std::vector<double>& row) {
        Eigen::MatrixXd m(size, size);
        for (Eigen::Index i = 0; i < size; ++i) {
            for (Eigen::Index j = 0; j < size; ++j) {
                m(i, j) = row[static_cast<std::size_t>(std::abs(i - j))];
            }
        }
        return m;
    };
    std::vector<Eigen::MatrixXd> d;
    for (const auto& row : seq.dgamma) {
        d.push_back(toeplitz(row));
    }
    return ZLikelihoodContext(toeplitz(seq.gamma), std::move(d));
}

namespace {
Eigen::Map<const Eigen::VectorXd> as_vector(const ZLikelihoodContext& ctx, std::span<const double> z) {
    if (z.size() != ctx.n()) {
        fail_usage("dimension-mismatch", "observation length does not match the context");
    }
    return {z.data(), static_cast<Eigen::Index>(z.size())};
}
}  // namespace

double log_likelihood(const ZLikelihoodContext& ctx, std::span<const double> z) {
    const auto v = as_vector(ctx, z);
    return -0.5 * ctx.log_det() - 0.5 * v.dot(ctx.gamma_inverse() * v);
}

Eigen::VectorXd score(const ZLikelihoodContext& ctx, std::span<const double> z) {
    const auto v = as_vector(ctx, z);
    const Eigen::VectorXd a = ctx.gamma_inverse() * v;
    Eigen::VectorXd s(static_cast<Eigen::Index>(ctx.dim()));
    for (std::size_t i = 0; i < ctx.dim(); ++i) {
        s[static_cast<Eigen::Index>(i)] = -0.5 * ctx.trace_term(i) + 0.5 * a.dot(ctx.dgamma(i) * a);
    }
    return s;
}

Eigen::VectorXd fisher_scoring_update(const Eigen::VectorXd& theta, const Eigen::VectorXd& score,
                                      const Eigen::MatrixXd& info, double n) {
    if (!score.allFinite()) {
        fail_numerical("non-finite-score", "score is not finite");
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    const Eigen::VectorXd d = ldlt.vectorD();
    const double scale = d.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(d.minCoeff() > 1e-12 * scale)) {
        fail_numerical("singular-information", "Fisher information is singular");
    }
    return theta + ldlt.solve(score) / n;
}

ThetaEstimate one_step(const ThetaEstimate& theta_hat, std::span<const double> z, const OneStepOptions& opts) {
    if (theta_hat.phi_hat.size() != 2) {
        fail_usage("unsupported-period", "the one-step update is implemented for period 2");
    }
    if (z.size() < 2) {
        fail_data("short-series", "one-step update needs at least two aggregated values");
    }
    // Every coordinate is kept at least `margin` inside (-1, 1)^2 x [d1, d2].
    const double lo_h = opts.hurst_floor + opts.margin;
    const double hi_h = opts.hurst_ceil - opts.margin;
    const double lim_phi = 1.0 - opts.margin;
    bool projected = false;
    auto project = [&projected](double v, double lo, double hi) {
        if (!std::isfinite(v)) {
            projected = true;
            return 0.5 * (lo + hi);
        }
        if (v < lo || v > hi) {
            projected = true;
            return std::clamp(v, lo, hi);
        }
        return v;
    };

    Eigen::VectorXd start(3);
    start << project(theta_hat.hurst_hat, lo_h, hi_h), project(theta_hat.phi_hat[0], -lim_phi, lim_phi),
        project(theta_hat.phi_hat[1], -lim_phi, lim_phi);

    const PfarParams theta({start[1], start[2]}, HurstIndex(start[0]));
    const ZLikelihoodContext ctx = build_context(theta, z.size(), opts.quad);
    const FisherInfo info = fisher_info(theta, opts.quad, opts.form);
    const Eigen::VectorXd s = score(ctx, z);
    const Eigen::VectorXd next = fisher_scoring_update(start, s, info.matrix, static_cast<double>(z.size()));

    ThetaEstimate out = theta_hat;
    out.method = EstimateMethod::onestep;
    out.hurst_hat = project(next[0], lo_h, hi_h);
    out.phi_hat = {project(next[1], -lim_phi, lim_phi), project(next[2], -lim_phi, lim_phi)};
    out.diagnostics.projected = projected;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(Eigen::Matrix3d(info.matrix));
    out.diagnostics.info_condition = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
    return out;
}

}  // namespace pfar
