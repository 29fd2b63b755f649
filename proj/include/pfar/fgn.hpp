#pragma once

// Fractional Gaussian noise: autocovariance, spectral density, exact
// sampling, and the Toeplitz covariance algebra built on them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pfar {

class HurstIndex {
public:
    // Throws a usage error unless 0 < value < 1.
    explicit HurstIndex(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

// rho(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2, with rho(0) = 1.
double fgn_acov(HurstIndex hurst, long long lag);

inline constexpr int kDefaultSpectralTruncation = 100;

// Normalizing constant Gamma(2H+1) sin(pi H) / pi, chosen so that the
// density integrates to rho(0) = 1 over (-pi, pi].
double fgn_spectral_constant(HurstIndex hurst);
// d/dH log of that constant: 2 digamma(2H+1) + pi cot(pi H).
double fgn_spectral_constant_dlog(HurstIndex hurst);

struct SpectralValue {
    double value = 0.0;
    double d_hurst = 0.0;  // derivative with respect to H
};

// fGn spectral density at lam (reduced modulo 2 pi). The aliasing sum is
// carried to |j| <= truncation and the remainder is added in closed form.
// lam == 0 is rejected.
double fgn_spectral_density(HurstIndex hurst, double lam, int truncation = kDefaultSpectralTruncation);
SpectralValue fgn_spectral_density_dh(HurstIndex hurst, double lam, int truncation = kDefaultSpectralTruncation);

// One exact draw of n consecutive fGn values (circulant embedding; dense
// Cholesky fallback for n <= 4096 when the embedding is not nonnegative).
std::vector<double> sample_fgn(HurstIndex hurst, std::size_t n, std::uint64_t seed);

// Symmetric Toeplitz covariance given by its first row. Factorized once at
// construction (Durbin-Levinson), so every solve is O(n^2).
class ToeplitzCov {
public:
    explicit ToeplitzCov(std::vector<double> first_row, int lag_stride = 1);

    // first_row[k] = fgn_acov(H, stride * k).
    static ToeplitzCov fgn(HurstIndex hurst, std::size_t order, int lag_stride = 1);

    std::size_t order() const noexcept { return row_.size(); }
    int lag_stride() const noexcept { return stride_; }
    std::span<const double> first_row() const noexcept { return row_; }

    Eigen::MatrixXd dense() const;
    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
    Eigen::MatrixXd inverse() const;
    double log_det() const;
    // x' C^{-1} y
    double inverse_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

private:
    // Innovations e = L x, with L unit lower triangular; C^{-1} = L' D^{-1} L.
    Eigen::VectorXd apply_l(const Eigen::VectorXd& x) const;
    Eigen::VectorXd apply_lt(const Eigen::VectorXd& y) const;

    std::vector<double> row_;
    int stride_;
    std::vector<double> pred_;  // packed order-k prediction coefficients
    std::vector<double> innov_var_;
};

Eigen::VectorXd toeplitz_solve(const ToeplitzCov& cov, const Eigen::VectorXd& rhs);
Eigen::MatrixXd toeplitz_solve(const ToeplitzCov& cov, const Eigen::MatrixXd& rhs);

struct DecayReport {
    std::size_t order = 0;
    double hurst = 0.0;
    // max over j != k of |(Omega^{-1})_{jk}| * |k - j|^{2H}
    double statistic = 0.0;
    double max_off_diagonal = 0.0;
    std::size_t arg_row = 0;
    std::size_t arg_col = 0;
    // Same supremum restricted to the central block [n/4, 3n/4). For H > 1/2
    // the corner entries of the finite inverse decay only like 1/n, so the
    // full statistic grows like n^{2H-1}; the central one stays bounded.
    double interior_statistic = 0.0;
};

DecayReport omega_inv_decay_check(HurstIndex hurst, std::size_t order);

}  // namespace pfar
