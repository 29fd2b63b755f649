#include "pfar/fgn.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <unsupported/Eigen/FFT>

#include "pfar/error.hpp"
#include "pfar/random.hpp"

namespace pfar {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kDenseFallbackLimit = 4096;

double pow_abs(long long k, double e) {
    return k == 0 ? 0.0 : std::pow(static_cast<double>(k < 0 ? -k : k), e);
}

// Remainder sum_{j > J} (2 pi j + mu)^{-a} by midpoint Euler-Maclaurin
// around X = J + 1/2, together with its a-derivative.
struct TailValue {
    double value;
    double d_a;
};

TailValue aliasing_tail(double a, double mu, int truncation) {
    const double x = truncation + 0.5;
    const double u = kTwoPi * x + mu;
    const double lu = std::log(u);
    const double u1a = std::exp((1.0 - a) * lu);       // u^{1-a}
    const double ua1 = std::exp((-a - 1.0) * lu);      // u^{-a-1}
    const double ua3 = std::exp((-a - 3.0) * lu);      // u^{-a-3}
    const double c3 = kTwoPi * kTwoPi * kTwoPi;

    const double integral = u1a / (kTwoPi * (a - 1.0));
    const double g1 = -kTwoPi * a * ua1;
    const double poly3 = a * (a + 1.0) * (a + 2.0);
    const double g3 = -c3 * poly3 * ua3;

    const double d_integral = -u1a * (lu / (a - 1.0) + 1.0 / ((a - 1.0) * (a - 1.0))) / kTwoPi;
    const double d_g1 = -kTwoPi * ua1 + kTwoPi * a * lu * ua1;
    const double d_poly3 = 3.0 * a * a + 6.0 * a + 2.0;
    const double d_g3 = -c3 * (d_poly3 - poly3 * lu) * ua3;

    return {integral + g1 / 24.0 - 7.0 * g3 / 5760.0, d_integral + d_g1 / 24.0 - 7.0 * d_g3 / 5760.0};
}

double reduce_frequency(double lam) {
    double r = std::remainder(lam, kTwoPi);
    return std::abs(r);
}

}  // namespace

HurstIndex::HurstIndex(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
        fail_usage("invalid-hurst", "Hurst index must lie in (0, 1), got " + std::to_string(value));
    }
}

double fgn_acov(HurstIndex hurst, long long lag) {
    const double e = 2.0 * hurst.value();
    lag = lag < 0 ? -lag : lag;
    return 0.5 * (pow_abs(lag + 1, e) - 2.0 * pow_abs(lag, e) + pow_abs(lag - 1, e));
}

double fgn_spectral_constant(HurstIndex hurst) {
    const double h = hurst.value();
    return std::tgamma(2.0 * h + 1.0) * std::sin(kPi * h) / kPi;
}

double fgn_spectral_constant_dlog(HurstIndex hurst) {
    const double h = hurst.value();
    return 2.0 * boost::math::digamma(2.0 * h + 1.0) + kPi / std::tan(kPi * h);
}

SpectralValue fgn_spectral_density_dh(HurstIndex hurst, double lam, int truncation) {
    if (truncation < 1) {
        fail_usage("invalid-truncation", "spectral truncation must be >= 1");
    }
    const double x = reduce_frequency(lam);
    if (x == 0.0 || !std::isfinite(lam)) {
        fail_usage("zero-frequency", "fGn spectral density is not evaluated at frequency 0");
    }
    const double a = 2.0 * hurst.value() + 1.0;

    double sum = 0.0;
    double d_sum = 0.0;  // d/da
    for (int j = -truncation; j <= truncation; ++j) {
        const double t = std::abs(x + kTwoPi * j);
        const double lt = std::log(t);
        const double term = std::exp(-a * lt);
        sum += term;
        d_sum -= lt * term;
    }
    const TailValue up = aliasing_tail(a, x, truncation);
    const double down_mu = -x;
    const TailValue down = aliasing_tail(a, down_mu, truncation);
    sum += up.value + down.value;
    d_sum += up.d_a + down.d_a;

    const double s = std::sin(0.5 * x);
    const double one_minus_cos = 2.0 * s * s;
    const double c = fgn_spectral_constant(hurst);
    const double dlog_c = fgn_spectral_constant_dlog(hurst);

    SpectralValue out;
    out.value = c * one_minus_cos * sum;
    out.d_hurst = out.value * dlog_c + c * one_minus_cos * 2.0 * d_sum;
    return out;
}

double fgn_spectral_density(HurstIndex hurst, double lam, int truncation) {
    return fgn_spectral_density_dh(hurst, lam, truncation).value;
}

namespace {

std::size_t next_smooth(std::size_t m) {
    for (;; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2u, 3u, 5u}) {
            while (r % p == 0) {
                r /= p;
            }
        }
        if (r == 1) {
            return m;
        }
    }
}

std::vector<double> sample_dense(HurstIndex hurst, std::size_t n, std::mt19937_64& gen) {
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cov(i, j) = fgn_acov(hurst, static_cast<long long>(i) - static_cast<long long>(j));
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        fail_numerical("sampling-infeasible", "fGn covariance is not positive definite");
    }
    std::normal_distribution<double> normal;
    Eigen::VectorXd w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = normal(gen);
    }
    const Eigen::VectorXd x = llt.matrixL() * w;
    return {x.data(), x.data() + n};
}

}  // namespace

std::vector<double> sample_fgn(HurstIndex hurst, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        fail_usage("invalid-length", "sample_fgn needs n >= 1");
    }
    std::mt19937_64 gen(splitmix64(seed));
    std::normal_distribution<double> normal;
    if (n == 1) {
        return {normal(gen)};
    }

    // Embed the n x n Toeplitz block into a circulant of smooth size 2(N-1),
    // N >= n, so the FFT stays fast; the leading n values keep the exact law.
    std::size_t big = n;
    while (next_smooth(2 * (big - 1)) != 2 * (big - 1)) {
        ++big;
    }
    const std::size_t m = 2 * (big - 1);
    std::vector<std::complex<double>> row(m);
    for (std::size_t k = 0; k < big; ++k) {
        row[k] = fgn_acov(hurst, static_cast<long long>(k));
    }
    for (std::size_t k = big; k < m; ++k) {
        row[k] = row[m - k];
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> eig;
    fft.fwd(eig, row);

    bool embeddable = true;
    for (auto& e : eig) {
        if (e.real() < -1e-12) {
            embeddable = false;
            break;
        }
        e = std::max(e.real(), 0.0);
    }
    if (!embeddable) {
        if (n > kDenseFallbackLimit) {
            fail_numerical("sampling-infeasible",
                           "circulant embedding has negative eigenvalues and n exceeds the dense fallback limit");
        }
        return sample_dense(hurst, n, gen);
    }

    std::vector<std::complex<double>> weighted(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double re = normal(gen);
        const double im = normal(gen);
        weighted[k] = std::sqrt(eig[k].real() / static_cast<double>(m)) * std::complex<double>(re, im);
    }
    // Unnormalized forward DFT: Eigen's inverse divides by m, so scale back.
    std::vector<std::complex<double>> out;
    fft.fwd(out, weighted);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = out[i].real();
    }
    return x;
}

// ---------------------------------------------------------------- Toeplitz

ToeplitzCov::ToeplitzCov(std::vector<double> first_row, int lag_stride)
    : row_(std::move(first_row)), stride_(lag_stride) {
    const std::size_t n = row_.size();
    if (n == 0 || lag_stride < 1) {
        fail_usage("invalid-toeplitz", "Toeplitz covariance needs order >= 1 and stride >= 1");
    }
    if (!(row_[0] > 0.0)) {
        fail_numerical("not-positive-definite", "leading minor 1 is not positive definite");
    }
    pred_.assign(n * (n - 1) / 2, 0.0);
    innov_var_.assign(n, 0.0);
    innov_var_[0] = row_[0];

    std::vector<double> prev;
    std::vector<double> cur;
    cur.reserve(n);
    for (std::size_t k = 1; k < n; ++k) {
        // Order-k predictor of x_k from x_{k-1}, ..., x_0.
        double acc = row_[k];
        for (std::size_t j = 1; j < k; ++j) {
            acc -= prev[j - 1] * row_[k - j];
        }
        const double kappa = acc / innov_var_[k - 1];
        cur.assign(k, 0.0);
        for (std::size_t j = 1; j < k; ++j) {
            cur[j - 1] = prev[j - 1] - kappa * prev[k - j - 1];
        }
        cur[k - 1] = kappa;
        innov_var_[k] = innov_var_[k - 1] * (1.0 - kappa * kappa);
        if (!(innov_var_[k] > row_[0] * 1e-15) || !std::isfinite(innov_var_[k])) {
            fail_numerical("not-positive-definite",
                           "leading minor " + std::to_string(k + 1) + " is not positive definite");
        }
        std::copy(cur.begin(), cur.end(), pred_.begin() + static_cast<std::ptrdiff_t>(k * (k - 1) / 2));
        prev.swap(cur);
    }
}

ToeplitzCov ToeplitzCov::fgn(HurstIndex hurst, std::size_t order, int lag_stride) {
    std::vector<double> row(order);
    for (std::size_t k = 0; k < order; ++k) {
        row[k] = fgn_acov(hurst, static_cast<long long>(k) * lag_stride);
    }
    return ToeplitzCov(std::move(row), lag_stride);
}

Eigen::MatrixXd ToeplitzCov::dense() const {
    const auto n = static_cast<Eigen::Index>(order());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = row_[static_cast<std::size_t>(std::abs(i - j))];
        }
    }
    return m;
}

Eigen::VectorXd ToeplitzCov::multiply(const Eigen::VectorXd& x) const {
    const auto n = static_cast<Eigen::Index>(order());
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            acc += row_[static_cast<std::size_t>(std::abs(i - j))] * x[j];
        }
        y[i] = acc;
    }
    return y;
}

Eigen::VectorXd ToeplitzCov::apply_l(const Eigen::VectorXd& x) const {
    const std::size_t n = order();
    Eigen::VectorXd e(static_cast<Eigen::Index>(n));
    e[0] = x[0];
    for (std::size_t k = 1; k < n; ++k) {
        const double* a = pred_.data() + k * (k - 1) / 2;
        double acc = x[static_cast<Eigen::Index>(k)];
        for (std::size_t j = 1; j <= k; ++j) {
            acc -= a[j - 1] * x[static_cast<Eigen::Index>(k - j)];
        }
        e[static_cast<Eigen::Index>(k)] = acc;
    }
    return e;
}

Eigen::VectorXd ToeplitzCov::apply_lt(const Eigen::VectorXd& y) const {
    const std::size_t n = order();
    Eigen::VectorXd out = y;
    for (std::size_t k = 1; k < n; ++k) {
        const double* a = pred_.data() + k * (k - 1) / 2;
        const double yk = y[static_cast<Eigen::Index>(k)];
        for (std::size_t j = 1; j <= k; ++j) {
            out[static_cast<Eigen::Index>(k - j)] -= a[j - 1] * yk;
        }
    }
    return out;
}

Eigen::VectorXd ToeplitzCov::solve(const Eigen::VectorXd& rhs) const {
    if (static_cast<std::size_t>(rhs.size()) != order()) {
        fail_usage("dimension-mismatch", "toeplitz_solve: right-hand side has the wrong length");
    }
    Eigen::VectorXd e = apply_l(rhs);
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        e[k] /= innov_var_[static_cast<std::size_t>(k)];
    }
    return apply_lt(e);
}

Eigen::MatrixXd ToeplitzCov::solve(const Eigen::MatrixXd& rhs) const {
    if (static_cast<std::size_t>(rhs.rows()) != order()) {
        fail_usage("dimension-mismatch", "toeplitz_solve: right-hand side has the wrong row count");
    }
    Eigen::MatrixXd out(rhs.rows(), rhs.cols());
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
        out.col(c) = solve(Eigen::VectorXd(rhs.col(c)));
    }
    return out;
}

Eigen::MatrixXd ToeplitzCov::inverse() const {
    const auto n = static_cast<Eigen::Index>(order());
    return solve(Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n)));
}

double ToeplitzCov::log_det() const {
    double s = 0.0;
    for (const double v : innov_var_) {
        s += std::log(v);
    }
    return s;
}

double ToeplitzCov::inverse_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    if (static_cast<std::size_t>(x.size()) != order() || static_cast<std::size_t>(y.size()) != order()) {
        fail_usage("dimension-mismatch", "inverse_form: vectors have the wrong length");
    }
    const Eigen::VectorXd ex = apply_l(x);
    const Eigen::VectorXd ey = apply_l(y);
    double s = 0.0;
    for (Eigen::Index k = 0; k < ex.size(); ++k) {
        s += ex[k] * ey[k] / innov_var_[static_cast<std::size_t>(k)];
    }
    return s;
}

Eigen::VectorXd toeplitz_solve(const ToeplitzCov& cov, const Eigen::VectorXd& rhs) { return cov.solve(rhs); }

Eigen::MatrixXd toeplitz_solve(const ToeplitzCov& cov, const Eigen::MatrixXd& rhs) { return cov.solve(rhs); }

DecayReport omega_inv_decay_check(HurstIndex hurst, std::size_t order) {
    if (order < 8) {
        fail_usage("invalid-order", "omega_inv_decay_check needs order >= 8");
    }
    const Eigen::MatrixXd inv = ToeplitzCov::fgn(hurst, order).inverse();
    DecayReport report;
    report.order = order;
    report.hurst = hurst.value();
    const double e = 2.0 * hurst.value();
    const Eigen::Index lo = inv.rows() / 4;
    const Eigen::Index hi = 3 * inv.rows() / 4;
    for (Eigen::Index j = 0; j < inv.rows(); ++j) {
        for (Eigen::Index k = 0; k < inv.cols(); ++k) {
            if (j == k) {
                continue;
            }
            const double mag = std::abs(inv(j, k));
            report.max_off_diagonal = std::max(report.max_off_diagonal, mag);
            const double stat = mag * std::pow(static_cast<double>(std::abs(k - j)), e);
            if (j >= lo && j < hi && k >= lo && k < hi) {
                report.interior_statistic = std::max(report.interior_statistic, stat);
            }
            if (stat > report.statistic) {
                report.statistic = stat;
                report.arg_row = static_cast<std::size_t>(j);
                report.arg_col = static_cast<std::size_t>(k);
            }
        }
    }
    return report;
}

}  // namespace pfar
