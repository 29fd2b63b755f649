#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "pfar/error.hpp"
#include "pfar/initial_est.hpp"

using namespace pfar;

namespace {
constexpr double kPi = std::numbers::pi;

SeriesSample noiseless(const std::vector<double>& phi, std::size_t n) {
    SeriesSample s;
    s.period = static_cast<int>(phi.size());
    s.values.resize(n);
    s.values[0] = 1.0;
    for (std::size_t t = 2; t <= n; ++t) {
        s.values[t - 1] = phi[(t - 1) % phi.size()] * s.values[t - 2];
    }
    return s;
}

// Whitened ordinary least squares with an explicit symmetric Omega^{-1/2}.
std::vector<double> whitened_glse(const SeriesSample& s, double h) {
    const std::size_t period = s.period;
    const std::size_t rows = s.size() / period * period - 1;
    Eigen::MatrixXd omega(rows, rows), d = Eigen::MatrixXd::Zero(rows, period);
    Eigen::VectorXd y(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < rows; ++j) {
            omega(i, j) = fgn_acov(HurstIndex(h), static_cast<long long>(i) - static_cast<long long>(j));
        }
        d(i, (i + 1) % period) = s.values[i];
        y[i] = s.values[i + 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(omega);
    const Eigen::MatrixXd root_inv =
        eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    const Eigen::VectorXd phi = (root_inv * d).colPivHouseholderQr().solve(root_inv * y);
    return {phi.data(), phi.data() + phi.size()};
}
}  // namespace

TEST(Periodogram, ConstantSeries) {
    const std::vector<double> z(16, 3.5);
    const auto pg = periodogram(z);
    ASSERT_EQ(pg.ordinates.size(), 8u);
    for (double v : pg.ordinates) EXPECT_NEAR(v, 0.0, 1e-25);
}

TEST(Periodogram, Impulse) {
    const auto pg = periodogram(std::vector<double>{1, 0, 0, 0});
    ASSERT_EQ(pg.ordinates.size(), 2u);
    for (double v : pg.ordinates) EXPECT_NEAR(v, 1.0 / (8.0 * kPi), 1e-15);
    EXPECT_THROW(periodogram(std::vector<double>{1, 2, 3}), Error);
}

TEST(Periodogram, CosinePeak) {
    std::vector<double> z(64);
    for (int t = 1; t <= 64; ++t) z[t - 1] = std::cos(2 * kPi * 3 * t / 64.0);
    const auto pg = periodogram(z);
    const auto it = std::max_element(pg.ordinates.begin(), pg.ordinates.end());
    EXPECT_EQ(it - pg.ordinates.begin() + 1, 3);
}

TEST(Periodogram, MatchesDirectSum) {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    std::vector<double> z(101);
    for (double& v : z) v = nd(gen);
    const auto pg = periodogram(z);
    for (std::size_t j = 1; j <= pg.ordinates.size(); ++j) {
        std::complex<double> s = 0.0;
        const double lam = 2 * kPi * j / 101.0;
        for (int t = 1; t <= 101; ++t) s += z[t - 1] * std::polar(1.0, t * lam);
        const double ref = std::norm(s) / (2 * kPi * 101);
        EXPECT_NEAR(pg.ordinates[j - 1] / ref, 1.0, 1e-10);
        EXPECT_DOUBLE_EQ(pg.freqs[j - 1], lam);
    }
}

TEST(Gph, ExactOnLogLinearOrdinates) {
    for (double d : {-0.3, 0.0, 0.2, 0.45}) {
        Periodogram pg;
        pg.n = 200;
        for (int j = 1; j <= 100; ++j) {
            const double lam = 2 * kPi * j / 200.0;
            pg.freqs.push_back(lam);
            pg.ordinates.push_back(std::pow(2 * std::sin(lam / 2), -2 * d));
        }
        for (int m = 2; m <= 100; m += 7) {
            const auto fit = gph_estimate(pg, m);
            EXPECT_NEAR(fit.d, d, 1e-12);
            EXPECT_NEAR(fit.hurst_raw, d + 0.5, 1e-12);
        }
    }
}

TEST(Gph, ClampAndErrors) {
    Periodogram pg;
    pg.n = 20;
    for (int j = 1; j <= 10; ++j) {
        const double lam = 2 * kPi * j / 20.0;
        pg.freqs.push_back(lam);
        pg.ordinates.push_back(std::pow(2 * std::sin(lam / 2), -2 * 0.9));
    }
    const auto fit = gph_estimate(pg, 5);
    EXPECT_TRUE(fit.clamped);
    EXPECT_DOUBLE_EQ(fit.hurst, kHurstCeil);
    EXPECT_THROW(gph_estimate(pg, 1), Error);
    EXPECT_THROW(gph_estimate(pg, 11), Error);
    pg.ordinates[2] = 0.0;
    try {
        gph_estimate(pg, 5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "degenerate-periodogram");
    }
    EXPECT_EQ(gph_bandwidth(100, 0.6), 15);
    EXPECT_EQ(gph_bandwidth(4, 0.1), 2);
}

TEST(Gph, FgnMonteCarloMean) {
    const std::size_t n = 4096;
    double s = 0.0;
    for (int r = 0; r < 200; ++r) {
        const auto z = sample_fgn(HurstIndex(0.7), n, 500 + r);
        s += gph_estimate(periodogram(z), gph_bandwidth(n, 0.6)).hurst;
    }
    EXPECT_NEAR(s / 200, 0.7, 0.05);
}

TEST(Glse, NoiselessExactRecovery) {
    for (double h : {0.5, 0.7}) {
        const auto s = noiseless({0.6, -0.8}, 41);
        const auto phi = glse_phi(s, HurstIndex(h));
        EXPECT_NEAR(phi[0], 0.6, 1e-10);
        EXPECT_NEAR(phi[1], -0.8, 1e-10);
    }
    const auto s4 = noiseless({0.9, 0.5, -0.7, 0.95}, 64);
    const auto phi4 = glse_phi(s4, HurstIndex(0.3));
    EXPECT_NEAR(phi4[2], -0.7, 1e-9);
}

TEST(Glse, HandInversionThreeRows) {
    const double h = 0.7;
    SeriesSample s{{0.8, -0.3, 1.1, 0.4}, 2, 1};
    const double r1 = fgn_acov(HurstIndex(h), 1), r2 = fgn_acov(HurstIndex(h), 2);
    // Omega^{-1} from cofactors of [[1 r1 r2][r1 1 r1][r2 r1 1]].
    const double det = 1 - r1 * r1 - r1 * (r1 - r1 * r2) + r2 * (r1 * r1 - r2);
    double inv[3][3] = {{1 - r1 * r1, -(r1 - r1 * r2), r1 * r1 - r2},
                        {-(r1 - r2 * r1), 1 - r2 * r2, -(r1 - r1 * r2)},
                        {r1 * r1 - r2, -(r1 - r2 * r1), 1 - r1 * r1}};
    for (auto& row : inv)
        for (double& v : row) v /= det;
    // D = [[0 X1][X2 0][0 X3]], Y = (X2 X3 X4)
    const double d[3][2] = {{0, 0.8}, {-0.3, 0}, {0, 1.1}};
    const double y[3] = {-0.3, 1.1, 0.4};
    double a[2][2] = {}, b[2] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            for (int p = 0; p < 2; ++p) {
                b[p] += d[i][p] * inv[i][j] * y[j];
                for (int q = 0; q < 2; ++q) a[p][q] += d[i][p] * inv[i][j] * d[j][q];
            }
        }
    const double da = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const double phi1 = (a[1][1] * b[0] - a[0][1] * b[1]) / da;
    const double phi2 = (a[0][0] * b[1] - a[1][0] * b[0]) / da;
    const auto phi = glse_phi(s, HurstIndex(h));
    EXPECT_NEAR(phi[0], phi1, 1e-12);
    EXPECT_NEAR(phi[1], phi2, 1e-12);
}

TEST(Glse, WhiteningEquivalence) {
    for (double h : {0.3, 0.8}) {
        const auto s = simulate_pfar(PfarParams({0.6, 0.8}, HurstIndex(h)), 256, 31);
        const auto a = glse_phi(s, HurstIndex(h));
        const auto b = whitened_glse(s, h);
        EXPECT_NEAR(a[0], b[0], 1e-9);
        EXPECT_NEAR(a[1], b[1], 1e-9);
    }
}

TEST(Glse, OddLengthDropsLast) {
    const auto s = simulate_pfar(PfarParams({0.6, 0.8}, HurstIndex(0.3)), 101, 4);
    SeriesSample even = s;
    even.values.pop_back();
    EXPECT_EQ(glse_phi(s, HurstIndex(0.3)), glse_phi(even, HurstIndex(0.3)));
    EXPECT_EQ(glse_fit(s, HurstIndex(0.3)).rows, 99u);
}

TEST(Glse, InsufficientExcitation) {
    SeriesSample zero{std::vector<double>(20, 0.0), 2, 1};
    try {
        glse_phi(zero, HurstIndex(0.4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "insufficient-excitation");
        EXPECT_EQ(e.kind(), ErrorKind::data);
    }
}

TEST(Glse, KnownHurstAccuracy) {
    // Two thousand observations (1000 cycles), true H supplied.
    const PfarParams p({0.6, 0.8}, HurstIndex(0.3));
    const int reps = 200;
    double bias = 0.0, sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto s = simulate_pfar(p, 2000, 70000 + r);
        const double e = glse_phi(s, HurstIndex(0.3))[0] - 0.6;
        bias += e;
        sq += e * e;
    }
    bias /= reps;
    EXPECT_LE(std::abs(bias), 0.01);
    EXPECT_NEAR(std::sqrt(sq / reps), 0.036, 0.01);
}

TEST(AltEstimator, WhiteCaseUnbiased) {
    const PfarParams p({0.5, 0.5}, HurstIndex(0.5));
    const int reps = 500;
    std::vector<double> e1;
    for (int r = 0; r < reps; ++r) {
        const auto s = simulate_pfar(p, 2000, 1234 + r);
        e1.push_back(alt_phi_estimator(s, HurstIndex(0.5)).first - 0.5);
    }
    double m = 0.0, v = 0.0;
    for (double e : e1) m += e;
    m /= reps;
    for (double e : e1) v += (e - m) * (e - m);
    EXPECT_LT(std::abs(m), 2.0 * std::sqrt(v / (reps - 1) / reps));
}

TEST(AltEstimator, NoiselessAndErrors) {
    const auto s = noiseless({0.7, -0.4}, 30);
    for (auto cov : {AltCovariance::seasonal, AltCovariance::unit_lag}) {
        const auto [p1, p2] = alt_phi_estimator(s, HurstIndex(0.8), cov);
        EXPECT_NEAR(p1, 0.7, 1e-10);
        EXPECT_NEAR(p2, -0.4, 1e-10);
    }
    EXPECT_THROW(alt_phi_estimator(SeriesSample{std::vector<double>(20, 0.0), 2, 1}, HurstIndex(0.4)), Error);
    EXPECT_THROW(alt_phi_estimator(SeriesSample{std::vector<double>(6, 1.0), 2, 1}, HurstIndex(0.4)), Error);
    EXPECT_THROW(alt_phi_estimator(SeriesSample{std::vector<double>(30, 1.0), 3, 1}, HurstIndex(0.4)), Error);
}

TEST(InitialEstimate, PipelineAndScaleEquivariance) {
    const auto s = simulate_pfar(PfarParams({0.6, 0.8}, HurstIndex(0.3)), 400, 8);
    const auto a = initial_estimate(s);
    EXPECT_EQ(a.method, EstimateMethod::initial);
    EXPECT_EQ(a.m_used, gph_bandwidth(200, 0.6));
    EXPECT_EQ(a.diagnostics.n_z, 200u);
    SeriesSample scaled = s;
    for (double& v : scaled.values) v *= 7.5;
    const auto b = initial_estimate(scaled);
    EXPECT_NEAR(a.hurst_hat, b.hurst_hat, 1e-12);
    EXPECT_NEAR(a.phi_hat[0], b.phi_hat[0], 1e-12);
    EXPECT_NEAR(a.phi_hat[1], b.phi_hat[1], 1e-12);

    InitialOptions known;
    known.phi_hurst = 0.3;
    const auto c = initial_estimate(s, known);
    EXPECT_EQ(c.phi_hat, glse_phi(s, HurstIndex(0.3)));
    EXPECT_EQ(c.hurst_hat, a.hurst_hat);

    InitialOptions bad;
    bad.delta = 0.7;
    EXPECT_THROW(initial_estimate(s, bad), Error);
    EXPECT_THROW(initial_estimate(SeriesSample{{1, 2, 3, 4, 5, 6, 7}, 2, 1}), Error);
}

TEST(InitialEstimate, NoiselessForcedHurst) {
    const auto s = noiseless({0.6, 0.8}, 64);
    InitialOptions opts;
    opts.phi_hurst = 0.5;
    const auto est = initial_estimate(s, opts);
    EXPECT_NEAR(est.phi_hat[0], 0.6, 1e-10);
    EXPECT_NEAR(est.phi_hat[1], 0.8, 1e-10);
}
