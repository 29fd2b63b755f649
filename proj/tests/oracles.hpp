#pragma once

// Brute-force references shared by the test binaries. Everything here is
// computed directly from MA truncations and the fGn autocovariance, with no
// use of the library's spectral code.

#include <cmath>
#include <complex>
#include <vector>

#include "pfar/fgn.hpp"
#include "pfar/model.hpp"

namespace oracle {

// Weights of Z_n = X_{2n+1} + X_{2n+2} on eps_{2n+2-k} (T = 2).
inline std::vector<double> z_weights(double phi1, double phi2, std::size_t count) {
    std::vector<double> a(count, 0.0);
    a[0] = 1.0;
    double h = 1.0;  // weights of X_{2n+1}: 1, phi1, phi1 phi2, phi1 phi2 phi1, ...
    for (std::size_t k = 1; k < count; ++k) {
        a[k] = (1.0 + phi2) * h;
        h *= (k % 2 == 1) ? phi1 : phi2;
    }
    return a;
}

// Cov(sum_j a_j eps_{s-j}, sum_l b_l eps_{s+shift-l}).
inline double ma_cov(const std::vector<double>& a, const std::vector<double>& b, long long shift, double hurst) {
    const pfar::HurstIndex h(hurst);
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        for (std::size_t l = 0; l < b.size(); ++l) {
            s += a[j] * b[l] * pfar::fgn_acov(h, shift - static_cast<long long>(l) + static_cast<long long>(j));
        }
    }
    return s;
}

inline double z_cov(double phi1, double phi2, double hurst, long long lag, std::size_t count = 400) {
    const auto a = z_weights(phi1, phi2, count);
    return ma_cov(a, a, 2 * lag, hurst);
}

// |sum_k w_k e^{-ik lam}|^2 f(lam)
inline double ma_density(const std::vector<double>& w, double hurst, double lam) {
    std::complex<double> s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        s += w[k] * std::polar(1.0, -static_cast<double>(k) * lam);
    }
    return std::norm(s) * pfar::fgn_spectral_density(pfar::HurstIndex(hurst), lam);
}

}  // namespace oracle
