#pragma once

// PFAR(1): X_t = phi(season(t)) X_{t-1} + eps_t with fGn innovations.
// Seasons are 1-based and X_1 belongs to season 1.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pfar/fgn.hpp"
#include "pfar/quadrature.hpp"

namespace pfar {

class PfarParams {
public:
    // Throws a usage error unless every |phi(u)| < 1 (which also makes
    // |prod phi| < 1).
    PfarParams(std::vector<double> phi, HurstIndex hurst);

    int period() const noexcept { return static_cast<int>(phi_.size()); }
    const std::vector<double>& phi() const noexcept { return phi_; }
    // 1-based season access.
    double phi_at(int season) const { return phi_.at(static_cast<std::size_t>(season - 1)); }
    HurstIndex hurst() const noexcept { return hurst_; }
    // C = prod_u phi(u)
    double product() const noexcept;

private:
    std::vector<double> phi_;
    HurstIndex hurst_;
};

struct SeriesSample {
    std::vector<double> values;
    int period = 1;
    int origin_index = 1;  // season of values[0]

    std::size_t size() const noexcept { return values.size(); }
    // Season of the 1-based observation index t.
    int season(std::size_t t) const noexcept;
};

// Smallest B with |C|^{B/T} < 1e-12, at least 1000, rounded up to a
// multiple of T so the retained stream starts in season 1.
std::size_t default_burn_in(const PfarParams& params);

SeriesSample simulate_pfar(const PfarParams& params, std::size_t n, std::uint64_t seed,
                           std::optional<std::size_t> burn = std::nullopt);

// Weights h_0..h_{K-1} of X_{nT+u} = sum_k h_k eps_{nT+u-k}.
std::vector<double> ma_weights(const PfarParams& params, int season, std::size_t count);

// Spectral density (in the X time scale) of the season-u subsequence:
// |sum_{j<T} (prod_{l<j} phi(u-l)) e^{-ij lam}|^2 / |1 - C e^{-iT lam}|^2 * f(lam).
double subseq_spectral_density(const PfarParams& params, int season, double lam);

// Transfer function of Z_n = X_{2n+1} + X_{2n+2} (T = 2) against eps_{2n+2}
// and its derivatives with respect to (phi(1), phi(2)).
struct ZTransfer {
    std::complex<double> value;
    std::array<std::complex<double>, 2> d_phi;
};
ZTransfer z_transfer(const PfarParams& params, double lam);

// p(lam) = |G(e^{-i lam})|^2 f(lam); T = 2 only. Cov(Z_0, Z_k) is the
// integral of e^{i 2k lam} p(lam) over (-pi, pi].
double z_spectral_density(const PfarParams& params, double lam);

// p and its gradient, parameter order (H, phi(1), phi(2)).
struct ZDensityGradient {
    double value = 0.0;
    std::array<double, 3> grad{};
};
ZDensityGradient z_spectral_density_grad(const PfarParams& params, double lam);

// Spectral density of the aggregated series in its own time scale,
// p_Z(w) = (p(w/2) + p(pi - w/2)) / 2 for w in (0, pi].
ZDensityGradient z_series_density_grad(const PfarParams& params, double omega);

// Autocovariances Cov(Z_0, Z_k), k = 0..max_lag, by graded quadrature with
// doubling refinement; optionally the (H, phi1, phi2) derivatives as well.
struct ZAutocov {
    std::vector<double> gamma;
    std::array<std::vector<double>, 3> dgamma;  // empty unless requested
    int panels = 0;
};
ZAutocov z_autocov_sequence(const PfarParams& params, std::size_t max_lag, const QuadratureSpec& quad = {},
                            bool with_gradient = false);
double z_autocov(const PfarParams& params, long long lag, const QuadratureSpec& quad = {});

// Z_n = sum_u X_{nT+u}; a leading partial cycle (origin_index != 1) and a
// trailing partial block are dropped.
SeriesSample aggregate_z(const SeriesSample& series);

}  // namespace pfar
