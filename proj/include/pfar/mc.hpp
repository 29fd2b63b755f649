#pragma once

// Monte Carlo harness: replications in parallel, order-independent
// reduction, and table emission.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pfar/initial_est.hpp"
#include "pfar/model.hpp"
#include "pfar/onestep.hpp"

namespace pfar {

enum class McMethod { initial, onestep, alt_initial };
std::string method_label(McMethod m);  // IE, OS, ALT

// Which Hurst index the coefficient stage uses.
enum class PhiHurst { estimated, truth };

struct McConfig {
    PfarParams theta_true{{0.6, 0.8}, HurstIndex(0.3)};
    // Sample sizes in cycles: each replication simulates T * n observations
    // and the aggregated series has n values.
    std::vector<std::size_t> n_list{100};
    std::size_t replications = 200;
    double delta = kDefaultDelta;
    std::uint64_t master_seed = 20240601;
    std::vector<McMethod> methods{McMethod::initial, McMethod::onestep};
    std::size_t worker_count = 1;
    PhiHurst phi_hurst = PhiHurst::estimated;
    AltCovariance alt_covariance = AltCovariance::seasonal;
    QuadratureSpec quad;
    // Called once per finished replication (from worker threads).
    std::function<void(std::size_t done, std::size_t total)> progress;
};

// Parameter labels follow the estimate layout: H, phi(1), ..., phi(T).
struct McCell {
    std::size_t n = 0;
    McMethod method = McMethod::initial;
    std::string parameter;
    double bias = 0.0;
    double rmse = 0.0;
    double se = 0.0;  // sample sd of the error / sqrt(successes)
    std::size_t failures = 0;
    std::size_t replications = 0;
};

struct McReport {
    std::vector<McCell> cells;  // ordered by n, method, parameter
    const McCell& cell(std::size_t n, McMethod m, const std::string& parameter) const;
};

// Replication r of size n uses seed derive_seed(master, {n, r}). Failed
// estimates are counted and left out of the moments; more than half failing
// for any (n, method) raises "experiment-degenerate".
McReport run_mc(const McConfig& cfg);

// Raw per-replication errors (estimate - truth) for one n, in replication
// order; failed replications hold nullopt. Exposed for diagnostics.
struct McErrors {
    std::vector<McMethod> methods;
    std::vector<std::vector<std::optional<std::vector<double>>>> errors;  // [method][replication]
};
McErrors run_replications(const McConfig& cfg, std::size_t n);

enum class TableFormat { csv, markdown };
std::string emit_tables(const McReport& report, TableFormat format);
// Inverse of emit_tables for CSV.
McReport parse_csv_report(const std::string& text);

}  // namespace pfar
