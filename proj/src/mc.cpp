#include "pfar/mc.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "pfar/error.hpp"
#include "pfar/random.hpp"

namespace pfar {

namespace {

constexpr McMethod kCanonicalOrder[] = {McMethod::initial, McMethod::onestep, McMethod::alt_initial};

std::vector<std::string> parameter_labels(int period) {
    std::vector<std::string> out{"H"};
    for (int u = 1; u <= period; ++u) {
        out.push_back("phi(" + std::to_string(u) + ")");
    }
    return out;
}

std::vector<McMethod> canonical(std::vector<McMethod> methods) {
    std::vector<McMethod> out;
    for (McMethod m : kCanonicalOrder) {
        if (std::find(methods.begin(), methods.end(), m) != methods.end()) {
            out.push_back(m);
        }
    }
    return out;
}

bool wants(const std::vector<McMethod>& ms, McMethod m) { return std::find(ms.begin(), ms.end(), m) != ms.end(); }

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string method_label(McMethod m) {
    switch (m) {
        case McMethod::initial: return "IE";
        case McMethod::onestep: return "OS";
        case McMethod::alt_initial: return "ALT";
    }
    return "?";
}

const McCell& McReport::cell(std::size_t n, McMethod m, const std::string& parameter) const {
    for (const McCell& c : cells) {
        if (c.n == n && c.method == m && c.parameter == parameter) {
            return c;
        }
    }
    fail_usage("missing-cell", "report has no cell for " + method_label(m) + " " + parameter);
}

McErrors run_replications(const McConfig& cfg, std::size_t n) {
    const PfarParams& truth = cfg.theta_true;
    const int period = truth.period();
    if (cfg.replications < 1) {
        fail_usage("invalid-config", "at least one replication is required");
    }
    if (n < 4) {
        fail_usage("invalid-config", "sample size must be at least 4 cycles");
    }
    McErrors out;
    out.methods = canonical(cfg.methods);
    if (out.methods.empty()) {
        fail_usage("invalid-config", "no estimation method requested");
    }
    if (period != 2 && (wants(out.methods, McMethod::onestep) || wants(out.methods, McMethod::alt_initial))) {
        fail_usage("unsupported-period", "one-step and ratio estimators need period 2");
    }
    const std::size_t reps = cfg.replications;
    out.errors.assign(out.methods.size(), std::vector<std::optional<std::vector<double>>>(reps));

    std::vector<double> true_theta{truth.hurst().value()};
    true_theta.insert(true_theta.end(), truth.phi().begin(), truth.phi().end());
    auto error_of = [&true_theta](double h, const std::vector<double>& phi) {
        std::vector<double> e{h - true_theta[0]};
        for (std::size_t i = 0; i < phi.size(); ++i) {
            e.push_back(phi[i] - true_theta[i + 1]);
        }
        return e;
    };

    auto replicate = [&](std::size_t r) {
        const std::uint64_t seed = derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(n), r});
        const SeriesSample x = simulate_pfar(truth, static_cast<std::size_t>(period) * n, seed);
        InitialOptions opts;
        opts.delta = cfg.delta;
        if (cfg.phi_hurst == PhiHurst::truth) {
            opts.phi_hurst = truth.hurst().value();
        }
        std::optional<ThetaEstimate> ie;
        try {
            ie = initial_estimate(x, opts);
        } catch (const Error&) {
        }
        for (std::size_t k = 0; k < out.methods.size(); ++k) {
            auto& slot = out.errors[k][r];
            try {
                switch (out.methods[k]) {
                    case McMethod::initial:
                        if (ie) slot = error_of(ie->hurst_hat, ie->phi_hat);
                        break;
                    case McMethod::onestep:
                        if (ie) {
                            const ThetaEstimate os = one_step(*ie, aggregate_z(x).values, OneStepOptions{cfg.quad});
                            slot = error_of(os.hurst_hat, os.phi_hat);
                        }
                        break;
                    case McMethod::alt_initial:
                        if (ie) {
                            const double h = cfg.phi_hurst == PhiHurst::truth ? truth.hurst().value() : ie->hurst_hat;
                            const auto [p1, p2] = alt_phi_estimator(x, HurstIndex(h), cfg.alt_covariance);
                            slot = error_of(ie->hurst_hat, {p1, p2});
                        }
                        break;
                }
            } catch (const Error&) {
                slot.reset();
            }
        }
    };

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= reps) {
                return;
            }
            try {
                replicate(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(reps);
                return;
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (cfg.progress) cfg.progress(d, reps);
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.worker_count, reps));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

McReport run_mc(const McConfig& cfg) {
    McReport report;
    const auto labels = parameter_labels(cfg.theta_true.period());
    for (const std::size_t n : cfg.n_list) {
        const McErrors errs = run_replications(cfg, n);
        for (std::size_t k = 0; k < errs.methods.size(); ++k) {
            const auto& col = errs.errors[k];
            std::size_t failures = 0;
            for (const auto& e : col) failures += e ? 0 : 1;
            if (2 * failures > cfg.replications) {
                fail_numerical("experiment-degenerate", method_label(errs.methods[k]) + " failed in " +
                                                            std::to_string(failures) + " of " +
                                                            std::to_string(cfg.replications) + " replications");
            }
            for (std::size_t p = 0; p < labels.size(); ++p) {
                // Sequential sums in replication order keep the result
                // independent of the worker schedule.
                double s = 0.0, s2 = 0.0;
                std::size_t k_ok = 0;
                for (const auto& e : col) {
                    if (!e) continue;
                    s += (*e)[p];
                    s2 += (*e)[p] * (*e)[p];
                    ++k_ok;
                }
                McCell c;
                c.n = n;
                c.method = errs.methods[k];
                c.parameter = labels[p];
                c.failures = failures;
                c.replications = cfg.replications;
                const auto m = static_cast<double>(k_ok);
                c.bias = s / m;
                c.rmse = std::sqrt(s2 / m);
                if (k_ok > 1) {
                    double ss = 0.0;
                    for (const auto& e : col) {
                        if (e) ss += ((*e)[p] - c.bias) * ((*e)[p] - c.bias);
                    }
                    c.se = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
                }
                report.cells.push_back(c);
            }
        }
    }
    return report;
}

namespace {

struct TableShape {
    std::vector<std::size_t> ns;
    std::vector<std::string> parameters;
    std::vector<McMethod> methods;
};

TableShape shape_of(const McReport& report) {
    TableShape s;
    std::vector<McMethod> ms;
    for (const McCell& c : report.cells) {
        if (std::find(s.ns.begin(), s.ns.end(), c.n) == s.ns.end()) s.ns.push_back(c.n);
        if (std::find(s.parameters.begin(), s.parameters.end(), c.parameter) == s.parameters.end())
            s.parameters.push_back(c.parameter);
        ms.push_back(c.method);
    }
    s.methods = canonical(ms);
    return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail_data("malformed-report", "bad number '" + s + "'");
    }
    return v;
}

std::size_t parse_count(const std::string& s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail_data("malformed-report", "bad count '" + s + "'");
    }
    return v;
}

}  // namespace

std::string emit_tables(const McReport& report, TableFormat format) {
    if (report.cells.empty()) {
        fail_usage("empty-report", "nothing to emit");
    }
    const TableShape shape = shape_of(report);
    std::vector<std::string> header{"n", "parameter"};
    for (const char* stat : {"B", "RMSE", "SE", "FAIL"}) {
        for (McMethod m : shape.methods) header.push_back(std::string(stat) + " " + method_label(m));
    }
    header.push_back("M");

    std::vector<std::vector<std::string>> rows;
    for (std::size_t n : shape.ns) {
        for (const std::string& p : shape.parameters) {
            std::vector<std::string> row{std::to_string(n), p};
            std::size_t reps = 0;
            for (int stat = 0; stat < 4; ++stat) {
                for (McMethod m : shape.methods) {
                    const McCell& c = report.cell(n, m, p);
                    reps = c.replications;
                    if (format == TableFormat::csv) {
                        const double v[] = {c.bias, c.rmse, c.se};
                        row.push_back(stat < 3 ? format_number(v[stat]) : std::to_string(c.failures));
                    } else {
                        char buf[32];
                        const double v[] = {c.bias, c.rmse, c.se};
                        if (stat < 3) {
                            std::snprintf(buf, sizeof buf, "%.4f", v[stat]);
                            row.emplace_back(buf);
                        } else {
                            row.push_back(std::to_string(c.failures));
                        }
                    }
                }
            }
            row.push_back(std::to_string(reps));
            rows.push_back(std::move(row));
        }
    }

    std::ostringstream os;
    if (format == TableFormat::csv) {
        auto put = [&os](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        };
        put(header);
        for (const auto& r : rows) put(r);
    } else {
        auto put = [&os](const std::vector<std::string>& r) {
            os << '|';
            for (const auto& f : r) os << ' ' << f << " |";
            os << '\n';
        };
        put(header);
        os << '|';
        for (std::size_t i = 0; i < header.size(); ++i) os << (i < 2 ? " --- |" : " ---: |");
        os << '\n';
        for (const auto& r : rows) put(r);
    }
    return os.str();
}

McReport parse_csv_report(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        fail_data("malformed-report", "missing header");
    }
    const auto header = split(line, ',');
    if (header.size() < 5 || header[0] != "n" || header[1] != "parameter" || header.back() != "M" ||
        (header.size() - 3) % 4 != 0) {
        fail_data("malformed-report", "unexpected header");
    }
    const std::size_t k = (header.size() - 3) / 4;
    std::vector<McMethod> methods;
    for (std::size_t i = 0; i < k; ++i) {
        const std::string label = header[2 + i].substr(2);
        bool found = false;
        for (McMethod m : kCanonicalOrder) {
            if (method_label(m) == label) {
                methods.push_back(m);
                found = true;
            }
        }
        if (!found) fail_data("malformed-report", "unknown method " + label);
    }
    McReport report;
    std::vector<std::vector<McCell>> by_method(k);
    std::vector<std::size_t> row_n;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != header.size()) fail_data("malformed-report", "row width mismatch");
        for (std::size_t i = 0; i < k; ++i) {
            McCell c;
            c.n = parse_count(f[0]);
            c.parameter = f[1];
            c.method = methods[i];
            c.bias = parse_double(f[2 + i]);
            c.rmse = parse_double(f[2 + k + i]);
            c.se = parse_double(f[2 + 2 * k + i]);
            c.failures = parse_count(f[2 + 3 * k + i]);
            c.replications = parse_count(f.back());
            by_method[i].push_back(c);
        }
    }
    // emit order inside run_mc: n, then method, then parameter
    std::vector<std::size_t> ns;
    for (const auto& c : by_method.empty() ? std::vector<McCell>{} : by_method[0]) {
        if (std::find(ns.begin(), ns.end(), c.n) == ns.end()) ns.push_back(c.n);
    }
    for (std::size_t n : ns) {
        for (std::size_t i = 0; i < k; ++i) {
            for (const McCell& c : by_method[i]) {
                if (c.n == n) report.cells.push_back(c);
            }
        }
    }
    return report;
}

}  // namespace pfar
