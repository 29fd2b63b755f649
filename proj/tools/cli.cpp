#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfar/error.hpp"
#include "pfar/fit.hpp"
#include "pfar/io.hpp"
#include "pfar/mc.hpp"
#include "pfar/onestep.hpp"

namespace pfar::cli {

namespace {

using nlohmann::json;

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::usage: return "usage";
        case ErrorKind::data: return "data";
        case ErrorKind::numerical: return "numerical";
    }
    return "unknown";
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// key=value lines become --key=value arguments; '#' starts a comment.
std::vector<std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail_usage("config-unreadable", "cannot read config file '" + path + "'");
    }
    std::vector<std::string> args;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail_usage("config-malformed", "config line without '=': " + line);
        }
        args.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
    }
    return args;
}

std::vector<std::string> expand_defaults(const std::vector<std::string>& args) {
    if (args.size() < 2) return args;
    std::vector<std::string> out{args[0], args[1]};
    if (const char* w = std::getenv("PFAR_WORKERS"); w && *w && (args[1] == "mc")) {
        out.push_back(std::string("--workers=") + w);
    }
    for (std::size_t i = 2; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
        if (!path.empty()) {
            const auto cfg = read_config(path);
            out.insert(out.end(), cfg.begin(), cfg.end());
        }
    }
    for (std::size_t i = 2; i < args.size(); ++i) {
        if (args[i] == "--config") {
            ++i;
            continue;
        }
        if (args[i].rfind("--config=", 0) == 0) continue;
        out.push_back(args[i]);
    }
    return out;
}

json estimate_json(const ThetaEstimate& e) {
    const auto& d = e.diagnostics;
    return json{{"phi", e.phi_hat},
                {"hurst", e.hurst_hat},
                {"method", to_string(e.method)},
                {"m_used", e.m_used},
                {"diagnostics",
                 {{"hurst_raw", d.hurst_raw},
                  {"hurst_clamped", d.hurst_clamped},
                  {"projected", d.projected},
                  {"gph_residual_scale", d.gph_residual_scale},
                  {"glse_condition", d.glse_condition},
                  {"info_condition", d.info_condition},
                  {"n_z", d.n_z},
                  {"rows", d.rows}}}};
}

PfarParams make_params(const std::vector<double>& phi, double hurst, std::optional<int> period) {
    if (period && static_cast<std::size_t>(*period) != phi.size()) {
        fail_usage("invalid-period", "--period disagrees with the number of --phi values");
    }
    return PfarParams(phi, HurstIndex(hurst));
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text_file(path, text);
    }
}

SeriesSample load_series(const std::string& path, int period, std::size_t aggregate) {
    std::vector<double> v = read_series_csv(path);
    if (aggregate > 1) v = block_average(v, aggregate);
    SeriesSample s;
    s.values = std::move(v);
    s.period = period;
    s.origin_index = 1;
    return s;
}

struct Options {
    std::vector<double> phi;
    double hurst = 0.5;
    std::optional<int> period;
    std::size_t n = 0;
    std::vector<std::size_t> n_list;
    std::uint64_t seed = 1;
    std::optional<std::size_t> burn;
    std::string in;
    std::string out;
    double delta = kDefaultDelta;
    bool onestep = false;
    std::optional<double> pin_hurst;
    std::vector<std::string> models{"pfar", "par", "far"};
    std::vector<std::string> methods{"initial", "onestep"};
    std::size_t workers = 1;
    std::size_t reps = 200;
    bool full = false;
    std::string format;
    std::size_t aggregate = 1;
    std::size_t grid = 256;
    std::string phi_hurst = "estimated";
    std::string alt_cov = "seasonal";
    bool quiet = false;
    std::string config;  // consumed before parsing
};

int cmd_simulate(const Options& o, std::ostream& out) {
    const PfarParams p = make_params(o.phi, o.hurst, o.period);
    const SeriesSample s = simulate_pfar(p, o.n, o.seed, o.burn);
    std::ostringstream text;
    write_series_csv(text, s.values);
    emit(text.str(), o.out, out);
    return 0;
}

int cmd_estimate(const Options& o, std::ostream& out) {
    const int period = o.period.value_or(2);
    const SeriesSample s = load_series(o.in, period, o.aggregate);
    if (o.onestep && period != 2) {
        fail_usage("unsupported-period", "--onestep is available for period 2 only");
    }
    InitialOptions opts;
    opts.delta = o.delta;
    opts.phi_hurst = o.pin_hurst;
    const ThetaEstimate ie = initial_estimate(s, opts);
    json j = estimate_json(ie);
    j["schema"] = 1;
    j["period"] = period;
    j["n"] = s.size();
    if (o.onestep) {
        j["onestep"] = estimate_json(one_step(ie, aggregate_z(s).values));
    }
    emit(j.dump(2) + "\n", o.out, out);
    return 0;
}

int cmd_fit(const Options& o, std::ostream& out) {
    const int period = o.period.value_or(2);
    const SeriesSample s = load_series(o.in, period, o.aggregate);
    FitOptions fo;
    fo.delta = o.delta;
    std::vector<FitResult> results;
    for (const auto& m : o.models) {
        results.push_back(fit_model(s, parse_fit_model(m), fo));
    }
    const std::string fmt = o.format.empty() ? "markdown" : o.format;
    std::ostringstream text;
    if (fmt == "json") {
        json arr = json::array();
        for (const auto& r : results) {
            json params = json::object();
            for (const auto& [k, v] : r.parameters) params[k] = v;
            arr.push_back({{"model", to_string(r.model)},
                           {"method", r.method},
                           {"parameters", params},
                           {"rmse", r.rmse},
                           {"mae", r.mae},
                           {"n_used", r.n_used}});
        }
        text << json{{"schema", 1}, {"period", period}, {"n", s.size()}, {"fits", arr}}.dump(2) << "\n";
    } else if (fmt == "csv" || fmt == "markdown") {
        const bool md = fmt == "markdown";
        auto row = [&](const std::vector<std::string>& f) {
            if (md) text << '|';
            for (std::size_t i = 0; i < f.size(); ++i) text << (md ? " " : (i ? "," : "")) << f[i] << (md ? " |" : "");
            text << '\n';
        };
        row({"model", "method", "parameters", "rmse", "mae", "n_used"});
        if (md) row({"---", "---", "---", "---:", "---:", "---:"});
        for (const auto& r : results) {
            std::string params;
            for (const auto& [k, v] : r.parameters) params += (params.empty() ? "" : ";") + k + "=" + format_double(v);
            row({to_string(r.model), r.method, params, format_double(r.rmse), format_double(r.mae),
                 std::to_string(r.n_used)});
        }
    } else {
        fail_usage("invalid-format", "unknown format '" + fmt + "'");
    }
    emit(text.str(), o.out, out);
    return 0;
}

McMethod parse_method(const std::string& m) {
    if (m == "initial") return McMethod::initial;
    if (m == "onestep") return McMethod::onestep;
    if (m == "alt-initial") return McMethod::alt_initial;
    fail_usage("invalid-method", "unknown method '" + m + "'");
}

int cmd_mc(const Options& o, std::ostream& out, std::ostream& err) {
    McConfig cfg;
    cfg.theta_true = make_params(o.phi, o.hurst, o.period);
    cfg.n_list = o.n_list;
    cfg.replications = o.full ? 1000 : o.reps;
    cfg.delta = o.delta;
    cfg.master_seed = o.seed;
    cfg.methods.clear();
    for (const auto& m : o.methods) cfg.methods.push_back(parse_method(m));
    cfg.worker_count = o.workers;
    if (o.phi_hurst == "true") {
        cfg.phi_hurst = PhiHurst::truth;
    } else if (o.phi_hurst != "estimated") {
        fail_usage("invalid-option", "--phi-hurst must be 'estimated' or 'true'");
    }
    if (o.alt_cov == "unit-lag") {
        cfg.alt_covariance = AltCovariance::unit_lag;
    } else if (o.alt_cov != "seasonal") {
        fail_usage("invalid-option", "--alt-cov must be 'seasonal' or 'unit-lag'");
    }
    if (!o.quiet) {
        cfg.progress = [&err, total = cfg.replications](std::size_t done, std::size_t) {
            if (done % 50 == 0 || done == total) {
                err << "mc: " << done << "/" << total << " replications\n";
            }
        };
    }
    const std::string fmt = o.format.empty() ? "csv" : o.format;
    if (fmt != "csv" && fmt != "markdown") {
        fail_usage("invalid-format", "unknown format '" + fmt + "'");
    }
    const McReport report = run_mc(cfg);
    emit(emit_tables(report, fmt == "csv" ? TableFormat::csv : TableFormat::markdown), o.out, out);
    return 0;
}

int cmd_spectra(const Options& o, std::ostream& out) {
    const PfarParams p = make_params(o.phi, o.hurst, o.period);
    if (o.grid < 8) {
        fail_usage("invalid-grid", "grid size must be at least 8");
    }
    const int period = p.period();
    std::ostringstream text;
    text << "lambda,f_eps";
    for (int u = 1; u <= period; ++u) text << ",subseq_" << u;
    if (period == 2) text << ",p_z";
    text << '\n';
    for (std::size_t i = 1; i <= o.grid; ++i) {
        const double lam = std::numbers::pi * static_cast<double>(i) / static_cast<double>(o.grid);
        text << format_double(lam) << ',' << format_double(fgn_spectral_density(p.hurst(), lam));
        for (int u = 1; u <= period; ++u) text << ',' << format_double(subseq_spectral_density(p, u, lam));
        if (period == 2) text << ',' << format_double(z_spectral_density(p, lam));
        text << '\n';
    }
    emit(text.str(), o.out, out);
    return 0;
}

void print_error(const Error& e, bool as_json, std::ostream& out, std::ostream& err) {
    err << "error [" << e.code() << "]: " << e.what() << '\n';
    if (as_json) {
        out << json{{"schema", 1}, {"error", {{"code", e.code()}, {"kind", kind_name(e.kind())}, {"message", e.what()}}}}
                   .dump(2)
            << '\n';
    }
}

}  // namespace

int run(std::vector<std::string> raw, std::ostream& out, std::ostream& err) {
    CLI::App app{"Periodic fractional autoregression: simulation, estimation, Monte Carlo"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Options o;

    auto add_config = [&o](CLI::App* sub) {
        sub->add_option("--config", o.config, "key=value file; explicit flags take precedence");
    };
    auto add_model = [&o](CLI::App* sub, bool required) {
        auto* phi = sub->add_option("--phi", o.phi, "seasonal coefficients, comma separated")->delimiter(',');
        if (required) phi->required();
        sub->add_option("--hurst", o.hurst, "Hurst index in (0, 1)");
        sub->add_option("--period", o.period, "period T (defaults to the number of coefficients)");
    };

    auto* sim = app.add_subcommand("simulate", "simulate a PFAR(1) path to CSV");
    add_model(sim, true);
    add_config(sim);
    sim->add_option("--n", o.n, "number of observations")->required();
    sim->add_option("--seed", o.seed, "64-bit seed");
    sim->add_option("--burn", o.burn, "burn-in length (default: geometric-decay rule)");
    sim->add_option("--out", o.out, "output path (default stdout)");

    auto* est = app.add_subcommand("estimate", "initial (and optionally one-step) estimates, JSON");
    add_config(est);
    est->add_option("input", o.in, "CSV with header t,value")->required();
    est->add_option("--period", o.period, "period T (default 2)");
    est->add_option("--delta", o.delta, "GPH bandwidth exponent");
    est->add_flag("--onestep", o.onestep, "also report the one-step refinement (T = 2)");
    est->add_option("--hurst", o.pin_hurst, "use this H in the coefficient stage instead of the GPH value");
    est->add_option("--aggregate", o.aggregate, "average consecutive groups of this many values first");
    est->add_option("--out", o.out, "output path (default stdout)");

    auto* fit = app.add_subcommand("fit", "fit PFAR, PAR and FAR models; one-step-ahead RMSE/MAE");
    add_config(fit);
    fit->add_option("input", o.in, "CSV with header t,value")->required();
    fit->add_option("--period", o.period, "period T (default 2)");
    fit->add_option("--models", o.models, "subset of pfar,par,far")->delimiter(',');
    fit->add_option("--delta", o.delta, "GPH bandwidth exponent");
    fit->add_option("--aggregate", o.aggregate, "average consecutive groups of this many values first");
    fit->add_option("--format", o.format, "markdown (default), csv or json");
    fit->add_option("--out", o.out, "output path (default stdout)");

    auto* mc = app.add_subcommand("mc", "Monte Carlo bias/RMSE tables");
    add_model(mc, true);
    add_config(mc);
    mc->add_option("--n", o.n_list, "sample sizes in cycles, comma separated")->delimiter(',')->required();
    mc->add_option("--reps", o.reps, "replications (default 200)");
    mc->add_flag("--full", o.full, "use 1000 replications");
    mc->add_option("--delta", o.delta, "GPH bandwidth exponent");
    mc->add_option("--seed", o.seed, "master seed");
    mc->add_option("--methods", o.methods, "subset of initial,onestep,alt-initial")->delimiter(',');
    mc->add_option("--workers", o.workers, "worker threads (env PFAR_WORKERS)");
    mc->add_option("--phi-hurst", o.phi_hurst, "H used by the coefficient stage: estimated or true");
    mc->add_option("--alt-cov", o.alt_cov, "ratio-estimator covariance: seasonal or unit-lag");
    mc->add_option("--format", o.format, "csv (default) or markdown");
    mc->add_option("--out", o.out, "output path (default stdout)");
    mc->add_flag("--quiet", o.quiet, "no progress lines");

    auto* spec = app.add_subcommand("spectra", "spectral densities on a grid over (0, pi]");
    add_model(spec, true);
    add_config(spec);
    spec->add_option("--grid", o.grid, "number of grid points (>= 8)");
    spec->add_option("--out", o.out, "output path (default stdout)");

    const bool json_errors = raw.size() > 1 && (raw[1] == "estimate");
    try {
        std::vector<std::string> args = expand_defaults(raw);
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
        if (o.workers == 0) {
            fail_usage("invalid-option", "--workers must be positive");
        }
        if (*sim) return cmd_simulate(o, out);
        if (*est) return cmd_estimate(o, out);
        if (*fit) return cmd_fit(o, out);
        if (*mc) return cmd_mc(o, out, err);
        if (*spec) return cmd_spectra(o, out);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::usage);
    } catch (const Error& e) {
        print_error(e, json_errors, out, err);
        return static_cast<int>(e.kind());
    }
    return static_cast<int>(ErrorKind::usage);
}

}  // namespace pfar::cli
