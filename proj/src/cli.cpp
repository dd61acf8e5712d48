#include "largen/cli.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "largen/classicality.hpp"
#include "largen/effpot.hpp"
#include "largen/on_model.hpp"
#include "largen/params.hpp"
#include "largen/qvlasov.hpp"

namespace largen::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// 17 significant digits round-trip every double, so reruns are byte-stable.
std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string row(std::initializer_list<double> cells) {
    std::string line;
    for (double x : cells) {
        if (!line.empty()) line += ',';
        line += num(x);
    }
    line += '\n';
    return line;
}

struct OutFile {
    std::string name;
    std::string content;
};

struct Common {
    std::string config_path;
    std::string out_dir = "out";
    long threads = 1;
    double tol_abs = 1e-10;
    double tol_rel = 1e-10;

    numerics::ToleranceSpec tol() const {
        numerics::ToleranceSpec t;
        t.abs_tol = tol_abs;
        t.rel_tol = tol_rel;
        return t;
    }
};

// ---- config plumbing ----

ordered_json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("invalid field: config file not readable: " +
                                    path);
    ordered_json cfg;
    try {
        cfg = ordered_json::parse(in);
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("invalid config: ") + e.what());
    }
    if (!cfg.is_object())
        throw std::invalid_argument("invalid config: top level must be an object");
    return cfg;
}

void reject_unknown(const ordered_json& j,
                    std::initializer_list<const char*> allowed,
                    const char* scope = "") {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument(std::string("unknown config key: ") +
                                        scope + item.key());
    }
}

double get_num(const ordered_json& j, const char* key,
               std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw std::invalid_argument(std::string("invalid field: ") + key +
                                    " is required");
    }
    const auto& v = j.at(key);
    if (!v.is_number())
        throw std::invalid_argument(std::string("invalid field: ") + key +
                                    " must be a number");
    return v.get<double>();
}

long get_count(const ordered_json& j, const char* key,
               std::optional<long> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw std::invalid_argument(std::string("invalid field: ") + key +
                                    " is required");
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer())
        throw std::invalid_argument(std::string("invalid field: ") + key +
                                    " must be an integer");
    return v.get<long>();
}

bool get_flag(const ordered_json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_boolean())
        throw std::invalid_argument(std::string("invalid field: ") + key +
                                    " must be a boolean");
    return v.get<bool>();
}

std::string get_str(const ordered_json& j, const char* key) {
    if (!j.contains(key))
        throw std::invalid_argument(std::string("invalid field: ") + key +
                                    " is required");
    const auto& v = j.at(key);
    if (!v.is_string())
        throw std::invalid_argument(std::string("invalid field: ") + key +
                                    " must be a string");
    return v.get<std::string>();
}

// ---- quantum-roll ----

void cmd_quantum_roll(const Common& c, const ordered_json& cfg,
                      std::vector<OutFile>& files) {
    reject_unknown(cfg, {"N", "g", "y0", "width", "y_max", "points", "dt",
                         "t_end", "steps", "sample_every"});
    LargeNParams params;
    params.N = get_num(cfg, "N", params.N);
    params.g = get_num(cfg, "g", params.g);
    params.y0 = get_num(cfg, "y0", params.y0);
    params.validate();

    on_model::RadialGrid grid;
    grid.y_max = get_num(cfg, "y_max", grid.y_max);
    grid.points = get_count(cfg, "points", grid.points);
    grid.validate();

    const double width = get_num(cfg, "width", 0.5);
    const double dt = get_num(cfg, "dt", 1e-3);
    if (!(dt > 0))
        throw std::invalid_argument("invalid field: dt must be > 0");

    const bool has_t_end = cfg.contains("t_end");
    const bool has_steps = cfg.contains("steps");
    if (has_t_end == has_steps)
        throw std::invalid_argument(
            "invalid field: exactly one of t_end or steps is required");
    long steps;
    if (has_steps) {
        steps = get_count(cfg, "steps");
    } else {
        const double t_end = get_num(cfg, "t_end");
        if (!(t_end > 0))
            throw std::invalid_argument("invalid field: t_end must be > 0");
        steps = std::llround(t_end / dt);
        if (steps < 1)
            throw std::invalid_argument(
                "invalid field: t_end must cover at least one dt step");
    }
    const long sample_every = get_count(cfg, "sample_every", 10);

    const auto run =
        on_model::evolve_quantum_roll(grid, params, width, dt, steps,
                                      sample_every);
    (void)c;

    std::string csv = "t,y2,norm,energy\n";
    for (const auto& s : run.series) csv += row({s.t, s.y2, s.norm, s.energy});
    files.push_back({"roll.csv", std::move(csv)});
}

// ---- effpot-scan ----

void cmd_effpot_scan(const Common& c, const ordered_json& cfg,
                     std::vector<OutFile>& files, std::string& summary_line) {
    reject_unknown(cfg, {"g", "y0", "N_lo", "N_hi", "N_points", "y_hi",
                         "profile_N", "profile_points"});
    const double g = get_num(cfg, "g", 1.0);
    const double y0 = get_num(cfg, "y0", 1.0);
    const double N_lo = get_num(cfg, "N_lo", 2.0);
    const double N_hi = get_num(cfg, "N_hi", 200.0);
    const long n_points = get_count(cfg, "N_points", 50);
    const double y_hi = get_num(cfg, "y_hi", 6.0);
    if (!(N_hi >= N_lo))
        throw std::invalid_argument("invalid field: N_hi must be >= N_lo");
    if (n_points < 1)
        throw std::invalid_argument("invalid field: N_points must be >= 1");
    if (!(y_hi > 0))
        throw std::invalid_argument("invalid field: y_hi must be > 0");
    LargeNParams probe{N_lo, g, y0};
    probe.validate();
    const auto tol = c.tol();

    std::vector<double> Ns(n_points), y_mins(n_points);
    for (long i = 0; i < n_points; ++i)
        Ns[i] = n_points == 1
                    ? N_lo
                    : N_lo + (N_hi - N_lo) * static_cast<double>(i) /
                                 static_cast<double>(n_points - 1);

    // Each slot is written by exactly one worker, so the result (and the
    // file bytes) cannot depend on the thread count or the schedule.
    const long workers = std::min(c.threads, n_points);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    auto work = [&](long tid) {
        try {
            for (long i = tid; i < n_points; i += workers)
                y_mins[i] = effpot::find_y_min({Ns[i], g, y0}, tol, y_hi);
        } catch (...) {
            errors[static_cast<std::size_t>(tid)] = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (long tid = 0; tid < workers; ++tid) pool.emplace_back(work, tid);
        for (auto& t : pool) t.join();
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    std::string csv = "N,y_min\n";
    for (long i = 0; i < n_points; ++i)
        csv += row({Ns[i], y_mins[i]});
    files.push_back({"nmin.csv", std::move(csv)});

    if (y_mins.front() == 0.0)
        summary_line = "N_c=<=" + num(N_lo);
    else if (y_mins.back() > 0.0)
        summary_line = "N_c=>" + num(N_hi);
    else
        summary_line = "N_c=" + num(effpot::scan_Nc({N_lo, g, y0}, N_lo, N_hi,
                                                    tol));
    files.push_back({"summary.txt", summary_line + "\n"});

    if (cfg.contains("profile_N")) {
        const double profile_N = get_num(cfg, "profile_N");
        const long profile_points = get_count(cfg, "profile_points", 201);
        if (profile_points < 2)
            throw std::invalid_argument(
                "invalid field: profile_points must be >= 2");
        LargeNParams pp{profile_N, g, y0};
        pp.validate();
        std::string profile = "y,chi,V_per_N,defined\n";
        for (long j = 0; j < profile_points; ++j) {
            const double y = y_hi * static_cast<double>(j) /
                             static_cast<double>(profile_points - 1);
            const auto sol = effpot::v_eff_nlo(y, pp, tol);
            profile += row({y, sol.defined ? sol.chi : kNan,
                            sol.defined ? sol.v_eff_per_N : kNan,
                            sol.defined ? 1.0 : 0.0});
        }
        files.push_back({"profile.csv", std::move(profile)});
    } else if (cfg.contains("profile_points")) {
        throw std::invalid_argument(
            "invalid field: profile_points requires profile_N");
    }
}

// ---- schwinger ----

void cmd_schwinger(const Common& c, const ordered_json& cfg,
                   std::vector<OutFile>& files) {
    reject_unknown(cfg, {"e", "m", "E0", "n_init", "cutoff", "grid", "t_end",
                         "dt_out", "modes"});
    qvlasov::SchwingerParams params;
    params.e = get_num(cfg, "e", params.e);
    params.m = get_num(cfg, "m", params.m);
    params.E0 = get_num(cfg, "E0");
    params.n_init = get_num(cfg, "n_init", params.n_init);
    params.cutoff = get_num(cfg, "cutoff", params.cutoff);
    params.validate();

    double kz_min = -6.0, kz_max = 6.0, kperp_max = 3.0;
    long kz_count = 64, kperp_count = 16;
    if (cfg.contains("grid")) {
        const auto& g = cfg.at("grid");
        if (!g.is_object())
            throw std::invalid_argument("invalid field: grid must be an object");
        reject_unknown(
            g, {"kz_min", "kz_max", "kz_count", "kperp_max", "kperp_count"},
            "grid.");
        kz_min = get_num(g, "kz_min", kz_min);
        kz_max = get_num(g, "kz_max", kz_max);
        kz_count = get_count(g, "kz_count", kz_count);
        kperp_max = get_num(g, "kperp_max", kperp_max);
        kperp_count = get_count(g, "kperp_count", kperp_count);
    }
    const double t_end = get_num(cfg, "t_end");
    const double dt_out = get_num(cfg, "dt_out");
    if (!(t_end > 0))
        throw std::invalid_argument("invalid field: t_end must be > 0");
    if (!(dt_out > 0) || dt_out > t_end)
        throw std::invalid_argument(
            "invalid field: dt_out must be in (0, t_end]");
    const bool want_modes = get_flag(cfg, "modes", false);

    const auto grid = qvlasov::make_momentum_grid(kz_min, kz_max, kz_count,
                                                  kperp_max, kperp_count);
    const long samples = std::llround(t_end / dt_out) + 1;
    const auto run =
        qvlasov::evolve_schwinger(grid, params, t_end, samples, c.tol());

    std::string csv = "t,A,E,j,S_total,energy_total\n";
    for (const auto& s : run.series)
        csv += row({s.t, s.A, s.E, s.j, s.S_total, s.energy_total});
    files.push_back({"series.csv", std::move(csv)});

    if (want_modes) {
        std::string modes = "t,kz,kperp,n_tilde,abs_corr\n";
        for (const auto& m : run.modes)
            modes += row({m.t, m.kz, m.kperp, m.n_tilde, m.abs_corr});
        files.push_back({"modes.csv", std::move(modes)});
    }

    const double q0 = run.series.front().energy_total;
    double drift = 0;
    for (const auto& s : run.series)
        drift = std::max(drift, std::abs(s.energy_total - q0));
    if (q0 != 0) drift /= std::abs(q0);

    ordered_json summary;
    summary["S_initial"] = run.series.front().S_total;
    summary["S_final"] = run.series.back().S_total;
    summary["energy_drift"] = drift;
    summary["particle_yield"] = run.particle_yield;
    files.push_back({"summary.json", summary.dump(2) + "\n"});
}

// ---- classicality ----

void cmd_classicality(const Common& c, const ordered_json& cfg,
                      std::vector<OutFile>& files) {
    const std::string preset = get_str(cfg, "preset");
    const auto tol = c.tol();

    std::vector<const char*> allowed = {"preset", "t_end", "samples"};
    if (preset == "ground-state") {
        allowed.push_back("omega");
    } else if (preset == "thermal") {
        allowed.push_back("omega");
        allowed.push_back("theta0");
    } else if (preset == "inverted-oscillator") {
        allowed.push_back("kappa");
    } else if (preset == "schwinger-mode") {
        for (const char* k : {"kz", "kperp", "e", "m", "E0"})
            allowed.push_back(k);
    } else {
        throw std::invalid_argument(
            "invalid field: preset must be one of ground-state|thermal|"
            "inverted-oscillator|schwinger-mode");
    }
    for (const auto& item : cfg.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument("unknown config key: " + item.key());
    }

    const double t_end = get_num(cfg, "t_end");
    if (!(t_end > 0))
        throw std::invalid_argument("invalid field: t_end must be > 0");
    const long samples = get_count(cfg, "samples", 101);
    if (samples < 2)
        throw std::invalid_argument("invalid field: samples must be >= 2");
    auto sample_time = [&](long k) {
        return t_end * static_cast<double>(k) / static_cast<double>(samples - 1);
    };

    std::string csv = "t,kz,kperp,U,rho_xp,squeeze_r\n";
    if (preset == "ground-state" || preset == "thermal") {
        const double omega = get_num(cfg, "omega", 1.0);
        if (!(omega > 0))
            throw std::invalid_argument("invalid field: omega must be > 0");
        classicality::ThermalSpec thermal;
        if (preset == "thermal") thermal.theta0 = get_num(cfg, "theta0");
        thermal.validate();
        qvlasov::Profile flat = [omega](double) { return omega; };
        auto state = qvlasov::adiabatic_vacuum_state(omega);
        for (long k = 0; k < samples; ++k) {
            if (k > 0)
                state = qvlasov::evolve_mode(flat, state, sample_time(k - 1),
                                             sample_time(k), tol);
            const auto cov = classicality::mode_variances(state, thermal);
            const auto pair = qvlasov::project_bogoliubov(state, omega);
            csv += row({sample_time(k), kNan, kNan,
                        classicality::uncertainty_function(cov),
                        classicality::correlation_coefficient(cov),
                        classicality::squeeze_parameters(pair).r});
        }
    } else if (preset == "inverted-oscillator") {
        // Constant negative omega^2: the closed-form mode function replaces
        // the adiabatic machinery, so the Bogoliubov column has no meaning.
        const double kappa = get_num(cfg, "kappa");
        for (long k = 0; k < samples; ++k) {
            const auto state =
                classicality::inverted_mode_state(kappa, sample_time(k));
            const auto cov = classicality::mode_variances(state);
            csv += row({sample_time(k), kNan, kNan,
                        classicality::uncertainty_function(cov),
                        classicality::correlation_coefficient(cov), kNan});
        }
    } else {
        // One mode in a steady external field E0: A(t) = -E0 t.
        qvlasov::SchwingerParams params;
        params.e = get_num(cfg, "e", params.e);
        params.m = get_num(cfg, "m", params.m);
        params.E0 = get_num(cfg, "E0");
        params.validate();
        const double kz = get_num(cfg, "kz");
        const double kperp = get_num(cfg, "kperp");
        qvlasov::Profile drift = [=](double t) {
            return qvlasov::mode_frequency(kz, kperp, -params.E0 * t, params);
        };
        auto state = qvlasov::adiabatic_vacuum_state(drift(0.0));
        for (long k = 0; k < samples; ++k) {
            if (k > 0)
                state = qvlasov::evolve_mode(drift, state, sample_time(k - 1),
                                             sample_time(k), tol);
            const auto cov = classicality::mode_variances(state);
            const auto pair =
                qvlasov::project_bogoliubov(state, drift(sample_time(k)));
            csv += row({sample_time(k), kz, kperp,
                        classicality::uncertainty_function(cov),
                        classicality::correlation_coefficient(cov),
                        classicality::squeeze_parameters(pair).r});
        }
    }
    files.push_back({"report.csv", std::move(csv)});
}

void write_outputs(const std::string& dir, const std::vector<OutFile>& files) {
    const fs::path base(dir);
    fs::create_directories(base);
    for (const auto& f : files) {
        std::ofstream out(base / f.name, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + (base / f.name).string());
        out << f.content;
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"largen: quantum roll, large-N effective potential, and "
                 "Schwinger pair-creation laboratory"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON config file")
            ->required();
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--threads", common.threads,
                        "worker threads for scan commands")
            ->envname("LARGEN_THREADS");
        sub->add_option("--tol-abs", common.tol_abs, "absolute tolerance");
        sub->add_option("--tol-rel", common.tol_rel, "relative tolerance");
    };
    auto* roll = app.add_subcommand(
        "quantum-roll", "evolve the radial packet, write t,y2,norm,energy");
    auto* scan = app.add_subcommand(
        "effpot-scan", "scan y_min against N and bracket the threshold N_c");
    auto* schwinger = app.add_subcommand(
        "schwinger", "pair creation with backreaction on the electric field");
    auto* classic = app.add_subcommand(
        "classicality", "uncertainty and correlation report for one mode");
    for (auto* sub : {roll, scan, schwinger, classic}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (common.threads < 1)
            throw std::invalid_argument("invalid field: threads must be >= 1");
        common.tol().validate();
        const auto cfg = load_config(common.config_path);

        std::vector<OutFile> files;
        std::string summary_line;
        if (roll->parsed())
            cmd_quantum_roll(common, cfg, files);
        else if (scan->parsed())
            cmd_effpot_scan(common, cfg, files, summary_line);
        else if (schwinger->parsed())
            cmd_schwinger(common, cfg, files);
        else
            cmd_classicality(common, cfg, files);

        write_outputs(common.out_dir, files);
        if (!summary_line.empty()) std::printf("%s\n", summary_line.c_str());
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 3;
    }
}

}  // namespace largen::cli
