#pragma once

// Command-line front end. Every command simulates its own paths from the
// run configuration, writes plain CSV plus a manifest, and exits with
// 0 (pass), 1 (test failure) or 2 (configuration error).

#include "ammfd/amm.hpp"
#include "ammfd/battery.hpp"
#include "ammfd/localtime.hpp"
#include "ammfd/parallel.hpp"
#include "ammfd/paths.hpp"
#include "ammfd/stats.hpp"
#include "ammfd/timechange.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ammfd::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kSchema = 1;
inline constexpr std::string_view kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::optional<double> gamma;
    std::optional<double> c;
    double dt = 1e-4;
    double horizon = 1.0;
    std::optional<std::size_t> n_paths;
    std::uint64_t master_seed = 1;
    double bandwidth_mult = 5.0;
    std::optional<double> level_padding;
    std::string output_dir = "out";
    std::optional<std::size_t> k;
    double ell_step = 0.05;
    std::optional<double> tol;
    std::size_t holdings = 0;
    bool inject_fault = false;
    bool exact_only = false;

    /// Neither gamma nor c given means c = 0.25.
    FeeParams fee() const { return gamma ? FeeParams::from_gamma(*gamma) : FeeParams::from_c(c.value_or(0.25)); }
    std::size_t paths() const { return n_paths.value_or(1); }
    std::size_t steps() const { return steps_for_horizon(horizon, dt); }
    double bandwidth() const { return default_bandwidth(dt, bandwidth_mult); }
    double padding() const { return level_padding.value_or(2.0 * fee().c()); }
    double tolerance() const { return tol.value_or(grid_tolerance(dt)); }
};

inline void validate(RunConfig const& cfg)
{
    if (cfg.gamma && cfg.c) {
        throw ConfigError("give either --gamma or --c, not both");
    }
    if (cfg.gamma && !(*cfg.gamma > 0.0 && *cfg.gamma < 1.0)) {
        throw ConfigError("gamma must lie in (0, 1); gamma = 1 would make c = 0");
    }
    if (cfg.c && !(*cfg.c > 0.0 && std::isfinite(*cfg.c))) {
        throw ConfigError("c must be positive");
    }
    if (!(cfg.dt > 0.0)) {
        throw ConfigError("dt must be positive");
    }
    if (!(cfg.horizon >= cfg.dt)) {
        throw ConfigError("horizon must be at least dt");
    }
    if (cfg.n_paths && *cfg.n_paths < 1) {
        throw ConfigError("paths must be at least 1");
    }
    if (!(cfg.bandwidth_mult > 0.0)) {
        throw ConfigError("bandwidth-mult must be positive");
    }
    if (cfg.level_padding && !(*cfg.level_padding >= 0.0)) {
        throw ConfigError("level-padding must be nonnegative");
    }
    if (cfg.k && *cfg.k < 1) {
        throw ConfigError("k must be at least 1");
    }
    if (!(cfg.ell_step > 0.0)) {
        throw ConfigError("ell-step must be positive");
    }
    if (cfg.tol && !(*cfg.tol >= 0.0)) {
        throw ConfigError("tol must be nonnegative");
    }
}

/// Round-trip text for a double (17 significant digits).
inline std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Compact text for log lines.
inline std::string brief(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::string_view header) { buf_.append(header).push_back('\n'); }

    template <typename... Cells>
    void row(Cells const&... cells)
    {
        bool first = true;
        ((buf_.append(first ? "" : ","), buf_.append(cell(cells)), first = false), ...);
        buf_.push_back('\n');
    }

    std::string const& str() const noexcept { return buf_; }

private:
    static std::string cell(double x) { return num(x); }
    static std::string cell(std::size_t x) { return std::to_string(x); }
    static std::string cell(int x) { return std::to_string(x); }

    std::string buf_;
};

/// SHA-1 of "blob <size>\0<bytes>", as `git hash-object` computes it.
inline std::string git_blob_sha1(std::string_view bytes)
{
    std::string const header = "blob " + std::to_string(bytes.size()) + '\0';
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    bool const ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) &&
                    EVP_DigestUpdate(ctx, header.data(), header.size()) &&
                    EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) && EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    if (!ok) {
        throw std::runtime_error("sha1 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

using Json = nlohmann::ordered_json;

inline Json config_json(RunConfig const& cfg)
{
    auto const fee = cfg.fee();
    Json j;
    j["command"] = cfg.command;
    j["gamma"] = fee.gamma();
    j["c"] = fee.c();
    j["dt"] = cfg.dt;
    j["horizon"] = cfg.horizon;
    j["paths"] = cfg.paths();
    j["seed"] = cfg.master_seed;
    j["bandwidth_mult"] = cfg.bandwidth_mult;
    j["level_padding"] = cfg.padding();
    j["k"] = cfg.k ? Json(*cfg.k) : Json(nullptr);
    j["ell_step"] = cfg.ell_step;
    j["tol"] = cfg.tolerance();
    j["holdings"] = cfg.holdings;
    j["inject_fault"] = cfg.inject_fault;
    j["exact_only"] = cfg.exact_only;
    return j;
}

/// Collects outputs under one directory and writes the manifest last.
class OutputSet {
public:
    explicit OutputSet(RunConfig const& cfg) : cfg_{cfg}, root_{cfg.output_dir}
    {
        std::filesystem::create_directories(root_);
    }

    void write(std::string const& relative, std::string const& bytes)
    {
        auto const path = root_ / relative;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream f{path, std::ios::binary};
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f) {
            throw std::runtime_error("cannot write " + path.string());
        }
        Json entry;
        entry["path"] = relative;
        entry["bytes"] = bytes.size();
        entry["sha1"] = git_blob_sha1(bytes);
        files_.push_back(std::move(entry));
    }

    void write_json(std::string const& relative, Json const& j) { write(relative, j.dump(2) + "\n"); }

    void finish()
    {
        Json m;
        m["schema"] = kSchema;
        m["tool"] = "ammfd";
        m["version"] = kVersion;
        m["config"] = config_json(cfg_);
        m["files"] = files_;
        std::ofstream f{root_ / "manifest.json", std::ios::binary};
        f << m.dump(2) << "\n";
    }

    std::filesystem::path const& root() const noexcept { return root_; }

private:
    RunConfig const& cfg_;
    std::filesystem::path root_;
    Json files_ = Json::array();
};

inline std::string path_name(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "path_%05zu", i);
    return buf;
}

inline Json result_json(TestResult const& r)
{
    Json j;
    j["description"] = r.description;
    j["statistic"] = r.statistic;
    j["threshold"] = r.threshold;
    j["n"] = r.n;
    j["pass"] = r.pass;
    return j;
}

inline Json violations_json(ViolationReport const& v)
{
    return Json{{"a", v.a}, {"b", v.b}, {"c", v.c}, {"d", v.d}};
}

inline int cmd_simulate(RunConfig const& cfg, std::ostream& log)
{
    auto const fee = cfg.fee();
    OutputSet out{cfg};
    auto const csvs = parallel_map(cfg.paths(), [&](std::size_t i) {
        auto const B = simulate_brownian(cfg.steps(), cfg.dt, {cfg.master_seed, i});
        auto const cons = construct_amm_path(B, fee);
        CsvWriter csv{"t,B,U,lower,upper"};
        for (std::size_t j = 0; j < B.size(); ++j) {
            csv.row(B.time(j), B[j], cons.U[j], B[j] - fee.c(), B[j] + fee.c());
        }
        Json s;
        s["event_A"] = cons.event_A;
        s["num_stopping_times"] = cons.stopping_indices.size();
        s["violations"] = violations_json(check_skorokhod(cons, fee, cfg.tolerance()));
        return std::pair{csv.str(), s};
    });
    Json summary = Json::array();
    for (std::size_t i = 0; i < csvs.size(); ++i) {
        out.write(path_name(i) + ".csv", csvs[i].first);
        summary.push_back(csvs[i].second);
    }
    out.write_json("summary.json", Json{{"schema", kSchema}, {"paths", summary}});
    out.finish();
    log << "wrote " << csvs.size() << " paths to " << out.root().string() << "\n";
    return kExitPass;
}

inline int cmd_verify(RunConfig const& cfg, std::ostream& log)
{
    auto const fee = cfg.fee();
    double const tol = cfg.tolerance();
    auto const reports = parallel_map(cfg.paths(), [&](std::size_t i) {
        auto const B = simulate_brownian(cfg.steps(), cfg.dt, {cfg.master_seed, i});
        auto const cons = construct_amm_path(B, fee);
        if (!(cfg.inject_fault && i == 0)) {
            return check_skorokhod(cons, fee, tol);
        }
        // push U out of the band by 0.1 + tol at the midpoint
        std::vector<double> u(cons.U.values().begin(), cons.U.values().end());
        std::size_t const mid = u.size() / 2;
        u[mid] = B[mid] + fee.c() + tol + 0.1;
        return check_skorokhod(B, SamplePath{B.dt(), std::move(u)}, fee, tol);
    });
    ViolationReport worst;
    std::size_t failing = 0;
    for (auto const& r : reports) {
        worst.merge(r);
        failing += r.within(tol) ? 0 : 1;
    }
    bool const pass = worst.within(tol);

    Json rep;
    rep["schema"] = kSchema;
    rep["tol"] = tol;
    rep["paths"] = reports.size();
    rep["failing_paths"] = failing;
    rep["violations"] = violations_json(worst);
    rep["first_failure"] = std::string{worst.first_failure(tol)};
    rep["pass"] = pass;
    OutputSet out{cfg};
    out.write_json("verify.json", rep);
    out.finish();

    if (pass) {
        log << "PASS: all four properties within tol " << brief(tol) << " over " << reports.size() << " paths\n";
        return kExitPass;
    }
    std::string_view const name = worst.first_failure(tol);
    double const value = name == "a" ? worst.a : name == "b" ? worst.b : name == "c" ? worst.c : worst.d;
    log << "FAIL: property (" << name << ") violated by " << brief(value) << " > tol " << brief(tol) << " on "
        << failing << " of " << reports.size() << " paths\n";
    return kExitFail;
}

inline int cmd_decompose(RunConfig const& cfg, std::ostream& log)
{
    auto const fee = cfg.fee();
    OutputSet out{cfg};
    auto const csvs = parallel_map(cfg.paths(), [&](std::size_t i) {
        auto const W = simulate_brownian(cfg.steps(), cfg.dt, {cfg.master_seed, i});
        auto const d = build_decomposition(W, fee, cfg.bandwidth(), cfg.padding());
        auto const L = additive_functional(d.ltf);
        CsvWriter csv{"t,W,F(W),V,beta,Lcal"};
        for (std::size_t j = 0; j < W.size(); ++j) {
            csv.row(W.time(j), W[j], d.FW[j], d.V[j], d.beta[j], L[j]);
        }
        return csv.str();
    });
    for (std::size_t i = 0; i < csvs.size(); ++i) {
        out.write(path_name(i) + ".csv", csvs[i]);
    }
    out.finish();
    log << "wrote " << csvs.size() << " decompositions to " << out.root().string() << "\n";
    return kExitPass;
}

inline int cmd_chain(RunConfig const& cfg, std::ostream& log)
{
    auto const fee = cfg.fee();
    struct PathOut {
        EmbeddedChain chain;
        std::string chain_csv;
        std::string inverse_csv;
    };
    auto const results = parallel_map(cfg.paths(), [&](std::size_t i) {
        auto const W = simulate_brownian(cfg.steps(), cfg.dt, {cfg.master_seed, i});
        auto const d = build_decomposition(W, fee, cfg.bandwidth(), cfg.padding());
        auto chain = extract_embedded_chain(W, d.ltf, fee);
        CsvWriter chain_csv{"ell,state"};
        for (std::size_t j = 0; j < chain.states.size(); ++j) {
            chain_csv.row(chain.jump_ells[j], chain.states[j]);
        }
        auto const L = additive_functional(d.ltf);
        std::vector<double> ells;
        for (std::size_t j = 1; static_cast<double>(j - 1) * cfg.ell_step <= L.back(); ++j) {
            ells.push_back(static_cast<double>(j) * cfg.ell_step);
        }
        auto const inv = inverse_local_time(L, ells);
        CsvWriter inverse_csv{"ell,sigma,V,chain_integral"};
        double const nan = std::nan("");
        for (std::size_t j = 0; j < ells.size(); ++j) {
            if (inv.censored(j)) {
                inverse_csv.row(ells[j], nan, nan, nan);
                continue;
            }
            inverse_csv.row(ells[j], *inv.sigma(j), d.V[*inv.index[j]],
                            chain.empty() || ells[j] > chain.end_ell ? nan : chain_integral(chain, ells[j]));
        }
        return PathOut{std::move(chain), chain_csv.str(), inverse_csv.str()};
    });

    OutputSet out{cfg};
    std::vector<EmbeddedChain> chains;
    std::size_t starts_up = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        out.write(path_name(i) + "/chain.csv", results[i].chain_csv);
        out.write(path_name(i) + "/inverse.csv", results[i].inverse_csv);
        if (!results[i].chain.empty()) {
            starts_up += results[i].chain.initial_state() > 0.0 ? 1 : 0;
        }
        chains.push_back(results[i].chain);
    }
    auto const est = estimate_jump_rate(chains, {100, cfg.holdings});
    std::size_t const started = static_cast<std::size_t>(std::ranges::count_if(chains, [](auto const& ch) { return !ch.empty(); }));
    Json rep;
    rep["schema"] = kSchema;
    rep["chains"] = chains.size();
    rep["started"] = started;
    rep["start_up_fraction"] = started ? static_cast<double>(starts_up) / static_cast<double>(started) : 0.0;
    rep["rate_up"] = est.rate_up;
    rep["rate_down"] = est.rate_down;
    rep["rate_total"] = est.total();
    rep["rate_target_each"] = 1.0 / (4.0 * fee.c());
    rep["n_up"] = est.n_up;
    rep["n_down"] = est.n_down;
    rep["exposure"] = est.exposure;
    rep["holdings_used"] = est.uncensored_holdings;
    rep["short_chains"] = est.short_chains;
    rep["sufficient"] = est.sufficient;
    out.write_json("chain.json", rep);
    out.finish();
    log << "jump rates: up " << brief(est.rate_up) << ", down " << brief(est.rate_down) << " from "
        << est.uncensored_holdings << " holdings" << (est.sufficient ? "" : " (insufficient)") << "\n";
    return kExitPass;
}

inline int cmd_hitting(RunConfig const& cfg, std::ostream& log)
{
    auto const fee = cfg.fee();
    std::size_t const k = cfg.k.value_or(50);
    struct PathOut {
        HittingSchedule schedule;
        double V_t = 0.0;
        std::string csv;
    };
    auto const results = parallel_map(cfg.paths(), [&](std::size_t i) {
        auto const W = simulate_brownian(cfg.steps(), cfg.dt, {cfg.master_seed, i});
        auto const d = build_decomposition(W, fee, cfg.bandwidth(), cfg.padding());
        auto s = build_hitting_schedule(W, fee, d.ltf);
        CsvWriter csv{"k,H_k,anchor,leg_L,V_at_H"};
        for (std::size_t j = 0; j < s.size(); ++j) {
            double const leg = j < s.leg_local_time.size() ? s.leg_local_time[j] : std::nan("");
            csv.row(j, s.time(j), s.anchors[j], leg, s.V_at_H[j]);
        }
        return PathOut{std::move(s), d.V.back(), csv.str()};
    });

    OutputSet out{cfg};
    std::vector<HittingSchedule> schedules;
    std::vector<double> legs;
    for (std::size_t i = 0; i < results.size(); ++i) {
        out.write(path_name(i) + "/hitting.csv", results[i].csv);
        schedules.push_back(results[i].schedule);
        auto const d = results[i].schedule.leg_durations(1);
        legs.insert(legs.end(), d.begin(), d.end());
    }
    double const nan = std::nan("");
    std::size_t const m = 2 * k + 1;
    CsvWriter clt{"sample_id,stat_i,stat_ii,stat_iii"};
    std::size_t reached = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto const& s = results[i].schedule;
        double const iii = results[i].V_t / std::sqrt(cfg.horizon);
        if (s.size() <= m) {
            clt.row(i, nan, nan, iii);
            continue;
        }
        ++reached;
        clt.row(i, s.V_at_H[m] / (fee.c() * std::sqrt(8.0 * static_cast<double>(k))), s.V_at_H[m] / std::sqrt(s.time(m)),
                iii);
    }
    out.write("clt.csv", clt.str());

    auto const stats = clt_statistics(schedules, k);
    Json rep;
    rep["schema"] = kSchema;
    rep["k"] = k;
    rep["schedules"] = schedules.size();
    rep["reached_H_2k_plus_1"] = reached;
    rep["legs"] = legs.size();
    rep["mean_leg_duration"] = legs.empty() ? Json(nullptr) : Json(sample_mean(legs));
    rep["target_leg_duration"] = 4.0 * fee.c() * fee.c();
    rep["mean_lln"] = stats.lln.empty() ? Json(nullptr) : Json(sample_mean(stats.lln));
    rep["sufficient"] = stats.sufficient;
    out.write_json("hitting.json", rep);
    out.finish();
    log << legs.size() << " completed legs; " << reached << " of " << schedules.size() << " schedules reach H_"
        << m << (stats.sufficient ? "" : " (too few for the CLT statistics)") << "\n";
    return kExitPass;
}

inline LawsConfig laws_config(RunConfig const& cfg)
{
    LawsConfig lc;
    lc.c = cfg.fee().c();
    lc.master_seed = cfg.master_seed;
    lc.bandwidth_mult = cfg.bandwidth_mult;
    lc.path_scale = cfg.n_paths ? static_cast<double>(*cfg.n_paths) / 1000.0 : 1.0;
    if (cfg.k) {
        lc.k_exact = *cfg.k;
    }
    lc.exact_only = cfg.exact_only;
    return lc;
}

inline std::string report_line(CriterionReport const& r)
{
    std::ostringstream s;
    s << (r.pass() ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name;
    for (auto const& t : r.results) {
        s << "\n        " << (t.pass ? "ok   " : "FAIL ") << t.description << ": " << brief(t.statistic)
          << " <= " << brief(t.threshold) << " (n = " << t.n << ")";
    }
    s << "\n        time " << brief(r.seconds) << " s";
    if (r.time_limit > 0.0) {
        s << " (limit " << brief(r.time_limit) << " s" << (r.within_time() ? "" : ", EXCEEDED") << ")";
    }
    return s.str();
}

inline int cmd_laws(RunConfig const& cfg, std::ostream& log)
{
    auto const lc = laws_config(cfg);
    if (lc.under_powered()) {
        log << "warning: " << cfg.paths() << " paths is below the reference 1000; results are under-powered\n";
    }
    LawBattery battery{lc};
    auto const reports = battery.run_all([&](CriterionReport const& r) { log << report_line(r) << "\n" << std::flush; });

    bool all_pass = true;
    Json crit = Json::array();
    for (auto const& r : reports) {
        all_pass = all_pass && r.pass();
        Json j;
        j["id"] = r.id;
        j["name"] = r.name;
        j["pass"] = r.pass();
        j["seconds"] = r.seconds;
        j["time_limit"] = r.time_limit > 0.0 ? Json(r.time_limit) : Json(nullptr);
        j["results"] = Json::array();
        for (auto const& t : r.results) {
            j["results"].push_back(result_json(t));
        }
        crit.push_back(std::move(j));
    }
    Json rep;
    rep["schema"] = kSchema;
    rep["c"] = lc.c;
    rep["path_scale"] = lc.path_scale;
    rep["under_powered"] = lc.under_powered();
    rep["exact_only"] = lc.exact_only;
    rep["criteria"] = crit;
    rep["pass"] = all_pass;
    OutputSet out{cfg};
    out.write_json("laws.json", rep);
    out.finish();

    if (lc.under_powered()) {
        return kExitConfig;
    }
    return all_pass ? kExitPass : kExitFail;
}

/// Parses argv, dispatches, and maps errors to exit codes.
inline int run(int argc, char const* const* argv, std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"AMM reflection paths, local-time decompositions and their limit laws", "ammfd"};
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "key=value file; flags given on the command line win");
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--gamma", cfg.gamma, "fee retention factor in (0, 1)");
    app.add_option("--c", cfg.c, "half band width log(1/gamma)");
    app.add_option("--dt", cfg.dt, "time step")->capture_default_str();
    app.add_option("--horizon", cfg.horizon, "path horizon")->capture_default_str();
    app.add_option("--paths", cfg.n_paths, "number of paths");
    app.add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
    app.add_option("--bandwidth-mult,--bandwidth_mult", cfg.bandwidth_mult, "kernel half width in units of sqrt(dt)")
        ->capture_default_str();
    app.add_option("--level-padding,--level_padding", cfg.level_padding, "E-levels tracked beyond the path range (default 2c)");
    app.add_option("--out", cfg.output_dir, "output directory")->capture_default_str();
    app.add_option("--k", cfg.k, "CLT index: statistics at H_{2k+1}");
    app.add_option("--ell-step,--ell_step", cfg.ell_step, "spacing of the inverse local time grid")->capture_default_str();
    app.add_option("--tol", cfg.tol, "violation tolerance (default 5 sqrt(dt))");
    app.add_option("--holdings", cfg.holdings, "leading holdings per chain in the rate estimate (0: all)")
        ->capture_default_str();
    app.add_flag("--inject-fault,--inject_fault", cfg.inject_fault, "plant a band violation in path 0");
    app.add_flag("--exact-only,--exact_only", cfg.exact_only, "laws: exact-sampler criteria only");

    struct Command {
        char const* name;
        char const* help;
        int (*fn)(RunConfig const&, std::ostream&);
    };
    static constexpr Command commands[] = {
        {"simulate", "simulate B and the AMM price U", cmd_simulate},
        {"verify", "check the Skorokhod properties", cmd_verify},
        {"decompose", "triangle-wave decomposition of W", cmd_decompose},
        {"chain", "embedded chain under the inverse local time", cmd_chain},
        {"hitting", "successive 2c-exit schedule and CLT statistics", cmd_hitting},
        {"laws", "run the law-verification battery", cmd_laws},
    };
    for (auto const& c : commands) {
        app.add_subcommand(c.name, c.help)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const code = app.exit(e, log, err);
        return code == 0 ? kExitPass : kExitConfig;
    }
    for (auto const& c : commands) {
        if (app.got_subcommand(c.name)) {
            cfg.command = c.name;
            try {
                validate(cfg);
                return c.fn(cfg, log);
            } catch (ConfigError const& e) {
                err << "config error: " << e.what() << "\n";
                return kExitConfig;
            } catch (std::invalid_argument const& e) {
                err << "config error: " << e.what() << "\n";
                return kExitConfig;
            } catch (std::exception const& e) {
                err << "error: " << e.what() << "\n";
                return kExitFail;
            }
        }
    }
    return kExitConfig;
}

}  // namespace ammfd::cli
