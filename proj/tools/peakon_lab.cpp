// peakon_lab: command-line driver for the peakon library.
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "peakon/peakon.hpp"

namespace {

using peakon::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flag values layered over an optional JSON config file; flags win.
class Settings {
public:
    void load_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw UsageError("cannot read config file " + path);
        try {
            values_ = json::parse(f);
        } catch (const json::exception& e) {
            throw UsageError("config file " + path + " is not valid JSON: " + e.what());
        }
        if (!values_.is_object()) throw UsageError("config file must hold a JSON object");
    }

    void set(const std::string& key, const json& v) { values_[key] = v; }
    bool has(const std::string& key) const { return values_.contains(key); }
    const json& all() const { return values_; }

    double num(const std::string& key, double fallback) const {
        return has(key) ? as_double(key) : fallback;
    }
    double need(const std::string& key) const {
        if (!has(key)) throw UsageError("missing required option --" + key);
        return as_double(key);
    }
    std::string str(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        if (!values_[key].is_string()) throw UsageError("option " + key + " must be a string");
        return values_[key].get<std::string>();
    }
    std::vector<double> list(const std::string& key, std::vector<double> fallback) const {
        if (!has(key)) return fallback;
        const auto& v = values_[key];
        std::vector<double> out;
        if (v.is_array()) {
            for (const auto& x : v) out.push_back(x.get<double>());
            return out;
        }
        if (v.is_number()) return {v.get<double>()};
        std::stringstream ss(v.get<std::string>());
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw UsageError("option " + key + " expects a comma-separated list of numbers");
            }
        }
        return out;
    }

private:
    double as_double(const std::string& key) const {
        const auto& v = values_[key];
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            try {
                std::size_t used = 0;
                const double d = std::stod(v.get<std::string>(), &used);
                if (used == v.get<std::string>().size()) return d;
            } catch (const std::exception&) {
            }
        }
        throw UsageError("option " + key + " expects a number");
    }

    json values_ = json::object();
};

std::string output_dir() {
    const char* env = std::getenv("PEAKON_LAB_OUT");
    return (env && *env) ? std::string(env) : std::string("peakon_lab_out");
}

std::string resolve_output(const Settings& st, const std::string& default_name) {
    const std::string out = st.str("out", default_name);
    std::filesystem::path p(out);
    if (p.is_absolute()) return p.string();
    return (std::filesystem::path(output_dir()) / p).string();
}

peakon::IntegratorConfig integrator_from(const Settings& st) {
    peakon::IntegratorConfig c;
    c.rel_tol = st.num("rel-tol", c.rel_tol);
    c.abs_tol = st.num("abs-tol", c.abs_tol);
    c.q_min = st.num("q-min", c.q_min);
    c.max_steps = static_cast<long long>(st.num("max-steps", static_cast<double>(c.max_steps)));
    if (st.has("dt")) c.dense_sample_dt = st.num("dt", 0.0);
    peakon::validate(c);
    return c;
}

peakon::DomainKind domain_from(const Settings& st) {
    return peakon::parse_domain(st.str("domain", "line"));
}

std::optional<peakon::InitialProfile> profile_from(const Settings& st, bool required) {
    const bool any = st.has("a") || st.has("b") || st.has("delta");
    if (!any && !required) return std::nullopt;
    return peakon::InitialProfile{st.need("a"), st.need("b"), st.need("delta")};
}

void emit(const json& j, bool as_json, const std::vector<std::pair<std::string, std::string>>& table) {
    if (as_json) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::size_t width = 0;
    for (const auto& [k, v] : table) width = std::max(width, k.size());
    for (const auto& [k, v] : table) std::cout << k << std::string(width + 2 - k.size(), ' ') << v << "\n";
}

std::string num(double v) { return peakon::format_g17(v); }

void write_manifest(const std::string& path, peakon::RunManifest m, const json& canonical) {
    m.config_hash = peakon::config_hash(canonical);
    m.end = peakon::utc_timestamp();
    peakon::write_text_file(path, to_json(m).dump(2) + "\n");
}

int cmd_simulate(const Settings& st, bool as_json) {
    peakon::RunManifest m{"simulate", "", peakon::utc_timestamp(), {}, {}};
    const auto d = domain_from(st);
    const auto pr = *profile_from(st, true);
    const auto cfg = integrator_from(st);
    const double s = st.num("s", 1.0);
    const auto tr = peakon::integrate_to_collision(peakon::make_initial_state(pr, d), cfg);
    std::vector<peakon::SeriesRow> rows;
    for (std::size_t i = 0; i < tr.samples.size(); ++i)
        rows.push_back(peakon::make_row(tr.samples[i], tr.gaps[i], s));
    const std::string path = resolve_output(st, "simulate_" + peakon::to_string(d) + ".csv");
    peakon::write_series_csv(path, rows);
    m.outputs.push_back(path);
    const double drift = peakon::conservation_report(tr).max_drift;
    const auto params = peakon::make_params(pr, d);
    json report = {{"verdict", tr.collided() ? "collision" : "no collision"},
                   {"T", tr.collision_time ? json(*tr.collision_time) : json(nullptr)},
                   {"w_T", peakon::terminal_w(params)},
                   {"q_T", tr.terminal.positions[0]},
                   {"fits", json::array()},
                   {"residuals", {{"h1_drift", drift}}},
                   {"tolerances", peakon::tolerances_json(cfg)},
                   {"samples", rows.size()},
                   {"csv", path}};
    json events = json::array();
    for (const auto& e : tr.events) events.push_back({{"kind", peakon::to_string(e.kind)}, {"t", e.t}});
    report["events"] = events;
    emit(report, as_json,
         {{"csv", path},
          {"samples", std::to_string(rows.size())},
          {"event", tr.events.empty() ? "none" : peakon::to_string(tr.events.back().kind)},
          {"collision_time", tr.collision_time ? num(*tr.collision_time) : "n/a"},
          {"h1_drift", num(drift)}});
    m.verdicts.push_back({"h1_drift", drift <= 1e-6 ? "pass" : "fail", drift});
    write_manifest(path + ".manifest.json", m, st.all());
    return tr.collided() ? 0 : 2;
}

int cmd_norm(const Settings& st, bool as_json) {
    const auto d = domain_from(st);
    const double s = st.num("s", 1.0);
    peakon::PeakonState state;
    state.domain = d;
    if (st.has("positions") || st.has("momenta")) {
        state.positions = st.list("positions", {});
        state.momenta = st.list("momenta", {});
    } else {
        const auto pr = *profile_from(st, true);
        state = peakon::make_initial_state(pr, d);
    }
    peakon::validate(state);
    peakon::NormReport rep;
    if (state.size() == 2) {
        rep = peakon::hs_norm_2peakon(state, s);
    } else {
        rep.s = s;
        rep.oracle_sq = rep.value_sq = rep.w_term = peakon::hs_norm_direct(state, s);
        rep.formula_applied = false;
    }
    const json j = peakon::to_json(rep);
    emit(j, as_json,
         {{"value_sq", num(rep.value_sq)},
          {"q_term", num(rep.q_term)},
          {"w_term", num(rep.w_term)},
          {"oracle_sq", num(rep.oracle_sq)},
          {"ratio_r", num(rep.ratio_r)}});
    return 0;
}

peakon::ExperimentConfig experiment_from(const Settings& st, bool grid = false) {
    peakon::ExperimentConfig c;
    if (!grid) {
        c.epsilon = st.num("epsilon", c.epsilon);
        c.s = st.num("s", c.s);
    }
    c.domain = domain_from(st);
    c.profile = profile_from(st, false);
    c.integrator = integrator_from(st);
    c.sample_count = static_cast<int>(st.num("samples", c.sample_count));
    if (c.sample_count < 2) throw UsageError("--samples must be at least 2");
    return c;
}

int cmd_inflate(const Settings& st, bool as_json) {
    peakon::RunManifest m{"inflate", "", peakon::utc_timestamp(), {}, {}};
    auto cfg = experiment_from(st);
    std::ostringstream name;
    name << "inflate_" << peakon::to_string(cfg.domain) << "_s" << cfg.s << ".csv";
    cfg.output_path = resolve_output(st, name.str());
    const auto res = peakon::run_inflation(cfg);
    json j = peakon::to_json(res, cfg);
    j["csv"] = cfg.output_path;
    peakon::write_text_file(cfg.output_path + ".json", j.dump(2) + "\n");
    m.outputs = {cfg.output_path, cfg.output_path + ".json"};
    m.verdicts.push_back({"verdict", res.verdict, cfg.s});
    emit(j, as_json,
         {{"verdict", res.verdict},
          {"csv", cfg.output_path},
          {"T", res.T ? num(*res.T) : "n/a"},
          {"w_T", num(res.w_T)},
          {"norm_sq_slope", res.norm_fit ? num(res.norm_fit->exponent) : "n/a"},
          {"h1_drift", num(res.h1_drift)}});
    write_manifest(cfg.output_path + ".manifest.json", m, st.all());
    bool collided = false;
    for (const auto& e : res.events) collided |= e.kind == peakon::EventKind::Collision;
    return collided ? 0 : 2;
}

int cmd_collision_time(const Settings& st, bool as_json) {
    const auto d = domain_from(st);
    const auto pr = *profile_from(st, true);
    const std::string mode = st.str("mode", "both");
    if (mode != "exact" && mode != "dominating" && mode != "both")
        throw UsageError("--mode must be exact, dominating or both");
    peakon::make_initial_state(pr, d);  // validates the profile
    const auto params = peakon::make_params(pr, d);
    const double bound = 1.0 / (pr.delta * std::sqrt(2.0 * pr.b * (pr.b + pr.delta)));
    json j = {{"bound", bound}, {"domain", peakon::to_string(d)}};
    std::vector<std::pair<std::string, std::string>> table;
    if (mode != "dominating") {
        const double t = peakon::collision_time(params, peakon::GapMode::ExactF);
        j["T_exact"] = t;
        table.emplace_back("T_exact", num(t));
    }
    if (mode != "exact") {
        const double t = peakon::collision_time(params, peakon::GapMode::DominatingG);
        j["T_dominating"] = t;
        j["kappa"] = peakon::dominating_kappa(params);
        table.emplace_back("T_dominating", num(t));
    }
    table.emplace_back("bound", num(bound));
    emit(j, as_json, table);
    return 0;
}

int cmd_sweep(const Settings& st, bool as_json) {
    peakon::RunManifest m{"sweep", "", peakon::utc_timestamp(), {}, {}};
    const auto base = experiment_from(st, true);
    const auto eps = st.list("epsilon", {0.5, 0.1});
    const auto ss = st.list("s", {0.8, 1.3});
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int jobs_n = static_cast<int>(st.num("jobs", hw));
    if (jobs_n < 1) throw UsageError("--jobs must be at least 1");
    const std::string dir = resolve_output(st, "sweep");

    struct Cell {
        double epsilon, s;
        std::string csv;
        json summary;
        int code = 0;
    };
    std::vector<Cell> cells;
    for (double e : eps)
        for (double s : ss) {
            std::ostringstream name;
            name << "cell_" << peakon::to_string(base.domain) << "_eps" << e << "_s" << s << ".csv";
            cells.push_back({e, s, (std::filesystem::path(dir) / name.str()).string(), {}, 0});
        }
    std::vector<std::function<void()>> jobs;
    for (auto& c : cells)
        jobs.push_back([&c, &base] {
            try {
                auto cfg = base;
                cfg.epsilon = c.epsilon;
                cfg.s = c.s;
                cfg.profile.reset();
                cfg.output_path = c.csv;
                const auto check = peakon::check_selection(c.epsilon, c.s, cfg.domain);
                const auto res = peakon::run_inflation(cfg);
                c.summary = peakon::to_json(res, cfg);
                c.summary["epsilon"] = c.epsilon;
                c.summary["csv"] = c.csv;
                c.summary["selection"] = {{"T", check.T},
                                          {"norm0", check.norm},
                                          {"lifespan_ok", check.lifespan_ok},
                                          {"norm_ok", check.norm_ok}};
            } catch (const std::exception& e) {
                c.summary = {{"epsilon", c.epsilon}, {"s", c.s}, {"error", e.what()}};
                c.code = 2;
            }
        });
    peakon::run_bounded(jobs, jobs_n);
    json summary = json::array();
    int code = 0;
    for (const auto& c : cells) {
        summary.push_back(c.summary);
        code = std::max(code, c.code);
        if (c.code == 0) m.outputs.push_back(c.csv);
        m.verdicts.push_back({"cell", c.code == 0 ? "ok" : "error", c.s});
    }
    const std::string summary_path = (std::filesystem::path(dir) / "summary.json").string();
    peakon::write_text_file(summary_path, summary.dump(2) + "\n");
    m.outputs.push_back(summary_path);
    std::vector<std::pair<std::string, std::string>> table{{"summary", summary_path}};
    for (const auto& c : cells)
        table.emplace_back("eps=" + num(c.epsilon) + " s=" + num(c.s),
                           c.code == 0 ? c.summary["verdict"].get<std::string>() : "error");
    emit(summary, as_json, table);
    write_manifest(summary_path + ".manifest.json", m, st.all());
    return code;
}

int cmd_demo(const Settings& st, bool as_json) {
    peakon::RunManifest m{"demo-nonunique", "", peakon::utc_timestamp(), {}, {}};
    auto cfg = experiment_from(st);
    const auto rep = peakon::nonuniqueness_demo(cfg);
    const json j = peakon::to_json(rep, cfg);
    const std::string path = resolve_output(st, "demo_nonunique_" + peakon::to_string(cfg.domain) + ".json");
    peakon::write_text_file(path, j.dump(2) + "\n");
    m.outputs.push_back(path);
    m.verdicts.push_back({"l2_gap", rep.l2_gap < 0.05 ? "pass" : "fail", rep.l2_gap});
    m.verdicts.push_back({"h1_gap", rep.h1_gap < 0.05 ? "pass" : "fail", rep.h1_gap});
    emit(j, as_json,
         {{"verdict", rep.verdict},
          {"T", num(rep.T)},
          {"w_T", num(rep.w_T)},
          {"q_T", num(rep.q_T)},
          {"pointwise", num(rep.pointwise_residual)},
          {"l2_gap", num(rep.l2_gap)},
          {"h1_gap", num(rep.h1_gap)},
          {"hs_gap", num(rep.hs_gap)},
          {"solitary", num(rep.solitary_residual)},
          {"report", path}});
    write_manifest(path + ".manifest.json", m, st.all());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peakon collision, norm inflation and non-uniqueness lab"};
    app.require_subcommand(1);

    std::string config_path;
    bool as_json = false;
    std::map<std::string, std::string> raw;

    struct Spec {
        const char* name;
        const char* about;
        std::vector<const char*> keys;
    };
    const std::vector<Spec> specs = {
        {"simulate", "integrate a 2-peakon profile to collision and write the series CSV", {"a", "b", "delta", "domain", "s", "q-min", "rel-tol", "abs-tol", "max-steps", "dt", "out"}},
        {"norm", "H^s norm of a profile or explicit peakon state", {"a", "b", "delta", "domain", "s", "positions", "momenta"}},
        {"inflate", "norm series toward collision with power-law fit and verdict", {"epsilon", "s", "a", "b", "delta", "domain", "q-min", "rel-tol", "abs-tol", "max-steps", "samples", "out"}},
        {"collision-time", "collision time by quadrature of the gap equation", {"a", "b", "delta", "domain", "mode"}},
        {"sweep", "inflation runs over an epsilon x s grid on a thread pool", {"epsilon", "s", "domain", "jobs", "q-min", "rel-tol", "abs-tol", "max-steps", "samples", "out"}},
        {"demo-nonunique", "compare the solution at collision with the traveling antipeakon", {"s", "a", "b", "delta", "domain", "q-min", "rel-tol", "abs-tol", "max-steps", "out"}},
    };
    std::map<std::string, CLI::App*> subs;
    struct Bound {
        CLI::Option* opt;
        std::string sub, key;
    };
    std::vector<Bound> options;
    for (const auto& sp : specs) {
        auto* sub = app.add_subcommand(sp.name, sp.about);
        sub->add_option("--config", config_path, "JSON config file; flags override its keys");
        sub->add_flag("--json", as_json, "print the report as JSON");
        for (const char* k : sp.keys) {
            const std::string key = k;
            auto* opt = sub->add_option("--" + key, raw[std::string(sp.name) + "/" + key]);
            options.push_back({opt, sp.name, key});
        }
        subs[sp.name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    std::string which;
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) which = name;

    try {
        Settings st;
        if (!config_path.empty()) st.load_file(config_path);
        for (const auto& b : options)
            if (b.sub == which && b.opt->count() > 0) st.set(b.key, raw[b.sub + "/" + b.key]);

        if (which == "simulate") return cmd_simulate(st, as_json);
        if (which == "norm") return cmd_norm(st, as_json);
        if (which == "inflate") return cmd_inflate(st, as_json);
        if (which == "collision-time") return cmd_collision_time(st, as_json);
        if (which == "sweep") return cmd_sweep(st, as_json);
        if (which == "demo-nonunique") return cmd_demo(st, as_json);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << subs[which]->help();
        return 1;
    } catch (const peakon::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const peakon::DivergenceError& e) {
        std::cerr << "numerical error: " << e.what()
                  << " (peakon H^s norms converge only for s < 3/2)\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
}
