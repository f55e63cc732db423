#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <string>
#include <vector>

#include "json.hpp"
#include "peakon/experiments.hpp"
#include "peakon/sobolev.hpp"

namespace peakon {

using json = nlohmann::json;

inline json to_json(const NormReport& r) {
    return {{"t", r.t},           {"s", r.s},           {"value_sq", r.value_sq},
            {"q_term", r.q_term}, {"w_term", r.w_term}, {"oracle_sq", r.oracle_sq},
            {"ratio_r", r.ratio_r}, {"formula_applied", r.formula_applied}};
}

inline json fit_json(const std::string& name, const PowerLawFit& f) {
    return {{"name", name},
            {"exponent", f.exponent},
            {"r2", f.r_squared},
            {"window", {f.window.first, f.window.second}}};
}

inline json tolerances_json(const IntegratorConfig& c) {
    return {{"rel_tol", c.rel_tol}, {"abs_tol", c.abs_tol}, {"q_min", c.q_min}};
}

inline json profile_json(const InitialProfile& p) {
    return {{"a", p.a}, {"b", p.b}, {"delta", p.delta}};
}

inline json to_json(const InflationResult& r, const ExperimentConfig& cfg) {
    json fits = json::array();
    if (r.norm_fit) fits.push_back(fit_json("hs_sq_vs_inverse_gap", *r.norm_fit));
    json events = json::array();
    for (const auto& e : r.events) events.push_back({{"kind", to_string(e.kind)}, {"t", e.t}});
    IntegratorConfig tol = cfg.integrator;
    tol.q_min = r.q_min;
    return {{"verdict", r.verdict},
            {"T", r.T ? json(*r.T) : json(nullptr)},
            {"w_T", r.w_T},
            {"q_T", r.q_T},
            {"s", cfg.s},
            {"domain", to_string(cfg.domain)},
            {"profile", profile_json(r.profile)},
            {"events", events},
            {"fits", fits},
            {"residuals", {{"h1_drift", r.h1_drift}}},
            {"tolerances", tolerances_json(tol)}};
}

inline json to_json(const DemoReport& r, const ExperimentConfig& cfg) {
    IntegratorConfig tol = cfg.integrator;
    tol.q_min = r.q_min;
    json t = tolerances_json(tol);
    t["gap_threshold"] = 0.05;
    return {{"verdict", r.verdict},
            {"T", r.T},
            {"w_T", r.w_T},
            {"q_T", r.q_T},
            {"s", r.s},
            {"domain", to_string(cfg.domain)},
            {"t_last", r.t_last},
            {"x0", r.x0},
            {"speed", r.speed},
            {"fits", json::array()},
            {"residuals",
             {{"pointwise", r.pointwise_residual},
              {"l2_gap", r.l2_gap},
              {"h1_gap", r.h1_gap},
              {"hs_gap", r.hs_gap},
              {"solitary", r.solitary_residual},
              {"h1_drift", r.h1_drift}}},
            {"tolerances", t}};
}

// FNV-1a over the canonical (key-sorted) JSON dump.
inline std::string config_hash(const json& canonical) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canonical.dump()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Verdict {
    std::string name;
    std::string status;
    double value = 0.0;
};

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::string start;
    std::string end;
    std::vector<std::string> outputs;
    std::vector<Verdict> verdicts;
};

inline json to_json(const RunManifest& m) {
    json v = json::array();
    for (const auto& x : m.verdicts) v.push_back({{"name", x.name}, {"status", x.status}, {"value", x.value}});
    return {{"command", m.command}, {"config_hash", m.config_hash}, {"start", m.start},
            {"end", m.end},         {"outputs", m.outputs},          {"verdicts", v}};
}

}  // namespace peakon
