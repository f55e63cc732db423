#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "peakon/error.hpp"

namespace peakon {

struct SeriesRow {
    double t, q1, q2, p1, p2, q, p, w, z, h1_sq, hs_sq, r_ratio;
};

inline constexpr const char* kSeriesHeader = "t,q1,q2,p1,p2,q,p,w,z,h1_sq,hs_sq,r_ratio";

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string series_csv(const std::vector<SeriesRow>& rows) {
    std::string out = kSeriesHeader;
    out += '\n';
    for (const auto& r : rows) {
        const double v[] = {r.t, r.q1, r.q2, r.p1, r.p2, r.q, r.p, r.w, r.z, r.h1_sq, r.hs_sq, r.r_ratio};
        for (std::size_t i = 0; i < 12; ++i) {
            if (i) out += ',';
            out += format_g17(v[i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file " + path);
    f << text;
    if (!f) throw ConfigError("failed writing output file " + path);
}

inline void write_series_csv(const std::string& path, const std::vector<SeriesRow>& rows) {
    write_text_file(path, series_csv(rows));
}

}  // namespace peakon
