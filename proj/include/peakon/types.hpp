#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "peakon/error.hpp"

namespace peakon {

enum class DomainKind { Line, Circle };

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline std::string to_string(DomainKind d) { return d == DomainKind::Line ? "line" : "circle"; }

inline DomainKind parse_domain(std::string_view name) {
    if (name == "line") return DomainKind::Line;
    if (name == "circle") return DomainKind::Circle;
    throw ConfigError("unknown domain '" + std::string(name) + "' (expected line or circle)");
}

struct PeakonState {
    double t = 0.0;
    std::vector<double> positions;
    std::vector<double> momenta;
    DomainKind domain = DomainKind::Line;

    std::size_t size() const { return positions.size(); }
};

inline void validate(const PeakonState& s) {
    if (s.positions.empty() || s.positions.size() != s.momenta.size())
        throw ConfigError("peakon state needs n >= 1 with matching positions and momenta");
    for (std::size_t j = 0; j < s.size(); ++j)
        if (!std::isfinite(s.positions[j]) || !std::isfinite(s.momenta[j]))
            throw ConfigError("peakon state has non-finite entries");
    if (!std::isfinite(s.t)) throw ConfigError("peakon state has non-finite time");
}

}  // namespace peakon
