// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace wppan {

/// A point in the room coordinate system (meters).
struct Position {
    double x{};
    double y{};
    double z{};
};

inline double distance(const Position& a, const Position& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace wppan
