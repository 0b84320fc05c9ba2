#pragma once

#include <algorithm>
#include <cmath>

namespace wsn {

struct Location {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Location&, const Location&) = default;
};

struct Rect {
    double width = 0.0;
    double height = 0.0;

    bool contains(const Location& p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
    Location clamp(const Location& p) const {
        return {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
    }
};

inline double distanceSquared(const Location& a, const Location& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double distance(const Location& a, const Location& b) {
    return std::sqrt(distanceSquared(a, b));
}

// Unit-disk membership; the boundary (distance exactly r) is in range.
inline bool inRange(const Location& a, const Location& b, double r) {
    return distanceSquared(a, b) <= r * r;
}

// True if `p` lies in the sector with apex `origin`, axis toward `axis`, and
// the given half angle. The apex itself is not in any sector.
inline bool inSector(const Location& origin, const Location& axis, const Location& p,
                     double halfAngleDegrees) {
    const double vx = axis.x - origin.x, vy = axis.y - origin.y;
    const double wx = p.x - origin.x, wy = p.y - origin.y;
    const double vn = std::sqrt(vx * vx + vy * vy);
    const double wn = std::sqrt(wx * wx + wy * wy);
    if (vn == 0.0 || wn == 0.0)
        return false;
    const double cosang = std::clamp((vx * wx + vy * wy) / (vn * wn), -1.0, 1.0);
    const double limit = std::cos(halfAngleDegrees * std::acos(-1.0) / 180.0);
    return cosang >= limit - 1e-12;
}

} // namespace wsn
