#include "anosov/direction.hpp"

#include "anosov/error.hpp"

#include <cmath>

namespace anosov {

Vec canonical_unit(const Vec& v)
{
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("canonical_unit: zero or non-finite vector");
    Vec u = v / norm;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::fabs(u(i)) > 1e-14) {
            if (u(i) < 0.0) u = -u;
            break;
        }
    }
    return u;
}

Direction::Direction(const Vec& v) : v_(canonical_unit(v)) {}

double angle(const Direction& a, const Direction& b) { return line_angle(a.vector(), b.vector()); }

}  // namespace anosov
