#include "anosov/torus.hpp"

#include "anosov/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace anosov {

double wrap_unit(double x) noexcept
{
    double r = x - std::floor(x);
    // x slightly below an integer can round up to exactly 1.
    if (r >= 1.0) r = 0.0;
    return r;
}

TorusPoint::TorusPoint(const Vec& coords) : coords_(coords)
{
    for (Eigen::Index i = 0; i < coords_.size(); ++i) coords_(i) = wrap_unit(coords_(i));
}

TorusPoint::TorusPoint(std::initializer_list<double> coords) : TorusPoint(make_vec(coords)) {}

TorusPoint project(const CoverPoint& p) { return TorusPoint(p.coords); }

CoverPoint lift_near(const TorusPoint& x, const CoverPoint& ref)
{
    Vec out(x.dim());
    for (int i = 0; i < x.dim(); ++i) {
        // x_i + k - ref_i in (-1/2, 1/2]  <=>  k = floor(ref_i - x_i + 1/2)
        const double k = std::floor(ref.coords(i) - x[i] + 0.5);
        out(i) = x[i] + k;
    }
    return CoverPoint(out);
}

double torus_distance(const TorusPoint& x, const TorusPoint& y)
{
    double sum = 0.0;
    for (int i = 0; i < x.dim(); ++i) {
        const double d = std::fabs(x[i] - y[i]);
        const double m = std::min(d, 1.0 - d);
        sum += m * m;
    }
    return std::sqrt(sum);
}

double torus_diameter(int n) { return 0.5 * std::sqrt(static_cast<double>(n)); }

double prehistory_metric(std::span<const TorusPoint> a, std::span<const TorusPoint> b)
{
    if (a.size() != b.size()) {
        throw DepthMismatch("prehistory_metric: truncation depths differ (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + " entries); truncations are incomparable");
    }
    double sum = 0.0;
    double weight = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += torus_distance(a[i], b[i]) * weight;
        weight *= 0.5;
    }
    return sum;
}

}  // namespace anosov
