#pragma once

// Seeded input generators for property tests and small test-side oracles
// that do not go through the library's own code paths.

#include "anosov/linear_endo.hpp"
#include "anosov/random.hpp"
#include "anosov/smooth_endo.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace anosov::testing {

class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return uniform01(rng_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int index(int n) { return uniform_index(rng_, n); }
    long long integer(long long lo, long long hi) { return lo + index(static_cast<int>(hi - lo + 1)); }

    TorusPoint torus(int n = 2)
    {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = uniform();
        return TorusPoint(v);
    }
    CoverPoint cover(double range, int n = 2)
    {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = uniform(-range, range);
        return CoverPoint(v);
    }
    Vec unit(int n = 2)
    {
        Vec v(n);
        do {
            for (int i = 0; i < n; ++i) v(i) = uniform(-1.0, 1.0);
        } while (v.norm() < 0.1);
        return v / v.norm();
    }
    std::vector<int> word(int length, int degree)
    {
        std::vector<int> w(static_cast<std::size_t>(length));
        for (auto& b : w) b = index(degree);
        return w;
    }
    std::uint64_t seed() { return rng_(); }

  private:
    Rng rng_;
};

inline LinearEndo cat_matrix() { return analyze(make_int_mat({{3, 1}, {1, 1}})); }

/// A followed by x0 -> x0 + eps sin(2 pi x1).
inline SmoothEndo sheared(double eps)
{
    std::vector<ShearMap> shears;
    if (eps != 0.0) shears.push_back({0, 1, eps, 1, 0.0});
    return SmoothEndo(cat_matrix(), shears);
}

/// Every shear composition shipped in configs/, written out again here.
inline std::vector<SmoothEndo> shipped_maps()
{
    std::vector<SmoothEndo> out;
    for (double eps : {0.0, 0.02, 0.05, 0.1}) out.push_back(sheared(eps));
    out.emplace_back(cat_matrix(), std::vector<ShearMap>{{0, 1, 0.01, 1, 0.0}, {1, 0, 0.005, 2, 0.25}});
    return out;
}

inline double frac(double x) { return x - std::floor(x); }

/// Periodic coordinate difference in [-1/2, 1/2).
inline double wrap_diff(double a, double b) { return frac(a - b + 0.5) - 0.5; }

inline double torus_gap(const Vec& a, const Vec& b)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += wrap_diff(a(i), b(i)) * wrap_diff(a(i), b(i));
    return std::sqrt(s);
}

}  // namespace anosov::testing
