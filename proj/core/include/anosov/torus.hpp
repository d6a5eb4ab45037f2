#pragma once

#include "anosov/linalg.hpp"

#include <initializer_list>
#include <span>

namespace anosov {

/// A point of the torus R^n / Z^n with coordinates in the half-open unit box.
/// Construction always wraps, so the invariant cannot be broken.
class TorusPoint {
  public:
    TorusPoint() = default;
    explicit TorusPoint(const Vec& coords);
    TorusPoint(std::initializer_list<double> coords);

    const Vec& coords() const noexcept { return coords_; }
    int dim() const noexcept { return static_cast<int>(coords_.size()); }
    double operator[](int i) const { return coords_(i); }

  private:
    Vec coords_;
};

/// A point of the universal cover R^n.
struct CoverPoint {
    Vec coords;

    CoverPoint() = default;
    explicit CoverPoint(const Vec& c) : coords(c) {}
    CoverPoint(std::initializer_list<double> c) : coords(make_vec(c)) {}

    int dim() const noexcept { return static_cast<int>(coords.size()); }
};

/// An element of the deck group Z^n.
struct LatticeVector {
    IntVec entries;

    LatticeVector() = default;
    explicit LatticeVector(const IntVec& e) : entries(e) {}
    LatticeVector(std::initializer_list<long long> e) : entries(make_int_vec(e)) {}

    int dim() const noexcept { return static_cast<int>(entries.size()); }
    Vec as_real() const { return entries.cast<double>(); }
    friend bool operator==(const LatticeVector& a, const LatticeVector& b) { return a.entries == b.entries; }
};

/// Reduces a real number into [0, 1).
double wrap_unit(double x) noexcept;

TorusPoint project(const CoverPoint& p);

/// The lift of x whose every coordinate lies in (ref - 1/2, ref + 1/2].
CoverPoint lift_near(const TorusPoint& x, const CoverPoint& ref);

/// The canonical lift with coordinates in [0, 1).
inline CoverPoint lift(const TorusPoint& x) { return CoverPoint(x.coords()); }

/// Flat distance: minimum Euclidean distance over lattice translates.
double torus_distance(const TorusPoint& x, const TorusPoint& y);

/// Largest possible torus_distance in dimension n, sqrt(n)/2.
double torus_diameter(int n);

/// Natural-extension distance between two depth-N truncated backward orbits,
/// sum_i d(a_i, b_i) / 2^i, where index i holds x_{-i}.
/// Throws DepthMismatch if the truncations have different lengths.
double prehistory_metric(std::span<const TorusPoint> a, std::span<const TorusPoint> b);

}  // namespace anosov
