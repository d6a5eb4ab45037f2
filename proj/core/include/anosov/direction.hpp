#pragma once

#include "anosov/linalg.hpp"

namespace anosov {

/// Normalizes v and flips it so its first non-negligible coordinate is positive.
Vec canonical_unit(const Vec& v);

/// A line through the origin, stored as a canonical unit vector.
class Direction {
  public:
    Direction() = default;
    /// Throws InvalidArgument for a zero or non-finite vector.
    explicit Direction(const Vec& v);

    const Vec& vector() const noexcept { return v_; }
    int dim() const noexcept { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_(i); }

  private:
    Vec v_;
};

/// Projective angle in [0, pi/2].
double angle(const Direction& a, const Direction& b);

}  // namespace anosov
