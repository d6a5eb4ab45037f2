#pragma once

#include "anosov/direction.hpp"
#include "anosov/smooth_endo.hpp"

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace anosov {

inline constexpr int kDefaultLeafDepth = 30;
inline constexpr double kDefaultLeafStep = 0.01;
inline constexpr double kDefaultSeparationFloor = 10.0;

/// f^{-1}(p), ..., f^{-N}(p) for the lift; entry i - 1 holds f^{-i}(p).
std::vector<CoverPoint> cover_backward_orbit(const SmoothEndo& f, const CoverPoint& p, int depth);

/// Unstable direction of the lift at p: E^u_A pushed forward from f^{-N}(p).
/// The backward orbit on the cover is unique, so no branch choice enters.
Direction cover_unstable_direction(const SmoothEndo& f, const CoverPoint& p, int depth = kDefaultLeafDepth);

/// Samples along an unstable leaf of the lift, parametrized by arclength.
struct LeafSegment {
    std::vector<CoverPoint> samples;
    std::vector<double> arclengths;   ///< d_W from samples.front()
    std::vector<Direction> tangents;  ///< unstable direction at each sample
    int direction_depth = 0;
    double step = 0.0;
    std::size_t origin_index = 0;     ///< index of the starting point
};

struct LeafOptions {
    int depth = kDefaultLeafDepth;
    /// Largest angle the field may turn across one step before the step is
    /// declared too coarse.
    double max_turn = 0.2;
};

/// Integrates the unit unstable field with classical fixed-step RK4 for
/// arclength L on both sides of p. Orientation is carried from the previous
/// step; the field at each accepted sample is reused as the next first stage.
LeafSegment trace_leaf(const SmoothEndo& f, const CoverPoint& p, double arclength, double step = kDefaultLeafStep,
                       const LeafOptions& opts = {});

/// Columns: arclength, x_0 ... x_{n-1}, d_0 ... d_{n-1}.
void write_leaf_csv(std::ostream& os, const LeafSegment& seg);

struct QuasiIsometryFit {
    double q_fit = 0.0;      ///< max d_W / |x - y| over pairs with |x - y| >= 1
    double b_fit = 0.0;      ///< smallest b with d_W <= q_fit |x - y| + b over all pairs
    double max_ratio = 0.0;  ///< max d_W / |x - y| over pairs with |x - y| >= separation_floor
    double separation_floor = kDefaultSeparationFloor;
    long long pairs = 0;
    long long long_pairs = 0;  ///< pairs with |x - y| >= 1
};

/// Fits d_W(x, y) <= Q |x - y| + b over sample pairs of the segment. Long
/// segments are thinned to at most max_points evenly spaced samples.
/// Throws InvalidArgument with fewer than 100 pairs of chord length >= 1.
QuasiIsometryFit quasi_isometry_fit(const LeafSegment& seg, double separation_floor = kDefaultSeparationFloor,
                                    std::size_t max_points = 4000);

struct GrowthRatioReport {
    int steps = 0;
    double separation_floor = 0.0;
    std::vector<double> ratios;  ///< |f^k x - f^k y| / |A^k x - A^k y|
    double max_deviation = 0.0;  ///< max |ratio - 1|
};

using CoverPair = std::pair<CoverPoint, CoverPoint>;

/// Throws InvalidArgument when a pair is closer than separation_floor.
GrowthRatioReport growth_ratio_check(const SmoothEndo& f, const std::vector<CoverPair>& pairs, int k,
                                     double separation_floor = kDefaultSeparationFloor);

/// `count` sample pairs of the segment with chord length in [min_sep, max_sep],
/// drawn with the given seed.
std::vector<CoverPair> leaf_pairs(const LeafSegment& seg, double min_sep, double max_sep, int count,
                                  std::uint64_t seed);

struct AsymptoticRow {
    double floor = 0.0;
    double max_angle = 0.0;  ///< over sample pairs with |y - x| >= floor
    long long pairs = 0;
};

struct AsymptoticDirectionReport {
    std::vector<AsymptoticRow> rows;
    /// Smallest c with max_angle <= arctan(c / floor) on every row.
    double fitted_c = 0.0;
};

/// Angles between chords (y - x)/|y - x| and E^u_A. Throws InvalidArgument
/// if the segment is shorter than the largest floor.
AsymptoticDirectionReport asymptotic_direction_check(const LeafSegment& seg, const Vec& e_u,
                                                     const std::vector<double>& floors,
                                                     std::size_t max_points = 4000);

struct SandwichResult {
    bool holds = false;
    bool aligned = false;  ///< y - x within the alignment half-angle of E^u_A
    double alignment_angle = 0.0;
    /// |A^n (y - x)| / (e^{n lambda_u} |y - x|)
    double growth = 0.0;
    double lower_margin = 0.0;  ///< growth - (1 - eps)
    double upper_margin = 0.0;  ///< (1 + eps) - growth
};

/// Evaluates (1 - eps) e^{n lambda_u} |y - x| <= |A^n(y - x)| <= (1 + eps) e^{n lambda_u} |y - x|.
SandwichResult linear_sandwich_check(const LinearEndo& a, const CoverPoint& x, const CoverPoint& y, int n,
                                     double eps, double alignment_halfangle = 0.3);

}  // namespace anosov
