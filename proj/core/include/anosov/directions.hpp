#pragma once

#include "anosov/direction.hpp"
#include "anosov/prehistory.hpp"
#include "anosov/smooth_endo.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace anosov {

/// Default single-linkage tolerance and "non-special at x" dispersion threshold.
inline constexpr double kDefaultClusterTolerance = 1e-4;
inline constexpr double kDefaultDispersionThreshold = 1e-3;

struct DirectionOptions {
    int min_depth = 10;
    /// Vector pushed forward from x_{-N}; E^u_A when empty.
    std::optional<Vec> probe;
    /// The probe must make at least this angle with E^s_A.
    double stable_cone_halfangle = 0.3;
    /// The convergence diagnostic compares depth N with depth N - lag.
    int diagnostic_lag = 5;
};

struct UnstableDirection {
    Direction direction;
    /// Angle between the results for depths N and N - lag.
    double diagnostic = 0.0;
};

/// E^u at x_0 for the pre-history p: Df(x_{-1}) ... Df(x_{-N}) probe,
/// renormalized after every factor.
UnstableDirection unstable_direction(const SmoothEndo& f, const Prehistory& p, const DirectionOptions& opts = {});

/// E^s at x, which only depends on the forward orbit:
/// (Df^N(x))^{-1} E^s_A, applied one inverse factor at a time.
/// Requires a one-dimensional stable bundle.
Direction stable_direction(const SmoothEndo& f, const TorusPoint& x, int depth);

/// Stable directions at every point of a forward orbit segment, obtained by
/// pulling E^s_A back from orbit.back() along the whole segment. Entry j is
/// accurate once the segment extends well beyond j.
std::vector<Direction> stable_directions_along(const SmoothEndo& f, const std::vector<TorusPoint>& orbit);

/// canonical(Df(x) d).
Direction push_forward(const SmoothEndo& f, const TorusPoint& x, const Direction& d);

/// Which pre-histories a census looks at.
struct CensusMode {
    enum class Kind { exhaustive, sampled };
    Kind kind = Kind::sampled;
    int depth = 40;
    int count = 200;          ///< sampled mode only
    std::uint64_t seed = 0;   ///< sampled mode only

    static CensusMode exhaustive(int depth) { return {Kind::exhaustive, depth, 0, 0}; }
    static CensusMode sampled(int count, int depth, std::uint64_t seed) { return {Kind::sampled, depth, count, seed}; }
};

struct CensusEntry {
    std::string word;
    Direction direction;
    int cluster = 0;
};

/// Finite sample of the set of unstable directions over one base point.
struct DirectionCensus {
    TorusPoint base;
    int depth = 0;
    std::vector<CensusEntry> entries;
    /// Largest pairwise projective angle.
    double dispersion = 0.0;
    /// Single-linkage clusters at cluster_tolerance. Directions in different
    /// clusters are more than the tolerance apart, so this is a lower bound
    /// on the number of distinct unstable directions at the base point.
    int cluster_count = 0;
    /// Size of a largest subset with pairwise angles above the tolerance
    /// (exact for n = 2). Non-decreasing when the sample grows.
    int separated_count = 0;
    double cluster_tolerance = kDefaultClusterTolerance;
};

/// Dispersion and both cluster counts of an arbitrary direction sample.
struct DirectionSpread {
    double dispersion = 0.0;
    int cluster_count = 0;
    int separated_count = 0;
    std::vector<int> cluster_of;
};
DirectionSpread direction_spread(const std::vector<Direction>& dirs, double tolerance, const Vec& reference);

DirectionCensus census(const SmoothEndo& f, const TorusPoint& x, const CensusMode& mode,
                       double cluster_tolerance = kDefaultClusterTolerance, int threads = 0);

/// Columns: word, d_0 ... d_{n-1}, cluster.
void write_census_csv(std::ostream& os, const DirectionCensus& c);

struct MonotonicityRow {
    TorusPoint point;
    int sample_count = 0;
    int cluster_count = 0;
    int separated_count = 0;
    double dispersion = 0.0;
    /// Tolerance carried along the orbit: at f(x) it is the smallest
    /// possible image of the tolerance at x under the projective action of
    /// Df(x), so pushed-forward separated directions stay separated.
    double transported_tolerance = 0.0;
    int transported_count = 0;  ///< separated_count at transported_tolerance
};

struct MonotonicityReport {
    std::vector<MonotonicityRow> rows;  ///< x, f(x), ..., f^k(x)
    bool non_decreasing = false;            ///< on cluster_count
    bool separated_non_decreasing = false;  ///< on separated_count
    bool transported_non_decreasing = false;  ///< on transported_count
    /// Largest angle between Df(x_j) E^u(p) and the direction recomputed
    /// for the shifted pre-history at x_{j+1}.
    double max_membership_residual = 0.0;
};

struct MonotonicityConfig {
    int samples = 200;
    int depth = 40;
    std::uint64_t seed = 0;
    double cluster_tolerance = kDefaultClusterTolerance;
    int threads = 0;
};

/// Censuses along x, f(x), ..., f^steps(x). The sample at f^{j+1}(x) is the
/// push-forward of every pre-history used at f^j(x) plus fresh samples.
/// Counts at the fixed tolerance need not be monotone: Df contracts angles
/// between unstable directions, so clusters at x can merge at f(x).
MonotonicityReport monotonicity_check(const SmoothEndo& f, const TorusPoint& x, int steps,
                                      const MonotonicityConfig& cfg);

/// Angles between Df^j(x) e1 and Df^j(x) e2 for j = 0..steps along the
/// forward orbit of x. The pair is carried as (u, w) with v ~ u + w and
/// w orthogonal to u, so tiny angles keep full relative precision.
std::vector<double> angle_decay(const SmoothEndo& f, const TorusPoint& x, const Direction& e1, const Direction& e2,
                                int steps);

}  // namespace anosov
