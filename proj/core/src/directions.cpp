#include "anosov/directions.hpp"

#include "anosov/csv.hpp"
#include "anosov/error.hpp"
#include "anosov/parallel.hpp"
#include "anosov/random.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace anosov {
namespace {

double angle_to_line_set(const Vec& v, const Mat& orthonormal_basis)
{
    const Vec proj = orthonormal_basis * (orthonormal_basis.transpose() * v);
    return std::atan2((v - proj).norm(), proj.norm());
}

Vec normalized_or_throw(const Vec& v, const char* where)
{
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalBreakdown(std::string(where) + ": vector degenerated");
    return v / norm;
}

class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
    std::size_t find(std::size_t i)
    {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

  private:
    std::vector<std::size_t> parent_;
};

int separated_count_planar(const std::vector<Direction>& dirs, double tolerance, const Vec& reference)
{
    const std::size_t n = dirs.size();
    std::vector<double> angles;
    angles.reserve(2 * n);
    for (const auto& d : dirs) {
        const Vec& v = d.vector();
        double t = std::atan2(reference(0) * v(1) - reference(1) * v(0), reference.dot(v));
        if (t > kPi / 2) t -= kPi;
        if (t <= -kPi / 2) t += kPi;
        angles.push_back(t);
    }
    std::sort(angles.begin(), angles.end());
    for (std::size_t i = 0; i < n; ++i) angles.push_back(angles[i] + kPi);

    // Lines live on a circle of length pi. Greedy from a fixed first element
    // is optimal on the cut circle; trying every first element makes it exact.
    int best = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double stop = angles[i] + kPi - tolerance;
        const auto end = angles.begin() + static_cast<std::ptrdiff_t>(i + n);
        auto last = angles.begin() + static_cast<std::ptrdiff_t>(i);
        int count = 1;
        for (;;) {
            const auto next = std::upper_bound(last, end, *last + tolerance);
            if (next == end || !(*next < stop)) break;
            ++count;
            last = next;
        }
        best = std::max(best, count);
    }
    return best;
}

int separated_count_greedy(const std::vector<Direction>& dirs, double tolerance)
{
    std::vector<const Direction*> chosen;
    for (const auto& d : dirs) {
        const bool far = std::all_of(chosen.begin(), chosen.end(),
                                     [&](const Direction* c) { return angle(*c, d) > tolerance; });
        if (far) chosen.push_back(&d);
    }
    return static_cast<int>(chosen.size());
}

// sin angle(Mu, Mv) >= (s_n s_{n-1} / s_1^2) sin angle(u, v) for singular
// values s_1 >= ... >= s_n, so lines more than tol apart have images more
// than the returned value apart.
double transported_tolerance(const Mat& m, double tol)
{
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(m)};
    const auto& s = svd.singularValues();
    const Eigen::Index n = s.size();
    const double c = s(n - 1) * s(n - 2) / (s(0) * s(0));
    return c * std::sin(tol) * (1.0 - 1e-9);
}

}  // namespace

UnstableDirection unstable_direction(const SmoothEndo& f, const Prehistory& p, const DirectionOptions& opts)
{
    const int depth = p.depth();
    if (depth < opts.min_depth) {
        throw InvalidArgument("unstable_direction: pre-history depth " + std::to_string(depth) +
                              " is below the minimum " + std::to_string(opts.min_depth));
    }
    const LinearEndo& a = f.base();
    const Vec probe = opts.probe ? normalized_or_throw(*opts.probe, "unstable_direction") : a.e_u;
    if (angle_to_line_set(probe, a.e_s_basis) < opts.stable_cone_halfangle) {
        throw InvalidArgument("unstable_direction: probe lies inside the stable cone around E^s_A");
    }

    const int lag_depth = std::max(0, depth - opts.diagnostic_lag);
    Vec v = probe;
    Vec v_short = probe;
    for (int i = depth; i >= 1; --i) {
        const Mat jac = f.derivative(p.point(i));
        v = normalized_or_throw(jac * v, "unstable_direction");
        if (i <= lag_depth) v_short = normalized_or_throw(jac * v_short, "unstable_direction");
    }
    UnstableDirection out{Direction(v), 0.0};
    out.diagnostic = angle(out.direction, Direction(v_short));
    return out;
}

Direction stable_direction(const SmoothEndo& f, const TorusPoint& x, int depth)
{
    if (depth < 10) throw InvalidArgument("stable_direction: depth must be at least 10");
    std::vector<TorusPoint> orbit;
    orbit.reserve(static_cast<std::size_t>(depth) + 1);
    orbit.push_back(x);
    for (int j = 0; j < depth; ++j) orbit.push_back(f.apply(orbit.back()));
    return stable_directions_along(f, orbit).front();
}

std::vector<Direction> stable_directions_along(const SmoothEndo& f, const std::vector<TorusPoint>& orbit)
{
    const LinearEndo& a = f.base();
    if (a.splitting.stable_dim != 1) {
        throw InvalidArgument("stable_direction: requires a one-dimensional stable bundle");
    }
    if (orbit.empty()) return {};
    std::vector<Direction> out(orbit.size());
    Vec w = a.e_s_basis.col(0);
    out.back() = Direction(w);
    for (std::size_t j = orbit.size() - 1; j-- > 0;) {
        const Mat jac = f.derivative(orbit[j]);
        const Vec pulled = jac.partialPivLu().solve(w);
        const double norm = pulled.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw NumericalBreakdown(
                "stable_direction: ill-conditioned derivative product; reduce the depth");
        }
        w = pulled / norm;
        out[j] = Direction(w);
    }
    return out;
}

Direction push_forward(const SmoothEndo& f, const TorusPoint& x, const Direction& d)
{
    return Direction(f.derivative(x) * d.vector());
}

DirectionSpread direction_spread(const std::vector<Direction>& dirs, double tolerance, const Vec& reference)
{
    DirectionSpread out;
    const std::size_t k = dirs.size();
    if (k == 0) return out;
    DisjointSets sets(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double t = angle(dirs[i], dirs[j]);
            out.dispersion = std::max(out.dispersion, t);
            if (t <= tolerance) sets.unite(i, j);
        }
    }
    // Cluster ids in order of first appearance.
    std::vector<int> id_of_root(k, -1);
    out.cluster_of.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t root = sets.find(i);
        if (id_of_root[root] < 0) id_of_root[root] = out.cluster_count++;
        out.cluster_of[i] = id_of_root[root];
    }
    out.separated_count = reference.size() == 2 ? separated_count_planar(dirs, tolerance, reference)
                                                : separated_count_greedy(dirs, tolerance);
    return out;
}

DirectionCensus census(const SmoothEndo& f, const TorusPoint& x, const CensusMode& mode, double cluster_tolerance,
                       int threads)
{
    if (!(cluster_tolerance >= 0.0)) throw InvalidArgument("census: cluster tolerance must be non-negative");
    DirectionCensus out;
    out.base = x;
    out.depth = mode.depth;
    out.cluster_tolerance = cluster_tolerance;

    std::vector<Prehistory> histories;
    if (mode.kind == CensusMode::Kind::exhaustive) {
        histories = all_prehistories(f, x, mode.depth);
    } else {
        if (mode.count < 1) throw InvalidArgument("census: sample count must be positive");
        histories.resize(static_cast<std::size_t>(mode.count));
        parallel_for(histories.size(), threads, [&](std::size_t i) {
            histories[i] = random_prehistory(f, x, mode.depth, derive_seed(mode.seed, i));
        });
    }

    DirectionOptions opts;
    opts.min_depth = std::min(opts.min_depth, mode.depth);
    std::vector<Direction> dirs(histories.size());
    parallel_for(histories.size(), threads,
                 [&](std::size_t i) { dirs[i] = unstable_direction(f, histories[i], opts).direction; });

    const DirectionSpread spread = direction_spread(dirs, cluster_tolerance, f.base().e_u);
    out.dispersion = spread.dispersion;
    out.cluster_count = spread.cluster_count;
    out.separated_count = spread.separated_count;
    out.entries.reserve(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        out.entries.push_back({histories[i].word(), dirs[i], spread.cluster_of[i]});
    }
    return out;
}

void write_census_csv(std::ostream& os, const DirectionCensus& c)
{
    CsvWriter csv(os);
    const int n = c.base.dim();
    csv.field("word");
    for (int j = 0; j < n; ++j) csv.field("d_" + std::to_string(j));
    csv.field("cluster").end_row();
    for (const auto& e : c.entries) {
        csv.field(e.word);
        for (int j = 0; j < n; ++j) csv.field(e.direction[j]);
        csv.field(e.cluster).end_row();
    }
}

MonotonicityReport monotonicity_check(const SmoothEndo& f, const TorusPoint& x, int steps,
                                      const MonotonicityConfig& cfg)
{
    if (steps < 0) throw InvalidArgument("monotonicity_check: steps must be non-negative");
    MonotonicityReport report;
    DirectionOptions opts;
    opts.min_depth = std::min(opts.min_depth, cfg.depth);

    auto fresh_sample = [&](const TorusPoint& at, std::uint64_t stream) {
        std::vector<Prehistory> out(static_cast<std::size_t>(cfg.samples));
        parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
            out[i] = random_prehistory(f, at, cfg.depth, derive_seed(derive_seed(cfg.seed, stream), i));
        });
        return out;
    };
    auto directions_of = [&](const std::vector<Prehistory>& hs) {
        std::vector<Direction> out(hs.size());
        parallel_for(hs.size(), cfg.threads,
                     [&](std::size_t i) { out[i] = unstable_direction(f, hs[i], opts).direction; });
        return out;
    };
    double transported = cfg.cluster_tolerance;
    auto record = [&](const TorusPoint& at, const std::vector<Direction>& dirs) {
        const DirectionSpread s = direction_spread(dirs, cfg.cluster_tolerance, f.base().e_u);
        const DirectionSpread t = direction_spread(dirs, transported, f.base().e_u);
        report.rows.push_back({at, static_cast<int>(dirs.size()), s.cluster_count, s.separated_count, s.dispersion,
                               transported, t.separated_count});
    };

    TorusPoint current = x;
    std::vector<Prehistory> histories = fresh_sample(current, 0);
    std::vector<Direction> dirs = directions_of(histories);
    record(current, dirs);

    for (int j = 0; j < steps; ++j) {
        const TorusPoint next = f.apply(current);
        std::vector<Prehistory> shifted(histories.size());
        parallel_for(histories.size(), cfg.threads, [&](std::size_t i) { shifted[i] = shift_forward(f, histories[i]); });
        std::vector<Direction> shifted_dirs = directions_of(shifted);
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const Direction pushed = push_forward(f, current, dirs[i]);
            report.max_membership_residual = std::max(report.max_membership_residual, angle(pushed, shifted_dirs[i]));
        }
        std::vector<Prehistory> fresh = fresh_sample(next, static_cast<std::uint64_t>(j) + 1);
        std::vector<Direction> fresh_dirs = directions_of(fresh);

        histories = std::move(shifted);
        histories.insert(histories.end(), std::make_move_iterator(fresh.begin()), std::make_move_iterator(fresh.end()));
        dirs = std::move(shifted_dirs);
        dirs.insert(dirs.end(), fresh_dirs.begin(), fresh_dirs.end());
        transported = transported_tolerance(f.derivative(current), transported);
        current = next;
        record(current, dirs);
    }

    report.non_decreasing = true;
    report.separated_non_decreasing = true;
    report.transported_non_decreasing = true;
    for (std::size_t j = 1; j < report.rows.size(); ++j) {
        if (report.rows[j].transported_count < report.rows[j - 1].transported_count) {
            report.transported_non_decreasing = false;
        }
        if (report.rows[j].cluster_count < report.rows[j - 1].cluster_count) report.non_decreasing = false;
        if (report.rows[j].separated_count < report.rows[j - 1].separated_count) {
            report.separated_non_decreasing = false;
        }
    }
    return report;
}

std::vector<double> angle_decay(const SmoothEndo& f, const TorusPoint& x, const Direction& e1, const Direction& e2,
                                int steps)
{
    if (steps < 0) throw InvalidArgument("angle_decay: steps must be non-negative");
    Vec u = e1.vector();
    Vec b = e2.vector();
    if (b.dot(u) < 0.0) b = -b;
    const double theta0 = line_angle(u, b);
    if (!(theta0 < kPi / 2)) throw InvalidArgument("angle_decay: directions are orthogonal");
    Vec w = Vec::Zero(u.size());
    if (theta0 > 0.0) {
        const Vec perp = b - b.dot(u) * u;
        w = std::tan(theta0) * perp / perp.norm();
    }

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.push_back(std::atan(w.norm()));
    TorusPoint point = x;
    for (int j = 0; j < steps; ++j) {
        const Mat jac = f.derivative(point);
        const Vec mu = jac * u;
        const Vec mw = jac * w;
        const double mu2 = mu.squaredNorm();
        const double c = mw.dot(mu) / mu2;
        const Vec w_perp = mw - c * mu;
        const double mu_norm = std::sqrt(mu2);
        u = mu / mu_norm;
        w = w_perp / ((1.0 + c) * mu_norm);
        out.push_back(std::atan(w.norm()));
        point = f.apply(point);
    }
    return out;
}

}  // namespace anosov
