#include "anosov/foliation.hpp"

#include "anosov/csv.hpp"
#include "anosov/error.hpp"
#include "anosov/random.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace anosov {
namespace {

std::vector<std::size_t> thinned_indices(std::size_t count, std::size_t max_points)
{
    const std::size_t stride = std::max<std::size_t>(1, (count + max_points - 1) / std::max<std::size_t>(max_points, 1));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < count; i += stride) out.push_back(i);
    if (!out.empty() && out.back() != count - 1) out.push_back(count - 1);
    return out;
}

}  // namespace

std::vector<CoverPoint> cover_backward_orbit(const SmoothEndo& f, const CoverPoint& p, int depth)
{
    if (depth < 0) throw InvalidArgument("cover_backward_orbit: depth must be non-negative");
    std::vector<CoverPoint> out;
    out.reserve(static_cast<std::size_t>(depth));
    CoverPoint q = p;
    for (int i = 0; i < depth; ++i) {
        q = f.inverse_lift(q);
        out.push_back(q);
    }
    return out;
}

Direction cover_unstable_direction(const SmoothEndo& f, const CoverPoint& p, int depth)
{
    if (depth < 1) throw InvalidArgument("cover_unstable_direction: depth must be positive");
    const auto orbit = cover_backward_orbit(f, p, depth);
    Vec v = f.base().e_u;
    for (auto it = orbit.rbegin(); it != orbit.rend(); ++it) {
        v = f.derivative(*it) * v;
        v /= v.norm();
    }
    return Direction(v);
}

LeafSegment trace_leaf(const SmoothEndo& f, const CoverPoint& p, double arclength, double step,
                       const LeafOptions& opts)
{
    if (!(arclength > 0.0) || !std::isfinite(arclength)) throw InvalidArgument("trace_leaf: arclength must be positive");
    if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("trace_leaf: step must be positive");
    const auto steps = static_cast<std::size_t>(std::ceil(arclength / step - 1e-9));
    const double cos_turn = std::cos(opts.max_turn);

    auto field = [&](const Vec& z) { return cover_unstable_direction(f, CoverPoint(z), opts.depth).vector(); };
    auto orient = [&](Vec v, const Vec& ref) {
        double c = v.dot(ref);
        if (c < 0.0) {
            v = -v;
            c = -c;
        }
        if (c < cos_turn) {
            throw NumericalBreakdown("trace_leaf: unstable direction field turns by more than " +
                                     format_double(opts.max_turn) + " rad within one step; reduce the step");
        }
        return v;
    };

    const Vec d0 = field(p.coords);
    auto side = [&](double sign, std::vector<Vec>& points, std::vector<Vec>& tangents) {
        Vec x = p.coords;
        Vec k1 = sign * d0;
        for (std::size_t s = 0; s < steps; ++s) {
            const Vec k2 = orient(field(x + 0.5 * step * k1), k1);
            const Vec k3 = orient(field(x + 0.5 * step * k2), k1);
            const Vec k4 = orient(field(x + step * k3), k1);
            x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            k1 = orient(field(x), k1);
            points.push_back(x);
            tangents.push_back(k1);
        }
    };

    std::vector<Vec> back_points, back_tangents, fwd_points, fwd_tangents;
    side(-1.0, back_points, back_tangents);
    side(1.0, fwd_points, fwd_tangents);

    LeafSegment seg;
    seg.direction_depth = opts.depth;
    seg.step = step;
    seg.origin_index = steps;
    const std::size_t total = 2 * steps + 1;
    seg.samples.reserve(total);
    seg.tangents.reserve(total);
    seg.arclengths.reserve(total);
    for (std::size_t i = back_points.size(); i-- > 0;) {
        seg.samples.emplace_back(back_points[i]);
        seg.tangents.emplace_back(back_tangents[i]);
    }
    seg.samples.push_back(p);
    seg.tangents.emplace_back(d0);
    for (std::size_t i = 0; i < fwd_points.size(); ++i) {
        seg.samples.emplace_back(fwd_points[i]);
        seg.tangents.emplace_back(fwd_tangents[i]);
    }
    // RK4 integrates a unit field, so the parameter is arclength.
    for (std::size_t i = 0; i < total; ++i) seg.arclengths.push_back(static_cast<double>(i) * step);
    return seg;
}

void write_leaf_csv(std::ostream& os, const LeafSegment& seg)
{
    CsvWriter csv(os);
    const int n = seg.samples.empty() ? 0 : seg.samples.front().dim();
    csv.field("arclength");
    for (int j = 0; j < n; ++j) csv.field("x_" + std::to_string(j));
    for (int j = 0; j < n; ++j) csv.field("d_" + std::to_string(j));
    csv.end_row();
    for (std::size_t i = 0; i < seg.samples.size(); ++i) {
        csv.field(seg.arclengths[i]);
        for (int j = 0; j < n; ++j) csv.field(seg.samples[i].coords(j));
        for (int j = 0; j < n; ++j) csv.field(seg.tangents[i][j]);
        csv.end_row();
    }
}

QuasiIsometryFit quasi_isometry_fit(const LeafSegment& seg, double separation_floor, std::size_t max_points)
{
    const auto idx = thinned_indices(seg.samples.size(), max_points);
    QuasiIsometryFit fit;
    fit.separation_floor = separation_floor;
    struct PairData {
        double chord;
        double dw;
    };
    std::vector<PairData> pairs;
    pairs.reserve(idx.size() * (idx.size() - 1) / 2);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const double chord = (seg.samples[idx[b]].coords - seg.samples[idx[a]].coords).norm();
            const double dw = seg.arclengths[idx[b]] - seg.arclengths[idx[a]];
            pairs.push_back({chord, dw});
            if (chord >= 1.0) {
                ++fit.long_pairs;
                fit.q_fit = std::max(fit.q_fit, dw / chord);
            }
            if (chord >= separation_floor) fit.max_ratio = std::max(fit.max_ratio, dw / chord);
        }
    }
    fit.pairs = static_cast<long long>(pairs.size());
    if (fit.long_pairs < 100) {
        throw InvalidArgument("quasi_isometry_fit: segment too short (need 100 sample pairs at distance >= 1)");
    }
    for (const auto& pr : pairs) fit.b_fit = std::max(fit.b_fit, pr.dw - fit.q_fit * pr.chord);
    return fit;
}

GrowthRatioReport growth_ratio_check(const SmoothEndo& f, const std::vector<CoverPair>& pairs, int k,
                                     double separation_floor)
{
    if (k < 0) throw InvalidArgument("growth_ratio_check: k must be non-negative");
    GrowthRatioReport report;
    report.steps = k;
    report.separation_floor = separation_floor;
    const Mat& a = f.base().real_matrix;
    for (const auto& [x, y] : pairs) {
        Vec d = y.coords - x.coords;
        if (d.norm() < separation_floor) {
            throw InvalidArgument("growth_ratio_check: pair separation " + format_double(d.norm()) +
                                  " is below the floor " + format_double(separation_floor));
        }
        CoverPoint fx = x;
        CoverPoint fy = y;
        for (int j = 0; j < k; ++j) {
            fx = f.lift_apply(fx);
            fy = f.lift_apply(fy);
            d = a * d;
        }
        const double ratio = (fy.coords - fx.coords).norm() / d.norm();
        report.ratios.push_back(ratio);
        report.max_deviation = std::max(report.max_deviation, std::fabs(ratio - 1.0));
    }
    return report;
}

std::vector<CoverPair> leaf_pairs(const LeafSegment& seg, double min_sep, double max_sep, int count,
                                  std::uint64_t seed)
{
    if (count < 0 || !(min_sep <= max_sep)) throw InvalidArgument("leaf_pairs: invalid range or count");
    std::vector<CoverPair> out;
    Rng rng(seed);
    const auto n = static_cast<int>(seg.samples.size());
    const long long attempts = 1000LL * std::max(count, 1);
    for (long long t = 0; t < attempts && static_cast<int>(out.size()) < count; ++t) {
        const int i = uniform_index(rng, n);
        const int j = uniform_index(rng, n);
        const double chord = (seg.samples[j].coords - seg.samples[i].coords).norm();
        if (chord >= min_sep && chord <= max_sep) out.emplace_back(seg.samples[i], seg.samples[j]);
    }
    if (static_cast<int>(out.size()) < count) {
        throw InvalidArgument("leaf_pairs: segment has too few pairs in the requested separation range");
    }
    return out;
}

AsymptoticDirectionReport asymptotic_direction_check(const LeafSegment& seg, const Vec& e_u,
                                                     const std::vector<double>& floors, std::size_t max_points)
{
    if (floors.empty()) throw InvalidArgument("asymptotic_direction_check: no floors given");
    const double largest = *std::max_element(floors.begin(), floors.end());
    if (seg.samples.empty() || (seg.samples.back().coords - seg.samples.front().coords).norm() < largest) {
        throw InvalidArgument("asymptotic_direction_check: segment does not reach the largest floor");
    }
    const Direction reference(e_u);
    AsymptoticDirectionReport report;
    for (double fl : floors) report.rows.push_back({fl, 0.0, 0});

    const auto idx = thinned_indices(seg.samples.size(), max_points);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const Vec chord = seg.samples[idx[b]].coords - seg.samples[idx[a]].coords;
            const double len = chord.norm();
            if (len < 1e-300) continue;
            double theta = -1.0;
            for (auto& row : report.rows) {
                if (len < row.floor) continue;
                if (theta < 0.0) theta = angle(Direction(chord), reference);
                row.max_angle = std::max(row.max_angle, theta);
                ++row.pairs;
            }
        }
    }
    for (const auto& row : report.rows) report.fitted_c = std::max(report.fitted_c, row.floor * std::tan(row.max_angle));
    return report;
}

SandwichResult linear_sandwich_check(const LinearEndo& a, const CoverPoint& x, const CoverPoint& y, int n,
                                     double eps, double alignment_halfangle)
{
    if (n < 0) throw InvalidArgument("linear_sandwich_check: n must be non-negative");
    Vec d = y.coords - x.coords;
    const double len = d.norm();
    if (!(len > 0.0)) throw InvalidArgument("linear_sandwich_check: x and y coincide");
    SandwichResult r;
    r.alignment_angle = angle(Direction(d), Direction(a.e_u));
    r.aligned = r.alignment_angle <= alignment_halfangle;
    for (int j = 0; j < n; ++j) d = a.real_matrix * d;
    r.growth = d.norm() / (std::exp(n * a.lambda_u) * len);
    r.lower_margin = r.growth - (1.0 - eps);
    r.upper_margin = (1.0 + eps) - r.growth;
    r.holds = r.lower_margin >= 0.0 && r.upper_margin >= 0.0;
    return r;
}

}  // namespace anosov
