#include "anosov/lyapunov.hpp"

#include "anosov/csv.hpp"
#include "anosov/directions.hpp"
#include "anosov/error.hpp"
#include "anosov/parallel.hpp"
#include "anosov/random.hpp"

#include <Eigen/LU>

#include <cmath>
#include <ostream>

namespace anosov {
namespace {

void check_window(int n, int burn_in)
{
    if (n < 1) throw InvalidArgument("lyapunov: steps must be at least 1");
    if (burn_in < 0) throw InvalidArgument("lyapunov: burn-in must be non-negative");
}

TorusPoint random_point(Rng& rng, int n)
{
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform01(rng);
    return TorusPoint(v);
}

}  // namespace

LyapunovEstimate unstable_lyapunov(const SmoothEndo& f, const Prehistory& p, int n, int burn_in)
{
    check_window(n, burn_in);
    Vec e = unstable_direction(f, p).direction.vector();
    TorusPoint x = p.base();
    double sum = 0.0;
    for (int j = 0; j < burn_in + n; ++j) {
        const Vec image = f.derivative(x) * e;
        const double norm = image.norm();
        if (j >= burn_in) sum += std::log(norm);
        e = image / norm;
        x = f.apply(x);
    }
    LyapunovEstimate out;
    out.value = sum / n;
    out.steps = n;
    out.prehistory_depth = p.depth();
    out.burn_in = burn_in;
    out.base = p.base();
    return out;
}

LyapunovEstimate stable_lyapunov(const SmoothEndo& f, const TorusPoint& x, int n, int burn_in, int tail)
{
    check_window(n, burn_in);
    if (tail < 0) throw InvalidArgument("stable_lyapunov: tail must be non-negative");
    if (f.base().splitting.stable_dim != 1) {
        throw InvalidArgument("stable_lyapunov: requires a one-dimensional stable bundle");
    }
    const int length = burn_in + n + tail;
    std::vector<TorusPoint> orbit;
    orbit.reserve(static_cast<std::size_t>(length) + 1);
    orbit.push_back(x);
    for (int j = 0; j < length; ++j) orbit.push_back(f.apply(orbit.back()));

    // With s_{j+1} a unit stable vector and w = Df(x_j)^{-1} s_{j+1},
    // s_j = w / |w| and |Df(x_j) s_j| = 1 / |w|.
    Vec s = f.base().e_s_basis.col(0);
    double sum = 0.0;
    for (int j = length - 1; j >= 0; --j) {
        const Vec w = f.derivative(orbit[static_cast<std::size_t>(j)]).partialPivLu().solve(s);
        const double norm = w.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalBreakdown("stable_lyapunov: degenerate pull-back");
        if (j >= burn_in && j < burn_in + n) sum -= std::log(norm);
        s = w / norm;
    }
    LyapunovEstimate out;
    out.value = sum / n;
    out.steps = n;
    out.burn_in = burn_in;
    out.base = x;
    return out;
}

ExponentCensus exponent_census(const SmoothEndo& f, const ExponentCensusConfig& cfg)
{
    if (cfg.points < 1) throw InvalidArgument("exponent_census: point count must be positive");
    ExponentCensus out;
    out.config = cfg;
    out.lambda_u_linear = f.base().lambda_u;
    out.estimates.resize(static_cast<std::size_t>(cfg.points));
    parallel_for(out.estimates.size(), cfg.threads, [&](std::size_t i) {
        const std::uint64_t seed = derive_seed(cfg.seed, i);
        Rng rng(seed);
        const TorusPoint x = random_point(rng, f.dim());
        const Prehistory p = random_prehistory(f, x, cfg.depth, rng());
        LyapunovEstimate e = unstable_lyapunov(f, p, cfg.steps, cfg.burn_in);
        e.seed = seed;
        out.estimates[i] = e;
    });

    std::vector<double> values;
    values.reserve(out.estimates.size());
    for (const auto& e : out.estimates) values.push_back(e.value);
    out.summary = summarize(values);
    const double threshold = out.lambda_u_linear + cfg.slack;
    long long exceed = 0;
    for (double v : values) exceed += v > threshold ? 1 : 0;
    out.exceed_fraction = static_cast<double>(exceed) / static_cast<double>(values.size());
    const double se = out.summary.stddev / std::sqrt(static_cast<double>(values.size()));
    const double margin = out.lambda_u_linear - out.summary.mean;
    out.margin_in_standard_errors = se > 0.0 ? margin / se : (margin == 0.0 ? 0.0 : std::copysign(INFINITY, margin));
    return out;
}

void write_exponent_csv(std::ostream& os, const ExponentCensus& census)
{
    CsvWriter csv(os);
    const int n = census.estimates.empty() ? 0 : census.estimates.front().base.dim();
    csv.field("index");
    for (int j = 0; j < n; ++j) csv.field("x_" + std::to_string(j));
    csv.field("estimate").field("n").field("depth").field("seed").end_row();
    for (std::size_t i = 0; i < census.estimates.size(); ++i) {
        const auto& e = census.estimates[i];
        csv.field(static_cast<long long>(i));
        for (int j = 0; j < n; ++j) csv.field(e.base[j]);
        csv.field(e.value).field(e.steps).field(e.prehistory_depth).field(e.seed).end_row();
    }
}

}  // namespace anosov
