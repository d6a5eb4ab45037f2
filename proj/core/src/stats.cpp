#include "anosov/stats.hpp"

#include "anosov/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace anosov {

double mean(std::span<const double> xs)
{
    if (xs.empty()) throw InvalidArgument("mean: empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs)
{
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

namespace {

double sorted_percentile(const std::vector<double>& sorted, double q)
{
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double percentile(std::span<const double> xs, double q)
{
    if (xs.empty()) throw InvalidArgument("percentile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("percentile: q must lie in [0, 1]");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted_percentile(sorted, q);
}

Summary summarize(std::span<const double> xs)
{
    if (xs.empty()) throw InvalidArgument("summarize: empty sample");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    Summary s;
    s.count = static_cast<long long>(sorted.size());
    s.min = sorted.front();
    s.max = sorted.back();
    s.p01 = sorted_percentile(sorted, 0.01);
    s.p05 = sorted_percentile(sorted, 0.05);
    s.median = sorted_percentile(sorted, 0.5);
    s.p95 = sorted_percentile(sorted, 0.95);
    s.p99 = sorted_percentile(sorted, 0.99);
    s.mean = mean(xs);
    s.stddev = sample_stddev(xs);
    return s;
}

double fit_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_slope: need two or more paired values");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw InvalidArgument("fit_slope: x values are all equal");
    return sxy / sxx;
}

}  // namespace anosov
