#pragma once

#include <span>

namespace anosov {

double mean(std::span<const double> xs);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> xs);

/// Linear-interpolation percentile (R type 7), q in [0, 1].
double percentile(std::span<const double> xs, double q);

struct Summary {
    long long count = 0;
    double min = 0.0;
    double p01 = 0.0;
    double p05 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
    double max = 0.0;
};

Summary summarize(std::span<const double> xs);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace anosov
