#pragma once

#include "anosov/prehistory.hpp"
#include "anosov/smooth_endo.hpp"
#include "anosov/stats.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace anosov {

inline constexpr int kDefaultBurnIn = 100;

struct LyapunovEstimate {
    double value = 0.0;  ///< nats per iterate
    int steps = 0;
    int prehistory_depth = 0;
    int burn_in = 0;
    TorusPoint base;
    std::uint64_t seed = 0;
};

/// Average of log |Df(x_j) e_j| for j in [burn_in, burn_in + n), where e_0 is
/// the unstable direction of p and e_{j+1} = Df(x_j) e_j / |Df(x_j) e_j|.
LyapunovEstimate unstable_lyapunov(const SmoothEndo& f, const Prehistory& p, int n, int burn_in = kDefaultBurnIn);

/// Same average along the stable directions of the forward orbit of x,
/// which are pulled back from `tail` steps beyond the averaging window.
/// Uses the same index window as unstable_lyapunov, so the two estimates at
/// one base point are matched.
LyapunovEstimate stable_lyapunov(const SmoothEndo& f, const TorusPoint& x, int n, int burn_in = kDefaultBurnIn,
                                 int tail = 40);

struct ExponentCensusConfig {
    int points = 500;
    int steps = 20000;
    int depth = 40;
    int burn_in = kDefaultBurnIn;
    double slack = 0.01;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct ExponentCensus {
    ExponentCensusConfig config;
    double lambda_u_linear = 0.0;
    std::vector<LyapunovEstimate> estimates;
    Summary summary;
    /// Fraction of estimates above lambda_u_linear + slack.
    double exceed_fraction = 0.0;
    /// (lambda_u_linear - mean) / standard error; positive when the mean is below.
    double margin_in_standard_errors = 0.0;
};

/// Estimates at Lebesgue-random base points with random pre-histories.
/// Sample i is generated from derive_seed(seed, i) alone.
ExponentCensus exponent_census(const SmoothEndo& f, const ExponentCensusConfig& cfg);

/// Columns: index, x_0 ... x_{n-1}, estimate, n, depth, seed.
void write_exponent_csv(std::ostream& os, const ExponentCensus& census);

}  // namespace anosov
