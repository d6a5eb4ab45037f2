#include "anosov/ergodic.hpp"

#include "anosov/csv.hpp"
#include "anosov/error.hpp"
#include "anosov/parallel.hpp"
#include "anosov/random.hpp"
#include "anosov/stats.hpp"

#include <Eigen/LU>

#include <cmath>
#include <ostream>
#include <sstream>

namespace anosov {
namespace {

TorusPoint random_point(Rng& rng, int n)
{
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform01(rng);
    return TorusPoint(v);
}

}  // namespace

Observable Observable::constant(double value)
{
    return Observable(Kind::constant, IntVec(), value);
}

Observable Observable::cosine(const IntVec& k)
{
    if (k.isZero()) throw InvalidArgument("Observable: frequency vector must be nonzero");
    return Observable(Kind::cosine, k, 0.0);
}

Observable Observable::sine(const IntVec& k)
{
    if (k.isZero()) throw InvalidArgument("Observable: frequency vector must be nonzero");
    return Observable(Kind::sine, k, 0.0);
}

double Observable::operator()(const TorusPoint& x) const
{
    if (kind_ == Kind::constant) return value_;
    if (x.dim() != k_.size()) throw InvalidArgument("Observable: dimension mismatch");
    // Reduce <k, x> mod 1 before scaling so large k keep full precision.
    double phase = 0.0;
    for (Eigen::Index i = 0; i < k_.size(); ++i) phase += static_cast<double>(k_(i)) * x[static_cast<int>(i)];
    phase -= std::floor(phase);
    return kind_ == Kind::cosine ? std::cos(kTwoPi * phase) : std::sin(kTwoPi * phase);
}

std::string Observable::name() const
{
    std::ostringstream os;
    if (kind_ == Kind::constant) {
        os << "const(" << format_double(value_) << ")";
        return os.str();
    }
    os << (kind_ == Kind::cosine ? "cos" : "sin") << "(2pi*(";
    bool first = true;
    for (Eigen::Index i = 0; i < k_.size(); ++i) {
        if (k_(i) == 0) continue;
        if (!first && k_(i) > 0) os << '+';
        os << k_(i) << "*x" << i;
        first = false;
    }
    os << "))";
    return os.str();
}

double birkhoff_average(const SmoothEndo& f, const Observable& phi, const TorusPoint& x, int n)
{
    if (n < 1) throw InvalidArgument("birkhoff_average: n must be at least 1");
    double sum = 0.0;
    TorusPoint y = x;
    for (int j = 0; j < n; ++j) {
        sum += phi(y);
        if (j + 1 < n) y = f.apply(y);
    }
    return sum / n;
}

double birkhoff_average_along(const Observable& phi, const Prehistory& p)
{
    if (p.depth() < 1) throw InvalidArgument("birkhoff_average_along: depth must be at least 1");
    double sum = 0.0;
    for (int i = 1; i <= p.depth(); ++i) sum += phi(p.point(i));
    return sum / p.depth();
}

double conservativity_defect(const SmoothEndo& f, int points, std::uint64_t seed)
{
    Rng rng(seed);
    const auto degree = static_cast<double>(f.base().degree);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const TorusPoint x = random_point(rng, f.dim());
        worst = std::max(worst, std::fabs(std::fabs(f.derivative(x).determinant()) - degree));
    }
    return worst;
}

ErgodicityReport ergodicity_test(const SmoothEndo& f, const std::vector<Observable>& observables,
                                 const ErgodicityConfig& cfg)
{
    if (cfg.starts < 1 || cfg.steps < 1) throw InvalidArgument("ergodicity_test: starts and steps must be positive");
    ErgodicityReport report;
    report.config = cfg;
    report.conservativity_defect = conservativity_defect(f, cfg.conservativity_points, derive_seed(cfg.seed, ~0ULL));
    if (!(report.conservativity_defect <= cfg.conservativity_tolerance)) {
        throw InvalidArgument("ergodicity_test: map is not conservative (|det Df| deviates from |det A| by " +
                              format_double(report.conservativity_defect) + ")");
    }

    const std::size_t m = observables.size();
    std::vector<std::vector<double>> sums(static_cast<std::size_t>(cfg.starts), std::vector<double>(m, 0.0));
    parallel_for(sums.size(), cfg.threads, [&](std::size_t s) {
        Rng rng(derive_seed(cfg.seed, s));
        TorusPoint y = random_point(rng, f.dim());
        auto& acc = sums[s];
        if (cfg.mode == OrbitMode::forward) {
            for (int j = 0; j < cfg.steps; ++j) {
                for (std::size_t o = 0; o < m; ++o) acc[o] += observables[o](y);
                if (j + 1 < cfg.steps) y = f.apply(y);
            }
        } else {
            for (int j = 0; j < cfg.steps; ++j) {
                y = f.preimage(y, uniform_index(rng, f.degree()));
                for (std::size_t o = 0; o < m; ++o) acc[o] += observables[o](y);
            }
        }
    });

    report.pass = true;
    for (std::size_t o = 0; o < m; ++o) {
        ObservableResult r;
        r.name = observables[o].name();
        r.exact_mean = observables[o].exact_mean();
        r.averages.reserve(sums.size());
        for (const auto& acc : sums) r.averages.push_back(acc[o] / cfg.steps);
        r.sample_mean = mean(r.averages);
        r.sample_std = sample_stddev(r.averages);
        r.mean_ok = std::fabs(r.sample_mean - r.exact_mean) <= cfg.mean_tolerance;
        r.std_ok = r.sample_std < cfg.std_threshold;
        r.pass = r.mean_ok && r.std_ok;
        report.pass = report.pass && r.pass;
        report.observables.push_back(std::move(r));
    }
    return report;
}

void write_ergodicity_csv(std::ostream& os, const ErgodicityReport& report)
{
    CsvWriter csv(os);
    csv.field("observable").field("start").field("average").end_row();
    for (const auto& r : report.observables) {
        for (std::size_t s = 0; s < r.averages.size(); ++s) {
            csv.field(r.name).field(static_cast<long long>(s)).field(r.averages[s]).end_row();
        }
    }
}

}  // namespace anosov
