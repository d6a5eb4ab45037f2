#pragma once

#include "anosov/prehistory.hpp"
#include "anosov/smooth_endo.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace anosov {

/// A constant, or a trigonometric monomial cos / sin(2 pi <k, x>) with k != 0.
class Observable {
  public:
    enum class Kind { constant, cosine, sine };

    static Observable constant(double value);
    static Observable cosine(const IntVec& k);
    static Observable sine(const IntVec& k);

    Kind kind() const noexcept { return kind_; }
    const IntVec& frequency() const noexcept { return k_; }
    double operator()(const TorusPoint& x) const;
    /// Exact space average: the constant itself, 0 for monomials.
    double exact_mean() const noexcept { return kind_ == Kind::constant ? value_ : 0.0; }
    /// Bounds of the range, used for sanity checks.
    double lower_bound() const noexcept { return kind_ == Kind::constant ? value_ : -1.0; }
    double upper_bound() const noexcept { return kind_ == Kind::constant ? value_ : 1.0; }
    /// e.g. "cos(2pi*(1*x0+1*x1))" or "const(1)".
    std::string name() const;

  private:
    Observable(Kind kind, IntVec k, double value) : kind_(kind), k_(std::move(k)), value_(value) {}
    Kind kind_;
    IntVec k_;
    double value_;
};

/// (1/n) sum_{j<n} phi(f^j(x)) along the floating-point forward orbit.
///
/// For a linear map with even determinant the forward orbit collapses onto 0
/// in floating point after a few dozen steps (every step drops at least one
/// mantissa bit), so averages of linear maps should use birkhoff_average_along.
double birkhoff_average(const SmoothEndo& f, const Observable& phi, const TorusPoint& x, int n);

/// Average of phi over x_{-n}, ..., x_{-1}: the forward orbit segment of
/// length n that starts at the deepest point of the pre-history p.
double birkhoff_average_along(const Observable& phi, const Prehistory& p);

/// Largest | |det Df(x)| - |det A| | over `points` uniformly random x.
double conservativity_defect(const SmoothEndo& f, int points, std::uint64_t seed);

enum class OrbitMode {
    /// Random backward walk of length n from a uniform x_0; its time reversal
    /// is a forward orbit whose start x_{-n} is again Lebesgue-distributed.
    backward_walk,
    forward,
};

struct ErgodicityConfig {
    int starts = 100;
    int steps = 100000;
    std::uint64_t seed = 0;
    double mean_tolerance = 0.01;
    double std_threshold = 0.02;
    OrbitMode mode = OrbitMode::backward_walk;
    int conservativity_points = 10000;
    double conservativity_tolerance = 1e-12;
    int threads = 0;
};

struct ObservableResult {
    std::string name;
    double exact_mean = 0.0;
    double sample_mean = 0.0;
    double sample_std = 0.0;
    bool mean_ok = false;
    bool std_ok = false;
    bool pass = false;
    std::vector<double> averages;  ///< one per start
};

struct ErgodicityReport {
    ErgodicityConfig config;
    double conservativity_defect = 0.0;
    std::vector<ObservableResult> observables;
    bool pass = false;
};

/// Birkhoff averages of every observable over independent random starts.
/// Start i uses derive_seed(seed, i) only. Throws InvalidArgument when the
/// Jacobian-determinant check fails, since the test is meaningless then.
ErgodicityReport ergodicity_test(const SmoothEndo& f, const std::vector<Observable>& observables,
                                 const ErgodicityConfig& cfg);

/// Columns: observable, start, average.
void write_ergodicity_csv(std::ostream& os, const ErgodicityReport& report);

}  // namespace anosov
