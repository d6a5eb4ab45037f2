#pragma once

#include "anosov/smooth_endo.hpp"
#include "anosov/torus.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace anosov {

/// A finite backward orbit x_{-N}, ..., x_{-1}, x_0 together with the branch
/// word b_1 ... b_N that produced it: x_{-i} is preimage number b_i of
/// x_{-i+1}, numbered by the canonical coset list of the linear model.
class Prehistory {
  public:
    Prehistory() = default;
    /// Depth-0 pre-history consisting of x_0 only.
    explicit Prehistory(const TorusPoint& base) : points_{base} {}

    const TorusPoint& base() const noexcept { return points_.front(); }
    int depth() const noexcept { return static_cast<int>(branches_.size()); }
    /// x_{-i} for i in [0, depth].
    const TorusPoint& point(int i) const { return points_.at(static_cast<std::size_t>(i)); }
    /// points()[i] is x_{-i}.
    std::span<const TorusPoint> points() const noexcept { return points_; }
    /// branches()[i - 1] is b_i.
    const std::vector<int>& branches() const noexcept { return branches_; }
    /// Branch word as a digit string, b_1 first ("" at depth 0).
    std::string word() const;

    /// Appends one deeper point. Used by the construction routines below;
    /// the caller guarantees point is preimage `branch` of the current tail.
    void push_back(int branch, const TorusPoint& point);
    void pop_back();

  private:
    std::vector<TorusPoint> points_;
    std::vector<int> branches_;
};

inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 20;

/// Branch b_i drawn uniformly from the degree-many choices at every step,
/// using a generator seeded with `seed`.
Prehistory random_prehistory(const SmoothEndo& f, const TorusPoint& x, int depth, std::uint64_t seed);

/// Pre-history following an explicit branch word (b_1 first).
Prehistory prehistory_from_word(const SmoothEndo& f, const TorusPoint& x, std::span<const int> word);

/// All degree^depth pre-histories of x, ordered lexicographically by word.
/// Throws EnumerationCapExceeded when degree^depth > cap.
std::vector<Prehistory> all_prehistories(const SmoothEndo& f, const TorusPoint& x, int depth,
                                         std::size_t cap = kDefaultEnumerationCap);

/// One level deeper along `branch`; existing entries are unchanged.
Prehistory extend(const SmoothEndo& f, const Prehistory& p, int branch);

/// Drops the deepest entry. Throws InvalidArgument at depth 0.
Prehistory truncate(const Prehistory& p);

/// The branch index b with preimage(f(x), b) == x; x must be a preimage of y.
int branch_of(const SmoothEndo& f, const TorusPoint& y, const TorusPoint& x);

/// The pre-history of f(x_0) obtained by prepending x_0's branch: the
/// shifted orbit (..., x_{-1}, x_0, f(x_0)).
Prehistory shift_forward(const SmoothEndo& f, const Prehistory& p);

/// Natural-extension distance between two pre-histories of equal depth.
double prehistory_metric(const Prehistory& a, const Prehistory& b);

/// Largest residual |f(x_{-i}) - x_{-i+1}| (torus distance) along p.
double orbit_residual(const SmoothEndo& f, const Prehistory& p);

/// Long-format CSV: one row per realized point.
/// Columns: depth, word, index, x_0 ... x_{n-1}; index i holds x_{-i}.
void write_prehistory_csv(std::ostream& os, std::span<const Prehistory> prehistories);

}  // namespace anosov
