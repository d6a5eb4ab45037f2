#include "anosov/prehistory.hpp"

#include "anosov/csv.hpp"
#include "anosov/error.hpp"
#include "anosov/random.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

namespace anosov {
namespace {

char branch_digit(int b)
{
    constexpr const char* digits = "0123456789abcdefghijklmnopqrstuvwxyz";
    if (b < 0 || b >= 36) throw InvalidArgument("branch word: branch labels above 35 have no digit");
    return digits[b];
}

}  // namespace

std::string Prehistory::word() const
{
    std::string out;
    out.reserve(branches_.size());
    for (int b : branches_) out.push_back(branch_digit(b));
    return out;
}

void Prehistory::push_back(int branch, const TorusPoint& point)
{
    branches_.push_back(branch);
    points_.push_back(point);
}

void Prehistory::pop_back()
{
    if (branches_.empty()) throw InvalidArgument("Prehistory::pop_back: depth is already 0");
    branches_.pop_back();
    points_.pop_back();
}

Prehistory random_prehistory(const SmoothEndo& f, const TorusPoint& x, int depth, std::uint64_t seed)
{
    if (depth < 0) throw InvalidArgument("random_prehistory: depth must be non-negative");
    Rng rng(seed);
    Prehistory p(x);
    for (int i = 0; i < depth; ++i) {
        const int b = uniform_index(rng, f.degree());
        p.push_back(b, f.preimage(p.point(i), b));
    }
    return p;
}

Prehistory prehistory_from_word(const SmoothEndo& f, const TorusPoint& x, std::span<const int> word)
{
    Prehistory p(x);
    for (std::size_t i = 0; i < word.size(); ++i) {
        const int b = word[i];
        if (b < 0 || b >= f.degree()) throw InvalidArgument("prehistory_from_word: branch out of range");
        p.push_back(b, f.preimage(p.point(static_cast<int>(i)), b));
    }
    return p;
}

std::vector<Prehistory> all_prehistories(const SmoothEndo& f, const TorusPoint& x, int depth, std::size_t cap)
{
    if (depth < 0) throw InvalidArgument("all_prehistories: depth must be non-negative");
    const auto d = static_cast<std::size_t>(f.degree());
    std::size_t count = 1;
    for (int i = 0; i < depth; ++i) {
        if (count > cap / d) {
            throw EnumerationCapExceeded("all_prehistories: " + std::to_string(d) + "^" + std::to_string(depth) +
                                         " pre-histories exceed the enumeration cap " + std::to_string(cap) +
                                         "; use sampled mode instead");
        }
        count *= d;
    }

    std::vector<Prehistory> out;
    out.reserve(count);
    // Depth-first walk; shared prefixes are solved once.
    Prehistory current(x);
    auto recurse = [&](auto&& self, int level) -> void {
        if (level == depth) {
            out.push_back(current);
            return;
        }
        const auto children = f.preimages(current.point(level));
        for (std::size_t b = 0; b < children.size(); ++b) {
            current.push_back(static_cast<int>(b), children[b]);
            self(self, level + 1);
            current.pop_back();
        }
    };
    recurse(recurse, 0);
    return out;
}

Prehistory extend(const SmoothEndo& f, const Prehistory& p, int branch)
{
    if (branch < 0 || branch >= f.degree()) throw InvalidArgument("extend: branch out of range");
    Prehistory out = p;
    out.push_back(branch, f.preimage(p.point(p.depth()), branch));
    return out;
}

Prehistory truncate(const Prehistory& p)
{
    Prehistory out = p;
    out.pop_back();
    return out;
}

int branch_of(const SmoothEndo& f, const TorusPoint& y, const TorusPoint& x)
{
    const auto pre = f.preimages(y);
    int best = -1;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < pre.size(); ++b) {
        const double dist = torus_distance(pre[b], x);
        if (dist < best_distance) {
            best_distance = dist;
            best = static_cast<int>(b);
        }
    }
    if (best_distance > 1e-9) throw InvalidArgument("branch_of: x is not a preimage of y");
    return best;
}

Prehistory shift_forward(const SmoothEndo& f, const Prehistory& p)
{
    const TorusPoint y = f.apply(p.base());
    Prehistory out(y);
    out.push_back(branch_of(f, y, p.base()), p.base());
    for (int i = 1; i <= p.depth(); ++i) out.push_back(p.branches()[static_cast<std::size_t>(i - 1)], p.point(i));
    return out;
}

double prehistory_metric(const Prehistory& a, const Prehistory& b)
{
    if (a.depth() != b.depth()) {
        throw DepthMismatch("prehistory_metric: depths " + std::to_string(a.depth()) + " and " +
                            std::to_string(b.depth()) + " are incomparable");
    }
    return prehistory_metric(a.points(), b.points());
}

double orbit_residual(const SmoothEndo& f, const Prehistory& p)
{
    double worst = 0.0;
    for (int i = 1; i <= p.depth(); ++i) worst = std::max(worst, torus_distance(f.apply(p.point(i)), p.point(i - 1)));
    return worst;
}

void write_prehistory_csv(std::ostream& os, std::span<const Prehistory> prehistories)
{
    const int n = prehistories.empty() ? 0 : prehistories.front().base().dim();
    CsvWriter csv(os);
    csv.field("depth").field("word").field("index");
    for (int j = 0; j < n; ++j) csv.field("x_" + std::to_string(j));
    csv.end_row();
    for (const auto& p : prehistories) {
        for (int i = 0; i <= p.depth(); ++i) {
            csv.field(p.depth()).field(p.word()).field(i);
            for (int j = 0; j < n; ++j) csv.field(p.point(i)[j]);
            csv.end_row();
        }
    }
}

}  // namespace anosov
