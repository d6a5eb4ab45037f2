#include "anosov/error.hpp"
#include "anosov/prehistory.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace anosov;
using anosov::testing::Gen;
using anosov::testing::sheared;

TEST(Prehistory, DepthZeroHoldsOnlyTheBase)
{
    const SmoothEndo f = sheared(0.02);
    const Prehistory p = random_prehistory(f, TorusPoint{0.3, 0.6}, 0, 7);
    EXPECT_EQ(p.depth(), 0);
    EXPECT_EQ(p.word(), "");
    EXPECT_EQ(p.points().size(), 1u);
    EXPECT_THROW(truncate(p), InvalidArgument);
    EXPECT_THROW(random_prehistory(f, TorusPoint{0.3, 0.6}, -1, 7), InvalidArgument);
}

TEST(Prehistory, FixedPointAlongBranchZero)
{
    const SmoothEndo f = sheared(0.0);
    const std::vector<int> word(25, 0);
    const Prehistory p = prehistory_from_word(f, TorusPoint{0.0, 0.0}, word);
    ASSERT_EQ(p.depth(), 25);
    for (int i = 0; i <= 25; ++i) EXPECT_EQ(torus_distance(p.point(i), TorusPoint{0.0, 0.0}), 0.0);
    EXPECT_EQ(p.word(), std::string(25, '0'));
}

TEST(Prehistory, SeededGenerationIsDeterministic)
{
    const SmoothEndo f = sheared(0.02);
    const TorusPoint x{0.123, 0.456};
    const Prehistory a = random_prehistory(f, x, 20, 42);
    const Prehistory b = random_prehistory(f, x, 20, 42);
    EXPECT_EQ(a.word(), b.word());
    for (int i = 0; i <= 20; ++i) EXPECT_EQ(a.point(i).coords(), b.point(i).coords());
    const Prehistory c = random_prehistory(f, x, 20, 43);
    EXPECT_NE(a.word(), c.word());
}

TEST(Prehistory, OrbitConditionAndFaithfulCode)
{
    Gen g(41);
    for (const SmoothEndo& f : anosov::testing::shipped_maps()) {
        for (int t = 0; t < 40; ++t) {
            const TorusPoint x = g.torus();
            const Prehistory p = random_prehistory(f, x, 40, g.seed());
            EXPECT_LT(orbit_residual(f, p), 1e-9);
            for (int i = 1; i <= p.depth(); ++i) {
                EXPECT_EQ(branch_of(f, p.point(i - 1), p.point(i)), p.branches()[static_cast<std::size_t>(i - 1)]);
            }
            const Prehistory q = prehistory_from_word(f, x, p.branches());
            EXPECT_LT(prehistory_metric(p, q), 1e-12);
        }
    }
}

TEST(AllPrehistories, CountsAndOrder)
{
    const SmoothEndo f = sheared(0.02);
    const TorusPoint x{0.7, 0.2};
    for (int n = 1; n <= 12; ++n) {
        const auto all = all_prehistories(f, x, n);
        ASSERT_EQ(all.size(), std::size_t{1} << n);
        for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1].word(), all[i].word());
    }
    const auto one = all_prehistories(f, x, 1);
    const auto pre = f.preimages(x);
    EXPECT_EQ(one[0].point(1).coords(), pre[0].coords());
    EXPECT_EQ(one[1].point(1).coords(), pre[1].coords());
}

TEST(AllPrehistories, DistinctTailsAtDepthTen)
{
    const SmoothEndo f = sheared(0.05);
    const auto all = all_prehistories(f, TorusPoint{0.31, 0.77}, 10);
    ASSERT_EQ(all.size(), 1024u);
    double closest = 1.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            closest = std::min(closest, torus_distance(all[i].point(10), all[j].point(10)));
        }
    }
    EXPECT_GT(closest, 1e-6);
}

TEST(AllPrehistories, CapIsEnforced)
{
    const SmoothEndo f = sheared(0.02);
    EXPECT_THROW(all_prehistories(f, TorusPoint{0.1, 0.1}, 21), EnumerationCapExceeded);
    EXPECT_THROW(all_prehistories(f, TorusPoint{0.1, 0.1}, 5, 16), EnumerationCapExceeded);
    EXPECT_EQ(all_prehistories(f, TorusPoint{0.1, 0.1}, 4, 16).size(), 16u);
}

TEST(Extend, MatchesEnumerationAndTruncateUndoes)
{
    Gen g(42);
    const SmoothEndo f = sheared(0.02);
    const TorusPoint x = g.torus();
    const auto all = all_prehistories(f, x, 8);
    for (int t = 0; t < 50; ++t) {
        const auto w = g.word(8, 2);
        Prehistory p(x);
        std::size_t index = 0;
        for (int b : w) {
            const Prehistory next = extend(f, p, b);
            EXPECT_EQ(next.depth(), p.depth() + 1);
            for (int i = 0; i <= p.depth(); ++i) EXPECT_EQ(next.point(i).coords(), p.point(i).coords());
            const Prehistory back = truncate(next);
            EXPECT_EQ(back.word(), p.word());
            p = next;
            index = 2 * index + static_cast<std::size_t>(b);
        }
        EXPECT_EQ(p.word(), all[index].word());
        EXPECT_LT(prehistory_metric(p, all[index]), 1e-15);
    }
    EXPECT_THROW(extend(f, Prehistory(x), 2), InvalidArgument);
    EXPECT_THROW(extend(f, Prehistory(x), -1), InvalidArgument);
}

TEST(Prehistory, TruncationIsCloseInTheNaturalExtensionMetric)
{
    Gen g(43);
    const SmoothEndo f = sheared(0.1);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + g.index(20);
        const Prehistory p = random_prehistory(f, g.torus(), n, g.seed());
        // Re-extend the truncation along a possibly different last branch.
        const Prehistory q = extend(f, truncate(p), g.index(2));
        EXPECT_LE(prehistory_metric(p, q), std::ldexp(1.0, -(n - 1)) * torus_diameter(2) * 2.0);
    }
}

TEST(ShiftForward, PrependsTheBase)
{
    Gen g(44);
    for (const SmoothEndo& f : anosov::testing::shipped_maps()) {
        const Prehistory p = random_prehistory(f, g.torus(), 15, g.seed());
        const Prehistory s = shift_forward(f, p);
        EXPECT_EQ(s.depth(), 16);
        EXPECT_LT(torus_distance(s.base(), f.apply(p.base())), 1e-15);
        EXPECT_EQ(s.word().substr(1), p.word());
        for (int i = 0; i <= 15; ++i) EXPECT_EQ(s.point(i + 1).coords(), p.point(i).coords());
        EXPECT_LT(orbit_residual(f, s), 1e-9);
    }
}

TEST(Prehistory, CsvLayout)
{
    const SmoothEndo f = sheared(0.0);
    const std::vector<Prehistory> ps{prehistory_from_word(f, TorusPoint{0.0, 0.0}, std::vector<int>{1})};
    std::ostringstream os;
    write_prehistory_csv(os, ps);
    EXPECT_EQ(os.str(), "depth,word,index,x_0,x_1\n1,1,0,0,0\n1,1,1,0.5,0.5\n");
}
