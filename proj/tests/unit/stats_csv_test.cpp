#include "anosov/csv.hpp"
#include "anosov/error.hpp"
#include "anosov/stats.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

using namespace anosov;
using anosov::testing::Gen;

TEST(Stats, SmallExamples)
{
    const std::vector<double> xs{4.0, 1.0, 3.0, 2.0};
    EXPECT_DOUBLE_EQ(mean(xs), 2.5);
    EXPECT_DOUBLE_EQ(sample_stddev(xs), std::sqrt(5.0 / 3.0));
    EXPECT_DOUBLE_EQ(percentile(xs, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(percentile(xs, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(percentile(xs, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(percentile(xs, 0.25), 1.75);
    EXPECT_EQ(sample_stddev(std::vector<double>{3.0}), 0.0);
    EXPECT_THROW(mean(std::vector<double>{}), InvalidArgument);
    EXPECT_THROW(percentile(xs, 1.5), InvalidArgument);
}

TEST(Stats, SummaryIsOrdered)
{
    Gen g(81);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> xs(static_cast<std::size_t>(1 + g.index(300)));
        for (auto& x : xs) x = g.uniform(-5.0, 5.0);
        const Summary s = summarize(xs);
        EXPECT_EQ(s.count, static_cast<long long>(xs.size()));
        EXPECT_EQ(s.min, *std::min_element(xs.begin(), xs.end()));
        EXPECT_EQ(s.max, *std::max_element(xs.begin(), xs.end()));
        EXPECT_LE(s.min, s.p01);
        EXPECT_LE(s.p01, s.p05);
        EXPECT_LE(s.p05, s.median);
        EXPECT_LE(s.median, s.p95);
        EXPECT_LE(s.p95, s.p99);
        EXPECT_LE(s.p99, s.max);
        EXPECT_GE(s.mean, s.min);
        EXPECT_LE(s.mean, s.max);
    }
}

TEST(Stats, SlopeOfAnExactLine)
{
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(-0.7 * v + 3.0);
    EXPECT_NEAR(fit_slope(x, y), -0.7, 1e-14);
    EXPECT_THROW(fit_slope(std::vector<double>{1, 1}, std::vector<double>{0, 1}), InvalidArgument);
}

TEST(Csv, QuotingAndNumbers)
{
    std::ostringstream os;
    CsvWriter w(os);
    w.comment("seed = 1");
    w.field("a,b").field("say \"hi\"").field(0.1).field(-3).field(std::uint64_t{18446744073709551615ULL}).field(true).end_row();
    EXPECT_EQ(os.str(), "# seed = 1\n\"a,b\",\"say \"\"hi\"\"\",0.1,-3,18446744073709551615,1\n");
}

TEST(Csv, DoublesRoundTrip)
{
    Gen g(82);
    for (int t = 0; t < 2000; ++t) {
        const double x = std::ldexp(g.uniform(-1.0, 1.0), g.index(200) - 100);
        const std::string s = format_double(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        EXPECT_EQ(back, x) << s;
    }
    EXPECT_EQ(format_double(0.3), "0.3");
    EXPECT_EQ(format_double(1.0), "1");
}
