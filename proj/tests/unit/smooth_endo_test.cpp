#include "anosov/error.hpp"
#include "anosov/smooth_endo.hpp"

#include "generators.hpp"

#include <Eigen/LU>
#include <gtest/gtest.h>

#include <cmath>

using namespace anosov;
using anosov::testing::Gen;
using anosov::testing::sheared;

namespace {

// Straight-line evaluation of A followed by one shear along x0 driven by x1.
Vec oracle_lift(double eps, const Vec& p)
{
    Vec y(2);
    y(0) = 3.0 * p(0) + p(1);
    y(1) = p(0) + p(1);
    y(0) += eps * std::sin(kTwoPi * y(1));
    return y;
}

Mat oracle_jacobian(double eps, const Vec& p)
{
    const double y1 = p(0) + p(1);
    const double c = kTwoPi * eps * std::cos(kTwoPi * y1);
    Mat j(2, 2);
    j << 3.0 + c, 1.0 + c, 1.0, 1.0;
    return j;
}

}  // namespace

TEST(SmoothEndo, RejectsMalformedShears)
{
    const LinearEndo a = anosov::testing::cat_matrix();
    EXPECT_THROW(SmoothEndo(a, {{0, 0, 0.1, 1, 0.0}}), InvalidArgument);
    EXPECT_THROW(SmoothEndo(a, {{0, 2, 0.1, 1, 0.0}}), InvalidArgument);
    EXPECT_THROW(SmoothEndo(a, {{0, 1, 0.1, 0, 0.0}}), InvalidArgument);
    EXPECT_THROW(SmoothEndo(a, {{0, 1, 0.1, 1, 1.0}}), InvalidArgument);
    EXPECT_THROW(SmoothEndo(a, {{0, 1, 0.1, 1, -0.25}}), InvalidArgument);
    EXPECT_THROW(SmoothEndo(a, {{0, 1, std::nan(""), 1, 0.0}}), InvalidArgument);
    EXPECT_NO_THROW(SmoothEndo(a, {{1, 0, -0.1, 3, 0.5}}));
}

TEST(SmoothEndo, LinearCaseIsExact)
{
    const SmoothEndo f = sheared(0.0);
    EXPECT_TRUE(f.is_linear());
    EXPECT_EQ(f.degree(), 2);
    const TorusPoint y = f.apply(TorusPoint{0.25, 0.5});
    EXPECT_LT(torus_distance(y, TorusPoint{0.25, 0.75}), 1e-15);
}

TEST(SmoothEndo, ApplyMatchesStraightLineFormula)
{
    Gen g(31);
    for (double eps : {0.02, 0.1, 0.7}) {
        const SmoothEndo f = sheared(eps);
        for (int t = 0; t < 500; ++t) {
            const CoverPoint p = g.cover(5.0);
            EXPECT_LT((f.lift_apply(p).coords - oracle_lift(eps, p.coords)).norm(), 1e-12);
            EXPECT_LT((f.derivative(p) - oracle_jacobian(eps, p.coords)).norm(), 1e-12);
        }
    }
}

TEST(SmoothEndo, LiftIsEquivariant)
{
    Gen g(32);
    for (const SmoothEndo& f : anosov::testing::shipped_maps()) {
        for (int t = 0; t < 300; ++t) {
            const CoverPoint p = g.cover(3.0);
            const Vec k = make_vec({double(g.integer(-9, 9)), double(g.integer(-9, 9))});
            const Vec lhs = f.lift_apply(CoverPoint(p.coords + k)).coords;
            const Vec rhs = f.lift_apply(p).coords + f.base().real_matrix * k;
            EXPECT_LT((lhs - rhs).norm(), 1e-11);
            EXPECT_LE((f.lift_apply(p).coords - f.base().real_matrix * p.coords).norm(),
                      f.total_amplitude() + 1e-12);
        }
    }
}

TEST(SmoothEndo, DerivativeAgreesWithFiniteDifferences)
{
    Gen g(33);
    for (const SmoothEndo& f : anosov::testing::shipped_maps()) {
        for (int t = 0; t < 100; ++t) {
            const CoverPoint p = g.cover(1.0);
            const Mat j = f.derivative(p);
            // Central differences have O(h^2) error: halving h divides it by about 4.
            auto fd_error = [&](double h) {
                Mat fd(2, 2);
                for (int c = 0; c < 2; ++c) {
                    Vec e = Vec::Zero(2);
                    e(c) = h;
                    fd.col(c) = (f.lift_apply(CoverPoint(p.coords + e)).coords -
                                 f.lift_apply(CoverPoint(p.coords - e)).coords) / (2.0 * h);
                }
                return (fd - j).norm();
            };
            EXPECT_LT(fd_error(1e-5), 1e-6);
            if (!f.is_linear()) {
                const double e1 = fd_error(1e-2);
                const double e2 = fd_error(5e-3);
                if (e1 > 1e-7) {
                    EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
                }
            }
            EXPECT_NEAR(j.determinant(), 2.0, 1e-12);
            Vec image;
            Mat jac;
            f.lift_apply_with_derivative(p.coords, image, jac);
            EXPECT_EQ(image, f.lift_apply(p).coords);
            EXPECT_EQ(jac, j);
        }
    }
}

TEST(SmoothEndo, PreimagesSolveTheEquation)
{
    Gen g(34);
    for (const SmoothEndo& f : anosov::testing::shipped_maps()) {
        for (int t = 0; t < 300; ++t) {
            const TorusPoint x = g.torus();
            const auto pre = f.preimages(x);
            ASSERT_EQ(pre.size(), 2u);
            for (const auto& y : pre) EXPECT_LT(torus_distance(f.apply(y), x), 1e-10);
            EXPECT_GT(torus_distance(pre[0], pre[1]), 0.1);
            EXPECT_EQ(torus_distance(f.preimage(x, 1), pre[1]), 0.0);
        }
    }
}

TEST(SmoothEndo, BranchLabelsFollowTheLinearModel)
{
    Gen g(35);
    const SmoothEndo lin = sheared(0.0);
    for (double eps : {0.02, 0.05}) {
        const SmoothEndo f = sheared(eps);
        for (int t = 0; t < 200; ++t) {
            const TorusPoint x = g.torus();
            const auto p = f.preimages(x);
            const auto q = lin.preimages(x);
            // |f - A| <= eps and A^{-1} has norm below 2, so branch b stays near the linear branch b.
            for (int b = 0; b < 2; ++b) EXPECT_LT(torus_distance(p[b], q[b]), 2.0 * eps);
        }
        // Continuity along 100-step paths inside the unit box: no label swaps.
        for (int path = 0; path < 20; ++path) {
            TorusPoint x{g.uniform(0.45, 0.55), g.uniform(0.45, 0.55)};
            const Vec step = g.unit() * 4e-3;
            auto prev = f.preimages(x);
            for (int s = 0; s < 100; ++s) {
                x = TorusPoint(x.coords() + step);
                const auto next = f.preimages(x);
                for (int b = 0; b < 2; ++b) EXPECT_LT(torus_distance(prev[b], next[b]), 1e-2);
                prev = next;
            }
        }
    }
}

TEST(SmoothEndo, InverseLiftRoundTripsAndMatchesClosedForm)
{
    Gen g(36);
    for (const SmoothEndo& f : anosov::testing::shipped_maps()) {
        for (int t = 0; t < 300; ++t) {
            const CoverPoint q = g.cover(50.0);
            const CoverPoint p = f.inverse_lift(q);
            EXPECT_LT((f.lift_apply(p).coords - q.coords).norm(), 1e-10);
            EXPECT_LT((p.coords - f.inverse_lift_closed_form(q).coords).norm(), 1e-11);
            const Vec k = make_vec({double(g.integer(-5, 5)), double(g.integer(-5, 5))});
            const Vec shifted = f.inverse_lift(CoverPoint(q.coords + f.base().real_matrix * k)).coords;
            EXPECT_LT((shifted - p.coords - k).norm(), 1e-10);
        }
    }
}

TEST(C1Distance, ClosedFormForOneShear)
{
    EXPECT_EQ(c1_distance_to_linear(sheared(0.0), 16), 0.0);
    double prev = 0.0;
    for (double eps : {0.01, 0.02, 0.05, 0.1}) {
        // Df - A = 2 pi eps cos(...) e_0 (1, 1); the grid contains a point with cos = 1.
        const double d = c1_distance_to_linear(sheared(eps), 32);
        EXPECT_NEAR(d, kTwoPi * std::sqrt(2.0) * eps, 1e-12);
        EXPECT_GT(d, prev);
        prev = d;
    }
    EXPECT_THROW(c1_distance_to_linear(sheared(0.1), 0), InvalidArgument);
}

TEST(Cones, LinearModelIsCertifiedWithExactRates)
{
    ConeConfig cfg;
    cfg.grid_resolution = 32;
    const auto cert = verify_cones(sheared(0.0), cfg);
    EXPECT_TRUE(cert.verified);
    EXPECT_NEAR(cert.expansion_bound, 2.0 + std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(cert.contraction_bound, 2.0 - std::sqrt(2.0), 1e-12);
    EXPECT_GE(cert.constant_c, 1.0);
    EXPECT_FALSE(cert.has_witness);
}

TEST(Cones, SmallShearsAreCertified)
{
    ConeConfig cfg;
    cfg.grid_resolution = 64;
    double prev_u = 1e300;
    for (double eps : {0.02, 0.05, 0.1}) {
        const auto cert = verify_cones(sheared(eps), cfg);
        EXPECT_TRUE(cert.verified) << cert.failure;
        EXPECT_GT(cert.expansion_bound, 1.0);
        EXPECT_LT(cert.contraction_bound, 1.0);
        EXPECT_LT(cert.expansion_bound, prev_u);
        EXPECT_LT(cert.expansion_bound, 2.0 + std::sqrt(2.0));
        prev_u = cert.expansion_bound;
    }
    const auto two = verify_cones(anosov::testing::shipped_maps().back(), cfg);
    EXPECT_TRUE(two.verified) << two.failure;
}

TEST(Cones, LargeShearFailsWithWitness)
{
    ConeConfig cfg;
    cfg.grid_resolution = 32;
    const SmoothEndo f = sheared(10.0);
    const auto cert = verify_cones(f, cfg);
    EXPECT_FALSE(cert.verified);
    ASSERT_TRUE(cert.has_witness);
    EXPECT_FALSE(cert.failure.empty());
    EXPECT_EQ(cert.witness.dim(), 2);
}

TEST(Cones, RejectsBadConfig)
{
    ConeConfig cfg;
    cfg.grid_resolution = 0;
    EXPECT_THROW(verify_cones(sheared(0.02), cfg), InvalidArgument);
    cfg.grid_resolution = 8;
    cfg.unstable_halfangle = 0.0;
    EXPECT_THROW(verify_cones(sheared(0.02), cfg), InvalidArgument);
}
