#include "anosov/error.hpp"
#include "anosov/linear_endo.hpp"

#include "generators.hpp"

#include <Eigen/LU>
#include <gtest/gtest.h>

#include <cmath>

using namespace anosov;
using anosov::testing::Gen;

TEST(Analyze, CatLikeMatrixMatchesCharacteristicPolynomial)
{
    // lambda^2 - 4 lambda + 2 = 0.
    const double mu = 2.0 + std::sqrt(2.0);
    const double nu = 2.0 - std::sqrt(2.0);
    const LinearEndo a = anosov::testing::cat_matrix();
    EXPECT_EQ(a.determinant, 2);
    EXPECT_EQ(a.degree, 2);
    EXPECT_EQ(a.splitting.unstable_dim, 1);
    EXPECT_EQ(a.splitting.stable_dim, 1);
    EXPECT_NEAR(a.unstable_eigenvalue, mu, 1e-14);
    ASSERT_EQ(a.stable_spectrum.size(), 1u);
    EXPECT_NEAR(a.stable_spectrum[0].real(), nu, 1e-14);
    EXPECT_NEAR(a.lambda_u, std::log(mu), 1e-14);
    EXPECT_NEAR(a.lambda_u, 1.2279471773, 1e-10);

    const double r = std::sqrt(2.0) - 1.0;
    const Vec eu = make_vec({1.0, r}) / std::sqrt(1.0 + r * r);
    EXPECT_NEAR(a.e_u(0), eu(0), 1e-15);
    EXPECT_NEAR(a.e_u(1), eu(1), 1e-15);
    EXPECT_NEAR(a.e_u(0), 0.92388, 1e-5);
    EXPECT_NEAR(a.e_u(1), 0.38268, 1e-5);
    const Vec es = make_vec({1.0, -1.0 - std::sqrt(2.0)}).normalized();
    EXPECT_NEAR(std::fabs(a.e_s_basis.col(0).dot(es)), 1.0, 1e-15);
    EXPECT_TRUE(a.warnings.empty());
}

TEST(Analyze, RejectsPurelyExpandingAndSingular)
{
    EXPECT_THROW(analyze(make_int_mat({{2, 0}, {0, 2}})), NotHyperbolic);
    EXPECT_THROW(analyze(make_int_mat({{1, 2}, {2, 4}})), SingularMatrix);
    EXPECT_THROW(analyze(make_int_mat({{1, 1}, {0, 1}})), NotHyperbolic);
    EXPECT_THROW(analyze(make_int_mat({{0, -1}, {1, 0}})), NotHyperbolic);
}

TEST(Analyze, UnimodularIsAcceptedWithWarning)
{
    const LinearEndo a = analyze(make_int_mat({{1, 1}, {1, 0}}));
    EXPECT_EQ(a.degree, 1);
    ASSERT_EQ(a.warnings.size(), 1u);
    EXPECT_NE(a.warnings[0].find("invertible (diffeomorphism), not a proper endomorphism"), std::string::npos);
}

TEST(Analyze, EigenResidualsOnRandomHyperbolicMatrices)
{
    Gen g(21);
    int checked = 0;
    while (checked < 300) {
        IntMat m(2, 2);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) m(i, j) = g.integer(-6, 6);
        }
        LinearEndo a;
        try {
            a = analyze(m);
        } catch (const Error&) {
            continue;
        }
        ++checked;
        const Vec au = a.real_matrix * a.e_u;
        EXPECT_LT((au - a.unstable_eigenvalue * a.e_u).norm(), 1e-12 * std::fabs(a.unstable_eigenvalue));
        const Vec s = a.e_s_basis.col(0);
        const Vec as = a.real_matrix * s;
        EXPECT_LT((as - as.dot(s) * s).norm(), 1e-12 * a.real_matrix.norm());
        EXPECT_EQ(a.cosets.size(), static_cast<std::size_t>(a.degree));
    }
}

TEST(Analyze, HigherDimensionalSplitting)
{
    const LinearEndo a = analyze(make_int_mat({{2, 1, 0}, {1, 2, 1}, {0, 1, 1}}));
    EXPECT_EQ(a.splitting.unstable_dim + a.splitting.stable_dim, 3);
    const Mat& r = a.real_matrix;
    for (int k = 0; k < a.splitting.stable_dim; ++k) {
        const Vec s = a.e_s_basis.col(k);
        const Vec as = r * s;
        const Vec proj = a.e_s_basis * (a.e_s_basis.transpose() * as);
        EXPECT_LT((as - proj).norm(), 1e-10);
    }
}

TEST(Analyze, ExponentAgreesWithPowerIteration)
{
    const LinearEndo a = anosov::testing::cat_matrix();
    Vec v = make_vec({0.3, 0.8});
    double log_growth = 0.0;
    for (int i = 0; i < 60; ++i) v = (a.real_matrix * v).normalized();
    const int k = 10000;
    for (int i = 0; i < k; ++i) {
        v = a.real_matrix * v;
        const double n = v.norm();
        log_growth += std::log(n);
        v /= n;
    }
    EXPECT_NEAR(log_growth / k, a.lambda_u, 1e-9);
}

TEST(Cosets, CanonicalRepresentatives)
{
    const auto c = coset_representatives(make_int_mat({{3, 1}, {1, 1}}));
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0], (LatticeVector{0, 0}));
    EXPECT_EQ(c[1], (LatticeVector{1, 0}));

    const auto d = coset_representatives(make_int_mat({{2, 0}, {0, 2}}));
    ASSERT_EQ(d.size(), 4u);
    EXPECT_EQ(d[0], (LatticeVector{0, 0}));
    EXPECT_EQ(d[1], (LatticeVector{1, 0}));
    EXPECT_EQ(d[2], (LatticeVector{0, 1}));
    EXPECT_EQ(d[3], (LatticeVector{1, 1}));

    EXPECT_EQ(coset_representatives(make_int_mat({{2, 1}, {1, 1}})).size(), 1u);
}

TEST(Cosets, PairwiseInequivalentAndComplete)
{
    Gen g(22);
    for (int t = 0; t < 200; ++t) {
        IntMat m(2, 2);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) m(i, j) = g.integer(-4, 4);
        }
        const long long det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        if (det == 0) continue;
        const auto reps = coset_representatives(m);
        ASSERT_EQ(static_cast<long long>(reps.size()), std::llabs(det));
        // k1 ~ k2 iff adj(m) (k1 - k2) = 0 mod det, checked without the library.
        auto equivalent = [&](const IntVec& k) {
            const long long x = m(1, 1) * k(0) - m(0, 1) * k(1);
            const long long y = -m(1, 0) * k(0) + m(0, 0) * k(1);
            return x % det == 0 && y % det == 0;
        };
        for (std::size_t i = 0; i < reps.size(); ++i) {
            for (std::size_t j = i + 1; j < reps.size(); ++j) {
                EXPECT_FALSE(equivalent(reps[i].entries - reps[j].entries));
                EXPECT_FALSE(same_coset(m, reps[i], reps[j]));
            }
        }
        // Every random lattice vector falls in exactly one class.
        for (int s = 0; s < 10; ++s) {
            const IntVec k = make_int_vec({g.integer(-20, 20), g.integer(-20, 20)});
            int hits = 0;
            for (const auto& r : reps) hits += equivalent(k - r.entries) ? 1 : 0;
            EXPECT_EQ(hits, 1);
        }
    }
}

TEST(PreimagesLinear, Examples)
{
    const LinearEndo a = anosov::testing::cat_matrix();
    auto near = [](const TorusPoint& p, double x, double y) { return torus_distance(p, TorusPoint{x, y}) < 1e-15; };
    const auto z = preimages_linear(a, TorusPoint{0.0, 0.0});
    ASSERT_EQ(z.size(), 2u);
    EXPECT_TRUE(near(z[0], 0.0, 0.0));
    EXPECT_TRUE(near(z[1], 0.5, 0.5));
    const auto h = preimages_linear(a, TorusPoint{0.5, 0.0});
    ASSERT_EQ(h.size(), 2u);
    EXPECT_TRUE((near(h[0], 0.25, 0.75) && near(h[1], 0.75, 0.25)) ||
                (near(h[0], 0.75, 0.25) && near(h[1], 0.25, 0.75)));
}

TEST(PreimagesLinear, MatchesBruteForceResidueSearch)
{
    Gen g(23);
    for (const auto& m : {make_int_mat({{3, 1}, {1, 1}}), make_int_mat({{5, 1}, {1, 1}}), make_int_mat({{4, 1}, {1, 1}}),
                          make_int_mat({{6, 1}, {1, 1}})}) {
        LinearEndo a;
        try {
            a = analyze(m);
        } catch (const NotHyperbolic&) {
            continue;
        }
        for (int t = 0; t < 50; ++t) {
            const TorusPoint x = g.torus();
            const auto pre = preimages_linear(a, x);
            ASSERT_EQ(static_cast<long long>(pre.size()), a.degree);
            // Oracle: solve A y = x + k for every k in a box and keep distinct residues.
            std::vector<Vec> brute;
            const Mat inv = a.real_matrix.inverse();
            for (int k0 = -8; k0 <= 8; ++k0) {
                for (int k1 = -8; k1 <= 8; ++k1) {
                    Vec y = inv * (x.coords() + make_vec({double(k0), double(k1)}));
                    bool seen = false;
                    for (const auto& b : brute) seen = seen || anosov::testing::torus_gap(b, y) < 1e-9;
                    if (!seen) brute.push_back(y);
                }
            }
            ASSERT_EQ(static_cast<long long>(brute.size()), a.degree);
            for (const auto& p : pre) {
                EXPECT_LT(torus_distance(apply_linear(a, p), x), 1e-12);
                bool found = false;
                for (const auto& b : brute) found = found || anosov::testing::torus_gap(b, p.coords()) < 1e-12;
                EXPECT_TRUE(found);
            }
            for (std::size_t i = 0; i < pre.size(); ++i) {
                for (std::size_t j = i + 1; j < pre.size(); ++j) EXPECT_GT(torus_distance(pre[i], pre[j]), 0.0);
            }
        }
    }
}
