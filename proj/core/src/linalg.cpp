#include "anosov/linalg.hpp"

#include "anosov/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace anosov {

IntMat make_int_mat(std::initializer_list<std::initializer_list<long long>> rows)
{
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = n_rows == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
    IntMat m(n_rows, n_cols);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != n_cols) throw InvalidArgument("make_int_mat: ragged rows");
        Eigen::Index j = 0;
        for (long long v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

__extension__ using Int128 = __int128;

long long integer_determinant(const IntMat& m)
{
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw InvalidArgument("integer_determinant: matrix is not square");
    if (n == 0) return 1;

    Eigen::Matrix<Int128, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim> a =
        m.cast<Int128>();
    Int128 previous_pivot = 1;
    int sign = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            Eigen::Index swap = k + 1;
            while (swap < n && a(swap, k) == 0) ++swap;
            if (swap == n) return 0;
            a.row(k).swap(a.row(swap));
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            for (Eigen::Index j = k + 1; j < n; ++j) {
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / previous_pivot;
            }
        }
        previous_pivot = a(k, k);
    }
    return static_cast<long long>(sign * a(n - 1, n - 1));
}

IntMat integer_adjugate(const IntMat& m)
{
    const Eigen::Index n = m.rows();
    IntMat adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    IntMat minor(n - 1, n - 1);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            for (Eigen::Index i = 0, mi = 0; i < n; ++i) {
                if (i == r) continue;
                for (Eigen::Index j = 0, mj = 0; j < n; ++j) {
                    if (j == c) continue;
                    minor(mi, mj++) = m(i, j);
                }
                ++mi;
            }
            const long long cofactor = ((r + c) % 2 == 0 ? 1 : -1) * integer_determinant(minor);
            adj(c, r) = cofactor;
        }
    }
    return adj;
}

double operator_norm(const Mat& m)
{
    if (m.rows() == 2 && m.cols() == 2) {
        const double frob2 = m.squaredNorm();
        const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const double disc = std::max(0.0, frob2 * frob2 - 4.0 * det * det);
        return std::sqrt(0.5 * (frob2 + std::sqrt(disc)));
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(m)};
    return svd.singularValues()(0);
}

double line_angle(const Vec& u, const Vec& v)
{
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) throw InvalidArgument("line_angle: zero vector");
    Vec a = u / nu;
    Vec b = v / nv;
    if (a.dot(b) < 0.0) b = -b;
    return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

}  // namespace anosov
