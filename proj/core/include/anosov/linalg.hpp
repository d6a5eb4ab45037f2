#pragma once

#include <Eigen/Core>

#include <cmath>
#include <initializer_list>

namespace anosov {

/// Largest torus dimension supported. Vectors and matrices are dynamically
/// sized up to this bound but stored inline, so the hot loops never allocate.
inline constexpr int kMaxDim = 6;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using IntVec = Eigen::Matrix<long long, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using IntMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline Vec make_vec(std::initializer_list<double> values)
{
    Vec v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

inline IntVec make_int_vec(std::initializer_list<long long> values)
{
    IntVec v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (long long x : values) v(i++) = x;
    return v;
}

/// Row-major initializer: make_int_mat({{3, 1}, {1, 1}}).
IntMat make_int_mat(std::initializer_list<std::initializer_list<long long>> rows);

/// Exact determinant by fraction-free (Bareiss) elimination.
long long integer_determinant(const IntMat& m);

/// Exact adjugate, so that m * adjugate(m) = det(m) * I.
IntMat integer_adjugate(const IntMat& m);

/// Spectral norm (largest singular value). Closed form for 2x2.
double operator_norm(const Mat& m);

/// Angle between the lines spanned by u and v, in [0, pi/2].
/// Equal to arccos(min(1, |<u,v>|)) for unit vectors, evaluated without the
/// cancellation arccos suffers near zero.
double line_angle(const Vec& u, const Vec& v);

}  // namespace anosov
