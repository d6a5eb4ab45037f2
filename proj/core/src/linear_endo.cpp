#include "anosov/linear_endo.hpp"

#include "anosov/direction.hpp"
#include "anosov/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace anosov {
namespace {

struct EigenPair {
    std::complex<double> value;
    Eigen::VectorXcd vector;
};

Eigen::VectorXcd eigenvector_2x2(const IntMat& m, double lambda)
{
    const double a = static_cast<double>(m(0, 0));
    const double b = static_cast<double>(m(0, 1));
    const double c = static_cast<double>(m(1, 0));
    const double d = static_cast<double>(m(1, 1));
    Eigen::Vector2d v1(b, lambda - a);
    Eigen::Vector2d v2(lambda - d, c);
    Eigen::Vector2d v = v1.squaredNorm() >= v2.squaredNorm() ? v1 : v2;
    return v.normalized().cast<std::complex<double>>();
}

std::vector<EigenPair> eigen_decompose(const IntMat& m)
{
    const Eigen::Index n = m.rows();
    std::vector<EigenPair> pairs;
    if (n == 2) {
        const long long tr = m(0, 0) + m(1, 1);
        const long long det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const long long disc = tr * tr - 4 * det;
        if (disc < 0) {
            const double re = 0.5 * static_cast<double>(tr);
            const double im = 0.5 * std::sqrt(static_cast<double>(-disc));
            // Complex pair: vectors only matter for the splitting, which is
            // rejected for n = 2 anyway (both eigenvalues share a modulus).
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2);
            v(0) = static_cast<double>(m(0, 1));
            v(1) = std::complex<double>(re, im) - static_cast<double>(m(0, 0));
            pairs.push_back({{re, im}, v.normalized()});
            pairs.push_back({{re, -im}, v.conjugate().normalized()});
            return pairs;
        }
        const double s = std::sqrt(static_cast<double>(disc));
        const double l1 = tr >= 0 ? 0.5 * (static_cast<double>(tr) + s) : 0.5 * (static_cast<double>(tr) - s);
        const double l2 = static_cast<double>(det) / l1;
        pairs.push_back({l1, eigenvector_2x2(m, l1)});
        pairs.push_back({l2, eigenvector_2x2(m, l2)});
        return pairs;
    }

    const Eigen::MatrixXd a = m.cast<double>();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw NumericalBreakdown("analyze: eigensolver did not converge");
    const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::complex<double> mu = solver.eigenvalues()(i);
        Eigen::VectorXcd v = solver.eigenvectors().col(i).normalized();
        const double residual = (ac * v - mu * v).norm();
        if (residual > 1e-10 * std::max(1.0, std::abs(mu))) {
            std::ostringstream os;
            os << "analyze: eigenpair residual " << residual << " exceeds 1e-10";
            throw NumericalBreakdown(os.str());
        }
        pairs.push_back({mu, v});
    }
    return pairs;
}

// Real orthonormal basis of the invariant subspace spanned by the given
// eigenvectors (real and imaginary parts of complex ones).
Mat real_basis(const std::vector<EigenPair>& pairs, Eigen::Index n)
{
    std::vector<Eigen::VectorXd> columns;
    for (const auto& p : pairs) {
        if (std::abs(p.value.imag()) <= 1e-12 * std::max(1.0, std::abs(p.value))) {
            Eigen::VectorXd re = p.vector.real();
            if (re.norm() < 1e-8) re = p.vector.imag();
            columns.push_back(re);
        } else if (p.value.imag() > 0) {
            columns.push_back(p.vector.real());
            columns.push_back(p.vector.imag());
        }
    }
    Eigen::MatrixXd raw(n, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) raw.col(static_cast<Eigen::Index>(j)) = columns[j];
    if (raw.cols() == 0) return Mat(n, 0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, raw.cols());
    return Mat(q);
}

}  // namespace

LinearEndo analyze(const IntMat& matrix)
{
    const Eigen::Index n = matrix.rows();
    if (n != matrix.cols()) throw InvalidArgument("analyze: matrix is not square");
    if (n < 2 || n > kMaxDim) {
        throw InvalidArgument("analyze: dimension must lie in [2, " + std::to_string(kMaxDim) + "]");
    }

    LinearEndo out;
    out.matrix = matrix;
    out.real_matrix = matrix.cast<double>();
    out.determinant = integer_determinant(matrix);
    if (out.determinant == 0) throw SingularMatrix("analyze: det A = 0, not a local diffeomorphism");
    out.degree = std::llabs(out.determinant);
    out.inverse = integer_adjugate(matrix).cast<double>() / static_cast<double>(out.determinant);

    const auto pairs = eigen_decompose(matrix);
    std::vector<EigenPair> unstable;
    std::vector<EigenPair> stable;
    for (const auto& p : pairs) {
        const double modulus = std::abs(p.value);
        if (std::fabs(modulus - 1.0) <= kHyperbolicityTolerance) {
            std::ostringstream os;
            os << "analyze: eigenvalue " << p.value << " has modulus within " << kHyperbolicityTolerance
               << " of 1; A is not hyperbolic";
            throw NotHyperbolic(os.str());
        }
        (modulus > 1.0 ? unstable : stable).push_back(p);
    }
    if (stable.empty()) {
        throw NotHyperbolic("analyze: A is purely expanding (E^s is trivial); require 1 <= dim E^u <= n-1");
    }
    if (unstable.empty()) {
        throw NotHyperbolic("analyze: A is purely contracting (E^u is trivial); require 1 <= dim E^u <= n-1");
    }

    auto& split = out.splitting;
    split.unstable_dim = static_cast<int>(unstable.size());
    split.stable_dim = static_cast<int>(stable.size());
    split.unstable_basis = real_basis(unstable, n);
    split.stable_basis = real_basis(stable, n);
    split.expansion_rate = std::abs(unstable.front().value);
    for (const auto& p : unstable) split.expansion_rate = std::min(split.expansion_rate, std::abs(p.value));
    split.contraction_rate = 0.0;
    for (const auto& p : stable) split.contraction_rate = std::max(split.contraction_rate, std::abs(p.value));

    for (const auto& p : unstable) out.unstable_spectrum.push_back(p.value);
    for (const auto& p : stable) out.stable_spectrum.push_back(p.value);

    if (split.unstable_dim == 1) {
        out.unstable_eigenvalue = unstable.front().value.real();
        out.lambda_u = std::log(std::fabs(out.unstable_eigenvalue));
        out.e_u = canonical_unit(Vec(split.unstable_basis.col(0)));
    } else {
        out.lambda_u = std::log(split.expansion_rate);
    }
    out.e_s_basis = split.stable_basis;
    if (split.stable_dim == 1) out.e_s_basis.col(0) = canonical_unit(Vec(split.stable_basis.col(0)));

    if (out.degree == 1) out.warnings.push_back("invertible (diffeomorphism), not a proper endomorphism");

    out.cosets = coset_representatives(matrix);
    return out;
}

bool same_coset(const IntMat& matrix, const LatticeVector& k1, const LatticeVector& k2)
{
    const long long det = integer_determinant(matrix);
    const IntVec scaled = integer_adjugate(matrix) * (k1.entries - k2.entries);
    for (Eigen::Index i = 0; i < scaled.size(); ++i) {
        if (scaled(i) % det != 0) return false;
    }
    return true;
}

std::vector<LatticeVector> coset_representatives(const IntMat& matrix)
{
    const Eigen::Index n = matrix.rows();
    const long long det = integer_determinant(matrix);
    if (det == 0) throw SingularMatrix("coset_representatives: det A = 0");
    const long long d = std::llabs(det);
    const IntMat adj = integer_adjugate(matrix);

    auto equivalent = [&](const IntVec& a, const IntVec& b) {
        const IntVec scaled = adj * (a - b);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (scaled(i) % det != 0) return false;
        }
        return true;
    };

    std::vector<LatticeVector> reps;
    IntVec k = IntVec::Zero(n);
    for (;;) {
        const bool fresh = std::none_of(reps.begin(), reps.end(),
                                        [&](const LatticeVector& r) { return equivalent(r.entries, k); });
        if (fresh) {
            reps.emplace_back(k);
            if (static_cast<long long>(reps.size()) == d) break;
        }
        // Odometer with the first coordinate varying fastest.
        Eigen::Index i = 0;
        while (i < n && ++k(i) == d) {
            k(i) = 0;
            ++i;
        }
        if (i == n) break;
    }
    if (static_cast<long long>(reps.size()) != d) {
        throw NumericalBreakdown("coset_representatives: scan found fewer than |det A| classes");
    }
    return reps;
}

TorusPoint apply_linear(const LinearEndo& a, const TorusPoint& x) { return TorusPoint(a.real_matrix * x.coords()); }

std::vector<TorusPoint> preimages_linear(const LinearEndo& a, const TorusPoint& x)
{
    std::vector<TorusPoint> out;
    out.reserve(a.cosets.size());
    for (const auto& k : a.cosets) out.emplace_back(a.inverse * (x.coords() + k.as_real()));
    return out;
}

}  // namespace anosov
