#pragma once

#include "anosov/linalg.hpp"
#include "anosov/torus.hpp"

#include <complex>
#include <string>
#include <vector>

namespace anosov {

/// Eigenvalues within this distance of the unit circle are rejected.
inline constexpr double kHyperbolicityTolerance = 1e-9;

/// Hyperbolic splitting R^n = E^s + E^u of an integer matrix.
struct HyperbolicSplitting {
    int unstable_dim = 0;
    int stable_dim = 0;
    Mat unstable_basis;  ///< n x unstable_dim, orthonormal columns
    Mat stable_basis;    ///< n x stable_dim, orthonormal columns
    double expansion_rate = 0.0;    ///< smallest modulus among unstable eigenvalues
    double contraction_rate = 0.0;  ///< largest modulus among stable eigenvalues
};

/// A hyperbolic integer matrix acting on the torus, with its spectral data.
/// Immutable once built by analyze().
struct LinearEndo {
    IntMat matrix;
    Mat real_matrix;
    Mat inverse;
    long long determinant = 0;
    long long degree = 0;  ///< |det A|, the number of preimages of every point

    HyperbolicSplitting splitting;

    /// Signed unstable eigenvalue mu; only meaningful when splitting.unstable_dim == 1.
    double unstable_eigenvalue = 0.0;
    std::vector<std::complex<double>> stable_spectrum;
    std::vector<std::complex<double>> unstable_spectrum;

    Vec e_u;         ///< unit unstable eigenvector, canonical sign (dim E^u = 1 only)
    Mat e_s_basis;   ///< orthonormal basis of E^s
    double lambda_u = 0.0;  ///< log |mu| in nats

    /// Coset representatives of Z^n / A Z^n in canonical scan order; the
    /// index into this list is the branch label used everywhere else.
    std::vector<LatticeVector> cosets;

    /// Non-fatal findings, e.g. |det A| = 1.
    std::vector<std::string> warnings;

    int dim() const noexcept { return static_cast<int>(matrix.rows()); }
    Vec apply(const Vec& v) const { return real_matrix * v; }
};

/// Eigen-decomposes and classifies an integer matrix.
///
/// Throws SingularMatrix when det A = 0 and NotHyperbolic when an eigenvalue
/// lies within kHyperbolicityTolerance of the unit circle or when E^s or E^u
/// is trivial. A unimodular matrix is accepted with a warning.
LinearEndo analyze(const IntMat& matrix);

/// |det A| lattice vectors, pairwise inequivalent modulo A Z^n. The box
/// [0, |det A|)^n is scanned with the first coordinate varying fastest and
/// the first representative of each class is kept.
std::vector<LatticeVector> coset_representatives(const IntMat& matrix);

/// True when A^{-1}(k1 - k2) is an integer vector.
bool same_coset(const IntMat& matrix, const LatticeVector& k1, const LatticeVector& k2);

/// All |det A| solutions y of A y = x (mod Z^n), ordered by coset.
std::vector<TorusPoint> preimages_linear(const LinearEndo& a, const TorusPoint& x);

/// Apply A on the torus.
TorusPoint apply_linear(const LinearEndo& a, const TorusPoint& x);

}  // namespace anosov
