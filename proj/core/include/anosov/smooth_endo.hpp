#pragma once

#include "anosov/linear_endo.hpp"
#include "anosov/torus.hpp"

#include <string>
#include <vector>

namespace anosov {

/// Area-preserving shear of the torus:
///   x_axis -> x_axis + amplitude * sin(2 pi (frequency * x_driver + phase)).
/// Unit Jacobian, Z^n-equivariant on the cover, explicitly invertible.
struct ShearMap {
    int axis = 0;
    int driver = 1;
    double amplitude = 0.0;
    int frequency = 1;
    double phase = 0.0;

    Vec apply(const Vec& z) const;
    Vec apply_inverse(const Vec& z) const;
    /// d(shear)/dz at z; identity plus one off-diagonal entry.
    Mat jacobian(const Vec& z) const;
    /// The derivative factor 2 pi * amplitude * frequency * cos(...).
    double slope(const Vec& z) const;
};

/// Newton controls for inverse branches of the lifted map.
struct NewtonOptions {
    int max_iterations = 50;
    double residual_tolerance = 1e-12;
    double max_step = 0.5;
};

/// f = S_m o ... o S_1 o A on the torus: a conservative, real-analytic map
/// homotopic to A. Immutable; all member functions are pure and thread-safe.
class SmoothEndo {
  public:
    /// Throws InvalidArgument for malformed shears or dim E^u_A != 1.
    SmoothEndo(LinearEndo base, std::vector<ShearMap> shears, NewtonOptions newton = {});

    static SmoothEndo linear(LinearEndo base) { return SmoothEndo(std::move(base), {}); }

    const LinearEndo& base() const noexcept { return base_; }
    const std::vector<ShearMap>& shears() const noexcept { return shears_; }
    const NewtonOptions& newton_options() const noexcept { return newton_; }
    int dim() const noexcept { return base_.dim(); }
    int degree() const noexcept { return static_cast<int>(base_.degree); }
    bool is_linear() const noexcept;
    /// Sum of |amplitude| over all shears; bounds |f(p) - A p| on the cover.
    double total_amplitude() const noexcept;

    TorusPoint apply(const TorusPoint& x) const;
    CoverPoint lift_apply(const CoverPoint& p) const;
    Mat derivative(const TorusPoint& x) const;
    /// Derivative of the lift; equals derivative(project(p)).
    Mat derivative(const CoverPoint& p) const;

    /// Evaluates the lift and its derivative in one pass.
    void lift_apply_with_derivative(const Vec& p, Vec& image, Mat& jacobian) const;

    /// The |det A| preimages of x, indexed by coset branch. Each is found by
    /// Newton's method on f(y) = x + k seeded at A^{-1}(x + k).
    /// Throws NewtonFailure naming the branch that did not converge.
    std::vector<TorusPoint> preimages(const TorusPoint& x) const;
    TorusPoint preimage(const TorusPoint& x, int branch) const;

    /// The unique p with lift_apply(p) = q.
    CoverPoint inverse_lift(const CoverPoint& q) const;

    /// Exact inverse of the lift through the explicit shear inverses; an
    /// independent route to inverse_lift used for cross-checking.
    CoverPoint inverse_lift_closed_form(const CoverPoint& q) const;

  private:
    Vec newton_solve(const Vec& target, int branch) const;

    LinearEndo base_;
    std::vector<ShearMap> shears_;
    NewtonOptions newton_;
};

/// Grid estimate of the C^1 distance between f and A over the fundamental
/// domain: max of |f(x) - A x| and |Df(x) - A| (spectral norm) over the
/// resolution^n grid points j / resolution.
double c1_distance_to_linear(const SmoothEndo& f, int resolution, int threads = 0);

struct ConeConfig {
    double unstable_halfangle = 0.3;  ///< radians, around E^u_A
    double stable_halfangle = 0.3;    ///< radians, around E^s_A
    int grid_resolution = 256;
    int angular_samples = 16;  ///< interior rays per cone in addition to its boundary
    int threads = 0;
};

/// Outcome of the sampled cone-field check. Stretch is measured in the
/// coordinates of the splitting E^u_A + E^s_A: the E^u_A component of cone
/// vectors for expansion, the E^s_A component under Df^{-1} for contraction.
struct HyperbolicityCertificate {
    double cone_halfangle_u = 0.0;
    double cone_halfangle_s = 0.0;
    double expansion_bound = 0.0;    ///< lambda_min^u
    double contraction_bound = 0.0;  ///< lambda_max^s
    double constant_c = 1.0;         ///< C >= 1 converting cone stretch to Euclidean norms
    int grid_resolution = 0;
    long long samples_checked = 0;
    bool verified = false;
    bool has_witness = false;
    TorusPoint witness;
    std::string failure;
};

HyperbolicityCertificate verify_cones(const SmoothEndo& f, const ConeConfig& cfg);

}  // namespace anosov
