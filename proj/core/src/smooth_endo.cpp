#include "anosov/smooth_endo.hpp"

#include "anosov/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace anosov {

Vec ShearMap::apply(const Vec& z) const
{
    Vec out = z;
    out(axis) += amplitude * std::sin(kTwoPi * (frequency * z(driver) + phase));
    return out;
}

Vec ShearMap::apply_inverse(const Vec& z) const
{
    // The driver coordinate is left untouched, so the displacement can be
    // recomputed from the image.
    Vec out = z;
    out(axis) -= amplitude * std::sin(kTwoPi * (frequency * z(driver) + phase));
    return out;
}

double ShearMap::slope(const Vec& z) const
{
    return kTwoPi * amplitude * frequency * std::cos(kTwoPi * (frequency * z(driver) + phase));
}

Mat ShearMap::jacobian(const Vec& z) const
{
    Mat j = Mat::Identity(z.size(), z.size());
    j(axis, driver) = slope(z);
    return j;
}

SmoothEndo::SmoothEndo(LinearEndo base, std::vector<ShearMap> shears, NewtonOptions newton)
    : base_(std::move(base)), shears_(std::move(shears)), newton_(newton)
{
    const int n = base_.dim();
    if (base_.splitting.unstable_dim != 1) {
        throw InvalidArgument("SmoothEndo: the linear model must have a one-dimensional unstable bundle");
    }
    for (std::size_t i = 0; i < shears_.size(); ++i) {
        const auto& s = shears_[i];
        std::ostringstream where;
        where << "SmoothEndo: shear " << i << ": ";
        if (s.axis < 0 || s.axis >= n || s.driver < 0 || s.driver >= n) {
            throw InvalidArgument(where.str() + "axis and driver must be coordinate indices in [0, n)");
        }
        if (s.axis == s.driver) throw InvalidArgument(where.str() + "axis and driver must differ");
        if (s.frequency < 1) throw InvalidArgument(where.str() + "frequency must be a positive integer");
        if (!std::isfinite(s.amplitude)) throw InvalidArgument(where.str() + "amplitude must be finite");
        if (!(s.phase >= 0.0 && s.phase < 1.0)) throw InvalidArgument(where.str() + "phase must lie in [0, 1)");
    }
    if (newton_.max_iterations < 1 || !(newton_.residual_tolerance > 0.0) || !(newton_.max_step > 0.0)) {
        throw InvalidArgument("SmoothEndo: invalid Newton options");
    }
}

bool SmoothEndo::is_linear() const noexcept
{
    for (const auto& s : shears_) {
        if (s.amplitude != 0.0) return false;
    }
    return true;
}

double SmoothEndo::total_amplitude() const noexcept
{
    double sum = 0.0;
    for (const auto& s : shears_) sum += std::fabs(s.amplitude);
    return sum;
}

void SmoothEndo::lift_apply_with_derivative(const Vec& p, Vec& image, Mat& jacobian) const
{
    image = base_.real_matrix * p;
    jacobian = base_.real_matrix;
    for (const auto& s : shears_) {
        // (I + c e_axis e_driver^T) J adds c * (row driver) to row axis.
        const double c = s.slope(image);
        jacobian.row(s.axis) += c * jacobian.row(s.driver);
        image(s.axis) += s.amplitude * std::sin(kTwoPi * (s.frequency * image(s.driver) + s.phase));
    }
}

CoverPoint SmoothEndo::lift_apply(const CoverPoint& p) const
{
    Vec z = base_.real_matrix * p.coords;
    for (const auto& s : shears_) z = s.apply(z);
    return CoverPoint(z);
}

TorusPoint SmoothEndo::apply(const TorusPoint& x) const { return project(lift_apply(lift(x))); }

Mat SmoothEndo::derivative(const CoverPoint& p) const
{
    Vec image;
    Mat jac;
    lift_apply_with_derivative(p.coords, image, jac);
    return jac;
}

Mat SmoothEndo::derivative(const TorusPoint& x) const { return derivative(lift(x)); }

Vec SmoothEndo::newton_solve(const Vec& target, int branch) const
{
    Vec y = base_.inverse * target;
    Vec image;
    Mat jac;
    double residual = 0.0;
    for (int it = 0; it <= newton_.max_iterations; ++it) {
        lift_apply_with_derivative(y, image, jac);
        const Vec r = image - target;
        residual = r.lpNorm<Eigen::Infinity>();
        if (residual <= newton_.residual_tolerance) return y;
        if (it == newton_.max_iterations) break;
        Vec step = jac.partialPivLu().solve(r);
        const double len = step.norm();
        if (!std::isfinite(len)) break;
        if (len > newton_.max_step) step *= newton_.max_step / len;
        y -= step;
    }
    std::ostringstream os;
    os << "Newton did not converge within " << newton_.max_iterations << " iterations on ";
    if (branch >= 0) {
        os << "coset branch " << branch << " (k = " << base_.cosets[static_cast<std::size_t>(branch)].entries.transpose()
           << ")";
    } else {
        os << "the inverse of the lift";
    }
    os << ", residual " << residual << "; the perturbation is likely too large";
    throw NewtonFailure(os.str(), branch);
}

TorusPoint SmoothEndo::preimage(const TorusPoint& x, int branch) const
{
    if (branch < 0 || branch >= degree()) throw InvalidArgument("preimage: branch out of range");
    const Vec target = x.coords() + base_.cosets[static_cast<std::size_t>(branch)].as_real();
    return TorusPoint(newton_solve(target, branch));
}

std::vector<TorusPoint> SmoothEndo::preimages(const TorusPoint& x) const
{
    std::vector<TorusPoint> out;
    out.reserve(static_cast<std::size_t>(degree()));
    for (int b = 0; b < degree(); ++b) out.push_back(preimage(x, b));
    return out;
}

CoverPoint SmoothEndo::inverse_lift(const CoverPoint& q) const
{
    // Solve near the origin and translate back: f(p + k) = f(p) + A k.
    Vec seed = base_.inverse * q.coords;
    IntVec k(seed.size());
    for (Eigen::Index i = 0; i < seed.size(); ++i) k(i) = std::llround(seed(i));
    const Vec shift = base_.real_matrix * k.cast<double>();
    const Vec p = newton_solve(q.coords - shift, -1);
    return CoverPoint(p + k.cast<double>());
}

CoverPoint SmoothEndo::inverse_lift_closed_form(const CoverPoint& q) const
{
    Vec z = q.coords;
    for (auto it = shears_.rbegin(); it != shears_.rend(); ++it) z = it->apply_inverse(z);
    return CoverPoint(base_.inverse * z);
}

}  // namespace anosov
