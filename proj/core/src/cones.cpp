#include "anosov/smooth_endo.hpp"

#include "anosov/error.hpp"
#include "anosov/parallel.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace anosov {
namespace {

// Grid points are visited row by row: the first coordinate indexes the row,
// the remaining n-1 coordinates are enumerated inside it.
long long points_per_row(int n, int resolution)
{
    long long count = 1;
    for (int i = 1; i < n; ++i) count *= resolution;
    return count;
}

Vec grid_point(int n, int resolution, long long row, long long index_in_row)
{
    Vec x(n);
    x(0) = static_cast<double>(row) / resolution;
    for (int i = 1; i < n; ++i) {
        x(i) = static_cast<double>(index_in_row % resolution) / resolution;
        index_in_row /= resolution;
    }
    return x;
}

// Orthonormal basis of the orthogonal complement of the columns of b.
Mat complement_basis(const Mat& b)
{
    const Eigen::Index n = b.rows();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(b)};
    Eigen::MatrixXd q = qr.householderQ();
    return Mat(q.rightCols(n - b.cols()));
}

// Unit vectors spread over the unit sphere of span(basis): +-each column and
// +-each normalized pairwise sum and difference.
std::vector<Vec> sphere_samples(const Mat& basis)
{
    std::vector<Vec> out;
    for (Eigen::Index i = 0; i < basis.cols(); ++i) {
        out.emplace_back(basis.col(i));
        out.emplace_back(-basis.col(i));
        for (Eigen::Index j = i + 1; j < basis.cols(); ++j) {
            for (double sj : {1.0, -1.0}) {
                Vec v = basis.col(i) + sj * basis.col(j);
                out.emplace_back(v.normalized());
                out.emplace_back(-v.normalized());
            }
        }
    }
    return out;
}

double angle_to_subspace(const Vec& v, const Mat& orthonormal_basis)
{
    const Vec proj = orthonormal_basis * (orthonormal_basis.transpose() * v);
    return std::atan2((v - proj).norm(), proj.norm());
}

struct RowOutcome {
    double min_unstable_stretch = std::numeric_limits<double>::infinity();
    double min_stable_stretch = std::numeric_limits<double>::infinity();
    long long checked = 0;
    bool failed = false;
    long long failed_index = -1;
    std::string reason;
};

}  // namespace

double c1_distance_to_linear(const SmoothEndo& f, int resolution, int threads)
{
    if (resolution < 1) throw InvalidArgument("c1_distance_to_linear: resolution must be positive");
    const int n = f.dim();
    const long long per_row = points_per_row(n, resolution);
    const Mat& a = f.base().real_matrix;
    std::vector<double> row_max(static_cast<std::size_t>(resolution), 0.0);
    parallel_for(static_cast<std::size_t>(resolution), threads, [&](std::size_t row) {
        double worst = 0.0;
        Vec image;
        Mat jac;
        for (long long j = 0; j < per_row; ++j) {
            const Vec x = grid_point(n, resolution, static_cast<long long>(row), j);
            f.lift_apply_with_derivative(x, image, jac);
            worst = std::max(worst, (image - a * x).norm());
            worst = std::max(worst, operator_norm(jac - a));
        }
        row_max[row] = worst;
    });
    return *std::max_element(row_max.begin(), row_max.end());
}

HyperbolicityCertificate verify_cones(const SmoothEndo& f, const ConeConfig& cfg)
{
    if (cfg.grid_resolution < 1) throw InvalidArgument("verify_cones: grid resolution must be positive");
    if (!(cfg.unstable_halfangle > 0.0) || !(cfg.stable_halfangle > 0.0)) {
        throw InvalidArgument("verify_cones: cone half-angles must be positive");
    }
    if (cfg.angular_samples < 0) throw InvalidArgument("verify_cones: angular_samples must be non-negative");

    const LinearEndo& a = f.base();
    const int n = a.dim();
    const Vec& e_u = a.e_u;
    const Mat& e_s = a.e_s_basis;

    HyperbolicityCertificate cert;
    cert.cone_halfangle_u = cfg.unstable_halfangle;
    cert.cone_halfangle_s = cfg.stable_halfangle;
    cert.grid_resolution = cfg.grid_resolution;

    const double gap = angle_to_subspace(e_u, e_s);
    if (cfg.unstable_halfangle + cfg.stable_halfangle >= gap) {
        std::ostringstream os;
        os << "cones overlap: half-angles " << cfg.unstable_halfangle << " + " << cfg.stable_halfangle
           << " must stay below the angle " << gap << " between E^u_A and E^s_A";
        cert.failure = os.str();
        return cert;
    }

    // Adapted coordinates: c = P^{-1} v with P = [e_u | E^s basis].
    Mat p(n, n);
    p.col(0) = e_u;
    p.rightCols(n - 1) = e_s;
    const Mat to_adapted = p.inverse();

    // Cone rays.
    std::vector<Vec> unstable_rays;
    for (const Vec& w : sphere_samples(complement_basis(Mat(e_u)))) {
        for (int j = 0; j <= cfg.angular_samples + 1; ++j) {
            const double t = cfg.unstable_halfangle * j / (cfg.angular_samples + 1);
            unstable_rays.push_back(std::cos(t) * e_u + std::sin(t) * w);
        }
    }
    std::vector<Vec> stable_rays;
    const auto stable_centers = sphere_samples(e_s);
    const auto stable_normals = sphere_samples(complement_basis(e_s));
    for (const Vec& b : stable_centers) {
        for (const Vec& w : stable_normals) {
            for (int j = 0; j <= cfg.angular_samples + 1; ++j) {
                const double t = cfg.stable_halfangle * j / (cfg.angular_samples + 1);
                stable_rays.push_back(std::cos(t) * b + std::sin(t) * w);
            }
        }
    }

    auto unstable_part = [&](const Vec& v) { return std::fabs((to_adapted * v)(0)); };
    auto stable_part = [&](const Vec& v) { return (to_adapted * v).tail(n - 1).norm(); };

    // Norm-equivalence constant on the cones (unit rays).
    double cu_min = std::numeric_limits<double>::infinity(), cu_max = 0.0;
    for (const Vec& v : unstable_rays) {
        cu_min = std::min(cu_min, unstable_part(v));
        cu_max = std::max(cu_max, unstable_part(v));
    }
    double cs_min = std::numeric_limits<double>::infinity(), cs_max = 0.0;
    for (const Vec& v : stable_rays) {
        cs_min = std::min(cs_min, stable_part(v));
        cs_max = std::max(cs_max, stable_part(v));
    }
    cert.constant_c = std::max(cu_max / cu_min, cs_max / cs_min);

    const long long per_row = points_per_row(n, cfg.grid_resolution);
    std::vector<RowOutcome> rows(static_cast<std::size_t>(cfg.grid_resolution));
    parallel_for(rows.size(), cfg.threads, [&](std::size_t row) {
        RowOutcome& out = rows[row];
        Vec image;
        Mat jac;
        for (long long j = 0; j < per_row; ++j) {
            const Vec x = grid_point(n, cfg.grid_resolution, static_cast<long long>(row), j);
            f.lift_apply_with_derivative(x, image, jac);
            const Mat inv = jac.inverse();
            ++out.checked;
            std::string reason;
            for (const Vec& v : unstable_rays) {
                const Vec w = jac * v;
                if (!(line_angle(w, e_u) < cfg.unstable_halfangle)) {
                    reason = "Df does not map the unstable cone into itself";
                    break;
                }
                out.min_unstable_stretch = std::min(out.min_unstable_stretch, unstable_part(w) / unstable_part(v));
            }
            if (reason.empty()) {
                for (const Vec& v : stable_rays) {
                    const Vec w = inv * v;
                    if (!(angle_to_subspace(w, e_s) < cfg.stable_halfangle)) {
                        reason = "Df^{-1} does not map the stable cone into itself";
                        break;
                    }
                    out.min_stable_stretch = std::min(out.min_stable_stretch, stable_part(w) / stable_part(v));
                }
            }
            if (reason.empty() && !(out.min_unstable_stretch > 1.0)) reason = "no expansion on the unstable cone";
            if (reason.empty() && !(out.min_stable_stretch > 1.0)) reason = "no contraction on the stable cone";
            if (!reason.empty()) {
                out.failed = true;
                out.failed_index = j;
                out.reason = std::move(reason);
                return;
            }
        }
    });

    double min_u = std::numeric_limits<double>::infinity();
    double min_s = std::numeric_limits<double>::infinity();
    for (std::size_t row = 0; row < rows.size(); ++row) {
        const auto& r = rows[row];
        cert.samples_checked += r.checked;
        min_u = std::min(min_u, r.min_unstable_stretch);
        min_s = std::min(min_s, r.min_stable_stretch);
        if (r.failed && !cert.has_witness) {
            cert.has_witness = true;
            cert.witness = TorusPoint(grid_point(n, cfg.grid_resolution, static_cast<long long>(row), r.failed_index));
            cert.failure = r.reason;
        }
    }
    cert.expansion_bound = min_u;
    cert.contraction_bound = 1.0 / min_s;
    cert.verified = !cert.has_witness && cert.expansion_bound > 1.0 && cert.contraction_bound < 1.0;
    return cert;
}

}  // namespace anosov
