#pragma once

// Pre-Mueller certification: does M map the solid Stokes light cone into
// itself? The cone is generated by its extreme rays S = (1, s), |s| = 1, so
// two global minimizations over the unit sphere settle the question exactly.

#include "core.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace mueller {

struct SphereMinimum {
    double value = 0.0;
    Vector3 point = Vector3::UnitX();
};

/// Global minimum of s^T A s + 2 b^T s over the unit sphere |s| = 1.
///
/// In the eigenbasis of A the stationary points satisfy (A - mu I) s = -b.
/// The global minimizer has mu <= lambda_min(A); mu is found from the secular
/// equation sum_i beta_i^2 / (lambda_i - mu)^2 = 1 by bisection. When b has
/// no component along the bottom eigenspace (the "hard case") mu = lambda_min
/// and the solution is completed along a bottom eigenvector.
inline SphereMinimum sphere_quadratic_min(const Matrix3& a, const Vector3& b)
{
    const Matrix3 sym = 0.5 * (a + a.transpose());
    const Eigen::SelfAdjointEigenSolver<Matrix3> eig(sym);
    const Vector3 lambda = eig.eigenvalues(); // ascending
    const Matrix3& q = eig.eigenvectors();
    const Vector3 beta = q.transpose() * b;

    const double scale = std::max({std::abs(lambda[0]), std::abs(lambda[2]), b.norm(), 1e-300});
    const double cluster = 1e-12 * scale;
    const double lmin = lambda[0];

    auto objective = [&](const Vector3& s) { return s.dot(sym * s) + 2.0 * b.dot(s); };

    SphereMinimum best{std::numeric_limits<double>::infinity(), Vector3::UnitX()};
    auto consider = [&](Vector3 y) {
        const double nrm = y.norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm)) return;
        const Vector3 s = q * (y / nrm);
        const double v = objective(s);
        if (v < best.value) best = {v, s};
    };

    // Eigenvector candidates are always feasible and guard the degenerate paths.
    for (int i = 0; i < 3; ++i) {
        consider(Vector3::Unit(i));
        consider(-Vector3::Unit(i));
    }

    // Easy case: root of the secular equation strictly below lambda_min.
    const double bnorm = beta.norm();
    if (bnorm > 0.0) {
        auto secular = [&](double mu) {
            double acc = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double r = beta[i] / (lambda[i] - mu);
                acc += r * r;
            }
            return acc;
        };
        double lo = lmin - bnorm - 1.0;
        double hi = lmin;
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (secular(mid) > 1.0)
                hi = mid;
            else
                lo = mid;
        }
        for (double mu : {lo, hi}) {
            if (!(mu < lmin)) continue;
            Vector3 y;
            for (int i = 0; i < 3; ++i) y[i] = -beta[i] / (lambda[i] - mu);
            consider(y);
        }
    }

    // Hard case: components along the bottom eigenspace treated as zero.
    {
        Vector3 y = Vector3::Zero();
        int bottom = -1;
        for (int i = 0; i < 3; ++i) {
            if (lambda[i] - lmin <= cluster) {
                if (bottom < 0) bottom = i;
            } else {
                y[i] = -beta[i] / (lambda[i] - lmin);
            }
        }
        const double rest = y.squaredNorm();
        if (bottom >= 0 && rest <= 1.0) {
            const double t = std::sqrt(1.0 - rest);
            Vector3 plus = y, minus = y;
            plus[bottom] += t;
            minus[bottom] -= t;
            consider(plus);
            consider(minus);
        }
    }

    return best;
}

struct ConeVerdict {
    bool is_pre_mueller = false;
    /// min over pure unit-intensity inputs of the output intensity
    double intensity_margin = 0.0;
    /// min over pure unit-intensity inputs of S'^T G S'
    double lorentz_margin = 0.0;
    /// Poincare-sphere point attaining the binding margin
    Vector3 worst_input = Vector3::UnitX();
};

/// Decides whether M maps the closed solid light cone into itself.
///
/// Margins are reported in the scale of M; the verdict compares them with
/// tol after normalizing M to unit largest singular value, so it is
/// invariant under positive rescaling. A pure input mapped to the zero
/// vector (the cone apex) is allowed.
inline ConeVerdict certify_cone(const MuellerCandidate& candidate, double tol = kDefaultTol)
{
    const Matrix4& m = candidate.matrix();
    const double sigma = Eigen::JacobiSVD<Matrix4>(m).singularValues()[0];
    if (!(sigma > 0.0)) return {true, 0.0, 0.0, Vector3::UnitX()};

    const Matrix4 mn = m / sigma;

    const Vector3 row = mn.block<1, 3>(0, 1).transpose();
    const double intensity = mn(0, 0) - row.norm();
    const Vector3 intensity_point = row.norm() > 0.0 ? Vector3(-row / row.norm()) : Vector3::UnitX();

    const Matrix4 q = mn.transpose() * lorentz_metric() * mn;
    const SphereMinimum sm = sphere_quadratic_min(q.block<3, 3>(1, 1), q.block<3, 1>(1, 0));
    const double lorentz = q(0, 0) + sm.value;

    ConeVerdict v;
    v.is_pre_mueller = intensity >= -tol && lorentz >= -tol;
    v.intensity_margin = sigma * intensity;
    v.lorentz_margin = sigma * sigma * lorentz;
    v.worst_input = intensity <= lorentz ? intensity_point : sm.point;
    return v;
}

} // namespace mueller
