#pragma once

// Double-coset canonical forms of pre-Mueller matrices under the proper
// orthochronous Lorentz group, M = L_left * C * L_right, with C one of
//
//   Type I     diag(d0, d1, d2, d3),             d0 >= d1 >= d2 >= |d3|
//   Type II    diag(d) plus C_01 = d0 - d1,      d0 > d1 > 0, sqrt(d0 d1) >= d2 >= |d3|
//   Polarizer  d0 * [1 1; 1 1] (top-left block)
//   Pin map    d0 * [1 0; 1 0] (top-left block)
//
// and the closed-form positivity conditions on the canonical parameters.
//
// The family is read off N = G M^T G M = L_right^{-1} (G C^T G C) L_right:
// for Type I, N is diagonalizable with eigenvalues d_a^2; for Type II it has
// a 2x2 Jordan block at d0 d1; the two rank-one families have N = 0.

#include "conetest.hpp"
#include "core.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace mueller {

class DegenerateSpectrum : public Error {
public:
    using Error::Error;
};

class NotTypeI : public Error {
public:
    using Error::Error;
};

enum class Family { TypeI, TypeII, Polarizer, PinMap, NotPreMueller, Indeterminate };

inline const char* to_string(Family f)
{
    switch (f) {
    case Family::TypeI: return "TypeI";
    case Family::TypeII: return "TypeII";
    case Family::Polarizer: return "Polarizer";
    case Family::PinMap: return "PinMap";
    case Family::NotPreMueller: return "NotPreMueller";
    case Family::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

struct LorentzFactors {
    Matrix4 left = Matrix4::Identity();
    Matrix4 right = Matrix4::Identity();
};

struct CanonicalClass {
    Family family = Family::Indeterminate;
    std::optional<Vector4> d;
    std::optional<LorentzFactors> factors;
    std::string diagnostics;
};

struct Type1Factorization {
    Matrix4 left;
    Vector4 d;
    Matrix4 right;
};

inline Matrix4 type1_canonical(const Vector4& d) { return d.asDiagonal(); }

inline Matrix4 type2_canonical(const Vector4& d)
{
    Matrix4 m = d.asDiagonal();
    m(0, 1) = d[0] - d[1];
    return m;
}

inline Matrix4 polarizer_canonical(double d0)
{
    Matrix4 m = Matrix4::Zero();
    m.block<2, 2>(0, 0).setConstant(d0);
    return m;
}

inline Matrix4 pin_map_canonical(double d0)
{
    Matrix4 m = Matrix4::Zero();
    m(0, 0) = d0;
    m(1, 0) = d0;
    return m;
}

/// L^T G L = G, det L = 1, L_00 > 0.
inline bool is_proper_orthochronous(const Matrix4& l, double tol = 1e-9)
{
    const Matrix4& g = lorentz_metric();
    return (l.transpose() * g * l - g).norm() <= tol * std::max(1.0, l.squaredNorm()) &&
           l(0, 0) > 0.0 && std::abs(l.determinant() - 1.0) <= tol * std::max(1.0, l.squaredNorm());
}

inline Matrix4 n_matrix(const MuellerCandidate& m)
{
    const Matrix4& g = lorentz_metric();
    return g * m.matrix().transpose() * g * m.matrix();
}

// ---------------------------------------------------------------------------
// closed-form positivity conditions

/// Outcome of the four linear inequalities on diag(d0, d1, d2, d3).
struct ConstraintCheck {
    bool satisfied = false;
    /// 1-based position of the inequality with the largest violation
    /// (or the smallest slack when all hold)
    int position = 0;
    std::string formula;
    /// lhs - d0 of the binding inequality; positive means violated
    double violation = 0.0;
    std::array<double, 4> excess{}; ///< lhs_i - d0 for every inequality
};

inline ConstraintCheck type1_constraint_check(const Vector4& d, double tol = kDefaultTol)
{
    static const std::array<const char*, 4> formulas = {
        "-d1-d2-d3 <= d0", "-d1+d2+d3 <= d0", "d1+d2-d3 <= d0", "d1-d2+d3 <= d0"};
    const std::array<double, 4> lhs = {-d[1] - d[2] - d[3], -d[1] + d[2] + d[3],
                                       d[1] + d[2] - d[3], d[1] - d[2] + d[3]};
    ConstraintCheck c;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        c.excess[i] = lhs[i] - d[0];
        if (c.excess[i] > c.excess[worst]) worst = i;
    }
    const double scale = d.cwiseAbs().maxCoeff();
    c.position = static_cast<int>(worst) + 1;
    c.formula = formulas[worst];
    c.violation = c.excess[worst];
    c.satisfied = c.violation <= tol * scale;
    return c;
}

/// True iff diag(d) is a Mueller matrix.
inline bool type1_constraints(const Vector4& d, double tol = kDefaultTol)
{
    return type1_constraint_check(d, tol).satisfied;
}

/// True iff the Type-II canonical matrix with parameters d is a Mueller
/// matrix: d3 = d2 and d2^2 <= d0 d1. Expects d0 > d1 > 0.
inline bool type2_constraints(const Vector4& d, double tol = kDefaultTol)
{
    const double scale = d.cwiseAbs().maxCoeff();
    return std::abs(d[3] - d[2]) <= tol * scale && d[2] * d[2] <= d[0] * d[1] + tol * scale * scale;
}

/// Spectrum of H for diag(d): the two 2x2 blocks give
/// (d0+d1 +- (d2+d3))/2 and (d0-d1 +- (d2-d3))/2. Sorted descending.
inline Vector4 h_eigs_diagonal(const Vector4& d)
{
    std::array<double, 4> e = {0.5 * (d[0] + d[1] + d[2] + d[3]), 0.5 * (d[0] + d[1] - d[2] - d[3]),
                               0.5 * (d[0] - d[1] + d[2] - d[3]), 0.5 * (d[0] - d[1] - d[2] + d[3])};
    std::sort(e.begin(), e.end(), std::greater<>());
    return {e[0], e[1], e[2], e[3]};
}

// ---------------------------------------------------------------------------
// factorization and classification

namespace detail {

inline Vector4 null_vector(const Matrix4& a)
{
    const Eigen::JacobiSVD<Matrix4> svd(a, Eigen::ComputeFullV);
    return svd.matrixV().col(3);
}

inline double lorentz_dot(const Vector4& a, const Vector4& b)
{
    return a[0] * b[0] - a.tail<3>().dot(b.tail<3>());
}

/// Real parts of the spectrum of a real 4x4 matrix, sorted descending, and
/// the largest imaginary part.
inline std::pair<std::array<double, 4>, double> real_spectrum(const Matrix4& n)
{
    const Eigen::EigenSolver<Matrix4> es(n, false);
    std::array<double, 4> re{};
    double max_imag = 0.0;
    for (int i = 0; i < 4; ++i) {
        re[static_cast<std::size_t>(i)] = es.eigenvalues()[i].real();
        max_imag = std::max(max_imag, std::abs(es.eigenvalues()[i].imag()));
    }
    std::sort(re.begin(), re.end(), std::greater<>());
    return {re, max_imag};
}

} // namespace detail

/// Generic Type-I factorization M = L_left * diag(d) * L_right.
///
/// Requires distinct eigenvalues of N (gaps at least sqrt(tol) after
/// scaling N to unit top eigenvalue); throws DegenerateSpectrum
/// otherwise and NotTypeI when the eigenvector structure is not that of a
/// Type-I matrix. A single vanishing d3 is allowed.
inline Type1Factorization type1_factor(const MuellerCandidate& m, double tol = kDefaultTol)
{
    const Matrix4& g = lorentz_metric();
    const double sigma = Eigen::JacobiSVD<Matrix4>(m.matrix()).singularValues()[0];
    if (!(sigma > 0.0)) throw DegenerateSpectrum("type1_factor: zero matrix");
    Matrix4 mn = m.matrix() / sigma;
    Matrix4 n = g * mn.transpose() * g * mn;
    const double gap_tol = std::sqrt(tol);

    auto [lambda, max_imag] = detail::real_spectrum(n);
    if (!(lambda[0] > tol)) throw NotTypeI("type1_factor: G M^T G M has no positive eigenvalue");
    // rescale so the top eigenvalue of N (d0^2, boost invariant) is one
    const double top = lambda[0];
    mn /= std::sqrt(top);
    n /= top;
    for (auto& l : lambda) l /= top;
    max_imag /= top;
    const double scale = sigma * std::sqrt(top);
    if (max_imag > gap_tol) throw NotTypeI("type1_factor: N has a complex spectrum");
    for (std::size_t i = 0; i + 1 < 4; ++i)
        if (lambda[i] - lambda[i + 1] < gap_tol)
            throw DegenerateSpectrum("type1_factor: repeated eigenvalues of G M^T G M");
    if (lambda[3] < -gap_tol) throw NotTypeI("type1_factor: N has a negative eigenvalue");

    Matrix4 p; // columns: G-orthonormal eigenvectors of N, p = L_right^{-1}
    for (int i = 0; i < 4; ++i) {
        Vector4 w = detail::null_vector(n - lambda[static_cast<std::size_t>(i)] * Matrix4::Identity());
        const double gw = detail::lorentz_dot(w, w);
        if (i == 0 ? !(gw > 0.0) : !(gw < 0.0))
            throw NotTypeI("type1_factor: eigenvector of N has the wrong causal character");
        w /= std::sqrt(std::abs(gw));
        if (i == 0 && w[0] < 0.0) w = -w;
        p.col(i) = w;
    }
    if (p.determinant() < 0.0) p.col(3) = -p.col(3);

    Vector4 d;
    for (int i = 0; i < 4; ++i) d[i] = std::sqrt(std::max(lambda[static_cast<std::size_t>(i)], 0.0));
    if (mn.determinant() < 0.0) d[3] = -d[3];

    Matrix4 left;
    for (int i = 0; i < 3; ++i) left.col(i) = mn * p.col(i) / d[i];
    if (std::abs(d[3]) > gap_tol) {
        left.col(3) = mn * p.col(3) / d[3];
    } else {
        // singular M: complete the Lorentz frame
        Matrix4 constraints = Matrix4::Zero();
        for (int i = 0; i < 3; ++i) constraints.row(i) = (g * left.col(i)).transpose();
        Vector4 c = detail::null_vector(constraints);
        c /= std::sqrt(std::abs(detail::lorentz_dot(c, c)));
        left.col(3) = c;
        if (left.determinant() < 0.0) left.col(3) = -left.col(3);
    }
    const Matrix4 right = g * p.transpose() * g;

    if (!is_proper_orthochronous(left, gap_tol) || !is_proper_orthochronous(right, gap_tol))
        throw NotTypeI("type1_factor: recovered factors are not proper orthochronous");

    return {left, scale * d, right};
}

/// Assigns M to one of the four canonical families (or NotPreMueller /
/// Indeterminate). Jordan structure is discontinuous, so numerically
/// ambiguous rank decisions produce Indeterminate with a diagnostic rather
/// than a guess.
inline CanonicalClass classify(const MuellerCandidate& m, double tol = kDefaultTol)
{
    CanonicalClass out;
    const Matrix4& g = lorentz_metric();
    const double rtol = std::sqrt(tol);

    if (!certify_cone(m, tol).is_pre_mueller) {
        out.family = Family::NotPreMueller;
        out.diagnostics = "does not map the Stokes cone into itself";
        return out;
    }

    const Eigen::JacobiSVD<Matrix4> svd(m.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector4 sv = svd.singularValues();
    const double sigma = sv[0];
    if (!(sigma > 0.0)) {
        out.family = Family::TypeI;
        out.d = Vector4::Zero();
        out.diagnostics = "zero matrix";
        return out;
    }

    // rank one: M = u v^T
    if (sv[1] <= tol * sigma) {
        Vector4 u = svd.matrixU().col(0) * sigma;
        Vector4 v = svd.matrixV().col(0);
        if (u[0] < 0.0) {
            u = -u;
            v = -v;
        }
        const double uu = detail::lorentz_dot(u, u) / u.squaredNorm();
        const double vv = detail::lorentz_dot(v, v) / v.squaredNorm();
        if (std::abs(uu) <= tol) {
            if (std::abs(vv) <= tol) {
                out.family = Family::Polarizer;
            } else if (vv >= rtol) {
                out.family = Family::PinMap;
            } else {
                out.family = Family::Indeterminate;
                out.diagnostics = "rank one, input covector neither lightlike nor timelike within tol";
                return out;
            }
            // d0 is fixed only up to a boost; u0 v0 reproduces it for matrices
            // already in canonical form.
            out.d = Vector4(u[0] * v[0], 0.0, 0.0, 0.0);
            return out;
        }
        if (uu < rtol) {
            out.family = Family::Indeterminate;
            out.diagnostics = "rank one, output direction neither lightlike nor timelike within tol";
            return out;
        }
    }

    Matrix4 mn = m.matrix() / sigma;
    Matrix4 n = g * mn.transpose() * g * mn;
    auto [lambda, max_imag] = detail::real_spectrum(n);
    if (!(lambda[0] > tol)) {
        out.family = Family::Indeterminate;
        out.diagnostics = "G M^T G M has no positive eigenvalue";
        return out;
    }
    const double top = lambda[0];
    mn /= std::sqrt(top);
    n /= top;
    for (auto& l : lambda) l /= top;
    max_imag /= top;
    const double scale = sigma * std::sqrt(top);
    const double nnorm = Eigen::JacobiSVD<Matrix4>(n).singularValues()[0];
    if (max_imag > rtol) {
        out.family = Family::Indeterminate;
        out.diagnostics = "G M^T G M has a complex spectrum";
        return out;
    }

    struct Cluster {
        double value;
        int algebraic;
        int geometric;
    };
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < 4;) {
        std::size_t j = i + 1;
        while (j < 4 && lambda[j - 1] - lambda[j] <= rtol) ++j;
        double mean = 0.0;
        for (std::size_t k = i; k < j; ++k) mean += lambda[k];
        mean /= static_cast<double>(j - i);
        const Vector4 s = Eigen::JacobiSVD<Matrix4>(n - mean * Matrix4::Identity()).singularValues();
        const int null = static_cast<int>((s.array() <= tol * nnorm).count());
        const int firm = static_cast<int>((s.array() >= rtol * nnorm).count());
        if (null + firm != 4) {
            out.family = Family::Indeterminate;
            out.diagnostics = "rank of (N - lambda I) is numerically ambiguous";
            return out;
        }
        clusters.push_back({mean, static_cast<int>(j - i), std::min(null, static_cast<int>(j - i))});
        i = j;
    }

    int defective = 0;
    bool jordan2 = false;
    for (const auto& c : clusters)
        if (c.geometric < c.algebraic) {
            ++defective;
            jordan2 = c.algebraic == 2 && c.geometric == 1;
        }

    if (defective == 0) {
        if (lambda[3] < -rtol) {
            out.family = Family::Indeterminate;
            out.diagnostics = "G M^T G M has a negative eigenvalue";
            return out;
        }
        if (clusters.front().algebraic == 1) {
            const Vector4 w = detail::null_vector(n - lambda[0] * Matrix4::Identity());
            if (!(detail::lorentz_dot(w, w) > 0.0)) {
                out.family = Family::Indeterminate;
                out.diagnostics = "top eigenvector of G M^T G M is not timelike";
                return out;
            }
        }
        Vector4 d;
        for (int i = 0; i < 4; ++i) d[i] = std::sqrt(std::max(lambda[static_cast<std::size_t>(i)], 0.0));
        if (mn.determinant() < 0.0) d[3] = -d[3];
        out.family = Family::TypeI;
        out.d = scale * d;
        try {
            const auto f = type1_factor(m, tol);
            out.factors = LorentzFactors{f.left, f.right};
        } catch (const Error& e) {
            out.diagnostics = std::string("no factorization: ") + e.what();
        }
        return out;
    }

    if (defective == 1 && jordan2) {
        out.family = Family::TypeII;
        const Matrix4& a = m.matrix();
        Matrix4 off = a - Matrix4(a.diagonal().asDiagonal());
        off(0, 1) -= a(0, 0) - a(1, 1);
        if (off.cwiseAbs().maxCoeff() <= tol * sigma) {
            out.d = Vector4(a.diagonal());
        } else {
            out.diagnostics = "Type-II parameters are reported only for matrices already in canonical form";
        }
        return out;
    }

    out.family = Family::Indeterminate;
    out.diagnostics = "Jordan structure of G M^T G M matches no canonical family";
    return out;
}

} // namespace mueller
