#pragma once

// Domain types and exact linear conversions between the Jones, coherency,
// Stokes, Mueller and associated-hermitian (H) representations.
//
// Conventions used throughout the library:
//   tau_0 = I, tau_1 = sigma_3, tau_2 = sigma_1, tau_3 = sigma_2
//   (circular polarization sits on the third Poincare axis).
//   A 2x2 matrix K is vectorized row-major: (K11, K12, K21, K22).
//   Index pairs (j, m) of a 4x4 matrix built from two 2x2 factors are
//   flattened as 2*j + m.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace mueller {

using Real = double;
using Complex = std::complex<double>;

using Vector3 = Eigen::Vector3d;
using Vector4 = Eigen::Vector4d;
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;
using CVector4 = Eigen::Vector4cd;
using CMatrix2 = Eigen::Matrix2cd;
using CMatrix4 = Eigen::Matrix4cd;

/// Relative tolerance used by every predicate unless the caller overrides it.
inline constexpr double kDefaultTol = 1e-9;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonHermitianInput : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// fixed matrices

/// The tau basis. tr(tau_a tau_b) = 2 delta_ab.
inline const CMatrix2& tau(int a)
{
    static const std::array<CMatrix2, 4> basis = [] {
        const Complex i{0.0, 1.0};
        std::array<CMatrix2, 4> t;
        t[0] << 1, 0,
                0, 1;
        t[1] << 1, 0,
                0, -1;
        t[2] << 0, 1,
                1, 0;
        t[3] << 0, -i,
                i, 0;
        return t;
    }();
    return basis.at(static_cast<std::size_t>(a));
}

/// Maps the vectorized coherency matrix to the Stokes vector: S = A * vec(Phi).
inline const CMatrix4& a_matrix()
{
    static const CMatrix4 a = [] {
        const Complex i{0.0, 1.0};
        CMatrix4 m;
        m << 1, 0, 0, 1,
             1, 0, 0, -1,
             0, 1, 1, 0,
             0, i, -i, 0;
        return m;
    }();
    return a;
}

/// A^{-1} = A^dagger / 2.
inline const CMatrix4& a_matrix_inverse()
{
    static const CMatrix4 inv = a_matrix().adjoint() * 0.5;
    return inv;
}

/// Lorentz metric G = diag(1, -1, -1, -1).
inline const Matrix4& lorentz_metric()
{
    static const Matrix4 g = Vector4(1.0, -1.0, -1.0, -1.0).asDiagonal();
    return g;
}

/// Kronecker product of two 2x2 matrices; entry ((j,m),(k,n)) = a_jk * b_mn.
inline CMatrix4 kron(const CMatrix2& a, const CMatrix2& b)
{
    CMatrix4 out;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            out.block<2, 2>(2 * j, 2 * k) = a(j, k) * b;
    return out;
}

/// U_ab = tau_a (x) conj(tau_b) / 2, an orthonormal hermitian basis of 4x4 matrices.
inline const CMatrix4& u_basis(int a, int b)
{
    static const std::array<CMatrix4, 16> basis = [] {
        std::array<CMatrix4, 16> u;
        for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q)
                u[static_cast<std::size_t>(4 * p + q)] = 0.5 * kron(tau(p), tau(q).conjugate());
        return u;
    }();
    return basis.at(static_cast<std::size_t>(4 * a + b));
}

// ---------------------------------------------------------------------------
// domain types

struct StokesVector {
    Vector4 s = Vector4::Zero();

    double intensity() const { return s[0]; }

    /// S^T G S.
    double lorentz_norm() const { return s[0] * s[0] - s.tail<3>().squaredNorm(); }

    /// Closed solid forward light cone: pure states (on the surface) count.
    bool physical(double tol = kDefaultTol) const
    {
        return s[0] > 0.0 && lorentz_norm() >= -tol * s[0] * s[0];
    }

    bool pure(double tol = kDefaultTol) const
    {
        return physical(tol) && std::abs(lorentz_norm()) <= tol * s[0] * s[0];
    }
};

struct CoherencyMatrix {
    CMatrix2 phi = CMatrix2::Zero();

    bool is_hermitian(double tol = kDefaultTol) const
    {
        return (phi - phi.adjoint()).norm() <= tol * std::max(phi.norm(), 1e-300);
    }

    bool is_physical(double tol = kDefaultTol) const
    {
        const double tr = phi.trace().real();
        return is_hermitian(tol) && tr > 0.0 && phi.determinant().real() >= -tol * tr * tr;
    }
};

struct JonesMatrix {
    CMatrix2 j = CMatrix2::Identity();
};

struct HermitianChoi {
    CMatrix4 h = CMatrix4::Zero();
};

/// (K11, K12, K21, K22).
inline CVector4 vectorize(const CMatrix2& k)
{
    return CVector4(k(0, 0), k(0, 1), k(1, 0), k(1, 1));
}

inline CMatrix2 devectorize(const CVector4& v)
{
    CMatrix2 k;
    k << v[0], v[1],
         v[2], v[3];
    return k;
}

/// H_M = 1/2 sum_ab M_ab tau_a (x) conj(tau_b).
inline CMatrix4 hermitian_from_real(const Matrix4& m)
{
    CMatrix4 h = CMatrix4::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (m(a, b) != 0.0) h += m(a, b) * u_basis(a, b);
    return h;
}

/// Real 4x4 matrix M with its associated hermitian matrix H_M and
/// N = G M^T G M. Both are computed on construction; the object is
/// immutable afterwards.
class MuellerCandidate {
public:
    MuellerCandidate() : MuellerCandidate(Matrix4::Zero()) {}

    template <typename Derived>
    MuellerCandidate(const Eigen::MatrixBase<Derived>& m) // NOLINT(google-explicit-constructor)
        : m_(m)
    {
        const Matrix4& g = lorentz_metric();
        h_.h = hermitian_from_real(m_);
        n_ = g * m_.transpose() * g * m_;
    }

    const Matrix4& matrix() const { return m_; }
    const HermitianChoi& h() const { return h_; }
    const Matrix4& n() const { return n_; }

    double operator()(int r, int c) const { return m_(r, c); }

private:
    Matrix4 m_;
    HermitianChoi h_;
    Matrix4 n_;
};

// ---------------------------------------------------------------------------
// conversions

/// S_a = tr(tau_a Phi). Throws NonHermitianInput if any trace is not real.
inline StokesVector stokes_from_coherency(const CoherencyMatrix& c, double tol = kDefaultTol)
{
    StokesVector out;
    const double scale = std::max(c.phi.norm(), 1e-300);
    for (int a = 0; a < 4; ++a) {
        const Complex t = (tau(a) * c.phi).trace();
        if (std::abs(t.imag()) > tol * scale)
            throw NonHermitianInput("stokes_from_coherency: coherency matrix is not hermitian");
        out.s[a] = t.real();
    }
    return out;
}

/// Phi = 1/2 sum_a S_a tau_a.
inline CoherencyMatrix coherency_from_stokes(const StokesVector& s)
{
    CoherencyMatrix out;
    for (int a = 0; a < 4; ++a) out.phi += 0.5 * s.s[a] * tau(a);
    return out;
}

/// M(J) = A (J (x) J*) A^{-1}. Valid for singular J as well.
inline MuellerCandidate mueller_from_jones(const JonesMatrix& jones)
{
    const CMatrix4 m = a_matrix() * kron(jones.j, jones.j.conjugate()) * a_matrix_inverse();
    return MuellerCandidate(m.real());
}

inline HermitianChoi h_from_m(const MuellerCandidate& m) { return m.h(); }

/// (M_H)_ab = 1/2 tr(H tau_a (x) conj(tau_b)). Throws NonHermitianInput when
/// ||H - H^dagger|| > tol ||H||.
inline MuellerCandidate m_from_h(const HermitianChoi& h, double tol = kDefaultTol)
{
    if ((h.h - h.h.adjoint()).norm() > tol * h.h.norm())
        throw NonHermitianInput("m_from_h: matrix is not hermitian");
    Matrix4 m;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            m(a, b) = (h.h * u_basis(a, b)).trace().real();
    return MuellerCandidate(m);
}

} // namespace mueller
