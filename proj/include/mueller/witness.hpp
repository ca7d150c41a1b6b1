#pragma once

// Polarization acting on a beam with two orthonormal spatial modes psi_1,
// psi_2. A beam coherence-polarization (BCP) matrix restricted to this span
// is a 4x4 hermitian matrix on the product basis
//
//   { x (x) psi_1, x (x) psi_2, y (x) psi_1, y (x) psi_2 }
//
// i.e. entry ((j,m),(k,n)) is the coefficient of psi_m(rho) psi_n(rho')^*
// in Phi_jk(rho; rho'). M acts on the polarization indices only. Fed the
// maximally entangled input x psi_1 + y psi_2, the output coefficient
// matrix equals H_M, so a negative eigenvector of H_M is an entangled
// generalized Jones vector that exposes an unphysical M.

#include "choi.hpp"
#include "core.hpp"

#include <cmath>
#include <optional>

namespace mueller {

struct TwoModeBcp {
    CMatrix4 c = CMatrix4::Zero();

    bool is_hermitian(double tol = kDefaultTol) const
    {
        return (c - c.adjoint()).norm() <= tol * std::max(c.norm(), 1e-300);
    }

    bool physical(double tol = kDefaultTol) const
    {
        if (!is_hermitian(tol)) return false;
        const Eigen::SelfAdjointEigenSolver<CMatrix4> eig(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
        const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
        return eig.eigenvalues()[0] >= -tol * scale;
    }

    /// 2x2 polarization block for the mode pair (m, n).
    CMatrix2 block(int m, int n) const
    {
        CMatrix2 out;
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) out(j, k) = c(2 * j + m, 2 * k + n);
        return out;
    }
};

struct TwoModeJones {
    CVector4 e = CVector4::Zero();
};

/// E = x psi_1 + y psi_2; returns E E^dagger.
inline TwoModeBcp witness_input()
{
    const CVector4 e(1.0, 0.0, 0.0, 1.0);
    return {e * e.adjoint()};
}

/// Pure beam built from a generalized Jones vector.
inline TwoModeBcp pure_bcp(const TwoModeJones& e) { return {e.e * e.e.adjoint()}; }

/// Polarization-mode separable BCP: polarization coherency (x) mode correlation.
inline TwoModeBcp separable_bcp(const CMatrix2& polarization, const CMatrix2& modes)
{
    return {kron(polarization, modes)};
}

/// Linear map on 2x2 coherency blocks equivalent to S -> M S, acting on
/// row-major vectorized blocks: vec(Phi') = A^{-1} M A vec(Phi).
inline CMatrix4 coherency_superoperator(const MuellerCandidate& m)
{
    return a_matrix_inverse() * m.matrix().cast<Complex>() * a_matrix();
}

/// Applies M to the polarization indices of every mode-pair block.
inline TwoModeBcp extended_action(const MuellerCandidate& m, const TwoModeBcp& in)
{
    const CMatrix4 k = coherency_superoperator(m);
    TwoModeBcp out;
    for (int mode_a = 0; mode_a < 2; ++mode_a)
        for (int mode_b = 0; mode_b < 2; ++mode_b) {
            const CVector4 v = k * vectorize(in.block(mode_a, mode_b));
            const CMatrix2 blk = devectorize(v);
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) out.c(2 * j + mode_a, 2 * l + mode_b) = blk(j, l);
        }
    return out;
}

/// e^dagger C e.
inline double expectation(const TwoModeBcp& c, const TwoModeJones& e, double tol = kDefaultTol)
{
    if (!c.is_hermitian(tol)) throw NonHermitianInput("expectation: BCP matrix is not hermitian");
    return (e.e.adjoint() * c.c * e.e)(0, 0).real();
}

// Witness families. E(+-) = x psi_1 +- y psi_2, F(+-) = x psi_2 +- y psi_1,
// and their one-parameter generalizations used for the Type-II canonical form.
inline TwoModeJones witness_e(double sign) { return {CVector4(1.0, 0.0, 0.0, sign)}; }
inline TwoModeJones witness_f(double sign) { return {CVector4(0.0, 1.0, sign, 0.0)}; }
inline TwoModeJones witness_e_theta(double theta)
{
    return {CVector4(std::cos(theta), 0.0, 0.0, std::sin(theta))};
}
inline TwoModeJones witness_f_theta(double theta)
{
    return {CVector4(0.0, std::cos(theta), std::sin(theta), 0.0)};
}

/// Unit-norm generalized Jones vector with negative expectation against
/// extended_action(M, witness_input()), or empty when H_M is positive.
inline std::optional<TwoModeJones> witness_certificate(const MuellerCandidate& m, double tol = kDefaultTol)
{
    const PhysicalityReport r = physicality(m, tol);
    if (r.is_mueller) return std::nullopt;
    return TwoModeJones{r.min_eigenvector};
}

} // namespace mueller
