#pragma once

// Physicality of a real 4x4 matrix: M is a Mueller matrix iff its
// associated hermitian matrix H_M is positive semidefinite, in which case
// M is a convex sum of Mueller-Jones matrices read off the spectrum of H_M.

#include "core.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace mueller {

class NotPhysical : public Error {
public:
    using Error::Error;
};

struct PhysicalityReport {
    Vector4 eigenvalues = Vector4::Zero(); ///< descending
    double min_eigenvalue = 0.0;
    bool is_mueller = false;
    int rank = 0;
    /// spectral norm of H_M, the scale for tol
    double norm = 0.0;
    /// eigenvector of the most negative eigenvalue, the most violating
    /// (vectorized) Jones direction; meaningful also when is_mueller holds
    CVector4 min_eigenvector = CVector4::Zero();
};

namespace detail {

struct HermitianSpectrum {
    Vector4 values;   // descending
    CMatrix4 vectors; // column k belongs to values[k]
};

inline HermitianSpectrum spectrum(const CMatrix4& h)
{
    const Eigen::SelfAdjointEigenSolver<CMatrix4> eig(0.5 * (h + h.adjoint()));
    HermitianSpectrum out;
    out.values = eig.eigenvalues().reverse();
    out.vectors = eig.eigenvectors().rowwise().reverse();
    return out;
}

/// Fixes the global phase so the largest-modulus component is real positive.
inline CVector4 fix_phase(const CVector4& v)
{
    Eigen::Index idx = 0;
    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < 4; ++i)
        if (std::abs(v[i]) >= peak * (1.0 - 1e-9)) {
            idx = i;
            break;
        }
    if (std::abs(v[idx]) == 0.0) return v;
    return v * (std::conj(v[idx]) / std::abs(v[idx]));
}

} // namespace detail

inline PhysicalityReport physicality(const MuellerCandidate& m, double tol = kDefaultTol)
{
    const auto spec = detail::spectrum(m.h().h);
    PhysicalityReport r;
    r.eigenvalues = spec.values;
    r.min_eigenvalue = spec.values[3];
    r.norm = spec.values.cwiseAbs().maxCoeff();
    r.is_mueller = r.min_eigenvalue >= -tol * r.norm;
    r.rank = static_cast<int>((spec.values.array() > tol * r.norm).count());
    r.min_eigenvector = detail::fix_phase(spec.vectors.col(3));
    return r;
}

struct JonesTerm {
    double weight = 0.0;
    JonesMatrix jones; ///< unit Frobenius norm
};

struct JonesEnsemble {
    std::vector<JonesTerm> items;

    std::size_t size() const { return items.size(); }

    /// sum_k weight_k M(J_k)
    Matrix4 reconstruct() const;
};

/// Minimal convex-sum realization from the spectral decomposition of H_M.
/// Weights carry the eigenvalues; Jones matrices are the devectorized unit
/// eigenvectors. With repeated eigenvalues the ensemble is one choice among
/// infinitely many.
inline JonesEnsemble jones_ensemble(const MuellerCandidate& m, double tol = kDefaultTol)
{
    const auto spec = detail::spectrum(m.h().h);
    const double norm = spec.values.cwiseAbs().maxCoeff();
    if (spec.values[3] < -tol * norm)
        throw NotPhysical("jones_ensemble: H_M has a negative eigenvalue");
    JonesEnsemble out;
    for (int k = 0; k < 4; ++k) {
        if (!(spec.values[k] > tol * norm)) continue;
        out.items.push_back({spec.values[k], JonesMatrix{devectorize(detail::fix_phase(spec.vectors.col(k)))}});
    }
    return out;
}

/// Returns the Jones matrix of M when H_M is positive with rank one, i.e.
/// H_M = vec(J) vec(J)^dagger. The global phase of J is arbitrary.
inline std::optional<JonesMatrix> mueller_jones_test(const MuellerCandidate& m, double tol = kDefaultTol)
{
    const PhysicalityReport r = physicality(m, tol);
    if (!r.is_mueller || r.rank != 1) return std::nullopt;
    const auto spec = detail::spectrum(m.h().h);
    return JonesMatrix{std::sqrt(spec.values[0]) * devectorize(detail::fix_phase(spec.vectors.col(0)))};
}

inline Matrix4 JonesEnsemble::reconstruct() const
{
    Matrix4 acc = Matrix4::Zero();
    for (const auto& item : items) acc += item.weight * mueller_from_jones(item.jones).matrix();
    return acc;
}

} // namespace mueller
