#pragma once

// Two worked studies: the volume of physical matrices inside the cube of
// pre-Mueller diagonal matrices diag(1, d1, d2, d3), and the canonical
// parameters of van Zyl's measured Mueller matrix.

#include "canonical.hpp"
#include "conetest.hpp"
#include "core.hpp"
#include "io.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <random>
#include <string>

namespace mueller {

/// Uniform doubles from std::mt19937_64 (seeded directly with the 64-bit
/// seed). Each draw takes the top 53 bits of one engine output: u = (x >> 11) * 2^-53,
/// so sequences are identical on every platform.
class UniformSampler {
public:
    explicit UniformSampler(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double in(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::mt19937_64 engine_;
};

struct TetraScanResult {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double fraction_mueller = 0.0;
    double fraction_pre_mueller = 0.0;
};

/// Draws (d1, d2, d3) uniformly on [-1, 1]^3 and tallies how many
/// diag(1, d1, d2, d3) are Mueller (the four linear inequalities) and how
/// many map the Stokes cone into itself (checked by certify_cone).
inline TetraScanResult tetra_scan(std::uint64_t samples, std::uint64_t seed, double tol = kDefaultTol)
{
    if (samples < 1) throw Error("tetra_scan: samples must be at least 1");
    UniformSampler rng(seed);
    std::uint64_t mueller = 0, pre = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double d1 = rng.in(-1.0, 1.0);
        const double d2 = rng.in(-1.0, 1.0);
        const double d3 = rng.in(-1.0, 1.0);
        const Vector4 d(1.0, d1, d2, d3);
        if (type1_constraints(d, tol)) ++mueller;
        if (certify_cone(MuellerCandidate(Matrix4(d.asDiagonal())), tol).is_pre_mueller) ++pre;
    }
    const auto n = static_cast<double>(samples);
    return {samples, seed, static_cast<double>(mueller) / n, static_cast<double>(pre) / n};
}

inline nlohmann::json to_json(const TetraScanResult& r)
{
    return {{"samples", r.samples},
            {"seed", r.seed},
            {"fraction_mueller", sig12(r.fraction_mueller)},
            {"fraction_pre_mueller", sig12(r.fraction_pre_mueller)}};
}

/// Published Type-I canonical parameters of van Zyl's symmetric Mueller matrix.
inline const Vector4& vanzyl_parameters()
{
    static const Vector4 d(0.9735, 0.9112, 0.4640, -0.3838);
    return d;
}

/// Eigenvalues of H_M quoted for the full (unpublished) van Zyl matrix.
inline constexpr std::array<double, 4> kVanZylQuotedEigenvalues = {1.0906, 0.8393, 0.4526, -0.3825};

struct VanZylStudy {
    Vector4 d;
    ConstraintCheck constraints;
    Vector4 diagonal_spectrum;
    int negative_eigenvalues = 0;
    std::string note;
};

inline VanZylStudy vanzyl_case(double tol = kDefaultTol)
{
    VanZylStudy s;
    s.d = vanzyl_parameters();
    s.constraints = type1_constraint_check(s.d, tol);
    s.diagonal_spectrum = h_eigs_diagonal(s.d);
    s.negative_eigenvalues = static_cast<int>((s.diagonal_spectrum.array() < 0.0).count());
    s.note =
        "The spectrum above is that of H for the diagonal canonical form diag(d). The quoted eigenvalues "
        "1.0906, 0.8393, 0.4526, -0.3825 belong to the full measured matrix, which is not available here; "
        "H eigenvalues are not invariant under the Lorentz double coset, so they cannot be recovered from d. "
        "Only the sign pattern (one negative eigenvalue) carries over.";
    return s;
}

inline nlohmann::json to_json(const VanZylStudy& s)
{
    auto arr = [](const Vector4& v) { return nlohmann::json{sig12(v[0]), sig12(v[1]), sig12(v[2]), sig12(v[3])}; };
    return {{"d", arr(s.d)},
            {"type1_constraints", s.constraints.satisfied},
            {"binding_constraint",
             {{"position", s.constraints.position},
              {"formula", s.constraints.formula},
              {"violation", sig12(s.constraints.violation)}}},
            {"diagonal_form_h_eigenvalues", arr(s.diagonal_spectrum)},
            {"negative_eigenvalue_count", s.negative_eigenvalues},
            {"quoted_full_matrix_h_eigenvalues", kVanZylQuotedEigenvalues},
            {"note", s.note}};
}

} // namespace mueller
