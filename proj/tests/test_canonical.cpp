#include "test_support.hpp"

#include <mueller/canonical.hpp>
#include <mueller/choi.hpp>

#include <gtest/gtest.h>

using namespace mueller;
using namespace mueller::testing;

namespace {

Matrix4 lorentz(Rng& rng, double spread = 0.6) { return mueller_from_jones(JonesMatrix{rng.sl2c(spread)}).matrix(); }

/// Type-I parameters with well separated squares: d0 > d1 > d2 > |d3|.
Vector4 random_type1(Rng& rng)
{
    for (;;) {
        std::array<double, 3> v = {rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0)};
        std::sort(v.begin(), v.end(), std::greater<>());
        const double d3 = (rng.uniform() < 0 ? -1.0 : 1.0) * rng.uniform(0.05, v[2]);
        const Vector4 d(1.0, v[0] * 0.95, v[1] * 0.95, d3 * 0.95);
        const Vector4 sq = d.cwiseAbs2();
        if (sq[0] - sq[1] > 0.02 && sq[1] - sq[2] > 0.02 && sq[2] - sq[3] > 0.02) return d;
    }
}

/// Oracle: a matrix is diagonalizable iff prod over distinct eigenvalues of
/// (N - lambda I) vanishes (minimal polynomial has simple roots).
bool diagonalizable_by_minimal_polynomial(const Matrix4& n, const std::vector<double>& distinct)
{
    Matrix4 p = Matrix4::Identity();
    for (double l : distinct) p = p * (n - l * Matrix4::Identity());
    return p.cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, n.cwiseAbs().maxCoeff());
}

TEST(NMatrix, Examples)
{
    EXPECT_LT(max_abs(Matrix4(n_matrix(Matrix4::Identity()) - Matrix4::Identity())), 1e-15);
    const Vector4 d(3, -2, 1, 0.5);
    EXPECT_LT(max_abs(Matrix4(n_matrix(Matrix4(d.asDiagonal())) - Matrix4(d.cwiseAbs2().asDiagonal()))), 1e-15);
    Rng rng(41);
    for (int k = 0; k < 20; ++k)
        EXPECT_LT(max_abs(Matrix4(n_matrix(lorentz(rng)) - Matrix4::Identity())), 1e-12);
}

TEST(Classify, TypeIExamples)
{
    auto c = classify(Matrix4(Vector4(3, 2, 1, 0.5).asDiagonal()));
    EXPECT_EQ(c.family, Family::TypeI);
    ASSERT_TRUE(c.d.has_value());
    EXPECT_LT((*c.d - Vector4(3, 2, 1, 0.5)).norm(), 1e-12);
    ASSERT_TRUE(c.factors.has_value());

    c = classify(Matrix4(Vector4(1, 1, 1, -1).asDiagonal()));
    EXPECT_EQ(c.family, Family::TypeI);
    ASSERT_TRUE(c.d.has_value());
    EXPECT_LT((*c.d - Vector4(1, 1, 1, -1)).norm(), 1e-12);
    EXPECT_FALSE(c.factors.has_value()); // fully degenerate spectrum
}

TEST(Classify, MinorFamilies)
{
    auto c = classify(pin_map_canonical(1.0));
    EXPECT_EQ(c.family, Family::PinMap);
    ASSERT_TRUE(c.d.has_value());
    EXPECT_NEAR((*c.d)[0], 1.0, 1e-12);

    c = classify(polarizer_canonical(0.5));
    EXPECT_EQ(c.family, Family::Polarizer);
    ASSERT_TRUE(c.d.has_value());
    EXPECT_NEAR((*c.d)[0], 0.5, 1e-12);

    // depolarizer is Type I with d = (1, 0, 0, 0)
    c = classify(Matrix4(Vector4(1, 0, 0, 0).asDiagonal()));
    EXPECT_EQ(c.family, Family::TypeI);
}

TEST(Classify, TypeIIExample)
{
    const Vector4 d(2, 1, 1, 1);
    const Matrix4 m = type2_canonical(d);
    const Matrix4 n = n_matrix(m);

    // oracle: eigenvalues {d0 d1, d0 d1, d2^2, d3^2} = {2, 2, 1, 1}; two distinct
    // values but the minimal polynomial does not split into simple factors
    EXPECT_FALSE(diagonalizable_by_minimal_polynomial(n, {2.0, 1.0}));
    EXPECT_TRUE(diagonalizable_by_minimal_polynomial(n_matrix(Matrix4(Vector4(2, 1, 1, 1).asDiagonal())),
                                                     {4.0, 1.0}));

    const auto c = classify(m);
    EXPECT_EQ(c.family, Family::TypeII);
    ASSERT_TRUE(c.d.has_value());
    EXPECT_LT((*c.d - d).norm(), 1e-14);
}

TEST(Classify, NotPreMueller)
{
    EXPECT_EQ(classify(Matrix4(Vector4(1, 1.5, 0, 0).asDiagonal())).family, Family::NotPreMueller);
    EXPECT_EQ(classify(Matrix4(-Matrix4::Identity())).family, Family::NotPreMueller);
}

TEST(Classify, FamilyIsDoubleCosetInvariant)
{
    Rng rng(42);
    for (int k = 0; k < 100; ++k) {
        const Vector4 d = random_type1(rng);
        const auto c = classify(Matrix4(lorentz(rng) * Matrix4(d.asDiagonal()) * lorentz(rng)));
        EXPECT_EQ(c.family, Family::TypeI) << c.diagnostics;
        ASSERT_TRUE(c.d.has_value());
        EXPECT_LT((*c.d - d).norm(), 1e-8);
    }
    for (int k = 0; k < 100; ++k) {
        // d0 > d1 > 0, sqrt(d0 d1) >= d2 >= |d3| with d0 d1 away from d2^2, d3^2
        const double d0 = 1.0, d1 = rng.uniform(0.3, 0.9);
        const double d2 = rng.uniform(0.1, 0.8) * std::sqrt(d0 * d1);
        const double d3 = rng.uniform(-0.8, 0.8) * d2;
        const Matrix4 m = lorentz(rng, 0.4) * type2_canonical(Vector4(d0, d1, d2, d3)) * lorentz(rng, 0.4);
        EXPECT_EQ(classify(m).family, Family::TypeII) << classify(m).diagnostics;
    }
    for (int k = 0; k < 50; ++k) {
        const double d0 = rng.uniform(0.2, 2.0);
        EXPECT_EQ(classify(Matrix4(lorentz(rng) * polarizer_canonical(d0) * lorentz(rng))).family, Family::Polarizer);
        EXPECT_EQ(classify(Matrix4(lorentz(rng) * pin_map_canonical(d0) * lorentz(rng))).family, Family::PinMap);
    }
}

TEST(Type1Factor, DiagonalGivesIdentityFactors)
{
    const auto f = type1_factor(Matrix4(Vector4(3, 2, 1, 0.5).asDiagonal()));
    EXPECT_LT((f.d - Vector4(3, 2, 1, 0.5)).norm(), 1e-12);
    EXPECT_LT(max_abs(Matrix4(f.left - Matrix4::Identity())), 1e-12);
    EXPECT_LT(max_abs(Matrix4(f.right - Matrix4::Identity())), 1e-12);
}

TEST(Type1Factor, RotationTimesDiagonalTimesBoost)
{
    const Matrix4 rz = mueller_from_jones(JonesMatrix{rotator(0.37)}).matrix();
    const Matrix4 bx = mueller_from_jones(JonesMatrix{boost_s1(0.8)}).matrix();
    const Matrix4 m = rz * Matrix4(Vector4(3, 2, 1, 0.5).asDiagonal()) * bx;
    const auto f = type1_factor(m);
    EXPECT_LT((f.d - Vector4(3, 2, 1, 0.5)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(max_abs(Matrix4(f.left * Matrix4(f.d.asDiagonal()) * f.right - m)), 1e-9 * max_abs(m));
    EXPECT_TRUE(is_proper_orthochronous(f.left, 1e-9));
    EXPECT_TRUE(is_proper_orthochronous(f.right, 1e-9));
}

TEST(Type1Factor, Errors)
{
    EXPECT_THROW(type1_factor(Matrix4::Identity()), DegenerateSpectrum);
    EXPECT_THROW(type1_factor(type2_canonical(Vector4(2, 1, 0.5, 0.25))), Error);
}

TEST(Type1Factor, NegativeDeterminantAndSingular)
{
    Rng rng(43);
    const Vector4 d(1.0, 0.7, 0.4, -0.2);
    const Matrix4 m = lorentz(rng) * Matrix4(d.asDiagonal()) * lorentz(rng);
    const auto f = type1_factor(m);
    EXPECT_LT((f.d - d).cwiseAbs().maxCoeff(), 1e-9);

    const Vector4 ds(1.0, 0.7, 0.4, 0.0);
    const Matrix4 ms = lorentz(rng) * Matrix4(ds.asDiagonal()) * lorentz(rng);
    const auto fs = type1_factor(ms);
    EXPECT_LT((fs.d - ds).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT(max_abs(Matrix4(fs.left * Matrix4(fs.d.asDiagonal()) * fs.right - ms)), 1e-6 * max_abs(ms));
    EXPECT_TRUE(is_proper_orthochronous(fs.left, 1e-6));
}

TEST(Type1Factor, ReconstructionRoundTrip)
{
    Rng rng(44);
    for (int k = 0; k < 200; ++k) {
        const Vector4 d = random_type1(rng) * std::exp(rng.uniform(-1, 1));
        const Matrix4 m = lorentz(rng) * Matrix4(d.asDiagonal()) * lorentz(rng);
        const auto f = type1_factor(m);
        EXPECT_LT((f.d - d).cwiseAbs().maxCoeff(), 1e-8 * d[0]);
        EXPECT_LT((f.left * Matrix4(f.d.asDiagonal()) * f.right - m).norm(), 1e-8 * m.norm());
    }
}

TEST(Type1Constraints, Examples)
{
    EXPECT_TRUE(type1_constraints(Vector4(1, 1, 1, 1)));
    EXPECT_FALSE(type1_constraints(Vector4(1, 1, 1, -1)));
    const auto c = type1_constraint_check(Vector4(1, 1, 1, -1));
    EXPECT_EQ(c.position, 3);
    EXPECT_NEAR(c.violation, 2.0, 1e-15);

    const auto vz = type1_constraint_check(Vector4(0.9735, 0.9112, 0.4640, -0.3838));
    EXPECT_FALSE(vz.satisfied);
    EXPECT_EQ(vz.position, 3);
    EXPECT_EQ(vz.formula, "d1+d2-d3 <= d0");
    EXPECT_NEAR(vz.violation + 0.9735, 1.7590, 1e-12);
}

TEST(Type1Constraints, EquivalentToPositiveH)
{
    // 11^4 grid; the 21^4 version lives in the acceptance suite
    for (int a = 0; a <= 10; ++a)
        for (int b = 0; b <= 10; ++b)
            for (int c = 0; c <= 10; ++c)
                for (int e = 0; e <= 10; ++e) {
                    const Vector4 d(-1.5 + 0.3 * a, -1.5 + 0.3 * b, -1.5 + 0.3 * c, -1.5 + 0.3 * e);
                    const bool psd = physicality(Matrix4(d.asDiagonal())).min_eigenvalue >= -1e-10;
                    ASSERT_EQ(type1_constraints(d), psd) << d.transpose();
                }
}

TEST(Type2Constraints, Examples)
{
    EXPECT_TRUE(type2_constraints(Vector4(2, 1, 1, 1)));
    EXPECT_FALSE(type2_constraints(Vector4(2, 1, 1.5, 1.5)));
    EXPECT_FALSE(type2_constraints(Vector4(2, 1, 1, 0.5)));
}

TEST(Type2Constraints, AgreeWithPositiveH)
{
    Rng rng(45);
    for (int k = 0; k < 2000; ++k) {
        const double d0 = rng.uniform(0.5, 2.0);
        const double d1 = rng.uniform(0.05, 0.95) * d0;
        const double d2 = rng.uniform(0.0, 1.3) * std::sqrt(d0 * d1);
        const double d3 = (k % 3 == 0) ? d2 : rng.uniform(-1.0, 0.99) * d2;
        const Vector4 d(d0, d1, d2, d3);
        const auto r = physicality(type2_canonical(d));
        const bool psd = r.min_eigenvalue >= -1e-9 * r.norm;
        EXPECT_EQ(type2_constraints(d), psd) << d.transpose();
    }
}

TEST(HEigsDiagonal, ExamplesAndNumericSpectrum)
{
    EXPECT_LT((h_eigs_diagonal(Vector4(1, 1, 1, 1)) - Vector4(2, 0, 0, 0)).norm(), 1e-15);
    EXPECT_LT((h_eigs_diagonal(Vector4(1, 0, 0, 0)) - Vector4::Constant(0.5)).norm(), 1e-15);
    EXPECT_LT((h_eigs_diagonal(Vector4(1, 1, 1, -1)) - Vector4(1, 1, 1, -1)).norm(), 1e-15);

    Rng rng(46);
    for (int k = 0; k < 1000; ++k) {
        const Vector4 d(rng.normal(), rng.normal(), rng.normal(), rng.normal());
        const Vector4 numeric = physicality(Matrix4(d.asDiagonal())).eigenvalues;
        EXPECT_LT((h_eigs_diagonal(d) - numeric).cwiseAbs().maxCoeff(), 1e-12);
    }
}

} // namespace
