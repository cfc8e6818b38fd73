/*
   Copyright 2026 The rotasde Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rotasde/errors.hpp"
#include "rotasde/so_n.hpp"
#include "test_util.hpp"

namespace rotasde {
namespace {

using testing::random_contraction;
using testing::random_orthogonal;
using testing::random_skew;

Matrix rot2(double theta)
{
    Matrix r(2, 2);
    r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return r;
}

Matrix ident(int n) { return Matrix::Identity(n, n); }

// Binomial coefficients of sqrt(1 - x) = sum_k b_k x^k, by recurrence.
std::vector<double> sqrt_series(int order)
{
    std::vector<double> b{1.0};
    for (int k = 1; k <= order; ++k) {
        b.push_back(b.back() * (0.5 - (k - 1)) / k * -1.0);
    }
    return b;
}

TEST(SkewMatrixTest, ConstructorKeepsSkewPart)
{
    std::mt19937_64 rng(1);
    const Matrix a = testing::random_gaussian(5, rng);
    const SkewMatrix z(a);
    EXPECT_EQ((z.matrix() + z.matrix().transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT((z.matrix() - 0.5 * (a - a.transpose())).norm(), 1e-15);
}

TEST(SymMatrixTest, ConstructorKeepsSymmetricPart)
{
    std::mt19937_64 rng(2);
    const SymMatrix s(testing::random_gaussian(4, rng));
    EXPECT_EQ((s.matrix() - s.matrix().transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(RotationTest, ValidatesOrthogonalityAndOrientation)
{
    EXPECT_NO_THROW(Rotation(ident(3)));
    EXPECT_NO_THROW(Rotation(rot2(0.3)));
    EXPECT_THROW(Rotation(Matrix(2.0 * ident(3))), NotARotationError);

    Matrix reflection = ident(3);
    reflection(0, 0) = -1.0;
    EXPECT_THROW(Rotation{reflection}, NotARotationError);

    Matrix nearly = ident(3);
    nearly(0, 1) = 1e-11;
    EXPECT_NO_THROW(Rotation{nearly});
    nearly(0, 1) = 1e-6;
    EXPECT_THROW(Rotation{nearly}, NotARotationError);
    EXPECT_NO_THROW(Rotation(nearly, 1e-5));
}

TEST(SkewBasisTest, TwoByTwo)
{
    const auto basis = skew_basis(2);
    ASSERT_EQ(basis.size(), 1u);
    Matrix expected(2, 2);
    expected << 0, 1, -1, 0;
    EXPECT_EQ(basis[0].matrix(), expected);
}

TEST(SkewBasisTest, LexicographicPairsWithTwoUnitEntries)
{
    const auto basis = skew_basis(3);
    ASSERT_EQ(basis.size(), 3u);
    const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const Matrix& e = basis[j].matrix();
        EXPECT_EQ((e.array() != 0.0).count(), 2);
        EXPECT_EQ(e(pairs[j].first, pairs[j].second), 1.0);
        EXPECT_EQ(e(pairs[j].second, pairs[j].first), -1.0);
        EXPECT_DOUBLE_EQ(basis[j].norm(), std::sqrt(2.0));
        EXPECT_EQ(basis_pair(3, static_cast<int>(j)), pairs[j]);
    }
}

TEST(SkewBasisTest, CountIsNChooseTwo)
{
    EXPECT_EQ(skew_basis(6).size(), 15u);
    EXPECT_EQ(skew_basis(50).size(), 1225u);
    EXPECT_THROW(skew_basis(1), InvalidArgument);
    EXPECT_THROW(skew_basis(0), InvalidArgument);
}

TEST(SkewBasisTest, CoordinatesCombineBasis)
{
    const int n = 5;
    std::vector<double> w(10);
    for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] = 0.25 * static_cast<double>(j) - 1.0;
    }
    Matrix expected = Matrix::Zero(n, n);
    const auto basis = skew_basis(n);
    for (std::size_t j = 0; j < w.size(); ++j) {
        expected += w[j] * basis[j].matrix();
    }
    EXPECT_EQ(skew_from_coordinates(n, w.data()).matrix(), expected);
}

TEST(ProjectTangentTest, IdentityGivesSkewPart)
{
    std::mt19937_64 rng(3);
    const Matrix a = testing::random_gaussian(4, rng);
    EXPECT_LT((project_tangent(Rotation::identity(4), a) - 0.5 * (a - a.transpose())).norm(),
              1e-15);
}

TEST(ProjectTangentTest, AnnihilatesNormalAndFixesTangent)
{
    std::mt19937_64 rng(4);
    for (int n = 2; n <= 7; ++n) {
        const Rotation r = testing::random_rotation(n, rng, 2.0);
        const Matrix g = testing::random_gaussian(n, rng);
        const Matrix sym = g + g.transpose();
        const Matrix skew = g - g.transpose();
        EXPECT_LT(project_tangent(r, r.matrix() * sym).norm(), 1e-12) << "n = " << n;
        const Matrix tangent = r.matrix() * skew;
        EXPECT_LT((project_tangent(r, tangent) - tangent).norm(), 1e-12) << "n = " << n;

        const Matrix p = project_tangent(r, g);
        EXPECT_LT((project_tangent(r, p) - p).norm(), 1e-12) << "idempotence, n = " << n;
        const Matrix s = r.matrix().transpose() * p;
        EXPECT_LT((s + s.transpose()).norm(), 1e-12) << "R^T P skew, n = " << n;
    }
}

TEST(ProjectTangentTest, ShapeMismatchThrows)
{
    EXPECT_THROW(project_tangent(Rotation::identity(3), Matrix::Zero(3, 4)), InvalidArgument);
    EXPECT_THROW(project_tangent(Rotation::identity(3), Matrix::Zero(2, 2)), InvalidArgument);
}

TEST(SkewSchurTest, ZeroMatrix)
{
    const SkewSchur s = skew_schur(SkewMatrix::zero(5));
    ASSERT_EQ(s.angles.size(), 2u);
    EXPECT_EQ(s.angles[0], 0.0);
    EXPECT_EQ(s.angles[1], 0.0);
    EXPECT_EQ(s.nonzero_blocks, 0u);
    EXPECT_LT((s.p * s.p.transpose() - ident(5)).norm(), 1e-14);
}

TEST(SkewSchurTest, SingleBlock)
{
    Matrix z(2, 2);
    z << 0, 0.6, -0.6, 0;
    const SkewSchur s = skew_schur(SkewMatrix(z));
    ASSERT_EQ(s.angles.size(), 1u);
    EXPECT_NEAR(std::abs(s.angles[0]), 0.6, 1e-15);
    EXPECT_LT((s.reassemble() - z).norm(), 1e-15);
}

TEST(SkewSchurTest, RandomFiveByFiveMatchesComplexEigenvalues)
{
    std::mt19937_64 rng(5);
    const SkewMatrix z = random_skew(5, rng);
    const SkewSchur s = skew_schur(z);
    EXPECT_LT((s.reassemble() - z.matrix()).norm(), 1e-10);
    EXPECT_LT((s.p * s.p.transpose() - ident(5)).norm(), 1e-10);

    const std::vector<double> oracle = testing::abs_imag_eigenvalues(z.matrix());
    ASSERT_EQ(s.angles.size(), 2u);
    EXPECT_NEAR(s.angles[0], oracle[0], 1e-12);
    EXPECT_NEAR(s.angles[1], oracle[2], 1e-12);
    EXPECT_NEAR(oracle[4], 0.0, 1e-12);
}

TEST(SkewSchurTest, ReconstructionProperty)
{
    std::mt19937_64 rng(6);
    for (int n = 2; n <= 9; ++n) {
        for (int trial = 0; trial < 100; ++trial) {
            SkewMatrix z;
            switch (trial % 4) {
            case 0:
                z = random_skew(n, rng, std::pow(10.0, trial % 7 - 3));
                break;
            case 1: {
                // Repeated angles.
                std::vector<double> angles(static_cast<std::size_t>(n / 2), 0.7);
                z = SkewMatrix(testing::skew_with_angles(n, angles, random_orthogonal(n, rng)));
                break;
            }
            case 2: {
                // Rank deficient: half the angles are zero.
                std::vector<double> angles(static_cast<std::size_t>(n / 2), 0.0);
                for (std::size_t k = 0; k < angles.size(); k += 2) {
                    angles[k] = 1.0 + static_cast<double>(k);
                }
                z = SkewMatrix(testing::skew_with_angles(n, angles, random_orthogonal(n, rng)));
                break;
            }
            default: {
                // Nearly coincident angles.
                std::vector<double> angles;
                for (int k = 0; k < n / 2; ++k) {
                    angles.push_back(0.5 + 1e-9 * k);
                }
                z = SkewMatrix(testing::skew_with_angles(n, angles, random_orthogonal(n, rng)));
                break;
            }
            }
            const SkewSchur s = skew_schur(z);
            ASSERT_EQ(s.angles.size(), static_cast<std::size_t>(n / 2));
            EXPECT_LE((s.reassemble() - z.matrix()).norm(), 1e-10 * (1.0 + z.norm()))
                << "n = " << n << " trial " << trial;
            EXPECT_LE((s.p * s.p.transpose() - ident(n)).norm(), 1e-10);
            for (std::size_t k = 0; k + 1 < s.angles.size(); ++k) {
                EXPECT_GE(std::abs(s.angles[k]), std::abs(s.angles[k + 1]));
            }
        }
    }
}

TEST(CorrectionTest, ZeroGivesZero)
{
    EXPECT_EQ(correction(SkewMatrix::zero(4)).matrix(), Matrix::Zero(4, 4));
    EXPECT_EQ(correction(SkewMatrix::zero(4), SqrtMethod::taylor(5)).matrix(), Matrix::Zero(4, 4));
}

TEST(CorrectionTest, TwoByTwoBlock)
{
    Matrix z(2, 2);
    z << 0, 0.6, -0.6, 0;
    // sqrt(1 - 0.36) - 1 = -0.2.
    EXPECT_LT((correction(SkewMatrix(z)).matrix() + 0.2 * ident(2)).norm(), 1e-15);
}

TEST(CorrectionTest, MatchesSymmetricEigendecompositionOracle)
{
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 8; ++n) {
        for (double radius : {1e-4, 0.1, 0.5, 0.9, 0.999}) {
            const SkewMatrix z = random_contraction(n, rng, radius);
            const Eigen::MatrixXd m = ident(n) - z.matrix().transpose() * z.matrix();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
            const Eigen::MatrixXd root = es.eigenvectors() *
                                         es.eigenvalues().cwiseSqrt().asDiagonal() *
                                         es.eigenvectors().transpose();
            const Matrix oracle = root - Eigen::MatrixXd::Identity(n, n);
            const SymMatrix c = correction(z);
            EXPECT_LT((c.matrix() - oracle).norm(), 1e-12) << "n = " << n << " radius " << radius;
        }
    }
}

TEST(CorrectionTest, QuarticRemainderExample)
{
    Matrix z(2, 2);
    z << 0, 0.1, -0.1, 0;
    const SkewMatrix sz(z);
    ASSERT_NEAR(sz.norm(), 0.1 * std::sqrt(2.0), 1e-16);
    const Matrix c = correction(sz).matrix();
    const double lhs = (c - 0.5 * z * z).norm();
    EXPECT_LE(lhs, 0.5 * std::pow(sz.norm(), 4));
    EXPECT_LE(lhs, 2e-4);
}

TEST(CorrectionTest, StepLandsOnRotationsProperty)
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> radius(0.0, 0.999);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 7;
        const SkewMatrix z = random_contraction(n, rng, radius(rng));
        const Matrix step = ident(n) + z.matrix() + correction(z).matrix();
        EXPECT_NO_THROW(Rotation(step, 1e-10)) << "n = " << n << " trial " << trial;
    }
}

TEST(CorrectionTest, QuarticRemainderProperty)
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> radius(0.0, 0.999);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 7;
        const SkewMatrix z = random_contraction(n, rng, radius(rng));
        const Matrix c = correction(z).matrix();
        const double lhs = (c - 0.5 * z.matrix() * z.matrix()).norm();
        if (lhs > 0.5 * std::pow(z.norm(), 4)) {
            ++violations;
        }
    }
    EXPECT_EQ(violations, 0);
}

TEST(CorrectionTest, ArcsinAnglesReproduceExponential)
{
    // Independent of skew_schur: build Z = P E(lambda) P^T directly.
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> angle(0.0, 0.999);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 7;
        const Matrix p = random_orthogonal(n, rng);
        std::vector<double> lambda(static_cast<std::size_t>(n / 2));
        std::vector<double> theta(lambda.size());
        for (std::size_t k = 0; k < lambda.size(); ++k) {
            lambda[k] = angle(rng);
            theta[k] = std::asin(lambda[k]);
        }
        const SkewMatrix z(testing::skew_with_angles(n, lambda, p));
        const Matrix z_tilde = testing::skew_with_angles(n, theta, p);
        const Matrix lhs = testing::expm_reference(z_tilde);
        const Matrix rhs = ident(n) + z.matrix() + correction(z).matrix();
        EXPECT_LT((lhs - rhs).norm(), 1e-9) << "n = " << n;
    }
}

TEST(CorrectionTest, NotAContraction)
{
    Matrix z(2, 2);
    z << 0, 1.0, -1.0, 0;
    EXPECT_THROW(correction(SkewMatrix(z)), NotAContractionError);
    z << 0, 1.5, -1.5, 0;
    EXPECT_THROW(correction(SkewMatrix(z), SqrtMethod::taylor(5)), NotAContractionError);
}

TEST(CorrectionTest, TaylorMatchesBinomialSeriesOnBlocks)
{
    const double lambda = 0.4;
    Matrix z(2, 2);
    z << 0, lambda, -lambda, 0;
    for (int order = 1; order <= 8; ++order) {
        const auto b = sqrt_series(order);
        double expected = 0.0;
        for (int k = 1; k <= order; ++k) {
            expected += b[static_cast<std::size_t>(k)] * std::pow(lambda * lambda, k);
        }
        const Matrix c = correction(SkewMatrix(z), SqrtMethod::taylor(order)).matrix();
        EXPECT_NEAR(c(0, 0), expected, 1e-16) << "order " << order;
        EXPECT_NEAR(c(1, 1), expected, 1e-16) << "order " << order;
        EXPECT_EQ(c(0, 1), 0.0);
    }
}

TEST(CorrectionTest, TaylorFiveRemainderBound)
{
    // Remainder sum_{k>5} |b_k| x^k <= |b_6| x^6 / (1 - x) per eigenvalue x <= ||Z||_2^2 <= 1/4,
    // and the Frobenius norm adds at most a factor sqrt(n).
    const double b6 = std::abs(sqrt_series(6)[6]);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> radius(0.05, 0.5);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + trial % 7;
        const SkewMatrix z = random_contraction(n, rng, radius(rng));
        const double r2 = testing::spectral_radius(z.matrix());
        const double bound = std::sqrt(n) * b6 / 0.75 * std::pow(r2, 12) + 1e-15;
        const Matrix diff =
            correction(z, SqrtMethod::taylor(5)).matrix() - correction(z).matrix();
        EXPECT_LE(diff.norm(), bound) << "n = " << n << " radius " << r2;
    }
}

TEST(CorrectionTest, OutputIsSymmetric)
{
    std::mt19937_64 rng(12);
    const SkewMatrix z = random_contraction(6, rng, 0.8);
    for (const SqrtMethod m : {SqrtMethod::exact(), SqrtMethod::taylor(3)}) {
        const Matrix c = correction(z, m).matrix();
        EXPECT_EQ((c - c.transpose()).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(IsContractionTest, Examples)
{
    EXPECT_TRUE(is_contraction(SkewMatrix::zero(3), 0.0));
    Matrix z(2, 2);
    z << 0, 0.99, -0.99, 0;
    EXPECT_TRUE(is_contraction(SkewMatrix(z), 0.0));
    // 1 - 0.99^2 = 0.0199 sits below a margin of 0.02.
    EXPECT_FALSE(is_contraction(SkewMatrix(z), 0.02));
    z << 0, 1.0, -1.0, 0;
    EXPECT_FALSE(is_contraction(SkewMatrix(z), 0.0));
}

TEST(IsContractionTest, AgreesWithSpectralRadius)
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 7;
        const SkewMatrix z = random_skew(n, rng, 0.4);
        const double r = testing::spectral_radius(z.matrix());
        if (std::abs(1.0 - r * r - 1e-8) < 1e-10) {
            continue;
        }
        EXPECT_EQ(is_contraction(z, 1e-8), 1.0 - r * r > 1e-8) << "radius " << r;
    }
}

TEST(ExpmTest, ZeroAndClosedForm)
{
    EXPECT_EQ(expm_skew(SkewMatrix::zero(4)).matrix(), ident(4));
    for (double theta : {0.0, 0.3, -1.2, 3.0, 10.0}) {
        Matrix z(2, 2);
        z << 0, theta, -theta, 0;
        EXPECT_LT((expm_skew(SkewMatrix(z)).matrix() - rot2(theta)).norm(), 1e-13)
            << "theta " << theta;
    }
}

TEST(ExpmTest, MatchesReferenceAcrossPadeDegrees)
{
    std::mt19937_64 rng(14);
    for (double scale : {1e-6, 1e-3, 0.05, 0.3, 1.0, 2.5, 6.0, 40.0}) {
        for (int n : {2, 3, 5, 8}) {
            const Matrix a = scale * testing::random_gaussian(n, rng) / std::sqrt(n);
            const Matrix ref = testing::expm_reference(a);
            EXPECT_LT((expm_pade(a) - ref).norm(), 1e-12 * ref.norm())
                << "scale " << scale << " n " << n;
        }
    }
}

TEST(ExpmTest, SkewInputGivesRotation)
{
    std::mt19937_64 rng(15);
    for (int n = 2; n <= 8; ++n) {
        const SkewMatrix z = random_skew(n, rng, 2.0);
        EXPECT_LT(orthogonality_defect(expm_skew(z).matrix()), 1e-12);
        EXPECT_GT(expm_skew(z).matrix().determinant(), 0.0);
    }
}

TEST(LogmTest, IdentityAndPlanarRotation)
{
    EXPECT_LT(logm_rotation(Rotation::identity(4)).norm(), 1e-15);
    const double t = std::numbers::pi / 3.0;
    Matrix expected(2, 2);
    expected << 0, t, -t, 0;
    EXPECT_LT((logm_rotation(Rotation(rot2(t))).matrix() - expected).norm(), 1e-14);
}

TEST(LogmTest, RoundTrips)
{
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = trial % 2 == 0 ? 4 : 5;
        const SkewMatrix z0 = random_skew(n, rng);
        const double target = n == 4 ? 3.1 : 3.0;
        const SkewMatrix z = z0 * (target / testing::spectral_radius(z0.matrix()));
        const Rotation r = expm_skew(z);
        const SkewMatrix back = logm_rotation(r);
        EXPECT_LT((back.matrix() - z.matrix()).norm(), 1e-8) << "n = " << n;
        EXPECT_LT((expm_skew(back).matrix() - r.matrix()).norm(), 1e-8);
    }
}

TEST(LogmTest, AngleNearPiThrows)
{
    EXPECT_THROW(logm_rotation(Rotation(rot2(std::numbers::pi - 1e-8))), LogDomainError);
    EXPECT_THROW(logm_rotation(Rotation(rot2(std::numbers::pi))), LogDomainError);
    EXPECT_NO_THROW(logm_rotation(Rotation(rot2(std::numbers::pi - 1e-4))));
}

TEST(GeodesicDistanceTest, Examples)
{
    std::mt19937_64 rng(17);
    const Rotation r = testing::random_rotation(4, rng, 1.0);
    EXPECT_LT(geodesic_distance(r, r), 1e-14);
    for (double theta : {0.2, -0.7, 2.5}) {
        EXPECT_NEAR(geodesic_distance(Rotation::identity(2), Rotation(rot2(theta))),
                    std::sqrt(2.0) * std::abs(theta), 1e-13);
    }
}

TEST(GeodesicDistanceTest, SymmetricAndTriangleInequality)
{
    std::mt19937_64 rng(18);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 5;
        const Rotation a = testing::random_rotation(n, rng, 0.5);
        const Rotation b = testing::random_rotation(n, rng, 0.5);
        const Rotation c = testing::random_rotation(n, rng, 0.5);
        const double ab = geodesic_distance(a, b);
        EXPECT_NEAR(ab, geodesic_distance(b, a), 1e-12);
        EXPECT_LE(geodesic_distance(a, c), ab + geodesic_distance(b, c) + 1e-12);
    }
}

TEST(OrthogonalityDefectTest, Examples)
{
    EXPECT_EQ(orthogonality_defect(ident(3)), 0.0);
    EXPECT_NEAR(orthogonality_defect(2.0 * ident(3)), 3.0 * std::sqrt(3.0), 1e-15);
}

TEST(ClosestRotationTest, RecoversPerturbedRotation)
{
    std::mt19937_64 rng(19);
    const Rotation r = testing::random_rotation(5, rng, 1.5);
    const Matrix noisy = r.matrix() + 1e-7 * testing::random_gaussian(5, rng);
    const Rotation q = closest_rotation(noisy);
    EXPECT_LT(orthogonality_defect(q.matrix()), 1e-13);
    EXPECT_LT((q.matrix() - r.matrix()).norm(), 1e-6);

    Matrix reflection = ident(3);
    reflection(2, 2) = -1.0;
    EXPECT_THROW(closest_rotation(reflection), NotARotationError);
}

TEST(SqrtMethodTest, ParseAndName)
{
    EXPECT_EQ(SqrtMethod::parse("exact"), SqrtMethod::exact());
    EXPECT_EQ(SqrtMethod::parse("taylor(5)"), SqrtMethod::taylor(5));
    EXPECT_EQ(SqrtMethod::parse("taylor3"), SqrtMethod::taylor(3));
    EXPECT_EQ(SqrtMethod::taylor(7).name(), "taylor(7)");
    EXPECT_EQ(SqrtMethod::parse(SqrtMethod::taylor(12).name()), SqrtMethod::taylor(12));
    for (const char* bad : {"", "Exact", "taylor", "taylor()", "taylor(0)", "taylor(x)",
                            "taylor(99999999999)", "pade"}) {
        EXPECT_THROW(SqrtMethod::parse(bad), InvalidArgument) << bad;
    }
}

}  // namespace
}  // namespace rotasde
