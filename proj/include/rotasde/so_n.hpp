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

#pragma once

/// Dense linear algebra on SO(n) and so(n): basis, tangent projection,
/// block-Schur form of skew matrices and the matrix functions (sqrt, exp, log)
/// used by the integrators. Everything here is a pure function of its inputs.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rotasde/tolerances.hpp"

namespace rotasde {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Element of so(n). The stored matrix is exactly antisymmetric.
class SkewMatrix {
public:
    SkewMatrix() = default;
    /// Keeps the skew part (A - A^T)/2 of `a`.
    explicit SkewMatrix(const Matrix& a);

    static SkewMatrix zero(int n);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double norm() const { return m_.norm(); }

    SkewMatrix operator+(const SkewMatrix& o) const;
    SkewMatrix operator-(const SkewMatrix& o) const;
    SkewMatrix operator*(double s) const;

private:
    Matrix m_;
};

inline SkewMatrix operator*(double s, const SkewMatrix& z) { return z * s; }

/// Symmetric n x n matrix; the stored matrix is exactly symmetric.
class SymMatrix {
public:
    SymMatrix() = default;
    /// Keeps the symmetric part (A + A^T)/2 of `a`.
    explicit SymMatrix(const Matrix& a);

    static SymMatrix zero(int n);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

private:
    Matrix m_;
};

/// Element of SO(n). Construction checks ||R^T R - I||_F <= orth_tol and det(R) > 0.
class Rotation {
public:
    Rotation() = default;
    explicit Rotation(Matrix m, double orth_tol = kDefaultTolerances.orth_tol);

    static Rotation identity(int n);
    /// Skips validation; for outputs of maps that are orthogonal by construction.
    static Rotation trusted(Matrix m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    Rotation transpose() const { return trusted(m_.transpose()); }
    Rotation operator*(const Rotation& o) const { return trusted(m_ * o.m_); }

private:
    Matrix m_;
};

/// Real block form Z = P E_n(lambda_1, ..., lambda_l) P^T of a skew matrix.
///
/// Block k occupies columns (2k, 2k+1) of `p`; with odd n the last column spans
/// the null direction. Angles are non-negative and sorted descending; blocks
/// [0, nonzero_blocks) carry nonzero angles, the rest are exact zeros.
struct SkewSchur {
    Matrix p;
    std::vector<double> angles;
    std::size_t nonzero_blocks = 0;

    int dim() const { return static_cast<int>(p.rows()); }
    /// P E_n(angles) P^T.
    Matrix reassemble() const;
};

/// Square-root evaluation used by the normal correction.
struct SqrtMethod {
    enum class Kind { exact, taylor };
    Kind kind = Kind::exact;
    int order = 5;

    static SqrtMethod exact() { return {}; }
    static SqrtMethod taylor(int order) { return {Kind::taylor, order}; }

    /// "exact" or "taylor(k)"; parse() accepts the same strings and "taylorK".
    std::string name() const;
    static SqrtMethod parse(const std::string& text);

    bool operator==(const SqrtMethod&) const = default;
};

/// E_n(lambda_1, ..., lambda_l): 2x2 blocks [[0, l], [-l, 0]] on the diagonal, zero-padded.
Matrix block_skew(int n, const std::vector<double>& angles);

/// E_j = e_ab - e_ba for pairs a < b in lexicographic order; n(n-1)/2 elements.
std::vector<SkewMatrix> skew_basis(int n);

/// Index pair (a, b) of basis element j.
std::pair<int, int> basis_pair(int n, int j);

/// Skew matrix sum_j w_j E_j.
SkewMatrix skew_from_coordinates(int n, const double* w);

/// (1/2)(A - R A^T R). Result is R S with S skew; annihilates R times symmetric.
Matrix project_tangent(const Rotation& r, const Matrix& a);

SkewSchur skew_schur(const SkewMatrix& z, const Tolerances& tol = kDefaultTolerances);

/// True iff I - Z^T Z - margin I admits a Cholesky factorization,
/// i.e. 1 - max_i lambda_i^2 > margin.
bool is_contraction(const SkewMatrix& z, double margin);

/// C = sqrt(I - Z^T Z) - I. The exact method diagonalizes Z^T Z; taylor(k) truncates the
/// binomial series after k powers of Z^T Z. Throws NotAContractionError when
/// is_contraction(z, tol.pd_margin) fails. For the exact method I + Z + C is checked against
/// tol.orth_tol before returning.
SymMatrix correction(const SkewMatrix& z, SqrtMethod method = SqrtMethod::exact(),
                     const Tolerances& tol = kDefaultTolerances);

/// exp(A) by Pade approximation with scaling and squaring (degrees 3 to 13).
Matrix expm_pade(const Matrix& a);

Rotation expm_skew(const SkewMatrix& z);

/// Principal logarithm, block angles in (-pi, pi). Throws LogDomainError when an angle is
/// within tol.log_tol of pi.
SkewMatrix logm_rotation(const Rotation& r, const Tolerances& tol = kDefaultTolerances);

/// ||log(r1^T r2)||_F.
double geodesic_distance(const Rotation& r1, const Rotation& r2,
                         const Tolerances& tol = kDefaultTolerances);

/// ||M^T M - I||_F.
double orthogonality_defect(const Matrix& m);

/// Polar factor U V^T of m; throws NotARotationError when it has negative determinant.
Rotation closest_rotation(const Matrix& m);

namespace detail {

/// Correction without the contraction pre-check or the post-hoc orthogonality check.
Matrix correction_unchecked(const SkewMatrix& z, SqrtMethod method);

void require_square(const Matrix& m, const char* what);
void require_dimension(int n);

}  // namespace detail

}  // namespace rotasde
