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
#include <sstream>

#include "rotasde/errors.hpp"
#include "rotasde/so_n.hpp"

namespace rotasde {

namespace detail {

void require_square(const Matrix& m, const char* what)
{
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw InvalidArgument(os.str());
    }
}

void require_dimension(int n)
{
    if (n < 2) {
        throw InvalidArgument("invalid dimension n = " + std::to_string(n) + " (need n >= 2)");
    }
}

}  // namespace detail

SkewMatrix::SkewMatrix(const Matrix& a)
{
    detail::require_square(a, "SkewMatrix");
    m_ = 0.5 * (a - a.transpose());
}

SkewMatrix SkewMatrix::zero(int n)
{
    SkewMatrix z;
    z.m_ = Matrix::Zero(n, n);
    return z;
}

SkewMatrix SkewMatrix::operator+(const SkewMatrix& o) const
{
    SkewMatrix z;
    z.m_ = m_ + o.m_;
    return z;
}

SkewMatrix SkewMatrix::operator-(const SkewMatrix& o) const
{
    SkewMatrix z;
    z.m_ = m_ - o.m_;
    return z;
}

SkewMatrix SkewMatrix::operator*(double s) const
{
    SkewMatrix z;
    z.m_ = s * m_;
    return z;
}

SymMatrix::SymMatrix(const Matrix& a)
{
    detail::require_square(a, "SymMatrix");
    m_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::zero(int n)
{
    SymMatrix s;
    s.m_ = Matrix::Zero(n, n);
    return s;
}

Rotation::Rotation(Matrix m, double orth_tol) : m_(std::move(m))
{
    detail::require_square(m_, "Rotation");
    const double defect = orthogonality_defect(m_);
    if (!(defect <= orth_tol)) {
        std::ostringstream os;
        os << "not a rotation: ||R^T R - I||_F = " << defect << " exceeds " << orth_tol;
        throw NotARotationError(os.str());
    }
    if (!(m_.determinant() > 0.0)) {
        throw NotARotationError("not a rotation: determinant is not positive");
    }
}

Rotation Rotation::identity(int n)
{
    return trusted(Matrix::Identity(n, n));
}

Rotation Rotation::trusted(Matrix m)
{
    Rotation r;
    r.m_ = std::move(m);
    return r;
}

std::string SqrtMethod::name() const
{
    if (kind == Kind::exact) {
        return "exact";
    }
    return "taylor(" + std::to_string(order) + ")";
}

SqrtMethod SqrtMethod::parse(const std::string& text)
{
    if (text == "exact") {
        return exact();
    }
    std::string digits;
    if (text.rfind("taylor(", 0) == 0 && text.size() > 8 && text.back() == ')') {
        digits = text.substr(7, text.size() - 8);
    } else if (text.rfind("taylor", 0) == 0) {
        digits = text.substr(6);
    } else {
        throw InvalidArgument("unknown sqrt method '" + text + "'");
    }
    if (digits.empty() || digits.size() > 3 ||
        digits.find_first_not_of("0123456789") != std::string::npos) {
        throw InvalidArgument("unknown sqrt method '" + text + "'");
    }
    const int order = std::stoi(digits);
    if (order < 1) {
        throw InvalidArgument("taylor order must be >= 1");
    }
    return taylor(order);
}

Matrix block_skew(int n, const std::vector<double>& angles)
{
    if (2 * static_cast<int>(angles.size()) > n) {
        throw InvalidArgument("block_skew: too many angles for dimension");
    }
    Matrix e = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(2 * k);
        e(i, i + 1) = angles[k];
        e(i + 1, i) = -angles[k];
    }
    return e;
}

std::pair<int, int> basis_pair(int n, int j)
{
    detail::require_dimension(n);
    if (j < 0 || j >= n * (n - 1) / 2) {
        throw InvalidArgument("basis index out of range");
    }
    int a = 0;
    int row_len = n - 1;
    while (j >= row_len) {
        j -= row_len;
        ++a;
        --row_len;
    }
    return {a, a + 1 + j};
}

std::vector<SkewMatrix> skew_basis(int n)
{
    detail::require_dimension(n);
    std::vector<SkewMatrix> basis;
    basis.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            Matrix e = Matrix::Zero(n, n);
            e(a, b) = 1.0;
            e(b, a) = -1.0;
            basis.emplace_back(e);
        }
    }
    return basis;
}

SkewMatrix skew_from_coordinates(int n, const double* w)
{
    Matrix m = Matrix::Zero(n, n);
    int j = 0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b, ++j) {
            m(a, b) = w[j];
            m(b, a) = -w[j];
        }
    }
    return SkewMatrix(m);
}

Matrix project_tangent(const Rotation& r, const Matrix& a)
{
    if (a.rows() != r.dim() || a.cols() != r.dim()) {
        throw InvalidArgument("project_tangent: shape mismatch");
    }
    const Matrix& rm = r.matrix();
    return 0.5 * (a - rm * a.transpose() * rm);
}

double orthogonality_defect(const Matrix& m)
{
    detail::require_square(m, "orthogonality_defect");
    Matrix g = m.transpose() * m;
    g.diagonal().array() -= 1.0;
    return g.norm();
}

Rotation closest_rotation(const Matrix& m)
{
    detail::require_square(m, "closest_rotation");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix q = svd.matrixU() * svd.matrixV().transpose();
    if (q.determinant() < 0.0) {
        throw NotARotationError("closest_rotation: polar factor has negative determinant");
    }
    return Rotation::trusted(std::move(q));
}

}  // namespace rotasde
