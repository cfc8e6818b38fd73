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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "rotasde/so_n.hpp"

namespace rotasde {

namespace {

// Orthogonalizes v against the first `count` columns of q (two Gram-Schmidt passes) and
// normalizes. Returns false when v has no significant component outside their span.
bool orthonormalize_against(Eigen::VectorXd& v, const Eigen::MatrixXd& q, int count)
{
    const double start = v.norm();
    if (!(start > 0.0)) {
        return false;
    }
    v /= start;
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < count; ++c) {
            v -= q.col(c).dot(v) * q.col(c);
        }
    }
    const double rest = v.norm();
    if (rest < 0.5) {
        return false;
    }
    v /= rest;
    return true;
}

}  // namespace

Matrix SkewSchur::reassemble() const
{
    const Matrix e = block_skew(dim(), angles);
    return p * e * p.transpose();
}

// The Hermitian matrix iZ has eigenvalues +-lambda_k. For an eigenvector u = x + iy of
// +lambda, Z x = lambda y and Z y = -lambda x, so (y, x) scaled by sqrt(2) is an orthonormal
// pair spanning one invariant plane of Z.
SkewSchur skew_schur(const SkewMatrix& z, const Tolerances& tol)
{
    const int n = z.dim();
    const int blocks = n / 2;
    SkewSchur out;
    out.angles.assign(static_cast<std::size_t>(blocks), 0.0);

    const double scale = z.norm();
    if (scale == 0.0) {
        out.p = Matrix::Identity(n, n);
        return out;
    }

    using Complex = std::complex<double>;
    const Eigen::MatrixXcd h = Complex(0.0, 1.0) * z.matrix().cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd& lambda = es.eigenvalues();
    const Eigen::MatrixXcd& u = es.eigenvectors();

    const double zero = tol.schur_zero_tol * scale;
    const double root2 = std::sqrt(2.0);

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    int cols = 0;
    std::size_t nonzero = 0;

    // Eigenvalues come back ascending: walk the positive half from the top.
    for (int k = n - 1; k >= 0 && static_cast<int>(nonzero) < blocks; --k) {
        if (lambda(k) <= zero) {
            break;
        }
        Eigen::VectorXd v = root2 * u.col(k).imag();
        Eigen::VectorXd w = root2 * u.col(k).real();
        if (!orthonormalize_against(v, q, cols)) {
            continue;
        }
        q.col(cols) = v;
        if (!orthonormalize_against(w, q, cols + 1)) {
            continue;
        }
        q.col(cols + 1) = w;
        cols += 2;
        ++nonzero;
    }

    // Complete with the (numerical) null space, then the canonical basis as a fallback.
    std::vector<Eigen::VectorXd> candidates;
    for (int k = 0; k < n; ++k) {
        if (std::abs(lambda(k)) <= zero) {
            candidates.emplace_back(u.col(k).real());
            candidates.emplace_back(u.col(k).imag());
        }
    }
    for (int k = 0; k < n; ++k) {
        candidates.emplace_back(Eigen::VectorXd::Unit(n, k));
    }
    for (auto& c : candidates) {
        if (cols == n) {
            break;
        }
        if (c.norm() < 1e-8) {
            continue;
        }
        if (orthonormalize_against(c, q, cols)) {
            q.col(cols++) = c;
        }
    }

    const Eigen::MatrixXd t = q.transpose() * z.matrix() * q;
    for (std::size_t b = 0; b < nonzero; ++b) {
        const auto i = static_cast<Eigen::Index>(2 * b);
        out.angles[b] = t(i, i + 1);
    }

    // Stable sort of the nonzero blocks by |angle|, descending.
    std::vector<std::size_t> order(nonzero);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(out.angles[a]) > std::abs(out.angles[b]);
    });
    Eigen::MatrixXd sorted = q;
    std::vector<double> sorted_angles = out.angles;
    for (std::size_t b = 0; b < nonzero; ++b) {
        const auto dst = static_cast<Eigen::Index>(2 * b);
        const auto src = static_cast<Eigen::Index>(2 * order[b]);
        sorted.col(dst) = q.col(src);
        sorted.col(dst + 1) = q.col(src + 1);
        sorted_angles[b] = out.angles[order[b]];
    }

    out.p = sorted;
    out.angles = std::move(sorted_angles);
    out.nonzero_blocks = nonzero;
    return out;
}

}  // namespace rotasde
