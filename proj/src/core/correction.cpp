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
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "rotasde/errors.hpp"
#include "rotasde/so_n.hpp"

namespace rotasde {

bool is_contraction(const SkewMatrix& z, double margin)
{
    Eigen::MatrixXd m = -(z.matrix().transpose() * z.matrix());
    m.diagonal().array() += 1.0 - margin;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    return llt.info() == Eigen::Success;
}

namespace detail {

Matrix correction_unchecked(const SkewMatrix& z, SqrtMethod method)
{
    const int n = z.dim();
    const Eigen::MatrixXd gram = z.matrix().transpose() * z.matrix();

    if (method.kind == SqrtMethod::Kind::exact) {
        // Z^T Z = P D_n(lambda^2) P^T, so C = P D_n(sqrt(1 - lambda^2) - 1) P^T.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        const Eigen::VectorXd f = es.eigenvalues().unaryExpr([](double mu) {
            mu = std::clamp(mu, 0.0, 1.0);
            return -mu / (1.0 + std::sqrt(1.0 - mu));
        });
        const Eigen::MatrixXd& v = es.eigenvectors();
        Matrix c = v * f.asDiagonal() * v.transpose();
        return 0.5 * (c + c.transpose());
    }

    // sqrt(1 - x) - 1 = sum_{i>=1} binom(1/2, i) (-x)^i, evaluated by Horner in x = Z^T Z.
    const int order = method.order;
    std::vector<double> coeff(static_cast<std::size_t>(order) + 1, 0.0);
    double binom = 1.0;
    for (int i = 1; i <= order; ++i) {
        binom *= (0.5 - (i - 1)) / i;
        coeff[static_cast<std::size_t>(i)] = (i % 2 == 0) ? binom : -binom;
    }
    Eigen::MatrixXd s = coeff[static_cast<std::size_t>(order)] * Eigen::MatrixXd::Identity(n, n);
    for (int i = order - 1; i >= 1; --i) {
        Eigen::MatrixXd next = gram * s;
        next.diagonal().array() += coeff[static_cast<std::size_t>(i)];
        s = std::move(next);
    }
    Matrix c = gram * s;
    return 0.5 * (c + c.transpose());
}

}  // namespace detail

SymMatrix correction(const SkewMatrix& z, SqrtMethod method, const Tolerances& tol)
{
    if (!is_contraction(z, tol.pd_margin)) {
        throw NotAContractionError("correction: I - Z^T Z is not positive definite");
    }
    SymMatrix c(detail::correction_unchecked(z, method));
    if (method.kind == SqrtMethod::Kind::exact) {
        Matrix step = z.matrix() + c.matrix();
        step.diagonal().array() += 1.0;
        const double defect = orthogonality_defect(step);
        if (!(defect <= tol.orth_tol)) {
            std::ostringstream os;
            os << "correction: I + Z + C has orthogonality defect " << defect;
            throw NumericalError(os.str());
        }
    }
    return c;
}

}  // namespace rotasde
