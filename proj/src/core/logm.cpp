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
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rotasde/errors.hpp"
#include "rotasde/so_n.hpp"

namespace rotasde {

namespace {

// 2 atan(sqrt(mu)) / sqrt(mu), the angle-from-Cayley-parameter map divided by its argument.
double cayley_angle_ratio(double mu)
{
    if (mu < 1e-8) {
        return 2.0 * (1.0 - mu / 3.0 + mu * mu / 5.0);
    }
    const double s = std::sqrt(mu);
    return 2.0 * std::atan(s) / s;
}

}  // namespace

// Cayley parameter X = (R + I)^{-1}(R - I) is skew with block values tan(theta/2), and
// log R = X g(X^T X) with g the ratio above. Only a symmetric eigensolve is needed.
SkewMatrix logm_rotation(const Rotation& r, const Tolerances& tol)
{
    const int n = r.dim();
    const Eigen::MatrixXd rm = r.matrix();
    Eigen::MatrixXd plus = rm;
    plus.diagonal().array() += 1.0;
    Eigen::MatrixXd minus = rm;
    minus.diagonal().array() -= 1.0;

    const Eigen::MatrixXd raw = plus.partialPivLu().solve(minus);
    const Eigen::MatrixXd x = 0.5 * (raw - raw.transpose());
    if (!x.allFinite()) {
        throw LogDomainError("logm_rotation: rotation has an eigenvalue -1");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.transpose() * x);
    const Eigen::VectorXd& mu = es.eigenvalues();
    const double mu_max = std::max(0.0, mu(n - 1));
    const double theta_max = 2.0 * std::atan(std::sqrt(mu_max));
    if (!std::isfinite(theta_max) || theta_max > std::numbers::pi - tol.log_tol) {
        std::ostringstream os;
        os << "logm_rotation: block angle " << theta_max << " is within " << tol.log_tol
           << " of pi";
        throw LogDomainError(os.str());
    }

    const Eigen::VectorXd g = mu.unaryExpr([](double m) { return cayley_angle_ratio(std::max(m, 0.0)); });
    const Eigen::MatrixXd& v = es.eigenvectors();
    const Matrix log = x * (v * g.asDiagonal() * v.transpose());
    return SkewMatrix(log);
}

double geodesic_distance(const Rotation& r1, const Rotation& r2, const Tolerances& tol)
{
    if (r1.dim() != r2.dim()) {
        throw InvalidArgument("geodesic_distance: dimension mismatch");
    }
    return logm_rotation(r1.transpose() * r2, tol).norm();
}

}  // namespace rotasde
