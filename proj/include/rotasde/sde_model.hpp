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

/// Coefficient bundles for multiplicative SDEs on SO(n),
///
///   dR = R B_{o,S}(R,t) dt + sum_j R B_j(R,t) o dW_j     (Stratonovich),
///
/// and their conversion to Ito form
///
///   B_{o,I} = B_{o,S} + (1/2) sum_j K_j + (1/2) sum_j B_j^2,
///   K_j     = sum_{r,s} dB_j/dR_{rs} (R B_j)_{rs}.
///
/// Coefficient functions receive a plain matrix: finite differencing and the Euclidean
/// baseline evaluate them slightly off the manifold.

#include <functional>
#include <span>
#include <string>

#include "rotasde/so_n.hpp"
#include "rotasde/tolerances.hpp"

namespace rotasde {

using SkewField = std::function<SkewMatrix(const Matrix& r, double t)>;
using DiffusionField = std::function<SkewMatrix(const Matrix& r, double t, int j)>;
using MatrixField = std::function<Matrix(const Matrix& r, double t)>;
using CombinationField =
    std::function<SkewMatrix(const Matrix& r, double t, std::span<const double> weights)>;
using SymField = std::function<SymMatrix(const Matrix& r, double t)>;

struct SdeModel {
    std::string name;
    int n = 0;
    /// Number of Brownian drivers.
    int d = 0;

    SkewField drift_strat;
    DiffusionField diffusion;
    /// Analytic sum_j K_j, when available.
    SkewField k_terms;
    /// Closed-form Ito drift B_{o,I}; used by the integrators instead of the conversion.
    MatrixField ito_drift_override;

    /// Optional structured evaluation of sum_j w_j B_j.
    CombinationField diffusion_combination;
    /// Optional structured evaluation of sum_j B_j^2.
    SymField diffusion_square_sum;
};

struct ItoDrift {
    Matrix value;
    SkewMatrix skew_part;
    SymMatrix sym_part;

    explicit ItoDrift(const Matrix& v) : value(v), skew_part(v), sym_part(v) {}
};

/// sum_j B_j(r,t)^2 (symmetric negative semidefinite).
SymMatrix sum_diffusion_squares(const SdeModel& model, const Matrix& r, double t);

/// sum_j w_j B_j(r,t).
SkewMatrix combine_diffusion(const SdeModel& model, const Matrix& r, double t,
                             std::span<const double> weights);

/// Central difference [B_j(r + h r B_j) - B_j(r - h r B_j)] / (2h), antisymmetrized.
SkewMatrix k_term_fd(const SdeModel& model, const Rotation& r, double t, int j, double h);

/// B_{o,I} from the Stratonovich coefficients; analytic k_terms when present, else the
/// finite-difference K_j with step tol.fd_step.
ItoDrift strat_to_ito(const SdeModel& model, const Rotation& r, double t,
                      const Tolerances& tol = kDefaultTolerances);

/// The drift the integrators use: the override when present, else strat_to_ito.
ItoDrift ito_drift(const SdeModel& model, const Matrix& r, double t,
                   const Tolerances& tol = kDefaultTolerances);

/// dR = -(n-1)/4 R dt + R sum_j (1/sqrt 2) E_j dW_j.
SdeModel brownian_model(int n);

enum class DriftSource { converted, printed };

std::string to_string(DriftSource s);
DriftSource parse_drift_source(const std::string& text);

/// Noisy gradient descent of F(R) = (1/2) ||log R||_F^2:
/// B_{o,S} = -log R, B_j = tau(R) E_j, tau(R) = 1/2 - tr(R)/(2n).
///
/// With DriftSource::printed the Ito drift is the alternative closed form
/// -log R + tau/(2n) (R - R^T) - tau^2 (n-1)/2 I; with converted it comes from the
/// conversion with the analytic sum_j K_j = tau/(2n) (R - R^T).
SdeModel descent_model(int n, DriftSource source = DriftSource::converted,
                       const Tolerances& tol = kDefaultTolerances);

/// tau(R) = 1/2 - tr(R)/(2n).
double descent_noise_scale(const Matrix& r);

/// Principal log of r, going through the polar factor when r is off the manifold by more
/// than tol.orth_tol.
SkewMatrix log_near_manifold(const Matrix& r, const Tolerances& tol = kDefaultTolerances);

}  // namespace rotasde
