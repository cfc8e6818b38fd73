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
#include <memory>
#include <vector>

#include "rotasde/errors.hpp"
#include "rotasde/sde_model.hpp"

namespace rotasde {

namespace {

void require_weights(const SdeModel& model, std::span<const double> weights)
{
    if (static_cast<int>(weights.size()) != model.d) {
        throw InvalidArgument("diffusion weights: expected " + std::to_string(model.d) +
                              " entries, got " + std::to_string(weights.size()));
    }
}

Matrix scaled_identity(int n, double s)
{
    return s * Matrix::Identity(n, n);
}

}  // namespace

SymMatrix sum_diffusion_squares(const SdeModel& model, const Matrix& r, double t)
{
    if (model.diffusion_square_sum) {
        return model.diffusion_square_sum(r, t);
    }
    Matrix acc = Matrix::Zero(model.n, model.n);
    for (int j = 0; j < model.d; ++j) {
        const SkewMatrix b = model.diffusion(r, t, j);
        acc.noalias() += b.matrix() * b.matrix();
    }
    return SymMatrix(acc);
}

SkewMatrix combine_diffusion(const SdeModel& model, const Matrix& r, double t,
                             std::span<const double> weights)
{
    require_weights(model, weights);
    if (model.diffusion_combination) {
        return model.diffusion_combination(r, t, weights);
    }
    Matrix acc = Matrix::Zero(model.n, model.n);
    for (int j = 0; j < model.d; ++j) {
        acc += weights[static_cast<std::size_t>(j)] * model.diffusion(r, t, j).matrix();
    }
    return SkewMatrix(acc);
}

SkewMatrix k_term_fd(const SdeModel& model, const Rotation& r, double t, int j, double h)
{
    if (!(h > 0.0)) {
        throw InvalidArgument("k_term_fd: step must be positive");
    }
    if (j < 0 || j >= model.d) {
        throw InvalidArgument("k_term_fd: driver index out of range");
    }
    const Matrix& rm = r.matrix();
    const Matrix direction = rm * model.diffusion(rm, t, j).matrix();
    const Matrix forward = model.diffusion(rm + h * direction, t, j).matrix();
    const Matrix backward = model.diffusion(rm - h * direction, t, j).matrix();
    return SkewMatrix((forward - backward) / (2.0 * h));
}

ItoDrift strat_to_ito(const SdeModel& model, const Rotation& r, double t, const Tolerances& tol)
{
    const Matrix& rm = r.matrix();
    Matrix value = model.drift_strat(rm, t).matrix();
    if (model.d > 0) {
        if (model.k_terms) {
            value += 0.5 * model.k_terms(rm, t).matrix();
        } else {
            for (int j = 0; j < model.d; ++j) {
                value += 0.5 * k_term_fd(model, r, t, j, tol.fd_step).matrix();
            }
        }
        value += 0.5 * sum_diffusion_squares(model, rm, t).matrix();
    }
    return ItoDrift(value);
}

ItoDrift ito_drift(const SdeModel& model, const Matrix& r, double t, const Tolerances& tol)
{
    if (model.ito_drift_override) {
        return ItoDrift(model.ito_drift_override(r, t));
    }
    return strat_to_ito(model, Rotation::trusted(r), t, tol);
}

SdeModel brownian_model(int n)
{
    detail::require_dimension(n);
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    const auto pairs = std::make_shared<std::vector<std::pair<int, int>>>();
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            pairs->emplace_back(a, b);
        }
    }

    SdeModel m;
    m.name = "brownian";
    m.n = n;
    m.d = n * (n - 1) / 2;
    m.drift_strat = [n](const Matrix&, double) { return SkewMatrix::zero(n); };
    m.diffusion = [n, pairs, inv_root2](const Matrix&, double, int j) {
        const auto [a, b] = pairs->at(static_cast<std::size_t>(j));
        Matrix e = Matrix::Zero(n, n);
        e(a, b) = inv_root2;
        e(b, a) = -inv_root2;
        return SkewMatrix(e);
    };
    m.k_terms = [n](const Matrix&, double) { return SkewMatrix::zero(n); };
    m.ito_drift_override = [n](const Matrix&, double) {
        return scaled_identity(n, -(n - 1) / 4.0);
    };
    m.diffusion_combination = [n, inv_root2](const Matrix&, double, std::span<const double> w) {
        return inv_root2 * skew_from_coordinates(n, w.data());
    };
    m.diffusion_square_sum = [n](const Matrix&, double) {
        return SymMatrix(scaled_identity(n, -(n - 1) / 2.0));
    };
    return m;
}

std::string to_string(DriftSource s)
{
    return s == DriftSource::converted ? "converted" : "printed";
}

DriftSource parse_drift_source(const std::string& text)
{
    if (text == "converted") {
        return DriftSource::converted;
    }
    if (text == "printed") {
        return DriftSource::printed;
    }
    throw InvalidArgument("unknown drift source '" + text + "'");
}

double descent_noise_scale(const Matrix& r)
{
    return 0.5 - r.trace() / (2.0 * static_cast<double>(r.rows()));
}

SkewMatrix log_near_manifold(const Matrix& r, const Tolerances& tol)
{
    if (orthogonality_defect(r) <= tol.orth_tol) {
        return logm_rotation(Rotation::trusted(r), tol);
    }
    return logm_rotation(closest_rotation(r), tol);
}

SdeModel descent_model(int n, DriftSource source, const Tolerances& tol)
{
    detail::require_dimension(n);
    const auto pairs = std::make_shared<std::vector<std::pair<int, int>>>();
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            pairs->emplace_back(a, b);
        }
    }
    const double two_n = 2.0 * n;

    SdeModel m;
    m.name = "descent";
    m.n = n;
    m.d = n * (n - 1) / 2;
    m.drift_strat = [tol](const Matrix& r, double) { return -1.0 * log_near_manifold(r, tol); };
    m.diffusion = [n, pairs](const Matrix& r, double, int j) {
        const auto [a, b] = pairs->at(static_cast<std::size_t>(j));
        const double tau = descent_noise_scale(r);
        Matrix e = Matrix::Zero(n, n);
        e(a, b) = tau;
        e(b, a) = -tau;
        return SkewMatrix(e);
    };
    // dB_j/dR_rs = -delta_rs E_j / (2n), so K_j = -tau tr(R E_j) E_j / (2n) and
    // sum_j tr(R E_j) E_j = R^T - R.
    m.k_terms = [two_n](const Matrix& r, double) {
        const double tau = descent_noise_scale(r);
        return SkewMatrix((tau / two_n) * (r - r.transpose()));
    };
    m.diffusion_combination = [n](const Matrix& r, double, std::span<const double> w) {
        return descent_noise_scale(r) * skew_from_coordinates(n, w.data());
    };
    m.diffusion_square_sum = [n](const Matrix& r, double) {
        const double tau = descent_noise_scale(r);
        return SymMatrix(scaled_identity(n, -tau * tau * (n - 1)));
    };
    if (source == DriftSource::printed) {
        m.ito_drift_override = [n, two_n, tol](const Matrix& r, double) {
            const double tau = descent_noise_scale(r);
            Matrix b = -log_near_manifold(r, tol).matrix();
            b += (tau / two_n) * (r - r.transpose());
            b.diagonal().array() -= tau * tau * (n - 1) / 2.0;
            return b;
        };
    }
    return m;
}

}  // namespace rotasde
