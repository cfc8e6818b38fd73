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
#include <array>
#include <cmath>

#include <Eigen/LU>

#include "rotasde/so_n.hpp"

namespace rotasde {

namespace {

using Dense = Eigen::MatrixXd;

// Each pade*() fills U (odd part) and V (even part) so that exp(A) ~ (V - U)^{-1} (V + U).

void pade3(const Dense& a, Dense& u, Dense& v)
{
    constexpr std::array<double, 4> b{120.0, 60.0, 12.0, 1.0};
    const auto id = Dense::Identity(a.rows(), a.cols());
    const Dense a2 = a * a;
    u.noalias() = a * (b[3] * a2 + b[1] * id);
    v = b[2] * a2 + b[0] * id;
}

void pade5(const Dense& a, Dense& u, Dense& v)
{
    constexpr std::array<double, 6> b{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    const auto id = Dense::Identity(a.rows(), a.cols());
    const Dense a2 = a * a;
    const Dense a4 = a2 * a2;
    u.noalias() = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade7(const Dense& a, Dense& u, Dense& v)
{
    constexpr std::array<double, 8> b{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                      25200.0,    1512.0,    56.0,      1.0};
    const auto id = Dense::Identity(a.rows(), a.cols());
    const Dense a2 = a * a;
    const Dense a4 = a2 * a2;
    const Dense a6 = a4 * a2;
    u.noalias() = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade9(const Dense& a, Dense& u, Dense& v)
{
    constexpr std::array<double, 10> b{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                       30270240.0,    2162160.0,    110880.0,     3960.0,
                                       90.0,          1.0};
    const auto id = Dense::Identity(a.rows(), a.cols());
    const Dense a2 = a * a;
    const Dense a4 = a2 * a2;
    const Dense a6 = a4 * a2;
    const Dense a8 = a6 * a2;
    u.noalias() = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade13(const Dense& a, Dense& u, Dense& v)
{
    constexpr std::array<double, 14> b{
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    const auto id = Dense::Identity(a.rows(), a.cols());
    const Dense a2 = a * a;
    const Dense a4 = a2 * a2;
    const Dense a6 = a4 * a2;
    Dense inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
    Dense tmp = a6 * inner;
    tmp += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    u.noalias() = a * tmp;
    inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
    v.noalias() = a6 * inner;
    v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

// Degree selection and scaling follow Higham, "The scaling and squaring method for the
// matrix exponential revisited" (2005): the smallest degree whose theta bound covers ||A||_1.
Matrix expm_pade(const Matrix& a_in)
{
    detail::require_square(a_in, "expm_pade");
    constexpr double theta3 = 1.495585217958292e-2;
    constexpr double theta5 = 2.539398330063230e-1;
    constexpr double theta7 = 9.504178996162932e-1;
    constexpr double theta9 = 2.097847961257068e0;
    constexpr double theta13 = 5.371920351148152e0;

    Dense a = a_in;
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    Dense u(a.rows(), a.cols());
    Dense v(a.rows(), a.cols());
    int squarings = 0;

    if (norm1 <= theta3) {
        pade3(a, u, v);
    } else if (norm1 <= theta5) {
        pade5(a, u, v);
    } else if (norm1 <= theta7) {
        pade7(a, u, v);
    } else if (norm1 <= theta9) {
        pade9(a, u, v);
    } else {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
        a *= std::ldexp(1.0, -squarings);
        pade13(a, u, v);
    }

    const Dense numer = v + u;
    const Dense denom = v - u;
    Dense result = denom.partialPivLu().solve(numer);
    for (int s = 0; s < squarings; ++s) {
        result = (result * result).eval();
    }
    return result;
}

Rotation expm_skew(const SkewMatrix& z)
{
    return Rotation::trusted(expm_pade(z.matrix()));
}

}  // namespace rotasde
