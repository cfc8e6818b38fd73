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

namespace rotasde {

/// Every numerical threshold used by the library lives here.
struct Tolerances {
    /// Max ||R^T R - I||_F accepted when constructing a Rotation.
    double orth_tol = 1e-9;
    /// Margin subtracted before the positive-definiteness test of I - Z^T Z.
    double pd_margin = 1e-8;
    /// Distance from pi below which a block angle is rejected by the logarithm.
    double log_tol = 1e-6;
    /// Agreement required between the symmetric Ito drift part and (1/2) sum B_j^2.
    double conversion_tol = 1e-6;
    /// Central finite-difference step for the K_j terms.
    double fd_step = 1e-5;
    /// Relative size (against ||Z||_F) below which a block angle counts as zero.
    double schur_zero_tol = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace rotasde
