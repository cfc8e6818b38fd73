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

#include <stdexcept>
#include <string>

namespace rotasde {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad dimension, shape mismatch or violated precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Failures of the numerical algorithms themselves. Mapped to exit code 3 by the CLI.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// I - Z^T Z is not positive definite (some block angle |lambda| >= 1).
class NotAContractionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Rotation with a block angle at (or numerically near) pi; the principal logarithm is undefined.
class LogDomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Every redraw of the tangent increment was rejected.
class RetriesExhaustedError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A matrix handed to Rotation fails orthogonality or orientation.
class NotARotationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Malformed or inconsistent experiment configuration. Mapped to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Reading or writing files failed. Mapped to exit code 4.
class IoError : public Error {
public:
    using Error::Error;
};

/// Rethrows the in-flight NumericalError (any subclass) with `prefix` prepended to its
/// message, keeping the dynamic type. Must be called from inside a catch block.
[[noreturn]] inline void rethrow_numerical_with_context(const std::string& prefix)
{
    try {
        throw;
    } catch (const NotAContractionError& e) {
        throw NotAContractionError(prefix + e.what());
    } catch (const LogDomainError& e) {
        throw LogDomainError(prefix + e.what());
    } catch (const RetriesExhaustedError& e) {
        throw RetriesExhaustedError(prefix + e.what());
    } catch (const NotARotationError& e) {
        throw NotARotationError(prefix + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(prefix + e.what());
    }
}

}  // namespace rotasde
