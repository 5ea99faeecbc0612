// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The otfsftn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OTFSFTN_COMMON_HPP
#define OTFSFTN_COMMON_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace otfsftn
{
    using cd = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double two_pi = 2.0 * std::numbers::pi;
    inline constexpr double speed_of_light = 3.0e8;

    // Invalid scalar parameter (order, alpha, beta, bits, ...)
    class ParameterError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Operand shapes do not agree
    class SizeError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Inconsistent configuration (profile file, delay beyond frame, ...)
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Exhaustive search or enumeration above the permitted size
    class CapacityError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Factorization failure, singular covariance, rank-deficient channel
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Channel that carries no energy
    class DegenerateChannelError : public NumericalError
    {
    public:
        using NumericalError::NumericalError;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
}

#endif
