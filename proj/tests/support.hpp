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

#ifndef OTFSFTN_TESTS_SUPPORT_HPP
#define OTFSFTN_TESTS_SUPPORT_HPP

#include <random>

#include "otfsftn/common.hpp"
#include "otfsftn/ftn_pulse.hpp"

namespace otfsftn::test
{
    inline CMat random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
    {
        CMat A(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                A(i, j) = pulse::complex_normal(rng);
        return A;
    }

    inline CVec random_vector(Eigen::Index n, std::mt19937_64 &rng)
    {
        return random_matrix(n, 1, rng).col(0);
    }

    // Random Hermitian positive definite matrix with eigenvalues in [1, 1 + n]
    inline CMat random_hpd(Eigen::Index n, std::mt19937_64 &rng)
    {
        const CMat A = random_matrix(n, n, rng);
        return A * A.adjoint() / double(n) + CMat::Identity(n, n);
    }

    // Unitary DFT matrix, F[k, n] = exp(-j 2 pi k n / size) / sqrt(size)
    inline CMat dft_matrix(Eigen::Index size)
    {
        CMat F(size, size);
        for (Eigen::Index k = 0; k < size; ++k)
            for (Eigen::Index n = 0; n < size; ++n)
                F(k, n) = std::polar(1.0 / std::sqrt(double(size)), -two_pi * double(k * n % size) / double(size));
        return F;
    }

    inline double max_abs(const CMat &A) { return A.cwiseAbs().maxCoeff(); }
}

#endif
