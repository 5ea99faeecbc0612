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

#ifndef OTFSFTN_SRC_FFT_HPP
#define OTFSFTN_SRC_FFT_HPP

#include <vector>

#include <unsupported/Eigen/FFT>

#include "otfsftn/common.hpp"

// Unnormalized DFT passes along matrix axes. Forward uses exp(-j...), inverse exp(+j...).
namespace otfsftn::detail
{
    inline Eigen::FFT<double> &fft_engine()
    {
        thread_local Eigen::FFT<double> engine = []
        {
            Eigen::FFT<double> f;
            f.SetFlag(Eigen::FFT<double>::Unscaled);
            return f;
        }();
        return engine;
    }

    inline void transform_columns(CMat &A, bool inverse)
    {
        if (A.rows() == 1)
            return;
        auto &f = fft_engine();
        std::vector<cd> in(std::size_t(A.rows())), out(std::size_t(A.rows()));
        for (Eigen::Index c = 0; c < A.cols(); ++c)
        {
            for (Eigen::Index r = 0; r < A.rows(); ++r)
                in[std::size_t(r)] = A(r, c);
            if (inverse)
                f.inv(out, in);
            else
                f.fwd(out, in);
            for (Eigen::Index r = 0; r < A.rows(); ++r)
                A(r, c) = out[std::size_t(r)];
        }
    }

    inline void transform_rows(CMat &A, bool inverse)
    {
        if (A.cols() == 1)
            return;
        auto &f = fft_engine();
        std::vector<cd> in(std::size_t(A.cols())), out(std::size_t(A.cols()));
        for (Eigen::Index r = 0; r < A.rows(); ++r)
        {
            for (Eigen::Index c = 0; c < A.cols(); ++c)
                in[std::size_t(c)] = A(r, c);
            if (inverse)
                f.inv(out, in);
            else
                f.fwd(out, in);
            for (Eigen::Index c = 0; c < A.cols(); ++c)
                A(r, c) = out[std::size_t(c)];
        }
    }

    inline void dft_columns(CMat &A) { transform_columns(A, false); }
    inline void idft_columns(CMat &A) { transform_columns(A, true); }
    inline void dft_rows(CMat &A) { transform_rows(A, false); }
    inline void idft_rows(CMat &A) { transform_rows(A, true); }
}

#endif
