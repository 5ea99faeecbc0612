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

#include "otfsftn/dd_core.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "fft.hpp"

namespace otfsftn::dd
{
    GridParams::GridParams(int M, int N, double delta_f, double T0, double alpha)
        : M_(M), N_(N), delta_f_(delta_f), T0_(T0), alpha_(alpha)
    {
        if (M < 1 || N < 1)
            throw ParameterError("grid dimensions must be positive, got M=" + std::to_string(M) +
                                 " N=" + std::to_string(N));
        if (!(delta_f > 0.0) || !(T0 > 0.0))
            throw ParameterError("delta_f and T0 must be positive");
        if (!(alpha > 0.0) || alpha > 1.0)
            throw ParameterError("alpha must lie in (0, 1], got " + std::to_string(alpha));
    }

    GridParams GridParams::from_spacing(int M, int N, double delta_f, double alpha)
    {
        if (!(delta_f > 0.0))
            throw ParameterError("delta_f must be positive");
        return {M, N, delta_f, 1.0 / delta_f, alpha};
    }

    namespace
    {
        unsigned gray_decode(unsigned g)
        {
            unsigned b = g;
            for (unsigned s = g >> 1; s != 0; s >>= 1)
                b ^= s;
            return b;
        }

        // Amplitude level for a Gray-coded axis label; label 0 maps to the largest positive level
        double axis_level(unsigned label, unsigned levels)
        {
            return double(levels - 1) - 2.0 * double(gray_decode(label));
        }
    }

    Codebook::Codebook(int order) : order_(order), bits_(0)
    {
        if (order < 2 || !std::has_single_bit(unsigned(order)))
            throw ParameterError("constellation order must be a power of two >= 2, got " + std::to_string(order));
        bits_ = std::countr_zero(unsigned(order));
        if (order != 2 && bits_ % 2 != 0)
            throw ParameterError("only BPSK and square QAM are supported, got order " + std::to_string(order));

        points_.resize(order);
        if (order == 2)
        {
            points_[0] = 1.0;
            points_[1] = -1.0;
            return;
        }
        const unsigned half = unsigned(bits_ / 2);
        const unsigned levels = 1u << half;
        const double scale = std::sqrt(2.0 * (double(levels) * levels - 1.0) / 3.0);
        for (unsigned label = 0; label < unsigned(order); ++label)
        {
            const unsigned li = label >> half;
            const unsigned lq = label & (levels - 1);
            points_[label] = cd(axis_level(li, levels), axis_level(lq, levels)) / scale;
        }
    }

    int Codebook::nearest(cd z) const
    {
        int best = 0;
        double best_d = std::norm(z - points_[0]);
        for (int i = 1; i < order_; ++i)
        {
            const double d = std::norm(z - points_[i]);
            if (d < best_d)
            {
                best_d = d;
                best = i;
            }
        }
        return best;
    }

    DDFrame qam_map(std::span<const std::uint8_t> bits, const Codebook &codebook, const GridParams &params)
    {
        const int M = params.M(), N = params.N();
        const std::size_t bps = std::size_t(codebook.bits_per_symbol());
        const std::size_t expected = std::size_t(M) * std::size_t(N) * bps;
        if (bits.size() != expected)
            throw SizeError("qam_map expects " + std::to_string(expected) + " bits, got " +
                            std::to_string(bits.size()));

        DDFrame frame{CMat(M, N), 1.0};
        for (std::size_t i = 0; i < std::size_t(M) * N; ++i)
        {
            unsigned label = 0;
            for (std::size_t b = 0; b < bps; ++b)
                label = (label << 1) | (bits[i * bps + b] & 1u);
            frame.symbols(Eigen::Index(i / N), Eigen::Index(i % N)) = codebook.point(int(label));
        }
        return frame;
    }

    std::vector<std::uint8_t> qam_demap(const DDFrame &frame, const Codebook &codebook)
    {
        const Eigen::Index M = frame.symbols.rows(), N = frame.symbols.cols();
        const int bps = codebook.bits_per_symbol();
        std::vector<std::uint8_t> bits(std::size_t(M * N * bps));
        for (Eigen::Index i = 0; i < M * N; ++i)
        {
            const unsigned label = unsigned(codebook.nearest(frame.symbols(i / N, i % N)));
            for (int b = 0; b < bps; ++b)
                bits[std::size_t(i * bps + b)] = std::uint8_t((label >> (bps - 1 - b)) & 1u);
        }
        return bits;
    }

    TFGrid isfft(const DDFrame &frame)
    {
        // X = F_M^H x F_N with unitary DFT matrices
        CMat X = frame.symbols;
        detail::idft_columns(X);
        detail::dft_rows(X);
        X /= std::sqrt(double(X.rows() * X.cols()));
        return {X};
    }

    DDFrame sfft(const TFGrid &grid)
    {
        CMat x = grid.samples;
        detail::dft_columns(x);
        detail::idft_rows(x);
        x /= std::sqrt(double(x.rows() * x.cols()));
        return {x, 1.0};
    }

    CVec vectorize(const DDFrame &frame)
    {
        return frame.symbols.reshaped();
    }

    DDFrame devectorize(const CVec &v, const GridParams &params)
    {
        if (v.size() != params.size())
            throw SizeError("devectorize expects length " + std::to_string(params.size()) + ", got " +
                            std::to_string(v.size()));
        return {v.reshaped(params.M(), params.N()), 1.0};
    }

    CVec tf_to_stream(const TFGrid &grid)
    {
        CMat S = grid.samples;
        detail::idft_columns(S);
        S /= std::sqrt(double(S.rows()));
        return S.reshaped();
    }

    TFGrid stream_to_tf(const CVec &stream, const GridParams &params)
    {
        if (stream.size() != params.size())
            throw SizeError("stream length " + std::to_string(stream.size()) + " does not match MN=" +
                            std::to_string(params.size()));
        CMat Y = stream.reshaped(params.M(), params.N());
        detail::dft_columns(Y);
        Y /= std::sqrt(double(params.M()));
        return {Y};
    }

    CVec dd_to_stream(const CVec &x_dd, const GridParams &params)
    {
        return tf_to_stream(isfft(devectorize(x_dd, params)));
    }

    CVec stream_to_dd(const CVec &s, const GridParams &params)
    {
        return vectorize(sfft(stream_to_tf(s, params)));
    }

    CMat stream_to_dd_columns(const CMat &A, const GridParams &params)
    {
        CMat out(A.rows(), A.cols());
        for (Eigen::Index c = 0; c < A.cols(); ++c)
            out.col(c) = stream_to_dd(A.col(c), params);
        return out;
    }

    CMat dd_to_stream_columns(const CMat &A, const GridParams &params)
    {
        CMat out(A.rows(), A.cols());
        for (Eigen::Index c = 0; c < A.cols(); ++c)
            out.col(c) = dd_to_stream(A.col(c), params);
        return out;
    }
}
