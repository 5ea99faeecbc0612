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

#ifndef OTFSFTN_DD_CORE_HPP
#define OTFSFTN_DD_CORE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "otfsftn/common.hpp"

namespace otfsftn::dd
{
    // Grid geometry. T_F = alpha * T0 is derived, never stored.
    class GridParams
    {
    public:
        GridParams(int M, int N, double delta_f, double T0, double alpha);

        // T0 defaults to the OTFS symbol duration 1/delta_f
        static GridParams from_spacing(int M, int N, double delta_f, double alpha);

        int M() const { return M_; }
        int N() const { return N_; }
        int size() const { return M_ * N_; }
        double delta_f() const { return delta_f_; }
        double T0() const { return T0_; }
        double alpha() const { return alpha_; }
        double T_F() const { return alpha_ * T0_; }

        // Nyquist spacing of the serialized time stream, T0 / M
        double sample_period() const { return T0_ / M_; }
        // FTN spacing of the serialized time stream, T_F / M
        double ftn_sample_period() const { return alpha_ * T0_ / M_; }

        GridParams with_alpha(double alpha) const { return {M_, N_, delta_f_, T0_, alpha}; }

    private:
        int M_, N_;
        double delta_f_, T0_, alpha_;
    };

    struct DDFrame
    {
        CMat symbols;    // M x N, x[l,k]
        double Ex = 1.0; // average symbol energy
    };

    struct TFGrid
    {
        CMat samples; // M x N, X[m,n]
    };

    // Square QAM (or BPSK) with Gray labelling. points[label] is the symbol carrying that bit label.
    class Codebook
    {
    public:
        explicit Codebook(int order);

        int order() const { return order_; }
        int bits_per_symbol() const { return bits_; }
        const std::vector<cd> &points() const { return points_; }
        cd point(int label) const { return points_[label]; }

        // Nearest point, ties toward the lowest label
        int nearest(cd z) const;

    private:
        int order_;
        int bits_;
        std::vector<cd> points_;
    };

    DDFrame qam_map(std::span<const std::uint8_t> bits, const Codebook &codebook, const GridParams &params);
    std::vector<std::uint8_t> qam_demap(const DDFrame &frame, const Codebook &codebook);

    TFGrid isfft(const DDFrame &frame);
    DDFrame sfft(const TFGrid &grid);

    CVec vectorize(const DDFrame &frame);
    DDFrame devectorize(const CVec &v, const GridParams &params);

    // Discrete Heisenberg and Wigner maps on the serialized stream of length MN.
    // Slot n occupies samples [nM, nM + M); each slot is a unitary M-point IDFT (DFT) of column n.
    CVec tf_to_stream(const TFGrid &grid);
    TFGrid stream_to_tf(const CVec &stream, const GridParams &params);

    // dd_to_stream = tf_to_stream(isfft(.)), stream_to_dd its inverse; both unitary.
    CVec dd_to_stream(const CVec &x_dd, const GridParams &params);
    CVec stream_to_dd(const CVec &s, const GridParams &params);

    // Applies stream_to_dd to every column of A
    CMat stream_to_dd_columns(const CMat &A, const GridParams &params);
    CMat dd_to_stream_columns(const CMat &A, const GridParams &params);
}

#endif
