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

#ifndef OTFSFTN_DETECT_HPP
#define OTFSFTN_DETECT_HPP

#include <cstdint>

#include "otfsftn/common.hpp"
#include "otfsftn/dd_core.hpp"

namespace otfsftn::detect
{
    inline constexpr std::uint64_t default_ml_cap = 4096;

    // Channel, noise covariance and prior with the whitening factorizations done once.
    // Immutable after construction, shareable across threads.
    class DetectionContext
    {
    public:
        DetectionContext(CMat H, CMat sigma, dd::Codebook codebook, double Ex = 1.0);

        const CMat &H() const { return H_; }
        const CMat &sigma() const { return sigma_; }
        const dd::Codebook &codebook() const { return codebook_; }
        double Ex() const { return Ex_; }
        Eigen::Index size() const { return H_.cols(); }

        // L^-1 H and L^-1 y with Sigma = L L^H
        const CMat &whitened_channel() const { return Hw_; }
        CVec whiten(const CVec &y) const;

        // Hw^H Hw + I / Ex
        const Eigen::LLT<CMat> &regularized() const { return regularized_; }

    private:
        CMat H_, sigma_;
        dd::Codebook codebook_;
        double Ex_;
        Eigen::LLT<CMat> noise_;
        CMat Hw_;
        Eigen::LLT<CMat> regularized_;
    };

    // x = (H^H Sigma^-1 H + I / Ex)^-1 H^H Sigma^-1 y
    CVec lmmse_detect(const CVec &y, const DetectionContext &ctx);

    // Unregularized whitened least squares
    CVec zf_detect(const CVec &y, const DetectionContext &ctx);

    // All M_QAM^MN frame hypotheses. Symbol a of hypothesis i is digit a (least significant first)
    // of i in base M_QAM, mapped through the codebook labels.
    class FrameCodebook
    {
    public:
        FrameCodebook(int MN, const dd::Codebook &codebook, std::uint64_t cap = default_ml_cap);

        std::uint64_t size() const { return std::uint64_t(words_.cols()); }
        const CMat &words() const { return words_; }
        CVec word(std::uint64_t index) const { return words_.col(Eigen::Index(index)); }

        // Codebook size or a capacity error naming the limit
        static std::uint64_t checked_size(int MN, const dd::Codebook &codebook, std::uint64_t cap);

    private:
        CMat words_;
    };

    struct MlDecision
    {
        std::uint64_t index = 0;
        CVec symbols;
        double metric = 0.0;
    };

    // argmin (y - Hx)^H Sigma^-1 (y - Hx), ties toward the lower index
    MlDecision ml_detect(const CVec &y, const DetectionContext &ctx, const FrameCodebook &frames);
    MlDecision ml_detect(const CVec &y, const DetectionContext &ctx, std::uint64_t cap = default_ml_cap);

    struct ErrorCount
    {
        long bit_errors = 0;
        long symbol_errors = 0;
        int frame_error = 0;
    };

    ErrorCount count_errors(const CVec &x_hat, const CVec &x, const dd::Codebook &codebook);
}

#endif
