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

#include "otfsftn/detect.hpp"

#include <bit>
#include <limits>
#include <string>

namespace otfsftn::detect
{
    DetectionContext::DetectionContext(CMat H, CMat sigma, dd::Codebook codebook, double Ex)
        : H_(std::move(H)), sigma_(std::move(sigma)), codebook_(std::move(codebook)), Ex_(Ex)
    {
        const Eigen::Index n = H_.rows();
        if (sigma_.rows() != n || sigma_.cols() != n)
            throw SizeError("noise covariance must be " + std::to_string(n) + "x" + std::to_string(n));
        if (!(Ex > 0.0))
            throw ParameterError("symbol energy must be positive");
        const double scale = sigma_.cwiseAbs().maxCoeff();
        if ((sigma_ - sigma_.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw ParameterError("noise covariance is not Hermitian");

        noise_.compute(sigma_);
        if (noise_.info() != Eigen::Success)
        {
            const double dmin = sigma_.diagonal().real().minCoeff();
            throw NumericalError("noise covariance is not positive definite (size " + std::to_string(n) +
                                 ", smallest diagonal " + std::to_string(dmin) + ")");
        }
        Hw_ = noise_.matrixL().solve(H_);
        CMat normal = Hw_.adjoint() * Hw_;
        normal.diagonal().array() += 1.0 / Ex_;
        regularized_.compute(normal);
        if (regularized_.info() != Eigen::Success)
            throw NumericalError("regularized normal matrix factorization failed");
    }

    CVec DetectionContext::whiten(const CVec &y) const
    {
        if (y.size() != H_.rows())
            throw SizeError("observation length does not match the channel");
        return noise_.matrixL().solve(y);
    }

    CVec lmmse_detect(const CVec &y, const DetectionContext &ctx)
    {
        return ctx.regularized().solve(ctx.whitened_channel().adjoint() * ctx.whiten(y));
    }

    CVec zf_detect(const CVec &y, const DetectionContext &ctx)
    {
        const CMat &Hw = ctx.whitened_channel();
        Eigen::LLT<CMat> normal(Hw.adjoint() * Hw);
        if (normal.info() != Eigen::Success)
            throw NumericalError("whitened channel is rank deficient");
        return normal.solve(Hw.adjoint() * ctx.whiten(y));
    }

    std::uint64_t FrameCodebook::checked_size(int MN, const dd::Codebook &codebook, std::uint64_t cap)
    {
        if (MN < 1)
            throw ParameterError("frame size must be positive");
        const unsigned bits = unsigned(codebook.bits_per_symbol()) * unsigned(MN);
        if (bits >= 63 || (std::uint64_t(1) << bits) > cap)
            throw CapacityError("frame codebook has 2^" + std::to_string(bits) + " hypotheses, above the cap of " +
                                std::to_string(cap) + "; reduce M, N or the constellation order");
        return std::uint64_t(1) << bits;
    }

    FrameCodebook::FrameCodebook(int MN, const dd::Codebook &codebook, std::uint64_t cap)
    {
        const std::uint64_t count = checked_size(MN, codebook, cap);
        const auto order = std::uint64_t(codebook.order());
        words_.resize(MN, Eigen::Index(count));
        for (std::uint64_t i = 0; i < count; ++i)
        {
            std::uint64_t rest = i;
            for (int a = 0; a < MN; ++a)
            {
                words_(a, Eigen::Index(i)) = codebook.point(int(rest % order));
                rest /= order;
            }
        }
    }

    MlDecision ml_detect(const CVec &y, const DetectionContext &ctx, const FrameCodebook &frames)
    {
        if (frames.words().rows() != ctx.size())
            throw SizeError("frame codebook does not match the channel size");
        const CVec yw = ctx.whiten(y);
        const CMat residual = (ctx.whitened_channel() * frames.words()).colwise() - yw;
        const Eigen::VectorXd metric = residual.colwise().squaredNorm().transpose();
        MlDecision best;
        best.metric = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < metric.size(); ++i)
            if (metric(i) < best.metric)
            {
                best.metric = metric(i);
                best.index = std::uint64_t(i);
            }
        best.symbols = frames.word(best.index);
        return best;
    }

    MlDecision ml_detect(const CVec &y, const DetectionContext &ctx, std::uint64_t cap)
    {
        return ml_detect(y, ctx, FrameCodebook(int(ctx.size()), ctx.codebook(), cap));
    }

    ErrorCount count_errors(const CVec &x_hat, const CVec &x, const dd::Codebook &codebook)
    {
        if (x_hat.size() != x.size())
            throw SizeError("symbol vectors differ in length");
        ErrorCount e;
        for (Eigen::Index i = 0; i < x.size(); ++i)
        {
            const unsigned a = unsigned(codebook.nearest(x_hat(i)));
            const unsigned b = unsigned(codebook.nearest(x(i)));
            if (a != b)
            {
                ++e.symbol_errors;
                e.bit_errors += std::popcount(a ^ b);
            }
        }
        e.frame_error = e.bit_errors > 0 ? 1 : 0;
        return e;
    }
}
