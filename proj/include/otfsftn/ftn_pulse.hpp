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

#ifndef OTFSFTN_FTN_PULSE_HPP
#define OTFSFTN_FTN_PULSE_HPP

#include <random>

#include "otfsftn/common.hpp"
#include "otfsftn/dd_core.hpp"

namespace otfsftn::pulse
{
    // Closed-form root raised cosine, not normalized. Removable singularities use their limits.
    double rrc_value(double t, double beta, double T);

    // Truncated RRC with unit energy. Support is [-span*T/2, span*T/2]; the pulse takes half its
    // value exactly on the truncation edge.
    class Pulse
    {
    public:
        Pulse(double beta, int span, int oversample, double T);

        double beta() const { return beta_; }
        int span() const { return span_; }
        int oversample() const { return oversample_; }
        double T() const { return T_; }
        double support() const { return 0.5 * span_ * T_; }

        // span * oversample + 1 samples at spacing T / oversample, unit energy
        const RVec &taps() const { return taps_; }

        // Energy normalization applied to rrc_value
        double scale() const { return scale_; }

        double operator()(double t) const;

    private:
        double beta_;
        int span_, oversample_;
        double T_;
        double scale_;
        RVec taps_;
    };

    Pulse rrc_impulse(double beta, int span, int oversample, double T);

    // Sampled autocorrelation g = g_tx * g_rx, normalized to g(0) = 1, with linear interpolation.
    class Autocorrelation
    {
    public:
        // Kronecker delta: g(0) = 1, zero at every other lag
        static Autocorrelation ideal();

        // Discrete correlation of the pulse sampled at resolution points per T
        Autocorrelation(const Pulse &pulse, int resolution);

        double operator()(double lag) const;
        bool is_ideal() const { return ideal_; }
        // Largest |lag| with a nonzero value
        double reach() const { return ideal_ ? 0.0 : step_ * double(samples_.size() - 1); }
        double step() const { return step_; }
        // Nonnegative lags, samples_[i] = g(i * step)
        const RVec &samples() const { return samples_; }

    private:
        Autocorrelation() = default;
        bool ideal_ = false;
        double step_ = 0.0;
        RVec samples_;
    };

    inline constexpr int default_autocorr_resolution = 256;

    Autocorrelation pulse_autocorr(const Pulse &pulse, int resolution = default_autocorr_resolution);

    // Symmetric Toeplitz Gram matrix G[n,m] = g((n-m) alpha T) and its positive definite conditioning.
    class GramMatrix
    {
    public:
        GramMatrix(const Autocorrelation &g, int size, double alpha, double T,
                   double floor_ratio = default_floor_ratio);

        int size() const { return int(first_row_.size()); }
        double alpha() const { return alpha_; }
        const RVec &first_row() const { return first_row_; }

        // Exact Toeplitz realization
        const RMat &toeplitz() const { return toeplitz_; }
        // Eigenvalues floored at floor_ratio * largest; equals toeplitz() when no floor was needed
        const RMat &conditioned() const { return conditioned_; }
        bool floored() const { return floored_; }
        // Ascending eigenvalues and eigenvectors of conditioned()
        const RVec &eigenvalues() const { return eigenvalues_; }
        const RMat &eigenvectors() const { return eigenvectors_; }
        // Lower Cholesky factor and inverse of conditioned()
        const RMat &cholesky() const { return cholesky_; }
        const RMat &inverse() const { return inverse_; }

        static constexpr double default_floor_ratio = 1e-8;

    private:
        double alpha_;
        bool floored_ = false;
        RVec first_row_;
        RMat toeplitz_, conditioned_, eigenvectors_, cholesky_, inverse_;
        RVec eigenvalues_;
    };

    GramMatrix gram_matrix(const Pulse &pulse, int MN, double alpha);
    GramMatrix gram_matrix(const Autocorrelation &g, int MN, double alpha, double T);

    // Oversampled waveform. Sample i sits at start_time + i / sample_rate.
    // [frame_begin, frame_end) covers the frame interval [0, MN * alpha * T), excluding filter tails.
    struct TimeSignal
    {
        CVec samples;
        double sample_rate = 0.0;
        double start_time = 0.0;
        Eigen::Index frame_begin = 0;
        Eigen::Index frame_end = 0;

        double duration() const { return double(samples.size()) / sample_rate; }
    };

    // s(t) = sum_a stream[a] g_tx(t - a * spacing), sampled at oversample / spacing
    TimeSignal synthesize(const CVec &stream, const Pulse &pulse, double spacing);

    // Matched filter output sampled at t = a * spacing, a = 0..count-1 (trapezoidal quadrature)
    CVec matched_filter(const TimeSignal &signal, const Pulse &pulse, double spacing, Eigen::Index count);

    // Per-slot multicarrier synthesis of the TF grid, symbols spaced alpha * T0 / M apart.
    // The pulse interval must equal T0 / M.
    TimeSignal heisenberg_modulate(const dd::TFGrid &grid, const Pulse &pulse, const dd::GridParams &params);
    dd::TFGrid wigner_demodulate(const TimeSignal &signal, const Pulse &pulse, const dd::GridParams &params);

    // Circular complex Gaussian with unit variance
    cd complex_normal(std::mt19937_64 &rng);

    // z = sigma * L * w with L the Cholesky factor of the conditioned Gram matrix
    CVec colored_noise(double sigma2, const GramMatrix &G, std::mt19937_64 &rng);

    // Time stream to DD domain, the unitary Kronecker DFT pair of the vectorization order
    CVec noise_to_dd(const CVec &z, const dd::GridParams &params);
    // A * Sigma * A^H for the same map and Hermitian Sigma
    CMat dd_covariance(const CMat &sigma, const dd::GridParams &params);
}

#endif
