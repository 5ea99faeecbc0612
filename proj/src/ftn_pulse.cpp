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

#include "otfsftn/ftn_pulse.hpp"

#include <cmath>
#include <string>

namespace otfsftn::pulse
{
    double rrc_value(double t, double beta, double T)
    {
        const double x = t / T;
        const double root_T = std::sqrt(T);
        if (x == 0.0)
            return (1.0 - beta + 4.0 * beta / pi) / root_T;
        if (beta == 0.0)
            return std::sin(pi * x) / (pi * x) / root_T;
        const double q = 4.0 * beta * x;
        if (std::abs(1.0 - q * q) < 1e-10)
        {
            const double a = pi / (4.0 * beta);
            return beta / std::sqrt(2.0 * T) * ((1.0 + 2.0 / pi) * std::sin(a) + (1.0 - 2.0 / pi) * std::cos(a));
        }
        const double num = std::sin(pi * x * (1.0 - beta)) + q * std::cos(pi * x * (1.0 + beta));
        return num / (pi * x * (1.0 - q * q)) / root_T;
    }

    namespace
    {
        // Truncated, unnormalized pulse with the midpoint value on the edge
        double truncated(double t, double beta, double T, double support)
        {
            const double a = std::abs(t);
            const double tol = 1e-9 * T;
            if (a > support + tol)
                return 0.0;
            const double v = rrc_value(t, beta, T);
            return a >= support - tol ? 0.5 * v : v;
        }
    }

    Pulse::Pulse(double beta, int span, int oversample, double T)
        : beta_(beta), span_(span), oversample_(oversample), T_(T), scale_(1.0)
    {
        if (!(beta >= 0.0 && beta <= 1.0))
            throw ParameterError("rolloff must lie in [0, 1], got " + std::to_string(beta));
        if (span < 2)
            throw ParameterError("pulse span must be at least 2, got " + std::to_string(span));
        if (oversample < 2)
            throw ParameterError("oversample must be at least 2, got " + std::to_string(oversample));
        if (!(T > 0.0))
            throw ParameterError("pulse interval must be positive");

        const int half = span * oversample / 2;
        const double dt = T / oversample;
        taps_.resize(span * oversample + 1);
        for (int i = -half; i <= half; ++i)
            taps_(i + half) = truncated(i * dt, beta, T, support());
        scale_ = 1.0 / std::sqrt(taps_.squaredNorm() * dt);
        taps_ *= scale_;
    }

    double Pulse::operator()(double t) const
    {
        return scale_ * truncated(t, beta_, T_, support());
    }

    Pulse rrc_impulse(double beta, int span, int oversample, double T)
    {
        return {beta, span, oversample, T};
    }

    Autocorrelation Autocorrelation::ideal()
    {
        Autocorrelation a;
        a.ideal_ = true;
        a.samples_ = RVec::Ones(1);
        return a;
    }

    Autocorrelation::Autocorrelation(const Pulse &pulse, int resolution)
    {
        if (resolution < 2)
            throw ParameterError("autocorrelation resolution must be at least 2");
        const int half = pulse.span() * resolution / 2;
        step_ = pulse.T() / resolution;
        RVec p(2 * half + 1);
        for (int i = -half; i <= half; ++i)
            p(i + half) = pulse(i * step_);

        const Eigen::Index len = p.size();
        samples_.resize(len);
        for (Eigen::Index d = 0; d < len; ++d)
            samples_(d) = p.head(len - d).dot(p.tail(len - d));
        samples_ /= samples_(0);
    }

    double Autocorrelation::operator()(double lag) const
    {
        if (ideal_)
            return lag == 0.0 ? 1.0 : 0.0;
        const double pos = std::abs(lag) / step_;
        const auto last = Eigen::Index(samples_.size() - 1);
        const auto i0 = Eigen::Index(std::floor(pos));
        const double frac = pos - double(i0);
        if (i0 > last || (i0 == last && frac > 1e-9))
            return 0.0;
        if (i0 == last)
            return samples_(last);
        return (1.0 - frac) * samples_(i0) + frac * samples_(i0 + 1);
    }

    Autocorrelation pulse_autocorr(const Pulse &pulse, int resolution)
    {
        return {pulse, resolution};
    }

    GramMatrix::GramMatrix(const Autocorrelation &g, int size, double alpha, double T, double floor_ratio)
        : alpha_(alpha)
    {
        if (size < 1)
            throw ParameterError("Gram matrix size must be positive");
        if (!(alpha > 0.0) || alpha > 1.0)
            throw ParameterError("alpha must lie in (0, 1]");
        if (!(floor_ratio >= 0.0) || floor_ratio >= 1.0)
            throw ParameterError("eigenvalue floor ratio must lie in [0, 1)");

        first_row_.resize(size);
        for (int d = 0; d < size; ++d)
            first_row_(d) = g(d * alpha * T);

        toeplitz_.resize(size, size);
        for (int n = 0; n < size; ++n)
            for (int m = 0; m < size; ++m)
                toeplitz_(n, m) = first_row_(std::abs(n - m));

        Eigen::SelfAdjointEigenSolver<RMat> eig(toeplitz_);
        if (eig.info() != Eigen::Success)
            throw NumericalError("Gram eigendecomposition failed");
        eigenvalues_ = eig.eigenvalues();
        eigenvectors_ = eig.eigenvectors();
        const double floor = floor_ratio * eigenvalues_.maxCoeff();
        floored_ = eigenvalues_.minCoeff() < floor;
        if (floored_)
        {
            eigenvalues_ = eigenvalues_.cwiseMax(floor);
            conditioned_ = eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose();
            conditioned_ = 0.5 * (conditioned_ + conditioned_.transpose()).eval();
        }
        else
            conditioned_ = toeplitz_;

        Eigen::LLT<RMat> llt(conditioned_);
        if (llt.info() != Eigen::Success)
            throw NumericalError("Cholesky factorization of the conditioned Gram matrix failed (alpha=" +
                                 std::to_string(alpha) + ", min eigenvalue " +
                                 std::to_string(eigenvalues_.minCoeff()) + ")");
        cholesky_ = llt.matrixL();
        inverse_ = eigenvectors_ * eigenvalues_.cwiseInverse().asDiagonal() * eigenvectors_.transpose();
        inverse_ = 0.5 * (inverse_ + inverse_.transpose()).eval();
    }

    GramMatrix gram_matrix(const Pulse &pulse, int MN, double alpha)
    {
        return {pulse_autocorr(pulse), MN, alpha, pulse.T()};
    }

    GramMatrix gram_matrix(const Autocorrelation &g, int MN, double alpha, double T)
    {
        return {g, MN, alpha, T};
    }

    namespace
    {
        struct Filter
        {
            double dt;
            Eigen::Index half;
            RVec h;
        };

        Filter sampled_filter(const Pulse &pulse, double spacing)
        {
            Filter f;
            f.dt = spacing / pulse.oversample();
            f.half = Eigen::Index(std::floor(pulse.support() / f.dt + 1e-9));
            f.h.resize(2 * f.half + 1);
            for (Eigen::Index j = -f.half; j <= f.half; ++j)
                f.h(j + f.half) = pulse(double(j) * f.dt);
            return f;
        }

        void check_time_base(const Pulse &pulse, const dd::GridParams &params)
        {
            if (std::abs(pulse.T() - params.sample_period()) > 1e-9 * params.sample_period())
                throw ParameterError("pulse interval must equal T0 / M");
        }
    }

    TimeSignal synthesize(const CVec &stream, const Pulse &pulse, double spacing)
    {
        const Filter f = sampled_filter(pulse, spacing);
        const Eigen::Index ov = pulse.oversample();
        const Eigen::Index n = stream.size();
        TimeSignal out;
        out.sample_rate = 1.0 / f.dt;
        out.start_time = -double(f.half) * f.dt;
        out.frame_begin = f.half;
        out.frame_end = f.half + n * ov;
        out.samples = CVec::Zero(n == 0 ? 0 : (n - 1) * ov + 2 * f.half + 1);
        for (Eigen::Index a = 0; a < n; ++a)
        {
            if (stream(a) == cd(0.0))
                continue;
            out.samples.segment(a * ov, f.h.size()) += stream(a) * f.h.cast<cd>();
        }
        return out;
    }

    CVec matched_filter(const TimeSignal &signal, const Pulse &pulse, double spacing, Eigen::Index count)
    {
        const Filter f = sampled_filter(pulse, spacing);
        if (std::abs(signal.sample_rate * f.dt - 1.0) > 1e-9)
            throw SizeError("signal sample rate does not match oversample / spacing");
        const Eigen::Index ov = pulse.oversample();
        const auto offset = Eigen::Index(std::llround(-signal.start_time / f.dt));
        const Eigen::Index len = signal.samples.size();
        CVec r = CVec::Zero(count);
        for (Eigen::Index a = 0; a < count; ++a)
        {
            cd acc = 0.0;
            const Eigen::Index centre = offset + a * ov;
            for (Eigen::Index j = -f.half; j <= f.half; ++j)
            {
                const Eigen::Index i = centre + j;
                if (i >= 0 && i < len)
                    acc += signal.samples(i) * f.h(j + f.half);
            }
            r(a) = acc * f.dt;
        }
        return r;
    }

    TimeSignal heisenberg_modulate(const dd::TFGrid &grid, const Pulse &pulse, const dd::GridParams &params)
    {
        check_time_base(pulse, params);
        if (grid.samples.rows() != params.M() || grid.samples.cols() != params.N())
            throw SizeError("TF grid does not match the grid parameters");
        return synthesize(dd::tf_to_stream(grid), pulse, params.ftn_sample_period());
    }

    dd::TFGrid wigner_demodulate(const TimeSignal &signal, const Pulse &pulse, const dd::GridParams &params)
    {
        check_time_base(pulse, params);
        const Eigen::Index ov = pulse.oversample();
        const Eigen::Index needed = params.size() * ov;
        if (signal.frame_end - signal.frame_begin != needed)
            throw SizeError("signal covers " + std::to_string(signal.frame_end - signal.frame_begin) +
                            " frame samples, expected " + std::to_string(needed));
        return dd::stream_to_tf(matched_filter(signal, pulse, params.ftn_sample_period(), params.size()), params);
    }

    cd complex_normal(std::mt19937_64 &rng)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(0.5));
        const double re = n(rng);
        const double im = n(rng);
        return {re, im};
    }

    CVec colored_noise(double sigma2, const GramMatrix &G, std::mt19937_64 &rng)
    {
        if (sigma2 < 0.0)
            throw ParameterError("noise power must be nonnegative");
        const int n = G.size();
        CVec w(n);
        for (int i = 0; i < n; ++i)
            w(i) = complex_normal(rng);
        if (sigma2 == 0.0)
            return CVec::Zero(n);
        const auto L = G.cholesky().triangularView<Eigen::Lower>();
        const RVec re = L * w.real();
        const RVec im = L * w.imag();
        CVec z(n);
        z.real() = std::sqrt(sigma2) * re;
        z.imag() = std::sqrt(sigma2) * im;
        return z;
    }

    CVec noise_to_dd(const CVec &z, const dd::GridParams &params)
    {
        return dd::stream_to_dd(z, params);
    }

    CMat dd_covariance(const CMat &sigma, const dd::GridParams &params)
    {
        if (sigma.rows() != params.size() || sigma.cols() != params.size())
            throw SizeError("covariance does not match MN");
        const CMat left = dd::stream_to_dd_columns(sigma, params);
        return dd::stream_to_dd_columns(left.adjoint(), params);
    }
}
