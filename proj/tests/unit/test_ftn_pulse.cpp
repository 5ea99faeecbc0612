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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "otfsftn/ftn_pulse.hpp"
#include "support.hpp"

using namespace otfsftn;
using pulse::Pulse;

namespace
{
    // Textbook RRC, evaluated away from its removable singularities
    double textbook_rrc(double t, double beta, double T)
    {
        const double x = t / T;
        return (std::sin(pi * x * (1 - beta)) + 4 * beta * x * std::cos(pi * x * (1 + beta))) /
               (pi * x * (1 - 16 * beta * beta * x * x)) / std::sqrt(T);
    }

    // Composite Simpson rule for the normalized autocorrelation of the truncated RRC at lag tau
    double quadrature_autocorr(double tau, double beta, double span)
    {
        auto f = [&](double t)
        {
            const double a = std::abs(t) <= span / 2 ? pulse::rrc_value(t, beta, 1.0) : 0.0;
            const double b = std::abs(t - tau) <= span / 2 ? pulse::rrc_value(t - tau, beta, 1.0) : 0.0;
            return a * b;
        };
        auto simpson = [&](double lo, double hi, auto &&fn)
        {
            const int n = 40000;
            const double h = (hi - lo) / n;
            double s = fn(lo) + fn(hi);
            for (int i = 1; i < n; ++i)
                s += (i % 2 ? 4.0 : 2.0) * fn(lo + i * h);
            return s * h / 3.0;
        };
        const double energy = simpson(-span / 2, span / 2, [&](double t)
                                      { double v = pulse::rrc_value(t, beta, 1.0); return v * v; });
        return simpson(tau - span / 2, span / 2, f) / energy;
    }

    dd::GridParams grid(int M, int N, double alpha) { return dd::GridParams(M, N, 15e3, 1.0 / 15e3, alpha); }
}

TEST_CASE("rrc_impulse validates its parameters")
{
    CHECK_THROWS_AS(pulse::rrc_impulse(-0.1, 8, 4, 1.0), ParameterError);
    CHECK_THROWS_AS(pulse::rrc_impulse(1.1, 8, 4, 1.0), ParameterError);
    CHECK_THROWS_AS(pulse::rrc_impulse(0.25, 1, 4, 1.0), ParameterError);
    CHECK_THROWS_AS(pulse::rrc_impulse(0.25, 8, 1, 1.0), ParameterError);
}

TEST_CASE("closed form matches the textbook formula and its limits")
{
    const double beta = 0.25, T = 2e-6;
    for (double x : {0.13, 0.7, 1.5, 2.31, 3.9})
        CHECK(pulse::rrc_value(x * T, beta, T) == doctest::Approx(textbook_rrc(x * T, beta, T)).epsilon(1e-12));
    CHECK(pulse::rrc_value(0.0, beta, T) == doctest::Approx((1 - beta + 4 * beta / pi) / std::sqrt(T)));
    // continuity across t = T / (4 beta)
    const double ts = T / (4 * beta);
    CHECK(pulse::rrc_value(ts, beta, T) == doctest::Approx(textbook_rrc(ts * (1 + 1e-9), beta, T)).epsilon(1e-6));
    CHECK(pulse::rrc_value(-ts, beta, T) == doctest::Approx(textbook_rrc(-ts * (1 - 1e-9), beta, T)).epsilon(1e-6));
}

TEST_CASE("taps are symmetric, unit energy and sized span * oversample + 1")
{
    const Pulse p = pulse::rrc_impulse(0.25, 8, 4, 1.0);
    REQUIRE(p.taps().size() == 33);
    for (Eigen::Index k = 0; k < p.taps().size(); ++k)
        CHECK(p.taps()(k) == p.taps()(p.taps().size() - 1 - k));
    CHECK(p.taps().squaredNorm() * p.T() / p.oversample() == doctest::Approx(1.0).epsilon(1e-12));
    // centre tap before normalization is the analytic limit
    CHECK(p.taps()(16) / p.scale() == doctest::Approx(1 - 0.25 + 1.0 / pi));
    // midpoint convention on the truncation edge
    CHECK(p.taps()(0) == doctest::Approx(0.5 * p.scale() * pulse::rrc_value(-4.0, 0.25, 1.0)));
    CHECK(p(4.01) == 0.0);
}

TEST_CASE("beta = 0 gives a sinc with zero crossings at multiples of T")
{
    const Pulse p = pulse::rrc_impulse(0.0, 32, 4, 1.0);
    CHECK(std::abs(p.taps()(64 + 4)) < 1e-15);
    CHECK(std::abs(p(2.0)) < 1e-15);
}

TEST_CASE("autocorrelation against independent quadrature")
{
    const Pulse p = pulse::rrc_impulse(0.25, 8, 4, 1.0);
    const auto g = pulse::pulse_autocorr(p);
    CHECK(g(0.0) == 1.0);

    const double g08 = g(0.8);
    CHECK(g08 > 0.0);
    CHECK(std::abs(g08 - quadrature_autocorr(0.8, 0.25, 8)) < 1e-4);
    CHECK(std::abs(g08 - 0.226232) < 1e-4);
    CHECK(std::abs(g(1.6) - quadrature_autocorr(1.6, 0.25, 8)) < 1e-4);

    // Nyquist lags: truncation leaves residual ISI. Lags 1..3 stay below 1e-3; lag 4 (half the
    // span) picks up the main lobe against the cut tail and sits near -7.3e-3.
    for (int k = 1; k <= 3; ++k)
        CHECK(std::abs(g(double(k))) < 1e-3);
    CHECK(std::abs(g(4.0) - quadrature_autocorr(4.0, 0.25, 8)) < 1e-4);
    CHECK(std::abs(g(4.0)) > 1e-3);

    // symmetric and zero past twice the support
    CHECK(g(-1.3) == g(1.3));
    CHECK(g(8.5) == 0.0);

    const auto ideal = pulse::Autocorrelation::ideal();
    CHECK(ideal(0.0) == 1.0);
    CHECK(ideal(1e-9) == 0.0);
}

TEST_CASE("Gram matrix structure")
{
    const Pulse p = pulse::rrc_impulse(0.25, 8, 4, 1.0);
    const auto g = pulse::pulse_autocorr(p);

    const auto G2 = pulse::gram_matrix(p, 2, 0.8);
    CHECK(G2.toeplitz()(0, 0) == 1.0);
    CHECK(G2.toeplitz()(1, 1) == 1.0);
    CHECK(G2.toeplitz()(0, 1) == g(0.8));
    CHECK(G2.toeplitz()(1, 0) == g(0.8));

    const auto G = pulse::gram_matrix(p, 64, 0.7);
    for (int n = 0; n + 1 < 64; ++n)
        for (int m = 0; m + 1 < 64; ++m)
            CHECK(G.toeplitz()(n, m) == G.toeplitz()(n + 1, m + 1));
    CHECK(G.toeplitz() == G.toeplitz().transpose());

    // alpha = 1: off-diagonal residue is the truncation ISI at half the span
    const auto G1 = pulse::gram_matrix(p, 64, 1.0);
    const double residue = (G1.toeplitz() - RMat::Identity(64, 64)).cwiseAbs().maxCoeff();
    CHECK(residue == doctest::Approx(std::abs(quadrature_autocorr(4.0, 0.25, 8))).epsilon(1e-2));
}

TEST_CASE("conditioned Gram matrices are positive definite")
{
    const Pulse p = pulse::rrc_impulse(0.25, 8, 4, 1.0);
    const auto g = pulse::pulse_autocorr(p);
    for (double alpha : {0.7, 0.8, 0.9, 1.0})
        for (int n : {16, 256, 1024})
        {
            const pulse::GramMatrix G(g, n, alpha, 1.0);
            Eigen::SelfAdjointEigenSolver<RMat> eig(G.conditioned(), Eigen::EigenvaluesOnly);
            CHECK(eig.eigenvalues().minCoeff() > 0.0);
            CHECK((G.cholesky() * G.cholesky().transpose() - G.conditioned()).cwiseAbs().maxCoeff() < 1e-9);
            if (!G.floored())
                CHECK(G.conditioned() == G.toeplitz());
        }
    // a raised floor lifts the small eigenvalues and leaves the Toeplitz realization untouched
    const pulse::GramMatrix lifted(g, 256, 0.7, 1.0, 1e-3);
    CHECK(lifted.floored());
    CHECK(lifted.eigenvalues().minCoeff() >= 1e-3 * lifted.eigenvalues().maxCoeff() * (1 - 1e-12));
    CHECK(lifted.toeplitz() == pulse::GramMatrix(g, 256, 0.7, 1.0).toeplitz());
    CHECK((lifted.conditioned() * lifted.inverse() - RMat::Identity(256, 256)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("Heisenberg modulation")
{
    const auto params = grid(4, 2, 1.0);
    const Pulse p = pulse::rrc_impulse(0.25, 8, 4, params.sample_period());

    const auto zero = pulse::heisenberg_modulate({CMat::Zero(4, 2)}, p, params);
    CHECK(zero.samples.isZero());

    // M = N = 1: a single symbol produces the bare pulse
    const auto one = grid(1, 1, 0.8);
    const Pulse p1 = pulse::rrc_impulse(0.25, 8, 4, one.sample_period());
    const auto s1 = pulse::heisenberg_modulate({CMat::Ones(1, 1)}, p1, one);
    for (Eigen::Index i = 0; i < s1.samples.size(); ++i)
        CHECK(std::abs(s1.samples(i) - p1(s1.start_time + double(i) / s1.sample_rate)) < 1e-12);

    // general M: X[0,0] = 1 spreads over the first slot as (1/sqrt(M)) sum_a g(t - a alpha T)
    CMat X = CMat::Zero(4, 2);
    X(0, 0) = 1.0;
    const auto s = pulse::heisenberg_modulate({X}, p, params);
    for (Eigen::Index i = 0; i < s.samples.size(); ++i)
    {
        const double t = s.start_time + double(i) / s.sample_rate;
        double expect = 0.0;
        for (int a = 0; a < 4; ++a)
            expect += p(t - a * params.ftn_sample_period()) / 2.0;
        CHECK(std::abs(s.samples(i) - expect) < 1e-12);
    }

    CHECK_THROWS_AS(pulse::heisenberg_modulate({X}, pulse::rrc_impulse(0.25, 8, 4, 1.0), params), ParameterError);
}

TEST_CASE("energy and loopback at alpha = 1")
{
    std::mt19937_64 rng(7);
    const auto params = grid(8, 4, 1.0);
    const Pulse p = pulse::rrc_impulse(0.25, 8, 4, params.sample_period());
    const dd::TFGrid X{test::random_matrix(8, 4, rng)};
    const auto s = pulse::heisenberg_modulate(X, p, params);
    const double energy = s.samples.squaredNorm() / s.sample_rate;
    CHECK(energy == doctest::Approx(X.samples.squaredNorm()).epsilon(0.01));

    const auto zero = pulse::wigner_demodulate(pulse::heisenberg_modulate({CMat::Zero(8, 4)}, p, params), p, params);
    CHECK(zero.samples.isZero());

    // Impulse grid: recovery error is bounded by the residual ISI of the truncated pulse
    const auto g = pulse::pulse_autocorr(p);
    double isi = 0.0;
    for (int k = 1; k <= 8; ++k)
        isi += 2.0 * std::abs(g(k * params.sample_period()));
    CMat impulse = CMat::Zero(8, 4);
    impulse(0, 0) = 1.0;
    const auto back = pulse::wigner_demodulate(pulse::heisenberg_modulate({impulse}, p, params), p, params);
    CHECK(test::max_abs(back.samples - impulse) < isi);

    // FTN loopback equals the Gram-weighted mixture of the stream
    const auto G = pulse::gram_matrix(p, params.size(), 1.0);
    const CVec expected = G.toeplitz().cast<cd>() * dd::tf_to_stream(X);
    const CVec got = dd::tf_to_stream(pulse::wigner_demodulate(s, p, params));
    CHECK(test::max_abs(got - expected) < 1e-3);
}

TEST_CASE("loopback at alpha = 0.8 follows the Gram matrix")
{
    std::mt19937_64 rng(9);
    const auto params = grid(8, 4, 0.8);
    const Pulse p = pulse::rrc_impulse(0.25, 8, 4, params.sample_period());
    const auto G = pulse::gram_matrix(p, params.size(), 0.8);
    const dd::TFGrid X{test::random_matrix(8, 4, rng)};
    const CVec stream = dd::tf_to_stream(X);
    const auto s = pulse::heisenberg_modulate(X, p, params);
    const CVec got = dd::tf_to_stream(pulse::wigner_demodulate(s, p, params));
    CHECK(test::max_abs(got - G.toeplitz().cast<cd>() * stream) < 1e-3);

    pulse::TimeSignal shortened = s;
    shortened.frame_end -= 1;
    CHECK_THROWS_AS(pulse::wigner_demodulate(shortened, p, params), SizeError);
}

TEST_CASE("colored noise covariance")
{
    std::mt19937_64 rng(13);
    const auto ideal = pulse::GramMatrix(pulse::Autocorrelation::ideal(), 4, 1.0, 1.0);
    CHECK(pulse::colored_noise(0.0, ideal, rng).isZero());

    const int draws = 100000;
    const double sigma2 = 0.5;
    CMat C = CMat::Zero(4, 4);
    for (int i = 0; i < draws; ++i)
    {
        const CVec z = pulse::colored_noise(sigma2, ideal, rng);
        C += z * z.adjoint();
    }
    C /= double(draws);
    CHECK(test::max_abs(C - sigma2 * CMat::Identity(4, 4)) < 0.05 * sigma2);

    const Pulse p = pulse::rrc_impulse(0.25, 8, 4, 1.0);
    const auto G = pulse::gram_matrix(p, 16, 0.8);
    CMat S = CMat::Zero(16, 16);
    for (int i = 0; i < draws; ++i)
    {
        const CVec z = pulse::colored_noise(sigma2, G, rng);
        S += z * z.adjoint();
    }
    S /= double(draws);
    for (int n = 0; n < 16; ++n)
        for (int m = 0; m < 16; ++m)
            CHECK(std::abs(S(n, m) - sigma2 * G.toeplitz()(n, m)) < 0.05 * sigma2);
}

TEST_CASE("noise_to_dd is the unitary Kronecker map")
{
    std::mt19937_64 rng(19);
    const auto params = grid(2, 2, 0.8);
    const CMat F = test::dft_matrix(2);
    const CMat A = Eigen::kroneckerProduct(F.adjoint(), (F * F).eval());
    const CVec z = test::random_vector(4, rng);
    CHECK(test::max_abs(pulse::noise_to_dd(z, params) - A * z) < 1e-12);

    const auto big = grid(16, 8, 0.8);
    const CVec w = test::random_vector(128, rng);
    CHECK(std::abs(pulse::noise_to_dd(w, big).norm() - w.norm()) < 1e-10 * w.norm());
    CHECK(test::max_abs(pulse::dd_covariance(CMat::Identity(128, 128) * 2.0, big) -
                        2.0 * CMat::Identity(128, 128)) < 1e-12);

    const CMat sigma = test::random_hpd(4, rng);
    CHECK(test::max_abs(pulse::dd_covariance(sigma, params) - A * sigma * A.adjoint()) < 1e-12);
}
