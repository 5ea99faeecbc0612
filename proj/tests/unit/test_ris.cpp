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

#include "otfsftn/ris.hpp"
#include "support.hpp"

using namespace otfsftn;
using ris::DdTap;

namespace
{
    dd::GridParams grid(int M, int N, double alpha) { return dd::GridParams::from_spacing(M, N, 15e3, alpha); }

    std::vector<std::vector<channel::CascadedPath>> random_elements(int Q, const dd::GridParams &p,
                                                                     std::mt19937_64 &rng)
    {
        const auto eva = channel::eva_profile();
        const double nu = channel::max_doppler(4e9, 120.0);
        std::vector<std::vector<channel::CascadedPath>> out;
        for (int q = 0; q < Q; ++q)
            out.push_back(channel::cascade(channel::sample_paths(eva, nu, p, rng), channel::sample_paths(eva, nu, p, rng), p));
        return out;
    }

    double tap_power(const std::vector<std::vector<DdTap>> &taps, const ris::RisState &state, int delay, int doppler)
    {
        cd sum = 0.0;
        for (int q = 0; q < state.size(); ++q)
            for (const auto &t : taps[std::size_t(q)])
                if (t.delay == delay && t.doppler == doppler)
                    sum += state.coefficient(q) * t.gain;
        return std::norm(sum);
    }
}

TEST_CASE("phase codebooks")
{
    CHECK(ris::phase_codebook(1).values() == std::vector<double>{0.0, pi});
    const auto two = ris::phase_codebook(2).values();
    REQUIRE(two.size() == 4);
    CHECK(two[1] == doctest::Approx(pi / 2));
    CHECK(two[3] == doctest::Approx(3 * pi / 2));
    const auto three = ris::phase_codebook(3).values();
    REQUIRE(three.size() == 8);
    for (int v = 0; v < 8; ++v)
        CHECK(three[std::size_t(v)] == doctest::Approx(2 * pi * v / 8));
    CHECK_THROWS_AS(ris::phase_codebook(0), ParameterError);
    CHECK_THROWS_AS(ris::phase_codebook(17), ParameterError);
}

TEST_CASE("phase quantization")
{
    const auto cb = ris::phase_codebook(3);
    CHECK(cb.quantize(0.3) == 0.0);
    CHECK(cb.quantize(0.5) == doctest::Approx(pi / 4));
    CHECK(cb.quantize(two_pi - 0.1) == 0.0);
    CHECK(cb.quantize(-0.5) == doctest::Approx(7 * pi / 4));
    CHECK(cb.quantize(4 * pi + pi / 4) == doctest::Approx(pi / 4));
    // exact midpoint between 0 and pi/2 on a 2-bit grid goes to the smaller phase
    CHECK(ris::phase_codebook(2).quantize(pi / 4) == 0.0);
}

TEST_CASE("combine_effective")
{
    std::mt19937_64 rng(1);
    std::vector<channel::ElementChannel> e;
    for (int q = 0; q < 4; ++q)
        e.push_back({q, {}, test::random_matrix(6, 6, rng)});

    auto one = ris::RisState::uniform(1, 3);
    CHECK(ris::combine_effective(std::span(e).first(1), one) == e[0].matrix);

    auto flip = ris::RisState::uniform(4, 1);
    std::fill(flip.phases.begin(), flip.phases.end(), pi);
    const CMat sum = e[0].matrix + e[1].matrix + e[2].matrix + e[3].matrix;
    CHECK(test::max_abs(ris::combine_effective(e, flip) + sum) < 1e-12);

    const auto rnd = ris::random_phases(4, ris::phase_codebook(3), rng);
    CMat expect = CMat::Zero(6, 6);
    for (int q = 0; q < 4; ++q)
        expect += std::polar(1.0, rnd.phases[std::size_t(q)]) * e[std::size_t(q)].matrix;
    CHECK(test::max_abs(ris::combine_effective(e, rnd) - expect) < 1e-12);

    CHECK_THROWS_AS(ris::combine_effective(e, one), SizeError);
}

TEST_CASE("assembling then phase-summing equals phase-summing then assembling")
{
    const auto p = grid(4, 4, 0.8);
    std::mt19937_64 rng(2);
    const auto g = pulse::pulse_autocorr(pulse::rrc_impulse(0.25, 8, 4, p.sample_period()));
    const auto isi = channel::IsiProfile::from(g, p);
    const auto paths = random_elements(3, p, rng);
    const auto state = ris::random_phases(3, ris::phase_codebook(3), rng);

    std::vector<channel::ElementChannel> elements;
    channel::Propagation merged(p);
    for (int q = 0; q < 3; ++q)
    {
        elements.push_back(channel::build_element_channel(paths[std::size_t(q)], p, isi, q));
        merged.add(paths[std::size_t(q)], state.coefficient(q));
    }
    CHECK(test::max_abs(ris::combine_effective(elements, state) - channel::time_channel_matrix(merged, isi)) < 1e-12);
}

TEST_CASE("tap extraction merges paths sharing a DD tap")
{
    const auto p = grid(4, 4, 1.0);
    channel::CascadedPath a, b, c;
    a.gain = 1.0;
    a.taps = {0, 1, 0.1};
    b.gain = cd(0.0, 2.0);
    b.taps = {1, 0, 0.0};
    c.gain = 0.5;
    c.taps = {0, 1, -0.2};
    const std::vector<channel::CascadedPath> paths{a, b, c};
    const auto taps = ris::element_taps(paths);
    REQUIRE(taps.size() == 2);
    CHECK(taps[0].gain == cd(1.5));
    CHECK(taps[1].gain == cd(0.0, 2.0));
    (void)p;
}

TEST_CASE("self-alignment and coherent sums")
{
    const auto cb = ris::phase_codebook(3);
    const std::vector<std::vector<DdTap>> single{{{0, 0, std::polar(0.7, 1.1)}}};
    const auto s = ris::optimize_phases(single, cb);
    CHECK(s.phases[0] == 0.0);
    CHECK(s.amplitudes[0] == 1.0);

    const double phi = 0.9;
    const std::vector<std::vector<DdTap>> pair{{{2, 1, std::polar(0.6, phi)}, {0, 0, 0.1}},
                                               {{2, 1, std::polar(0.3, -phi)}}};
    const auto theta = ris::alignment_angles(pair);
    const cd aligned = std::polar(1.0, theta[0]) * pair[0][0].gain + std::polar(1.0, theta[1]) * pair[1][0].gain;
    CHECK(std::abs(aligned) == doctest::Approx(0.9).epsilon(1e-12));

    const std::vector<std::vector<DdTap>> dead{{{0, 0, 0.0}}, {}};
    CHECK_THROWS_AS(ris::optimize_phases(dead, cb), DegenerateChannelError);
}

TEST_CASE("strongest tap ties go to the first tap")
{
    const std::vector<std::vector<DdTap>> taps{{{0, 1, 1.0}, {1, 0, cd(0.0, 1.0)}}};
    const auto key = ris::strongest_tap(taps, ris::RisState::uniform(1, 3));
    CHECK(key.delay == 0);
    CHECK(key.doppler == 1);
}

TEST_CASE("quantized alignment keeps cos(pi / 2^b) of the coherent maximum")
{
    const auto p = grid(16, 16, 0.8);
    std::mt19937_64 rng(3);
    for (int bits : {1, 2, 3})
    {
        const auto cb = ris::phase_codebook(bits);
        for (int trial = 0; trial < 100; ++trial)
        {
            const auto paths = random_elements(8, p, rng);
            std::vector<std::vector<DdTap>> taps;
            for (const auto &e : paths)
                taps.push_back(ris::element_taps(e));
            const auto key = ris::strongest_tap(taps, ris::RisState::uniform(8, bits));
            double coherent = 0.0;
            for (const auto &t : taps)
                for (const auto &d : t)
                    if (d.delay == key.delay && d.doppler == key.doppler)
                        coherent += std::abs(d.gain);
            const auto state = ris::optimize_phases(taps, cb);
            const double got = std::sqrt(tap_power(taps, state, key.delay, key.doppler));
            CHECK(got >= std::cos(pi / (1 << bits)) * coherent * (1 - 1e-12));
            for (double theta : state.phases)
                CHECK(std::find(cb.values().begin(), cb.values().end(), theta) != cb.values().end());
        }
    }
}

TEST_CASE("random phases")
{
    std::mt19937_64 rng(4);
    const auto cb = ris::phase_codebook(1);
    const auto s = ris::random_phases(100000, cb, rng);
    const double frac = double(std::count(s.phases.begin(), s.phases.end(), pi)) / 100000.0;
    CHECK(std::abs(frac - 0.5) < 0.02);

    const auto cb3 = ris::phase_codebook(3);
    const auto one = ris::random_phases(1, cb3, rng);
    CHECK(std::find(cb3.values().begin(), cb3.values().end(), one.phases[0]) != cb3.values().end());

    std::mt19937_64 a(99), b(99);
    CHECK(ris::random_phases(16, cb3, a).phases == ris::random_phases(16, cb3, b).phases);
}
