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

#ifndef OTFSFTN_RIS_HPP
#define OTFSFTN_RIS_HPP

#include <random>
#include <span>
#include <vector>

#include "otfsftn/channel.hpp"
#include "otfsftn/common.hpp"

namespace otfsftn::ris
{
    class PhaseCodebook
    {
    public:
        explicit PhaseCodebook(int bits);

        int bits() const { return bits_; }
        const std::vector<double> &values() const { return values_; }

        // Nearest value on the circle, ties toward the smaller phase
        double quantize(double theta) const;

    private:
        int bits_;
        std::vector<double> values_;
    };

    PhaseCodebook phase_codebook(int bits);

    struct RisState
    {
        std::vector<double> amplitudes; // beta_q in [0, 1]
        std::vector<double> phases;     // theta_q in [0, 2 pi)
        int phase_bits = 0;

        int size() const { return int(phases.size()); }
        cd coefficient(int q) const { return std::polar(amplitudes[std::size_t(q)], phases[std::size_t(q)]); }
        std::vector<cd> coefficients() const;

        static RisState uniform(int Q, int phase_bits);
    };

    // H = sum_q beta_q exp(j theta_q) H_q
    CMat combine_effective(std::span<const channel::ElementChannel> elements, const RisState &state);

    // Distinct (delay, Doppler) tap of one element with the summed gain of the paths sharing it
    struct DdTap
    {
        int delay = 0;
        int doppler = 0;
        cd gain;
    };

    // Taps in order of first appearance
    std::vector<DdTap> element_taps(std::span<const channel::CascadedPath> paths);

    struct TapKey
    {
        int delay = 0;
        int doppler = 0;
        cd combined; // phase-weighted sum over elements
        friend bool operator==(const TapKey &a, const TapKey &b) { return a.delay == b.delay && a.doppler == b.doppler; }
    };

    // Strongest combined tap under the given state; ties go to the first tap in order of appearance
    TapKey strongest_tap(std::span<const std::vector<DdTap>> taps, const RisState &state);

    // Unquantized alignment angles theta_q = arg(h_tot) - arg(h_q) at the strongest tap of the zero-phase channel
    std::vector<double> alignment_angles(std::span<const std::vector<DdTap>> taps);

    RisState optimize_phases(std::span<const std::vector<DdTap>> taps, const PhaseCodebook &codebook);
    RisState optimize_phases(std::span<const channel::ElementChannel> elements, const PhaseCodebook &codebook);

    RisState random_phases(int Q, const PhaseCodebook &codebook, std::mt19937_64 &rng);
}

#endif
