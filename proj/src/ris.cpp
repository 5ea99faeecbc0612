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

#include "otfsftn/ris.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace otfsftn::ris
{
    PhaseCodebook::PhaseCodebook(int bits) : bits_(bits)
    {
        if (bits < 1 || bits > 16)
            throw ParameterError("phase resolution must be 1..16 bits, got " + std::to_string(bits));
        const int count = 1 << bits;
        values_.resize(std::size_t(count));
        for (int v = 0; v < count; ++v)
            values_[std::size_t(v)] = two_pi * v / count;
    }

    double PhaseCodebook::quantize(double theta) const
    {
        double t = std::fmod(theta, two_pi);
        if (t < 0.0)
            t += two_pi;
        double best = values_.front();
        double best_d = two_pi;
        for (double v : values_)
        {
            double d = std::abs(t - v);
            d = std::min(d, two_pi - d);
            if (d < best_d)
            {
                best_d = d;
                best = v;
            }
        }
        return best;
    }

    PhaseCodebook phase_codebook(int bits)
    {
        return PhaseCodebook(bits);
    }

    std::vector<cd> RisState::coefficients() const
    {
        std::vector<cd> c(phases.size());
        for (int q = 0; q < size(); ++q)
            c[std::size_t(q)] = coefficient(q);
        return c;
    }

    RisState RisState::uniform(int Q, int phase_bits)
    {
        if (Q < 1)
            throw ParameterError("RIS needs at least one element");
        return {std::vector<double>(std::size_t(Q), 1.0), std::vector<double>(std::size_t(Q), 0.0), phase_bits};
    }

    CMat combine_effective(std::span<const channel::ElementChannel> elements, const RisState &state)
    {
        if (elements.empty() || int(elements.size()) != state.size())
            throw SizeError("RIS state size does not match the element count");
        const auto n = elements.front().matrix.rows();
        CMat H = CMat::Zero(n, n);
        for (int q = 0; q < state.size(); ++q)
        {
            const CMat &Hq = elements[std::size_t(q)].matrix;
            if (Hq.rows() != n || Hq.cols() != n)
                throw SizeError("element channels differ in size");
            H += state.coefficient(q) * Hq;
        }
        return H;
    }

    std::vector<DdTap> element_taps(std::span<const channel::CascadedPath> paths)
    {
        std::vector<DdTap> taps;
        for (const auto &p : paths)
        {
            auto it = std::find_if(taps.begin(), taps.end(), [&](const DdTap &t)
                                   { return t.delay == p.taps.delay && t.doppler == p.taps.doppler; });
            if (it == taps.end())
                taps.push_back({p.taps.delay, p.taps.doppler, p.gain});
            else
                it->gain += p.gain;
        }
        return taps;
    }

    namespace
    {
        std::vector<TapKey> combined_taps(std::span<const std::vector<DdTap>> taps, const RisState &state)
        {
            if (int(taps.size()) != state.size())
                throw SizeError("RIS state size does not match the element count");
            std::vector<TapKey> keys;
            for (int q = 0; q < state.size(); ++q)
            {
                const cd phi = state.coefficient(q);
                for (const auto &t : taps[std::size_t(q)])
                {
                    auto it = std::find_if(keys.begin(), keys.end(), [&](const TapKey &k)
                                           { return k.delay == t.delay && k.doppler == t.doppler; });
                    if (it == keys.end())
                        keys.push_back({t.delay, t.doppler, phi * t.gain});
                    else
                        it->combined += phi * t.gain;
                }
            }
            return keys;
        }

        cd element_gain(const std::vector<DdTap> &taps, const TapKey &key)
        {
            for (const auto &t : taps)
                if (t.delay == key.delay && t.doppler == key.doppler)
                    return t.gain;
            return 0.0;
        }
    }

    TapKey strongest_tap(std::span<const std::vector<DdTap>> taps, const RisState &state)
    {
        const auto keys = combined_taps(taps, state);
        const TapKey *best = nullptr;
        double best_p = 0.0;
        for (const auto &k : keys)
            if (std::norm(k.combined) > best_p)
            {
                best_p = std::norm(k.combined);
                best = &k;
            }
        if (best == nullptr)
            throw DegenerateChannelError("all cascaded taps are zero; no strongest path to align");
        return *best;
    }

    std::vector<double> alignment_angles(std::span<const std::vector<DdTap>> taps)
    {
        const RisState initial = RisState::uniform(int(taps.size()), 0);
        const TapKey key = strongest_tap(taps, initial);
        std::vector<double> theta(taps.size());
        for (std::size_t q = 0; q < taps.size(); ++q)
            theta[q] = std::arg(key.combined) - std::arg(element_gain(taps[q], key));
        return theta;
    }

    RisState optimize_phases(std::span<const std::vector<DdTap>> taps, const PhaseCodebook &codebook)
    {
        const auto theta = alignment_angles(taps);
        RisState state = RisState::uniform(int(taps.size()), codebook.bits());
        for (std::size_t q = 0; q < theta.size(); ++q)
            state.phases[q] = codebook.quantize(theta[q]);
        return state;
    }

    RisState optimize_phases(std::span<const channel::ElementChannel> elements, const PhaseCodebook &codebook)
    {
        std::vector<std::vector<DdTap>> taps;
        taps.reserve(elements.size());
        for (const auto &e : elements)
            taps.push_back(element_taps(e.paths));
        return optimize_phases(taps, codebook);
    }

    RisState random_phases(int Q, const PhaseCodebook &codebook, std::mt19937_64 &rng)
    {
        RisState state = RisState::uniform(Q, codebook.bits());
        std::uniform_int_distribution<std::size_t> pick(0, codebook.values().size() - 1);
        for (auto &theta : state.phases)
            theta = codebook.values()[pick(rng)];
        return state;
    }
}
