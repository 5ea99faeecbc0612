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

#ifndef OTFSFTN_CHANNEL_HPP
#define OTFSFTN_CHANNEL_HPP

#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "otfsftn/common.hpp"
#include "otfsftn/dd_core.hpp"
#include "otfsftn/ftn_pulse.hpp"

namespace otfsftn::channel
{
    struct DelayPowerProfile
    {
        std::vector<double> delays;    // seconds, strictly increasing
        std::vector<double> powers_db; // as given
        std::vector<double> linear;    // normalized to unit sum

        static DelayPowerProfile from_entries(std::vector<double> delays_s, std::vector<double> powers_db);
        std::size_t size() const { return delays.size(); }
    };

    // Extended Vehicular A, 9 taps
    DelayPowerProfile eva_profile();

    // Text file of `delay_ns,power_db` rows; blank lines and lines starting with '#' are skipped
    DelayPowerProfile load_profile(const std::string &path);

    // f_c * v / c with v in km/h
    double max_doppler(double f_c, double v_kmh);

    struct TapIndex
    {
        int delay = 0;     // epsilon = floor(tau * M * delta_f)
        int doppler = 0;   // nearest integer to nu * N * T_F
        double frac = 0.0; // kappa in [-1/2, 1/2)
    };

    TapIndex quantize_taps(double tau, double nu, const dd::GridParams &params);

    struct Path
    {
        cd gain;
        double delay = 0.0;   // seconds
        double doppler = 0.0; // Hz
        TapIndex taps;
    };

    struct CascadedPath
    {
        cd gain;
        double delay = 0.0;
        double doppler = 0.0;
        TapIndex taps;
        int first = 0;  // index into the first link
        int second = 0; // index into the second link
    };

    // One Rayleigh path per profile entry with Jakes Doppler nu_max * cos(theta)
    std::vector<Path> sample_paths(const DelayPowerProfile &profile, double nu_max, const dd::GridParams &params,
                                   std::mt19937_64 &rng);

    // Cartesian product, index = i * |link2| + j
    std::vector<CascadedPath> cascade(std::span<const Path> link1, std::span<const Path> link2,
                                      const dd::GridParams &params);

    // Pulse weighting g(d * alpha * T0 / M) at integer sample offsets d >= 0, up to the last nonzero lag
    struct IsiProfile
    {
        RVec taps;

        static IsiProfile ideal();
        static IsiProfile from(const pulse::Autocorrelation &g, const dd::GridParams &params);

        int reach() const { return int(taps.size()) - 1; }
        bool is_ideal() const { return taps.size() == 1; }
        RMat toeplitz(int size) const;
    };

    // Time-varying multipath on the serialized stream, before pulse weighting:
    // (C s)[c] = sum_p h_p exp(j2pi nu_p (c - eps_p) T_F / M) s[(c - eps_p) mod MN].
    // Paths sharing a delay tap are merged into one branch with a per-sample gain.
    class Propagation
    {
    public:
        struct Branch
        {
            int delay;
            CVec gain; // per output sample
        };

        explicit Propagation(const dd::GridParams &params);

        void add(std::span<const CascadedPath> paths, cd weight = 1.0);

        const std::vector<Branch> &branches() const { return branches_; }
        int size() const { return size_; }

        CVec apply(const CVec &s) const;
        CVec apply_adjoint(const CVec &y) const;
        Eigen::SparseMatrix<cd> matrix() const;

    private:
        int size_;
        double sample_period_;
        std::vector<Branch> branches_;
    };

    // Per-element channel on the vectorized time-domain frame: H = G_isi * C
    struct ElementChannel
    {
        int index = 0;
        std::vector<CascadedPath> paths;
        CMat matrix;
    };

    CMat time_channel_matrix(const Propagation &propagation, const IsiProfile &isi);

    ElementChannel build_element_channel(std::span<const CascadedPath> paths, const dd::GridParams &params,
                                         const IsiProfile &isi, int index = 0);
    ElementChannel build_element_channel(std::span<const CascadedPath> paths, const dd::GridParams &params,
                                         const pulse::Autocorrelation &g, int index = 0);

    // y = sum_q phi_q H_q s + z
    CVec apply_channel(std::span<const ElementChannel> elements, std::span<const cd> phi, const CVec &s,
                       const CVec &z);

    // DD-domain view A_rx H A_rx^H of a time-domain channel matrix
    CMat to_dd(const CMat &H_time, const dd::GridParams &params);
}

#endif
