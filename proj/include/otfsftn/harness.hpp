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

#ifndef OTFSFTN_HARNESS_HPP
#define OTFSFTN_HARNESS_HPP

#include <algorithm>
#include <cstdint>
#include <exception>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "otfsftn/analysis.hpp"
#include "otfsftn/channel.hpp"
#include "otfsftn/common.hpp"
#include "otfsftn/dd_core.hpp"
#include "otfsftn/detect.hpp"
#include "otfsftn/ftn_pulse.hpp"
#include "otfsftn/ris.hpp"

namespace otfsftn::harness
{
    inline constexpr const char *version = "0.1.0";

    enum class PhaseMode
    {
        optimal,
        random,
        none
    };

    enum class Detector
    {
        lmmse,
        ml
    };

    struct SimConfig
    {
        int M = 0; // required
        int N = 0; // required
        double delta_f = 15e3;
        std::optional<double> T0; // 1 / delta_f when absent
        double alpha = 0.8;
        int qam_order = 2;
        int Q = 8;
        int phase_bits = 3;
        PhaseMode phase_mode = PhaseMode::optimal;
        Detector detector = Detector::lmmse;
        double snr_start = 0.0;
        double snr_stop = 30.0;
        double snr_step = 5.0;
        int frames = 3000;
        double v_max = 120.0; // km/h
        double f_c = 4e9;
        std::uint64_t seed = 1;
        double rrc_beta = 0.25;
        int rrc_span = 8;
        int oversample = 4;
        int workers = 1;
        std::uint64_t ml_cap = 4096;
        std::string profile; // delay/power file, EVA when empty
        std::string output;  // stdout when empty
        std::string format = "csv";
        // IBO arithmetic
        double g_ris_db = 6.0;
        double margin_db = 2.0;
        double p_sat_dbm = 30.0;
        double noise_dbm = 0.0; // receiver noise referred to the transmitter; P_avg = noise + SNR

        // Throws ConfigError naming the offending field
        void validate() const;
        dd::GridParams grid() const;
        std::vector<double> snr_points() const;

        nlohmann::json to_json() const;
        // Fields present in j override the ones in base; unknown keys are rejected
        static SimConfig from_json(const nlohmann::json &j);
        static SimConfig from_json(const nlohmann::json &j, SimConfig base);
    };

    std::string to_string(PhaseMode mode);
    std::string to_string(Detector detector);
    PhaseMode parse_phase_mode(const std::string &s);
    Detector parse_detector(const std::string &s);

    // Tabular result with a metadata object. Missing values are NaN and print as "nan".
    struct ResultTable
    {
        nlohmann::json metadata;
        std::vector<std::string> columns;
        std::vector<std::vector<double>> rows;

        struct CsvOptions
        {
            bool metadata = true;
            bool timing = true; // keep the "seconds" column
        };

        std::string to_csv(CsvOptions options) const;
        std::string to_csv() const { return to_csv(CsvOptions{}); }
        nlohmann::json to_json() const;
        double at(std::size_t row, const std::string &column) const;
        std::vector<double> column(const std::string &name) const;
    };

    // snr_db, ber, fer, se_bps_hz, afer_theory, papr_p50_db, papr_p999_db, frames, seconds
    const std::vector<std::string> &sweep_columns();

    // Independent generator for (seed, point, frame)
    std::mt19937_64 frame_rng(std::uint64_t seed, std::uint64_t point, std::uint64_t frame);

    // Order-deterministic parallel map over [0, count): out[i] = f(i) on `workers` OpenMP threads.
    // The exception of the lowest failing index is rethrown.
    template <class F>
    auto parallel_map(int count, int workers, F &&f) -> std::vector<decltype(f(0))>
    {
        std::vector<decltype(f(0))> out(std::size_t(std::max(count, 0)));
        std::vector<std::exception_ptr> failure(out.size());
#pragma omp parallel for num_threads(std::max(workers, 1)) schedule(dynamic, 1)
        for (int i = 0; i < count; ++i)
        {
            try
            {
                out[std::size_t(i)] = f(i);
            }
            catch (...)
            {
                failure[std::size_t(i)] = std::current_exception();
            }
        }
        for (const auto &e : failure)
            if (e)
                std::rethrow_exception(e);
        return out;
    }

    // The same map on the calling thread
    template <class F>
    auto serial_map(int count, F &&f) -> std::vector<decltype(f(0))>
    {
        std::vector<decltype(f(0))> out;
        out.reserve(std::size_t(std::max(count, 0)));
        for (int i = 0; i < count; ++i)
            out.push_back(f(i));
        return out;
    }

    // Immutable per-run state shared by every frame: grid, pulse, Gram and ISI matrices, delay
    // profile and codebooks
    class Scenario
    {
    public:
        explicit Scenario(const SimConfig &cfg);
        Scenario(const SimConfig &cfg, double alpha);

        const SimConfig &config() const { return cfg_; }
        const dd::GridParams &params() const { return params_; }
        const pulse::Pulse &pulse() const { return pulse_; }
        const pulse::Autocorrelation &autocorr() const { return autocorr_; }
        const pulse::GramMatrix &gram() const { return gram_; }
        const channel::IsiProfile &isi() const { return isi_; }
        const channel::DelayPowerProfile &profile() const { return profile_; }
        const dd::Codebook &codebook() const { return codebook_; }
        const ris::PhaseCodebook &phase_codebook() const { return phases_; }
        double nu_max() const { return nu_max_; }
        // Elements in play: 1 when the phase mode is none
        int elements() const;

        // Toeplitz ISI G_isi, G_isi G^-1 G_isi and G_isi G^-1 (G conditioned)
        const CMat &isi_matrix() const { return isi_matrix_; }
        const CMat &projected() const { return projected_; }
        const CMat &whitener() const { return whitener_; }

        // Present when the detector is ML
        const detect::FrameCodebook *frames() const { return frames_ ? &*frames_ : nullptr; }

    private:
        SimConfig cfg_;
        dd::GridParams params_;
        pulse::Pulse pulse_;
        pulse::Autocorrelation autocorr_;
        pulse::GramMatrix gram_;
        channel::IsiProfile isi_;
        channel::DelayPowerProfile profile_;
        dd::Codebook codebook_;
        ris::PhaseCodebook phases_;
        double nu_max_;
        CMat isi_matrix_, projected_, whitener_;
        std::optional<detect::FrameCodebook> frames_;
    };

    struct FrameOutcome
    {
        long bit_errors = 0;
        long symbol_errors = 0;
        int frame_error = 0;
    };

    // Channel realization of one frame: every element's cascaded paths and the RIS state
    struct Realization
    {
        std::vector<std::vector<channel::CascadedPath>> elements;
        ris::RisState state;
        channel::Propagation propagation;
    };

    // Draws Q element channels (link 1 then link 2 per element) and, in random mode, the phases
    Realization draw_realization(const Scenario &sc, std::mt19937_64 &rng);

    // One frame of the chain: bits, QAM, ISFFT, per-slot modulation, RIS channel with FTN ISI,
    // colored noise, detection, DD recovery. Consumes rng in that order.
    FrameOutcome simulate_frame(const Scenario &sc, double sigma2, std::mt19937_64 &rng);

    // LMMSE on the received stream r = G_isi C s + z, returned in the DD domain
    CVec lmmse_time_domain(const CVec &r, const channel::Propagation &prop, const Scenario &sc, double sigma2,
                           double Ex = 1.0);

    ResultTable run_ber_sweep(const SimConfig &cfg);
    // Single-threaded reference of the same sweep
    ResultTable run_ber_sweep_serial(const SimConfig &cfg);

    ResultTable run_fer_smallscale(const SimConfig &cfg);

    struct PaprResult
    {
        analysis::CcdfCurve ftn, nyquist;
        std::vector<double> ftn_db, nyquist_db; // per frame
        ResultTable table;                        // threshold_db, ccdf_ftn, ccdf_nyquist
    };

    PaprResult run_papr_ccdf(const SimConfig &cfg);

    ResultTable run_se_sweep(const SimConfig &cfg);

    ResultTable run_ibo(const SimConfig &cfg);
}

#endif
