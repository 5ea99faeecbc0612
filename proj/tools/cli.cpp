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

#include "cli.hpp"

#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "otfsftn/harness.hpp"

namespace otfsftn::cli
{
    namespace
    {
        using harness::SimConfig;

        // Flags that were given on the command line; unset ones leave the layered value alone
        struct Overrides
        {
            std::optional<int> M, N, qam_order, Q, phase_bits, frames, rrc_span, oversample, workers;
            std::optional<double> delta_f, T0, alpha, snr_start, snr_stop, snr_step, v_max, f_c, rrc_beta, g_ris_db,
                margin_db, p_sat_dbm, noise_dbm;
            std::optional<std::uint64_t> seed, ml_cap;
            std::optional<std::string> phase_mode, detector, output, format, profile;

            void apply(SimConfig &c) const
            {
                auto set = [](auto &field, const auto &opt)
                {
                    if (opt)
                        field = *opt;
                };
                set(c.M, M);
                set(c.N, N);
                set(c.qam_order, qam_order);
                set(c.Q, Q);
                set(c.phase_bits, phase_bits);
                set(c.frames, frames);
                set(c.rrc_span, rrc_span);
                set(c.oversample, oversample);
                set(c.workers, workers);
                set(c.delta_f, delta_f);
                if (T0)
                    c.T0 = *T0;
                set(c.alpha, alpha);
                set(c.snr_start, snr_start);
                set(c.snr_stop, snr_stop);
                set(c.snr_step, snr_step);
                set(c.v_max, v_max);
                set(c.f_c, f_c);
                set(c.rrc_beta, rrc_beta);
                set(c.g_ris_db, g_ris_db);
                set(c.margin_db, margin_db);
                set(c.p_sat_dbm, p_sat_dbm);
                set(c.noise_dbm, noise_dbm);
                set(c.seed, seed);
                set(c.ml_cap, ml_cap);
                set(c.output, output);
                set(c.format, format);
                set(c.profile, profile);
                if (phase_mode)
                    c.phase_mode = harness::parse_phase_mode(*phase_mode);
                if (detector)
                    c.detector = harness::parse_detector(*detector);
            }
        };

        void add_flags(CLI::App &cmd, Overrides &o, std::optional<std::string> &config_path)
        {
            cmd.add_option("--config", config_path, "JSON configuration file; flags override it");
            cmd.add_option("--M", o.M, "Delay bins (required)");
            cmd.add_option("--N", o.N, "Doppler bins (required)");
            cmd.add_option("--alpha", o.alpha, "FTN compression factor in (0, 1]");
            cmd.add_option("--Q", o.Q, "RIS elements");
            cmd.add_option("--qam-order", o.qam_order, "Constellation size (2, 4, 16, 64, ...)");
            cmd.add_option("--phase-bits", o.phase_bits, "RIS phase resolution");
            cmd.add_option("--phase-mode", o.phase_mode, "optimal, random or none");
            cmd.add_option("--detector", o.detector, "lmmse or ml");
            cmd.add_option("--snr-start", o.snr_start, "First SNR point, dB");
            cmd.add_option("--snr-stop", o.snr_stop, "Last SNR point, dB");
            cmd.add_option("--snr-step", o.snr_step, "SNR step, dB");
            cmd.add_option("--frames", o.frames, "Frames per SNR point");
            cmd.add_option("--seed", o.seed, "Master seed");
            cmd.add_option("--workers", o.workers, "Worker threads");
            cmd.add_option("--delta-f", o.delta_f, "Subcarrier spacing, Hz");
            cmd.add_option("--T0", o.T0, "Nyquist symbol interval, s (default 1/delta_f)");
            cmd.add_option("--v-max", o.v_max, "Maximum speed, km/h");
            cmd.add_option("--fc", o.f_c, "Carrier frequency, Hz");
            cmd.add_option("--rrc-beta", o.rrc_beta, "RRC roll-off");
            cmd.add_option("--rrc-span", o.rrc_span, "RRC span in symbols");
            cmd.add_option("--oversample", o.oversample, "Waveform samples per symbol");
            cmd.add_option("--ml-cap", o.ml_cap, "Largest ML frame codebook");
            cmd.add_option("--profile", o.profile, "Delay profile file (delay_ns,power_db rows)");
            cmd.add_option("--g-ris", o.g_ris_db, "RIS gain for the IBO run, dB");
            cmd.add_option("--margin", o.margin_db, "IBO design margin, dB");
            cmd.add_option("--p-sat", o.p_sat_dbm, "PA saturation power, dBm");
            cmd.add_option("--noise-dbm", o.noise_dbm, "Noise power referred to the transmitter, dBm");
            cmd.add_option("--output", o.output, "Output file (stdout when absent)");
            cmd.add_option("--format", o.format, "csv or json");
        }

        void report(std::ostream &err, int code, const std::string &kind, const std::string &message)
        {
            err << "error: " << nlohmann::json{{"code", code}, {"type", kind}, {"message", message}}.dump() << '\n';
        }

        SimConfig layered(const Overrides &o, const std::optional<std::string> &config_path)
        {
            SimConfig c;
            if (config_path)
            {
                std::ifstream in(*config_path);
                if (!in)
                    throw ConfigError("cannot open configuration file '" + *config_path + "'");
                nlohmann::json j;
                try
                {
                    j = nlohmann::json::parse(in);
                }
                catch (const nlohmann::json::parse_error &e)
                {
                    throw ConfigError("configuration file '" + *config_path + "' is not valid JSON: " + e.what());
                }
                c = SimConfig::from_json(j, c);
            }
            o.apply(c);
            return c;
        }

        void emit(const harness::ResultTable &t, const SimConfig &c, std::ostream &out)
        {
            const std::string text = c.format == "json" ? t.to_json().dump(2) + "\n" : t.to_csv();
            if (c.output.empty())
            {
                out << text;
                return;
            }
            std::ofstream file(c.output);
            if (!file || !(file << text))
                throw std::runtime_error("cannot write output file '" + c.output + "'");
        }
    }

    int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"RIS-assisted OTFS with faster-than-Nyquist signaling: link simulator"};
        app.require_subcommand(1);
        Overrides o;
        std::optional<std::string> config_path;
        const std::vector<std::pair<std::string, std::string>> commands{
            {"ber", "BER/FER sweep through the full chain"},
            {"fer", "Small-scale ML FER against the union bound"},
            {"papr", "PAPR CCDF of FTN and Nyquist waveforms"},
            {"se", "Spectral efficiency sweep"},
            {"ibo", "Input back-off with and without the RIS"}};
        std::vector<CLI::App *> subs;
        for (const auto &[name, help] : commands)
        {
            subs.push_back(app.add_subcommand(name, help));
            add_flags(*subs.back(), o, config_path);
        }

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &)
        {
            out << app.help();
            return ok;
        }
        catch (const CLI::CallForAllHelp &)
        {
            out << app.help("", CLI::AppFormatMode::All);
            return ok;
        }
        catch (const CLI::ParseError &e)
        {
            report(err, usage, "usage", e.what());
            return usage;
        }

        std::string command;
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed())
                command = commands[i].first;

        try
        {
            const SimConfig c = layered(o, config_path);
            if (c.M <= 0 || c.N <= 0)
            {
                report(err, usage, "usage", "--M and --N are required (as flags or in --config)");
                return usage;
            }
            c.validate();
            if (command == "ber")
                emit(harness::run_ber_sweep(c), c, out);
            else if (command == "fer")
                emit(harness::run_fer_smallscale(c), c, out);
            else if (command == "papr")
                emit(harness::run_papr_ccdf(c).table, c, out);
            else if (command == "se")
                emit(harness::run_se_sweep(c), c, out);
            else
                emit(harness::run_ibo(c), c, out);
        }
        catch (const ConfigError &e)
        {
            report(err, config, "config", e.what());
            return config;
        }
        catch (const std::invalid_argument &e)
        {
            report(err, config, "config", e.what());
            return config;
        }
        catch (const CapacityError &e)
        {
            report(err, capacity, "capacity", e.what());
            return capacity;
        }
        catch (const std::exception &e)
        {
            report(err, failure, "runtime", e.what());
            return failure;
        }
        return ok;
    }
}
