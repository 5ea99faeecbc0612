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

#include <charconv>
#include <cmath>
#include <sstream>

#include "otfsftn/harness.hpp"

namespace otfsftn::harness
{
    namespace
    {
        using nlohmann::json;

        template <class T>
        void read(const json &j, const char *key, T &field)
        {
            try
            {
                field = j.at(key).get<T>();
            }
            catch (const json::exception &)
            {
                throw ConfigError(std::string("field '") + key + "' has the wrong type");
            }
        }

        std::string format_number(double v)
        {
            if (std::isnan(v))
                return "nan";
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, res.ptr);
        }

        void require(bool ok, const std::string &message)
        {
            if (!ok)
                throw ConfigError(message);
        }
    }

    std::string to_string(PhaseMode mode)
    {
        switch (mode)
        {
        case PhaseMode::optimal:
            return "optimal";
        case PhaseMode::random:
            return "random";
        case PhaseMode::none:
            return "none";
        }
        return "";
    }

    std::string to_string(Detector detector)
    {
        return detector == Detector::lmmse ? "lmmse" : "ml";
    }

    PhaseMode parse_phase_mode(const std::string &s)
    {
        if (s == "optimal")
            return PhaseMode::optimal;
        if (s == "random")
            return PhaseMode::random;
        if (s == "none")
            return PhaseMode::none;
        throw ConfigError("phase_mode must be optimal, random or none, got '" + s + "'");
    }

    Detector parse_detector(const std::string &s)
    {
        if (s == "lmmse")
            return Detector::lmmse;
        if (s == "ml")
            return Detector::ml;
        throw ConfigError("detector must be lmmse or ml, got '" + s + "'");
    }

    void SimConfig::validate() const
    {
        require(M > 0, "M is required and must be positive");
        require(N > 0, "N is required and must be positive");
        require(delta_f > 0.0, "delta_f must be positive");
        require(!T0 || *T0 > 0.0, "T0 must be positive");
        require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
        try
        {
            dd::Codebook check(qam_order);
        }
        catch (const ParameterError &e)
        {
            throw ConfigError(std::string("qam_order: ") + e.what());
        }
        require(Q >= 1, "Q must be at least 1");
        require(phase_bits >= 1 && phase_bits <= 16, "phase_bits must be 1..16");
        require(snr_step > 0.0, "snr_step must be positive");
        require(snr_stop >= snr_start, "snr_stop must not be below snr_start");
        require(frames >= 1, "frames must be at least 1");
        require(v_max > 0.0, "v_max must be positive");
        require(f_c > 0.0, "f_c must be positive");
        require(rrc_beta > 0.0 && rrc_beta <= 1.0, "rrc_beta must lie in (0, 1]");
        require(rrc_span >= 2 && rrc_span % 2 == 0, "rrc_span must be an even number >= 2");
        require(oversample >= 1, "oversample must be at least 1");
        require(workers >= 1, "workers must be at least 1");
        require(ml_cap >= 2, "ml_cap must be at least 2");
        require(format == "csv" || format == "json", "format must be csv or json");
        require(margin_db >= 0.0, "margin_db must be nonnegative");
    }

    dd::GridParams SimConfig::grid() const
    {
        return {M, N, delta_f, T0.value_or(1.0 / delta_f), alpha};
    }

    std::vector<double> SimConfig::snr_points() const
    {
        const int count = int(std::floor((snr_stop - snr_start) / snr_step + 1e-9)) + 1;
        std::vector<double> out(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            out[std::size_t(i)] = snr_start + i * snr_step;
        return out;
    }

    nlohmann::json SimConfig::to_json() const
    {
        json j = {{"M", M},
                  {"N", N},
                  {"delta_f", delta_f},
                  {"T0", T0.value_or(1.0 / delta_f)},
                  {"alpha", alpha},
                  {"qam_order", qam_order},
                  {"Q", Q},
                  {"phase_bits", phase_bits},
                  {"phase_mode", to_string(phase_mode)},
                  {"detector", to_string(detector)},
                  {"snr_start", snr_start},
                  {"snr_stop", snr_stop},
                  {"snr_step", snr_step},
                  {"frames", frames},
                  {"v_max", v_max},
                  {"f_c", f_c},
                  {"seed", seed},
                  {"rrc_beta", rrc_beta},
                  {"rrc_span", rrc_span},
                  {"oversample", oversample},
                  {"workers", workers},
                  {"ml_cap", ml_cap},
                  {"profile", profile},
                  {"output", output},
                  {"format", format},
                  {"g_ris_db", g_ris_db},
                  {"margin_db", margin_db},
                  {"p_sat_dbm", p_sat_dbm},
                  {"noise_dbm", noise_dbm}};
        return j;
    }

    SimConfig SimConfig::from_json(const nlohmann::json &j)
    {
        return from_json(j, SimConfig{});
    }

    SimConfig SimConfig::from_json(const nlohmann::json &j, SimConfig c)
    {
        if (!j.is_object())
            throw ConfigError("configuration must be a JSON object");
        for (const auto &[key, value] : j.items())
        {
            const char *k = key.c_str();
            if (key == "M")
                read(j, k, c.M);
            else if (key == "N")
                read(j, k, c.N);
            else if (key == "delta_f")
                read(j, k, c.delta_f);
            else if (key == "T0")
            {
                double t = 0.0;
                read(j, k, t);
                c.T0 = t;
            }
            else if (key == "alpha")
                read(j, k, c.alpha);
            else if (key == "qam_order")
                read(j, k, c.qam_order);
            else if (key == "Q")
                read(j, k, c.Q);
            else if (key == "phase_bits")
                read(j, k, c.phase_bits);
            else if (key == "phase_mode")
            {
                std::string s;
                read(j, k, s);
                c.phase_mode = parse_phase_mode(s);
            }
            else if (key == "detector")
            {
                std::string s;
                read(j, k, s);
                c.detector = parse_detector(s);
            }
            else if (key == "snr_start")
                read(j, k, c.snr_start);
            else if (key == "snr_stop")
                read(j, k, c.snr_stop);
            else if (key == "snr_step")
                read(j, k, c.snr_step);
            else if (key == "frames")
                read(j, k, c.frames);
            else if (key == "v_max")
                read(j, k, c.v_max);
            else if (key == "f_c")
                read(j, k, c.f_c);
            else if (key == "seed")
                read(j, k, c.seed);
            else if (key == "rrc_beta")
                read(j, k, c.rrc_beta);
            else if (key == "rrc_span")
                read(j, k, c.rrc_span);
            else if (key == "oversample")
                read(j, k, c.oversample);
            else if (key == "workers")
                read(j, k, c.workers);
            else if (key == "ml_cap")
                read(j, k, c.ml_cap);
            else if (key == "profile")
                read(j, k, c.profile);
            else if (key == "output")
                read(j, k, c.output);
            else if (key == "format")
                read(j, k, c.format);
            else if (key == "g_ris_db")
                read(j, k, c.g_ris_db);
            else if (key == "margin_db")
                read(j, k, c.margin_db);
            else if (key == "p_sat_dbm")
                read(j, k, c.p_sat_dbm);
            else if (key == "noise_dbm")
                read(j, k, c.noise_dbm);
            else
                throw ConfigError("unknown configuration field '" + key + "'");
        }
        return c;
    }

    const std::vector<std::string> &sweep_columns()
    {
        static const std::vector<std::string> cols{"snr_db",      "ber",         "fer",          "se_bps_hz", "afer_theory",
                                                   "papr_p50_db", "papr_p999_db", "frames", "seconds"};
        return cols;
    }

    std::string ResultTable::to_csv(CsvOptions options) const
    {
        std::ostringstream out;
        if (options.metadata)
            out << "# " << metadata.dump() << '\n';
        std::vector<bool> keep(columns.size(), true);
        for (std::size_t c = 0; c < columns.size(); ++c)
            keep[c] = options.timing || columns[c] != "seconds";
        bool first = true;
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (keep[c])
            {
                out << (first ? "" : ",") << columns[c];
                first = false;
            }
        out << '\n';
        for (const auto &row : rows)
        {
            first = true;
            for (std::size_t c = 0; c < columns.size(); ++c)
                if (keep[c])
                {
                    out << (first ? "" : ",") << format_number(row[c]);
                    first = false;
                }
            out << '\n';
        }
        return out.str();
    }

    nlohmann::json ResultTable::to_json() const
    {
        json rows_json = json::array();
        for (const auto &row : rows)
        {
            json r = json::object();
            for (std::size_t c = 0; c < columns.size(); ++c)
                r[columns[c]] = std::isnan(row[c]) ? json(nullptr) : json(row[c]);
            rows_json.push_back(r);
        }
        return {{"metadata", metadata}, {"columns", columns}, {"rows", rows_json}};
    }

    double ResultTable::at(std::size_t row, const std::string &name) const
    {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == name)
                return rows.at(row).at(c);
        throw std::out_of_range("no column '" + name + "'");
    }

    std::vector<double> ResultTable::column(const std::string &name) const
    {
        std::vector<double> out;
        for (std::size_t r = 0; r < rows.size(); ++r)
            out.push_back(at(r, name));
        return out;
    }
}
