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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

using otfsftn::cli::cli_main;

namespace
{
    struct Run
    {
        int code;
        std::string out, err;
    };

    Run run(std::vector<std::string> args)
    {
        args.insert(args.begin(), "otfsftn");
        std::vector<const char *> argv;
        for (const auto &a : args)
            argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli_main(int(argv.size()), argv.data(), out, err);
        return {code, out.str(), err.str()};
    }

    std::vector<std::string> lines(const std::string &s)
    {
        std::vector<std::string> v;
        std::istringstream in(s);
        for (std::string l; std::getline(in, l);)
            v.push_back(l);
        return v;
    }

    nlohmann::json metadata(const std::string &csv)
    {
        return nlohmann::json::parse(lines(csv).at(0).substr(2));
    }

    std::filesystem::path temp(const std::string &name)
    {
        return std::filesystem::temp_directory_path() / ("otfsftn_cli_" + name);
    }
}

TEST_CASE("ber writes one CSV row per SNR point")
{
    const auto r = run({"ber", "--M", "4", "--N", "4", "--alpha", "0.8", "--Q", "2", "--snr-start", "0", "--snr-stop",
                        "20", "--snr-step", "5", "--frames", "5", "--seed", "7"});
    CHECK(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 7);
    CHECK(l[0].rfind("# {", 0) == 0);
    CHECK(l[1] == "snr_db,ber,fer,se_bps_hz,afer_theory,papr_p50_db,papr_p999_db,frames,seconds");
    CHECK(l[2].rfind("0,", 0) == 0);
    CHECK(l[6].rfind("20,", 0) == 0);
    CHECK(metadata(r.out)["config"]["seed"] == 7);
}

TEST_CASE("usage errors exit with 2 and a JSON error line")
{
    auto r = run({"ber", "--N", "4"});
    CHECK(r.code == 2);
    REQUIRE(r.err.rfind("error: ", 0) == 0);
    const auto e = nlohmann::json::parse(r.err.substr(7));
    CHECK(e["type"] == "usage");
    CHECK(e["code"] == 2);

    CHECK(run({}).code == 2);
    CHECK(run({"ber", "--M", "4", "--N", "4", "--frames", "many"}).code == 2);
    CHECK(run({"plot", "--M", "4"}).code == 2);
    CHECK(run({"ber", "--help"}).code == 0);
}

TEST_CASE("configuration errors exit with 3, capacity errors with 4")
{
    CHECK(run({"ber", "--M", "4", "--N", "4", "--alpha", "1.5"}).code == 3);
    CHECK(run({"ber", "--M", "4", "--N", "4", "--phase-mode", "clever"}).code == 3);
    CHECK(run({"ber", "--M", "4", "--N", "4", "--config", temp("missing.json").string()}).code == 3);
    auto r = run({"fer", "--M", "4", "--N", "4", "--phase-mode", "random"});
    CHECK(r.code == 4);
    CHECK(nlohmann::json::parse(r.err.substr(7))["type"] == "capacity");
    CHECK(run({"ber", "--M", "4", "--N", "4", "--detector", "ml", "--frames", "1"}).code == 4);
}

TEST_CASE("flags override the configuration file, which overrides defaults")
{
    const auto path = temp("run.json");
    {
        std::ofstream f(path);
        f << R"({"M": 4, "N": 4, "alpha": 0.7, "Q": 3, "frames": 2, "snr_start": 0, "snr_stop": 0})";
    }
    auto r = run({"ber", "--config", path.string(), "--alpha", "0.9"});
    REQUIRE(r.code == 0);
    const auto cfg = metadata(r.out)["config"];
    CHECK(cfg["alpha"] == 0.9);
    CHECK(cfg["Q"] == 3);
    CHECK(cfg["rrc_beta"] == 0.25);

    {
        std::ofstream f(path);
        f << R"({"M": 4, "N": 4, "alpa": 0.7})";
    }
    CHECK(run({"ber", "--config", path.string()}).code == 3);
    std::filesystem::remove(path);
}

TEST_CASE("JSON output and output files")
{
    const auto path = temp("out.json");
    auto r = run({"se", "--M", "4", "--N", "4", "--frames", "2", "--snr-start", "0", "--snr-stop", "10", "--format",
                  "json", "--output", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    CHECK(j["rows"].size() == 3);
    CHECK(j["rows"][0]["ber"].is_null());
    CHECK(j["rows"][2]["se_bps_hz"].get<double>() > 0.0);
    std::filesystem::remove(path);

    r = run({"papr", "--M", "4", "--N", "4", "--frames", "5"});
    CHECK(r.code == 0);
    CHECK(lines(r.out).at(1) == "threshold_db,ccdf_ftn,ccdf_nyquist");
    r = run({"ibo", "--M", "4", "--N", "4", "--frames", "5", "--snr-start", "0", "--snr-stop", "10"});
    CHECK(r.code == 0);
    CHECK(lines(r.out).size() == 5);
    r = run({"fer", "--M", "2", "--N", "2", "--phase-mode", "random", "--frames", "5"});
    CHECK(r.code == 0);
}
