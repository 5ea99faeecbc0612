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

#include "otfsftn/harness.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>

namespace otfsftn::harness
{
    namespace
    {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();

        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ull;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
            return x ^ (x >> 31);
        }

        std::string utc_timestamp()
        {
            const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            std::tm tm{};
            gmtime_r(&now, &tm);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
            return buf;
        }

        nlohmann::json metadata(const SimConfig &cfg, const char *kind)
        {
            return {{"kind", kind}, {"version", version}, {"timestamp", utc_timestamp()}, {"config", cfg.to_json()}};
        }

        double seconds_since(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }

        std::vector<std::uint8_t> random_bits(std::size_t count, std::mt19937_64 &rng)
        {
            std::vector<std::uint8_t> bits(count);
            for (auto &b : bits)
                b = std::uint8_t(rng() >> 63);
            return bits;
        }

        channel::DelayPowerProfile load(const SimConfig &cfg)
        {
            return cfg.profile.empty() ? channel::eva_profile() : channel::load_profile(cfg.profile);
        }

        double noise_power(double snr_db, double Ex) { return Ex / db_to_linear(snr_db); }

        template <class F>
        auto frame_map(const SimConfig &cfg, bool parallel, F &&f)
        {
            return parallel ? parallel_map(cfg.frames, cfg.workers, f) : serial_map(cfg.frames, f);
        }
    }

    std::mt19937_64 frame_rng(std::uint64_t seed, std::uint64_t point, std::uint64_t frame)
    {
        std::uint64_t h = splitmix64(seed);
        h = splitmix64(h ^ (point * 0xd1b54a32d192ed03ull));
        h = splitmix64(h ^ (frame * 0xabc98388fb8fac03ull));
        return std::mt19937_64(h);
    }

    Scenario::Scenario(const SimConfig &cfg) : Scenario(cfg, cfg.alpha) {}

    Scenario::Scenario(const SimConfig &cfg, double alpha)
        : cfg_((cfg.validate(), cfg)),
          params_(cfg.grid().with_alpha(alpha)),
          pulse_(cfg.rrc_beta, cfg.rrc_span, cfg.oversample, params_.sample_period()),
          autocorr_(pulse::pulse_autocorr(pulse_)),
          gram_(autocorr_, params_.size(), alpha, params_.sample_period()),
          isi_(channel::IsiProfile::from(autocorr_, params_)),
          profile_(load(cfg)),
          codebook_(cfg.qam_order),
          phases_(cfg.phase_bits),
          nu_max_(channel::max_doppler(cfg.f_c, cfg.v_max))
    {
        cfg_.alpha = alpha;
        const RMat G_isi = isi_.toeplitz(params_.size());
        const RMat W = G_isi * gram_.inverse();
        isi_matrix_ = G_isi.cast<cd>();
        whitener_ = W.cast<cd>();
        projected_ = (W * G_isi).cast<cd>();
        if (cfg.detector == Detector::ml)
            frames_.emplace(params_.size(), codebook_, cfg.ml_cap);
    }

    int Scenario::elements() const
    {
        return cfg_.phase_mode == PhaseMode::none ? 1 : cfg_.Q;
    }

    Realization draw_realization(const Scenario &sc, std::mt19937_64 &rng)
    {
        const int Q = sc.elements();
        Realization r{{}, ris::RisState::uniform(Q, sc.phase_codebook().bits()), channel::Propagation(sc.params())};
        r.elements.reserve(std::size_t(Q));
        for (int q = 0; q < Q; ++q)
        {
            const auto first = channel::sample_paths(sc.profile(), sc.nu_max(), sc.params(), rng);
            const auto second = channel::sample_paths(sc.profile(), sc.nu_max(), sc.params(), rng);
            r.elements.push_back(channel::cascade(first, second, sc.params()));
        }
        switch (sc.config().phase_mode)
        {
        case PhaseMode::optimal:
        {
            std::vector<std::vector<ris::DdTap>> taps;
            taps.reserve(r.elements.size());
            for (const auto &e : r.elements)
                taps.push_back(ris::element_taps(e));
            r.state = ris::optimize_phases(taps, sc.phase_codebook());
            break;
        }
        case PhaseMode::random:
            r.state = ris::random_phases(Q, sc.phase_codebook(), rng);
            break;
        case PhaseMode::none:
            break;
        }
        for (int q = 0; q < Q; ++q)
            r.propagation.add(r.elements[std::size_t(q)], r.state.coefficient(q));
        return r;
    }

    CVec lmmse_time_domain(const CVec &r, const channel::Propagation &prop, const Scenario &sc, double sigma2,
                           double Ex)
    {
        const Eigen::SparseMatrix<cd> C = prop.matrix();
        const Eigen::SparseMatrix<cd> Ch = C.adjoint();
        const CMat PC = sc.projected() * C;
        CMat A = Ch * PC / sigma2;
        A.diagonal().array() += 1.0 / Ex;
        const CVec b = Ch * (sc.whitener() * r) / sigma2;
        Eigen::LLT<CMat> llt(A);
        if (llt.info() != Eigen::Success)
            throw NumericalError("LMMSE normal matrix is not positive definite");
        return dd::stream_to_dd(llt.solve(b), sc.params());
    }

    FrameOutcome simulate_frame(const Scenario &sc, double sigma2, std::mt19937_64 &rng)
    {
        const auto &p = sc.params();
        const auto &cb = sc.codebook();
        const auto bits = random_bits(std::size_t(p.size() * cb.bits_per_symbol()), rng);
        const dd::DDFrame frame = dd::qam_map(bits, cb, p);
        const CVec x = dd::vectorize(frame);
        const CVec s = dd::dd_to_stream(x, p);

        const Realization real = draw_realization(sc, rng);
        const CVec r = sc.isi_matrix() * real.propagation.apply(s) + pulse::colored_noise(sigma2, sc.gram(), rng);

        CVec x_hat;
        if (sc.config().detector == Detector::lmmse)
            x_hat = lmmse_time_domain(r, real.propagation, sc, sigma2, frame.Ex);
        else
        {
            const CMat H = channel::to_dd(channel::time_channel_matrix(real.propagation, sc.isi()), p);
            const CMat S = sigma2 * pulse::dd_covariance(sc.gram().conditioned().cast<cd>(), p);
            const detect::DetectionContext ctx(H, S, cb, frame.Ex);
            x_hat = detect::ml_detect(dd::stream_to_dd(r, p), ctx, *sc.frames()).symbols;
        }
        const auto e = detect::count_errors(x_hat, x, cb);
        return {e.bit_errors, e.symbol_errors, e.frame_error};
    }

    namespace
    {
        ResultTable ber_sweep(const SimConfig &cfg, bool parallel)
        {
            const Scenario sc(cfg);
            ResultTable t;
            t.metadata = metadata(cfg, "ber");
            t.columns = sweep_columns();
            const auto snrs = cfg.snr_points();
            const double bits_per_frame = double(sc.params().size() * sc.codebook().bits_per_symbol());
            for (std::size_t i = 0; i < snrs.size(); ++i)
            {
                const auto t0 = std::chrono::steady_clock::now();
                const double sigma2 = noise_power(snrs[i], 1.0);
                const auto outcomes = frame_map(cfg, parallel, [&](int f)
                                                {
                                                    auto rng = frame_rng(cfg.seed, i, std::uint64_t(f));
                                                    return simulate_frame(sc, sigma2, rng);
                                                });
                long bit_errors = 0, frame_errors = 0;
                for (const auto &o : outcomes)
                {
                    bit_errors += o.bit_errors;
                    frame_errors += o.frame_error;
                }
                t.rows.push_back({snrs[i], double(bit_errors) / (bits_per_frame * cfg.frames),
                                  double(frame_errors) / cfg.frames, nan, nan, nan, nan, double(cfg.frames),
                                  seconds_since(t0)});
            }
            return t;
        }
    }

    ResultTable run_ber_sweep(const SimConfig &cfg)
    {
        return ber_sweep(cfg, true);
    }

    ResultTable run_ber_sweep_serial(const SimConfig &cfg)
    {
        return ber_sweep(cfg, false);
    }

    ResultTable run_fer_smallscale(const SimConfig &cfg)
    {
        cfg.validate();
        if (cfg.M > 3 || cfg.N > 3)
            throw CapacityError("small-scale FER needs M, N <= 3 for exhaustive ML; got M=" + std::to_string(cfg.M) +
                                ", N=" + std::to_string(cfg.N));
        if (cfg.phase_mode == PhaseMode::optimal)
            throw ConfigError("the i.i.d. Rayleigh small-scale channel has no dominant tap to align; "
                              "use phase_mode random or none");
        SimConfig ml = cfg;
        ml.detector = Detector::ml;
        const Scenario sc(ml);
        const auto &p = sc.params();
        const int MN = p.size();
        const int Q = sc.elements();
        const auto &cb = sc.codebook();
        const detect::FrameCodebook &frames = *sc.frames();

        const CMat G_eq = pulse::dd_covariance(sc.gram().conditioned().cast<cd>(), p);
        const Eigen::LLT<CMat> G_llt(G_eq);
        const CMat L = G_llt.matrixL();
        const CMat G_inv = G_llt.solve(CMat::Identity(MN, MN));
        const double sigma_h2 = double(Q) / double(MN);

        ResultTable t;
        t.metadata = metadata(ml, "fer");
        t.metadata["sigma_h2"] = sigma_h2;
        t.columns = sweep_columns();
        const auto snrs = cfg.snr_points();
        const double bits_per_frame = double(MN * cb.bits_per_symbol());
        for (std::size_t i = 0; i < snrs.size(); ++i)
        {
            const auto t0 = std::chrono::steady_clock::now();
            const double sigma2 = noise_power(snrs[i], 1.0);
            const double bound = analysis::afer_union_bound(frames, sigma_h2, sigma2 * G_inv).bound;
            const CMat S = sigma2 * G_eq;
            const auto outcomes = parallel_map(cfg.frames, cfg.workers, [&](int f)
                                               {
                auto rng = frame_rng(cfg.seed, i, std::uint64_t(f));
                const auto bits = random_bits(std::size_t(MN * cb.bits_per_symbol()), rng);
                const CVec x = dd::vectorize(dd::qam_map(bits, cb, p));
                std::vector<CMat> Hq(std::size_t(Q), CMat(MN, MN));
                for (auto &H : Hq)
                    for (Eigen::Index c = 0; c < MN; ++c)
                        for (Eigen::Index r = 0; r < MN; ++r)
                            H(r, c) = std::sqrt(1.0 / MN) * pulse::complex_normal(rng);
                ris::RisState state = ris::RisState::uniform(Q, sc.phase_codebook().bits());
                if (cfg.phase_mode == PhaseMode::random)
                    state = ris::random_phases(Q, sc.phase_codebook(), rng);
                CMat H = CMat::Zero(MN, MN);
                for (int q = 0; q < Q; ++q)
                    H += state.coefficient(q) * Hq[std::size_t(q)];
                CVec w(MN);
                for (auto &v : w)
                    v = pulse::complex_normal(rng);
                const CMat Heff = G_eq * H;
                const CVec z = L * w;
                const CVec y = Heff * x + std::sqrt(sigma2) * z;
                const detect::DetectionContext ctx(Heff, S, cb);
                return detect::count_errors(detect::ml_detect(y, ctx, frames).symbols, x, cb); });
            long bit_errors = 0, frame_errors = 0;
            for (const auto &o : outcomes)
            {
                bit_errors += o.bit_errors;
                frame_errors += o.frame_error;
            }
            t.rows.push_back({snrs[i], double(bit_errors) / (bits_per_frame * cfg.frames),
                              double(frame_errors) / cfg.frames, nan, bound, nan, nan, double(cfg.frames),
                              seconds_since(t0)});
        }
        return t;
    }

    PaprResult run_papr_ccdf(const SimConfig &cfg)
    {
        cfg.validate();
        const auto t0 = std::chrono::steady_clock::now();
        const dd::GridParams ftn = cfg.grid();
        const dd::GridParams nyquist = ftn.with_alpha(1.0);
        const pulse::Pulse g(cfg.rrc_beta, cfg.rrc_span, cfg.oversample, ftn.sample_period());
        const dd::Codebook cb(cfg.qam_order);
        const auto values = parallel_map(cfg.frames, cfg.workers, [&](int f)
                                         {
            auto rng = frame_rng(cfg.seed, 0, std::uint64_t(f));
            const auto bits = random_bits(std::size_t(ftn.size() * cb.bits_per_symbol()), rng);
            const dd::TFGrid X = dd::isfft(dd::qam_map(bits, cb, ftn));
            return std::pair{analysis::papr(pulse::heisenberg_modulate(X, g, ftn)).db,
                             analysis::papr(pulse::heisenberg_modulate(X, g, nyquist)).db}; });

        PaprResult r;
        for (const auto &[a, b] : values)
        {
            r.ftn_db.push_back(a);
            r.nyquist_db.push_back(b);
        }
        const auto thresholds = analysis::default_ccdf_thresholds_db();
        r.ftn = analysis::ccdf(r.ftn_db, thresholds);
        r.nyquist = analysis::ccdf(r.nyquist_db, thresholds);

        r.table.metadata = metadata(cfg, "papr");
        for (const auto &[name, v] : {std::pair{"ftn", &r.ftn_db}, std::pair{"nyquist", &r.nyquist_db}})
            r.table.metadata["quantiles_db"][name] = {{"p50", analysis::quantile(*v, 0.5)},
                                                      {"p99", analysis::quantile(*v, 0.99)},
                                                      {"p999", analysis::quantile(*v, 0.999)}};
        r.table.metadata["seconds"] = seconds_since(t0);
        r.table.columns = {"threshold_db", "ccdf_ftn", "ccdf_nyquist"};
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            r.table.rows.push_back({thresholds[i], r.ftn.probability[i], r.nyquist.probability[i]});
        return r;
    }

    ResultTable run_se_sweep(const SimConfig &cfg)
    {
        const Scenario sc(cfg);
        const auto &p = sc.params();
        const auto snrs = cfg.snr_points();
        const auto t0 = std::chrono::steady_clock::now();
        const double norm = p.M() * p.delta_f() * p.N() * p.alpha() * p.T0();
        // The whitened eigenvalues do not depend on the noise level, so one decomposition serves every SNR point.
        const auto eta = parallel_map(cfg.frames, cfg.workers, [&](int f)
                                      {
            auto rng = frame_rng(cfg.seed, 0, std::uint64_t(f));
            const Realization real = draw_realization(sc, rng);
            const CMat H = sc.isi_matrix() * CMat(real.propagation.matrix());
            const RVec xi = analysis::spectral_efficiency(H, sc.gram(), p.size(), 1.0, p).xi;
            std::vector<double> out;
            for (double snr : snrs)
            {
                const double rho = 1.0 / noise_power(snr, 1.0);
                double bits = 0.0;
                for (double x : xi)
                    bits += std::log2(1.0 + rho * x);
                out.push_back(bits / norm);
            }
            return out; });

        ResultTable t;
        t.metadata = metadata(cfg, "se");
        t.columns = sweep_columns();
        const double seconds = seconds_since(t0) / double(snrs.size());
        for (std::size_t i = 0; i < snrs.size(); ++i)
        {
            double sum = 0.0;
            for (const auto &e : eta)
                sum += e[i];
            t.rows.push_back({snrs[i], nan, nan, sum / cfg.frames, nan, nan, nan, double(cfg.frames), seconds});
        }
        return t;
    }

    ResultTable run_ibo(const SimConfig &cfg)
    {
        const PaprResult pr = run_papr_ccdf(cfg);
        const double papr_db = analysis::quantile(pr.ftn_db, 0.999);
        ResultTable t;
        t.metadata = metadata(cfg, "ibo");
        t.metadata["papr_quantile"] = 0.999;
        t.columns = {"snr_db",        "papr_db",      "ibo_req_db",       "p_avg_dbm", "ibo_avail_db",
                     "p_avg_ris_dbm", "ibo_avail_ris_db", "feasible", "feasible_ris"};
        for (double snr : cfg.snr_points())
        {
            const auto r = analysis::ibo(papr_db, cfg.margin_db, cfg.p_sat_dbm, cfg.noise_dbm + snr, cfg.g_ris_db);
            t.rows.push_back({snr, r.papr_db, r.ibo_req_db, r.p_avg_dbm, r.ibo_avail_db, r.p_avg_ris_dbm,
                              r.ibo_avail_ris_db, double(r.feasible), double(r.feasible_ris)});
        }
        return t;
    }
}
