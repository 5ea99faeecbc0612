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

#include "otfsftn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace otfsftn::channel
{
    DelayPowerProfile DelayPowerProfile::from_entries(std::vector<double> delays_s, std::vector<double> powers_db)
    {
        if (delays_s.empty() || delays_s.size() != powers_db.size())
            throw ConfigError("delay-power profile needs matching, nonempty delay and power lists");
        for (std::size_t i = 0; i < delays_s.size(); ++i)
        {
            if (!(delays_s[i] >= 0.0) || !std::isfinite(delays_s[i]))
                throw ConfigError("profile delays must be finite and nonnegative");
            if (i > 0 && !(delays_s[i] > delays_s[i - 1]))
                throw ConfigError("profile delays must be strictly increasing");
            if (!std::isfinite(powers_db[i]))
                throw ConfigError("profile powers must be finite");
        }
        DelayPowerProfile p;
        p.delays = std::move(delays_s);
        p.powers_db = std::move(powers_db);
        p.linear.resize(p.powers_db.size());
        std::transform(p.powers_db.begin(), p.powers_db.end(), p.linear.begin(), db_to_linear);
        const double total = std::accumulate(p.linear.begin(), p.linear.end(), 0.0);
        for (double &v : p.linear)
            v /= total;
        return p;
    }

    DelayPowerProfile eva_profile()
    {
        std::vector<double> delays_ns{0, 30, 150, 310, 370, 710, 1090, 1730, 2510};
        std::vector<double> delays(delays_ns.size());
        std::transform(delays_ns.begin(), delays_ns.end(), delays.begin(), [](double ns) { return ns * 1e-9; });
        return DelayPowerProfile::from_entries(std::move(delays),
                                               {0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9});
    }

    DelayPowerProfile load_profile(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open delay-power profile '" + path + "'");
        std::vector<double> delays, powers;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#')
                continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream fields(line);
            double delay_ns = 0.0, power_db = 0.0;
            std::string rest;
            if (!(fields >> delay_ns >> power_db) || (fields >> rest))
                throw ConfigError(path + ":" + std::to_string(lineno) + ": expected `delay_ns,power_db`");
            delays.push_back(delay_ns * 1e-9);
            powers.push_back(power_db);
        }
        return DelayPowerProfile::from_entries(std::move(delays), std::move(powers));
    }

    double max_doppler(double f_c, double v_kmh)
    {
        return f_c * (v_kmh / 3.6) / speed_of_light;
    }

    namespace
    {
        // Removes floating noise on values that are integers by construction
        double snap(double x)
        {
            const double r = std::round(x);
            return std::abs(x - r) < 1e-9 ? r : x;
        }
    }

    TapIndex quantize_taps(double tau, double nu, const dd::GridParams &params)
    {
        if (!(tau >= 0.0))
            throw ParameterError("path delay must be nonnegative");
        TapIndex t;
        t.delay = int(std::floor(snap(tau * params.M() * params.delta_f())));
        const double x = snap(nu * params.N() * params.T_F());
        t.doppler = int(std::floor(x + 0.5));
        t.frac = x - t.doppler;
        return t;
    }

    std::vector<Path> sample_paths(const DelayPowerProfile &profile, double nu_max, const dd::GridParams &params,
                                   std::mt19937_64 &rng)
    {
        if (!(nu_max >= 0.0))
            throw ParameterError("maximum Doppler must be nonnegative");
        std::uniform_real_distribution<double> angle(0.0, two_pi);
        std::vector<Path> paths(profile.size());
        for (std::size_t i = 0; i < profile.size(); ++i)
        {
            Path &p = paths[i];
            p.gain = std::sqrt(profile.linear[i]) * pulse::complex_normal(rng);
            p.delay = profile.delays[i];
            p.doppler = nu_max * std::cos(angle(rng));
            p.taps = quantize_taps(p.delay, p.doppler, params);
        }
        return paths;
    }

    std::vector<CascadedPath> cascade(std::span<const Path> link1, std::span<const Path> link2,
                                      const dd::GridParams &params)
    {
        if (link1.empty() || link2.empty())
            throw ParameterError("cascade needs two nonempty links");
        std::vector<CascadedPath> out;
        out.reserve(link1.size() * link2.size());
        for (std::size_t i = 0; i < link1.size(); ++i)
            for (std::size_t j = 0; j < link2.size(); ++j)
            {
                CascadedPath c;
                c.gain = link1[i].gain * link2[j].gain;
                c.delay = link1[i].delay + link2[j].delay;
                c.doppler = link1[i].doppler + link2[j].doppler;
                c.taps = quantize_taps(c.delay, c.doppler, params);
                c.first = int(i);
                c.second = int(j);
                out.push_back(c);
            }
        return out;
    }

    IsiProfile IsiProfile::ideal()
    {
        return {RVec::Ones(1)};
    }

    IsiProfile IsiProfile::from(const pulse::Autocorrelation &g, const dd::GridParams &params)
    {
        if (g.is_ideal())
            return ideal();
        const double spacing = params.alpha() * params.sample_period();
        const int limit = std::min(params.size() - 1, int(std::ceil(g.reach() / spacing)));
        RVec taps(limit + 1);
        for (int d = 0; d <= limit; ++d)
            taps(d) = g(d * params.alpha() * params.sample_period());
        int last = limit;
        while (last > 0 && taps(last) == 0.0)
            --last;
        return {taps.head(last + 1)};
    }

    RMat IsiProfile::toeplitz(int size) const
    {
        RMat T = RMat::Zero(size, size);
        for (int n = 0; n < size; ++n)
            for (int m = std::max(0, n - reach()); m <= std::min(size - 1, n + reach()); ++m)
                T(n, m) = taps(std::abs(n - m));
        return T;
    }

    Propagation::Propagation(const dd::GridParams &params)
        : size_(params.size()), sample_period_(params.ftn_sample_period())
    {
    }

    void Propagation::add(std::span<const CascadedPath> paths, cd weight)
    {
        for (const auto &p : paths)
        {
            const int eps = p.taps.delay;
            if (eps < 0 || eps >= size_)
                throw ConfigError("delay tap " + std::to_string(eps) + " does not fit a frame of " +
                                  std::to_string(size_) + " samples");
            auto it = std::find_if(branches_.begin(), branches_.end(), [&](const Branch &b) { return b.delay == eps; });
            if (it == branches_.end())
            {
                branches_.push_back({eps, CVec::Zero(size_)});
                it = branches_.end() - 1;
            }
            const double w = two_pi * p.doppler * sample_period_;
            const cd step = std::polar(1.0, w);
            cd phasor = weight * p.gain * std::polar(1.0, -w * eps);
            for (int c = 0; c < size_; ++c)
            {
                it->gain(c) += phasor;
                phasor *= step;
            }
        }
        std::sort(branches_.begin(), branches_.end(), [](const Branch &a, const Branch &b) { return a.delay < b.delay; });
    }

    CVec Propagation::apply(const CVec &s) const
    {
        if (s.size() != size_)
            throw SizeError("propagation input length mismatch");
        CVec out = CVec::Zero(size_);
        for (const auto &b : branches_)
            for (int c = 0; c < size_; ++c)
            {
                const int src = c - b.delay < 0 ? c - b.delay + size_ : c - b.delay;
                out(c) += b.gain(c) * s(src);
            }
        return out;
    }

    CVec Propagation::apply_adjoint(const CVec &y) const
    {
        if (y.size() != size_)
            throw SizeError("propagation input length mismatch");
        CVec out = CVec::Zero(size_);
        for (const auto &b : branches_)
            for (int c = 0; c < size_; ++c)
            {
                const int dst = c - b.delay < 0 ? c - b.delay + size_ : c - b.delay;
                out(dst) += std::conj(b.gain(c)) * y(c);
            }
        return out;
    }

    Eigen::SparseMatrix<cd> Propagation::matrix() const
    {
        std::vector<Eigen::Triplet<cd>> triplets;
        triplets.reserve(branches_.size() * std::size_t(size_));
        for (const auto &b : branches_)
            for (int c = 0; c < size_; ++c)
                triplets.emplace_back(c, (c - b.delay + size_) % size_, b.gain(c));
        Eigen::SparseMatrix<cd> C(size_, size_);
        C.setFromTriplets(triplets.begin(), triplets.end());
        return C;
    }

    CMat time_channel_matrix(const Propagation &propagation, const IsiProfile &isi)
    {
        const int n = propagation.size();
        const int w = isi.reach();
        CMat H = CMat::Zero(n, n);
        // column b of C holds gain(c) at row c = (b + eps) mod n; H = G * C adds gain(c) * G.col(c)
        for (const auto &br : propagation.branches())
            for (int b = 0; b < n; ++b)
            {
                const int c = (b + br.delay) % n;
                const cd v = br.gain(c);
                for (int a = std::max(0, c - w); a <= std::min(n - 1, c + w); ++a)
                    H(a, b) += v * isi.taps(std::abs(a - c));
            }
        return H;
    }

    ElementChannel build_element_channel(std::span<const CascadedPath> paths, const dd::GridParams &params,
                                         const IsiProfile &isi, int index)
    {
        Propagation prop(params);
        prop.add(paths);
        return {index, std::vector<CascadedPath>(paths.begin(), paths.end()), time_channel_matrix(prop, isi)};
    }

    ElementChannel build_element_channel(std::span<const CascadedPath> paths, const dd::GridParams &params,
                                         const pulse::Autocorrelation &g, int index)
    {
        return build_element_channel(paths, params, IsiProfile::from(g, params), index);
    }

    CVec apply_channel(std::span<const ElementChannel> elements, std::span<const cd> phi, const CVec &s,
                       const CVec &z)
    {
        if (elements.size() != phi.size())
            throw SizeError("phase vector length does not match the element count");
        if (s.size() != z.size())
            throw SizeError("signal and noise lengths differ");
        CVec y = z;
        for (std::size_t q = 0; q < elements.size(); ++q)
        {
            const CMat &H = elements[q].matrix;
            if (H.rows() != s.size() || H.cols() != s.size())
                throw SizeError("element channel size does not match the signal");
            y.noalias() += phi[q] * (H * s);
        }
        return y;
    }

    CMat to_dd(const CMat &H_time, const dd::GridParams &params)
    {
        const CMat left = dd::stream_to_dd_columns(H_time, params);
        return dd::stream_to_dd_columns(left.adjoint(), params).adjoint();
    }
}
