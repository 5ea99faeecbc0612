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

#include "otfsftn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace otfsftn::analysis
{
    namespace
    {
        void require_hermitian(const CMat &S, const char *what)
        {
            if (S.rows() != S.cols() || S.rows() == 0)
                throw SizeError(std::string(what) + " must be a nonempty square matrix");
            const double scale = std::max(S.cwiseAbs().maxCoeff(), 1e-300);
            if ((S - S.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
                throw ParameterError(std::string(what) + " is not Hermitian");
        }

        Eigen::SelfAdjointEigenSolver<CMat> positive_evd(const CMat &S, const char *what)
        {
            require_hermitian(S, what);
            Eigen::SelfAdjointEigenSolver<CMat> evd(S);
            if (evd.info() != Eigen::Success || !(evd.eigenvalues().minCoeff() > 0.0))
                throw NumericalError(std::string(what) + " is not positive definite (smallest eigenvalue " +
                                     std::to_string(evd.eigenvalues().minCoeff()) + ")");
            return evd;
        }

        SeReport se_from_whitened(const CMat &B, double Ef, double sigma2, const dd::GridParams &params)
        {
            if (!(sigma2 > 0.0) || Ef < 0.0)
                throw ParameterError("noise power must be positive and frame energy nonnegative");
            SeReport r;
            r.Ef = Ef;
            r.sigma2 = sigma2;
            Eigen::SelfAdjointEigenSolver<CMat> evd(B.adjoint() * B, Eigen::EigenvaluesOnly);
            r.xi = evd.eigenvalues().cwiseMax(0.0);
            const double rho = Ef / (double(params.size()) * sigma2);
            for (double x : r.xi)
                r.bits += std::log2(1.0 + rho * x);
            r.eta = r.bits / (params.M() * params.delta_f() * params.N() * params.alpha() * params.T0());
            return r;
        }
    }

    double q_function(double x)
    {
        return 0.5 * std::erfc(x / std::numbers::sqrt2);
    }

    PepBound pep_chernoff(const CVec &delta, const CMat &H, const CMat &sigma)
    {
        require_hermitian(sigma, "noise covariance");
        if (H.rows() != sigma.rows() || H.cols() != delta.size())
            throw SizeError("difference vector, channel and covariance sizes disagree");
        const Eigen::LLT<CMat> llt(sigma);
        if (llt.info() != Eigen::Success)
            throw NumericalError("noise covariance is not positive definite");
        PepBound b;
        b.distance = llt.matrixL().solve(H * delta).squaredNorm();
        b.q_exact = q_function(std::sqrt(b.distance / 2.0));
        b.chernoff = std::exp(-b.distance / 4.0);
        return b;
    }

    RVec precision_eigenvalues(const CMat &sigma)
    {
        RVec nu = positive_evd(sigma, "noise covariance").eigenvalues().cwiseInverse();
        std::sort(nu.begin(), nu.end());
        return nu;
    }

    double pep_rayleigh_product(double delta_norm2, double sigma_h2, const RVec &nu)
    {
        const double a = 0.25 * sigma_h2 * delta_norm2;
        double p = 1.0;
        for (double v : nu)
            p /= 1.0 + a * v;
        return p;
    }

    RayleighPep pep_rayleigh_avg(const CVec &delta, double sigma_h2, const CMat &sigma)
    {
        if (!(sigma_h2 > 0.0))
            throw ParameterError("channel variance must be positive");
        if (delta.size() != sigma.rows())
            throw SizeError("difference vector and covariance sizes disagree");
        const auto evd = positive_evd(sigma, "noise covariance");
        RayleighPep r;
        r.product = pep_rayleigh_product(delta.squaredNorm(), sigma_h2, evd.eigenvalues().cwiseInverse());

        const Eigen::Index n = delta.size();
        const CMat precision = evd.eigenvectors() * evd.eigenvalues().cwiseInverse().asDiagonal() *
                               evd.eigenvectors().adjoint();
        const CMat outer = delta.conjugate() * delta.transpose();
        CMat K = CMat::Identity(n * n, n * n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                K.block(i * n, j * n, n, n) += (0.25 * sigma_h2 * outer(i, j)) * precision;
        r.determinant = 1.0 / K.partialPivLu().determinant().real();
        return r;
    }

    AferReport afer_union_bound(const CMat &words, double sigma_h2, const CMat &sigma)
    {
        if (!(sigma_h2 > 0.0))
            throw ParameterError("channel variance must be positive");
        if (words.rows() != sigma.rows())
            throw SizeError("codeword length and covariance size disagree");
        const auto S = std::uint64_t(words.cols());
        if (S > detect::default_ml_cap)
            throw CapacityError("union bound over " + std::to_string(S) + " codewords exceeds the cap of " +
                                std::to_string(detect::default_ml_cap));

        AferReport r;
        r.codebook_size = S;
        r.sigma_h2 = sigma_h2;
        r.nu = precision_eigenvalues(sigma);
        if (S < 2)
            return r;

        const bool keep = S <= pair_matrix_limit;
        if (keep)
            r.pep = RMat::Ones(Eigen::Index(S), Eigen::Index(S));
        std::vector<double> row_sum(S, 0.0);
        std::vector<std::uint64_t> row_degenerate(S, 0);
        const auto n = Eigen::Index(S);

#pragma omp parallel for schedule(dynamic, 8)
        for (Eigen::Index i = 0; i < n; ++i)
        {
            double sum = 0.0;
            std::uint64_t degenerate = 0;
            for (Eigen::Index j = i + 1; j < n; ++j)
            {
                const double d2 = (words.col(i) - words.col(j)).squaredNorm();
                const double p = pep_rayleigh_product(d2, sigma_h2, r.nu);
                if (d2 == 0.0)
                    ++degenerate;
                sum += p;
                if (keep)
                    r.pep(i, j) = r.pep(j, i) = p;
            }
            row_sum[std::size_t(i)] = sum;
            row_degenerate[std::size_t(i)] = degenerate;
        }

        double total = 0.0;
        for (std::uint64_t i = 0; i < S; ++i)
        {
            total += row_sum[i];
            r.degenerate_pairs += row_degenerate[i];
        }
        r.bound = 2.0 * total / double(S);

        if (keep)
        {
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = i + 1; j < n; ++j)
                {
                    const double d2 = (words.col(i) - words.col(j)).squaredNorm();
                    if (d2 > 0.0)
                        r.lambda.push_back(d2);
                }
            std::sort(r.lambda.begin(), r.lambda.end());
            r.lambda.erase(std::unique(r.lambda.begin(), r.lambda.end(),
                                       [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
                           r.lambda.end());
        }
        return r;
    }

    AferReport afer_union_bound(const detect::FrameCodebook &frames, double sigma_h2, const CMat &sigma)
    {
        return afer_union_bound(frames.words(), sigma_h2, sigma);
    }

    double afer_union_bound_serial(const CMat &words, double sigma_h2, const CMat &sigma)
    {
        const RVec nu = precision_eigenvalues(sigma);
        double total = 0.0;
        for (Eigen::Index i = 0; i < words.cols(); ++i)
            for (Eigen::Index j = 0; j < words.cols(); ++j)
                if (i != j)
                    total += pep_rayleigh_product((words.col(i) - words.col(j)).squaredNorm(), sigma_h2, nu);
        return words.cols() ? total / double(words.cols()) : 0.0;
    }

    MiReport mutual_information(const CMat &H, const CMat &sigma_x, const CMat &sigma_z)
    {
        if (H.rows() != sigma_z.rows() || H.cols() != sigma_x.rows())
            throw SizeError("channel and covariance sizes disagree");
        const auto noise = positive_evd(sigma_z, "noise covariance");
        require_hermitian(sigma_x, "input covariance");
        Eigen::SelfAdjointEigenSolver<CMat> input(sigma_x);
        const double tol = 1e-12 * std::max(1.0, input.eigenvalues().cwiseAbs().maxCoeff());
        if (input.eigenvalues().minCoeff() < -tol)
            throw ParameterError("input covariance is not positive semidefinite");
        const CMat root = input.eigenvectors() * input.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                          input.eigenvectors().adjoint();

        const CMat B = noise.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                       (noise.eigenvectors().adjoint() * H * root);
        MiReport r;
        Eigen::SelfAdjointEigenSolver<CMat> evd(B.adjoint() * B, Eigen::EigenvaluesOnly);
        r.xi = evd.eigenvalues().cwiseMax(0.0);
        for (double x : r.xi)
            r.bits += std::log2(1.0 + x);
        return r;
    }

    SeReport spectral_efficiency(const CMat &H, const CMat &noise_shape, double Ef, double sigma2,
                                 const dd::GridParams &params)
    {
        if (H.rows() != params.size() || H.cols() != params.size() || noise_shape.rows() != params.size())
            throw SizeError("channel and noise shape must be MN x MN");
        const auto evd = positive_evd(noise_shape, "noise shape");
        const CMat B = evd.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() * (evd.eigenvectors().adjoint() * H);
        return se_from_whitened(B, Ef, sigma2, params);
    }

    SeReport spectral_efficiency(const CMat &H, const pulse::GramMatrix &gram, double Ef, double sigma2,
                                 const dd::GridParams &params)
    {
        if (H.rows() != params.size() || H.cols() != params.size() || gram.size() != params.size())
            throw SizeError("channel and Gram matrix must be MN x MN");
        const CMat B = gram.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                       (gram.eigenvectors().transpose().cast<cd>() * H);
        return se_from_whitened(B, Ef, sigma2, params);
    }

    Papr papr(std::span<const cd> samples)
    {
        double peak = 0.0, sum = 0.0;
        for (cd s : samples)
        {
            const double p = std::norm(s);
            peak = std::max(peak, p);
            sum += p;
        }
        if (samples.empty() || !(sum > 0.0))
            throw ParameterError("PAPR is undefined for an empty or all-zero signal");
        Papr r;
        r.linear = peak / (sum / double(samples.size()));
        r.db = linear_to_db(r.linear);
        return r;
    }

    Papr papr(const pulse::TimeSignal &signal)
    {
        return papr(std::span<const cd>(signal.samples.data() + signal.frame_begin,
                                        std::size_t(signal.frame_end - signal.frame_begin)));
    }

    CcdfCurve ccdf(std::span<const double> values, std::span<const double> thresholds)
    {
        if (values.empty())
            throw ParameterError("CCDF needs at least one sample");
        std::vector<double> sorted(values.begin(), values.end());
        std::sort(sorted.begin(), sorted.end());
        CcdfCurve c;
        c.thresholds.assign(thresholds.begin(), thresholds.end());
        for (double t : thresholds)
        {
            const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
            c.probability.push_back(double(above) / double(sorted.size()));
        }
        return c;
    }

    std::vector<double> default_ccdf_thresholds_db()
    {
        std::vector<double> t(131);
        for (int i = 0; i < 131; ++i)
            t[std::size_t(i)] = i / 10.0;
        return t;
    }

    double quantile(std::span<const double> values, double p)
    {
        if (values.empty() || !(p > 0.0 && p <= 1.0))
            throw ParameterError("quantile needs samples and p in (0, 1]");
        std::vector<double> v(values.begin(), values.end());
        const auto k = std::size_t(std::max(0.0, std::ceil(p * double(v.size())) - 1.0));
        std::nth_element(v.begin(), v.begin() + std::ptrdiff_t(k), v.end());
        return v[k];
    }

    IboReport ibo(double papr_db, double margin_db, double p_sat_dbm, double p_avg_dbm, std::optional<double> g_ris_db)
    {
        if (margin_db < 0.0)
            throw ParameterError("design margin must be nonnegative");
        IboReport r;
        r.papr_db = papr_db;
        r.margin_db = margin_db;
        r.ibo_req_db = papr_db + margin_db;
        r.p_sat_dbm = p_sat_dbm;
        r.p_avg_dbm = p_avg_dbm;
        r.ibo_avail_db = p_sat_dbm - p_avg_dbm;
        r.feasible = r.ibo_avail_db >= r.ibo_req_db;
        r.g_ris_db = g_ris_db;
        r.p_avg_ris_dbm = p_avg_dbm - g_ris_db.value_or(0.0);
        r.ibo_avail_ris_db = p_sat_dbm - r.p_avg_ris_dbm;
        r.feasible_ris = r.ibo_avail_ris_db >= r.ibo_req_db;
        return r;
    }
}
