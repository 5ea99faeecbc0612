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

#ifndef OTFSFTN_ANALYSIS_HPP
#define OTFSFTN_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "otfsftn/common.hpp"
#include "otfsftn/dd_core.hpp"
#include "otfsftn/detect.hpp"
#include "otfsftn/ftn_pulse.hpp"

namespace otfsftn::analysis
{
    // Gaussian tail probability through erfc
    double q_function(double x);

    struct PepBound
    {
        double distance = 0.0; // d = D^H H^H Sigma^-1 H D
        double q_exact = 0.0;  // Q(sqrt(d / 2))
        double chernoff = 0.0; // exp(-d / 4)
    };

    PepBound pep_chernoff(const CVec &delta, const CMat &H, const CMat &sigma);

    // Eigenvalues nu_m of Sigma^-1 for a Hermitian positive definite covariance
    RVec precision_eigenvalues(const CMat &sigma);

    // prod_m (1 + sigma_h2 / 4 * |D|^2 nu_m)^-1, the rank-one eigenproduct
    double pep_rayleigh_product(double delta_norm2, double sigma_h2, const RVec &nu);

    struct RayleighPep
    {
        double product = 1.0;     // eigenvalue product
        double determinant = 1.0; // det(I + sigma_h2 / 4 conj(D) D^T (x) Sigma^-1)^-1
    };

    RayleighPep pep_rayleigh_avg(const CVec &delta, double sigma_h2, const CMat &sigma);

    struct AferReport
    {
        double bound = 0.0; // (1 / |S|) sum_{i != j} PEP(i, j), not clipped to 1
        std::uint64_t codebook_size = 0;
        std::uint64_t degenerate_pairs = 0; // unordered pairs with identical codewords
        double sigma_h2 = 0.0;
        RVec nu;                  // eigenvalues of Sigma^-1
        std::vector<double> lambda; // distinct nonzero |x_i - x_j|^2, ascending
        RMat pep;                 // per-pair terms, filled only for |S| <= pair_matrix_limit
    };

    inline constexpr std::uint64_t pair_matrix_limit = 256;

    // Union bound over the codeword columns of words. Rows of the pair triangle run in parallel
    // and are reduced in index order.
    AferReport afer_union_bound(const CMat &words, double sigma_h2, const CMat &sigma);
    AferReport afer_union_bound(const detect::FrameCodebook &frames, double sigma_h2, const CMat &sigma);

    // Single-threaded reference over every ordered pair
    double afer_union_bound_serial(const CMat &words, double sigma_h2, const CMat &sigma);

    struct MiReport
    {
        RVec xi;          // eigenvalues of B^H B, B = Lambda^-1/2 V^H H Sigma_x^1/2
        double bits = 0.0; // per frame
    };

    // log2 det(I + Sigma_z^-1 H Sigma_x H^H) via the eigendecomposition of Sigma_z
    MiReport mutual_information(const CMat &H, const CMat &sigma_x, const CMat &sigma_z);

    struct SeReport
    {
        RVec xi; // eigenvalues of B^H B, B = Lambda^-1/2 V^H H with G = V Lambda V^H
        double bits = 0.0;
        double eta = 0.0; // bits/s/Hz
        double Ef = 0.0, sigma2 = 0.0;
    };

    // eta = sum log2(1 + Ef xi / (MN sigma2)) / (M delta_f N alpha T0).
    // noise_shape is the covariance shape in the domain of H.
    SeReport spectral_efficiency(const CMat &H, const CMat &noise_shape, double Ef, double sigma2,
                                 const dd::GridParams &params);
    // H in the symbol-stream domain, whitened with the conditioned Gram eigensystem
    SeReport spectral_efficiency(const CMat &H, const pulse::GramMatrix &gram, double Ef, double sigma2,
                                 const dd::GridParams &params);

    struct Papr
    {
        double linear = 0.0;
        double db = 0.0;
    };

    Papr papr(std::span<const cd> samples);
    // Over the frame interval of the waveform
    Papr papr(const pulse::TimeSignal &signal);

    struct CcdfCurve
    {
        std::vector<double> thresholds;
        std::vector<double> probability; // fraction of values strictly above each threshold
    };

    CcdfCurve ccdf(std::span<const double> values, std::span<const double> thresholds);

    // 0 to 13 dB in 0.1 dB steps
    std::vector<double> default_ccdf_thresholds_db();

    // Smallest value v with at least a fraction p of the sample at or below v
    double quantile(std::span<const double> values, double p);

    struct IboReport
    {
        double papr_db = 0.0;
        double margin_db = 0.0;
        double ibo_req_db = 0.0;
        double p_sat_dbm = 0.0;
        double p_avg_dbm = 0.0;
        double ibo_avail_db = 0.0;
        bool feasible = false;
        std::optional<double> g_ris_db;
        double p_avg_ris_dbm = 0.0;
        double ibo_avail_ris_db = 0.0;
        bool feasible_ris = false;
    };

    IboReport ibo(double papr_db, double margin_db, double p_sat_dbm, double p_avg_dbm,
                  std::optional<double> g_ris_db = std::nullopt);
}

#endif
