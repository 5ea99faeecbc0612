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

// Serial references against the OpenMP kernels. The second argument is the worker count.

#include <random>
#include <thread>

#include <benchmark/benchmark.h>

#include "otfsftn/harness.hpp"

using namespace otfsftn;
using namespace otfsftn::harness;

namespace
{
    SimConfig sweep_config(int M, int workers)
    {
        SimConfig c;
        c.M = M;
        c.N = M;
        c.Q = 4;
        c.frames = 32;
        c.snr_start = c.snr_stop = 10.0;
        c.workers = workers;
        return c;
    }

    CMat codewords(int n, int count)
    {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> d;
        CMat W(n, count);
        for (auto &v : W.reshaped())
            v = {d(rng), d(rng)};
        return W;
    }

    void ber_serial(benchmark::State &state)
    {
        const auto cfg = sweep_config(int(state.range(0)), 1);
        for (auto _ : state)
            benchmark::DoNotOptimize(run_ber_sweep_serial(cfg));
        state.SetItemsProcessed(state.iterations() * cfg.frames);
    }

    void ber_parallel(benchmark::State &state)
    {
        const auto cfg = sweep_config(int(state.range(0)), int(state.range(1)));
        for (auto _ : state)
            benchmark::DoNotOptimize(run_ber_sweep(cfg));
        state.SetItemsProcessed(state.iterations() * cfg.frames);
    }

    void union_serial(benchmark::State &state)
    {
        const int count = int(state.range(0));
        const CMat W = codewords(4, count);
        const CMat S = CMat::Identity(4, 4);
        for (auto _ : state)
            benchmark::DoNotOptimize(analysis::afer_union_bound_serial(W, 1.0, S));
    }

    void union_parallel(benchmark::State &state)
    {
        const int count = int(state.range(0));
        const CMat W = codewords(4, count);
        const CMat S = CMat::Identity(4, 4);
        for (auto _ : state)
            benchmark::DoNotOptimize(analysis::afer_union_bound(W, 1.0, S).bound);
    }

    const int threads = int(std::max(1u, std::thread::hardware_concurrency()));
}

BENCHMARK(ber_serial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(ber_parallel)->Args({8, threads})->Args({16, threads})->Unit(benchmark::kMillisecond);
BENCHMARK(union_serial)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(union_parallel)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
