// Microbenchmarks for the hot paths: sparse matrix-vector products, the full
// diffusion loop, end-to-end index builds and single-query latency.

#include <benchmark/benchmark.h>

#include <hgr/index.hpp>
#include <hgr/retrieval.hpp>
#include <hgr/scoring.hpp>

#include "fixtures.hpp"

#include <cstdio>
#include <sstream>
#include <string>

namespace {

std::string syntheticCorpus(int docs) {
    static const char* kNames[] = {
        "Aldren", "Brakely", "Corvale", "Dunmoor", "Eastwick", "Farrow",  "Gelderan",
        "Hallsey", "Irondale", "Jesmyn", "Kelderly", "Loomis",  "Marivel", "Norwick",
        "Ostergard", "Pellam", "Quenby", "Rothwell", "Selvane", "Tamworth",
    };
    const int name_count = static_cast<int>(sizeof(kNames) / sizeof(kNames[0]));
    std::ostringstream out;
    for (int d = 0; d < docs; ++d) {
        out << "{\"id\":\"doc-" << d << "\",\"text\":\"In " << (1800 + d % 90)
            << " the envoy " << kNames[d % name_count]
            << " traveled to the border crossing to meet " << kNames[(d * 7 + 3) % name_count]
            << ". The agreement was recorded by " << kNames[(d * 13 + 5) % name_count]
            << " in the provincial ledger.\"}\n";
    }
    return out.str();
}

void BM_SparseMatVec(benchmark::State& state) {
    auto index = fixtures::makeSyntheticIndex(state.range(0), state.range(0), 10, 7);
    hgr::SparseVector x(index.h_str.cols());
    for (std::int64_t i = 0; i < index.h_str.cols(); i += 3) x.set(i, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(index.h_str.multiply(x));
}
BENCHMARK(BM_SparseMatVec)->Arg(100)->Arg(1000);

void BM_Diffuse(benchmark::State& state) {
    auto index = fixtures::makeSyntheticIndex(state.range(0), state.range(0), 10, 7);
    auto ctx = hgr::buildQueryContext(index, "Entity 1 and Entity 2 and Entity 3");
    for (auto _ : state)
        benchmark::DoNotOptimize(hgr::diffuse(ctx, index, index.config.diffusion));
}
BENCHMARK(BM_Diffuse)->Arg(100)->Arg(1000);

void BM_BuildIndex(benchmark::State& state) {
    auto path = fixtures::writeTempFile("bench_corpus.jsonl",
                                        syntheticCorpus(static_cast<int>(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(hgr::buildIndex(path, hgr::EngineConfig{}));
    std::remove(path.c_str());
}
BENCHMARK(BM_BuildIndex)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_AnswerQuery(benchmark::State& state) {
    auto path = fixtures::writeTempFile("bench_corpus_q.jsonl",
                                        syntheticCorpus(static_cast<int>(state.range(0))));
    auto index = hgr::buildIndex(path, hgr::EngineConfig{});
    std::remove(path.c_str());
    hgr::answerQuery(index, "warmup");  // build the cached PPR adjacency
    for (auto _ : state)
        benchmark::DoNotOptimize(hgr::answerQuery(index, "Where did the envoy Aldren travel?"));
}
BENCHMARK(BM_AnswerQuery)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
