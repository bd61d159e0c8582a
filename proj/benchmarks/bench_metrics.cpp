#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "t3/eval/stats.hpp"
#include "t3/textmetrics/overlap.hpp"
#include "t3/textmetrics/similarity.hpp"
#include "t3/textmetrics/text.hpp"

namespace {

std::string make_text(std::size_t n_words, std::uint64_t seed) {
  static const char* kWords[] = {"harbor", "signal", "quiet",  "meadow", "stone",
                                 "voices", "bright", "answer", "river",  "garden",
                                 "walked", "under",  "seven",  "light",  "cold"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kWords) - 1);
  std::string text;
  for (std::size_t i = 0; i < n_words; ++i) {
    if (!text.empty()) text += ' ';
    text += kWords[pick(rng)];
    if (i % 12 == 11) text += '.';
  }
  return text;
}

void BM_Tokenize(benchmark::State& state) {
  std::string text = make_text(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(t3::textmetrics::tokenize(text));
  }
}
BENCHMARK(BM_Tokenize)->Arg(100)->Arg(1000)->Arg(10000);

void BM_RougeL(benchmark::State& state) {
  std::string candidate = make_text(static_cast<std::size_t>(state.range(0)), 2);
  std::string reference = make_text(static_cast<std::size_t>(state.range(0)) * 4, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(t3::textmetrics::rouge_l(candidate, reference));
  }
}
BENCHMARK(BM_RougeL)->Arg(50)->Arg(200)->Arg(800);

void BM_Bleu(benchmark::State& state) {
  std::string candidate = make_text(static_cast<std::size_t>(state.range(0)), 4);
  std::vector<std::string> references = {make_text(static_cast<std::size_t>(state.range(0)), 5),
                                         make_text(static_cast<std::size_t>(state.range(0)), 6)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(t3::textmetrics::bleu(candidate, references));
  }
}
BENCHMARK(BM_Bleu)->Arg(100)->Arg(1000);

void BM_Flesch(benchmark::State& state) {
  std::string text = make_text(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(t3::textmetrics::flesch(text));
  }
}
BENCHMARK(BM_Flesch)->Arg(100)->Arg(1000)->Arg(10000);

void BM_CosineSimilarity(benchmark::State& state) {
  std::string summary = make_text(static_cast<std::size_t>(state.range(0)), 8);
  std::string source = make_text(static_cast<std::size_t>(state.range(0)) * 8, 9);
  auto idf = t3::textmetrics::build_idf({source});
  for (auto _ : state) {
    benchmark::DoNotOptimize(t3::textmetrics::cosine_similarity(summary, source, idf));
  }
}
BENCHMARK(BM_CosineSimilarity)->Arg(50)->Arg(400);

void BM_WelchT(benchmark::State& state) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(state.range(0)));
  std::vector<double> b(static_cast<std::size_t>(state.range(0)));
  for (double& v : a) v = dist(rng);
  for (double& v : b) v = dist(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(t3::eval::welch_t(a, b));
  }
}
BENCHMARK(BM_WelchT)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
