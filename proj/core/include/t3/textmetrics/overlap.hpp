#pragma once

#include <string_view>
#include <vector>

#include "t3/textmetrics/text.hpp"

namespace t3::textmetrics {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Clipped n-gram multiset overlap between candidate and reference tokens.
// precision = overlap / candidate n-gram count, recall = overlap / reference
// n-gram count; each is 0 when its denominator is 0.
RougeScore rouge_n(std::string_view candidate, std::string_view reference, int n);

// Longest common subsequence over token sequences; p = LCS/|cand|, r = LCS/|ref|.
RougeScore rouge_l(std::string_view candidate, std::string_view reference);

// Token-sequence variants for callers that already tokenized.
RougeScore rouge_n_tokens(const TokenList& candidate, const TokenList& reference, int n);
RougeScore rouge_l_tokens(const TokenList& candidate, const TokenList& reference);

// BLEU with clipped modified n-gram precisions for n = 1..max_n, geometric
// mean, and brevity penalty exp(1 - r/c) when the candidate is shorter than
// the closest reference (1 otherwise). Orders longer than the candidate are
// skipped so that bleu(c, {c}) == 1 holds for any non-empty c; a present
// order with zero matches contributes the smoothing epsilon instead of 0.
inline constexpr double kBleuSmoothingEpsilon = 1e-9;

double bleu(std::string_view candidate, const std::vector<std::string>& references,
            int max_n = 4);

}  // namespace t3::textmetrics
