#include "t3/textmetrics/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "t3/error.hpp"

namespace t3::textmetrics {

namespace {

double f1_of(double p, double r) {
  return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

// N-grams joined with '\x1f' so multi-token grams hash as one key.
std::map<std::string, long> ngram_counts(const TokenList& tokens, int n) {
  std::map<std::string, long> counts;
  if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key.push_back('\x1f');
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

long clipped_overlap(const std::map<std::string, long>& cand,
                     const std::map<std::string, long>& ref) {
  long overlap = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

std::size_t lcs_length(const TokenList& a, const TokenList& b) {
  if (a.empty() || b.empty()) return 0;
  // Two-row DP over token sequences.
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

RougeScore rouge_n_tokens(const TokenList& candidate, const TokenList& reference, int n) {
  if (n < 1) throw PreconditionError("rouge_n: n must be >= 1");
  auto cand_grams = ngram_counts(candidate, n);
  auto ref_grams = ngram_counts(reference, n);
  long cand_total = 0, ref_total = 0;
  for (const auto& [_, c] : cand_grams) cand_total += c;
  for (const auto& [_, c] : ref_grams) ref_total += c;
  long overlap = clipped_overlap(cand_grams, ref_grams);

  RougeScore s;
  s.precision = cand_total > 0 ? static_cast<double>(overlap) / cand_total : 0.0;
  s.recall = ref_total > 0 ? static_cast<double>(overlap) / ref_total : 0.0;
  s.f1 = f1_of(s.precision, s.recall);
  return s;
}

RougeScore rouge_n(std::string_view candidate, std::string_view reference, int n) {
  return rouge_n_tokens(tokenize(candidate), tokenize(reference), n);
}

RougeScore rouge_l_tokens(const TokenList& candidate, const TokenList& reference) {
  RougeScore s;
  if (candidate.empty() || reference.empty()) return s;
  double lcs = static_cast<double>(lcs_length(candidate, reference));
  s.precision = lcs / static_cast<double>(candidate.size());
  s.recall = lcs / static_cast<double>(reference.size());
  s.f1 = f1_of(s.precision, s.recall);
  return s;
}

RougeScore rouge_l(std::string_view candidate, std::string_view reference) {
  return rouge_l_tokens(tokenize(candidate), tokenize(reference));
}

double bleu(std::string_view candidate, const std::vector<std::string>& references,
            int max_n) {
  if (max_n < 1) throw PreconditionError("bleu: max_n must be >= 1");
  TokenList cand = tokenize(candidate);
  if (cand.empty() || references.empty()) return 0.0;

  std::vector<TokenList> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(tokenize(r));

  // Closest reference length to the candidate, ties to the shorter.
  std::size_t c_len = cand.size();
  std::size_t r_len = refs[0].size();
  for (const auto& r : refs) {
    auto diff = [&](std::size_t len) {
      return len > c_len ? len - c_len : c_len - len;
    };
    if (diff(r.size()) < diff(r_len) || (diff(r.size()) == diff(r_len) && r.size() < r_len)) {
      r_len = r.size();
    }
  }

  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    auto cand_grams = ngram_counts(cand, n);
    if (cand_grams.empty()) continue;  // candidate too short for this order
    long total = 0;
    for (const auto& [_, c] : cand_grams) total += c;

    // Clip against the max count over all references.
    std::map<std::string, long> max_ref;
    for (const auto& r : refs) {
      for (const auto& [gram, count] : ngram_counts(r, n)) {
        auto [it, _] = max_ref.try_emplace(gram, count);
        it->second = std::max(it->second, count);
      }
    }
    long matched = clipped_overlap(cand_grams, max_ref);
    double p = matched > 0 ? static_cast<double>(matched) / total : kBleuSmoothingEpsilon;
    log_sum += std::log(p);
    ++orders;
  }
  if (orders == 0) return 0.0;
  double geo_mean = std::exp(log_sum / orders);
  double bp = c_len >= r_len ? 1.0
                             : std::exp(1.0 - static_cast<double>(r_len) /
                                                  static_cast<double>(c_len));
  return geo_mean * bp;
}

}  // namespace t3::textmetrics
