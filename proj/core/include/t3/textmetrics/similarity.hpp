#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace t3::textmetrics {

// Inverse document frequencies for TF-IDF weighting. Tokens absent from the
// map weigh `fallback`; the default-constructed model is all-ones (pure TF).
struct IdfWeights {
  std::unordered_map<std::string, double> weights;
  double fallback = 1.0;

  double at(const std::string& token) const {
    auto it = weights.find(token);
    return it == weights.end() ? fallback : it->second;
  }
};

// Smooth IDF over a document collection: idf(t) = ln((1+N)/(1+df(t))) + 1.
// Unseen tokens fall back to ln(1+N) + 1.
IdfWeights build_idf(const std::vector<std::string>& documents);

// Cosine of the TF-IDF bag-of-words vectors of a and b; 0 when either
// vector is zero.
double cosine_similarity(std::string_view a, std::string_view b,
                         const IdfWeights& idf = IdfWeights{});

}  // namespace t3::textmetrics
