#include "t3/textmetrics/similarity.hpp"

#include <cmath>
#include <set>

#include "t3/textmetrics/text.hpp"

namespace t3::textmetrics {

namespace {

std::unordered_map<std::string, double> tf_idf_vector(std::string_view text,
                                                      const IdfWeights& idf) {
  std::unordered_map<std::string, double> vec;
  for (auto& token : tokenize(text)) vec[token] += 1.0;
  for (auto& [token, weight] : vec) weight *= idf.at(token);
  return vec;
}

}  // namespace

IdfWeights build_idf(const std::vector<std::string>& documents) {
  std::unordered_map<std::string, long> doc_freq;
  for (const auto& doc : documents) {
    std::set<std::string> seen;
    for (auto& token : tokenize(doc)) seen.insert(std::move(token));
    for (const auto& token : seen) ++doc_freq[token];
  }
  double n = static_cast<double>(documents.size());
  IdfWeights idf;
  idf.fallback = std::log(1.0 + n) + 1.0;
  for (const auto& [token, df] : doc_freq) {
    idf.weights[token] = std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0;
  }
  return idf;
}

double cosine_similarity(std::string_view a, std::string_view b, const IdfWeights& idf) {
  auto va = tf_idf_vector(a, idf);
  auto vb = tf_idf_vector(b, idf);
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (const auto& [token, wa] : va) {
    norm_a += wa * wa;
    auto it = vb.find(token);
    if (it != vb.end()) dot += wa * it->second;
  }
  for (const auto& [_, wb] : vb) norm_b += wb * wb;
  if (norm_a <= 0.0 || norm_b <= 0.0) return 0.0;
  double cos = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
  return cos < 0.0 ? 0.0 : (cos > 1.0 ? 1.0 : cos);
}

}  // namespace t3::textmetrics
