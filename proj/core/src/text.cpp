#include "t3/textmetrics/text.hpp"

#include <cctype>

#include "t3/error.hpp"

namespace t3::textmetrics {

namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  for (char c : text) {
    if (is_word_char(c)) {
      current.push_back(lower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

SentenceList split_sentences(std::string_view text) {
  SentenceList sentences;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::size_t a = start;
    std::size_t b = end;
    while (a < b && is_space(text[a])) ++a;
    while (b > a && is_space(text[b - 1])) --b;
    if (b > a) sentences.emplace_back(text.substr(a, b - a));
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == text.size() || is_space(text[i + 1]))) {
      flush(i + 1);
    }
  }
  flush(text.size());
  return sentences;
}

int count_syllables(std::string_view word) {
  if (word.empty()) throw PreconditionError("count_syllables: empty word");
  int groups = 0;
  bool in_group = false;
  for (char raw : word) {
    char c = lower(raw);
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  if (groups > 1 && lower(word.back()) == 'e') --groups;
  return groups < 1 ? 1 : groups;
}

ReadabilityBreakdown flesch(std::string_view text) {
  TokenList tokens = tokenize(text);
  if (tokens.empty()) throw PreconditionError("flesch: text has no words");
  SentenceList sentences = split_sentences(text);

  ReadabilityBreakdown out;
  out.tw = static_cast<long>(tokens.size());
  out.tse = static_cast<long>(sentences.empty() ? 1 : sentences.size());
  for (const auto& t : tokens) out.tsy += count_syllables(t);
  double tw = static_cast<double>(out.tw);
  double tse = static_cast<double>(out.tse);
  double tsy = static_cast<double>(out.tsy);
  out.score = 206.835 - 1.015 * (tw / tse) - 84.6 * (tsy / tw);
  return out;
}

double compression_rate(std::string_view summary, std::string_view text) {
  std::size_t text_words = tokenize(text).size();
  if (text_words == 0) throw PreconditionError("compression_rate: source text has no words");
  std::size_t summary_words = tokenize(summary).size();
  return static_cast<double>(summary_words) / static_cast<double>(text_words);
}

}  // namespace t3::textmetrics
