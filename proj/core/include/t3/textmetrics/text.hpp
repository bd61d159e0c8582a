#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace t3::textmetrics {

// Lowercase word tokens. Tokenization is deterministic and locale-independent:
// the input splits on every byte outside [a-z0-9] after ASCII lowercasing, so
// punctuation vanishes and digit runs survive as tokens.
using TokenList = std::vector<std::string>;

TokenList tokenize(std::string_view text);

// Sentences split on '.', '!' or '?' followed by whitespace or end of input.
// No abbreviation handling: "Dr. Who?" is two sentences. A trailing fragment
// without a terminator counts as one sentence.
using SentenceList = std::vector<std::string>;

SentenceList split_sentences(std::string_view text);

// Heuristic syllable count: maximal vowel groups (a,e,i,o,u,y), minus one for
// a terminal silent 'e' when the count stays >= 1, floored at 1.
// Throws PreconditionError on an empty word.
int count_syllables(std::string_view word);

struct ReadabilityBreakdown {
  long tw = 0;    // total words
  long tse = 0;   // total sentences
  long tsy = 0;   // total syllables
  double score = 0.0;
};

// Flesch reading ease: 206.835 - 1.015*(TW/TSE) - 84.6*(TSY/TW), unclamped.
// Throws PreconditionError when the text has no words.
ReadabilityBreakdown flesch(std::string_view text);

// Word-token count ratio length(summary)/length(text).
// Throws PreconditionError when the source text has no words.
double compression_rate(std::string_view summary, std::string_view text);

}  // namespace t3::textmetrics
