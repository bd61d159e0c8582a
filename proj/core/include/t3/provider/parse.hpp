#pragma once

#include <string>
#include <variant>
#include <vector>

#include "t3/corpus/dataset.hpp"

namespace t3::provider {

// Parsed form of the QA-training output shape:
//   {"Generated_QA_pairs": {"1": {"Question": ..., "Answer": ...}, ...},
//    "QA_generation_experience": "..."}
struct ParsedQaOutput {
  std::vector<corpus::QaPair> qa_pairs;
  std::string qa_experience;

  bool operator==(const ParsedQaOutput&) const = default;
};

// Parsed form of the summary-training output shape:
//   {"Summary": "...", "Summary_generation_experience": "..."}
struct ParsedSummaryOutput {
  std::string summary;
  std::string summary_experience;

  bool operator==(const ParsedSummaryOutput&) const = default;
};

enum class OutputShape { kQaOutput, kSummaryOutput };

using ParsedOutput = std::variant<ParsedQaOutput, ParsedSummaryOutput>;

// Extracts the first balanced JSON object from raw model text, tolerating
// markdown code fences and leading/trailing prose, then validates the
// requested shape. QA pairs may be keyed "1","2",... (iterated in numeric
// order) or given as an array. strict = true demands the raw text be exactly
// one JSON object of the canonical shape. Throws ParseError.
ParsedOutput parse_structured(const std::string& raw, OutputShape shape,
                              bool strict = false);

ParsedQaOutput parse_qa_output(const std::string& raw, bool strict = false);
ParsedSummaryOutput parse_summary_output(const std::string& raw, bool strict = false);

// Canonical serializations (the exact shapes parse_structured accepts).
std::string serialize(const ParsedQaOutput& out);
std::string serialize(const ParsedSummaryOutput& out);

}  // namespace t3::provider
