#include "t3/provider/parse.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "t3/error.hpp"

namespace t3::provider {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Finds the balanced {...} span starting at raw[start], scanning with
// string/escape awareness so braces inside string literals do not count.
// Returns the exclusive end index, or npos if the braces never balance.
std::size_t balanced_end(const std::string& raw, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t j = start; j < raw.size(); ++j) {
    char c = raw[j];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      --depth;
      if (depth == 0) return j + 1;
    }
  }
  return std::string::npos;
}

json extract_object(const std::string& raw, bool strict) {
  if (strict) {
    try {
      json obj = json::parse(raw);
      if (!obj.is_object()) throw ParseError("strict parse: top-level value is not an object");
      return obj;
    } catch (const json::exception& e) {
      throw ParseError(std::string("strict parse failed: ") + e.what());
    }
  }
  std::size_t i = raw.find('{');
  while (i != std::string::npos) {
    std::size_t end = balanced_end(raw, i);
    if (end != std::string::npos) {
      try {
        return json::parse(raw.substr(i, end - i));
      } catch (const json::exception&) {
        // malformed span (smart quotes etc.); retry from the next brace,
        // which may pick out a valid object nested inside this one
      }
    }
    i = raw.find('{', i + 1);
  }
  throw ParseError("no balanced JSON object found in model output");
}

std::string lower_ascii(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Exact key match, falling back to a case-insensitive scan in lenient mode.
const json* find_key(const json& obj, const char* key, bool strict) {
  if (obj.contains(key)) return &obj[key];
  if (strict) return nullptr;
  std::string want = lower_ascii(key);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (lower_ascii(it.key()) == want) return &it.value();
  }
  return nullptr;
}

std::string require_string(const json& obj, const char* key, bool strict) {
  const json* value = find_key(obj, key, strict);
  if (value == nullptr || !value->is_string()) {
    throw ParseError(std::string("missing or non-string key \"") + key + "\"");
  }
  return value->get<std::string>();
}

corpus::QaPair parse_pair(const json& entry) {
  if (!entry.is_object()) throw ParseError("qa pair entry is not an object");
  const char* qkey = entry.contains("Question") ? "Question" : "question";
  const char* akey = entry.contains("Answer") ? "Answer" : "answer";
  if (!entry.contains(qkey) || !entry[qkey].is_string() || !entry.contains(akey) ||
      !entry[akey].is_string()) {
    throw ParseError("qa pair entry missing Question/Answer strings");
  }
  corpus::QaPair pair{entry[qkey].get<std::string>(), entry[akey].get<std::string>()};
  if (pair.question.empty() || pair.answer.empty()) {
    throw ParseError("qa pair with empty question or answer");
  }
  return pair;
}

}  // namespace

ParsedQaOutput parse_qa_output(const std::string& raw, bool strict) {
  json obj = extract_object(raw, strict);
  const json* pairs_ptr = find_key(obj, "Generated_QA_pairs", strict);
  if (pairs_ptr == nullptr) throw ParseError("missing key \"Generated_QA_pairs\"");
  ParsedQaOutput out;
  out.qa_experience = require_string(obj, "QA_generation_experience", strict);

  const json& pairs = *pairs_ptr;
  if (pairs.is_object()) {
    // Keys are "1","2",...; iterate in numeric order, not lexicographic.
    std::vector<std::pair<long, const json*>> ordered;
    for (auto it = pairs.begin(); it != pairs.end(); ++it) {
      long index = 0;
      try {
        index = std::stol(it.key());
      } catch (const std::exception&) {
        throw ParseError("non-numeric qa pair key \"" + it.key() + "\"");
      }
      ordered.emplace_back(index, &it.value());
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [_, entry] : ordered) out.qa_pairs.push_back(parse_pair(*entry));
  } else if (pairs.is_array() && !strict) {
    for (const auto& entry : pairs) out.qa_pairs.push_back(parse_pair(entry));
  } else {
    throw ParseError("\"Generated_QA_pairs\" is neither a keyed map nor an array");
  }
  return out;
}

ParsedSummaryOutput parse_summary_output(const std::string& raw, bool strict) {
  json obj = extract_object(raw, strict);
  ParsedSummaryOutput out;
  out.summary = require_string(obj, "Summary", strict);
  out.summary_experience = require_string(obj, "Summary_generation_experience", strict);
  return out;
}

ParsedOutput parse_structured(const std::string& raw, OutputShape shape, bool strict) {
  if (shape == OutputShape::kQaOutput) return parse_qa_output(raw, strict);
  return parse_summary_output(raw, strict);
}

std::string serialize(const ParsedQaOutput& out) {
  ordered_json pairs = ordered_json::object();
  for (std::size_t i = 0; i < out.qa_pairs.size(); ++i) {
    pairs[std::to_string(i + 1)] = {{"Question", out.qa_pairs[i].question},
                                    {"Answer", out.qa_pairs[i].answer}};
  }
  ordered_json obj;
  obj["Generated_QA_pairs"] = std::move(pairs);
  obj["QA_generation_experience"] = out.qa_experience;
  return obj.dump();
}

std::string serialize(const ParsedSummaryOutput& out) {
  ordered_json obj;
  obj["Summary"] = out.summary;
  obj["Summary_generation_experience"] = out.summary_experience;
  return obj.dump();
}

}  // namespace t3::provider
