#include "t3/corpus/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "t3/error.hpp"
#include "t3/textmetrics/text.hpp"

namespace t3::corpus {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Parses one canonical document object; throws ParseError on schema problems
// that only affect this line.
Document parse_document(const json& obj, Style style, const FieldAdapter& a) {
  if (!obj.is_object()) throw ParseError("line is not a JSON object");
  Document doc;
  doc.style = style;
  if (!obj.contains(a.id) || !obj[a.id].is_string()) {
    throw ParseError("missing or non-string \"" + a.id + "\"");
  }
  doc.id = obj[a.id].get<std::string>();
  if (doc.id.empty()) throw ParseError("empty \"" + a.id + "\"");
  if (!obj.contains(a.text) || !obj[a.text].is_string()) {
    throw ParseError("missing or non-string \"" + a.text + "\"");
  }
  doc.text = obj[a.text].get<std::string>();
  if (trim(doc.text).empty()) throw ParseError("empty \"" + a.text + "\"");

  if (obj.contains(a.summary)) {
    if (!obj[a.summary].is_string()) throw ParseError("non-string \"" + a.summary + "\"");
    doc.gold_summary = obj[a.summary].get<std::string>();
  }
  if (obj.contains(a.qa)) {
    if (!obj[a.qa].is_array()) throw ParseError("\"" + a.qa + "\" is not an array");
    for (const auto& item : obj[a.qa]) {
      if (!item.is_object() || !item.contains(a.question) || !item.contains(a.answer)) {
        throw ParseError("qa entry missing \"" + a.question + "\"/\"" + a.answer + "\"");
      }
      QaPair pair;
      pair.question = trim(item[a.question].get<std::string>());
      pair.answer = trim(item[a.answer].get<std::string>());
      if (pair.question.empty() || pair.answer.empty()) {
        throw ParseError("qa entry with empty question or answer");
      }
      doc.gold_qa.push_back(std::move(pair));
    }
  }
  return doc;
}

}  // namespace

std::string to_string(Style style) {
  return style == Style::kNews ? "news" : "narrative";
}

std::string to_string(DatasetKind kind) {
  return kind == DatasetKind::kSummarization ? "summarization" : "qa";
}

Style style_from_string(const std::string& s) {
  if (s == "news") return Style::kNews;
  if (s == "narrative") return Style::kNarrative;
  throw ConfigError("unknown style \"" + s + "\" (expected news|narrative)");
}

DatasetKind kind_from_string(const std::string& s) {
  if (s == "summarization") return DatasetKind::kSummarization;
  if (s == "qa") return DatasetKind::kQa;
  throw ConfigError("unknown dataset kind \"" + s + "\" (expected summarization|qa)");
}

FieldAdapter load_adapter(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read adapter config: " + path);
  json obj;
  try {
    in >> obj;
  } catch (const json::exception& e) {
    throw ParseError("adapter config " + path + ": " + e.what());
  }
  FieldAdapter a;
  auto pick = [&](const char* key, std::string& field) {
    if (obj.contains(key)) field = obj[key].get<std::string>();
  };
  pick("id", a.id);
  pick("text", a.text);
  pick("summary", a.summary);
  pick("qa", a.qa);
  pick("question", a.question);
  pick("answer", a.answer);
  return a;
}

LoadResult load_dataset(const std::string& path, DatasetKind kind, Style style,
                        const FieldAdapter& adapter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read dataset: " + path);

  LoadResult result;
  result.dataset.name = path;
  result.dataset.kind = kind;
  std::unordered_set<std::string> seen_ids;

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      json obj = json::parse(line);
      Document doc = parse_document(obj, style, adapter);
      if (!seen_ids.insert(doc.id).second) {
        throw ParseError("duplicate id \"" + doc.id + "\"");
      }
      // Kind invariants are dataset-level contract violations, not bad lines.
      if (kind == DatasetKind::kSummarization && !doc.gold_summary.has_value()) {
        throw ConfigError(path + " line " + std::to_string(line_no) +
                          ": summarization dataset document \"" + doc.id +
                          "\" has no summary");
      }
      if (kind == DatasetKind::kQa && doc.gold_qa.empty()) {
        throw ConfigError(path + " line " + std::to_string(line_no) +
                          ": qa dataset document \"" + doc.id + "\" has no qa pairs");
      }
      result.dataset.documents.push_back(std::move(doc));
    } catch (const json::exception& e) {
      result.rejections.push_back({line_no, std::string("invalid JSON: ") + e.what(), line});
    } catch (const ParseError& e) {
      result.rejections.push_back({line_no, e.what(), line});
    }
  }
  if (result.dataset.documents.empty()) {
    throw ConfigError("no valid documents in " + path + " (" +
                      std::to_string(result.rejections.size()) + " rejected lines)");
  }
  return result;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write dataset: " + path);
  for (const auto& doc : ds.documents) {
    json obj;
    obj["id"] = doc.id;
    obj["text"] = doc.text;
    if (doc.gold_summary) obj["summary"] = *doc.gold_summary;
    if (!doc.gold_qa.empty()) {
      json qa = json::array();
      for (const auto& pair : doc.gold_qa) {
        qa.push_back({{"question", pair.question}, {"answer", pair.answer}});
      }
      obj["qa"] = std::move(qa);
    }
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed writing dataset: " + path);
}

void write_rejections(const std::vector<Rejection>& rejections, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write rejection report: " + path);
  for (const auto& r : rejections) {
    json obj = {{"line", r.line}, {"error", r.error}, {"raw", r.raw}};
    out << obj.dump() << '\n';
  }
}

Dataset filter_long(const Dataset& ds, long min_words) {
  Dataset out;
  out.name = ds.name;
  out.kind = ds.kind;
  for (const auto& doc : ds.documents) {
    if (static_cast<long>(textmetrics::tokenize(doc.text).size()) >= min_words) {
      out.documents.push_back(doc);
    }
  }
  return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, std::size_t n_train,
                                             std::uint64_t seed) {
  if (n_train > ds.documents.size()) {
    throw PreconditionError("split_train_test: n_train " + std::to_string(n_train) +
                            " exceeds dataset size " +
                            std::to_string(ds.documents.size()));
  }
  // Hand-rolled Fisher-Yates: std::shuffle's draw sequence is
  // implementation-defined, and splits must be stable across platforms.
  std::vector<std::size_t> order(ds.documents.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }

  Dataset train{ds.name + "/train", ds.kind, {}};
  Dataset test{ds.name + "/test", ds.kind, {}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? train : test).documents.push_back(ds.documents[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace t3::corpus
