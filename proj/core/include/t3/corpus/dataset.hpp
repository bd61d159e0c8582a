#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace t3::corpus {

struct QaPair {
  std::string question;
  std::string answer;

  bool operator==(const QaPair&) const = default;
};

enum class Style { kNews, kNarrative };
enum class DatasetKind { kSummarization, kQa };

std::string to_string(Style style);
std::string to_string(DatasetKind kind);
Style style_from_string(const std::string& s);
DatasetKind kind_from_string(const std::string& s);

struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> gold_summary;
  std::vector<QaPair> gold_qa;
  Style style = Style::kNews;

  bool operator==(const Document&) const = default;
};

struct Dataset {
  std::string name;
  DatasetKind kind = DatasetKind::kSummarization;
  std::vector<Document> documents;

  bool operator==(const Dataset&) const = default;
};

// Maps foreign JSONL field names onto the canonical schema
// {"id", "text", "summary", "qa": [{"question", "answer"}]}.
struct FieldAdapter {
  std::string id = "id";
  std::string text = "text";
  std::string summary = "summary";
  std::string qa = "qa";
  std::string question = "question";
  std::string answer = "answer";
};

FieldAdapter load_adapter(const std::string& path);

struct Rejection {
  long line = 0;
  std::string error;
  std::string raw;
};

struct LoadResult {
  Dataset dataset;
  std::vector<Rejection> rejections;
};

// Loads a JSONL dataset (one document object per line). Malformed lines are
// collected, not silently dropped; a document that violates the dataset-kind
// invariant (missing summary for a summarization set, no QA pairs for a QA
// set) fails the whole load. Throws IoError / ConfigError.
LoadResult load_dataset(const std::string& path, DatasetKind kind,
                        Style style = Style::kNews,
                        const FieldAdapter& adapter = FieldAdapter{});

// Canonical-schema JSONL, one document per line.
void save_dataset(const Dataset& ds, const std::string& path);

void write_rejections(const std::vector<Rejection>& rejections, const std::string& path);

// Keeps documents whose word-token count is >= min_words; order preserved.
Dataset filter_long(const Dataset& ds, long min_words = 1000);

// Deterministic seeded shuffle followed by a prefix split. Partitions are
// disjoint and exhaustive; the same seed always yields the same split.
std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, std::size_t n_train,
                                             std::uint64_t seed);

}  // namespace t3::corpus
