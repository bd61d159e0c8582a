#pragma once

#include <map>
#include <string>
#include <vector>

#include "t3/corpus/dataset.hpp"

namespace t3::engine {

// A prompt body with [Bracketed] slots. Slots come from a fixed vocabulary
// (kPlaceholders); any other bracketed text in the body is left alone.
struct PromptTemplate {
  std::string name;
  std::string body;
};

inline constexpr const char* kPlaceholders[] = {
    "[Article]",
    "[Question Pair with answer]",
    "[Generated QA pairs]",
    "[Summary generation experience]",
    "[QA generation experience]",
    "[Summary]",
};

using Bindings = std::map<std::string, std::string>;

// Single-pass substitution: inserted binding text is never rescanned, so a
// binding containing "[Article]" lands verbatim. A slot present in the body
// but absent from bindings is an error naming the slot; empty-string
// bindings are legal (ablations).
std::string render(const PromptTemplate& tmpl, const Bindings& bindings);

// Slots (from the fixed vocabulary) that appear in a template body, in
// order of first appearance.
std::vector<std::string> placeholders_in(const std::string& body);

// QA pairs formatted as the numbered-key JSON object the prompts describe:
// {"1": {"Question": ..., "Answer": ...}, ...}
std::string format_qa_pairs(const std::vector<corpus::QaPair>& pairs);

// Loads every *.txt in a directory as a template named by file stem.
class PromptLibrary {
 public:
  PromptLibrary() = default;

  void load_dir(const std::string& dir);
  void add(PromptTemplate tmpl);
  const PromptTemplate& get(const std::string& name) const;  // throws ConfigError
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, PromptTemplate> templates_;
};

}  // namespace t3::engine
