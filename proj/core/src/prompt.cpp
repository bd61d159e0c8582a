#include "t3/engine/prompt.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "t3/error.hpp"

namespace t3::engine {

namespace {

// Which vocabulary slot starts at body[pos], if any.
const char* slot_at(const std::string& body, std::size_t pos) {
  for (const char* slot : kPlaceholders) {
    if (body.compare(pos, std::string::traits_type::length(slot), slot) == 0) return slot;
  }
  return nullptr;
}

}  // namespace

std::string render(const PromptTemplate& tmpl, const Bindings& bindings) {
  std::string out;
  out.reserve(tmpl.body.size());
  std::size_t i = 0;
  while (i < tmpl.body.size()) {
    if (tmpl.body[i] != '[') {
      out += tmpl.body[i++];
      continue;
    }
    const char* slot = slot_at(tmpl.body, i);
    if (slot == nullptr) {
      out += tmpl.body[i++];
      continue;
    }
    auto it = bindings.find(slot);
    if (it == bindings.end()) {
      throw ConfigError("template \"" + tmpl.name + "\": unbound placeholder " + slot);
    }
    out += it->second;
    i += std::string(slot).size();
  }
  return out;
}

std::vector<std::string> placeholders_in(const std::string& body) {
  std::vector<std::string> found;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '[') continue;
    const char* slot = slot_at(body, i);
    if (slot != nullptr && std::find(found.begin(), found.end(), slot) == found.end()) {
      found.emplace_back(slot);
    }
  }
  return found;
}

std::string format_qa_pairs(const std::vector<corpus::QaPair>& pairs) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    obj[std::to_string(i + 1)] = {{"Question", pairs[i].question},
                                  {"Answer", pairs[i].answer}};
  }
  return obj.dump();
}

void PromptLibrary::load_dir(const std::string& dir) {
  std::filesystem::path root(dir);
  if (!std::filesystem::is_directory(root)) {
    throw ConfigError("prompt directory not found: " + dir);
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read template: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    add({path.stem().string(), buffer.str()});
  }
  if (templates_.empty()) throw ConfigError("no .txt templates in " + dir);
}

void PromptLibrary::add(PromptTemplate tmpl) {
  templates_[tmpl.name] = std::move(tmpl);
}

const PromptTemplate& PromptLibrary::get(const std::string& name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw ConfigError("no prompt template named \"" + name + "\"");
  return it->second;
}

bool PromptLibrary::contains(const std::string& name) const {
  return templates_.count(name) != 0;
}

std::vector<std::string> PromptLibrary::names() const {
  std::vector<std::string> out;
  out.reserve(templates_.size());
  for (const auto& [name, _] : templates_) out.push_back(name);
  return out;
}

}  // namespace t3::engine
