#include "t3/experience/experience.hpp"

#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "t3/error.hpp"
#include "t3/textmetrics/text.hpp"

namespace t3::experience {

using nlohmann::json;

std::string to_string(ExperienceKind kind) {
  return kind == ExperienceKind::kQa ? "qa" : "sum";
}

ExperienceKind experience_kind_from_string(const std::string& s) {
  if (s == "qa") return ExperienceKind::kQa;
  if (s == "sum") return ExperienceKind::kSum;
  throw ConfigError("unknown experience kind \"" + s + "\" (expected qa or sum)");
}

ExperienceSet init() { return ExperienceSet{}; }

ExperienceSet update(const ExperienceSet& es, ExperienceKind kind, const std::string& new_text,
                     const std::string& doc_id) {
  if (new_text.empty()) throw PreconditionError("experience update with empty text");
  ExperienceSet next = es;
  next.revision = es.revision + 1;
  (kind == ExperienceKind::kQa ? next.exp_qa : next.exp_sum) = new_text;
  next.history.push_back({next.revision, kind, doc_id, new_text});

  std::size_t words = textmetrics::tokenize(new_text).size();
  if (words > static_cast<std::size_t>(kExperienceSoftCapWords)) {
    std::cerr << "warning: " << to_string(kind) << " experience at revision " << next.revision
              << " is " << words << " words, over the " << kExperienceSoftCapWords
              << "-word soft cap\n";
  }
  return next;
}

void persist(const ExperienceSet& es, const std::string& path) {
  json history = json::array();
  for (const auto& entry : es.history) {
    history.push_back({{"revision", entry.revision},
                       {"kind", to_string(entry.kind)},
                       {"source_doc_id", entry.source_doc_id},
                       {"text", entry.text}});
  }
  json obj;
  obj["revision"] = es.revision;
  obj["exp_qa"] = es.exp_qa;
  obj["exp_sum"] = es.exp_sum;
  obj["history"] = std::move(history);

  std::ofstream out(path);
  if (!out) throw IoError("cannot write experience file: " + path);
  out << obj.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

ExperienceSet load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open experience file: " + path);
  json obj;
  try {
    in >> obj;
    ExperienceSet es;
    es.revision = obj.at("revision").get<long>();
    es.exp_qa = obj.at("exp_qa").get<std::string>();
    es.exp_sum = obj.at("exp_sum").get<std::string>();
    for (const auto& entry : obj.at("history")) {
      es.history.push_back({entry.at("revision").get<long>(),
                            experience_kind_from_string(entry.at("kind").get<std::string>()),
                            entry.at("source_doc_id").get<std::string>(),
                            entry.at("text").get<std::string>()});
    }
    if (static_cast<long>(es.history.size()) != es.revision) {
      throw ParseError("experience file " + path + ": history length " +
                       std::to_string(es.history.size()) + " != revision " +
                       std::to_string(es.revision));
    }
    return es;
  } catch (const json::exception& e) {
    throw ParseError("bad experience file " + path + ": " + e.what());
  }
}

}  // namespace t3::experience
