#pragma once

#include <string>
#include <vector>

namespace t3::experience {

enum class ExperienceKind { kQa, kSum };

std::string to_string(ExperienceKind kind);
ExperienceKind experience_kind_from_string(const std::string& s);

struct ExperienceUpdate {
  long revision = 0;
  ExperienceKind kind = ExperienceKind::kQa;
  std::string source_doc_id;
  std::string text;

  bool operator==(const ExperienceUpdate&) const = default;
};

// The two learned rule stores plus their full update trail. Updates replace
// the current text (the model re-emits the whole store each time); history
// keeps every revision so the trajectory stays auditable.
struct ExperienceSet {
  std::string exp_qa;
  std::string exp_sum;
  long revision = 0;
  std::vector<ExperienceUpdate> history;

  bool operator==(const ExperienceSet&) const = default;
};

ExperienceSet init();

// Replacement-semantics update; throws PreconditionError on empty text.
// Warns (stderr) when the new store exceeds the 600-word soft cap, but
// never truncates.
ExperienceSet update(const ExperienceSet& es, ExperienceKind kind, const std::string& new_text,
                     const std::string& doc_id);

inline constexpr long kExperienceSoftCapWords = 600;

void persist(const ExperienceSet& es, const std::string& path);
ExperienceSet load(const std::string& path);

}  // namespace t3::experience
