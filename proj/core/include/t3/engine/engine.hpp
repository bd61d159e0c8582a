#pragma once

#include <string>
#include <vector>

#include "t3/corpus/dataset.hpp"
#include "t3/engine/config.hpp"
#include "t3/engine/prompt.hpp"
#include "t3/experience/experience.hpp"
#include "t3/provider/provider.hpp"

namespace t3::engine {

enum class StopReason { kNone, kThresholdsMet, kKExhausted };

std::string to_string(StopReason reason);
StopReason stop_reason_from_string(const std::string& s);

// One row per inner-loop iteration; stopped rows carry the reason. The
// stop predicate is strict on all three scores.
struct IterationTrace {
  std::string doc_id;
  int k = 0;
  std::string summary_candidate;
  double s_i = 0.0;
  double r_i = 0.0;
  double c_i = 0.0;
  bool stopped = false;
  StopReason stop_reason = StopReason::kNone;

  bool operator==(const IterationTrace&) const = default;
};

struct FailureRecord {
  std::string doc_id;
  std::string stage;
  std::string error;
};

struct TrainOutcome {
  experience::ExperienceSet experiences;
  std::vector<IterationTrace> traces;
  std::vector<FailureRecord> failures;
};

struct DocResult {
  std::string doc_id;
  std::string summary;
};

struct PhaseOutcome {
  std::vector<DocResult> results;  // dataset order; failed documents omitted
  std::vector<FailureRecord> failures;
};

// Throws RunAbortedError once failures exceed threshold * total.
void check_failure_budget(std::size_t failures, std::size_t total, double threshold);

class Engine {
 public:
  Engine(RunConfig cfg, PromptLibrary prompts);

  // The training loop: per document, one QA-generation call updating the QA
  // experience, then up to K summary iterations each updating the summary
  // experience, stopping early when similarity/readability/compression all
  // clear their thresholds strictly. Sequential by design — experience state
  // is a serial dependency.
  TrainOutcome train(const corpus::Dataset& train_set, provider::Provider& provider,
                     experience::ExperienceSet es = experience::init()) const;

  // Zero-shot test on a summarization document: one composite call, the raw
  // reply (trimmed) is the summary. No threshold loop at test time.
  std::string test_summarization(const corpus::Document& doc,
                                 const experience::ExperienceSet& es,
                                 provider::Provider& provider) const;

  // Same, but the prompt additionally carries the document's gold QA pairs.
  std::string test_qa_dataset(const corpus::Document& doc, const experience::ExperienceSet& es,
                              provider::Provider& provider) const;

  // Plain instruction + article, no experiences.
  std::string baseline_summary(const corpus::Document& doc, provider::Provider& provider) const;

  // Fans the cfg.mode per-document op over the dataset with a bounded worker
  // pool; per-document failures are isolated and budget-checked.
  PhaseOutcome run_test_phase(const corpus::Dataset& ds, const experience::ExperienceSet& es,
                              provider::Provider& provider) const;

  // Exact prompt a test/baseline call would send (ablation masking applied);
  // lets tests diff prompts without a provider.
  std::string render_test_prompt(const corpus::Document& doc,
                                 const experience::ExperienceSet& es, RunMode mode) const;

  const RunConfig& config() const { return cfg_; }
  const PromptLibrary& prompts() const { return prompts_; }

 private:
  std::string masked_exp_qa(const experience::ExperienceSet& es) const;
  std::string masked_exp_sum(const experience::ExperienceSet& es) const;
  provider::ProviderRequest make_request(const std::string& prompt) const;
  std::string dispatch_doc(const corpus::Document& doc, const experience::ExperienceSet& es,
                           provider::Provider& provider) const;

  RunConfig cfg_;
  PromptLibrary prompts_;
};

}  // namespace t3::engine
