#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "t3/corpus/dataset.hpp"
#include "t3/engine/prompt.hpp"
#include "t3/provider/provider.hpp"
#include "t3/textmetrics/overlap.hpp"

namespace t3::eval {

// Which text each summary is scored against: the provided gold summary
// (summarization sets) or the original text (QA sets).
enum class ReferenceMode { kGoldSummary, kSourceText };

std::string to_string(ReferenceMode mode);
ReferenceMode reference_mode_from_string(const std::string& s);

struct DocScore {
  std::string doc_id;
  textmetrics::RougeScore rouge1;
  textmetrics::RougeScore rouge2;
  textmetrics::RougeScore rougeL;
  double bleu = 0.0;
  std::optional<double> factscore;  // 0..100, judge-assigned
  bool empty_output = false;        // scored all-zero because the summary was empty
};

inline constexpr const char* kJudgeVersion = "factscore-judge/v1";

struct MetricReport {
  std::string run_id;
  ReferenceMode reference_mode = ReferenceMode::kGoldSummary;
  std::vector<DocScore> docs;         // dataset order
  long failed_docs = 0;               // upstream failures, not in `docs`
  double mean_rouge1 = 0.0;           // F1 means over `docs`
  double mean_rouge2 = 0.0;
  double mean_rougeL = 0.0;
  double mean_bleu = 0.0;
  std::optional<double> mean_factscore;  // over docs with a judge score
  std::string judge_version;             // set when factscores were filled
};

// ROUGE-1/2/L and BLEU per document against the selected reference. Every
// output id must exist in refs; an empty output scores zero and is flagged.
MetricReport score_run(const std::map<std::string, std::string>& outputs,
                       const corpus::Dataset& refs, ReferenceMode mode,
                       const std::string& run_id);

// One judge call (plus one re-prompt retry) asking for a bare 0-100 number;
// lenient first-number extraction, clamped. Returns nullopt (with a stderr
// warning) when no number can be pulled out of either reply.
std::optional<double> factscore_judge(const std::string& summary, const std::string& source,
                                      provider::Provider& prov,
                                      const engine::PromptTemplate& rubric,
                                      const provider::ProviderRequest& base_request);

// Judge pass over every scored doc in the report; sets factscore fields,
// per-run mean and the judge version stamp. Judging always runs against the
// source text regardless of the overlap reference.
void fill_factscores(MetricReport& report, const std::map<std::string, std::string>& outputs,
                     const corpus::Dataset& refs, provider::Provider& prov,
                     const engine::PromptTemplate& rubric,
                     const provider::ProviderRequest& base_request);

std::string report_to_json_text(const MetricReport& report);
MetricReport report_from_json_text(const std::string& text);

}  // namespace t3::eval
