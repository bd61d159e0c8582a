#pragma once

#include <string>
#include <vector>

#include "t3/eval/scores.hpp"
#include "t3/eval/stats.hpp"

namespace t3::eval {

struct MetricComparison {
  std::string metric;  // ROUGE-1, ROUGE-2, ROUGE-L, BLEU, Factscore
  double mean_wo = 0.0;
  double mean_t3 = 0.0;
  TTestResult ttest;
  bool wo_bold = false;  // strictly larger mean gets the bold
  bool t3_bold = false;
};

// One w/o-vs-T3 comparison. `starred` follows the configured rule (all
// per-metric p-values under alpha by default, any-metric behind the flag);
// `highlighted` marks a clean sweep where T3's mean wins every metric.
struct SignificanceTable {
  std::string run_wo;
  std::string run_t3;
  double alpha = 0.05;
  bool star_any_metric = false;
  std::vector<MetricComparison> metrics;
  bool starred = false;
  bool highlighted = false;
  std::string judge_version;  // carried through when factscores were judged
};

// Welch t-test per metric over the per-document score vectors. Both reports
// must cover the same documents. Factscore compares only when both sides
// have at least two judged docs.
SignificanceTable compare_runs(const MetricReport& wo, const MetricReport& t3,
                               double alpha = 0.05, bool star_any_metric = false);

std::string render_markdown(const SignificanceTable& table);
std::string render_csv(const SignificanceTable& table);
std::string render_json(const SignificanceTable& table);
SignificanceTable table_from_json_text(const std::string& text);

// format: markdown | csv | json
void render_report(const SignificanceTable& table, const std::string& format,
                   const std::string& path);

}  // namespace t3::eval
