#include "t3/eval/scores.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>

#include <nlohmann/json.hpp>

#include "t3/error.hpp"
#include "t3/textmetrics/text.hpp"

namespace t3::eval {

using nlohmann::json;

std::string to_string(ReferenceMode mode) {
  return mode == ReferenceMode::kGoldSummary ? "gold_summary" : "source_text";
}

ReferenceMode reference_mode_from_string(const std::string& s) {
  if (s == "gold_summary") return ReferenceMode::kGoldSummary;
  if (s == "source_text") return ReferenceMode::kSourceText;
  throw ConfigError("unknown reference mode \"" + s +
                    "\" (expected gold_summary or source_text)");
}

namespace {

const std::string& reference_for(const corpus::Document& doc, ReferenceMode mode) {
  if (mode == ReferenceMode::kSourceText) return doc.text;
  if (!doc.gold_summary) {
    throw PreconditionError("document " + doc.id +
                            " has no gold summary to score against");
  }
  return *doc.gold_summary;
}

// First number in the text, integer or decimal, e.g. "Score: 92/100" -> 92.
std::optional<double> first_number(const std::string& text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) continue;
    std::size_t end = i;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    if (end < text.size() && text[end] == '.' && end + 1 < text.size() &&
        std::isdigit(static_cast<unsigned char>(text[end + 1]))) {
      ++end;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    }
    return std::stod(text.substr(i, end - i));
  }
  return std::nullopt;
}

}  // namespace

MetricReport score_run(const std::map<std::string, std::string>& outputs,
                       const corpus::Dataset& refs, ReferenceMode mode,
                       const std::string& run_id) {
  std::map<std::string, const corpus::Document*> by_id;
  for (const auto& doc : refs.documents) by_id[doc.id] = &doc;
  for (const auto& [doc_id, _] : outputs) {
    if (by_id.count(doc_id) == 0) {
      throw PreconditionError("output for unknown document id \"" + doc_id + "\"");
    }
  }

  MetricReport report;
  report.run_id = run_id;
  report.reference_mode = mode;
  for (const auto& doc : refs.documents) {
    auto it = outputs.find(doc.id);
    if (it == outputs.end()) continue;
    const std::string& summary = it->second;
    const std::string& reference = reference_for(doc, mode);

    DocScore score;
    score.doc_id = doc.id;
    if (textmetrics::tokenize(summary).empty()) {
      score.empty_output = true;  // all fields stay zero
    } else {
      score.rouge1 = textmetrics::rouge_n(summary, reference, 1);
      score.rouge2 = textmetrics::rouge_n(summary, reference, 2);
      score.rougeL = textmetrics::rouge_l(summary, reference);
      score.bleu = textmetrics::bleu(summary, {reference});
    }
    report.docs.push_back(std::move(score));
  }

  if (!report.docs.empty()) {
    double n = static_cast<double>(report.docs.size());
    for (const auto& d : report.docs) {
      report.mean_rouge1 += d.rouge1.f1 / n;
      report.mean_rouge2 += d.rouge2.f1 / n;
      report.mean_rougeL += d.rougeL.f1 / n;
      report.mean_bleu += d.bleu / n;
    }
  }
  return report;
}

std::optional<double> factscore_judge(const std::string& summary, const std::string& source,
                                      provider::Provider& prov,
                                      const engine::PromptTemplate& rubric,
                                      const provider::ProviderRequest& base_request) {
  provider::ProviderRequest req = base_request;
  req.prompt = engine::render(rubric, {{"[Article]", source}, {"[Summary]", summary}});

  std::optional<double> value = first_number(prov.complete(req).raw_text);
  if (!value) {
    provider::ProviderRequest retry = req;
    retry.prompt += "\n\nRespond with a single number between 0 and 100.";
    value = first_number(prov.complete(retry).raw_text);
  }
  if (!value) {
    std::cerr << "warning: judge gave no usable number; factscore absent\n";
    return std::nullopt;
  }
  return std::min(100.0, std::max(0.0, *value));
}

void fill_factscores(MetricReport& report, const std::map<std::string, std::string>& outputs,
                     const corpus::Dataset& refs, provider::Provider& prov,
                     const engine::PromptTemplate& rubric,
                     const provider::ProviderRequest& base_request) {
  std::map<std::string, const corpus::Document*> by_id;
  for (const auto& doc : refs.documents) by_id[doc.id] = &doc;

  double sum = 0.0;
  long count = 0;
  for (auto& score : report.docs) {
    auto doc_it = by_id.find(score.doc_id);
    auto out_it = outputs.find(score.doc_id);
    if (doc_it == by_id.end() || out_it == outputs.end()) {
      throw PreconditionError("report document \"" + score.doc_id +
                              "\" missing from refs or outputs");
    }
    score.factscore =
        factscore_judge(out_it->second, doc_it->second->text, prov, rubric, base_request);
    if (score.factscore) {
      sum += *score.factscore;
      ++count;
    }
  }
  if (count > 0) report.mean_factscore = sum / static_cast<double>(count);
  report.judge_version = kJudgeVersion;
}

std::string report_to_json_text(const MetricReport& report) {
  json docs = json::array();
  for (const auto& d : report.docs) {
    json row;
    row["doc_id"] = d.doc_id;
    for (const auto& [key, r] :
         {std::pair<const char*, const textmetrics::RougeScore*>{"rouge1", &d.rouge1},
          {"rouge2", &d.rouge2},
          {"rougeL", &d.rougeL}}) {
      row[key] = {{"precision", r->precision}, {"recall", r->recall}, {"f1", r->f1}};
    }
    row["bleu"] = d.bleu;
    if (d.factscore) row["factscore"] = *d.factscore;
    row["empty_output"] = d.empty_output;
    docs.push_back(std::move(row));
  }
  json obj;
  obj["run_id"] = report.run_id;
  obj["reference_mode"] = to_string(report.reference_mode);
  obj["docs"] = std::move(docs);
  obj["failed_docs"] = report.failed_docs;
  obj["mean_rouge1"] = report.mean_rouge1;
  obj["mean_rouge2"] = report.mean_rouge2;
  obj["mean_rougeL"] = report.mean_rougeL;
  obj["mean_bleu"] = report.mean_bleu;
  if (report.mean_factscore) obj["mean_factscore"] = *report.mean_factscore;
  obj["judge_version"] = report.judge_version;
  return obj.dump(2);
}

MetricReport report_from_json_text(const std::string& text) {
  json obj;
  try {
    obj = json::parse(text);
    MetricReport report;
    report.run_id = obj.at("run_id").get<std::string>();
    report.reference_mode = reference_mode_from_string(obj.at("reference_mode"));
    for (const auto& row : obj.at("docs")) {
      DocScore d;
      d.doc_id = row.at("doc_id").get<std::string>();
      for (const auto& [key, r] :
           {std::pair<const char*, textmetrics::RougeScore*>{"rouge1", &d.rouge1},
            {"rouge2", &d.rouge2},
            {"rougeL", &d.rougeL}}) {
        r->precision = row.at(key).at("precision").get<double>();
        r->recall = row.at(key).at("recall").get<double>();
        r->f1 = row.at(key).at("f1").get<double>();
      }
      d.bleu = row.at("bleu").get<double>();
      if (row.contains("factscore")) d.factscore = row["factscore"].get<double>();
      d.empty_output = row.value("empty_output", false);
      report.docs.push_back(std::move(d));
    }
    report.failed_docs = obj.value("failed_docs", 0L);
    report.mean_rouge1 = obj.at("mean_rouge1").get<double>();
    report.mean_rouge2 = obj.at("mean_rouge2").get<double>();
    report.mean_rougeL = obj.at("mean_rougeL").get<double>();
    report.mean_bleu = obj.at("mean_bleu").get<double>();
    if (obj.contains("mean_factscore")) report.mean_factscore = obj["mean_factscore"].get<double>();
    report.judge_version = obj.value("judge_version", std::string());
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad metric report: ") + e.what());
  }
}

}  // namespace t3::eval
