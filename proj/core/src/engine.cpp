#include "t3/engine/engine.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <optional>
#include <thread>

#include "t3/error.hpp"
#include "t3/provider/parse.hpp"
#include "t3/textmetrics/similarity.hpp"
#include "t3/textmetrics/text.hpp"

namespace t3::engine {

namespace {

constexpr const char* kQaTrainTemplate = "qa_train";
constexpr const char* kSumTrainTemplate = "sum_train";
constexpr const char* kTestSumTemplate = "test_summarization";
constexpr const char* kTestQaTemplate = "test_qa";
constexpr const char* kBaselineTemplate = "baseline";

constexpr const char* kFormatReminder =
    "\n\nReturn only a single JSON object in exactly the requested format.";

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// One completion with a single re-prompt retry on malformed output. The
// retry request appends a format reminder so it hashes differently and can
// be recorded/replayed on its own.
t3::provider::ParsedOutput complete_structured(provider::Provider& prov,
                                               const provider::ProviderRequest& req,
                                               provider::OutputShape shape) {
  provider::ProviderResponse first = prov.complete(req);
  try {
    return provider::parse_structured(first.raw_text, shape);
  } catch (const ParseError&) {
    provider::ProviderRequest retry = req;
    retry.prompt += kFormatReminder;
    provider::ProviderResponse second = prov.complete(retry);
    return provider::parse_structured(second.raw_text, shape);
  }
}

bool thresholds_met(const StopThresholds& t, double s, double r, double c) {
  return s > t.s_min && r > t.r_min && c < t.c_max;  // all strict
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kNone:
      return "none";
    case StopReason::kThresholdsMet:
      return "thresholds_met";
    case StopReason::kKExhausted:
      return "k_exhausted";
  }
  return "none";
}

StopReason stop_reason_from_string(const std::string& s) {
  if (s == "none") return StopReason::kNone;
  if (s == "thresholds_met") return StopReason::kThresholdsMet;
  if (s == "k_exhausted") return StopReason::kKExhausted;
  throw ConfigError("unknown stop reason \"" + s + "\"");
}

void check_failure_budget(std::size_t failures, std::size_t total, double threshold) {
  if (total == 0) return;
  if (static_cast<double>(failures) > threshold * static_cast<double>(total)) {
    throw RunAbortedError("aborted: " + std::to_string(failures) + "/" +
                          std::to_string(total) + " documents failed, over the " +
                          std::to_string(threshold) + " failure threshold");
  }
}

Engine::Engine(RunConfig cfg, PromptLibrary prompts)
    : cfg_(std::move(cfg)), prompts_(std::move(prompts)) {
  validate(cfg_.thresholds);
}

std::string Engine::masked_exp_qa(const experience::ExperienceSet& es) const {
  return cfg_.ablation == Ablation::kNoQaExp ? "" : es.exp_qa;
}

std::string Engine::masked_exp_sum(const experience::ExperienceSet& es) const {
  return cfg_.ablation == Ablation::kNoSumExp ? "" : es.exp_sum;
}

provider::ProviderRequest Engine::make_request(const std::string& prompt) const {
  provider::ProviderRequest req;
  req.backend = cfg_.provider.backend;
  req.model = cfg_.provider.model;
  req.prompt = prompt;
  req.temperature = cfg_.provider.temperature;
  req.max_output_tokens = cfg_.provider.max_output_tokens;
  req.safety_mode = cfg_.provider.safety_mode;
  return req;
}

TrainOutcome Engine::train(const corpus::Dataset& train_set, provider::Provider& prov,
                           experience::ExperienceSet es) const {
  if (train_set.kind != corpus::DatasetKind::kQa) {
    throw PreconditionError("training needs a QA dataset (gold pairs drive the loop)");
  }
  std::vector<std::string> texts;
  texts.reserve(train_set.documents.size());
  for (const auto& doc : train_set.documents) texts.push_back(doc.text);
  textmetrics::IdfWeights idf = textmetrics::build_idf(texts);

  TrainOutcome out;
  for (const auto& doc : train_set.documents) {
    provider::ParsedQaOutput qa;
    try {
      Bindings qa_bindings{
          {"[Article]", doc.text},
          {"[Question Pair with answer]", format_qa_pairs(doc.gold_qa)},
          {"[QA generation experience]", masked_exp_qa(es)},
      };
      std::string prompt = render(prompts_.get(kQaTrainTemplate), qa_bindings);
      qa = std::get<provider::ParsedQaOutput>(
          complete_structured(prov, make_request(prompt), provider::OutputShape::kQaOutput));
    } catch (const Error& e) {
      out.failures.push_back({doc.id, "qa_generation", e.what()});
      check_failure_budget(out.failures.size(), train_set.documents.size(),
                           cfg_.failure_threshold);
      continue;
    }
    es = experience::update(es, experience::ExperienceKind::kQa, qa.qa_experience, doc.id);

    bool doc_failed = false;
    for (int k = 1; k <= cfg_.thresholds.k_max; ++k) {
      provider::ParsedSummaryOutput sum;
      try {
        Bindings sum_bindings{
            {"[Article]", doc.text},
            {"[Question Pair with answer]", format_qa_pairs(doc.gold_qa)},
            {"[Generated QA pairs]", format_qa_pairs(qa.qa_pairs)},
            {"[Summary generation experience]", masked_exp_sum(es)},
        };
        std::string prompt = render(prompts_.get(kSumTrainTemplate), sum_bindings);
        sum = std::get<provider::ParsedSummaryOutput>(complete_structured(
            prov, make_request(prompt), provider::OutputShape::kSummaryOutput));
        if (textmetrics::tokenize(sum.summary).empty()) {
          throw ParseError("summary candidate has no word tokens");
        }
      } catch (const Error& e) {
        out.failures.push_back({doc.id, "summary_iteration", e.what()});
        doc_failed = true;
        break;
      }
      es = experience::update(es, experience::ExperienceKind::kSum, sum.summary_experience,
                              doc.id);

      IterationTrace trace;
      trace.doc_id = doc.id;
      trace.k = k;
      trace.summary_candidate = sum.summary;
      trace.s_i = textmetrics::cosine_similarity(sum.summary, doc.text, idf);
      trace.r_i = textmetrics::flesch(sum.summary).score;
      trace.c_i = textmetrics::compression_rate(sum.summary, doc.text);
      if (thresholds_met(cfg_.thresholds, trace.s_i, trace.r_i, trace.c_i)) {
        trace.stopped = true;
        trace.stop_reason = StopReason::kThresholdsMet;
      } else if (k == cfg_.thresholds.k_max) {
        trace.stopped = true;
        trace.stop_reason = StopReason::kKExhausted;
      }
      out.traces.push_back(trace);
      if (trace.stopped) break;
    }
    if (doc_failed) {
      check_failure_budget(out.failures.size(), train_set.documents.size(),
                           cfg_.failure_threshold);
    }
  }
  out.experiences = std::move(es);
  return out;
}

std::string Engine::render_test_prompt(const corpus::Document& doc,
                                       const experience::ExperienceSet& es,
                                       RunMode mode) const {
  switch (mode) {
    case RunMode::kTestSummarization:
      return render(prompts_.get(kTestSumTemplate),
                    {{"[Article]", doc.text},
                     {"[Summary generation experience]", masked_exp_sum(es)},
                     {"[QA generation experience]", masked_exp_qa(es)}});
    case RunMode::kTestQa:
      return render(prompts_.get(kTestQaTemplate),
                    {{"[Article]", doc.text},
                     {"[Question Pair with answer]", format_qa_pairs(doc.gold_qa)},
                     {"[Summary generation experience]", masked_exp_sum(es)},
                     {"[QA generation experience]", masked_exp_qa(es)}});
    case RunMode::kBaseline:
      return render(prompts_.get(kBaselineTemplate), {{"[Article]", doc.text}});
    case RunMode::kTrain:
      break;
  }
  throw ConfigError("render_test_prompt: train mode has no single test prompt");
}

std::string Engine::test_summarization(const corpus::Document& doc,
                                       const experience::ExperienceSet& es,
                                       provider::Provider& prov) const {
  if (doc.text.empty()) throw PreconditionError("document " + doc.id + " has empty text");
  std::string prompt = render_test_prompt(doc, es, RunMode::kTestSummarization);
  return trim(prov.complete(make_request(prompt)).raw_text);
}

std::string Engine::test_qa_dataset(const corpus::Document& doc,
                                    const experience::ExperienceSet& es,
                                    provider::Provider& prov) const {
  if (doc.text.empty()) throw PreconditionError("document " + doc.id + " has empty text");
  if (doc.gold_qa.empty()) {
    throw PreconditionError("document " + doc.id + " has no gold QA pairs");
  }
  std::string prompt = render_test_prompt(doc, es, RunMode::kTestQa);
  return trim(prov.complete(make_request(prompt)).raw_text);
}

std::string Engine::baseline_summary(const corpus::Document& doc,
                                     provider::Provider& prov) const {
  if (doc.text.empty()) throw PreconditionError("document " + doc.id + " has empty text");
  std::string prompt = render_test_prompt(doc, {}, RunMode::kBaseline);
  return trim(prov.complete(make_request(prompt)).raw_text);
}

std::string Engine::dispatch_doc(const corpus::Document& doc,
                                 const experience::ExperienceSet& es,
                                 provider::Provider& prov) const {
  switch (cfg_.mode) {
    case RunMode::kTestSummarization:
      return test_summarization(doc, es, prov);
    case RunMode::kTestQa:
      return test_qa_dataset(doc, es, prov);
    case RunMode::kBaseline:
      return baseline_summary(doc, prov);
    case RunMode::kTrain:
      break;
  }
  throw ConfigError("run_test_phase does not handle mode " + to_string(cfg_.mode));
}

PhaseOutcome Engine::run_test_phase(const corpus::Dataset& ds,
                                    const experience::ExperienceSet& es,
                                    provider::Provider& prov) const {
  const std::size_t n = ds.documents.size();
  std::vector<std::optional<DocResult>> slots(n);
  std::vector<std::pair<std::size_t, FailureRecord>> failures;
  std::mutex failure_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> over_budget{false};

  auto worker = [&]() {
    while (!over_budget.load()) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const corpus::Document& doc = ds.documents[i];
      try {
        slots[i] = DocResult{doc.id, dispatch_doc(doc, es, prov)};
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failures.emplace_back(i, FailureRecord{doc.id, to_string(cfg_.mode), e.what()});
        if (static_cast<double>(failures.size()) >
            cfg_.failure_threshold * static_cast<double>(n)) {
          over_budget.store(true);
        }
      }
    }
  };

  std::size_t pool = std::min<std::size_t>(std::max(cfg_.workers, 1), std::max<std::size_t>(n, 1));
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (std::size_t i = 0; i < pool; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  std::sort(failures.begin(), failures.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  PhaseOutcome out;
  for (auto& slot : slots) {
    if (slot) out.results.push_back(std::move(*slot));
  }
  for (auto& [_, record] : failures) out.failures.push_back(std::move(record));
  check_failure_budget(out.failures.size(), n, cfg_.failure_threshold);
  return out;
}

}  // namespace t3::engine
