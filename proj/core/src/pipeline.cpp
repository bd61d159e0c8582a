#include "t3/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "t3/corpus/dataset.hpp"
#include "t3/error.hpp"
#include "t3/eval/compare.hpp"
#include "t3/eval/scores.hpp"
#include "t3/experience/experience.hpp"
#include "t3/provider/http_provider.hpp"
#include "t3/provider/request.hpp"
#include "t3/provider/transcript.hpp"

namespace t3::pipeline {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

engine::PromptLibrary load_prompts(const engine::RunConfig& cfg) {
  engine::PromptLibrary prompts;
  prompts.load_dir(cfg.prompts_dir);
  return prompts;
}

corpus::Dataset load_configured_dataset(const engine::RunConfig& cfg) {
  if (cfg.dataset_path.empty()) throw ConfigError("config has no dataset.path");
  corpus::LoadResult loaded =
      corpus::load_dataset(cfg.dataset_path, cfg.dataset_kind, cfg.style);
  if (!loaded.rejections.empty()) {
    std::cerr << "warning: " << loaded.rejections.size() << " malformed dataset lines in "
              << cfg.dataset_path << "\n";
  }
  return std::move(loaded.dataset);
}

experience::ExperienceSet load_experiences_for_test(const engine::RunConfig& cfg,
                                                    const std::string& published_style,
                                                    const std::string& published_dir) {
  if (!published_style.empty()) {
    corpus::Style style = corpus::style_from_string(published_style);  // validates the name
    return experience::load(published_dir + "/" + corpus::to_string(style) + ".json");
  }
  if (!cfg.experience_path.empty()) return experience::load(cfg.experience_path);
  throw ConfigError(
      "no experiences available: set experience_path in the config or pass "
      "--use-published-experience {news|narrative}");
}

provider::ProviderRequest judge_base_request(const engine::RunConfig& cfg) {
  provider::ProviderRequest req;
  req.backend = cfg.provider.backend;
  req.model = cfg.eval.judge_model.empty() ? cfg.provider.model : cfg.eval.judge_model;
  req.temperature = cfg.provider.temperature;
  req.max_output_tokens = cfg.provider.max_output_tokens;
  req.safety_mode = cfg.provider.safety_mode;
  return req;
}

}  // namespace

std::unique_ptr<provider::Provider> make_provider(const engine::ProviderSettings& settings,
                                                  bool record) {
  if (settings.backend == provider::Backend::kReplay) {
    if (record) {
      throw ConfigError("record with the replay backend is contradictory; pick a live backend");
    }
    if (settings.transcript_path.empty()) {
      throw ConfigError("replay backend needs provider.transcript in the config");
    }
    auto store = std::make_shared<provider::TranscriptStore>();
    store->load(settings.transcript_path);
    return std::make_unique<provider::ReplayProvider>(std::move(store));
  }

  provider::HttpSettings http;
  http.base_url = settings.base_url;
  http.requests_per_minute = settings.requests_per_minute;
  http.timeout_s = settings.timeout_s;
  std::unique_ptr<provider::Provider> live =
      std::make_unique<provider::HttpProvider>(http);
  if (!record) return live;

  if (settings.transcript_path.empty()) {
    throw ConfigError("record mode needs provider.transcript in the config");
  }
  auto store = std::make_shared<provider::TranscriptStore>();
  if (fs::exists(settings.transcript_path)) store->load(settings.transcript_path);
  store->attach_file(settings.transcript_path);
  return std::make_unique<provider::RecordingProvider>(std::move(live), std::move(store));
}

std::string artifact_path(const engine::RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / cfg.run_id / name).string();
}

void write_manifest(const engine::RunConfig& cfg, const std::string& stage, bool record,
                    long experience_revision) {
  json hashes = json::object();
  engine::PromptLibrary prompts = load_prompts(cfg);
  for (const auto& name : prompts.names()) {
    hashes[name] = provider::sha256_hex(prompts.get(name).body);
  }
  json manifest;
  manifest["stage"] = stage;
  manifest["provider_mode"] =
      provider::to_string(cfg.provider.backend) + (record ? "+record" : "");
  manifest["seed"] = cfg.seed;
  manifest["experience_revision"] = experience_revision;
  manifest["template_hashes"] = std::move(hashes);
  manifest["config"] = json::parse(engine::run_config_to_json_text(cfg));
  write_file(artifact_path(cfg, "manifest.json"), manifest.dump(2) + "\n");
}

std::map<std::string, std::string> load_summaries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open summaries: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json row = json::parse(line);
      out[row.at("doc_id").get<std::string>()] = row.at("summary").get<std::string>();
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": bad summary line: " + e.what());
    }
  }
  return out;
}

void write_summaries(const engine::PhaseOutcome& outcome, const std::string& path) {
  std::string content;
  for (const auto& result : outcome.results) {
    json row;
    row["doc_id"] = result.doc_id;
    row["summary"] = result.summary;
    content += row.dump() + "\n";
  }
  write_file(path, content);
}

void write_traces(const std::vector<engine::IterationTrace>& traces, const std::string& path) {
  std::string content;
  for (const auto& trace : traces) {
    json row;
    row["doc_id"] = trace.doc_id;
    row["k"] = trace.k;
    row["summary_candidate"] = trace.summary_candidate;
    row["s_i"] = trace.s_i;
    row["r_i"] = trace.r_i;
    row["c_i"] = trace.c_i;
    row["stopped"] = trace.stopped;
    row["stop_reason"] = engine::to_string(trace.stop_reason);
    content += row.dump() + "\n";
  }
  write_file(path, content);
}

std::vector<engine::IterationTrace> load_traces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open traces: " + path);
  std::vector<engine::IterationTrace> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json row = json::parse(line);
      engine::IterationTrace trace;
      trace.doc_id = row.at("doc_id").get<std::string>();
      trace.k = row.at("k").get<int>();
      trace.summary_candidate = row.at("summary_candidate").get<std::string>();
      trace.s_i = row.at("s_i").get<double>();
      trace.r_i = row.at("r_i").get<double>();
      trace.c_i = row.at("c_i").get<double>();
      trace.stopped = row.at("stopped").get<bool>();
      trace.stop_reason = engine::stop_reason_from_string(row.at("stop_reason"));
      out.push_back(std::move(trace));
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": bad trace line: " + e.what());
    }
  }
  return out;
}

void write_failures(const std::vector<engine::FailureRecord>& failures,
                    const std::string& path) {
  std::string content;
  for (const auto& failure : failures) {
    json row;
    row["doc_id"] = failure.doc_id;
    row["stage"] = failure.stage;
    row["error"] = failure.error;
    content += row.dump() + "\n";
  }
  write_file(path, content);
}

void run_ingest(const engine::RunConfig& cfg) {
  if (cfg.dataset_path.empty()) throw ConfigError("config has no dataset.path");
  corpus::LoadResult loaded =
      corpus::load_dataset(cfg.dataset_path, cfg.dataset_kind, cfg.style);
  fs::create_directories(fs::path(cfg.out_dir) / cfg.run_id);
  corpus::save_dataset(loaded.dataset, artifact_path(cfg, "cache.jsonl"));
  std::cout << loaded.dataset.documents.size() << " documents loaded\n";
  if (!loaded.rejections.empty()) {
    std::string rejection_path = artifact_path(cfg, "rejections.jsonl");
    corpus::write_rejections(loaded.rejections, rejection_path);
    std::cout << loaded.rejections.size() << " lines rejected; report: " << rejection_path
              << "\n";
  }
  write_manifest(cfg, "ingest", false, 0);
}

void run_train(const engine::RunConfig& cfg, bool record) {
  engine::RunConfig train_cfg = cfg;
  train_cfg.mode = engine::RunMode::kTrain;
  validate(train_cfg);
  std::cout << "thresholds: S=" << train_cfg.thresholds.s_min
            << " R=" << train_cfg.thresholds.r_min << " C=" << train_cfg.thresholds.c_max
            << " K=" << train_cfg.thresholds.k_max << "\n";

  corpus::Dataset train_set = load_configured_dataset(train_cfg);
  engine::Engine eng(train_cfg, load_prompts(train_cfg));
  std::unique_ptr<provider::Provider> prov = make_provider(train_cfg.provider, record);

  engine::TrainOutcome outcome = eng.train(train_set, *prov);
  fs::create_directories(fs::path(train_cfg.out_dir) / train_cfg.run_id);
  experience::persist(outcome.experiences, artifact_path(train_cfg, "experience.json"));
  write_traces(outcome.traces, artifact_path(train_cfg, "traces.jsonl"));
  write_failures(outcome.failures, artifact_path(train_cfg, "failures.jsonl"));
  write_manifest(train_cfg, "train", record, outcome.experiences.revision);
  std::cout << "trained on " << train_set.documents.size() << " documents, "
            << outcome.experiences.revision << " experience revisions, "
            << outcome.failures.size() << " failures\n";
}

namespace {

void run_phase(const engine::RunConfig& cfg, bool record, const experience::ExperienceSet& es,
               const std::string& stage) {
  validate(cfg);
  corpus::Dataset ds = load_configured_dataset(cfg);
  engine::Engine eng(cfg, load_prompts(cfg));
  std::unique_ptr<provider::Provider> prov = make_provider(cfg.provider, record);

  engine::PhaseOutcome outcome;
  try {
    outcome = eng.run_test_phase(ds, es, *prov);
  } catch (const RunAbortedError&) {
    write_manifest(cfg, stage, record, es.revision);
    throw;
  }
  write_summaries(outcome, artifact_path(cfg, "summaries.jsonl"));
  write_failures(outcome.failures, artifact_path(cfg, "failures.jsonl"));
  write_manifest(cfg, stage, record, es.revision);
  std::cout << outcome.results.size() << " summaries written, " << outcome.failures.size()
            << " failures\n";
}

}  // namespace

void run_test(const engine::RunConfig& cfg, bool record, const std::string& published_style,
              const std::string& published_dir) {
  if (cfg.mode != engine::RunMode::kTestSummarization &&
      cfg.mode != engine::RunMode::kTestQa) {
    throw ConfigError("run needs mode = test_summarization or test_qa, got " +
                      engine::to_string(cfg.mode));
  }
  experience::ExperienceSet es =
      load_experiences_for_test(cfg, published_style, published_dir);
  run_phase(cfg, record, es, "run");
}

void run_baseline(const engine::RunConfig& cfg, bool record) {
  engine::RunConfig baseline_cfg = cfg;
  baseline_cfg.mode = engine::RunMode::kBaseline;
  run_phase(baseline_cfg, record, experience::ExperienceSet{}, "baseline");
}

void run_eval(const engine::RunConfig& cfg, const std::string& run_dir, bool record) {
  std::string summaries_path = (fs::path(run_dir) / "summaries.jsonl").string();
  if (!fs::exists(summaries_path)) {
    throw ConfigError("no summaries at " + summaries_path + "; run/baseline must come first");
  }
  std::map<std::string, std::string> outputs = load_summaries(summaries_path);
  corpus::Dataset refs = load_configured_dataset(cfg);
  eval::ReferenceMode mode = cfg.dataset_kind == corpus::DatasetKind::kSummarization
                                 ? eval::ReferenceMode::kGoldSummary
                                 : eval::ReferenceMode::kSourceText;
  std::string run_id = fs::path(run_dir).filename().string();
  eval::MetricReport report = eval::score_run(outputs, refs, mode, run_id);

  if (cfg.eval.factscore) {
    engine::PromptLibrary prompts = load_prompts(cfg);
    std::unique_ptr<provider::Provider> prov = make_provider(cfg.provider, record);
    eval::fill_factscores(report, outputs, refs, *prov, prompts.get("factscore_judge"),
                          judge_base_request(cfg));
  }

  json report_json = json::parse(eval::report_to_json_text(report));
  std::string scores_jsonl;
  for (const auto& row : report_json.at("docs")) scores_jsonl += row.dump() + "\n";
  write_file((fs::path(run_dir) / "scores.jsonl").string(), scores_jsonl);
  write_file((fs::path(run_dir) / "metrics.json").string(),
             eval::report_to_json_text(report) + "\n");
  // The evaluated run's own manifest stays untouched.
  json manifest;
  manifest["stage"] = "eval";
  manifest["provider_mode"] = provider::to_string(cfg.provider.backend);
  manifest["reference_mode"] = eval::to_string(mode);
  manifest["judge_version"] = report.judge_version;
  manifest["config"] = json::parse(engine::run_config_to_json_text(cfg));
  write_file((fs::path(run_dir) / "eval_manifest.json").string(), manifest.dump(2) + "\n");
  std::cout << "scored " << report.docs.size() << " documents (reference: "
            << eval::to_string(mode) << "); mean ROUGE-1 F1 " << report.mean_rouge1 << "\n";
}

void run_report(const engine::RunConfig& cfg, const std::string& wo_metrics_path,
                const std::string& t3_metrics_path, const std::string& format) {
  eval::MetricReport wo = eval::report_from_json_text(read_file(wo_metrics_path));
  eval::MetricReport t3 = eval::report_from_json_text(read_file(t3_metrics_path));
  eval::SignificanceTable table =
      eval::compare_runs(wo, t3, cfg.eval.alpha, cfg.eval.star_any_metric);
  std::string extension = format == "markdown" ? "md" : format;
  std::string path = artifact_path(cfg, "report." + extension);
  fs::create_directories(fs::path(cfg.out_dir) / cfg.run_id);
  eval::render_report(table, format, path);
  write_manifest(cfg, "report", false, 0);
  std::cout << "report written: " << path << "\n";
}

}  // namespace t3::pipeline
