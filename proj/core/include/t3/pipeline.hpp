#pragma once

#include <map>
#include <memory>
#include <string>

#include "t3/engine/config.hpp"
#include "t3/engine/engine.hpp"
#include "t3/provider/provider.hpp"

namespace t3::pipeline {

// Backend factory. Replay loads the configured transcript; live backends go
// over HTTP. With record=true every live exchange is appended to the
// transcript path (record + replay backend is a contradiction and errors).
std::unique_ptr<provider::Provider> make_provider(const engine::ProviderSettings& settings,
                                                  bool record);

// Artifacts land under out_dir/run_id/<name>. No timestamps anywhere: a
// replayed stage must be byte-identical across executions.
std::string artifact_path(const engine::RunConfig& cfg, const std::string& name);

void write_manifest(const engine::RunConfig& cfg, const std::string& stage,
                    bool record, long experience_revision);

// Stage entry points (CLI subcommands map onto these 1:1). All throw on
// error; RunAbortedError signals a tripped failure budget.
void run_ingest(const engine::RunConfig& cfg);
void run_train(const engine::RunConfig& cfg, bool record);

// `published_style` empty -> cfg.experience_path; otherwise loads the
// shipped news/narrative experience file from `published_dir`.
void run_test(const engine::RunConfig& cfg, bool record, const std::string& published_style,
              const std::string& published_dir = "data/experiences");
void run_baseline(const engine::RunConfig& cfg, bool record);

// Scores the summaries of `run_dir` (a prior run/baseline output directory)
// against the configured dataset; writes scores.jsonl + metrics.json into
// that same directory.
void run_eval(const engine::RunConfig& cfg, const std::string& run_dir, bool record);

// Renders the w/o-vs-T3 table from two metrics.json files.
void run_report(const engine::RunConfig& cfg, const std::string& wo_metrics_path,
                const std::string& t3_metrics_path, const std::string& format);

// Plumbing shared with tests.
std::map<std::string, std::string> load_summaries(const std::string& path);
void write_summaries(const engine::PhaseOutcome& outcome, const std::string& path);
void write_traces(const std::vector<engine::IterationTrace>& traces, const std::string& path);
std::vector<engine::IterationTrace> load_traces(const std::string& path);
void write_failures(const std::vector<engine::FailureRecord>& failures, const std::string& path);

}  // namespace t3::pipeline
