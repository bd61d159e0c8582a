#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "t3/engine/config.hpp"
#include "t3/error.hpp"
#include "t3/pipeline.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::string provider_backend;
  std::string ablation;
  std::string published;  // --use-published-experience
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "run config JSON file")->required();
  cmd->add_option("--set", opts.overrides,
                  "config override key=value (dotted keys, repeatable)");
  cmd->add_option("--out", opts.out_dir, "output directory (overrides config out_dir)");
  cmd->add_option("--provider", opts.provider_backend,
                  "provider backend: openai_compatible|anthropic|gemini|replay");
  cmd->add_option("--ablation", opts.ablation, "full|no_sum_exp|no_qa_exp");
}

void add_published(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--use-published-experience", opts.published,
                  "run with the shipped news|narrative experience file");
}

t3::engine::RunConfig make_config(const CommonOpts& opts) {
  std::vector<std::string> overrides = opts.overrides;
  if (!opts.out_dir.empty()) overrides.push_back("out_dir=" + opts.out_dir);
  if (!opts.provider_backend.empty()) {
    overrides.push_back("provider.backend=" + opts.provider_backend);
  }
  if (!opts.ablation.empty()) overrides.push_back("ablation=" + opts.ablation);
  return t3::engine::load_run_config(opts.config_path, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"T3 experience-transfer summarization pipeline"};
  app.require_subcommand(1);

  CommonOpts ingest_opts, train_opts, run_opts, baseline_opts, eval_opts, report_opts,
      record_opts;
  std::string eval_run_dir, report_wo, report_t3;
  std::string report_format = "markdown";
  std::string record_stage, record_run_dir;

  CLI::App* ingest = app.add_subcommand("ingest", "validate and cache the configured dataset");
  add_common(ingest, ingest_opts);

  CLI::App* train = app.add_subcommand("train", "run the experience training loop");
  add_common(train, train_opts);

  CLI::App* run = app.add_subcommand("run", "zero-shot test phase with trained experiences");
  add_common(run, run_opts);
  add_published(run, run_opts);

  CLI::App* baseline = app.add_subcommand("baseline", "plain-prompt baseline summaries");
  add_common(baseline, baseline_opts);

  CLI::App* eval_cmd = app.add_subcommand("eval", "score a finished run's summaries");
  add_common(eval_cmd, eval_opts);
  eval_cmd->add_option("--run", eval_run_dir, "run directory holding summaries.jsonl")
      ->required();

  CLI::App* report = app.add_subcommand("report", "render the w/o-vs-T3 comparison table");
  add_common(report, report_opts);
  report->add_option("--wo", report_wo, "metrics.json of the w/o (baseline) run")->required();
  report->add_option("--t3", report_t3, "metrics.json of the T3 run")->required();
  report->add_option("--format", report_format, "markdown|csv|json");

  CLI::App* record = app.add_subcommand(
      "record", "execute a stage live while persisting provider traffic");
  record->add_option("stage", record_stage, "train|run|baseline|eval")->required();
  add_common(record, record_opts);
  add_published(record, record_opts);
  record->add_option("--run", record_run_dir, "run directory (for the eval stage)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      t3::pipeline::run_ingest(make_config(ingest_opts));
    } else if (train->parsed()) {
      t3::pipeline::run_train(make_config(train_opts), false);
    } else if (run->parsed()) {
      t3::pipeline::run_test(make_config(run_opts), false, run_opts.published);
    } else if (baseline->parsed()) {
      t3::pipeline::run_baseline(make_config(baseline_opts), false);
    } else if (eval_cmd->parsed()) {
      t3::pipeline::run_eval(make_config(eval_opts), eval_run_dir, false);
    } else if (report->parsed()) {
      t3::pipeline::run_report(make_config(report_opts), report_wo, report_t3, report_format);
    } else if (record->parsed()) {
      t3::engine::RunConfig cfg = make_config(record_opts);
      if (record_stage == "train") {
        t3::pipeline::run_train(cfg, true);
      } else if (record_stage == "run") {
        t3::pipeline::run_test(cfg, true, record_opts.published);
      } else if (record_stage == "baseline") {
        t3::pipeline::run_baseline(cfg, true);
      } else if (record_stage == "eval") {
        if (record_run_dir.empty()) {
          throw t3::ConfigError("record eval needs --run <run directory>");
        }
        t3::pipeline::run_eval(cfg, record_run_dir, true);
      } else {
        throw t3::ConfigError("unknown record stage \"" + record_stage +
                              "\" (expected train, run, baseline or eval)");
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
