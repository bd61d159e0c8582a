#include "t3/engine/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "t3/error.hpp"

namespace t3::engine {

using nlohmann::json;

void validate(const StopThresholds& t) {
  if (t.s_min < 0.0 || t.s_min > 1.0) {
    throw ConfigError("thresholds.s_min must be in [0,1], got " + std::to_string(t.s_min));
  }
  if (t.c_max <= 0.0) {
    throw ConfigError("thresholds.c_max must be > 0, got " + std::to_string(t.c_max));
  }
  if (t.k_max < 1) {
    throw ConfigError("thresholds.k_max must be >= 1, got " + std::to_string(t.k_max));
  }
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kTrain:
      return "train";
    case RunMode::kTestSummarization:
      return "test_summarization";
    case RunMode::kTestQa:
      return "test_qa";
    case RunMode::kBaseline:
      return "baseline";
  }
  return "train";
}

std::string to_string(Ablation ablation) {
  switch (ablation) {
    case Ablation::kFull:
      return "full";
    case Ablation::kNoSumExp:
      return "no_sum_exp";
    case Ablation::kNoQaExp:
      return "no_qa_exp";
  }
  return "full";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "train") return RunMode::kTrain;
  if (s == "test_summarization") return RunMode::kTestSummarization;
  if (s == "test_qa") return RunMode::kTestQa;
  if (s == "baseline") return RunMode::kBaseline;
  throw ConfigError("unknown mode \"" + s +
                    "\" (expected train, test_summarization, test_qa or baseline)");
}

Ablation ablation_from_string(const std::string& s) {
  if (s == "full") return Ablation::kFull;
  if (s == "no_sum_exp") return Ablation::kNoSumExp;
  if (s == "no_qa_exp") return Ablation::kNoQaExp;
  throw ConfigError("unknown ablation \"" + s +
                    "\" (expected full, no_sum_exp or no_qa_exp)");
}

namespace {

void apply_override(json& doc, const std::string& spec) {
  std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("bad --set override \"" + spec + "\" (expected key=value)");
  }
  std::string path = spec.substr(0, eq);
  std::string value = spec.substr(eq + 1);

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError("bad --set key \"" + path + "\"");
    if (dot == std::string::npos) {
      json parsed;
      try {
        parsed = json::parse(value);
      } catch (const json::exception&) {
        parsed = value;  // bare strings need no quoting
      }
      (*node)[key] = parsed;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  return obj[key].get<T>();
}

RunConfig from_json(const json& doc) {
  RunConfig cfg;
  try {
    cfg.run_id = get_or<std::string>(doc, "run_id", cfg.run_id);
    cfg.out_dir = get_or<std::string>(doc, "out_dir", cfg.out_dir);
    cfg.seed = get_or<std::uint64_t>(doc, "seed", cfg.seed);
    if (doc.contains("mode")) cfg.mode = run_mode_from_string(doc["mode"].get<std::string>());
    if (doc.contains("style")) {
      cfg.style = corpus::style_from_string(doc["style"].get<std::string>());
    }
    if (doc.contains("ablation")) {
      cfg.ablation = ablation_from_string(doc["ablation"].get<std::string>());
    }
    if (doc.contains("dataset")) {
      const json& ds = doc["dataset"];
      cfg.dataset_path = get_or<std::string>(ds, "path", "");
      if (ds.contains("kind")) {
        cfg.dataset_kind = corpus::kind_from_string(ds["kind"].get<std::string>());
      }
    }
    if (doc.contains("thresholds")) {
      const json& t = doc["thresholds"];
      cfg.thresholds.s_min = get_or<double>(t, "s_min", cfg.thresholds.s_min);
      cfg.thresholds.r_min = get_or<double>(t, "r_min", cfg.thresholds.r_min);
      cfg.thresholds.c_max = get_or<double>(t, "c_max", cfg.thresholds.c_max);
      cfg.thresholds.k_max = get_or<int>(t, "k_max", cfg.thresholds.k_max);
    }
    if (doc.contains("provider")) {
      const json& p = doc["provider"];
      if (p.contains("backend")) {
        cfg.provider.backend = provider::backend_from_string(p["backend"].get<std::string>());
      }
      cfg.provider.model = get_or<std::string>(p, "model", cfg.provider.model);
      cfg.provider.base_url = get_or<std::string>(p, "base_url", cfg.provider.base_url);
      cfg.provider.requests_per_minute =
          get_or<double>(p, "requests_per_minute", cfg.provider.requests_per_minute);
      cfg.provider.timeout_s = get_or<long>(p, "timeout_s", cfg.provider.timeout_s);
      if (p.contains("temperature") && !p["temperature"].is_null()) {
        cfg.provider.temperature = p["temperature"].get<double>();
      }
      if (p.contains("max_output_tokens") && !p["max_output_tokens"].is_null()) {
        cfg.provider.max_output_tokens = p["max_output_tokens"].get<long>();
      }
      if (p.contains("safety_mode")) {
        cfg.provider.safety_mode =
            provider::safety_mode_from_string(p["safety_mode"].get<std::string>());
      }
      cfg.provider.transcript_path =
          get_or<std::string>(p, "transcript", cfg.provider.transcript_path);
    }
    if (doc.contains("eval")) {
      const json& e = doc["eval"];
      cfg.eval.alpha = get_or<double>(e, "alpha", cfg.eval.alpha);
      cfg.eval.star_any_metric = get_or<bool>(e, "star_any_metric", cfg.eval.star_any_metric);
      cfg.eval.factscore = get_or<bool>(e, "factscore", cfg.eval.factscore);
      cfg.eval.judge_model = get_or<std::string>(e, "judge_model", cfg.eval.judge_model);
    }
    cfg.prompts_dir = get_or<std::string>(doc, "prompts_dir", cfg.prompts_dir);
    cfg.experience_path = get_or<std::string>(doc, "experience_path", cfg.experience_path);
    cfg.failure_threshold = get_or<double>(doc, "failure_threshold", cfg.failure_threshold);
    cfg.workers = get_or<int>(doc, "workers", cfg.workers);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

}  // namespace

RunConfig run_config_from_json_text(const std::string& text,
                                    const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  for (const auto& spec : overrides) apply_override(doc, spec);
  return from_json(doc);
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return run_config_from_json_text(buffer.str(), overrides);
}

std::string run_config_to_json_text(const RunConfig& cfg) {
  json doc;
  doc["run_id"] = cfg.run_id;
  doc["out_dir"] = cfg.out_dir;
  doc["seed"] = cfg.seed;
  doc["mode"] = to_string(cfg.mode);
  doc["style"] = corpus::to_string(cfg.style);
  doc["ablation"] = to_string(cfg.ablation);
  doc["dataset"] = {{"path", cfg.dataset_path}, {"kind", corpus::to_string(cfg.dataset_kind)}};
  doc["thresholds"] = {{"s_min", cfg.thresholds.s_min},
                       {"r_min", cfg.thresholds.r_min},
                       {"c_max", cfg.thresholds.c_max},
                       {"k_max", cfg.thresholds.k_max}};
  json p;
  p["backend"] = provider::to_string(cfg.provider.backend);
  p["model"] = cfg.provider.model;
  p["base_url"] = cfg.provider.base_url;
  p["requests_per_minute"] = cfg.provider.requests_per_minute;
  p["timeout_s"] = cfg.provider.timeout_s;
  if (cfg.provider.temperature) p["temperature"] = *cfg.provider.temperature;
  if (cfg.provider.max_output_tokens) p["max_output_tokens"] = *cfg.provider.max_output_tokens;
  p["safety_mode"] = provider::to_string(cfg.provider.safety_mode);
  p["transcript"] = cfg.provider.transcript_path;
  doc["provider"] = std::move(p);
  doc["eval"] = {{"alpha", cfg.eval.alpha},
                 {"star_any_metric", cfg.eval.star_any_metric},
                 {"factscore", cfg.eval.factscore},
                 {"judge_model", cfg.eval.judge_model}};
  doc["prompts_dir"] = cfg.prompts_dir;
  doc["experience_path"] = cfg.experience_path;
  doc["failure_threshold"] = cfg.failure_threshold;
  doc["workers"] = cfg.workers;
  return doc.dump(2);
}

void validate(const RunConfig& cfg) {
  validate(cfg.thresholds);
  if ((cfg.mode == RunMode::kTrain || cfg.mode == RunMode::kTestQa) &&
      cfg.dataset_kind != corpus::DatasetKind::kQa) {
    throw ConfigError("mode " + to_string(cfg.mode) + " requires dataset.kind = qa");
  }
  if (cfg.failure_threshold < 0.0 || cfg.failure_threshold > 1.0) {
    throw ConfigError("failure_threshold must be in [0,1]");
  }
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
}

}  // namespace t3::engine
