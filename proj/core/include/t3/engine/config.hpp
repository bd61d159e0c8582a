#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "t3/corpus/dataset.hpp"
#include "t3/provider/http_provider.hpp"
#include "t3/provider/request.hpp"

namespace t3::engine {

// Algorithm parameters K, S, R, C. The source work discloses none of the
// four values; these defaults are engine choices, printed at run start.
struct StopThresholds {
  double s_min = 0.30;  // similarity threshold S, strict >
  double r_min = 30.0;  // readability threshold R, strict >
  double c_max = 0.25;  // compression ceiling C, strict <
  int k_max = 3;        // max inner iterations K

  bool operator==(const StopThresholds&) const = default;
};

void validate(const StopThresholds& t);  // throws ConfigError

enum class RunMode { kTrain, kTestSummarization, kTestQa, kBaseline };
enum class Ablation { kFull, kNoSumExp, kNoQaExp };

std::string to_string(RunMode mode);
std::string to_string(Ablation ablation);
RunMode run_mode_from_string(const std::string& s);
Ablation ablation_from_string(const std::string& s);

struct ProviderSettings {
  provider::Backend backend = provider::Backend::kReplay;
  std::string model = "default-model";
  std::string base_url;
  double requests_per_minute = 0.0;
  long timeout_s = 120;
  std::optional<double> temperature;        // absent -> provider default
  std::optional<long> max_output_tokens;
  provider::SafetyMode safety_mode = provider::SafetyMode::kDefault;
  std::string transcript_path;              // replay source and/or record sink
};

struct EvalSettings {
  double alpha = 0.05;
  bool star_any_metric = false;  // default: star when ALL metric p-values < alpha
  bool factscore = false;        // judge calls cost provider traffic; opt in
  std::string judge_model;       // empty -> provider model
};

struct RunConfig {
  std::string run_id = "run";
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  RunMode mode = RunMode::kTrain;
  corpus::Style style = corpus::Style::kNews;
  Ablation ablation = Ablation::kFull;
  std::string dataset_path;
  corpus::DatasetKind dataset_kind = corpus::DatasetKind::kQa;
  StopThresholds thresholds;
  ProviderSettings provider;
  EvalSettings eval;
  std::string prompts_dir = "data/prompts";
  std::string experience_path;  // trained or published experience file for test modes
  double failure_threshold = 0.10;
  int workers = 4;
};

// Reads a JSON config file, then applies `key=value` overrides (dotted
// paths, e.g. thresholds.k_max=5). Values parse as JSON scalars, falling
// back to strings.
RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides = {});
RunConfig run_config_from_json_text(const std::string& text,
                                    const std::vector<std::string>& overrides = {});

// Config snapshot for manifests; parses back through
// run_config_from_json_text.
std::string run_config_to_json_text(const RunConfig& cfg);

void validate(const RunConfig& cfg);  // mode/dataset-kind compatibility etc.

}  // namespace t3::engine
