#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathbench/taskset.hpp"

namespace pathbench {

struct EndpointConfig {
  std::string base_url;
  std::string model_name;
  std::string auth_env;  // environment variable holding the token; never logged
  nlohmann::json params = nlohmann::json::object();
  int max_in_flight = 4;
  int max_retries = 3;
  double backoff_initial_s = 1.0;
  double timeout_s = 120.0;
};

struct RawResponse {
  std::string task_id;
  std::string model;
  std::string text;
  double latency_ms = 0.0;
  std::optional<std::string> error;  // exactly one of text/error is populated
  std::string error_kind;
  int64_t timestamp_ms = 0;
};

inline const char* kInvalidToken = "<invalid>";

struct ParsedAnswer {
  std::vector<std::string> tokens;  // vocabulary glyphs or the invalid sentinel
  bool answered = false;
  bool stripped_fences = false;
  int invalid_tokens = 0;
  int raw_items = 0;
};

struct EvalRecord {
  std::string task_id;
  std::string model;
  int em = 0;
  double tok_acc = 0.0;
  std::vector<uint8_t> per_position;  // one flag per gold position
  bool answered = false;
  double latency_ms = 0.0;
  int prefix_exact_len = 0;  // longest all-correct prefix
};

RawResponse query(const TaskInstance& task, const EndpointConfig& ep);

ParsedAnswer parse_answer(const std::string& text, int n_expected);

EvalRecord score(const ParsedAnswer& parsed, const std::vector<std::string>& gold);

std::string format_answer(const std::vector<std::string>& tokens);
std::string oracle_tracer(const TaskInstance& task);

// Gold emission with two controlled failure modes: at each crossing decision
// token the remaining suffix reverses with probability q_cross, and after
// each confound encounter every later token is independently replaced by a
// random non-gold glyph with an extra per-token probability q_confound.
std::string noisy_tracer(const TaskInstance& task, double q_cross, double q_confound,
                         uint64_t seed);

struct AgentSpec {
  enum class Kind { oracle, noisy, endpoint } kind = Kind::oracle;
  double q_cross = 0.0;
  double q_confound = 0.0;
  uint64_t seed = 0;
  EndpointConfig endpoint;
};

AgentSpec agent_from_string(const std::string& text);  // "oracle" | "noisy" | "endpoint"

struct EvalSummary {
  int total = 0;
  int answered = 0;
  double em = 0.0;
  double tok_acc = 0.0;
  double answer_rate = 0.0;
};

// Resumable: task_ids already present in out_path are skipped; new records
// append in task order.
EvalSummary run_eval(const std::vector<TaskInstance>& tasks, const AgentSpec& agent,
                     const std::string& out_path, const std::string& model_label);

void write_evals(const std::string& path, const std::vector<EvalRecord>& evals, bool append);
std::vector<EvalRecord> read_evals(const std::string& path);

}  // namespace pathbench
