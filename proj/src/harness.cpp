#include "pathbench/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "pathbench/jsonl.hpp"
#include "pathbench/rng.hpp"

namespace pathbench {

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string collapse_ws(const std::string& s) {
  std::string out;
  bool in_ws = true;  // also trims leading whitespace
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_ws = true;
    } else {
      if (in_ws && !out.empty()) out.push_back(' ');
      out.push_back(c);
      in_ws = false;
    }
  }
  return out;
}

std::string base64_encode(const std::string& data) {
  static const char* tbl = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  size_t i = 0;
  while (i + 2 < data.size()) {
    uint32_t v = (static_cast<uint8_t>(data[i]) << 16) | (static_cast<uint8_t>(data[i + 1]) << 8) |
                 static_cast<uint8_t>(data[i + 2]);
    out.push_back(tbl[(v >> 18) & 63]);
    out.push_back(tbl[(v >> 12) & 63]);
    out.push_back(tbl[(v >> 6) & 63]);
    out.push_back(tbl[v & 63]);
    i += 3;
  }
  if (i + 1 == data.size()) {
    uint32_t v = static_cast<uint8_t>(data[i]) << 16;
    out.push_back(tbl[(v >> 18) & 63]);
    out.push_back(tbl[(v >> 12) & 63]);
    out += "==";
  } else if (i + 2 == data.size()) {
    uint32_t v = (static_cast<uint8_t>(data[i]) << 16) | (static_cast<uint8_t>(data[i + 1]) << 8);
    out.push_back(tbl[(v >> 18) & 63]);
    out.push_back(tbl[(v >> 12) & 63]);
    out.push_back(tbl[(v >> 6) & 63]);
    out += "=";
  }
  return out;
}

int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

RawResponse query(const TaskInstance& task, const EndpointConfig& ep) {
  RawResponse out;
  out.task_id = task.task_id;
  out.model = ep.model_name;
  out.timestamp_ms = now_ms();

  std::string png_path = task.image;
  if (png_path.size() > 4 && png_path.substr(png_path.size() - 4) == ".svg") {
    png_path = png_path.substr(0, png_path.size() - 4) + ".png";
    std::ifstream probe(png_path, std::ios::binary);
    if (!probe) rasterize(read_text_file(task.image), png_path);
  }
  std::string image_bytes = read_text_file(png_path);

  nlohmann::json body{
      {"model", ep.model_name},
      {"messages",
       {{{"role", "system"}, {"content", task.prompt_system}},
        {{"role", "user"},
         {"content",
          {{{"type", "text"}, {"text", task.prompt_user}},
           {{"type", "image_url"},
            {"image_url",
             {{"url", "data:image/png;base64," + base64_encode(image_bytes)}}}}}}}}}};
  for (auto& [k, v] : ep.params.items()) body[k] = v;

  httplib::Headers headers;
  if (!ep.auth_env.empty()) {
    const char* token = std::getenv(ep.auth_env.c_str());
    if (!token || !*token) {
      out.error = "auth token environment variable " + ep.auth_env + " is empty";
      out.error_kind = "AuthError";
      return out;
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  double backoff = ep.backoff_initial_s;
  for (int attempt = 0; attempt <= ep.max_retries; ++attempt) {
    auto t0 = std::chrono::steady_clock::now();
    httplib::Client cli(ep.base_url);
    cli.set_connection_timeout(static_cast<time_t>(ep.timeout_s));
    cli.set_read_timeout(static_cast<time_t>(ep.timeout_s));
    auto res = cli.Post("/chat/completions", headers, body.dump(), "application/json");
    out.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                         .count();
    if (!res) {
      out.error = "transport failure: " + httplib::to_string(res.error());
      out.error_kind = res.error() == httplib::Error::ConnectionTimeout ||
                               res.error() == httplib::Error::Read
                           ? "Timeout"
                           : "TransportError";
    } else if (res->status == 401 || res->status == 403) {
      out.error = "authorization rejected (status " + std::to_string(res->status) + ")";
      out.error_kind = "AuthError";
      return out;  // retrying auth failures does not help
    } else if (res->status == 429 || res->status >= 500) {
      out.error = "endpoint status " + std::to_string(res->status);
      out.error_kind = "TransportError";
    } else if (res->status != 200) {
      out.error = "endpoint status " + std::to_string(res->status);
      out.error_kind = "TransportError";
      return out;
    } else {
      try {
        auto parsed = nlohmann::json::parse(res->body);
        out.text = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        out.error.reset();
        out.error_kind.clear();
        return out;
      } catch (const nlohmann::json::exception& e) {
        out.error = std::string("unparseable completion: ") + e.what();
        out.error_kind = "TransportError";
        return out;
      }
    }
    if (attempt < ep.max_retries) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= 2.0;
    }
  }
  return out;
}

ParsedAnswer parse_answer(const std::string& text, int n_expected) {
  (void)n_expected;  // diagnostics only; scoring works positionally against gold
  ParsedAnswer out;

  // drop code fences, keep their contents; drop prose lines without commas
  std::string kept;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::string trimmed = collapse_ws(line);
    if (trimmed.rfind("```", 0) == 0) {
      out.stripped_fences = true;
      continue;
    }
    if (trimmed.find(',') == std::string::npos) continue;
    if (!kept.empty()) kept += " ";
    kept += trimmed;
  }

  if (kept.empty()) return out;
  kept = lowercase(kept);

  std::vector<std::string> items;
  size_t pos = 0;
  while (pos <= kept.size()) {
    size_t comma = kept.find(',', pos);
    if (comma == std::string::npos) comma = kept.size();
    items.push_back(collapse_ws(kept.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  while (!items.empty() && items.back().empty()) items.pop_back();

  out.raw_items = static_cast<int>(items.size());
  for (const auto& item : items) {
    Glyph g;
    if (parse_glyph(item, g)) {
      out.tokens.push_back(glyph_text(g));
    } else {
      out.tokens.push_back(kInvalidToken);
      ++out.invalid_tokens;
    }
  }
  out.answered = out.invalid_tokens < out.raw_items;
  return out;
}

EvalRecord score(const ParsedAnswer& parsed, const std::vector<std::string>& gold) {
  if (gold.empty()) throw Error(ErrorKind::UsageError, "cannot score against empty gold");
  EvalRecord r;
  size_t n = gold.size();
  r.per_position.assign(n, 0);
  int correct = 0;
  for (size_t i = 0; i < n; ++i) {
    if (i < parsed.tokens.size() && parsed.tokens[i] == gold[i]) {
      r.per_position[i] = 1;
      ++correct;
    }
  }
  r.tok_acc = static_cast<double>(correct) / static_cast<double>(n);
  r.em = (correct == static_cast<int>(n) && parsed.tokens.size() == n) ? 1 : 0;
  r.answered = parsed.answered;
  size_t prefix = 0;
  while (prefix < n && r.per_position[prefix]) ++prefix;
  r.prefix_exact_len = static_cast<int>(prefix);
  return r;
}

std::string format_answer(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ", ";
    out += tokens[i];
  }
  return out;
}

std::string oracle_tracer(const TaskInstance& task) { return format_answer(task.gold); }

std::string noisy_tracer(const TaskInstance& task, double q_cross, double q_confound,
                         uint64_t seed) {
  Rng rng(mix_seed({seed, fnv1a64(task.task_id)}));
  std::vector<std::string> plan = task.gold;
  const int n = static_cast<int>(plan.size());

  for (int d : task.meta.crossing_tokens)
    if (d >= 0 && d < n && rng.uniform() < q_cross)
      std::reverse(plan.begin() + d, plan.end());

  if (q_confound > 0.0 && !task.meta.confound_encounters.empty()) {
    for (int i = 0; i < n; ++i) {
      int exposures = 0;
      for (int e : task.meta.confound_encounters)
        if (e < i) ++exposures;
      if (exposures == 0) continue;
      double keep = std::pow(1.0 - q_confound, exposures);
      if (rng.uniform() < 1.0 - keep) {
        Glyph gold_glyph;
        parse_glyph(task.gold[static_cast<size_t>(i)], gold_glyph);
        int gold_idx = glyph_index(gold_glyph);
        int pick = static_cast<int>(rng.uniform_int(0, kGlyphVocabulary - 2));
        if (pick >= gold_idx) ++pick;
        plan[static_cast<size_t>(i)] = glyph_text(glyph_from_index(pick));
      }
    }
  }
  return format_answer(plan);
}

AgentSpec agent_from_string(const std::string& text) {
  AgentSpec a;
  if (text == "oracle") {
    a.kind = AgentSpec::Kind::oracle;
  } else if (text == "noisy") {
    a.kind = AgentSpec::Kind::noisy;
  } else if (text == "endpoint") {
    a.kind = AgentSpec::Kind::endpoint;
  } else {
    throw Error(ErrorKind::UsageError, "unknown agent '" + text + "'");
  }
  return a;
}

void write_evals(const std::string& path, const std::vector<EvalRecord>& evals, bool append) {
  std::ofstream out(path, append ? std::ios::app | std::ios::binary : std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  for (const auto& e : evals) {
    std::string bits(e.per_position.size(), '0');
    for (size_t i = 0; i < e.per_position.size(); ++i)
      if (e.per_position[i]) bits[i] = '1';
    json row{{"task_id", e.task_id},     {"model", e.model},
             {"em", e.em},               {"tok_acc", e.tok_acc},
             {"per_position", bits},     {"answered", e.answered},
             {"latency_ms", e.latency_ms}, {"prefix_exact_len", e.prefix_exact_len}};
    out << row.dump() << "\n";
  }
}

std::vector<EvalRecord> read_evals(const std::string& path) {
  std::vector<EvalRecord> out;
  for (const auto& row : read_jsonl(path)) {
    try {
      EvalRecord e;
      e.task_id = row.at("task_id").get<std::string>();
      e.model = row.at("model").get<std::string>();
      e.em = row.at("em").get<int>();
      e.tok_acc = row.at("tok_acc").get<double>();
      std::string bits = row.at("per_position").get<std::string>();
      for (char c : bits) e.per_position.push_back(c == '1' ? 1 : 0);
      e.answered = row.at("answered").get<bool>();
      e.latency_ms = row.at("latency_ms").get<double>();
      e.prefix_exact_len = row.at("prefix_exact_len").get<int>();
      out.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw Error(ErrorKind::SchemaMismatch, path + ": " + ex.what());
    }
  }
  return out;
}

EvalSummary run_eval(const std::vector<TaskInstance>& tasks, const AgentSpec& agent,
                     const std::string& out_path, const std::string& model_label) {
  std::set<std::string> done;
  {
    std::ifstream probe(out_path);
    if (probe.good()) {
      probe.close();
      for (const auto& e : read_evals(out_path)) done.insert(e.task_id);
    }
  }

  std::vector<EvalRecord> fresh;
  for (const auto& task : tasks) {
    if (done.count(task.task_id)) continue;
    std::string text;
    double latency = 0.0;
    bool transport_failed = false;
    switch (agent.kind) {
      case AgentSpec::Kind::oracle:
        text = oracle_tracer(task);
        break;
      case AgentSpec::Kind::noisy:
        text = noisy_tracer(task, agent.q_cross, agent.q_confound, agent.seed);
        break;
      case AgentSpec::Kind::endpoint: {
        RawResponse resp = query(task, agent.endpoint);
        latency = resp.latency_ms;
        if (resp.error) {
          transport_failed = true;
        } else {
          text = resp.text;
        }
        break;
      }
    }
    ParsedAnswer parsed = transport_failed ? ParsedAnswer{} : parse_answer(text, task.n);
    EvalRecord rec = score(parsed, task.gold);
    rec.task_id = task.task_id;
    rec.model = model_label;
    rec.latency_ms = latency;
    fresh.push_back(std::move(rec));
  }
  write_evals(out_path, fresh, /*append=*/!done.empty());

  EvalSummary s;
  auto all = read_evals(out_path);
  for (const auto& e : all) {
    ++s.total;
    s.em += e.em;
    s.tok_acc += e.tok_acc;
    if (e.answered) ++s.answered;
  }
  if (s.total > 0) {
    s.em /= s.total;
    s.tok_acc /= s.total;
    s.answer_rate = static_cast<double>(s.answered) / s.total;
  }
  return s;
}

}  // namespace pathbench
