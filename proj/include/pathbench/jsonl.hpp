#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathbench/common.hpp"

namespace pathbench {

using json = nlohmann::json;

// Parses one JSON object per line; throws MalformedLine with a 1-based line
// number on bad input. Blank lines are skipped.
std::vector<json> read_jsonl(const std::string& path);

void write_jsonl(const std::string& path, const std::vector<json>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace pathbench
