#include "refpred/mining/detections.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <unordered_map>

#include <json.hpp>

#include "refpred/error.hpp"

namespace refpred::mining {

namespace {

using nlohmann::json;

std::string required_string(const json& j, const char* field, std::size_t line_no) {
  const auto it = j.find(field);
  if (it == j.end()) throw MalformedRecord(line_no, std::string("missing field '") + field + "'");
  if (!it->is_string()) throw MalformedRecord(line_no, std::string("field '") + field + "' is not a string");
  auto value = it->get<std::string>();
  if (value.empty()) throw MalformedRecord(line_no, std::string("field '") + field + "' is empty");
  return value;
}

std::optional<std::string> optional_string(const json& j, const char* field, std::size_t line_no) {
  const auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw MalformedRecord(line_no, std::string("field '") + field + "' is not a string");
  return it->get<std::string>();
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::vector<DetectionRecord> parse_detections(std::istream& in) {
  static const char* const kKnown[] = {"commit", "path", "level", "refactoring", "class", "method", "variable"};
  std::vector<DetectionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw MalformedRecord(line_no, e.what());
    }
    if (!j.is_object()) throw MalformedRecord(line_no, "not a JSON object");
    for (const auto& [k, v] : j.items()) {
      if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* f) { return k == f; }) ==
          std::end(kKnown)) {
        throw MalformedRecord(line_no, "unexpected field '" + k + "'");
      }
    }

    DetectionRecord r;
    r.commit = required_string(j, "commit", line_no);
    r.path = required_string(j, "path", line_no);
    const auto level_text = required_string(j, "level", line_no);
    try {
      r.level = level_from_string(level_text);
    } catch (const Error&) {
      throw MalformedRecord(line_no, "unknown level '" + level_text + "'");
    }
    r.refactoring = refactoring_from_string(required_string(j, "refactoring", line_no));
    if (level_of(r.refactoring) != r.level) {
      throw UnknownRefactoringName("line " + std::to_string(line_no) + ": '" +
                                   std::string(to_string(r.refactoring)) + "' is not a " +
                                   std::string(to_string(r.level)) + "-level refactoring");
    }
    r.class_name = required_string(j, "class", line_no);
    r.method = optional_string(j, "method", line_no);
    r.variable = optional_string(j, "variable", line_no);
    if (r.level != ElementLevel::Class && !r.method) {
      throw MalformedRecord(line_no, "missing field 'method'");
    }
    if (r.level == ElementLevel::Variable && !r.variable) {
      throw MalformedRecord(line_no, "missing field 'variable'");
    }
    // extra detail below the record's level is ignored
    if (r.level == ElementLevel::Class) r.method.reset();
    if (r.level != ElementLevel::Variable) r.variable.reset();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DetectionRecord> ingest_detections(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IOFailure("cannot open detection file " + file.string());
  return parse_detections(in);
}

void order_detections(std::vector<DetectionRecord>& records, std::span<const std::string> history_order) {
  std::unordered_map<std::string_view, std::size_t> position;
  for (std::size_t i = 0; i < history_order.size(); ++i) position.emplace(history_order[i], i);
  auto pos = [&](const DetectionRecord& r) {
    const auto it = position.find(r.commit);
    return it == position.end() ? std::numeric_limits<std::size_t>::max() : it->second;
  };
  std::stable_sort(records.begin(), records.end(), [&](const DetectionRecord& a, const DetectionRecord& b) {
    const auto pa = pos(a), pb = pos(b);
    if (pa != pb) return pa < pb;
    return a.path < b.path;
  });
}

std::string to_json_line(const DetectionRecord& r) {
  nlohmann::ordered_json j;
  j["commit"] = r.commit;
  j["path"] = r.path;
  j["level"] = to_string(r.level);
  j["refactoring"] = to_string(r.refactoring);
  j["class"] = r.class_name;
  if (r.method) j["method"] = *r.method;
  if (r.variable) j["variable"] = *r.variable;
  return j.dump();
}

}  // namespace refpred::mining
