#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "refpred/domain.hpp"

namespace refpred::mining {

// One refactoring reported by the external detector for one file.
struct DetectionRecord {
  std::string commit;
  std::string path;
  ElementLevel level = ElementLevel::Class;
  RefactoringType refactoring = RefactoringType::ExtractClass;
  std::string class_name;
  std::optional<std::string> method;    // signature, e.g. "run(int,String)"
  std::optional<std::string> variable;  // name, optionally "name#ordinal"

  bool operator==(const DetectionRecord&) const = default;
};

// Reads line-delimited JSON objects with the fields
//   {commit, path, level, refactoring, class, method?, variable?}
// Blank lines are skipped. Throws MalformedRecord with the 1-based line
// number, or UnknownRefactoringName when the name is unknown or belongs to
// another level. Records keep file order.
std::vector<DetectionRecord> parse_detections(std::istream& in);
std::vector<DetectionRecord> ingest_detections(const std::filesystem::path& file);

// Stable sort by position of the commit in `history_order` (oldest first),
// then by path. Commits absent from the history sort last.
void order_detections(std::vector<DetectionRecord>& records, std::span<const std::string> history_order);

std::string to_json_line(const DetectionRecord& record);

}  // namespace refpred::mining
