#include "refpred/history/process_metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_set>

#include "refpred/error.hpp"

namespace refpred::history {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string normalize_author(std::string_view name, std::string_view email) {
  const auto e = trim(email);
  if (!e.empty()) return lower(e);
  return std::string(trim(name));
}

bool is_bug_fix_message(std::string_view message) {
  const std::string text = lower(message);
  return std::any_of(std::begin(kBugFixKeywords), std::end(kBugFixKeywords),
                     [&](std::string_view k) { return text.find(k) != std::string::npos; });
}

std::vector<double> ProcessStats::values() const {
  return {static_cast<double>(commit_count), static_cast<double>(lines_added), static_cast<double>(lines_removed),
          static_cast<double>(bug_fix_count), static_cast<double>(previous_refactoring_count)};
}

std::vector<double> OwnershipStats::values() const {
  return {static_cast<double>(author_count), static_cast<double>(minor_author_count),
          static_cast<double>(major_author_count), author_ownership};
}

ProcessStats compute_process_stats(std::span<const CommitRecord> history,
                                   std::span<const std::string> detection_commits) {
  ProcessStats stats;
  std::unordered_set<std::string_view> hashes;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& c = history[i];
    if (i > 0 && c.timestamp < history[i - 1].timestamp) {
      throw UnorderedHistory("commit " + c.hash + " is older than its predecessor " + history[i - 1].hash);
    }
    ++stats.commit_count;
    for (const auto& d : c.deltas) {
      stats.lines_added += d.lines_added;
      stats.lines_removed += d.lines_removed;
    }
    if (is_bug_fix_message(c.message)) ++stats.bug_fix_count;
    hashes.insert(c.hash);
  }
  for (const auto& h : detection_commits) {
    if (hashes.count(h)) ++stats.previous_refactoring_count;
  }
  return stats;
}

OwnershipStats compute_ownership(std::span<const CommitRecord> history) {
  if (history.empty()) throw EmptyHistory("ownership needs at least one commit");
  std::map<std::string, std::int64_t> commits_by_author;
  for (const auto& c : history) ++commits_by_author[c.author_id];

  const auto total = static_cast<std::int64_t>(history.size());
  OwnershipStats stats;
  stats.author_count = static_cast<std::int64_t>(commits_by_author.size());
  std::int64_t top = 0;
  for (const auto& [author, n] : commits_by_author) {
    // share < 1/20 without floating point: n * 20 < total
    if (n * kMinorShareDenominator < total) {
      ++stats.minor_author_count;
    } else {
      ++stats.major_author_count;
    }
    top = std::max(top, n);
  }
  stats.author_ownership = static_cast<double>(top) / static_cast<double>(total);
  return stats;
}

}  // namespace refpred::history
