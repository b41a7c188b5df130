#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <map>

#include "refpred/domain.hpp"
#include "refpred/error.hpp"
#include "refpred/mining/repository.hpp"

namespace refpred::mining {

ProcessResult run_process(const std::vector<std::string>& argv) {
  if (argv.empty()) throw Error("run_process: empty command");
  int fds[2];
  if (::pipe(fds) != 0) throw IOFailure("pipe failed");

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw IOFailure("fork failed");
  }
  if (pid == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    const int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }

  ::close(fds[1]);
  ProcessResult result;
  char buf[1 << 16];
  for (;;) {
    const ssize_t n = ::read(fds[0], buf, sizeof buf);
    if (n > 0) {
      result.out.append(buf, static_cast<std::size_t>(n));
    } else if (n == 0 || errno != EINTR) {
      break;
    }
  }
  ::close(fds[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view strip_newlines(std::string_view s) {
  while (!s.empty() && (s.front() == '\n' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::int64_t to_int(std::string_view s) {
  std::int64_t v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

std::vector<CommitInfo> parse_git_log(std::string_view raw) {
  std::vector<CommitInfo> out;
  for (auto chunk : split(raw, '\x1e')) {
    if (strip_newlines(chunk).empty()) continue;
    // hash, parents, time, author name, author email, message, numstat
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (int i = 0; i < 6; ++i) {
      const auto pos = chunk.find('\x1f', start);
      if (pos == std::string_view::npos) throw RepoUnreadable("unexpected git log output");
      fields.push_back(chunk.substr(start, pos - start));
      start = pos + 1;
    }
    CommitInfo c;
    c.hash = std::string(fields[0]);
    if (!fields[1].empty()) c.parent = std::string(split(fields[1], ' ').front());
    c.timestamp = to_int(fields[2]);
    c.author_name = std::string(fields[3]);
    c.author_email = std::string(fields[4]);
    c.message = std::string(strip_newlines(fields[5]));

    auto tokens = split(chunk.substr(start), '\0');
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      auto t = strip_newlines(tokens[i]);
      if (t.empty()) continue;
      const auto parts = split(t, '\t');
      if (parts.size() < 3) continue;
      FileChange f;
      f.binary = parts[0] == "-";
      f.lines_added = f.binary ? 0 : to_int(parts[0]);
      f.lines_removed = f.binary ? 0 : to_int(parts[1]);
      if (parts[2].empty()) {
        // rename: the two paths follow as separate tokens
        if (i + 2 >= tokens.size()) break;
        f.old_path = std::string(tokens[i + 1]);
        f.path = std::string(tokens[i + 2]);
        i += 2;
      } else {
        f.path = std::string(parts[2]);
      }
      c.changes.push_back(std::move(f));
    }
    out.push_back(std::move(c));
  }
  return out;
}

GitRepository::GitRepository(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) throw RepoUnreadable(dir_.string() + " is not a directory");
  const auto r = run_process({"git", "-C", dir_.string(), "rev-parse", "--is-inside-work-tree"});
  if (r.status != 0) throw RepoUnreadable(dir_.string() + " is not a git work tree");
}

std::string GitRepository::name() const {
  auto abs = std::filesystem::absolute(dir_).lexically_normal();
  auto n = abs.filename().string();
  if (n.empty()) n = abs.parent_path().filename().string();
  return n;
}

const std::vector<CommitInfo>& GitRepository::history() {
  if (!history_) {
    const auto r = run_process({"git", "-C", dir_.string(), "-c", "core.quotepath=off", "log", "--first-parent",
                                "--reverse", "--diff-merges=first-parent", "-M50%", "--numstat", "-z",
                                std::string("--format=") + kLogFormat});
    if (r.status != 0) throw RepoUnreadable("git log failed in " + dir_.string());
    history_ = parse_git_log(r.out);
  }
  return *history_;
}

std::optional<std::string> GitRepository::file_at(const std::string& commit, const std::string& path) {
  const auto r = run_process({"git", "-C", dir_.string(), "cat-file", "blob", commit + ":" + path});
  if (r.status != 0) return std::nullopt;
  return r.out;
}

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  if (text.empty()) return out;
  out = split(text, '\n');
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::pair<std::int64_t, std::int64_t> line_delta(std::string_view before, std::string_view after) {
  std::map<std::string_view, std::int64_t> counts;
  for (auto l : lines_of(before)) ++counts[l];
  std::int64_t added = 0;
  for (auto l : lines_of(after)) {
    auto it = counts.find(l);
    if (it != counts.end() && it->second > 0) {
      --it->second;
    } else {
      ++added;
    }
  }
  std::int64_t removed = 0;
  for (const auto& [l, n] : counts) removed += n;
  return {added, removed};
}

}  // namespace

std::string MemoryRepository::commit(const std::string& author, std::int64_t timestamp, const std::string& message,
                                     const std::map<std::string, std::optional<std::string>>& writes,
                                     const std::map<std::string, std::string>& renames) {
  std::map<std::string, std::string> tree = trees_.empty() ? std::map<std::string, std::string>{} : trees_.back();
  const auto before = tree;

  CommitInfo c;
  c.hash = fnv1a_hex(name_ + "/" + std::to_string(commits_.size()) + "/" + message);
  c.hash += c.hash.substr(0, 8);  // 24 hex digits
  if (!commits_.empty()) c.parent = commits_.back().hash;
  c.timestamp = timestamp;
  c.author_name = author;
  c.author_email = author + "@example.org";
  c.message = message;

  std::map<std::string, std::string> renamed_from;
  for (const auto& [from, to] : renames) {
    auto it = tree.find(from);
    if (it == tree.end()) throw Error("rename of missing path " + from);
    tree[to] = it->second;
    tree.erase(it);
    renamed_from[to] = from;
  }
  for (const auto& [path, content] : writes) {
    if (content) {
      tree[path] = *content;
    } else {
      tree.erase(path);
    }
  }

  std::map<std::string, FileChange> changes;
  for (const auto& [to, from] : renamed_from) {
    const auto& after = tree.count(to) ? tree.at(to) : std::string{};
    auto [a, r] = line_delta(before.at(from), after);
    changes[to] = FileChange{to, from, a, r, false};
  }
  for (const auto& [path, content] : writes) {
    if (changes.count(path)) continue;
    const auto old = before.find(path);
    const std::string_view prev = old == before.end() ? std::string_view{} : std::string_view(old->second);
    const std::string_view next = content ? std::string_view(*content) : std::string_view{};
    auto [a, r] = line_delta(prev, next);
    changes[path] = FileChange{path, std::nullopt, a, r, false};
  }
  for (auto& [p, f] : changes) c.changes.push_back(std::move(f));

  commits_.push_back(std::move(c));
  trees_.push_back(std::move(tree));
  return commits_.back().hash;
}

std::optional<std::string> MemoryRepository::file_at(const std::string& commit, const std::string& path) {
  for (std::size_t i = 0; i < commits_.size(); ++i) {
    if (commits_[i].hash != commit) continue;
    const auto it = trees_[i].find(path);
    if (it == trees_[i].end()) return std::nullopt;
    return it->second;
  }
  return std::nullopt;
}

}  // namespace refpred::mining
