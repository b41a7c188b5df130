#include "metric_oracle.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "refpred/domain.hpp"
#include "refpred/metrics/code_metrics.hpp"
#include "refpred/mining/feature_assembly.hpp"

namespace refpred::testing {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

using Section = std::map<std::string, double>;

std::map<std::string, Section> read_oracle(const fs::path& file, std::vector<std::string>& problems) {
  std::map<std::string, Section> out;
  std::ifstream in(file);
  if (!in) {
    problems.push_back("cannot read " + file.string());
    return out;
  }
  std::string line;
  Section* current = nullptr;
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#') == 0 ? 0 : line.size()));
    if (line.empty()) continue;
    if (line.front() == '[') {
      const auto name = line.substr(1, line.size() - 2);
      if (out.count(name)) problems.push_back("duplicate section " + name);
      current = &out[name];
      continue;
    }
    const auto eq = line.find('=');
    if (!current || eq == std::string::npos) {
      problems.push_back("bad oracle line: " + line);
      continue;
    }
    (*current)[trim(line.substr(0, eq))] = std::stod(trim(line.substr(eq + 1)));
  }
  return out;
}

void compare(const std::string& section, const std::vector<std::string_view>& names, const std::vector<double>& got,
             const Section& want, std::vector<std::string>& problems) {
  for (const auto& [k, _] : want) {
    if (std::find(names.begin(), names.end(), k) == names.end()) {
      problems.push_back(section + ": unknown feature " + k);
    }
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = want.find(std::string(names[i]));
    const double expected = it == want.end() ? 0.0 : it->second;
    if (got[i] != expected) {
      std::ostringstream msg;
      msg << section << ": " << names[i] << " expected " << expected << " got " << got[i];
      problems.push_back(msg.str());
    }
  }
}

}  // namespace

std::vector<std::string> check_metric_oracle(const fs::path& java, const fs::path& oracle) {
  std::vector<std::string> problems;
  auto sections = read_oracle(oracle, problems);
  std::ifstream in(java, std::ios::binary);
  std::ostringstream src;
  src << in.rdbuf();

  std::vector<metrics::ClassAnalysis> classes;
  try {
    classes = metrics::analyze_source(src.str());
  } catch (const std::exception& e) {
    problems.push_back(java.filename().string() + ": " + e.what());
    return problems;
  }

  const auto class_names = class_source_feature_names();
  const auto method_names = method_source_feature_names();
  const std::vector<std::string_view> cn(class_names.begin(), class_names.end());
  const std::vector<std::string_view> mn(method_names.begin(), method_names.end());
  const std::vector<std::string_view> vn{kVariableUsageFeature};

  const auto take = [&](const std::string& name) -> std::optional<Section> {
    const auto it = sections.find(name);
    if (it == sections.end()) {
      problems.push_back("extractor reports " + name + " but the oracle has no section");
      return std::nullopt;
    }
    auto s = it->second;
    sections.erase(it);
    return s;
  };

  for (const auto& c : classes) {
    const auto cs = "class " + c.qualified_name;
    if (auto want = take(cs)) compare(cs, cn, c.metrics.values(), *want, problems);
    for (const auto& m : c.methods) {
      const auto ms = "method " + c.qualified_name + " " + m.signature;
      if (auto want = take(ms)) compare(ms, mn, m.metrics.values(), *want, problems);
      for (const auto& v : m.variables) {
        const auto vs = "variable " + c.qualified_name + " " + m.signature + " " + mining::variable_label(v);
        if (auto want = take(vs)) {
          compare(vs, vn, {static_cast<double>(v.metrics.usage_count)}, *want, problems);
        }
      }
    }
  }
  for (const auto& [name, _] : sections) problems.push_back("oracle section " + name + " not produced");
  return problems;
}

std::vector<fs::path> oracle_fixtures(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".java" && fs::exists(fs::path(e.path()).replace_extension(".oracle"))) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace refpred::testing
