#include "fixtures.hpp"

#include <fstream>
#include <map>
#include <optional>

#include "git_fixture.hpp"
#include "refpred/rng.hpp"

namespace refpred::testing {

namespace fs = std::filesystem;

namespace {

std::string a_source(int v) {
  return "package p;\n\npublic class A {\n    int foo() {\n        return " + std::to_string(v) + ";\n    }\n}\n";
}

std::string b_source(int v) {
  return "package p;\n\npublic class B {\n    static class Inner {\n        int v = " + std::to_string(v) +
         ";\n    }\n}\n";
}

std::string test_source(int v) {
  return "package p;\n\npublic class ATest {\n    int t = " + std::to_string(v) + ";\n}\n";
}

std::string mover_source(int v) {
  return "package p;\n\npublic class Mover {\n    int a = 1;\n    int b = 2;\n    int c = 3;\n    int d = 4;\n"
         "    int e = 5;\n    int f = 6;\n    int g = 7;\n    int version = " +
         std::to_string(v) + ";\n}\n";
}

mining::DetectionRecord detection(const std::string& commit, const std::string& path, ElementLevel level,
                                  RefactoringType r, const std::string& cls,
                                  std::optional<std::string> method = std::nullopt) {
  mining::DetectionRecord d;
  d.commit = commit;
  d.path = path;
  d.level = level;
  d.refactoring = r;
  d.class_name = cls;
  d.method = std::move(method);
  return d;
}

}  // namespace

MinerFixture build_miner_fixture(const fs::path& dir) {
  GitFixture g(dir);
  MinerFixture f;
  f.repo = dir;
  const std::string A = "src/p/A.java", B = "src/p/B.java", T = "test/p/ATest.java", C = "src/p/C.java",
                    D = "src/p/D.java";
  auto& c = f.commits;
  std::int64_t t = 1'600'000'000;
  const auto at = [&](int i) { return t + 1000 * i; };
  c.push_back(g.commit("add A, B and the test", at(1), {{A, a_source(1)}, {B, b_source(1)}, {T, test_source(1)}}));
  c.push_back(g.commit("tune A", at(2), {{A, a_source(2)}}));
  c.push_back(g.commit("tune A and B", at(3), {{A, a_source(3)}, {B, b_source(3)}}, {}, "bob"));
  c.push_back(g.commit("extract from A", at(4), {{A, a_source(4)}}));
  c.push_back(g.commit("fix bug in B", at(5), {{B, b_source(5)}}));
  c.push_back(g.commit("tune A", at(6), {{A, a_source(6)}}));
  c.push_back(g.commit("rename the test", at(7), {{T, test_source(7)}}));
  c.push_back(g.commit("tune A", at(8), {{A, a_source(8)}}, {}, "bob"));
  c.push_back(g.commit("rename in A", at(9), {{A, a_source(9)}}));
  c.push_back(g.commit("add C", at(10), {{C, mover_source(10)}}));
  c.push_back(g.commit("move C to D", at(11), {{D, mover_source(11)}}, {{C, D}}));
  c.push_back(g.commit("tune D", at(12), {{D, mover_source(12)}}));
  c.push_back(g.commit("tune A", at(13), {{A, a_source(13)}}));
  c.push_back(g.commit("tune D", at(14), {{D, mover_source(14)}}));
  c.push_back(g.commit("tune D", at(15), {{D, mover_source(15)}}));
  c.push_back(g.commit("tune A", at(16), {{A, a_source(16)}}));
  c.push_back(g.commit("tune A", at(17), {{A, a_source(17)}}));

  f.unknown_commit = "0123456789abcdef0123456789abcdef01234567";
  f.detections = {
      detection(c[3], A, ElementLevel::Method, RefactoringType::ExtractMethod, "p.A", "foo()"),
      detection(c[6], T, ElementLevel::Class, RefactoringType::RenameClass, "p.ATest"),
      detection(c[8], A, ElementLevel::Method, RefactoringType::RenameMethod, "p.A", "foo()"),
      detection(c[10], D, ElementLevel::Class, RefactoringType::MoveClass, "p.Mover"),
      detection(f.unknown_commit, A, ElementLevel::Class, RefactoringType::ExtractClass, "p.A"),
  };
  return f;
}

std::string big_class_source(const std::string& name, int version) {
  std::string s = "package p;\n\npublic class " + name + " {\n    public int process(int[] data) {\n";
  s += "        int total = 0;\n        int count = 0;\n        String label = \"start\";\n";
  for (int i = 0; i < 6 + version; ++i) {
    const auto n = std::to_string(i);
    s += "        for (int i" + n + " = 0; i" + n + " < data.length; i" + n + "++) {\n";
    s += "            if (data[i" + n + "] > " + n + " && total < 1000) {\n";
    s += "                total += data[i" + n + "] * " + std::to_string(i + 2) + ";\n";
    s += "                count = count + 1;\n";
    s += "            } else if (data[i" + n + "] == -" + n + ") {\n";
    s += "                label = label + \"x" + n + "\";\n";
    s += "            }\n        }\n";
  }
  s += "        while (total > 100) {\n            total = total / 2;\n        }\n";
  s += "        return total + count + label.length();\n    }\n}\n";
  return s;
}

std::string small_class_source(const std::string& name, int version) {
  return "package p;\n\npublic class " + name + " {\n    private int value = " + std::to_string(version) +
         ";\n\n    public int get() {\n        return value;\n    }\n\n    public void set(int x) {\n"
         "        value = x;\n    }\n}\n";
}

EndToEndFixture build_end_to_end_fixture(const fs::path& dir) {
  EndToEndFixture f;
  f.repo = dir / "repo";
  f.snapshot = dir / "snapshot";
  f.detections_file = dir / "detections.jsonl";
  GitFixture g(f.repo);

  constexpr int kBig = 6, kSmall = 10;
  const auto big_path = [](int i) { return "src/p/Big" + std::to_string(i) + ".java"; };
  const auto small_path = [](int j) { return "src/p/Small" + std::to_string(j) + ".java"; };
  std::int64_t t = 1'650'000'000;
  int tick = 0;
  std::vector<mining::DetectionRecord> detections;

  std::map<std::string, std::optional<std::string>> all;
  for (int i = 0; i < kBig; ++i) all[big_path(i)] = big_class_source("Big" + std::to_string(i), i % 3);
  for (int j = 0; j < kSmall; ++j) all[small_path(j)] = small_class_source("Small" + std::to_string(j), 0);
  g.commit("initial import", t + 3600 * ++tick, all);

  const auto small_round = [&](int v) {
    std::map<std::string, std::optional<std::string>> w;
    for (int j = 0; j < kSmall; ++j) w[small_path(j)] = small_class_source("Small" + std::to_string(j), v);
    g.commit("update small classes", t + 3600 * ++tick, w, {}, v % 2 ? "carol" : "dave");
  };
  const auto big_round = [&](int v) {
    std::map<std::string, std::optional<std::string>> w;
    for (int i = 0; i < kBig; ++i) w[big_path(i)] = big_class_source("Big" + std::to_string(i), (i + v) % 3);
    const auto hash = g.commit("split big methods", t + 3600 * ++tick, w);
    for (int i = 0; i < kBig; ++i) {
      const auto cls = "p.Big" + std::to_string(i);
      detections.push_back(
          detection(hash, big_path(i), ElementLevel::Method, RefactoringType::ExtractMethod, cls, "process(int[])"));
      detections.push_back(detection(hash, big_path(i), ElementLevel::Class, RefactoringType::ExtractClass, cls));
    }
  };
  small_round(1);
  big_round(1);
  small_round(2);
  big_round(2);
  small_round(3);
  small_round(4);
  f.positives_per_refactoring = 2 * kBig;

  std::ofstream out(f.detections_file);
  for (const auto& d : detections) out << mining::to_json_line(d) << '\n';

  fs::remove_all(f.snapshot);
  fs::create_directories(f.snapshot / "src/p");
  std::ofstream(f.snapshot / "src/p/Engineered.java") << big_class_source("Engineered", 2);
  for (int j = 0; j < 5; ++j) {
    const auto name = "Other" + std::to_string(j);
    std::ofstream(f.snapshot / ("src/p/" + name + ".java")) << small_class_source(name, 7 + j);
  }
  return f;
}

dataset::TrainingTable two_blob_table(std::size_t per_class, std::size_t dims, double separation, std::uint64_t seed,
                                      double offset) {
  dataset::TrainingTable t;
  t.refactoring = RefactoringType::ExtractClass;
  t.level = ElementLevel::Class;
  t.catalog_hash = "two-blob-" + std::to_string(dims);
  for (std::size_t j = 0; j < dims; ++j) t.feature_names.push_back("x" + std::to_string(j));
  Rng rng(seed);
  for (int label : {1, 0}) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> row(dims);
      for (auto& v : row) v = offset + (label ? separation : 0.0) + rng.normal();
      t.features.push_back(std::move(row));
      t.labels.push_back(label);
      t.timestamps.push_back(static_cast<std::int64_t>(t.labels.size()));
      t.keys.push_back({"blob", "c", "f", "C" + std::to_string(t.labels.size()), std::nullopt, std::nullopt});
    }
  }
  return t;
}

std::vector<LabeledInstance> synthetic_class_instances(std::size_t positives, std::size_t negatives,
                                                       RefactoringType r, std::uint64_t seed) {
  const auto& catalog = catalog_for(ElementLevel::Class);
  Rng rng(seed);
  std::vector<LabeledInstance> out;
  for (std::size_t i = 0; i < positives + negatives; ++i) {
    const bool pos = i < positives;
    LabeledInstance li;
    li.level = ElementLevel::Class;
    if (pos) li.refactoring = r;
    li.key = {"synthetic", "c" + std::to_string(i), "src/F" + std::to_string(i) + ".java",
              "p.F" + std::to_string(i), std::nullopt, std::nullopt};
    li.commit_timestamp = 1'000'000 + static_cast<std::int64_t>(i);
    li.features.resize(catalog.size());
    for (std::size_t j = 0; j < catalog.size(); ++j) {
      const double base = static_cast<double>(rng.integer(0, 20));
      li.features[j] = base + (pos && j < 10 ? static_cast<double>(rng.integer(5, 15)) : 0.0);
    }
    out.push_back(std::move(li));
  }
  return out;
}

}  // namespace refpred::testing
