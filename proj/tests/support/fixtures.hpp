#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "refpred/dataset/store.hpp"
#include "refpred/mining/detections.hpp"

namespace refpred::testing {

// Seventeen-commit repository for the walker with k = 3. Files: src/p/A.java,
// src/p/B.java (with a nested class), test/p/ATest.java and src/p/C.java,
// renamed to src/p/D.java in commit 11. `commits[i]` is commit i + 1.
struct MinerFixture {
  std::filesystem::path repo;
  std::vector<std::string> commits;
  std::vector<mining::DetectionRecord> detections;
  std::string unknown_commit;  // detection commit absent from the history
};
MinerFixture build_miner_fixture(const std::filesystem::path& dir);

// Repository whose six Big classes carry one long method and receive Extract
// Method and Extract Class detections, while ten Small classes change
// without detections (negatives for k = 2). `snapshot` is a plain source
// tree with one Engineered class shaped like the Big ones plus small classes.
struct EndToEndFixture {
  std::filesystem::path repo;
  std::filesystem::path detections_file;
  std::filesystem::path snapshot;
  std::size_t positives_per_refactoring = 0;
};
EndToEndFixture build_end_to_end_fixture(const std::filesystem::path& dir);

std::string big_class_source(const std::string& name, int version);
std::string small_class_source(const std::string& name, int version);

// Two Gaussian blobs: class 0 around `offset`, class 1 around
// `offset + separation` in every coordinate, unit variance. Positives first.
dataset::TrainingTable two_blob_table(std::size_t per_class, std::size_t dims, double separation,
                                      std::uint64_t seed, double offset = 0.0);

// Class-level store rows with 46 features; positives shift the first ten
// source features upward. Timestamps grow with the row index.
std::vector<LabeledInstance> synthetic_class_instances(std::size_t positives, std::size_t negatives,
                                                       RefactoringType r, std::uint64_t seed);

}  // namespace refpred::testing
