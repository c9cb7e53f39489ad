#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bblab/bigint.hpp"
#include "bblab/machine.hpp"

namespace bblab {

struct Score {
  bool exact = true;  // false → lower bound
  Int value = 0;
};

enum class Route { Direct, Accelerated, RuleChain, Unverifiable };

struct RecordEntry {
  std::string id;
  ClassId cls;
  std::string machine;  // empty for entries whose table the source omits
  std::string discoverer;
  std::string date;
  std::optional<Score> s;
  std::optional<Score> sigma;
  Route route = Route::Unverifiable;
  std::string rule_file;  // for RuleChain, relative to the data dir
  std::string reason;     // for Unverifiable
  bool variant = false;   // exempt from Rado-strict validation
  bool slow = false;      // skipped by default in bulk verification
  std::string notes;
};

struct RecordsDb {
  std::vector<RecordEntry> entries;
  std::string data_dir;  // directory the dataset was loaded from
};

RecordsDb load_records(const std::string& data_dir);

// Default records location: $BB_LAB_DATA, else the compiled-in source path.
std::string default_data_dir();

struct VerifyResult {
  std::string id;
  bool skipped = false;
  bool passed = false;
  std::string detail;
};

VerifyResult verify_entry(const RecordsDb& db, const RecordEntry& e);

struct VerifySummary {
  long passed = 0;
  long failed = 0;
  long skipped = 0;
  std::vector<VerifyResult> results;
};

VerifySummary verify_all(const RecordsDb& db,
                         std::optional<ClassId> cls = std::nullopt,
                         bool include_slow = false, int workers = 1);

}  // namespace bblab
