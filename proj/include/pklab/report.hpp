#pragma once

// Suite configuration, check records, and report serialization.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pklab/types.hpp"

namespace pklab {

enum class Status { pass, fail, inconclusive };
// How a measured value is compared with its threshold.
enum class Relation { at_most, at_least };

struct CheckRecord {
  std::string name;
  std::string anchor;  // entry of the result index in the README, or "plumbing"
  Status status = Status::pass;
  double value = 0.0;
  double threshold = 0.0;
  Relation relation = Relation::at_most;
  bool override = false;  // threshold loosened from the config
  nlohmann::json witness;  // inputs reproducing the worst case, set on failure

  bool operator==(const CheckRecord&) const = default;
};

// Reported but not asserted.
struct Measurement {
  std::string name;
  double value = 0.0;
  std::string note;
  bool operator==(const Measurement&) const = default;
};

// Columns of plot data.
struct Profile {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  bool operator==(const Profile&) const = default;
};

struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = 7;
  std::optional<int> n;        // unset: the suite's default sweep
  std::optional<int> samples;  // unset: the suite's default count
  std::map<std::string, double> tolerances;
  int grid = 64;
  // Built-in model family for suites that accept one, with numeric parameters.
  std::string model;
  std::map<std::string, double> model_params;
  bool operator==(const SuiteConfig&) const = default;
};

struct SuiteReport {
  std::string suite;
  SuiteConfig config;
  std::vector<CheckRecord> checks;
  std::vector<Measurement> measurements;
  std::vector<Profile> profiles;
  bool operator==(const SuiteReport&) const = default;

  bool passed() const;
  int failures() const;
};

// Accumulates checks for one suite and applies tolerance overrides.
class Recorder {
 public:
  explicit Recorder(const SuiteConfig& config) : config_(config) {}

  CheckRecord& check(const std::string& name, const std::string& anchor, double value, Relation rel, double threshold,
                     nlohmann::json witness = {});
  // Equivalent to check(name, anchor, ok ? 0 : 1, at_most, 0).
  CheckRecord& require(const std::string& name, const std::string& anchor, bool ok, nlohmann::json witness = {});
  void measure(const std::string& name, double value, const std::string& note = {});
  void profile(Profile p);

  // Override keys the suite never consulted; reported as a config error.
  std::vector<std::string> unused_overrides() const;
  SuiteReport finish(const std::string& suite) &&;

 private:
  const SuiteConfig& config_;
  std::vector<CheckRecord> checks_;
  std::vector<Measurement> measurements_;
  std::vector<Profile> profiles_;
  std::set<std::string> consulted_;
};

nlohmann::json to_json(const SuiteReport& r);
SuiteReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SuiteConfig& c);
SuiteConfig config_from_json(const nlohmann::json& j);

// Canonical JSON text (two-space indent, trailing newline).
std::string emit_json(const SuiteReport& r);
// One row per check record, header first.
std::string emit_csv(const SuiteReport& r);
// Labeled columns of one profile.
std::string emit_profile_csv(const Profile& p);

// Flat key/value config with [suite], [tolerances] and [model] sections; '#' comments.
SuiteConfig parse_config(std::istream& in);

std::string to_string(Status s);

// Matrix as nested row-major lists; complex entries as [re, im].
nlohmann::json matrix_json(const Mat& m);
nlohmann::json matrix_json(const CMat& m);

}  // namespace pklab
