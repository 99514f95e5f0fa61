#pragma once

// Residual bookkeeping shared by every verification pass.

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ribaucour {

// Running maximum of a residual over samples, with exclusion counting.
// merge() is associative and commutative, so per-thread partials can be
// combined in any order.
struct ResidualStats {
  double max_residual = 0.0;
  std::size_t samples = 0;   // samples that contributed a residual
  std::size_t excluded = 0;  // samples skipped because of flags
  double worst_u = 0.0, worst_v = 0.0;

  void add(double residual, double u = 0.0, double v = 0.0);
  void exclude(std::size_t n = 1) { excluded += n; }
  void merge(const ResidualStats& other);

  std::size_t total() const { return samples + excluded; }
  double comparable_fraction() const;
};

inline constexpr double kMinComparableFraction = 0.5;

struct IdentityResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::size_t excluded = 0;
  bool pass = false;
  // Negative controls pass when the residual exceeds the tolerance.
  bool expect_violation = false;
};

// pass = (residual within tolerance) and (comparable fraction >= 0.5).
IdentityResult make_result(std::string name, const ResidualStats& stats, double tolerance);
IdentityResult make_violation_check(std::string name, const ResidualStats& stats, double threshold);

struct VerificationReport {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json notes = nlohmann::json::object();
  std::vector<IdentityResult> identities;

  void add(IdentityResult r) { identities.push_back(std::move(r)); }
  const IdentityResult* find(const std::string& name) const;
  bool pass() const;
};

inline constexpr int kReportSchemaVersion = 1;

// Serialized report.  The timestamp field is the only non-deterministic
// member, and is omitted entirely when include_timestamp is false.
nlohmann::json to_json(const VerificationReport& report, bool include_timestamp = true);

// |a - b| / max(1, |a|, |b|): relative for large values, absolute near zero.
double mixed_relative(double a, double b);

}  // namespace ribaucour
