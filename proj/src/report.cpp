#include "ribaucour/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

#include "ribaucour/version.hpp"

namespace ribaucour {

void ResidualStats::add(double residual, double u, double v) {
  ++samples;
  // NaN residuals must never look like a pass.
  if (std::isnan(residual)) residual = INFINITY;
  // ties resolve to the lexicographically smallest (u, v), matching merge()
  const bool tie_wins = residual == max_residual && (u < worst_u || (u == worst_u && v < worst_v));
  if (samples == 1 || residual > max_residual || tie_wins) {
    max_residual = residual;
    worst_u = u;
    worst_v = v;
  }
}

void ResidualStats::merge(const ResidualStats& other) {
  if (other.samples > 0 &&
      (samples == 0 || other.max_residual > max_residual ||
       (other.max_residual == max_residual &&
        (other.worst_u < worst_u || (other.worst_u == worst_u && other.worst_v < worst_v))))) {
    max_residual = other.max_residual;
    worst_u = other.worst_u;
    worst_v = other.worst_v;
  }
  samples += other.samples;
  excluded += other.excluded;
}

double ResidualStats::comparable_fraction() const {
  const std::size_t n = total();
  return n == 0 ? 0.0 : static_cast<double>(samples) / static_cast<double>(n);
}

IdentityResult make_result(std::string name, const ResidualStats& stats, double tolerance) {
  IdentityResult r;
  r.name = std::move(name);
  r.max_residual = stats.max_residual;
  r.tolerance = tolerance;
  r.samples = stats.samples;
  r.excluded = stats.excluded;
  r.pass = stats.samples > 0 && stats.max_residual <= tolerance &&
           stats.comparable_fraction() >= kMinComparableFraction;
  return r;
}

IdentityResult make_violation_check(std::string name, const ResidualStats& stats, double threshold) {
  IdentityResult r = make_result(std::move(name), stats, threshold);
  r.expect_violation = true;
  r.pass = stats.samples > 0 && stats.max_residual > threshold &&
           stats.comparable_fraction() >= kMinComparableFraction;
  return r;
}

const IdentityResult* VerificationReport::find(const std::string& name) const {
  for (const auto& r : identities)
    if (r.name == name) return &r;
  return nullptr;
}

bool VerificationReport::pass() const {
  return !identities.empty() &&
         std::all_of(identities.begin(), identities.end(), [](const auto& r) { return r.pass; });
}

nlohmann::json to_json(const VerificationReport& report, bool include_timestamp) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = kVersion;
  j["command"] = report.command;
  j["inputs"] = report.inputs;
  if (!report.notes.empty()) j["notes"] = report.notes;
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& r : report.identities) {
    nlohmann::json e;
    e["name"] = r.name;
    e["max_residual"] = std::isfinite(r.max_residual) ? nlohmann::json(r.max_residual)
                                                      : nlohmann::json("inf");
    e["tolerance"] = r.tolerance;
    e["samples"] = r.samples;
    e["excluded"] = r.excluded;
    if (r.expect_violation) e["expect_violation"] = true;
    e["pass"] = r.pass;
    ids.push_back(std::move(e));
  }
  j["identities"] = std::move(ids);
  j["pass"] = report.pass();
  if (include_timestamp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    j["timestamp"] = buf;
  }
  return j;
}

double mixed_relative(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace ribaucour
