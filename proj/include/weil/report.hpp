#pragma once

#include <optional>
#include <string>
#include <vector>

namespace weil {

enum class CheckStatus { Pass, Fail, Skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  // Largest numeric residual seen; absent for exact (symbolic) verdicts.
  std::optional<double> max_residual;
  bool exact = false;
  int samples_used = 0;
  std::string note;
};

// Ordered list of named axiom checks. Overall status is the conjunction.
struct VerificationReport {
  std::vector<Check> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::Fail) return false;
    return !checks.empty();
  }

  Check& add(const std::string& name, CheckStatus status) {
    checks.push_back(Check{name, status});
    return checks.back();
  }

  Check& add_exact(const std::string& name, bool ok) {
    Check& c = add(name, ok ? CheckStatus::Pass : CheckStatus::Fail);
    c.exact = true;
    return c;
  }

  Check& add_sampled(const std::string& name, bool ok, double residual,
                     int samples) {
    Check& c = add(name, ok ? CheckStatus::Pass : CheckStatus::Fail);
    c.max_residual = residual;
    c.samples_used = samples;
    return c;
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  int failures() const {
    int n = 0;
    for (const auto& c : checks)
      if (c.status == CheckStatus::Fail) ++n;
    return n;
  }
};

}  // namespace weil
