#pragma once

// In-process acceptance suite. Criteria 1-10 check the numerical claims end to
// end; entry 0 bundles the discrete calculus identities (divergence theorem,
// self-adjointness, integration by parts, first variation of the energy).

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chernflow {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

enum class VerifyLevel { Quick, Full };
std::optional<VerifyLevel> parse_verify_level(std::string_view name);

// quick: 0, 1, 2; full: 0-10.
std::vector<int> criteria_for(VerifyLevel level);

// Runs the selected criteria in increasing order; later criteria reuse runs of
// earlier ones where they compare against them (9 uses 3 and 7, 10 reruns 7)
// and compute them on demand otherwise.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// "criterion <id> PASS|FAIL <title>: <detail> [<seconds> s / <budget> s]"
void print_result_line(std::ostream& os, const CriterionResult& r);

}  // namespace chernflow
