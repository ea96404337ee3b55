#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace geoflow::app {

struct Check {
    std::string name;
    double value = 0.0;
    std::string relation;  ///< "<=", "<" or ">="
    double bound = 0.0;
    bool passed = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    /// Reported quantities that carry no pass/fail bound.
    std::vector<std::pair<std::string, double>> report;

    bool passed() const;
    void expect(std::string name, double value, std::string relation, double bound);
};

constexpr int kCriterionCount = 9;

/// Runs one numerical criterion (1..9) with pinned sizes and tolerances.
/// Results are pure functions of (id, seed).
CriterionResult verify_criterion(int id, std::uint64_t seed);

std::vector<CriterionResult> run_verify_suite(std::uint64_t seed);

}  // namespace geoflow::app
