#pragma once

#include <string>
#include <vector>

#include "crimed/concentration_check.hpp"
#include "crimed/simulator.hpp"

namespace crimed {

// Locale-independent number formatting (shortest round-trip, '.' decimal
// separator). All CSV output goes through this.
std::string format_double(double value);

// regret_<policy>.csv body: header "checkpoint,mean_regret,p5,p95".
std::string regret_csv(const MonteCarloSummary& summary);

// summary.csv body: one row per (policy, arm) with the mean final pull
// count, the raw gap, and the lower-bound slope.
// Header: "policy,arm,mean_pulls,gap,lower_bound_slope".
std::string summary_csv(
    const std::vector<std::pair<std::string, MonteCarloSummary>>& results,
    const LowerBoundReport& report);

// check-concentration output: header
// "n,y,eps,adversary,empirical_freq,bound".
std::string concentration_csv(const std::vector<ConcentrationRow>& rows);

void write_file(const std::string& path, const std::string& contents);

}  // namespace crimed
