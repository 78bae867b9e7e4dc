#include "crimed/reports.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace crimed {

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [end, ec] =
      std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buffer, end);
}

std::string regret_csv(const MonteCarloSummary& summary) {
  std::string out = "checkpoint,mean_regret,p5,p95\n";
  for (std::size_t i = 0; i < summary.checkpoints.size(); ++i) {
    out += std::to_string(summary.checkpoints[i]);
    out += ',';
    out += format_double(summary.mean_regret[i]);
    out += ',';
    out += format_double(summary.p5[i]);
    out += ',';
    out += format_double(summary.p95[i]);
    out += '\n';
  }
  return out;
}

std::string summary_csv(
    const std::vector<std::pair<std::string, MonteCarloSummary>>& results,
    const LowerBoundReport& report) {
  std::string out = "policy,arm,mean_pulls,gap,lower_bound_slope\n";
  for (const auto& [policy, summary] : results) {
    for (std::size_t a = 0; a < summary.mean_pull_counts.size(); ++a) {
      out += policy;
      out += ',';
      out += std::to_string(a);
      out += ',';
      out += format_double(summary.mean_pull_counts[a]);
      out += ',';
      out += format_double(report.slopes[a].gap);
      out += ',';
      out += format_double(report.slopes[a].slope);
      out += '\n';
    }
  }
  return out;
}

std::string concentration_csv(const std::vector<ConcentrationRow>& rows) {
  std::string out = "n,y,eps,adversary,empirical_freq,bound\n";
  for (const ConcentrationRow& row : rows) {
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.y);
    out += ',';
    out += format_double(row.eps);
    out += ',';
    out += row.adversary;
    out += ',';
    out += format_double(row.empirical_freq);
    out += ',';
    out += format_double(row.bound);
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  file << contents;
  if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace crimed
