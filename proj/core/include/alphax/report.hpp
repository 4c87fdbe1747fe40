#pragma once

#include <string>
#include <vector>

#include "alphax/engine.hpp"
#include "alphax/metrics.hpp"

namespace alphax {

// All report writers format doubles with 6 fixed decimals so emitted files
// are byte-stable across platforms and reruns.

std::string serialize_ledger(const BacktestRun& run);
std::string serialize_equity_curve(const BacktestRun& run);
std::string serialize_allocations(const BacktestRun& run);

/// One row per strategy, columns mirroring the MetricReport fields.
std::string serialize_comparison_csv(const std::vector<MetricReport>& reports);
std::string serialize_comparison_json(const std::vector<MetricReport>& reports);

/// PSR/minTRL table: one metric row per threshold, one column per strategy.
std::string serialize_psr_report(const std::vector<MetricReport>& reports);

}  // namespace alphax
