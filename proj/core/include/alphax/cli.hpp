#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>

#include "alphax/config.hpp"

namespace alphax::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDataGap = 3;

/// Loads every configured input, prints row counts, per-asset coverage and
/// invariant violations. Nonzero exit on any violation.
int cmd_validate(const RunConfig& cfg, std::ostream& out);

/// Runs every requested strategy over the date range and writes, per
/// strategy, <name>_ledger.csv / <name>_equity.csv / <name>_allocations.csv
/// plus the combined comparison.csv, comparison.json, psr_report.csv and the
/// config snapshot. Deterministic for a fixed seed.
int cmd_backtest(const RunConfig& cfg, std::ostream& out);

struct SynthArgs {
    std::uint64_t seed = 1;
    int n_assets = 5;
    int n_quarters = 8;
    std::filesystem::path out_dir;
    bool force = false;
};

/// Writes a synthetic dataset (bars, statements, risk-free, index weights,
/// universe) plus a ready-to-run config.cfg pointing at it.
int cmd_synth(const SynthArgs& args, std::ostream& out);

}  // namespace alphax::cli
