/// @file report.hpp
/// @brief The discrepancy ledger: machine-readable record of every checked
/// formula row with its residual, verdict, and fingerprint note. Deterministic
/// given (config, seed) -- no timestamps anywhere.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qsc {

struct LedgerEntry {
    std::string formula_id;
    std::string where; // chart point or grid parameter, rendered
    double residual = 0.0;
    std::string verdict; // MATCH | MISMATCH | NOT_STATED
    std::string note;    // fingerprint for documented discrepancies
};

struct ReportMeta {
    std::uint64_t seed = 0;
    double tol_match = 1e-9;
    std::string task;
    std::string version = "qsc-lab 0.1";
};

struct ResidualReport {
    ReportMeta meta;
    std::vector<LedgerEntry> entries;

    int checked() const { return static_cast<int>(entries.size()); }
    int matched() const;
    int mismatched() const;
    int not_stated() const;

    std::string to_json() const;
    std::string to_csv() const;
};

/// Writes text to path, creating parent directories as needed.
void write_file(const std::string& path, const std::string& text);

} // namespace qsc
