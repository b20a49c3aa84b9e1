/// @file cli.hpp
/// @brief Command-line front end: config ingestion, batch verification,
/// solving/classification, and report emission.
///
/// Exit codes: 0 ok, 1 config error, 2 verification mismatch, 3 infeasible.
/// The ledger is always written before a nonzero exit (except config errors).
/// QSC_LAB_THREADS caps sweep parallelism. Reports carry no timestamps, so
/// identical (config, seed) runs are byte-identical.

#pragma once

#include "qsc/closed_forms.hpp"
#include "qsc/report.hpp"

#include <cstdint>
#include <optional>

namespace qsc::cli {

struct RunConfig {
    std::string task;
    std::optional<SpaceSpec> space;
    std::optional<QscParams> qsc;
    int samples = 20;
    std::uint64_t seed = 1;
    double tol_match = 1e-9;
    std::string out_dir = "qsc-out";
    bool strict = true;
    cf::TraceReading reading = cf::TraceReading::Signed;

    // solver / classify parameters
    int l = 1;
    double lambda1 = 1.0, lambda2 = 1.0;
    double alpha = 0.0, sbar = 0.0, sf = 0.0;
    double p1 = 1.0, p2 = 0.0;
    double zeta = 6.0;
    std::string type = "III";

    // sweep kind + raw grid spec (parsed lazily by cmd_sweep)
    std::string sweep_kind;
    std::string sweep_json;
};

/// Parses the documented RunConfig JSON schema; throws SpecError on malformed
/// input (the caller maps that to exit code 1 with a diagnostic on stderr).
RunConfig config_from_json(const std::string& text);

int cmd_verify(const RunConfig& cfg);
int cmd_solve(const RunConfig& cfg);
int cmd_classify(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);

/// Full argv entry point (subcommands verify | solve | classify | sweep).
int run(int argc, const char* const* argv);

} // namespace qsc::cli
