#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kgeo::verify {

enum class Level { quick, full };

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail; // key=value pairs, 17 significant digits
};

/// Runs the full verification battery at the requested level.
/// quick: desk scale N=16, M=8 where a criterion does not pin its own
/// parameters; full: N=32, M=16 plus the wider property sweeps.
/// Deterministic: identical (level, seed) produce identical results.
std::vector<CriterionResult> run_criteria(Level level, std::uint64_t seed);

/// Prints one pass/fail line per criterion plus a summary; returns true
/// iff everything passed.  Output is byte-stable for fixed inputs.
bool print_report(std::ostream& os, const std::vector<CriterionResult>& results,
                  Level level, std::uint64_t seed);

} // namespace kgeo::verify
