#pragma once

// Potency and cost measurements over plain and obfuscated programs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arrhide/minij.hpp"
#include "arrhide/rewriter.hpp"

namespace arrhide {

/// depth -> number of F call sites with that nesting depth.
using DepthHistogram = std::map<std::size_t, std::size_t>;

/// Every F(...) call site counted once at its own depth: 1 + the largest depth
/// of the F calls inside its arguments. Definitions (`int F(`) are not calls.
/// Throws MetricError on an unclosed call.
DepthHistogram countFCalls(std::string_view source);

std::size_t totalFCalls(const DepthHistogram& h);
std::size_t maxFDepth(const DepthHistogram& h);

struct MetricsReport {
    DepthHistogram fCallsByDepth;
    std::size_t totalStatements = 0;
    std::size_t byteSize = 0;
    std::uint64_t steps = 0;
    std::optional<double> wallTime;
    std::size_t iteration = 0;

    /// One-line JSON object, keys in declaration order.
    std::string toJson() const;
};

struct MeasureOptions {
    /// Interpret the program to fill steps and wallTime.
    bool execute = true;
    minij::ExecOptions exec;
};

/// Static metrics plus (optionally) one interpreter run. A runtime error in
/// the program is reported as a MetricError.
MetricsReport measure(std::string_view source, std::size_t iteration, const MeasureOptions& opts = {});

/// Reports for iterations first..last of cfg applied to source; iteration 0 is
/// the source itself.
std::vector<MetricsReport> sweep(std::string_view source, const ObfuscationConfig& cfg, std::size_t first,
                                 std::size_t last, const MeasureOptions& opts = {});

struct RunSnapshot {
    minij::ExecResult result;
    std::size_t byteSize = 0;
};

struct CostSummary {
    double stepRatio = 1.0;
    double sizeRatio = 1.0;
    bool stdoutEqual = true;

    std::string toJson() const;
};

/// Throws MetricError unless both runs completed.
CostSummary compareRuns(const RunSnapshot& original, const RunSnapshot& obfuscated);

}  // namespace arrhide
