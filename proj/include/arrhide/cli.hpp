#pragma once

// Command-line front end: obfuscate, run, verify and metrics subcommands.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "arrhide/minij.hpp"
#include "arrhide/rewriter.hpp"

namespace arrhide {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitParse = 2,
    kExitMismatch = 3,
    kExitRuntime = 4,
};

/// Applied to the obfuscated text before it is executed by verify. Tests use
/// it to inject faults.
using TamperHook = std::function<void(std::string&)>;

struct VerifyOutcome {
    minij::ExecResult original;
    minij::ExecResult obfuscated;
    RewriteResult rewrite;

    bool equivalent() const { return original.ok() && obfuscated.ok() && original.out == obfuscated.out; }
};

/// Interpreter options matching cfg's table and layout.
minij::ExecOptions execOptionsFor(const ObfuscationConfig& cfg);

/// Obfuscates source, then runs the original and the (possibly tampered)
/// result. Parse errors of the original propagate.
VerifyOutcome verifyProgram(std::string_view source, const ObfuscationConfig& cfg, const TamperHook& tamper = {});

/// RewriteReport as a one-line JSON object.
std::string reportJson(const RewriteReport& report);

/// args excludes the program name.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
           const TamperHook& tamper = {});

}  // namespace arrhide
