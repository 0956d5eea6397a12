#pragma once

// Statement-level obfuscation of Java-like source.
//
// Candidate statements (those declaring or accessing a restructured array)
// get every integer literal hidden; when they carry no literal at all, array
// indices, constructor sizes and lengthArray() results are multiplied by a
// hidden 1. Other statements get only their first literal hidden. Literals
// already inside F calls are left alone except the left operand of the `%`
// forming an F argument, which is re-hidden; this is what makes every further
// pass nest F one level deeper.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arrhide/arraylib.hpp"
#include "arrhide/consthide.hpp"
#include "arrhide/frontend.hpp"

namespace arrhide {

enum class RewriteMode { MiniJ, Textual };

std::string_view toString(RewriteMode mode);
RewriteMode parseRewriteMode(std::string_view name);

struct ObfuscationConfig {
    HidingConfig hiding;
    std::size_t iterations = 1;
    ArrayKind arrayKind = ArrayKind::Split;
    std::size_t k = 2;
    std::size_t cols = 16;
    bool emitRuntime = false;
    RewriteMode mode = RewriteMode::MiniJ;

    /// Throws ConfigError.
    void validate() const;
};

struct PassCounts {
    /// Plain literals replaced by a hiding expression.
    std::size_t constantsHidden = 0;
    /// F-argument literals replaced by hide(v1)*q + hide(v2).
    std::size_t literalsRehidden = 0;
    std::size_t hiddenOnesInserted = 0;
    std::size_t statementsTouched = 0;

    PassCounts& operator+=(const PassCounts& o);
};

struct RewriteReport {
    std::size_t constantsHidden = 0;
    std::size_t literalsRehidden = 0;
    std::size_t hiddenOnesInserted = 0;
    std::size_t statementsTouched = 0;
    std::vector<PassCounts> perIteration;

    void add(const PassCounts& pass);
};

struct RewriteResult {
    std::string text;
    RewriteReport report;
};

/// How a literal token inside a statement is treated.
enum class LiteralRole {
    Plain,       // outside any F call: hidden with hideConstant
    FArgument,   // `P` in F(P % Q, k): re-hidden
    FDepth,      // `k` in F(..., k): untouched
    FModulus,    // `Q` in F(P % Q, k): untouched
    InsideF,     // any other literal nested in an F argument: untouched
};

/// Role of every token of the statement; entries for non-literals are Plain.
std::vector<LiteralRole> literalRoles(std::span<const Token> stmt);

/// Per-pass seed. Running passes one at a time with these seeds reproduces a
/// multi-iteration run exactly.
std::uint64_t passSeed(std::uint64_t seed, std::size_t pass);

/// Rewritten text of one statement (inner whitespace preserved, leading gap
/// excluded). `symbols` must already have seen the statement.
std::string obfuscateStatement(const Document& doc, const Statement& stmt, const Classifier& symbols,
                               Hider& hider, PassCounts& counts);

/// One full pass over a document.
RewriteResult obfuscatePass(std::string_view source, const ObfuscationConfig& cfg, std::uint64_t seed);

/// cfg.iterations passes, then the runtime prelude when cfg.emitRuntime is set.
/// In MiniJ mode the input and the output must both parse.
RewriteResult obfuscateProgram(std::string_view source, const ObfuscationConfig& cfg);

/// Java-like class implementing the chosen restructured array, with all of its
/// integer constants hidden.
std::string emitCoBSSource(ArrayKind kind, const ObfuscationConfig& cfg);

/// emitFRuntime + emitCoBSSource for cfg.arrayKind.
std::string emitRuntimePrelude(const ObfuscationConfig& cfg);

}  // namespace arrhide
