#pragma once

// MiniJ: the Java-like subset the obfuscator targets, with a tree-walking
// interpreter used as the execution oracle for differential testing.
//
// Language summary:
//   types        int, long, boolean (all 64-bit integers), int[] (any rank),
//                SplitArray / FoldedArray / FlattenedArray (optional <...>),
//                user classes
//   items        top-level statements (the main program), functions,
//                classes with fields, constructors and methods
//   statements   declarations, assignment (= += -= *= /= %=, ++, --), if/else,
//                while, for, break, continue, return, print(expr|"text"),
//                throw new Name(...)
//   expressions  + - * / % with truncated division, comparisons, && || !,
//                unary minus, calls, F(a, k), container methods setArray,
//                getArray, lengthArray, array indexing and .length
//
// A user-defined function F or a user class named like a restructured array
// replaces the corresponding builtin.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "arrhide/arraylib.hpp"
#include "arrhide/consthide.hpp"
#include "arrhide/error.hpp"

namespace arrhide::minij {

struct ProgramData;

class Program {
public:
    /// Throws LexError or ParseError.
    static Program parse(std::string_view source);

    std::size_t functionCount() const;
    std::size_t classCount() const;
    std::size_t topLevelStatementCount() const;

    const ProgramData& data() const { return *data_; }

private:
    explicit Program(std::shared_ptr<const ProgramData> d) : data_(std::move(d)) {}
    std::shared_ptr<const ProgramData> data_;
};

struct ExecOptions {
    YFactorTable table = YFactorTable::defaults();
    /// Layout parameters of builtin containers; never observable.
    IntContainer::Params layout;
    std::uint64_t maxSteps = UINT64_MAX;
    std::size_t maxCallDepth = 2000;
};

struct ExecResult {
    enum class Status { Ok, RuntimeError };

    std::string out;
    std::uint64_t steps = 0;
    Status status = Status::Ok;
    SourcePos errorPos;
    /// division-by-zero, overflow, out-of-bounds, null-reference, type-error,
    /// bad-F-argument, thrown, missing-return, step-limit, stack-overflow
    std::string errorKind;
    std::string errorMessage;

    bool ok() const { return status == Status::Ok; }
    /// "line:col: kind: message"
    std::string describeError() const;
};

ExecResult execute(const Program& program, const ExecOptions& options = {});

/// parse + execute. Parse errors propagate as exceptions.
ExecResult run(std::string_view source, const ExecOptions& options = {});

}  // namespace arrhide::minij
