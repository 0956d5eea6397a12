#pragma once

// Constant hiding with y-factor chains.
//
// A y-factor table is a strictly increasing list of primes y[0..m]. The hiding
// function F(A, k) reduces A by y[k], then y[k-1], ... down to y[0], so every
// result lies in [0, y[0]). Small constants are replaced by an F call that
// evaluates to them; larger constants are decomposed as 2*d + r with the 2,
// the remainder and the (recursively hidden) d expressed through F calls.

#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arrhide {

inline constexpr std::int64_t kJavaIntMax = std::numeric_limits<std::int32_t>::max();

class YFactorTable {
public:
    /// Throws ConfigError unless the list holds >= 3 strictly increasing primes
    /// starting at >= 3.
    explicit YFactorTable(std::vector<std::int64_t> primes);

    /// [5, 7, 11, 13, 17, 19, 23]
    static YFactorTable defaults();
    /// Parses a comma separated list such as "5,7,11,13".
    static YFactorTable parse(std::string_view csv);

    /// Largest valid depth index.
    std::size_t m() const { return primes_.size() - 1; }
    std::size_t size() const { return primes_.size(); }
    std::int64_t operator[](std::size_t i) const { return primes_[i]; }
    std::int64_t smallest() const { return primes_.front(); }
    std::span<const std::int64_t> primes() const { return primes_; }
    std::string str() const;

    bool operator==(const YFactorTable&) const = default;

private:
    std::vector<std::int64_t> primes_;
};

struct HidingConfig {
    YFactorTable table = YFactorTable::defaults();
    std::uint64_t seed = 42;
    /// Upper bound on every generated literal and every intermediate value.
    std::int64_t maxMagnitude = kJavaIntMax;

    /// Throws ConfigError when maxMagnitude leaves no room for F arguments.
    void validate() const;
};

/// Immutable integer expression tree. Copies share structure.
class HiddenExpr {
public:
    enum class Kind { Literal, BinOp, FCall };

    static HiddenExpr literal(std::int64_t value);
    /// op is one of + - * / %
    static HiddenExpr binary(char op, HiddenExpr lhs, HiddenExpr rhs);
    static HiddenExpr fcall(HiddenExpr arg, std::size_t depth);

    Kind kind() const;
    std::int64_t value() const;
    char op() const;
    std::size_t depth() const;
    const HiddenExpr& lhs() const;
    const HiddenExpr& rhs() const;
    /// Argument of an FCall.
    const HiddenExpr& arg() const { return lhs(); }

    /// Structural equality.
    bool operator==(const HiddenExpr& other) const;

private:
    struct Node;
    explicit HiddenExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// ((A mod y[k]) mod y[k-1]) ... mod y[0]
std::int64_t evalF(std::int64_t a, std::size_t k, const YFactorTable& table);
/// Overload taking a signed depth so callers can pass unchecked values.
std::int64_t evalF(std::int64_t a, std::int64_t k, const YFactorTable& table);

/// Evaluates with truncated division. Throws DomainError on division by zero,
/// 64-bit overflow or a negative F argument; DepthRangeError on a bad depth.
std::int64_t evaluate(const HiddenExpr& e, const YFactorTable& table);

/// Largest |v| over every subexpression value of e.
std::int64_t maxAbsIntermediate(const HiddenExpr& e, const YFactorTable& table);

std::size_t countFCalls(const HiddenExpr& e);
/// Nesting depth of F calls: 0 without calls, 1 + max inner depth otherwise.
std::size_t fcallNesting(const HiddenExpr& e);

/// Seed-driven generator of hiding expressions. Each generated expression
/// advances the internal stream, so identical literals hidden in sequence
/// come out different while the whole sequence stays reproducible.
class Hider {
public:
    explicit Hider(HidingConfig cfg);

    const HidingConfig& config() const { return cfg_; }

    /// F call evaluating to x, 0 <= x < y[0].
    HiddenExpr hideSmall(std::int64_t x);
    /// Expression evaluating to c, 0 <= c <= maxMagnitude.
    HiddenExpr hideConstant(std::int64_t c);
    /// Replaces the literal left operand of every `%` that is the direct
    /// argument of an F call with hide(v1)*q + hide(v2).
    HiddenExpr reobfuscate(const HiddenExpr& e);
    /// hide(v1)*q + hide(v2) with v1 in [2, y[0]), q = value / v1, v2 = value % v1.
    HiddenExpr rehideLiteral(std::int64_t value);

private:
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);

    HidingConfig cfg_;
    std::mt19937_64 rng_;
};

HiddenExpr hideSmall(std::int64_t x, const HidingConfig& cfg);
HiddenExpr hideConstant(std::int64_t c, const HidingConfig& cfg);
HiddenExpr reobfuscate(const HiddenExpr& e, const HidingConfig& cfg);

/// Fully parenthesized infix text. BinOps are wrapped in parentheses except
/// when they are the direct argument of an F call: F(41%23,2), (2*F(9,1)).
std::string renderExpr(const HiddenExpr& e);

/// Java-like source of a function `int F(int a, int k)` equivalent to evalF
/// over `table`.
std::string emitFRuntime(const YFactorTable& table);

}  // namespace arrhide
