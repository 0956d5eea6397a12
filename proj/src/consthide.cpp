#include "arrhide/consthide.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "arrhide/error.hpp"

namespace arrhide {

namespace {

bool isPrime(std::int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t d = 3; d <= n / d; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

std::int64_t checkedApply(char op, std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    switch (op) {
        case '+':
            if (__builtin_add_overflow(a, b, &out)) throw DomainError("integer overflow in +");
            return out;
        case '-':
            if (__builtin_sub_overflow(a, b, &out)) throw DomainError("integer overflow in -");
            return out;
        case '*':
            if (__builtin_mul_overflow(a, b, &out)) throw DomainError("integer overflow in *");
            return out;
        case '/':
        case '%':
            if (b == 0) throw DomainError("division by zero");
            if (a == std::numeric_limits<std::int64_t>::min() && b == -1) {
                throw DomainError("integer overflow in division");
            }
            return op == '/' ? a / b : a % b;
        default:
            throw DomainError(std::string("unknown operator '") + op + "'");
    }
}

std::int64_t evalTracking(const HiddenExpr& e, const YFactorTable& table, std::int64_t& maxAbs) {
    std::int64_t v = 0;
    switch (e.kind()) {
        case HiddenExpr::Kind::Literal:
            v = e.value();
            break;
        case HiddenExpr::Kind::BinOp:
            v = checkedApply(e.op(), evalTracking(e.lhs(), table, maxAbs),
                             evalTracking(e.rhs(), table, maxAbs));
            break;
        case HiddenExpr::Kind::FCall:
            v = evalF(evalTracking(e.arg(), table, maxAbs), e.depth(), table);
            break;
    }
    // |INT64_MIN| is not representable; saturate.
    const std::int64_t mag = v == std::numeric_limits<std::int64_t>::min()
                                 ? std::numeric_limits<std::int64_t>::max()
                                 : (v < 0 ? -v : v);
    maxAbs = std::max(maxAbs, mag);
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// YFactorTable

YFactorTable::YFactorTable(std::vector<std::int64_t> primes) : primes_(std::move(primes)) {
    if (primes_.size() < 3) throw ConfigError("y-factor table needs at least 3 primes");
    if (primes_.front() < 3) throw ConfigError("smallest y-factor must be >= 3");
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        if (!isPrime(primes_[i])) {
            throw ConfigError("y-factor " + std::to_string(primes_[i]) + " is not prime");
        }
        if (i > 0 && primes_[i] <= primes_[i - 1]) {
            throw ConfigError("y-factors must be strictly increasing");
        }
    }
}

YFactorTable YFactorTable::defaults() { return YFactorTable({5, 7, 11, 13, 17, 19, 23}); }

YFactorTable YFactorTable::parse(std::string_view csv) {
    std::vector<std::int64_t> primes;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t end = csv.find(',', start);
        if (end == std::string_view::npos) end = csv.size();
        std::string_view item = csv.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
            throw ConfigError("bad y-factor entry '" + std::string(item) + "'");
        }
        primes.push_back(v);
        start = end + 1;
    }
    return YFactorTable(std::move(primes));
}

std::string YFactorTable::str() const {
    std::string out;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(primes_[i]);
    }
    return out;
}

void HidingConfig::validate() const {
    // Depth-1 fallback argument x + y[0]*y[1] must fit below maxMagnitude / 4.
    if (maxMagnitude / 4 < table[0] * table[1] + table[0] - 1) {
        throw ConfigError("maxMagnitude " + std::to_string(maxMagnitude) +
                          " is too small for the y-factor table");
    }
}

// ---------------------------------------------------------------------------
// HiddenExpr

struct HiddenExpr::Node {
    Kind kind;
    std::int64_t value = 0;
    char op = 0;
    std::size_t depth = 0;
    std::vector<HiddenExpr> kids;
};

HiddenExpr HiddenExpr::literal(std::int64_t value) {
    return HiddenExpr(std::make_shared<const Node>(Node{Kind::Literal, value, 0, 0, {}}));
}

HiddenExpr HiddenExpr::binary(char op, HiddenExpr lhs, HiddenExpr rhs) {
    if (op != '+' && op != '-' && op != '*' && op != '/' && op != '%') {
        throw DomainError(std::string("unknown operator '") + op + "'");
    }
    return HiddenExpr(std::make_shared<const Node>(
        Node{Kind::BinOp, 0, op, 0, {std::move(lhs), std::move(rhs)}}));
}

HiddenExpr HiddenExpr::fcall(HiddenExpr arg, std::size_t depth) {
    return HiddenExpr(
        std::make_shared<const Node>(Node{Kind::FCall, 0, 0, depth, {std::move(arg)}}));
}

HiddenExpr::Kind HiddenExpr::kind() const { return node_->kind; }
std::int64_t HiddenExpr::value() const { return node_->value; }
char HiddenExpr::op() const { return node_->op; }
std::size_t HiddenExpr::depth() const { return node_->depth; }
const HiddenExpr& HiddenExpr::lhs() const { return node_->kids.at(0); }
const HiddenExpr& HiddenExpr::rhs() const { return node_->kids.at(1); }

bool HiddenExpr::operator==(const HiddenExpr& other) const {
    if (node_ == other.node_) return true;
    const Node& a = *node_;
    const Node& b = *other.node_;
    return a.kind == b.kind && a.value == b.value && a.op == b.op && a.depth == b.depth &&
           a.kids == b.kids;
}

// ---------------------------------------------------------------------------
// Evaluation

std::int64_t evalF(std::int64_t a, std::size_t k, const YFactorTable& table) {
    if (k > table.m()) {
        throw DepthRangeError("F depth " + std::to_string(k) + " outside [0, " +
                              std::to_string(table.m()) + "]");
    }
    if (a < 0) throw DomainError("F argument must be non-negative, got " + std::to_string(a));
    for (std::size_t j = k + 1; j-- > 0;) a %= table[j];
    return a;
}

std::int64_t evalF(std::int64_t a, std::int64_t k, const YFactorTable& table) {
    if (k < 0) throw DepthRangeError("F depth " + std::to_string(k) + " is negative");
    return evalF(a, static_cast<std::size_t>(k), table);
}

std::int64_t evaluate(const HiddenExpr& e, const YFactorTable& table) {
    std::int64_t ignored = 0;
    return evalTracking(e, table, ignored);
}

std::int64_t maxAbsIntermediate(const HiddenExpr& e, const YFactorTable& table) {
    std::int64_t maxAbs = 0;
    evalTracking(e, table, maxAbs);
    return maxAbs;
}

std::size_t countFCalls(const HiddenExpr& e) {
    switch (e.kind()) {
        case HiddenExpr::Kind::Literal: return 0;
        case HiddenExpr::Kind::BinOp: return countFCalls(e.lhs()) + countFCalls(e.rhs());
        case HiddenExpr::Kind::FCall: return 1 + countFCalls(e.arg());
    }
    return 0;
}

std::size_t fcallNesting(const HiddenExpr& e) {
    switch (e.kind()) {
        case HiddenExpr::Kind::Literal: return 0;
        case HiddenExpr::Kind::BinOp: return std::max(fcallNesting(e.lhs()), fcallNesting(e.rhs()));
        case HiddenExpr::Kind::FCall: return 1 + fcallNesting(e.arg());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Generation

Hider::Hider(HidingConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) { cfg_.validate(); }

// Rejection sampling over raw 64-bit draws; unlike std::uniform_int_distribution
// the stream is identical across standard library implementations.
std::int64_t Hider::uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng_());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t draw = 0;
    do {
        draw = rng_();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
}

HiddenExpr Hider::hideSmall(std::int64_t x) {
    const YFactorTable& table = cfg_.table;
    if (x < 0 || x >= table.smallest()) {
        throw DomainError("hideSmall needs 0 <= x < " + std::to_string(table.smallest()) +
                          ", got " + std::to_string(x));
    }
    auto k = static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(table.m())));
    const std::int64_t aMax = cfg_.maxMagnitude / 4;

    constexpr int kAttempts = 100000;
    std::int64_t a = -1;
    for (int i = 0; i < kAttempts; ++i) {
        const std::int64_t candidate = uniform(table.smallest(), aMax);
        if (evalF(candidate, k, table) == x) {
            a = candidate;
            break;
        }
    }
    if (a < 0) {
        // x + y[0]*...*y[k] reduces to x under every modulus of the chain.
        // Shallower chains have smaller products; validate() guarantees depth 1 fits.
        std::int64_t product = 0;
        for (;; --k) {
            product = 1;
            for (std::size_t j = 0; j <= k; ++j) {
                if (__builtin_mul_overflow(product, table[j], &product)) product = aMax + 1;
            }
            if (product <= aMax - x || k == 1) break;
        }
        if (product > aMax - x) {
            throw DomainError("no F argument found for " + std::to_string(x) + " at depth " +
                              std::to_string(k));
        }
        a = x + product;
    }
    // Cosmetic `P % Q` form with Q > A, so P % Q == A.
    const std::int64_t q = uniform(a + 1, std::min(2 * a + 1, cfg_.maxMagnitude - a));
    return HiddenExpr::fcall(
        HiddenExpr::binary('%', HiddenExpr::literal(a + q), HiddenExpr::literal(q)), k);
}

HiddenExpr Hider::hideConstant(std::int64_t c) {
    if (c < 0) throw DomainError("cannot hide negative constant " + std::to_string(c));
    if (c > cfg_.maxMagnitude) {
        throw DomainError("constant " + std::to_string(c) + " exceeds maxMagnitude " +
                          std::to_string(cfg_.maxMagnitude));
    }
    if (c < cfg_.table.smallest()) return hideSmall(c);
    const std::int64_t d = c / 2;
    const std::int64_t r = c % 2;
    HiddenExpr two = hideSmall(2);
    HiddenExpr half = d >= cfg_.table.smallest() ? hideConstant(d) : hideSmall(d);
    HiddenExpr rem = hideSmall(r);
    return HiddenExpr::binary(
        '+', HiddenExpr::binary('*', std::move(two), std::move(half)), std::move(rem));
}

HiddenExpr Hider::rehideLiteral(std::int64_t value) {
    if (value < 0) throw DomainError("cannot re-hide negative literal " + std::to_string(value));
    const std::int64_t v1 = uniform(2, cfg_.table.smallest() - 1);
    HiddenExpr factor = hideSmall(v1);
    HiddenExpr rem = hideSmall(value % v1);
    return HiddenExpr::binary(
        '+', HiddenExpr::binary('*', std::move(factor), HiddenExpr::literal(value / v1)),
        std::move(rem));
}

HiddenExpr Hider::reobfuscate(const HiddenExpr& e) {
    switch (e.kind()) {
        case HiddenExpr::Kind::Literal:
            return e;
        case HiddenExpr::Kind::BinOp: {
            HiddenExpr l = reobfuscate(e.lhs());
            HiddenExpr r = reobfuscate(e.rhs());
            return HiddenExpr::binary(e.op(), std::move(l), std::move(r));
        }
        case HiddenExpr::Kind::FCall: {
            const HiddenExpr& arg = e.arg();
            if (arg.kind() == HiddenExpr::Kind::BinOp && arg.op() == '%' &&
                arg.lhs().kind() == HiddenExpr::Kind::Literal) {
                HiddenExpr left = rehideLiteral(arg.lhs().value());
                return HiddenExpr::fcall(HiddenExpr::binary('%', std::move(left), arg.rhs()),
                                         e.depth());
            }
            return HiddenExpr::fcall(reobfuscate(arg), e.depth());
        }
    }
    return e;
}

HiddenExpr hideSmall(std::int64_t x, const HidingConfig& cfg) { return Hider(cfg).hideSmall(x); }

HiddenExpr hideConstant(std::int64_t c, const HidingConfig& cfg) {
    return Hider(cfg).hideConstant(c);
}

HiddenExpr reobfuscate(const HiddenExpr& e, const HidingConfig& cfg) {
    return Hider(cfg).reobfuscate(e);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

void render(const HiddenExpr& e, bool bare, std::string& out) {
    switch (e.kind()) {
        case HiddenExpr::Kind::Literal:
            out += std::to_string(e.value());
            return;
        case HiddenExpr::Kind::BinOp:
            if (!bare) out += '(';
            render(e.lhs(), false, out);
            out += e.op();
            render(e.rhs(), false, out);
            if (!bare) out += ')';
            return;
        case HiddenExpr::Kind::FCall:
            out += "F(";
            render(e.arg(), true, out);
            out += ',';
            out += std::to_string(e.depth());
            out += ')';
            return;
    }
}

}  // namespace

std::string renderExpr(const HiddenExpr& e) {
    std::string out;
    render(e, false, out);
    return out;
}

std::string emitFRuntime(const YFactorTable& table) {
    std::ostringstream os;
    const std::size_t m = table.m();
    os << "int F(int a, int k) {\n";
    os << "    if (k < 0 || k > " << m << ") { throw new IllegalArgumentException(); }\n";
    os << "    if (a < 0) { throw new IllegalArgumentException(); }\n";
    // Descending chain: y[k] is applied first, y[0] last.
    for (std::size_t j = m + 1; j-- > 0;) {
        os << "    if (k >= " << j << ") { a = a % " << table[j] << "; }\n";
    }
    os << "    return a;\n";
    os << "}\n";
    return os.str();
}

}  // namespace arrhide
