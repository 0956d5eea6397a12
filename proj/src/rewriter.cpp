#include "arrhide/rewriter.hpp"

#include <algorithm>
#include <charconv>

#include "arrhide/minij.hpp"

namespace arrhide {

std::string_view toString(RewriteMode mode) {
    return mode == RewriteMode::MiniJ ? "minij" : "textual";
}

RewriteMode parseRewriteMode(std::string_view name) {
    if (name == "minij") return RewriteMode::MiniJ;
    if (name == "textual") return RewriteMode::Textual;
    throw ConfigError("unknown mode '" + std::string(name) + "'");
}

void ObfuscationConfig::validate() const {
    if (iterations < 1) throw ConfigError("iterations must be >= 1");
    if (k < 2) throw ConfigError("k must be >= 2");
    if (cols < 1) throw ConfigError("cols must be >= 1");
    hiding.validate();
}

PassCounts& PassCounts::operator+=(const PassCounts& o) {
    constantsHidden += o.constantsHidden;
    literalsRehidden += o.literalsRehidden;
    hiddenOnesInserted += o.hiddenOnesInserted;
    statementsTouched += o.statementsTouched;
    return *this;
}

void RewriteReport::add(const PassCounts& pass) {
    constantsHidden += pass.constantsHidden;
    literalsRehidden += pass.literalsRehidden;
    hiddenOnesInserted += pass.hiddenOnesInserted;
    statementsTouched += pass.statementsTouched;
    perIteration.push_back(pass);
}

std::uint64_t passSeed(std::uint64_t seed, std::size_t pass) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(pass) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

bool isOpen(const Token& t) { return t.isPunct("(") || t.isPunct("[") || t.isPunct("{"); }
bool isClose(const Token& t) { return t.isPunct(")") || t.isPunct("]") || t.isPunct("}"); }

// Index of the token closing the bracket opened at `open`, or stmt.size().
std::size_t matching(std::span<const Token> stmt, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < stmt.size(); ++i) {
        if (isOpen(stmt[i])) ++depth;
        if (isClose(stmt[i]) && --depth == 0) return i;
    }
    return stmt.size();
}

struct Range {
    std::size_t first;
    std::size_t last;  // inclusive
};

// Comma separated arguments between stmt[open] and its matching close.
std::vector<Range> arguments(std::span<const Token> stmt, std::size_t open) {
    std::vector<Range> args;
    const std::size_t close = matching(stmt, open);
    if (close >= stmt.size()) return args;
    std::size_t start = open + 1;
    int depth = 0;
    for (std::size_t i = open + 1; i <= close; ++i) {
        if (i == close || (depth == 0 && stmt[i].isPunct(","))) {
            if (i > start) args.push_back({start, i - 1});
            start = i + 1;
            continue;
        }
        if (isOpen(stmt[i])) ++depth;
        if (isClose(stmt[i])) --depth;
    }
    return args;
}

std::int64_t literalValue(const Token& t, std::int64_t maxMagnitude) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || v > maxMagnitude) {
        throw RewriteError("literal " + t.text + " exceeds the hiding bound " +
                               std::to_string(maxMagnitude),
                           t.pos);
    }
    return v;
}

std::string parenthesized(const HiddenExpr& e) {
    std::string s = renderExpr(e);
    return e.kind() == HiddenExpr::Kind::BinOp ? s : "(" + s + ")";
}

bool startsFDefinition(std::span<const Token> stmt) {
    std::size_t i = 0;
    while (i < stmt.size() && stmt[i].kind == TokenKind::Keyword &&
           (stmt[i].text == "public" || stmt[i].text == "private" || stmt[i].text == "static" ||
            stmt[i].text == "final" || stmt[i].text == "protected")) {
        ++i;
    }
    return i + 2 < stmt.size() && stmt[i].kind == TokenKind::Keyword &&
           (stmt[i].text == "int" || stmt[i].text == "long") &&
           stmt[i + 1].is(TokenKind::Identifier, "F") && stmt[i + 2].isPunct("(") &&
           stmt.back().isPunct("{");
}

bool definesClass(const Document& doc, std::string_view name) {
    for (std::size_t i = 0; i + 1 < doc.tokens.size(); ++i) {
        if (doc.tokens[i].is(TokenKind::Keyword, "class") &&
            doc.tokens[i + 1].is(TokenKind::Identifier, name)) {
            return true;
        }
    }
    return false;
}

bool definesF(const Document& doc) {
    return std::any_of(doc.statements.begin(), doc.statements.end(),
                       [&](const Statement& s) { return startsFDefinition(doc.span(s)); });
}

}  // namespace

std::vector<LiteralRole> literalRoles(std::span<const Token> stmt) {
    struct Ctx {
        bool isF;
        bool afterComma;
        std::size_t open;
    };
    std::vector<LiteralRole> roles(stmt.size(), LiteralRole::Plain);
    std::vector<Ctx> stack;
    std::size_t fOpen = 0;
    for (std::size_t i = 0; i < stmt.size(); ++i) {
        const Token& t = stmt[i];
        if (isOpen(t)) {
            const bool isF = t.isPunct("(") && i > 0 && stmt[i - 1].is(TokenKind::Identifier, "F");
            stack.push_back({isF, false, i});
            fOpen += isF;
        } else if (isClose(t)) {
            if (!stack.empty()) {
                fOpen -= stack.back().isF;
                stack.pop_back();
            }
        } else if (t.isPunct(",")) {
            if (!stack.empty() && stack.back().isF) stack.back().afterComma = true;
        } else if (t.kind == TokenKind::IntLiteral && fOpen > 0) {
            const Ctx& in = stack.back();
            if (!in.isF) {
                roles[i] = LiteralRole::InsideF;
            } else if (in.afterComma) {
                roles[i] = LiteralRole::FDepth;
            } else if (i == in.open + 1 && i + 1 < stmt.size() && stmt[i + 1].isPunct("%")) {
                roles[i] = LiteralRole::FArgument;
            } else if (stmt[i - 1].isPunct("%")) {
                roles[i] = LiteralRole::FModulus;
            } else {
                roles[i] = LiteralRole::InsideF;
            }
        }
    }
    return roles;
}

std::string obfuscateStatement(const Document& doc, const Statement& stmt, const Classifier& symbols,
                               Hider& hider, PassCounts& counts) {
    const std::span<const Token> toks = doc.span(stmt);
    const std::size_t n = toks.size();
    const std::vector<LiteralRole> roles = literalRoles(toks);
    const std::int64_t bound = hider.config().maxMagnitude;

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < n; ++i) {
        if (toks[i].kind == TokenKind::IntLiteral &&
            (roles[i] == LiteralRole::Plain || roles[i] == LiteralRole::FArgument)) {
            eligible.push_back(i);
        }
    }

    std::vector<std::string> replacement(n);
    std::vector<bool> replaced(n, false);
    const auto hideAt = [&](std::size_t i) {
        const std::int64_t v = literalValue(toks[i], bound);
        if (roles[i] == LiteralRole::FArgument) {
            replacement[i] = parenthesized(hider.rehideLiteral(v));
            ++counts.literalsRehidden;
        } else {
            replacement[i] = parenthesized(hider.hideConstant(v));
            ++counts.constantsHidden;
        }
        replaced[i] = true;
    };

    // Multiplications by a hidden 1 around token ranges.
    struct Wrap {
        Range range;
        bool whole;  // lengthArray(): parenthesize the product itself
        std::string one;
    };
    std::vector<Wrap> wraps;
    const auto wrap = [&](Range r, bool whole) {
        wraps.push_back({r, whole, parenthesized(hider.hideConstant(1))});
        ++counts.hiddenOnesInserted;
    };

    if (stmt.kind == StatementKind::Other) {
        if (!eligible.empty()) hideAt(eligible.front());
    } else if (!eligible.empty()) {
        for (std::size_t i : eligible) hideAt(i);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const Token& t = toks[i];
            if (t.kind == TokenKind::Identifier && symbols.isArrayVariable(t.text) && i + 3 < n &&
                toks[i + 1].isPunct(".") && toks[i + 3].isPunct("(")) {
                const std::string& method = toks[i + 2].text;
                std::vector<Range> args = arguments(toks, i + 3);
                if (method == "getArray") {
                    for (Range r : args) wrap(r, false);
                } else if (method == "setArray") {
                    for (std::size_t a = 0; a + 1 < args.size(); ++a) wrap(args[a], false);
                } else if (method == "lengthArray" && args.empty()) {
                    wrap({i, matching(toks, i + 3)}, true);
                }
            } else if (t.is(TokenKind::Keyword, "new") && i + 1 < n &&
                       toks[i + 1].kind == TokenKind::Identifier && isCobsTypeName(toks[i + 1].text)) {
                const std::size_t open = skipGeneric(toks, i + 2);
                if (open < n && toks[open].isPunct("(")) {
                    for (Range r : arguments(toks, open)) wrap(r, false);
                }
            }
        }
    }

    std::vector<std::string> prefix(n);
    std::vector<std::string> suffix(n);
    // Outer wraps open first and close last.
    std::stable_sort(wraps.begin(), wraps.end(), [](const Wrap& a, const Wrap& b) {
        return a.range.last - a.range.first > b.range.last - b.range.first;
    });
    for (const Wrap& w : wraps) {
        if (w.whole) {
            prefix[w.range.first] += "(";
        } else if (w.range.first != w.range.last) {
            prefix[w.range.first] += "(";
        }
    }
    for (auto it = wraps.rbegin(); it != wraps.rend(); ++it) {
        const Wrap& w = *it;
        std::string& s = suffix[w.range.last];
        if (w.whole) {
            s += "*" + w.one + ")";
        } else if (w.range.first != w.range.last) {
            s += ")*" + w.one;
        } else {
            s += "*" + w.one;
        }
    }

    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) out += doc.gapBefore(stmt.begin + i);
        out += prefix[i];
        out += replaced[i] ? replacement[i] : toks[i].text;
        out += suffix[i];
    }
    return out;
}

RewriteResult obfuscatePass(std::string_view source, const ObfuscationConfig& cfg, std::uint64_t seed) {
    const Document doc = Document::preprocess(source);
    HidingConfig hiding = cfg.hiding;
    hiding.seed = seed;
    Hider hider(hiding);
    Classifier symbols;
    PassCounts counts;

    std::string out;
    out.reserve(source.size() * 2);
    // Statements of a user-level F definition are never rewritten: hiding a
    // constant inside F would make F call itself.
    bool inF = false;
    std::size_t fDepth = 0;
    for (const Statement& s : doc.statements) {
        const std::span<const Token> toks = doc.span(s);
        Statement st = s;
        st.kind = symbols.classify(toks);
        out += doc.gapBefore(s.begin);

        if (!inF && startsFDefinition(toks)) {
            inF = true;
            fDepth = s.depth;
        }
        if (inF) {
            for (std::size_t i = s.begin; i < s.end; ++i) {
                if (i > s.begin) out += doc.gapBefore(i);
                out += doc.tokens[i].text;
            }
            if (s.size() == 1 && toks[0].isPunct("}") && s.depth == fDepth) inF = false;
            continue;
        }

        const std::size_t before = counts.constantsHidden + counts.literalsRehidden +
                                   counts.hiddenOnesInserted;
        out += obfuscateStatement(doc, st, symbols, hider, counts);
        if (counts.constantsHidden + counts.literalsRehidden + counts.hiddenOnesInserted != before) {
            ++counts.statementsTouched;
        }
    }
    out += doc.trailing();

    RewriteResult result;
    result.text = std::move(out);
    result.report.add(counts);
    return result;
}

RewriteResult obfuscateProgram(std::string_view source, const ObfuscationConfig& cfg) {
    cfg.validate();
    if (cfg.mode == RewriteMode::MiniJ) minij::Program::parse(source);

    RewriteResult result;
    result.text = std::string(source);
    for (std::size_t p = 0; p < cfg.iterations; ++p) {
        RewriteResult pass = obfuscatePass(result.text, cfg, passSeed(cfg.hiding.seed, p));
        result.text = std::move(pass.text);
        result.report.add(pass.report.perIteration.front());
    }

    if (cfg.emitRuntime) {
        const Document doc = Document::preprocess(result.text);
        std::string prelude;
        if (!definesF(doc)) prelude += emitFRuntime(cfg.hiding.table) + "\n";
        if (!definesClass(doc, className(cfg.arrayKind))) prelude += emitCoBSSource(cfg.arrayKind, cfg) + "\n";
        result.text = prelude + result.text;
    }

    if (cfg.mode == RewriteMode::MiniJ) {
        try {
            minij::Program::parse(result.text);
        } catch (const Error& e) {
            throw RewriteError(std::string("rewritten program does not parse: ") + e.what());
        }
    } else {
        splitStatements(tokenize(result.text));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Runtime classes

namespace {

constexpr std::string_view kSplitTemplate = R"(class SplitArray {
    int[][] parts;
    int size;

    SplitArray(int n) {
        if (n < #0) { throw new NegativeArraySizeException(); }
        size = n;
        parts = new int[#K][];
        for (int j = #0; j < #K; j = j + #1) {
            if (j < n) {
                parts[j] = new int[(n - #1 - j) / #K + #1];
            } else {
                parts[j] = new int[#0];
            }
        }
    }

    public void setArray(int pos, int elem) {
        if (pos < #0 || pos >= size) { throw new IndexOutOfBoundsException(); }
        parts[pos % #K][pos / #K] = elem;
    }

    public int getArray(int pos) {
        if (pos < #0 || pos >= size) { throw new IndexOutOfBoundsException(); }
        return parts[pos % #K][pos / #K];
    }

    public int lengthArray() {
        int total = #0;
        for (int j = #0; j < parts.length; j = j + #1) {
            total = total + parts[j].length;
        }
        return total;
    }
}
)";

constexpr std::string_view kFoldTemplate = R"(class FoldedArray {
    int[][] grid;
    int size;

    FoldedArray(int n) {
        if (n < #0) { throw new NegativeArraySizeException(); }
        size = n;
        grid = new int[(n + #C - #1) / #C][#C];
    }

    public void setArray(int pos, int elem) {
        if (pos < #0 || pos >= size) { throw new IndexOutOfBoundsException(); }
        grid[pos / #C][pos % #C] = elem;
    }

    public int getArray(int pos) {
        if (pos < #0 || pos >= size) { throw new IndexOutOfBoundsException(); }
        return grid[pos / #C][pos % #C];
    }

    public int lengthArray() {
        return size;
    }
}
)";

constexpr std::string_view kFlattenTemplate = R"(class FlattenedArray {
    int[] flat;
    int rows;
    int cols;

    FlattenedArray(int r, int c) {
        if (r < #0 || c < #0) { throw new NegativeArraySizeException(); }
        rows = r;
        cols = c;
        flat = new int[r * c];
    }

    public void setArray(int row, int col, int elem) {
        if (row < #0 || row >= rows || col < #0 || col >= cols) { throw new IndexOutOfBoundsException(); }
        flat[row * cols + col] = elem;
    }

    public int getArray(int row, int col) {
        if (row < #0 || row >= rows || col < #0 || col >= cols) { throw new IndexOutOfBoundsException(); }
        return flat[row * cols + col];
    }

    public int lengthArray() {
        return flat.length;
    }
}
)";

// Salt separating the class-emission stream from the per-pass streams.
constexpr std::size_t kRuntimeStream = 0xC0B5;

}  // namespace

std::string emitCoBSSource(ArrayKind kind, const ObfuscationConfig& cfg) {
    cfg.validate();
    HidingConfig hiding = cfg.hiding;
    hiding.seed = passSeed(cfg.hiding.seed, kRuntimeStream + static_cast<std::size_t>(kind));
    Hider hider(hiding);

    const std::string_view tpl = kind == ArrayKind::Split  ? kSplitTemplate
                                 : kind == ArrayKind::Fold ? kFoldTemplate
                                                           : kFlattenTemplate;
    std::string out;
    for (std::size_t i = 0; i < tpl.size(); ++i) {
        if (tpl[i] != '#') {
            out += tpl[i];
            continue;
        }
        std::int64_t v = 0;
        if (tpl[i + 1] == 'K') {
            v = static_cast<std::int64_t>(cfg.k);
            ++i;
        } else if (tpl[i + 1] == 'C') {
            v = static_cast<std::int64_t>(cfg.cols);
            ++i;
        } else {
            while (i + 1 < tpl.size() && tpl[i + 1] >= '0' && tpl[i + 1] <= '9') {
                v = v * 10 + (tpl[++i] - '0');
            }
        }
        out += parenthesized(hider.hideConstant(v));
    }
    return out;
}

std::string emitRuntimePrelude(const ObfuscationConfig& cfg) {
    return emitFRuntime(cfg.hiding.table) + "\n" + emitCoBSSource(cfg.arrayKind, cfg) + "\n";
}

}  // namespace arrhide
