// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "arrhide/arraylib.hpp"
#include "arrhide/cli.hpp"
#include "arrhide/consthide.hpp"
#include "arrhide/metrics.hpp"
#include "arrhide/minij.hpp"
#include "arrhide/rewriter.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace arrhide;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void fail(const std::string& why) {
        pass = false;
        if (failures.size() < 5) failures.push_back(why);
    }
};

const std::vector<std::int64_t> kDefaultPrimes = {5, 7, 11, 13, 17, 19, 23};

const std::vector<corpus::Program>& theCorpus() {
    static const std::vector<corpus::Program> programs = corpus::generate(18, 20240601);
    return programs;
}

std::filesystem::path scratchDir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() / ("arrhide_acceptance_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

ObfuscationConfig configFor(ArrayKind kind, std::size_t iterations, std::uint64_t seed) {
    ObfuscationConfig cfg;
    cfg.arrayKind = kind;
    cfg.iterations = iterations;
    cfg.hiding.seed = seed;
    return cfg;
}

// 1. Every corpus program passes `verify` for each array kind and iteration
//    count, with byte-exact stdout.
Outcome differentialEquivalence() {
    Outcome o;
    const auto& programs = theCorpus();
    std::size_t runs = 0;
    std::size_t maxSize = 0;
    std::set<std::string> kinds;
    std::set<std::string> loads;
    for (std::size_t p = 0; p < programs.size(); ++p) {
        const corpus::Program& prog = programs[p];
        maxSize = std::max(maxSize, prog.size);
        kinds.insert(std::string(toString(prog.kind)));
        loads.insert(corpus::name(prog.workload));
        const auto path = scratchDir() / (prog.name + ".mj");
        std::ofstream(path) << prog.source;
        for (const bool runtime : {false, true}) for (std::size_t it : {1, 2, 3, 5}) {
            std::vector<std::string> args = {"verify",  path.string(),       "--array",
                                             std::string(toString(prog.kind)), "--iterations",
                                             std::to_string(it), "--seed", std::to_string(1000 + p)};
            if (runtime) args.push_back("--emit-runtime");
            std::ostringstream out;
            std::ostringstream err;
            const int code = runCli(args, out, err);
            ++runs;
            if (code != 0) o.fail(prog.name + " iterations=" + std::to_string(it) + (runtime ? " with runtime" : "") + " exit " + std::to_string(code) + ": " + err.str());
        }
    }
    if (programs.size() < 50) o.fail("corpus has only " + std::to_string(programs.size()) + " programs");
    if (kinds.size() != 3 || loads.size() != 3) o.fail("corpus does not cover every kind and workload");
    if (maxSize < 100000) o.fail("largest array is below 10^5 elements");
    o.detail = std::to_string(programs.size()) + " programs, " + std::to_string(runs) +
               " verify runs, largest array " + std::to_string(maxSize);
    return o;
}

// 2. 10^4 random constants in [0, 10^9]: tree evaluation, textual reparse and
//    interpretation all give back the constant.
Outcome constantHiding() {
    Outcome o;
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<std::int64_t> dist(0, 1000000000);
    HidingConfig cfg;
    cfg.seed = 9;
    Hider hider(cfg);
    std::vector<std::int64_t> values;
    std::string program;
    for (int i = 0; i < 10000; ++i) {
        const std::int64_t c = i < 16 ? i : dist(gen);
        const HiddenExpr e = hider.hideConstant(c);
        const std::string text = renderExpr(e);
        if (evaluate(e, cfg.table) != c) o.fail("tree eval differs for " + std::to_string(c));
        if (maxAbsIntermediate(e, cfg.table) > kJavaIntMax) o.fail("intermediate beyond int range for " + std::to_string(c));
        try {
            if (oracle::evalExpression(text, kDefaultPrimes) != c) o.fail("reparse differs for " + std::to_string(c));
        } catch (const std::exception& ex) {
            o.fail("reparse failed for " + text + ": " + ex.what());
        }
        program += "print(" + text + ");\n";
        values.push_back(c);
    }
    std::string expected;
    for (std::int64_t v : values) expected += std::to_string(v) + "\n";
    const minij::ExecResult r = minij::run(program);
    if (!r.ok()) o.fail("interpreter: " + r.describeError());
    if (r.out != expected) o.fail("interpreted values differ");
    o.detail = "10000 constants, eval / reparse / interpret";
    return o;
}

// 3. Exhaustive bijection checks for sizes up to 512 and 10^5 randomized
//    container operations per kind against a flat reference array.
Outcome bijections() {
    Outcome o;
    std::size_t checked = 0;
    for (std::size_t k : {2, 3, 5}) {
        for (std::size_t size = 0; size <= 512; ++size) {
            std::vector<std::vector<bool>> seen(k);
            std::size_t total = 0;
            for (std::size_t j = 0; j < k; ++j) {
                seen[j].assign(partSize(size, k, j), false);
                total += partSize(size, k, j);
            }
            if (total != size) o.fail("split part sizes do not sum to " + std::to_string(size));
            for (std::size_t pos = 0; pos < size; ++pos) {
                const SplitSlot s = splitIndex(pos, k);
                if (s.part >= k || s.offset >= seen[s.part].size() || seen[s.part][s.offset]) {
                    o.fail("split not injective at " + std::to_string(pos));
                    continue;
                }
                seen[s.part][s.offset] = true;
                if (unsplitIndex(s, k) != pos) o.fail("split inverse fails at " + std::to_string(pos));
                ++checked;
            }
        }
    }
    for (std::size_t cols : {1, 4, 16}) {
        for (std::size_t size = 0; size <= 512; ++size) {
            const FoldLayout layout(size, cols);
            std::vector<bool> seen(layout.rows() * cols, false);
            for (std::size_t i = 0; i < size; ++i) {
                const Cell c = foldIndex(i, cols);
                const std::size_t flat = c.row * cols + c.col;
                if (c.row >= layout.rows() || c.col >= cols || seen[flat]) {
                    o.fail("fold not injective at " + std::to_string(i));
                    continue;
                }
                seen[flat] = true;
                if (unfoldIndex(c.row, c.col, cols) != i) o.fail("fold inverse fails at " + std::to_string(i));
                ++checked;
            }
        }
        for (std::size_t rows = 0; rows * cols <= 512; ++rows) {
            std::vector<bool> seen(rows * cols, false);
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < cols; ++c) {
                    const std::size_t f = flattenIndex(r, c, cols);
                    if (f >= seen.size() || seen[f]) {
                        o.fail("flatten not a bijection at " + std::to_string(r) + "," + std::to_string(c));
                        continue;
                    }
                    seen[f] = true;
                    const Cell back = foldIndex(f, cols);
                    if (back.row != r || back.col != c) o.fail("flatten/fold round trip fails");
                    ++checked;
                }
            }
        }
    }

    std::mt19937_64 gen(3);
    for (ArrayKind kind : {ArrayKind::Split, ArrayKind::Fold, ArrayKind::Flatten}) {
        const std::size_t rows = 37;
        const std::size_t cols = 29;
        const std::size_t n = kind == ArrayKind::Flatten ? rows * cols : 1009;
        std::vector<std::int64_t> ref(n, 0);
        SplitArray<std::int64_t> split(n, 3);
        FoldedArray<std::int64_t> fold(n, 16);
        FlattenedArray<std::int64_t> flat(rows, cols);
        std::vector<std::int64_t> dims = kind == ArrayKind::Flatten ? std::vector<std::int64_t>{37, 29}
                                                                    : std::vector<std::int64_t>{static_cast<std::int64_t>(n)};
        IntContainer box = IntContainer::make(kind, dims, {3, 16});
        for (int op = 0; op < 100000; ++op) {
            // About one operation in fifty is out of bounds.
            const std::int64_t pos = static_cast<std::int64_t>(gen() % (n + n / 50)) - static_cast<std::int64_t>(n / 100);
            const bool inBounds = pos >= 0 && pos < static_cast<std::int64_t>(n);
            const std::int64_t r = pos / static_cast<std::int64_t>(cols);
            const std::int64_t c = pos % static_cast<std::int64_t>(cols);
            const bool write = gen() % 2 == 0;
            const std::int64_t value = static_cast<std::int64_t>(gen() % 2000001) - 1000000;
            std::int64_t got = 0;
            std::int64_t boxed = 0;
            bool threw = false;
            bool boxThrew = false;
            const std::array<std::int64_t, 1> idx1{pos};
            const std::array<std::int64_t, 2> idx2{r, c};
            const std::span<const std::int64_t> index = kind == ArrayKind::Flatten
                                                            ? std::span<const std::int64_t>(idx2)
                                                            : std::span<const std::int64_t>(idx1);
            try {
                switch (kind) {
                    case ArrayKind::Split:
                        if (write) split.set(pos, value); else got = split.get(pos);
                        break;
                    case ArrayKind::Fold:
                        if (write) fold.set(pos, value); else got = fold.get(pos);
                        break;
                    case ArrayKind::Flatten:
                        if (write) flat.set(r, c, value); else got = flat.get(r, c);
                        break;
                }
            } catch (const BoundsError&) {
                threw = true;
            }
            try {
                if (write) box.set(index, value); else boxed = box.get(index);
            } catch (const BoundsError&) {
                boxThrew = true;
            }
            if (threw != !inBounds || boxThrew != !inBounds) {
                o.fail(std::string(toString(kind)) + ": bounds behaviour differs at " + std::to_string(pos));
                continue;
            }
            if (!inBounds) continue;
            if (write) {
                ref[static_cast<std::size_t>(pos)] = value;
            } else if (got != ref[static_cast<std::size_t>(pos)] || boxed != got) {
                o.fail(std::string(toString(kind)) + ": read differs at " + std::to_string(pos));
            }
        }
        const std::size_t len = kind == ArrayKind::Split ? split.length() : kind == ArrayKind::Fold ? fold.length() : flat.length();
        if (len != n || box.length() != n) o.fail(std::string(toString(kind)) + ": length differs");
    }
    o.detail = std::to_string(checked) + " index placements, 3x100000 container ops";
    return o;
}

// 4. Size strictly grows and steps never shrink from iteration 1 to 5; after n
//    passes the deepest F call has depth n.
struct IterationRecord {
    std::string text;
    std::uint64_t steps = 0;
};
std::vector<std::vector<IterationRecord>>& iterationCache() {
    static std::vector<std::vector<IterationRecord>> cache;
    return cache;
}

Outcome growth() {
    Outcome o;
    auto& cache = iterationCache();
    cache.clear();
    std::size_t depthChecked = 0;
    for (std::size_t p = 0; p < theCorpus().size(); ++p) {
        const corpus::Program& prog = theCorpus()[p];
        std::vector<IterationRecord> records;
        std::size_t firstPassPlain = 0;
        for (std::size_t it = 1; it <= 5; ++it) {
            const RewriteResult r = obfuscateProgram(prog.source, configFor(prog.kind, it, 500 + p));
            if (it == 1) firstPassPlain = r.report.perIteration.front().constantsHidden;
            const minij::ExecResult run = minij::run(r.text);
            if (!run.ok()) o.fail(prog.name + " iteration " + std::to_string(it) + ": " + run.describeError());
            records.push_back({r.text, run.steps});
            const DepthHistogram h = countFCalls(r.text);
            if (firstPassPlain > 0) {
                if (maxFDepth(h) != it) {
                    o.fail(prog.name + ": max depth " + std::to_string(maxFDepth(h)) + " after " + std::to_string(it) + " passes");
                }
                ++depthChecked;
            }
            if (it > 1) {
                const IterationRecord& prev = records[it - 2];
                if (r.text.size() <= prev.text.size()) o.fail(prog.name + ": size did not grow at iteration " + std::to_string(it));
                if (run.steps < prev.steps) o.fail(prog.name + ": steps decreased at iteration " + std::to_string(it));
            }
        }
        cache.push_back(std::move(records));
    }
    o.detail = std::to_string(theCorpus().size()) + " programs x 5 iterations, " + std::to_string(depthChecked) +
               " depth checks";
    return o;
}

// 5. The rules on the three-line snippet, checked by evaluation and pattern.
Outcome ruleConformance() {
    Outcome o;
    const std::string snippet =
        "int i = 3;\n"
        "int n = 7;\n"
        "int y = 0;\n"
        "int x = 0;\n"
        "SplitArray<Integer>ar=new SplitArray<Integer>\n(10000);\n"
        "ar.setArray(i,(3*i + 1000) % n);\n"
        "y = ar.getArray(i);\n"
        "n = ar.lengthArray();\n"
        "x = 5 + 7 + 9;\n"
        "print(y);\nprint(n);\nprint(x);\n";
    ObfuscationConfig cfg = configFor(ArrayKind::Split, 1, 11);
    const std::string once = obfuscateProgram(snippet, cfg).text;
    const auto eval = [&](const std::string& e) { return oracle::evalExpression(e, kDefaultPrimes); };

    // Captures a balanced parenthesized group starting at text[open] == '('.
    const auto group = [](const std::string& text, std::size_t open) {
        int depth = 0;
        for (std::size_t i = open; i < text.size(); ++i) {
            if (text[i] == '(') ++depth;
            if (text[i] == ')' && --depth == 0) return text.substr(open, i - open + 1);
        }
        return std::string();
    };

    // (a) index multiplier evaluating to 1
    const std::size_t get = once.find("y = ar.getArray(i*");
    if (get == std::string::npos) {
        o.fail("getArray index not multiplied");
    } else {
        const std::string e = group(once, get + std::string("y = ar.getArray(i*").size());
        if (e.empty() || eval(e) != 1) o.fail("getArray multiplier does not evaluate to 1");
        if (once.compare(get + 18 + e.size(), 2, ");") != 0) o.fail("getArray rewrite has unexpected shape");
    }
    // (b) lengthArray()*1
    const std::size_t len = once.find("n = (ar.lengthArray()*");
    if (len == std::string::npos) {
        o.fail("lengthArray not multiplied");
    } else {
        const std::string e = group(once, len + std::string("n = (ar.lengthArray()*").size());
        if (e.empty() || eval(e) != 1) o.fail("lengthArray multiplier does not evaluate to 1");
    }
    // (c) only the first literal of a non-candidate statement
    const std::regex firstOnly(R"(x = (\(.*\)) \+ 7 \+ 9;)");
    std::smatch m;
    if (!std::regex_search(once, m, firstOnly) || eval(m[1].str()) != 5) {
        o.fail("non-candidate statement is not first-literal only");
    }
    // Candidate statements: every literal hidden.
    const std::size_t decl = once.find("SplitArray<Integer>ar=new SplitArray<Integer>\n(");
    if (decl == std::string::npos || eval(group(once, decl + std::string("SplitArray<Integer>ar=new SplitArray<Integer>\n").size())) != 10000) {
        o.fail("declaration size not hidden");
    }
    const std::size_t setLine = once.find("ar.setArray(");
    const std::string setText = once.substr(setLine, once.find('\n', setLine) - setLine);
    const std::string setBare = std::regex_replace(setText, std::regex(R"(F\(\d+%\d+,\d+\))"), "F");
    if (oracle::countDecimalLiterals(setBare) != 0) o.fail("setArray literal left bare");

    // (d) the second pass keeps every (%Q, k) tail of the first pass
    ObfuscationConfig twice = configFor(ArrayKind::Split, 2, 11);
    const std::string second = obfuscateProgram(snippet, twice).text;
    const std::regex tail(R"(%(\d+),(\d+)\))");
    std::vector<std::string> before;
    for (auto it = std::sregex_iterator(once.begin(), once.end(), tail); it != std::sregex_iterator(); ++it) {
        before.push_back(it->str());
    }
    std::size_t matched = 0;
    for (auto it = std::sregex_iterator(second.begin(), second.end(), tail);
         it != std::sregex_iterator() && matched < before.size(); ++it) {
        if (it->str() == before[matched]) ++matched;
    }
    if (before.empty() || matched != before.size()) o.fail("re-obfuscation changed F depth or modulus literals");
    if (maxFDepth(countFCalls(second)) != 2) o.fail("second pass did not nest F");

    const minij::ExecResult plain = minij::run(snippet);
    for (const std::string& text : {once, second}) {
        const minij::ExecResult r = minij::run(text);
        if (!r.ok() || r.out != plain.out) o.fail("rewritten snippet prints differently");
    }
    o.detail = "index multiplier, lengthArray multiplier, first-literal rule, re-obfuscation tails";
    return o;
}

// 6. countFCalls agrees with the character-level recount on every output.
Outcome counterCrossCheck() {
    Outcome o;
    if (iterationCache().empty()) growth();
    std::size_t files = 0;
    std::size_t sites = 0;
    for (const auto& records : iterationCache()) {
        for (const IterationRecord& r : records) {
            const DepthHistogram mine = countFCalls(r.text);
            const auto theirs = oracle::recountFCalls(r.text);
            if (DepthHistogram(theirs.begin(), theirs.end()) != mine) o.fail("histograms differ");
            sites += totalFCalls(mine);
            ++files;
        }
    }
    // Outputs carrying the runtime prelude, whose F definition must not count.
    for (std::size_t p = 0; p < theCorpus().size(); p += 6) {
        ObfuscationConfig cfg = configFor(theCorpus()[p].kind, 2, p);
        cfg.emitRuntime = true;
        const std::string text = obfuscateProgram(theCorpus()[p].source, cfg).text;
        const auto theirs = oracle::recountFCalls(text);
        if (DepthHistogram(theirs.begin(), theirs.end()) != countFCalls(text)) o.fail("histograms differ with runtime prelude");
        ++files;
    }
    o.detail = std::to_string(files) + " files, " + std::to_string(sites) + " call sites";
    return o;
}

// 7. Emitted classes and the emitted F agree with the library.
Outcome emittedRuntime() {
    Outcome o;
    for (ArrayKind kind : {ArrayKind::Split, ArrayKind::Fold, ArrayKind::Flatten}) {
        ObfuscationConfig cfg;
        cfg.k = 3;
        cfg.cols = 8;
        cfg.arrayKind = kind;
        const std::size_t rows = 23;
        const std::size_t cols = 17;
        const std::size_t n = kind == ArrayKind::Flatten ? rows * cols : 389;
        std::vector<std::int64_t> dims = kind == ArrayKind::Flatten ? std::vector<std::int64_t>{23, 17}
                                                                    : std::vector<std::int64_t>{static_cast<std::int64_t>(n)};
        IntContainer ref = IntContainer::make(kind, dims, {3, 8});

        std::ostringstream prog;
        prog << emitFRuntime(cfg.hiding.table) << "\n" << emitCoBSSource(kind, cfg) << "\n";
        prog << className(kind) << " a = new " << className(kind);
        if (kind == ArrayKind::Flatten) {
            prog << "(" << rows << ", " << cols << ");\n";
        } else {
            prog << "(" << n << ");\n";
        }
        prog << "print(a.lengthArray());\n";
        std::string expected = std::to_string(ref.length()) + "\n";
        std::mt19937_64 gen(kind == ArrayKind::Split ? 1 : kind == ArrayKind::Fold ? 2 : 3);
        for (int op = 0; op < 10000; ++op) {
            const std::int64_t pos = static_cast<std::int64_t>(gen() % n);
            const std::int64_t r = pos / static_cast<std::int64_t>(cols);
            const std::int64_t c = pos % static_cast<std::int64_t>(cols);
            const std::array<std::int64_t, 1> idx1{pos};
            const std::array<std::int64_t, 2> idx2{r, c};
            const std::span<const std::int64_t> index = kind == ArrayKind::Flatten
                                                            ? std::span<const std::int64_t>(idx2)
                                                            : std::span<const std::int64_t>(idx1);
            const std::string args = kind == ArrayKind::Flatten ? std::to_string(r) + ", " + std::to_string(c)
                                                                : std::to_string(pos);
            if (gen() % 2 == 0) {
                const std::int64_t v = static_cast<std::int64_t>(gen() % 100000);
                ref.set(index, v);
                prog << "a.setArray(" << args << ", " << v << ");\n";
            } else {
                expected += std::to_string(ref.get(index)) + "\n";
                prog << "print(a.getArray(" << args << "));\n";
            }
        }
        const minij::ExecResult res = minij::run(prog.str());
        if (!res.ok()) o.fail(std::string(toString(kind)) + ": " + res.describeError());
        if (res.out != expected) o.fail(std::string(toString(kind)) + ": emitted class output differs");
        const std::string cls = emitCoBSSource(kind, cfg);
        if (oracle::countDecimalLiterals(cls) != 0) {
            // Every literal left must sit inside an F call; strip F calls and recount.
            std::string bare = cls;
            const std::regex fcall(R"(F\(\d+%\d+,\d+\))");
            bare = std::regex_replace(bare, fcall, "F");
            if (oracle::countDecimalLiterals(bare) != 0) o.fail(std::string(toString(kind)) + ": bare literal in class");
        }
    }

    // F runtime versus evalF on 10^6 sampled pairs.
    const YFactorTable table = YFactorTable::defaults();
    const std::size_t pairs = 1000000;
    std::ostringstream prog;
    prog << emitFRuntime(table) << "\n";
    prog << "int s = 12345;\n"
            "long acc = 0;\n"
            "for (int t = 0; t < " << pairs << "; t = t + 1) {\n"
            "    s = (1103515245 * s + 12345) % 2147483648;\n"
            "    int a = s;\n"
            "    if (t % 2 == 0) { a = s % 1000001; }\n"
            "    int k = (s / 7) % " << table.size() << ";\n"
            "    acc = acc * 31 + F(a, k);\n"
            "    acc = acc % 1000000007;\n"
            "    if (t % 100000 == 99999) { print(acc); }\n"
            "}\n";
    std::string expected;
    oracle::Lcg lcg(12345);
    std::int64_t acc = 0;
    for (std::size_t t = 0; t < pairs; ++t) {
        const std::int64_t s = static_cast<std::int64_t>(lcg.next());
        const std::int64_t a = t % 2 == 0 ? s % 1000001 : s;
        const std::size_t k = static_cast<std::size_t>((s / 7) % static_cast<std::int64_t>(table.size()));
        acc = (acc * 31 + evalF(a, k, table)) % 1000000007;
        if (t % 100000 == 99999) expected += std::to_string(acc) + "\n";
    }
    const minij::ExecResult res = minij::run(prog.str());
    if (!res.ok()) o.fail("F runtime: " + res.describeError());
    if (res.out != expected) o.fail("emitted F disagrees with evalF");
    o.detail = "3 kinds x 10000 ops, 1000000 F pairs";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "differential equivalence", differentialEquivalence},
        {2, "constant-hiding oracle", constantHiding},
        {3, "bijection suite", bijections},
        {4, "re-obfuscation growth", growth},
        {5, "rule conformance", ruleConformance},
        {6, "F-call counter cross-validation", counterCrossCheck},
        {7, "emitted-runtime equivalence", emittedRuntime},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const std::chrono::duration<double> secs = std::chrono::steady_clock::now() - start;
        std::printf("[%s] criterion %d: %s (%s; %.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(),
                    secs.count());
        for (const std::string& f : o.failures) std::printf("       %s\n", f.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::filesystem::remove_all(scratchDir());
    return failed == 0 ? 0 : 1;
}
