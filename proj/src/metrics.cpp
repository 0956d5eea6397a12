#include "arrhide/metrics.hpp"

#include <algorithm>
#include <chrono>

#include "json.hpp"

#include "arrhide/frontend.hpp"

namespace arrhide {

namespace {

struct Frame {
    bool isF;
    std::size_t maxInner;
    SourcePos pos;
};

bool isOpen(const Token& t) { return t.isPunct("(") || t.isPunct("[") || t.isPunct("{"); }
bool isClose(const Token& t) { return t.isPunct(")") || t.isPunct("]") || t.isPunct("}"); }

bool isFCall(const std::vector<Token>& toks, std::size_t i) {
    if (!toks[i].is(TokenKind::Identifier, "F") || i + 1 >= toks.size() || !toks[i + 1].isPunct("(")) {
        return false;
    }
    if (i == 0) return true;
    const Token& prev = toks[i - 1];
    return !prev.isPunct(".") && !(prev.kind == TokenKind::Keyword && (prev.text == "int" || prev.text == "long"));
}

}  // namespace

DepthHistogram countFCalls(std::string_view source) {
    const std::vector<Token> toks = tokenize(stripComments(source));
    DepthHistogram hist;
    std::vector<Frame> stack;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const Token& t = toks[i];
        if (isFCall(toks, i)) {
            stack.push_back({true, 0, t.pos});
            ++i;
        } else if (isOpen(t)) {
            stack.push_back({false, 0, t.pos});
        } else if (isClose(t)) {
            if (stack.empty()) continue;
            const Frame done = stack.back();
            stack.pop_back();
            std::size_t depth = done.maxInner;
            if (done.isF) {
                depth += 1;
                ++hist[depth];
            }
            if (!stack.empty()) stack.back().maxInner = std::max(stack.back().maxInner, depth);
        }
    }
    for (const Frame& f : stack) {
        if (f.isF) throw MetricError("unclosed F call", f.pos);
    }
    return hist;
}

std::size_t totalFCalls(const DepthHistogram& h) {
    std::size_t n = 0;
    for (const auto& [depth, count] : h) n += count;
    return n;
}

std::size_t maxFDepth(const DepthHistogram& h) { return h.empty() ? 0 : h.rbegin()->first; }

std::string MetricsReport::toJson() const {
    nlohmann::ordered_json depths = nlohmann::ordered_json::object();
    for (const auto& [depth, count] : fCallsByDepth) depths[std::to_string(depth)] = count;
    nlohmann::ordered_json j;
    j["fCallsByDepth"] = depths;
    j["totalStatements"] = totalStatements;
    j["byteSize"] = byteSize;
    j["steps"] = steps;
    j["wallTime"] = wallTime ? nlohmann::ordered_json(*wallTime) : nlohmann::ordered_json(nullptr);
    j["iteration"] = iteration;
    return j.dump();
}

MetricsReport measure(std::string_view source, std::size_t iteration, const MeasureOptions& opts) {
    MetricsReport r;
    r.fCallsByDepth = countFCalls(source);
    r.totalStatements = Document::preprocess(source).statements.size();
    r.byteSize = source.size();
    r.iteration = iteration;
    if (opts.execute) {
        const minij::Program program = minij::Program::parse(source);
        const auto start = std::chrono::steady_clock::now();
        const minij::ExecResult res = minij::execute(program, opts.exec);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        if (!res.ok()) throw MetricError("program failed: " + res.describeError(), res.errorPos);
        r.steps = res.steps;
        r.wallTime = elapsed.count();
    }
    return r;
}

std::vector<MetricsReport> sweep(std::string_view source, const ObfuscationConfig& cfg, std::size_t first,
                                 std::size_t last, const MeasureOptions& opts) {
    if (first > last) throw ConfigError("empty sweep range");
    std::vector<MetricsReport> reports;
    for (std::size_t i = first; i <= last; ++i) {
        if (i == 0) {
            reports.push_back(measure(source, 0, opts));
            continue;
        }
        ObfuscationConfig c = cfg;
        c.iterations = i;
        reports.push_back(measure(obfuscateProgram(source, c).text, i, opts));
    }
    return reports;
}

std::string CostSummary::toJson() const {
    nlohmann::ordered_json j;
    j["stepRatio"] = stepRatio;
    j["sizeRatio"] = sizeRatio;
    j["stdoutEqual"] = stdoutEqual;
    return j.dump();
}

CostSummary compareRuns(const RunSnapshot& original, const RunSnapshot& obfuscated) {
    if (!original.result.ok()) throw MetricError("original run failed: " + original.result.describeError());
    if (!obfuscated.result.ok()) throw MetricError("obfuscated run failed: " + obfuscated.result.describeError());
    const auto ratio = [](double a, double b) { return b == 0 ? (a == 0 ? 1.0 : a) : a / b; };
    CostSummary s;
    s.stepRatio = ratio(static_cast<double>(obfuscated.result.steps), static_cast<double>(original.result.steps));
    s.sizeRatio = ratio(static_cast<double>(obfuscated.byteSize), static_cast<double>(original.byteSize));
    s.stdoutEqual = original.result.out == obfuscated.result.out;
    return s;
}

}  // namespace arrhide
