#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "arrhide/cli.hpp"
#include "arrhide/metrics.hpp"
#include "json.hpp"

namespace arrhide {

minij::ExecOptions execOptionsFor(const ObfuscationConfig& cfg) {
    minij::ExecOptions exec;
    exec.table = cfg.hiding.table;
    exec.layout.k = cfg.k;
    exec.layout.cols = cfg.cols;
    return exec;
}

VerifyOutcome verifyProgram(std::string_view source, const ObfuscationConfig& cfg, const TamperHook& tamper) {
    const minij::ExecOptions exec = execOptionsFor(cfg);
    VerifyOutcome v;
    v.original = minij::run(source, exec);
    v.rewrite = obfuscateProgram(source, cfg);
    std::string text = v.rewrite.text;
    if (tamper) tamper(text);
    v.obfuscated = minij::run(text, exec);
    return v;
}

std::string reportJson(const RewriteReport& report) {
    const auto counts = [](const auto& c) {
        nlohmann::ordered_json j;
        j["constantsHidden"] = c.constantsHidden;
        j["literalsRehidden"] = c.literalsRehidden;
        j["hiddenOnesInserted"] = c.hiddenOnesInserted;
        j["statementsTouched"] = c.statementsTouched;
        return j;
    };
    nlohmann::ordered_json j = counts(report);
    j["perIteration"] = nlohmann::ordered_json::array();
    for (const PassCounts& p : report.perIteration) j["perIteration"].push_back(counts(p));
    return j.dump();
}

namespace {

struct UsageError : Error {
    using Error::Error;
};

struct Settings {
    std::string input;
    std::uint64_t seed = 42;
    std::size_t iterations = 1;
    std::string array = "split";
    std::size_t k = 2;
    std::size_t cols = 16;
    std::string table;
    bool emitRuntime = false;
    std::string mode = "minij";
    std::string out;
    std::string report;
    std::string sweep;
    bool staticOnly = false;
};

void addCommon(CLI::App* sub, Settings& s) {
    sub->add_option("input", s.input, "Input source file")->required();
    sub->add_option("--seed", s.seed, "Random seed")->capture_default_str();
    sub->add_option("--iterations", s.iterations, "Obfuscation passes")->capture_default_str();
    sub->add_option("--array", s.array, "split, fold or flatten")->capture_default_str();
    sub->add_option("--k", s.k, "Parts of a split array")->capture_default_str();
    sub->add_option("--cols", s.cols, "Columns of a folded array")->capture_default_str();
    sub->add_option("--table", s.table, "Comma separated y-factor primes");
    sub->add_flag("--emit-runtime", s.emitRuntime, "Prepend F and the array class");
    sub->add_option("--mode", s.mode, "minij or textual")->capture_default_str();
    sub->add_option("--out", s.out, "Output file");
    sub->add_option("--report", s.report, "Report file");
}

ObfuscationConfig toConfig(const Settings& s) {
    ObfuscationConfig cfg;
    cfg.hiding.seed = s.seed;
    if (!s.table.empty()) cfg.hiding.table = YFactorTable::parse(s.table);
    cfg.iterations = s.iterations;
    cfg.arrayKind = parseArrayKind(s.array);
    cfg.k = s.k;
    cfg.cols = s.cols;
    cfg.emitRuntime = s.emitRuntime;
    cfg.mode = parseRewriteMode(s.mode);
    cfg.validate();
    return cfg;
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void writeFile(const std::string& path, std::string_view text) {
    std::ofstream o(path, std::ios::binary);
    if (!o || !o.write(text.data(), static_cast<std::streamsize>(text.size()))) {
        throw UsageError("cannot write " + path);
    }
}

// `text` goes to --report when given, otherwise to `fallback`.
void emitReport(const Settings& s, const std::string& text, std::ostream& fallback) {
    if (s.report.empty()) {
        fallback << text;
    } else {
        writeFile(s.report, text);
    }
}

std::pair<std::size_t, std::size_t> parseRange(const std::string& text) {
    const std::size_t dots = text.find("..");
    try {
        if (dots == std::string::npos) throw std::invalid_argument(text);
        std::size_t used = 0;
        const std::string a = text.substr(0, dots);
        const std::string b = text.substr(dots + 2);
        const unsigned long first = std::stoul(a, &used);
        if (used != a.size()) throw std::invalid_argument(text);
        const unsigned long last = std::stoul(b, &used);
        if (used != b.size() || first > last) throw std::invalid_argument(text);
        return {first, last};
    } catch (const std::logic_error&) {
        throw UsageError("--sweep expects a range such as 1..5, got '" + text + "'");
    }
}

int cmdObfuscate(const Settings& s, std::ostream& out, std::ostream& err) {
    const ObfuscationConfig cfg = toConfig(s);
    const RewriteResult r = obfuscateProgram(readFile(s.input), cfg);
    if (s.out.empty()) {
        out << r.text;
        emitReport(s, reportJson(r.report) + "\n", err);
    } else {
        writeFile(s.out, r.text);
        emitReport(s, reportJson(r.report) + "\n", out);
    }
    return kExitOk;
}

int cmdRun(const Settings& s, std::ostream& out, std::ostream& err) {
    const ObfuscationConfig cfg = toConfig(s);
    if (cfg.mode != RewriteMode::MiniJ) throw UsageError("run requires --mode minij");
    const minij::ExecResult res = minij::run(readFile(s.input), execOptionsFor(cfg));
    if (s.out.empty()) {
        out << res.out;
    } else {
        writeFile(s.out, res.out);
    }
    nlohmann::ordered_json j;
    j["steps"] = res.steps;
    j["status"] = res.ok() ? "ok" : "runtime-error";
    emitReport(s, j.dump() + "\n", err);
    if (!res.ok()) {
        err << s.input << ":" << res.describeError() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int cmdVerify(const Settings& s, std::ostream& out, std::ostream& err, const TamperHook& tamper) {
    const ObfuscationConfig cfg = toConfig(s);
    if (cfg.mode != RewriteMode::MiniJ) throw UsageError("verify requires --mode minij");
    const std::string source = readFile(s.input);
    const VerifyOutcome v = verifyProgram(source, cfg, tamper);
    if (!s.out.empty()) writeFile(s.out, v.rewrite.text);
    if (!v.original.ok()) {
        err << s.input << ":" << v.original.describeError() << "\n";
        return kExitRuntime;
    }
    nlohmann::ordered_json j;
    j["equivalent"] = v.equivalent();
    if (v.obfuscated.ok()) {
        const CostSummary c = compareRuns({v.original, source.size()}, {v.obfuscated, v.rewrite.text.size()});
        j["stdoutEqual"] = c.stdoutEqual;
        j["stepRatio"] = c.stepRatio;
        j["sizeRatio"] = c.sizeRatio;
    } else {
        j["stdoutEqual"] = false;
        j["obfuscatedError"] = v.obfuscated.describeError();
    }
    j["originalSteps"] = v.original.steps;
    j["obfuscatedSteps"] = v.obfuscated.steps;
    j["rewrite"] = nlohmann::ordered_json::parse(reportJson(v.rewrite.report));
    emitReport(s, j.dump() + "\n", out);
    if (!v.equivalent()) {
        err << "verification failed: "
            << (v.obfuscated.ok() ? "stdout differs" : "obfuscated program failed: " + v.obfuscated.describeError())
            << "\n";
        return kExitMismatch;
    }
    return kExitOk;
}

int cmdMetrics(const Settings& s, std::ostream& out) {
    const ObfuscationConfig cfg = toConfig(s);
    const std::string source = readFile(s.input);
    MeasureOptions opts;
    opts.execute = !s.staticOnly && cfg.mode == RewriteMode::MiniJ;
    opts.exec = execOptionsFor(cfg);

    std::vector<MetricsReport> reports;
    if (s.sweep.empty()) {
        reports.push_back(measure(source, 0, opts));
    } else {
        const auto [first, last] = parseRange(s.sweep);
        reports = sweep(source, cfg, first, last, opts);
    }
    std::string text;
    for (const MetricsReport& r : reports) text += r.toJson() + "\n";
    if (!s.out.empty()) {
        writeFile(s.out, text);
    } else {
        emitReport(s, text, out);
    }
    return kExitOk;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const TamperHook& tamper) {
    CLI::App app("Source-level array and constant obfuscator for Java-like programs", "arrhide");
    app.require_subcommand(1);
    Settings s;
    CLI::App* obf = app.add_subcommand("obfuscate", "Write the obfuscated program");
    CLI::App* run = app.add_subcommand("run", "Interpret a MiniJ program");
    CLI::App* ver = app.add_subcommand("verify", "Obfuscate and compare both runs");
    CLI::App* met = app.add_subcommand("metrics", "F-call depth, size and cost report");
    for (CLI::App* sub : {obf, run, ver, met}) addCommon(sub, s);
    met->add_option("--sweep", s.sweep, "Iteration range, e.g. 1..5");
    met->add_flag("--static", s.staticOnly, "Skip execution");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*obf) return cmdObfuscate(s, out, err);
        if (*run) return cmdRun(s, out, err);
        if (*ver) return cmdVerify(s, out, err, tamper);
        return cmdMetrics(s, out);
    } catch (const LexError& e) {
        err << s.input << ":" << e.what() << "\n";
        return kExitParse;
    } catch (const ParseError& e) {
        err << s.input << ":" << e.what() << "\n";
        return kExitParse;
    } catch (const RewriteError& e) {
        err << s.input << ":" << e.what() << "\n";
        return kExitParse;
    } catch (const MetricError& e) {
        err << s.input << ":" << e.what() << "\n";
        return kExitRuntime;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace arrhide
