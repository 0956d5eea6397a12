#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arrhide/cli.hpp"
#include "arrhide/metrics.hpp"

namespace py = pybind11;
using namespace arrhide;

namespace {

YFactorTable tableFrom(const std::string& csv) {
    return csv.empty() ? YFactorTable::defaults() : YFactorTable::parse(csv);
}

ObfuscationConfig configFrom(std::uint64_t seed, std::size_t iterations, const std::string& array, std::size_t k,
                             std::size_t cols, const std::string& table, bool emitRuntime, const std::string& mode) {
    ObfuscationConfig cfg;
    cfg.hiding.seed = seed;
    cfg.hiding.table = tableFrom(table);
    cfg.iterations = iterations;
    cfg.arrayKind = parseArrayKind(array);
    cfg.k = k;
    cfg.cols = cols;
    cfg.emitRuntime = emitRuntime;
    cfg.mode = parseRewriteMode(mode);
    cfg.validate();
    return cfg;
}

py::dict execDict(const minij::ExecResult& r) {
    py::dict d;
    d["stdout"] = r.out;
    d["steps"] = r.steps;
    d["ok"] = r.ok();
    d["error"] = r.ok() ? py::object(py::none()) : py::object(py::str(r.describeError()));
    return d;
}

#define ARRHIDE_CONFIG_ARGS                                                                              \
    py::arg("seed") = 42, py::arg("iterations") = 1, py::arg("array") = "split", py::arg("k") = 2,      \
        py::arg("cols") = 16, py::arg("table") = "", py::arg("emit_runtime") = false, py::arg("mode") = "minij"

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Array restructuring and constant hiding for Java-like source";

    py::register_exception<Error>(m, "Error");

    m.def(
        "hide_constant",
        [](std::int64_t c, std::uint64_t seed, const std::string& table) {
            HidingConfig cfg;
            cfg.seed = seed;
            cfg.table = tableFrom(table);
            return renderExpr(hideConstant(c, cfg));
        },
        py::arg("c"), py::arg("seed") = 42, py::arg("table") = "", "Hiding expression for c, as source text");

    m.def(
        "eval_f", [](std::int64_t a, std::int64_t k, const std::string& table) { return evalF(a, k, tableFrom(table)); },
        py::arg("a"), py::arg("k"), py::arg("table") = "");

    m.def(
        "obfuscate",
        [](const std::string& source, std::uint64_t seed, std::size_t iterations, const std::string& array,
           std::size_t k, std::size_t cols, const std::string& table, bool emitRuntime, const std::string& mode) {
            const RewriteResult r =
                obfuscateProgram(source, configFrom(seed, iterations, array, k, cols, table, emitRuntime, mode));
            return py::make_tuple(r.text, py::module_::import("json").attr("loads")(reportJson(r.report)));
        },
        py::arg("source"), ARRHIDE_CONFIG_ARGS, "Returns (text, report)");

    m.def(
        "run",
        [](const std::string& source, std::size_t k, std::size_t cols, const std::string& table) {
            minij::ExecOptions exec;
            exec.table = tableFrom(table);
            exec.layout.k = k;
            exec.layout.cols = cols;
            return execDict(minij::run(source, exec));
        },
        py::arg("source"), py::arg("k") = 2, py::arg("cols") = 16, py::arg("table") = "");

    m.def(
        "verify",
        [](const std::string& source, std::uint64_t seed, std::size_t iterations, const std::string& array,
           std::size_t k, std::size_t cols, const std::string& table, bool emitRuntime, const std::string& mode) {
            const VerifyOutcome v =
                verifyProgram(source, configFrom(seed, iterations, array, k, cols, table, emitRuntime, mode));
            py::dict d;
            d["equivalent"] = v.equivalent();
            d["original"] = execDict(v.original);
            d["obfuscated"] = execDict(v.obfuscated);
            d["text"] = v.rewrite.text;
            return d;
        },
        py::arg("source"), ARRHIDE_CONFIG_ARGS);

    m.def(
        "count_f_calls",
        [](const std::string& source) {
            py::dict d;
            for (const auto& [depth, n] : countFCalls(source)) d[py::int_(depth)] = n;
            return d;
        },
        py::arg("source"), "F call sites per nesting depth");

    m.def(
        "emit_runtime",
        [](const std::string& array, std::uint64_t seed, std::size_t k, std::size_t cols, const std::string& table) {
            return emitRuntimePrelude(configFrom(seed, 1, array, k, cols, table, true, "minij"));
        },
        py::arg("array") = "split", py::arg("seed") = 42, py::arg("k") = 2, py::arg("cols") = 16,
        py::arg("table") = "");
}
