#include "corpus.hpp"

#include <algorithm>
#include <sstream>

#include "oracles.hpp"

namespace corpus {

using arrhide::ArrayKind;

const char* name(Workload w) {
    switch (w) {
        case Workload::SequentialFill: return "fill";
        case Workload::RandomRead: return "read";
        case Workload::MixedReadWrite: return "mixed";
    }
    return "?";
}

namespace {

// Expressions for the container operations on logical index `idx`.
struct Access {
    ArrayKind kind;
    std::size_t cols;

    std::string decl(std::size_t size) const {
        std::ostringstream o;
        switch (kind) {
            case ArrayKind::Split:
                o << "SplitArray<Integer> a = new SplitArray<Integer>(n);";
                break;
            case ArrayKind::Fold:
                o << "FoldedArray a = new FoldedArray(n);";
                break;
            case ArrayKind::Flatten:
                o << "FlattenedArray a = new FlattenedArray(n / " << cols << ", " << cols << ");";
                break;
        }
        (void)size;
        return o.str();
    }
    std::string set(const std::string& idx, const std::string& value) const {
        if (kind == ArrayKind::Flatten) {
            return "a.setArray(" + idx + " / " + std::to_string(cols) + ", " + idx + " % " + std::to_string(cols) +
                   ", " + value + ");";
        }
        return "a.setArray(" + idx + ", " + value + ");";
    }
    std::string get(const std::string& idx) const {
        if (kind == ArrayKind::Flatten) {
            return "a.getArray(" + idx + " / " + std::to_string(cols) + ", " + idx + " % " + std::to_string(cols) + ")";
        }
        return "a.getArray(" + idx + ")";
    }
};

}  // namespace

Program makeProgram(ArrayKind kind, Workload workload, std::size_t size, std::size_t ops, std::uint64_t seed) {
    oracle::Lcg rng(seed);
    const std::size_t cols = kind == ArrayKind::Flatten ? 1 + rng.below(50) : 0;
    if (kind == ArrayKind::Flatten) size = std::max(size / cols, std::size_t{1}) * cols;
    if (ops > size) ops = size;
    const Access acc{kind, cols};
    const std::uint64_t mul = 2 + rng.below(9);
    const std::uint64_t add = rng.below(5);
    const std::uint64_t bias = rng.below(1000000);

    std::ostringstream o;
    o << "// " << arrhide::toString(kind) << " " << name(workload) << " n=" << size << "\n";
    o << "int A = 1103515245;\n";
    o << "int C = 12345;\n";
    o << "int M = 2147483647 + 1;\n";
    o << "int seed = " << rng.below(2147483647) << ";\n";
    o << "int n = " << size << ";\n";
    o << "int ops = " << ops << ";\n";
    o << "int bias = " << bias << ";\n";
    o << acc.decl(size) << "\n";
    o << "int[] ref = new int[n];\n";
    o << "long check = 0;\n\n";

    switch (workload) {
        case Workload::SequentialFill:
            o << "for (int i = 0; i < ops; i = i + 1) {\n";
            o << "    " << acc.set("i", "i * " + std::to_string(mul) + " + " + std::to_string(add)) << "\n";
            o << "    ref[i] = i * " << mul << " + " << add << ";\n";
            o << "}\n";
            o << "for (int i = 0; i < ops; i++) {\n";
            o << "    print(" << acc.get("i") << ");\n";
            o << "}\n";
            break;
        case Workload::RandomRead:
            o << "int i = 0;\n";
            o << "while (i < ops) {\n";
            o << "    " << acc.set("i", "(i + bias) % 1000") << "\n";
            o << "    ref[i] = (i + bias) % 1000;\n";
            o << "    i += 1;\n";
            o << "}\n";
            o << "for (int t = 0; t < ops; t = t + 1) {\n";
            o << "    seed = (A * seed + C) % M;\n";
            o << "    int idx = seed % n;\n";
            o << "    int v = " << acc.get("idx") << ";\n";
            o << "    if (v != ref[idx]) {\n";
            o << "        print(\"mismatch\");\n";
            o << "    }\n";
            o << "    check = check + v * (t + 1);\n";
            o << "    print(v);\n";
            o << "}\n";
            break;
        case Workload::MixedReadWrite:
            o << "for (int t = 0; t < ops; t = t + 1) {\n";
            o << "    seed = (A * seed + C) % M;\n";
            o << "    int idx = seed % n;\n";
            o << "    if (seed % 3 == 0) {\n";
            o << "        " << acc.set("idx", "t * " + std::to_string(mul) + " + 2") << "\n";
            o << "        ref[idx] = t * " << mul << " + 2;\n";
            o << "    } else {\n";
            o << "        check = check + " << acc.get("idx") << " - ref[idx] + 1;\n";
            o << "    }\n";
            o << "    if (t % 16 == 0) {\n";
            o << "        print(check);\n";
            o << "    }\n";
            o << "}\n";
            break;
    }
    o << "print(check);\n";
    o << "print(a.lengthArray());\n";
    o << "print(bias - 7);\n";

    Program p;
    p.name = std::string(arrhide::toString(kind)) + "_" + name(workload) + "_" + std::to_string(seed);
    p.kind = kind;
    p.workload = workload;
    p.size = size;
    p.source = o.str();
    return p;
}

std::vector<Program> generate(std::size_t perKind, std::uint64_t seed) {
    oracle::Lcg rng(seed);
    std::vector<Program> out;
    const ArrayKind kinds[] = {ArrayKind::Split, ArrayKind::Fold, ArrayKind::Flatten};
    const Workload loads[] = {Workload::SequentialFill, Workload::RandomRead, Workload::MixedReadWrite};
    for (ArrayKind kind : kinds) {
        for (std::size_t i = 0; i < perKind; ++i) {
            // Log-uniform size in [10, 10^5]; the first program of each kind
            // always takes the full 10^5.
            std::size_t size = 100000;
            if (i > 0) {
                size = 10;
                for (std::uint64_t d = rng.below(4); d > 0; --d) size *= 10;
                size += rng.below(size * 9);
                size = std::min<std::size_t>(size, 100000);
            }
            const std::size_t ops = 20 + rng.below(281);
            out.push_back(makeProgram(kind, loads[i % 3], size, ops, rng.next()));
        }
    }
    return out;
}

}  // namespace corpus
