#include <variant>

#include "arrhide/frontend.hpp"
#include "minij/ast.hpp"

namespace arrhide::minij {

namespace {

struct Array;
struct Object;

using Value = std::variant<std::monostate, std::int64_t, std::shared_ptr<Array>,
                           std::shared_ptr<Object>, std::shared_ptr<IntContainer>>;

struct Array {
    std::vector<Value> elems;
};

struct Object {
    const ClassDecl* cls = nullptr;
    std::vector<Value> fields;
};

struct Fault {
    SourcePos pos;
    std::string kind;
    std::string message;
};

[[noreturn]] void fault(SourcePos pos, std::string kind, std::string message) {
    throw Fault{pos, std::move(kind), std::move(message)};
}

struct Frame {
    std::vector<Value> slots;
    Object* self = nullptr;
};

enum class Flow { Normal, Break, Continue, Return };

Value defaultValue(const TypeRef& t) {
    if (t.isInt()) return std::int64_t{0};
    return std::monostate{};
}

const char* typeName(const Value& v) {
    switch (v.index()) {
        case 0: return "null";
        case 1: return "int";
        case 2: return "array";
        case 3: return "object";
        default: return "container";
    }
}

ArrayKind cobsKind(const std::string& name) {
    if (name == "SplitArray") return ArrayKind::Split;
    if (name == "FoldedArray") return ArrayKind::Fold;
    return ArrayKind::Flatten;
}

class Interpreter {
public:
    Interpreter(const ProgramData& prog, const ExecOptions& opt) : prog_(prog), opt_(opt) {}

    ExecResult run() {
        ExecResult result;
        try {
            Frame frame;
            frame.slots.resize(prog_.mainFrameSize);
            for (const auto& s : prog_.main) {
                if (exec(*s, frame) == Flow::Return) break;
            }
        } catch (const Fault& f) {
            result.status = ExecResult::Status::RuntimeError;
            result.errorPos = f.pos;
            result.errorKind = f.kind;
            result.errorMessage = f.message;
        }
        result.out = std::move(out_);
        result.steps = steps_;
        return result;
    }

private:
    void tick(SourcePos pos) {
        if (++steps_ > opt_.maxSteps) fault(pos, "step-limit", "step limit exceeded");
    }

    // ---- statements -------------------------------------------------------

    Flow exec(const Stmt& s, Frame& f) {
        tick(s.pos);
        switch (s.kind) {
            case StmtKind::Block:
                for (const auto& c : s.body) {
                    const Flow fl = exec(*c, f);
                    if (fl != Flow::Normal) return fl;
                }
                return Flow::Normal;
            case StmtKind::VarDecl:
                f.slots[s.slot] = s.expr ? evalInit(*s.expr, s.type, f) : defaultValue(s.type);
                return Flow::Normal;
            case StmtKind::ExprStmt:
                eval(*s.expr, f);
                return Flow::Normal;
            case StmtKind::If:
                if (truthy(*s.expr, f)) return exec(*s.body[0], f);
                if (s.elseBranch) return exec(*s.elseBranch, f);
                return Flow::Normal;
            case StmtKind::While:
                while (truthy(*s.expr, f)) {
                    const Flow fl = exec(*s.body[0], f);
                    if (fl == Flow::Break) break;
                    if (fl == Flow::Return) return fl;
                }
                return Flow::Normal;
            case StmtKind::For:
                for (const auto& i : s.init) exec(*i, f);
                while (!s.expr || truthy(*s.expr, f)) {
                    const Flow fl = exec(*s.body[0], f);
                    if (fl == Flow::Break) break;
                    if (fl == Flow::Return) return fl;
                    for (const auto& u : s.updates) eval(*u, f);
                }
                return Flow::Normal;
            case StmtKind::Return:
                ret_ = s.expr ? eval(*s.expr, f) : Value{};
                return Flow::Return;
            case StmtKind::Break:
                return Flow::Break;
            case StmtKind::Continue:
                return Flow::Continue;
            case StmtKind::Print:
                if (s.expr->kind == ExprKind::StringLit) {
                    out_ += s.expr->name;
                } else {
                    out_ += std::to_string(evalInt(*s.expr, f));
                }
                out_ += '\n';
                return Flow::Normal;
            case StmtKind::Throw:
                for (const auto& a : s.updates) eval(*a, f);
                fault(s.pos, "thrown", s.name);
        }
        return Flow::Normal;
    }

    bool truthy(const Expr& e, Frame& f) { return evalInt(e, f) != 0; }

    Value evalInit(const Expr& e, const TypeRef& type, Frame& f) {
        if (e.kind == ExprKind::ArrayInit) return buildInit(e, type.rank, f);
        return eval(e, f);
    }

    Value buildInit(const Expr& e, std::size_t rank, Frame& f) {
        tick(e.pos);
        if (e.kind != ExprKind::ArrayInit) return eval(e, f);
        if (rank == 0) fault(e.pos, "type-error", "array initializer for a non-array");
        auto arr = std::make_shared<Array>();
        arr->elems.reserve(e.kids.size());
        for (const auto& k : e.kids) arr->elems.push_back(buildInit(*k, rank - 1, f));
        return arr;
    }

    // ---- expressions ------------------------------------------------------

    std::int64_t asInt(const Value& v, SourcePos pos) {
        if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
        fault(pos, "type-error", std::string("expected int, got ") + typeName(v));
    }

    std::int64_t evalInt(const Expr& e, Frame& f) { return asInt(eval(e, f), e.pos); }

    static std::int64_t arith(char op, std::int64_t a, std::int64_t b, SourcePos pos) {
        std::int64_t r = 0;
        switch (op) {
            case '+':
                if (__builtin_add_overflow(a, b, &r)) fault(pos, "overflow", "integer overflow in +");
                return r;
            case '-':
                if (__builtin_sub_overflow(a, b, &r)) fault(pos, "overflow", "integer overflow in -");
                return r;
            case '*':
                if (__builtin_mul_overflow(a, b, &r)) fault(pos, "overflow", "integer overflow in *");
                return r;
            case '/':
            case '%':
                if (b == 0) fault(pos, "division-by-zero", "division by zero");
                if (a == INT64_MIN && b == -1) fault(pos, "overflow", "integer overflow in division");
                return op == '/' ? a / b : a % b;
            case '<': return a < b;
            case '>': return a > b;
            case 'L': return a <= b;
            case 'G': return a >= b;
            case 'E': return a == b;
            case 'N': return a != b;
        }
        fault(pos, "type-error", "bad operator");
    }

    Value eval(const Expr& e, Frame& f) {
        tick(e.pos);
        switch (e.kind) {
            case ExprKind::IntLit:
                return e.value;
            case ExprKind::Local:
                return f.slots[e.slot];
            case ExprKind::Field:
                return f.self->fields[e.slot];
            case ExprKind::Binary:
                return arith(e.op, evalInt(*e.kids[0], f), evalInt(*e.kids[1], f), e.pos);
            case ExprKind::And:
                return std::int64_t{truthy(*e.kids[0], f) && truthy(*e.kids[1], f)};
            case ExprKind::Or:
                return std::int64_t{truthy(*e.kids[0], f) || truthy(*e.kids[1], f)};
            case ExprKind::Unary: {
                const std::int64_t v = evalInt(*e.kids[0], f);
                if (e.op == '!') return std::int64_t{v == 0};
                if (e.op == '+') return v;
                if (v == INT64_MIN) fault(e.pos, "overflow", "integer overflow in unary -");
                return -v;
            }
            case ExprKind::Index: {
                Value base = eval(*e.kids[0], f);
                const std::int64_t i = evalInt(*e.kids[1], f);
                return arrayRef(base, i, e.pos);
            }
            case ExprKind::Length: {
                Value base = eval(*e.kids[0], f);
                return static_cast<std::int64_t>(asArray(base, e.pos).elems.size());
            }
            case ExprKind::Assign:
                return assign(e, f);
            case ExprKind::IncDec:
                return incDec(e, f);
            case ExprKind::CallF: {
                const std::int64_t a = evalInt(*e.kids[0], f);
                const std::int64_t k = evalInt(*e.kids[1], f);
                try {
                    return evalF(a, k, opt_.table);
                } catch (const Error& err) {
                    fault(e.pos, "bad-F-argument", err.message());
                }
            }
            case ExprKind::CallFunc:
            case ExprKind::CallSelf: {
                std::vector<Value> args = evalArgs(e, 0, f);
                return call(*e.func, std::move(args), e.kind == ExprKind::CallSelf ? f.self : nullptr,
                            e.pos);
            }
            case ExprKind::CallMethod:
                return callMethod(e, f);
            case ExprKind::NewArray: {
                std::vector<std::int64_t> dims;
                dims.reserve(e.kids.size());
                for (const auto& k : e.kids) {
                    const std::int64_t d = evalInt(*k, f);
                    if (d < 0) fault(k->pos, "out-of-bounds", "negative array size " + std::to_string(d));
                    dims.push_back(d);
                }
                return newArray(dims, 0, e.type.rank);
            }
            case ExprKind::ArrayInit:
                return buildInit(e, e.type.rank, f);
            case ExprKind::NewObject:
                return newObject(e, f);
            case ExprKind::StringLit:
            case ExprKind::Name:
            case ExprKind::Call:
                break;
        }
        fault(e.pos, "type-error", "unexpected expression");
    }

    std::vector<Value> evalArgs(const Expr& e, std::size_t from, Frame& f) {
        std::vector<Value> args;
        args.reserve(e.kids.size() - from);
        for (std::size_t i = from; i < e.kids.size(); ++i) args.push_back(eval(*e.kids[i], f));
        return args;
    }

    Array& asArray(const Value& v, SourcePos pos) {
        if (const auto* a = std::get_if<std::shared_ptr<Array>>(&v)) return **a;
        if (std::holds_alternative<std::monostate>(v)) fault(pos, "null-reference", "array is null");
        fault(pos, "type-error", std::string("expected array, got ") + typeName(v));
    }

    Value& arrayRef(const Value& base, std::int64_t i, SourcePos pos) {
        Array& arr = asArray(base, pos);
        if (i < 0 || static_cast<std::uint64_t>(i) >= arr.elems.size()) {
            fault(pos, "out-of-bounds",
                  "index " + std::to_string(i) + " out of bounds for length " +
                      std::to_string(arr.elems.size()));
        }
        return arr.elems[static_cast<std::size_t>(i)];
    }

    Value newArray(const std::vector<std::int64_t>& dims, std::size_t level, std::size_t rank) {
        auto arr = std::make_shared<Array>();
        const auto n = static_cast<std::size_t>(dims[level]);
        if (level + 1 < dims.size()) {
            arr->elems.reserve(n);
            for (std::size_t i = 0; i < n; ++i) arr->elems.push_back(newArray(dims, level + 1, rank));
        } else if (level + 1 == rank) {
            arr->elems.assign(n, std::int64_t{0});
        } else {
            arr->elems.assign(n, std::monostate{});
        }
        return arr;
    }

    // Storage cell an assignment targets; the receiver is kept alive by `hold`.
    Value& lvalue(const Expr& target, Frame& f, Value& hold) {
        switch (target.kind) {
            case ExprKind::Local:
                return f.slots[target.slot];
            case ExprKind::Field:
                return f.self->fields[target.slot];
            default: {
                hold = eval(*target.kids[0], f);
                const std::int64_t i = evalInt(*target.kids[1], f);
                return arrayRef(hold, i, target.pos);
            }
        }
    }

    Value assign(const Expr& e, Frame& f) {
        Value hold;
        if (e.op == '=') {
            Value& cell = lvalue(*e.kids[0], f, hold);
            Value v = e.kids[1]->kind == ExprKind::ArrayInit ? buildInit(*e.kids[1], 1, f)
                                                               : eval(*e.kids[1], f);
            // Frames, field lists and arrays never resize, so `cell` is still valid.
            cell = v;
            return v;
        }
        Value& cell = lvalue(*e.kids[0], f, hold);
        const std::int64_t cur = asInt(cell, e.pos);
        const std::int64_t rhs = evalInt(*e.kids[1], f);
        Value v = arith(e.op, cur, rhs, e.pos);
        cell = v;
        return v;
    }

    Value incDec(const Expr& e, Frame& f) {
        Value hold;
        Value& cell = lvalue(*e.kids[0], f, hold);
        const std::int64_t cur = asInt(cell, e.pos);
        const std::int64_t next = arith(e.op, cur, 1, e.pos);
        cell = next;
        return e.prefix ? next : cur;
    }

    Value call(const FuncDecl& fn, std::vector<Value> args, Object* self, SourcePos pos) {
        if (callDepth_ >= opt_.maxCallDepth) fault(pos, "stack-overflow", "call depth limit reached");
        Frame frame;
        frame.slots.resize(fn.frameSize);
        frame.self = self;
        for (std::size_t i = 0; i < args.size(); ++i) frame.slots[i] = std::move(args[i]);
        ++callDepth_;
        const Flow fl = exec(*fn.body, frame);
        --callDepth_;
        if (fl == Flow::Return) {
            Value r = std::move(ret_);
            ret_ = Value{};
            return r;
        }
        if (fn.ret.base != TypeRef::Base::Void) {
            fault(pos, "missing-return", "'" + fn.name + "' ended without returning a value");
        }
        return Value{};
    }

    Value callMethod(const Expr& e, Frame& f) {
        Value recv = eval(*e.kids[0], f);
        if (auto* obj = std::get_if<std::shared_ptr<Object>>(&recv)) {
            const FuncDecl* m = (*obj)->cls->method(e.name);
            if (!m) fault(e.pos, "type-error", "no method '" + e.name + "' in " + (*obj)->cls->name);
            if (m->params.size() != e.kids.size() - 1) {
                fault(e.pos, "type-error", "wrong argument count for '" + e.name + "'");
            }
            std::vector<Value> args = evalArgs(e, 1, f);
            std::shared_ptr<Object> keep = *obj;
            return call(*m, std::move(args), keep.get(), e.pos);
        }
        if (auto* box = std::get_if<std::shared_ptr<IntContainer>>(&recv)) {
            IntContainer& c = **box;
            std::int64_t buf[3] = {0, 0, 0};
            const std::size_t nargs = e.kids.size() - 1;
            if (nargs > 3) fault(e.pos, "type-error", "too many arguments to '" + e.name + "'");
            for (std::size_t i = 0; i < nargs; ++i) buf[i] = evalInt(*e.kids[i + 1], f);
            try {
                if (e.name == "getArray") {
                    return c.get(std::span<const std::int64_t>(buf, nargs));
                }
                if (e.name == "setArray") {
                    if (nargs == 0) fault(e.pos, "type-error", "setArray needs a value");
                    c.set(std::span<const std::int64_t>(buf, nargs - 1), buf[nargs - 1]);
                    return Value{};
                }
                if (e.name == "lengthArray") {
                    if (nargs != 0) fault(e.pos, "type-error", "lengthArray takes no arguments");
                    return static_cast<std::int64_t>(c.length());
                }
            } catch (const BoundsError& err) {
                fault(e.pos, "out-of-bounds", err.message());
            }
            fault(e.pos, "type-error", "no method '" + e.name + "' on " +
                                           std::string(className(c.kind())));
        }
        if (std::holds_alternative<std::monostate>(recv)) {
            fault(e.pos, "null-reference", "method '" + e.name + "' called on null");
        }
        fault(e.pos, "type-error", std::string("cannot call '") + e.name + "' on " + typeName(recv));
    }

    Value newObject(const Expr& e, Frame& f) {
        std::vector<Value> args = evalArgs(e, 0, f);
        if (const ClassDecl* cls = prog_.findClass(e.name)) {
            auto obj = std::make_shared<Object>();
            obj->cls = cls;
            obj->fields.reserve(cls->fields.size());
            for (const auto& fd : cls->fields) obj->fields.push_back(defaultValue(fd.type));
            Frame init;
            init.slots.resize(cls->initFrameSize);
            init.self = obj.get();
            for (std::size_t i = 0; i < cls->fields.size(); ++i) {
                const FieldDecl& fd = cls->fields[i];
                if (fd.init) obj->fields[i] = evalInit(*fd.init, fd.type, init);
            }
            const FuncDecl* ctor = nullptr;
            for (const auto& c : cls->constructors) {
                if (c->params.size() == args.size()) ctor = c.get();
            }
            if (ctor) {
                call(*ctor, std::move(args), obj.get(), e.pos);
            } else if (!args.empty() || !cls->constructors.empty()) {
                fault(e.pos, "type-error", "no constructor of " + cls->name + " takes " +
                                               std::to_string(args.size()) + " argument(s)");
            }
            return obj;
        }
        std::vector<std::int64_t> dims;
        for (std::size_t i = 0; i < args.size(); ++i) dims.push_back(asInt(args[i], e.kids[i]->pos));
        try {
            return std::make_shared<IntContainer>(IntContainer::make(cobsKind(e.name), dims, opt_.layout));
        } catch (const Error& err) {
            fault(e.pos, dynamic_cast<const BoundsError*>(&err) ? "out-of-bounds" : "type-error",
                  err.message());
        }
    }

    const ProgramData& prog_;
    const ExecOptions& opt_;
    std::string out_;
    std::uint64_t steps_ = 0;
    std::size_t callDepth_ = 0;
    Value ret_;
};

}  // namespace

std::string ExecResult::describeError() const {
    if (ok()) return {};
    std::string s = errorPos.known() ? errorPos.str() + ": " : std::string();
    return s + errorKind + ": " + errorMessage;
}

ExecResult execute(const Program& program, const ExecOptions& options) {
    return Interpreter(program.data(), options).run();
}

ExecResult run(std::string_view source, const ExecOptions& options) {
    return execute(Program::parse(source), options);
}

}  // namespace arrhide::minij
