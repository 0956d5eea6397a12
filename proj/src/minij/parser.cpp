#include <charconv>
#include <unordered_set>

#include "arrhide/frontend.hpp"
#include "minij/ast.hpp"

namespace arrhide::minij {

namespace {

bool isModifier(const Token& t) {
    return t.kind == TokenKind::Keyword &&
           (t.text == "public" || t.text == "private" || t.text == "protected" ||
            t.text == "static" || t.text == "final");
}

bool isIntTypeKeyword(const Token& t) {
    return t.kind == TokenKind::Keyword &&
           (t.text == "int" || t.text == "long" || t.text == "boolean");
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    std::unique_ptr<ProgramData> parseProgram() {
        auto prog = std::make_unique<ProgramData>();
        while (!atEnd()) parseItem(*prog);
        return prog;
    }

private:
    // ---- token access -----------------------------------------------------

    bool atEnd() const { return i_ >= toks_.size(); }

    const Token& peek(std::size_t ahead = 0) const {
        static const Token eof{TokenKind::Punct, "<end of input>", {}};
        return i_ + ahead < toks_.size() ? toks_[i_ + ahead] : eof;
    }

    SourcePos here() const {
        if (!atEnd()) return toks_[i_].pos;
        if (toks_.empty()) return {1, 1, 0};
        SourcePos p = toks_.back().pos;
        p.column += toks_.back().text.size();
        p.offset += toks_.back().text.size();
        return p;
    }

    bool atPunct(std::string_view p, std::size_t ahead = 0) const {
        return peek(ahead).isPunct(p) && i_ + ahead < toks_.size();
    }
    bool atKeyword(std::string_view k, std::size_t ahead = 0) const {
        return peek(ahead).is(TokenKind::Keyword, k) && i_ + ahead < toks_.size();
    }

    [[noreturn]] void fail(const std::string& expected) const {
        const std::string found = atEnd() ? "end of input" : "'" + peek().text + "'";
        throw ParseError("syntax error: expected " + expected + ", found " + found, here());
    }

    const Token& expectPunct(std::string_view p) {
        if (!atPunct(p)) fail("'" + std::string(p) + "'");
        return toks_[i_++];
    }

    const Token& expectIdent() {
        if (atEnd() || peek().kind != TokenKind::Identifier) fail("identifier");
        return toks_[i_++];
    }

    bool acceptPunct(std::string_view p) {
        if (!atPunct(p)) return false;
        ++i_;
        return true;
    }

    void skipModifiers() {
        while (!atEnd() && isModifier(peek())) ++i_;
    }

    // ---- types ------------------------------------------------------------

    // Index just past a type starting at `at`, or `at` if none.
    std::size_t scanType(std::size_t at) const {
        if (at >= toks_.size()) return at;
        const Token& t = toks_[at];
        std::size_t j = at;
        if (isIntTypeKeyword(t) || t.is(TokenKind::Keyword, "void")) {
            j = at + 1;
        } else if (t.kind == TokenKind::Identifier) {
            j = skipGeneric(toks_, at + 1);
        } else {
            return at;
        }
        while (j + 1 < toks_.size() && toks_[j].isPunct("[") && toks_[j + 1].isPunct("]")) j += 2;
        return j;
    }

    TypeRef parseType() {
        const std::size_t end = scanType(i_);
        if (end == i_) fail("type");
        TypeRef type;
        const Token& t = toks_[i_];
        if (t.is(TokenKind::Keyword, "void")) {
            type.base = TypeRef::Base::Void;
        } else if (isIntTypeKeyword(t)) {
            type.base = TypeRef::Base::Int;
        } else {
            type.base = TypeRef::Base::Named;
            type.name = t.text;
        }
        for (std::size_t j = i_; j < end; ++j) {
            if (toks_[j].isPunct("[")) ++type.rank;
        }
        i_ = end;
        return type;
    }

    // type followed by an identifier
    bool atDeclaration() const {
        const std::size_t end = scanType(i_);
        return end != i_ && end < toks_.size() && toks_[end].kind == TokenKind::Identifier;
    }

    // ---- items ------------------------------------------------------------

    void parseItem(ProgramData& prog) {
        const std::size_t start = i_;
        skipModifiers();
        if (atKeyword("class")) {
            prog.classes.push_back(parseClass());
            return;
        }
        const std::size_t end = scanType(i_);
        if (end != i_ && end + 1 < toks_.size() && toks_[end].kind == TokenKind::Identifier &&
            toks_[end + 1].isPunct("(")) {
            prog.functions.push_back(parseFunction(nullptr));
            return;
        }
        i_ = start;
        parseStatementInto(prog.main);
    }

    std::unique_ptr<ClassDecl> parseClass() {
        auto cls = std::make_unique<ClassDecl>();
        cls->pos = here();
        ++i_;  // class
        cls->name = expectIdent().text;
        i_ = skipGeneric(toks_, i_);
        expectPunct("{");
        while (!atPunct("}")) {
            if (atEnd()) fail("'}'");
            skipModifiers();
            if (peek().kind == TokenKind::Identifier && peek().text == cls->name && atPunct("(", 1)) {
                auto ctor = parseFunction(cls.get(), true);
                cls->constructors.push_back(std::move(ctor));
                continue;
            }
            const std::size_t end = scanType(i_);
            if (end != i_ && end + 1 < toks_.size() && toks_[end].kind == TokenKind::Identifier &&
                toks_[end + 1].isPunct("(")) {
                cls->methods.push_back(parseFunction(cls.get()));
                continue;
            }
            TypeRef type = parseType();
            do {
                FieldDecl f;
                f.type = type;
                f.pos = here();
                f.name = expectIdent().text;
                if (acceptPunct("=")) f.init = parseInitializer();
                cls->fields.push_back(std::move(f));
            } while (acceptPunct(","));
            expectPunct(";");
        }
        expectPunct("}");
        return cls;
    }

    std::unique_ptr<FuncDecl> parseFunction(const ClassDecl* owner, bool ctor = false) {
        auto fn = std::make_unique<FuncDecl>();
        fn->owner = owner;
        fn->isConstructor = ctor;
        fn->pos = here();
        if (ctor) {
            fn->ret.base = TypeRef::Base::Void;
        } else {
            fn->ret = parseType();
        }
        fn->name = expectIdent().text;
        expectPunct("(");
        if (!atPunct(")")) {
            do {
                skipModifiers();
                Param p;
                p.type = parseType();
                p.pos = here();
                p.name = expectIdent().text;
                fn->params.push_back(std::move(p));
            } while (acceptPunct(","));
        }
        expectPunct(")");
        if (!atPunct("{")) fail("'{'");
        fn->body = parseBlock();
        return fn;
    }

    // ---- statements -------------------------------------------------------

    StmtPtr makeStmt(StmtKind kind, SourcePos pos) {
        auto s = std::make_unique<Stmt>();
        s->kind = kind;
        s->pos = pos;
        return s;
    }

    StmtPtr parseBlock() {
        auto block = makeStmt(StmtKind::Block, here());
        expectPunct("{");
        while (!atPunct("}")) {
            if (atEnd()) fail("'}'");
            parseStatementInto(block->body);
        }
        expectPunct("}");
        return block;
    }

    // Single statement used as a branch or loop body.
    StmtPtr parseSubStatement() {
        std::vector<StmtPtr> out;
        const SourcePos pos = here();
        parseStatementInto(out);
        if (out.size() == 1 && out[0]->kind != StmtKind::VarDecl) return std::move(out[0]);
        auto block = makeStmt(StmtKind::Block, pos);
        block->body = std::move(out);
        return block;
    }

    void parseDeclarationInto(std::vector<StmtPtr>& out) {
        skipModifiers();
        const SourcePos pos = here();
        TypeRef type = parseType();
        if (type.base == TypeRef::Base::Void) throw ParseError("variable of type void", pos);
        do {
            auto s = makeStmt(StmtKind::VarDecl, here());
            s->type = type;
            s->name = expectIdent().text;
            if (acceptPunct("=")) s->expr = parseInitializer();
            out.push_back(std::move(s));
        } while (acceptPunct(","));
    }

    void parseStatementInto(std::vector<StmtPtr>& out) {
        const SourcePos pos = here();
        if (atEnd()) fail("statement");
        if (atPunct("{")) {
            out.push_back(parseBlock());
            return;
        }
        if (atPunct(";")) {
            ++i_;
            out.push_back(makeStmt(StmtKind::Block, pos));
            return;
        }
        if (atKeyword("if")) {
            ++i_;
            auto s = makeStmt(StmtKind::If, pos);
            expectPunct("(");
            s->expr = parseExpr();
            expectPunct(")");
            s->body.push_back(parseSubStatement());
            if (atKeyword("else")) {
                ++i_;
                s->elseBranch = parseSubStatement();
            }
            out.push_back(std::move(s));
            return;
        }
        if (atKeyword("while")) {
            ++i_;
            auto s = makeStmt(StmtKind::While, pos);
            expectPunct("(");
            s->expr = parseExpr();
            expectPunct(")");
            s->body.push_back(parseSubStatement());
            out.push_back(std::move(s));
            return;
        }
        if (atKeyword("for")) {
            ++i_;
            auto s = makeStmt(StmtKind::For, pos);
            expectPunct("(");
            if (!atPunct(";")) {
                if (atDeclaration() || (!atEnd() && isModifier(peek()))) {
                    parseDeclarationInto(s->init);
                } else {
                    do {
                        auto e = makeStmt(StmtKind::ExprStmt, here());
                        e->expr = parseExpr();
                        s->init.push_back(std::move(e));
                    } while (acceptPunct(","));
                }
            }
            expectPunct(";");
            if (!atPunct(";")) s->expr = parseExpr();
            expectPunct(";");
            if (!atPunct(")")) {
                do {
                    s->updates.push_back(parseExpr());
                } while (acceptPunct(","));
            }
            expectPunct(")");
            s->body.push_back(parseSubStatement());
            out.push_back(std::move(s));
            return;
        }
        if (atKeyword("return")) {
            ++i_;
            auto s = makeStmt(StmtKind::Return, pos);
            if (!atPunct(";")) s->expr = parseExpr();
            expectPunct(";");
            out.push_back(std::move(s));
            return;
        }
        if (atKeyword("break") || atKeyword("continue")) {
            auto s = makeStmt(atKeyword("break") ? StmtKind::Break : StmtKind::Continue, pos);
            ++i_;
            expectPunct(";");
            out.push_back(std::move(s));
            return;
        }
        if (atKeyword("throw")) {
            ++i_;
            auto s = makeStmt(StmtKind::Throw, pos);
            if (!atKeyword("new")) fail("'new'");
            ++i_;
            s->name = expectIdent().text;
            expectPunct("(");
            if (!atPunct(")")) {
                do {
                    s->updates.push_back(parseExpr());
                } while (acceptPunct(","));
            }
            expectPunct(")");
            expectPunct(";");
            out.push_back(std::move(s));
            return;
        }
        if (peek().is(TokenKind::Identifier, "print") && atPunct("(", 1)) {
            i_ += 2;
            auto s = makeStmt(StmtKind::Print, pos);
            if (peek().kind == TokenKind::StringLiteral && atPunct(")", 1)) {
                auto lit = std::make_unique<Expr>();
                lit->kind = ExprKind::StringLit;
                lit->pos = here();
                lit->name = unquote(peek().text);
                ++i_;
                s->expr = std::move(lit);
            } else {
                s->expr = parseExpr();
            }
            expectPunct(")");
            expectPunct(";");
            out.push_back(std::move(s));
            return;
        }
        if ((!atEnd() && isModifier(peek())) || atDeclaration()) {
            parseDeclarationInto(out);
            expectPunct(";");
            return;
        }
        auto s = makeStmt(StmtKind::ExprStmt, pos);
        s->expr = parseExpr();
        expectPunct(";");
        out.push_back(std::move(s));
    }

    static std::string unquote(std::string_view lit) {
        std::string out;
        for (std::size_t i = 1; i + 1 < lit.size(); ++i) {
            char c = lit[i];
            if (c == '\\' && i + 2 < lit.size()) {
                const char n = lit[++i];
                switch (n) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '0': c = '\0'; break;
                    default: c = n; break;
                }
            }
            out += c;
        }
        return out;
    }

    // ---- expressions ------------------------------------------------------

    ExprPtr make(ExprKind kind, SourcePos pos) {
        auto e = std::make_unique<Expr>();
        e->kind = kind;
        e->pos = pos;
        return e;
    }

    ExprPtr parseInitializer() {
        if (!atPunct("{")) return parseExpr();
        auto e = make(ExprKind::ArrayInit, here());
        ++i_;
        if (!atPunct("}")) {
            do {
                if (atPunct("}")) break;
                e->kids.push_back(parseInitializer());
            } while (acceptPunct(","));
        }
        expectPunct("}");
        return e;
    }

    ExprPtr parseExpr() { return parseAssignment(); }

    ExprPtr parseAssignment() {
        ExprPtr lhs = parseOr();
        static const std::unordered_set<std::string> ops = {"=", "+=", "-=", "*=", "/=", "%="};
        if (!atEnd() && peek().kind == TokenKind::Punct && ops.contains(peek().text)) {
            const Token& t = toks_[i_++];
            auto e = make(ExprKind::Assign, t.pos);
            e->op = t.text.size() == 1 ? '=' : t.text[0];
            e->kids.push_back(std::move(lhs));
            e->kids.push_back(parseAssignment());
            return e;
        }
        return lhs;
    }

    ExprPtr parseOr() {
        ExprPtr lhs = parseAnd();
        while (atPunct("||")) {
            auto e = make(ExprKind::Or, toks_[i_++].pos);
            e->kids.push_back(std::move(lhs));
            e->kids.push_back(parseAnd());
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parseAnd() {
        ExprPtr lhs = parseEquality();
        while (atPunct("&&")) {
            auto e = make(ExprKind::And, toks_[i_++].pos);
            e->kids.push_back(std::move(lhs));
            e->kids.push_back(parseEquality());
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr binary(char op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
        auto e = make(ExprKind::Binary, pos);
        e->op = op;
        e->kids.push_back(std::move(lhs));
        e->kids.push_back(std::move(rhs));
        return e;
    }

    ExprPtr parseEquality() {
        ExprPtr lhs = parseRelational();
        while (atPunct("==") || atPunct("!=")) {
            const Token& t = toks_[i_++];
            lhs = binary(t.text == "==" ? 'E' : 'N', std::move(lhs), parseRelational(), t.pos);
        }
        return lhs;
    }

    ExprPtr parseRelational() {
        ExprPtr lhs = parseAdditive();
        while (atPunct("<") || atPunct(">") || atPunct("<=") || atPunct(">=")) {
            const Token& t = toks_[i_++];
            const char op = t.text == "<" ? '<' : t.text == ">" ? '>' : t.text == "<=" ? 'L' : 'G';
            lhs = binary(op, std::move(lhs), parseAdditive(), t.pos);
        }
        return lhs;
    }

    ExprPtr parseAdditive() {
        ExprPtr lhs = parseMultiplicative();
        while (atPunct("+") || atPunct("-")) {
            const Token& t = toks_[i_++];
            lhs = binary(t.text[0], std::move(lhs), parseMultiplicative(), t.pos);
        }
        return lhs;
    }

    ExprPtr parseMultiplicative() {
        ExprPtr lhs = parseUnary();
        while (atPunct("*") || atPunct("/") || atPunct("%")) {
            const Token& t = toks_[i_++];
            lhs = binary(t.text[0], std::move(lhs), parseUnary(), t.pos);
        }
        return lhs;
    }

    ExprPtr parseUnary() {
        if (atPunct("-") || atPunct("!") || atPunct("+")) {
            const Token& t = toks_[i_++];
            auto e = make(ExprKind::Unary, t.pos);
            e->op = t.text[0];
            e->kids.push_back(parseUnary());
            return e;
        }
        if (atPunct("++") || atPunct("--")) {
            const Token& t = toks_[i_++];
            auto e = make(ExprKind::IncDec, t.pos);
            e->op = t.text[0];
            e->prefix = true;
            e->kids.push_back(parseUnary());
            return e;
        }
        // (int) casts are accepted and ignored.
        if (atPunct("(") && isIntTypeKeyword(peek(1)) && atPunct(")", 2)) {
            i_ += 3;
            return parseUnary();
        }
        return parsePostfix(parsePrimary());
    }

    std::vector<ExprPtr> parseArgs() {
        std::vector<ExprPtr> args;
        expectPunct("(");
        if (!atPunct(")")) {
            do {
                args.push_back(parseExpr());
            } while (acceptPunct(","));
        }
        expectPunct(")");
        return args;
    }

    ExprPtr parsePostfix(ExprPtr e) {
        for (;;) {
            if (atPunct("[")) {
                auto idx = make(ExprKind::Index, toks_[i_++].pos);
                idx->kids.push_back(std::move(e));
                idx->kids.push_back(parseExpr());
                expectPunct("]");
                e = std::move(idx);
            } else if (atPunct(".")) {
                const SourcePos pos = toks_[i_++].pos;
                const Token& name = expectIdent();
                if (atPunct("(")) {
                    auto call = make(ExprKind::CallMethod, pos);
                    call->name = name.text;
                    call->kids.push_back(std::move(e));
                    for (auto& a : parseArgs()) call->kids.push_back(std::move(a));
                    e = std::move(call);
                } else if (name.text == "length") {
                    auto len = make(ExprKind::Length, pos);
                    len->kids.push_back(std::move(e));
                    e = std::move(len);
                } else {
                    throw ParseError("field access '." + name.text + "' is not supported", name.pos);
                }
            } else if (atPunct("++") || atPunct("--")) {
                const Token& t = toks_[i_++];
                auto inc = make(ExprKind::IncDec, t.pos);
                inc->op = t.text[0];
                inc->kids.push_back(std::move(e));
                e = std::move(inc);
            } else {
                return e;
            }
        }
    }

    ExprPtr parsePrimary() {
        if (atEnd()) fail("expression");
        const Token& t = peek();
        const SourcePos pos = t.pos;
        switch (t.kind) {
            case TokenKind::IntLiteral: {
                auto e = make(ExprKind::IntLit, pos);
                auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), e->value);
                if (ec != std::errc{}) throw ParseError("integer literal out of range", pos);
                ++i_;
                return e;
            }
            case TokenKind::Identifier: {
                ++i_;
                if (atPunct("(")) {
                    auto e = make(ExprKind::Call, pos);
                    e->name = t.text;
                    e->kids = parseArgs();
                    return e;
                }
                auto e = make(ExprKind::Name, pos);
                e->name = t.text;
                return e;
            }
            case TokenKind::Keyword:
                if (t.text == "true" || t.text == "false") {
                    auto e = make(ExprKind::IntLit, pos);
                    e->value = t.text == "true" ? 1 : 0;
                    ++i_;
                    return e;
                }
                if (t.text == "new") return parseNew();
                break;
            case TokenKind::Punct:
                if (t.text == "(") {
                    ++i_;
                    ExprPtr e = parseExpr();
                    expectPunct(")");
                    return e;
                }
                break;
            case TokenKind::StringLiteral:
                throw ParseError("string literals are only allowed as print arguments", pos);
            default:
                break;
        }
        fail("expression");
    }

    ExprPtr parseNew() {
        const SourcePos pos = here();
        ++i_;  // new
        if (isIntTypeKeyword(peek())) {
            ++i_;
            auto e = make(ExprKind::NewArray, pos);
            while (atPunct("[")) {
                ++i_;
                if (atPunct("]")) {
                    ++i_;
                    ++e->type.rank;
                    continue;
                }
                if (e->type.rank != e->kids.size()) {
                    fail("']'");  // sized dimension after an unsized one
                }
                e->kids.push_back(parseExpr());
                expectPunct("]");
                ++e->type.rank;
            }
            if (e->type.rank == 0) fail("'['");
            if (e->kids.empty()) {
                if (!atPunct("{")) fail("array dimension or initializer");
                ExprPtr init = parseInitializer();
                init->type = e->type;
                return init;
            }
            return e;
        }
        const Token& name = expectIdent();
        auto e = make(ExprKind::NewObject, pos);
        e->name = name.text;
        i_ = skipGeneric(toks_, i_);
        e->kids = parseArgs();
        return e;
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// Name resolution

class Resolver {
public:
    explicit Resolver(ProgramData& prog) : prog_(prog) {}

    void run() {
        for (auto& cls : prog_.classes) {
            if (prog_.classIndex.contains(cls->name)) {
                throw ParseError("duplicate class '" + cls->name + "'", cls->pos);
            }
            prog_.classIndex[cls->name] = cls.get();
            for (std::size_t i = 0; i < cls->fields.size(); ++i) {
                if (!cls->fieldIndex.emplace(cls->fields[i].name, i).second) {
                    throw ParseError("duplicate field '" + cls->fields[i].name + "'", cls->fields[i].pos);
                }
            }
            for (auto& m : cls->methods) {
                if (!cls->methodIndex.emplace(m->name, m.get()).second) {
                    throw ParseError("duplicate method '" + m->name + "'", m->pos);
                }
            }
        }
        for (auto& fn : prog_.functions) {
            if (!prog_.functionIndex.emplace(fn->name, fn.get()).second) {
                throw ParseError("duplicate function '" + fn->name + "'", fn->pos);
            }
        }

        for (auto& cls : prog_.classes) {
            cls_ = cls.get();
            beginFrame();
            for (auto& f : cls->fields) {
                checkType(f.type, f.pos);
                if (f.init) resolve(*f.init);
            }
            cls->initFrameSize = frameSize_;
            for (auto& m : cls->methods) resolveFunction(*m);
            for (auto& c : cls->constructors) resolveFunction(*c);
        }
        cls_ = nullptr;
        for (auto& fn : prog_.functions) resolveFunction(*fn);

        beginFrame();
        for (auto& s : prog_.main) resolve(*s);
        prog_.mainFrameSize = frameSize_;
    }

private:
    void beginFrame() {
        scopes_.assign(1, {});
        frameSize_ = 0;
    }

    int declare(const std::string& name, SourcePos pos) {
        if (scopes_.back().contains(name)) {
            throw ParseError("variable '" + name + "' is already defined", pos);
        }
        const int slot = static_cast<int>(frameSize_++);
        scopes_.back()[name] = slot;
        return slot;
    }

    int lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return f->second;
        }
        return -1;
    }

    void checkType(const TypeRef& t, SourcePos pos) const {
        if (t.base != TypeRef::Base::Named) return;
        if (!prog_.findClass(t.name) && !isCobsTypeName(t.name)) {
            throw ParseError("unknown type '" + t.name + "'", pos);
        }
    }

    void resolveFunction(FuncDecl& fn) {
        beginFrame();
        checkType(fn.ret, fn.pos);
        for (const Param& p : fn.params) {
            checkType(p.type, p.pos);
            declare(p.name, p.pos);
        }
        resolve(*fn.body);
        fn.frameSize = frameSize_;
    }

    void resolveScoped(Stmt& s) {
        scopes_.emplace_back();
        resolve(s);
        scopes_.pop_back();
    }

    void resolve(Stmt& s) {
        switch (s.kind) {
            case StmtKind::Block:
                scopes_.emplace_back();
                for (auto& c : s.body) resolve(*c);
                scopes_.pop_back();
                return;
            case StmtKind::VarDecl:
                checkType(s.type, s.pos);
                if (s.expr) resolve(*s.expr);
                s.slot = declare(s.name, s.pos);
                return;
            case StmtKind::If:
                resolve(*s.expr);
                resolveScoped(*s.body[0]);
                if (s.elseBranch) resolveScoped(*s.elseBranch);
                return;
            case StmtKind::While:
                resolve(*s.expr);
                ++loops_;
                resolveScoped(*s.body[0]);
                --loops_;
                return;
            case StmtKind::For:
                scopes_.emplace_back();
                for (auto& i : s.init) resolve(*i);
                if (s.expr) resolve(*s.expr);
                for (auto& u : s.updates) resolve(*u);
                ++loops_;
                resolveScoped(*s.body[0]);
                --loops_;
                scopes_.pop_back();
                return;
            case StmtKind::Break:
            case StmtKind::Continue:
                if (loops_ == 0) throw ParseError("break/continue outside a loop", s.pos);
                return;
            case StmtKind::Throw:
                for (auto& u : s.updates) resolve(*u);
                return;
            case StmtKind::Print:
                if (s.expr->kind != ExprKind::StringLit) resolve(*s.expr);
                return;
            case StmtKind::Return:
            case StmtKind::ExprStmt:
                if (s.expr) resolve(*s.expr);
                return;
        }
    }

    void resolve(Expr& e) {
        for (auto& k : e.kids) resolve(*k);
        switch (e.kind) {
            case ExprKind::Name: {
                const int slot = lookup(e.name);
                if (slot >= 0) {
                    e.kind = ExprKind::Local;
                    e.slot = slot;
                    return;
                }
                if (cls_) {
                    auto it = cls_->fieldIndex.find(e.name);
                    if (it != cls_->fieldIndex.end()) {
                        e.kind = ExprKind::Field;
                        e.slot = static_cast<int>(it->second);
                        return;
                    }
                }
                throw ParseError("undeclared variable '" + e.name + "'", e.pos);
            }
            case ExprKind::Call: {
                const FuncDecl* target = nullptr;
                if (cls_ && (target = cls_->method(e.name))) {
                    e.kind = ExprKind::CallSelf;
                } else if ((target = prog_.findFunction(e.name))) {
                    e.kind = ExprKind::CallFunc;
                } else if (e.name == "F") {
                    if (e.kids.size() != 2) throw ParseError("F takes 2 arguments", e.pos);
                    e.kind = ExprKind::CallF;
                    return;
                } else {
                    throw ParseError("unknown function '" + e.name + "'", e.pos);
                }
                if (target->params.size() != e.kids.size()) {
                    throw ParseError("'" + e.name + "' takes " + std::to_string(target->params.size()) +
                                         " argument(s), got " + std::to_string(e.kids.size()),
                                     e.pos);
                }
                e.func = target;
                return;
            }
            case ExprKind::Assign:
            case ExprKind::IncDec: {
                const ExprKind k = e.kids[0]->kind;
                if (k != ExprKind::Local && k != ExprKind::Field && k != ExprKind::Index) {
                    throw ParseError("left side is not assignable", e.pos);
                }
                return;
            }
            case ExprKind::NewObject:
                if (!prog_.findClass(e.name) && !isCobsTypeName(e.name)) {
                    throw ParseError("unknown class '" + e.name + "'", e.pos);
                }
                return;
            default:
                return;
        }
    }

    ProgramData& prog_;
    const ClassDecl* cls_ = nullptr;
    std::vector<std::unordered_map<std::string, int>> scopes_;
    std::size_t frameSize_ = 0;
    int loops_ = 0;
};

}  // namespace

Program Program::parse(std::string_view source) {
    Parser parser(tokenize(stripComments(source)));
    std::unique_ptr<ProgramData> prog = parser.parseProgram();
    Resolver(*prog).run();
    return Program(std::shared_ptr<const ProgramData>(std::move(prog)));
}

std::size_t Program::functionCount() const { return data_->functions.size(); }
std::size_t Program::classCount() const { return data_->classes.size(); }
std::size_t Program::topLevelStatementCount() const { return data_->main.size(); }

}  // namespace arrhide::minij
