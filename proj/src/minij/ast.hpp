#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "arrhide/error.hpp"
#include "arrhide/minij.hpp"

namespace arrhide::minij {

struct ClassDecl;
struct FuncDecl;

struct TypeRef {
    enum class Base { Int, Void, Named };
    Base base = Base::Int;
    std::string name;  // Named only
    std::size_t rank = 0;

    bool isInt() const { return base == Base::Int && rank == 0; }
};

enum class ExprKind {
    IntLit,
    StringLit,  // print argument only
    Name,       // unresolved identifier
    Local,
    Field,      // field of the current object
    Index,      // kids: array, index
    Length,     // kids: array
    Unary,      // op: '-', '!', '+'
    Binary,     // op: + - * / % < > L(<=) G(>=) E(==) N(!=)
    And,
    Or,
    Assign,     // kids: target, value; op: '=' or the compound operator
    IncDec,     // kids: target; op '+'/'-'; prefix flag
    Call,       // unresolved free call: name(args)
    CallFunc,   // func
    CallSelf,   // method of the current object: func
    CallF,      // builtin F
    CallMethod, // kids[0] receiver, rest args; name
    NewArray,   // kids: dimension sizes; type.rank total rank
    ArrayInit,  // kids: elements
    NewObject,  // name, kids: args
};

struct Expr {
    ExprKind kind;
    SourcePos pos;
    std::int64_t value = 0;
    char op = 0;
    bool prefix = false;
    int slot = -1;
    std::string name;
    TypeRef type;
    const FuncDecl* func = nullptr;
    std::vector<std::unique_ptr<Expr>> kids;
};

using ExprPtr = std::unique_ptr<Expr>;

enum class StmtKind { Block, VarDecl, ExprStmt, If, While, For, Return, Print, Throw, Break, Continue };

struct Stmt {
    StmtKind kind;
    SourcePos pos;
    // VarDecl
    TypeRef type;
    std::string name;
    int slot = -1;
    // Expressions: VarDecl init, ExprStmt, If/While/For cond, Return value, Print arg.
    ExprPtr expr;
    // For update expressions.
    std::vector<ExprPtr> updates;
    // Block children, If then/else, loop body, For init statements.
    std::vector<std::unique_ptr<Stmt>> body;
    std::vector<std::unique_ptr<Stmt>> init;
    std::unique_ptr<Stmt> elseBranch;
};

using StmtPtr = std::unique_ptr<Stmt>;

struct Param {
    TypeRef type;
    std::string name;
    SourcePos pos;
};

struct FuncDecl {
    std::string name;
    SourcePos pos;
    TypeRef ret;
    std::vector<Param> params;
    StmtPtr body;
    std::size_t frameSize = 0;
    const ClassDecl* owner = nullptr;
    bool isConstructor = false;
};

struct FieldDecl {
    TypeRef type;
    std::string name;
    SourcePos pos;
    ExprPtr init;
};

struct ClassDecl {
    std::string name;
    SourcePos pos;
    std::vector<FieldDecl> fields;
    std::vector<std::unique_ptr<FuncDecl>> methods;
    std::vector<std::unique_ptr<FuncDecl>> constructors;
    std::unordered_map<std::string, std::size_t> fieldIndex;
    std::unordered_map<std::string, const FuncDecl*> methodIndex;
    // Field initializers are evaluated in a frame of this size.
    std::size_t initFrameSize = 0;

    const FuncDecl* method(const std::string& n) const {
        auto it = methodIndex.find(n);
        return it == methodIndex.end() ? nullptr : it->second;
    }
};

struct ProgramData {
    std::vector<std::unique_ptr<ClassDecl>> classes;
    std::vector<std::unique_ptr<FuncDecl>> functions;
    std::vector<StmtPtr> main;
    std::size_t mainFrameSize = 0;
    std::unordered_map<std::string, const ClassDecl*> classIndex;
    std::unordered_map<std::string, const FuncDecl*> functionIndex;

    const ClassDecl* findClass(const std::string& n) const {
        auto it = classIndex.find(n);
        return it == classIndex.end() ? nullptr : it->second;
    }
    const FuncDecl* findFunction(const std::string& n) const {
        auto it = functionIndex.find(n);
        return it == functionIndex.end() ? nullptr : it->second;
    }
};

}  // namespace arrhide::minij
