#include "arrhide/frontend.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace arrhide {

std::string_view toString(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier: return "Identifier";
        case TokenKind::IntLiteral: return "IntLiteral";
        case TokenKind::NumberLiteral: return "NumberLiteral";
        case TokenKind::StringLiteral: return "StringLiteral";
        case TokenKind::CharLiteral: return "CharLiteral";
        case TokenKind::Punct: return "Punct";
        case TokenKind::Keyword: return "Keyword";
    }
    return "?";
}

std::string_view toString(StatementKind kind) {
    switch (kind) {
        case StatementKind::CandidateDecl: return "CandidateDecl";
        case StatementKind::CandidateAccess: return "CandidateAccess";
        case StatementKind::Other: return "Other";
    }
    return "?";
}

namespace {

// Tracks 1-based line/column while walking a buffer.
class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    bool done() const { return i_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return i_ + ahead < text_.size() ? text_[i_ + ahead] : '\0';
    }
    std::size_t index() const { return i_; }
    SourcePos pos() const { return {line_, col_, i_}; }

    void advance() {
        if (text_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

private:
    std::string_view text_;
    std::size_t i_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

bool isIdentStart(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || c == '$' || u >= 0x80;
}

bool isIdentChar(char c) {
    return isIdentStart(c) || std::isdigit(static_cast<unsigned char>(c));
}

bool isDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

const std::set<std::string, std::less<>>& keywords() {
    static const std::set<std::string, std::less<>> kw = {
        "abstract", "assert",     "boolean",   "break",      "byte",      "case",
        "catch",    "char",       "class",     "const",      "continue",  "default",
        "do",       "double",     "else",      "enum",       "extends",   "final",
        "finally",  "float",      "for",       "goto",       "if",        "implements",
        "import",   "instanceof", "int",       "interface",  "long",      "native",
        "new",      "package",    "private",   "protected",  "public",    "return",
        "short",    "static",     "strictfp",  "super",      "switch",    "synchronized",
        "this",     "throw",      "throws",    "transient",  "try",       "void",
        "volatile", "while",      "true",      "false",      "null"};
    return kw;
}

// Longest first within each length class.
constexpr std::array<std::string_view, 25> kPuncts = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=",
    ">=",   "+=",  "-=",  "*=",  "/=",  "%=", "&=", "|=", "^=", "<<", ">>"};

// Copies a quoted literal verbatim. Stops at the closing quote or at a raw
// newline (unterminated; the tokenizer reports it).
void copyQuoted(Cursor& cur, std::string_view src, char quote, std::string& out) {
    out += quote;
    cur.advance();
    while (!cur.done()) {
        const char c = cur.peek();
        if (c == '\n') return;
        if (c == '\\' && cur.index() + 1 < src.size() && src[cur.index() + 1] != '\n') {
            out += c;
            cur.advance();
            out += cur.peek();
            cur.advance();
            continue;
        }
        out += c;
        cur.advance();
        if (c == quote) return;
    }
}

}  // namespace

std::string stripComments(std::string_view source) {
    std::string out;
    out.reserve(source.size());
    Cursor cur(source);
    while (!cur.done()) {
        const char c = cur.peek();
        if (c == '"' || c == '\'') {
            copyQuoted(cur, source, c, out);
        } else if (c == '/' && cur.peek(1) == '/') {
            while (!cur.done() && cur.peek() != '\n') cur.advance();
        } else if (c == '/' && cur.peek(1) == '*') {
            const SourcePos start = cur.pos();
            cur.advance();
            cur.advance();
            bool closed = false;
            while (!cur.done()) {
                if (cur.peek() == '*' && cur.peek(1) == '/') {
                    cur.advance();
                    cur.advance();
                    closed = true;
                    break;
                }
                if (cur.peek() == '\n') out += '\n';
                cur.advance();
            }
            if (!closed) throw LexError("unterminated block comment", start);
        } else {
            out += c;
            cur.advance();
        }
    }
    return out;
}

std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> tokens;
    Cursor cur(source);
    const auto take = [&](TokenKind kind, SourcePos start) {
        tokens.push_back(Token{kind, std::string(source.substr(start.offset, cur.index() - start.offset)),
                               start});
    };

    while (!cur.done()) {
        const char c = cur.peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
            cur.advance();
            continue;
        }
        const SourcePos start = cur.pos();

        if (isIdentStart(c)) {
            while (!cur.done() && isIdentChar(cur.peek())) cur.advance();
            const std::string_view word = source.substr(start.offset, cur.index() - start.offset);
            take(keywords().contains(word) ? TokenKind::Keyword : TokenKind::Identifier, start);
            continue;
        }

        if (isDigit(c) || (c == '.' && isDigit(cur.peek(1)))) {
            bool plain = c != '.';
            while (!cur.done() && isDigit(cur.peek())) cur.advance();
            // Anything glued to the digit run makes it a non-decimal number
            // (3.5, 10L, 0x1F, 1e9, ...).
            while (!cur.done()) {
                const char n = cur.peek();
                if (isIdentChar(n) || n == '.') {
                    plain = false;
                    const bool exponent = (n == 'e' || n == 'E' || n == 'p' || n == 'P');
                    cur.advance();
                    if (exponent && (cur.peek() == '+' || cur.peek() == '-')) cur.advance();
                } else {
                    break;
                }
            }
            const std::size_t len = cur.index() - start.offset;
            if (plain && len > 1 && c == '0') plain = false;  // octal
            take(plain ? TokenKind::IntLiteral : TokenKind::NumberLiteral, start);
            continue;
        }

        if (c == '"' || c == '\'') {
            cur.advance();
            bool closed = false;
            while (!cur.done()) {
                const char n = cur.peek();
                if (n == '\n') break;
                cur.advance();
                if (n == '\\') {
                    if (!cur.done() && cur.peek() != '\n') cur.advance();
                    continue;
                }
                if (n == c) {
                    closed = true;
                    break;
                }
            }
            if (!closed) {
                throw LexError(c == '"' ? "unterminated string literal" : "unterminated char literal",
                               start);
            }
            take(c == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral, start);
            continue;
        }

        std::size_t len = 1;
        const std::string_view rest = source.substr(start.offset);
        for (std::string_view p : kPuncts) {
            if (rest.starts_with(p)) {
                len = p.size();
                break;
            }
        }
        for (std::size_t i = 0; i < len; ++i) cur.advance();
        take(TokenKind::Punct, start);
    }
    return tokens;
}

std::vector<Statement> splitStatements(std::span<const Token> tokens) {
    std::vector<Statement> out;
    // Open ( [ and { that sit inside parentheses.
    std::vector<std::size_t> nesting;
    std::vector<std::size_t> braces;
    std::size_t begin = 0;

    const auto flush = [&](std::size_t end) {
        if (end > begin) out.push_back(Statement{begin, end, StatementKind::Other, braces.size()});
        begin = end;
    };
    const auto closes = [](std::string_view open, std::string_view close) {
        return (open == "(" && close == ")") || (open == "[" && close == "]") ||
               (open == "{" && close == "}");
    };

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (t.kind != TokenKind::Punct) continue;
        const std::string& p = t.text;
        if (p == "(" || p == "[" || (p == "{" && !nesting.empty())) {
            nesting.push_back(i);
        } else if (p == ")" || p == "]" || (p == "}" && !nesting.empty())) {
            if (nesting.empty() || !closes(tokens[nesting.back()].text, p)) {
                throw ParseError("unbalanced '" + p + "'", t.pos);
            }
            nesting.pop_back();
        } else if (p == ";" && nesting.empty()) {
            flush(i + 1);
        } else if (p == "{") {
            flush(i + 1);
            out.back().depth = braces.size();
            braces.push_back(i);
        } else if (p == "}") {
            if (braces.empty()) throw ParseError("unbalanced '}'", t.pos);
            flush(i);
            braces.pop_back();
            flush(i + 1);
        }
    }
    if (!nesting.empty()) {
        const Token& t = tokens[nesting.back()];
        throw ParseError("unclosed '" + t.text + "'", t.pos);
    }
    if (!braces.empty()) throw ParseError("unclosed '{'", tokens[braces.back()].pos);
    flush(tokens.size());
    return out;
}

bool isCobsTypeName(std::string_view name) {
    return name == "SplitArray" || name == "FoldedArray" || name == "FlattenedArray";
}

std::size_t skipGeneric(std::span<const Token> tokens, std::size_t i) {
    if (i >= tokens.size() || !tokens[i].isPunct("<")) return i;
    long depth = 0;
    for (std::size_t j = i; j < tokens.size(); ++j) {
        const Token& t = tokens[j];
        if (t.kind == TokenKind::Punct) {
            if (t.text == "<") {
                ++depth;
            } else if (t.text == ">" || t.text == ">>" || t.text == ">>>") {
                depth -= static_cast<long>(t.text.size());
                if (depth == 0) return j + 1;
                if (depth < 0) return i;
            } else if (t.text != "," && t.text != "." && t.text != "?" && t.text != "[" &&
                       t.text != "]" && t.text != "&") {
                return i;
            }
        } else if (t.kind != TokenKind::Identifier && t.kind != TokenKind::Keyword) {
            return i;
        }
    }
    return i;
}

StatementKind Classifier::classify(std::span<const Token> stmt) {
    bool decl = false;
    bool access = false;
    for (std::size_t i = 0; i < stmt.size(); ++i) {
        const Token& t = stmt[i];
        if (t.kind != TokenKind::Identifier) continue;
        if (isCobsTypeName(t.text)) {
            const std::size_t j = skipGeneric(stmt, i + 1);
            if (j < stmt.size() && stmt[j].kind == TokenKind::Identifier) {
                vars_.insert(stmt[j].text);
                decl = true;
            }
        } else if (i + 3 < stmt.size() && stmt[i + 1].isPunct(".") && stmt[i + 3].isPunct("(") &&
                   (stmt[i + 2].text == "setArray" || stmt[i + 2].text == "getArray" ||
                    stmt[i + 2].text == "lengthArray") &&
                   vars_.contains(t.text)) {
            access = true;
        }
    }
    if (decl) return StatementKind::CandidateDecl;
    if (access) return StatementKind::CandidateAccess;
    return StatementKind::Other;
}

Document Document::preprocess(std::string_view raw) {
    Document doc;
    doc.source = stripComments(raw);
    doc.tokens = tokenize(doc.source);
    doc.statements = splitStatements(doc.tokens);
    Classifier classifier;
    for (Statement& s : doc.statements) s.kind = classifier.classify(doc.span(s));
    return doc;
}

std::string_view Document::gapBefore(std::size_t i) const {
    const std::size_t from = i == 0 ? 0 : tokens[i - 1].end();
    return std::string_view(source).substr(from, tokens[i].pos.offset - from);
}

std::string_view Document::trailing() const {
    const std::size_t from = tokens.empty() ? 0 : tokens.back().end();
    return std::string_view(source).substr(from);
}

}  // namespace arrhide
