#pragma once

// Lexical preprocessing of Java-like source: comments are stripped, the text
// is tokenized, statement boundaries are found and each statement is
// classified as a restructured-array declaration, an access to such an array,
// or anything else.

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arrhide/error.hpp"

namespace arrhide {

enum class TokenKind {
    Identifier,
    /// Plain decimal digit run without leading zero (or a lone "0").
    IntLiteral,
    /// Any other numeric literal: hex, octal, floating point, suffixed.
    NumberLiteral,
    StringLiteral,
    CharLiteral,
    Punct,
    Keyword,
};

std::string_view toString(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Punct;
    std::string text;
    /// offset is the byte offset in the comment-stripped source.
    SourcePos pos;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool isPunct(std::string_view t) const { return is(TokenKind::Punct, t); }
    std::size_t end() const { return pos.offset + text.size(); }
};

enum class StatementKind { CandidateDecl, CandidateAccess, Other };

std::string_view toString(StatementKind kind);

/// Half-open token span [begin, end) of one statement.
struct Statement {
    std::size_t begin = 0;
    std::size_t end = 0;
    StatementKind kind = StatementKind::Other;
    /// Brace nesting level the statement starts at.
    std::size_t depth = 0;

    std::size_t size() const { return end - begin; }
};

/// Removes // and /* */ comments outside string and char literals. Newlines
/// inside block comments are kept so line numbers do not move.
std::string stripComments(std::string_view source);

/// Maximal-munch lexer over comment-free text.
std::vector<Token> tokenize(std::string_view source);

/// Splits at `;` outside parentheses and at `{` / `}`.
std::vector<Statement> splitStatements(std::span<const Token> tokens);

/// True for SplitArray, FoldedArray and FlattenedArray.
bool isCobsTypeName(std::string_view name);

/// Document-order classifier. Every identifier declared with a restructured
/// array type is remembered for the rest of the document, regardless of scope.
class Classifier {
public:
    StatementKind classify(std::span<const Token> stmt);
    const std::set<std::string, std::less<>>& arrayVariables() const { return vars_; }
    bool isArrayVariable(std::string_view name) const { return vars_.contains(name); }

private:
    std::set<std::string, std::less<>> vars_;
};

/// Index just past a generic segment starting at tokens[i] == "<", or i when
/// tokens[i] does not open a well-formed segment.
std::size_t skipGeneric(std::span<const Token> tokens, std::size_t i);

/// Comment-stripped text with its tokens and classified statements.
struct Document {
    std::string source;
    std::vector<Token> tokens;
    std::vector<Statement> statements;

    static Document preprocess(std::string_view raw);

    /// Whitespace between token i-1 (or the start) and token i.
    std::string_view gapBefore(std::size_t i) const;
    /// Whitespace after the last token.
    std::string_view trailing() const;
    std::span<const Token> span(const Statement& s) const {
        return std::span<const Token>(tokens).subspan(s.begin, s.size());
    }
};

}  // namespace arrhide
