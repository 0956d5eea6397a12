#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace oracle {

std::int64_t chainMod(std::int64_t a, std::size_t k, const std::vector<std::int64_t>& primes) {
    for (std::size_t j = k + 1; j-- > 0;) a %= primes.at(j);
    return a;
}

namespace {

bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

class ExprParser {
public:
    ExprParser(std::string_view text, const std::vector<std::int64_t>& primes) : s_(text), primes_(primes) {}

    std::int64_t parseAll() {
        const std::int64_t v = sum();
        skip();
        if (i_ != s_.size()) fail("trailing text");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error(what + " at offset " + std::to_string(i_));
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    static std::int64_t checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::runtime_error("overflow");
        return static_cast<std::int64_t>(v);
    }
    std::int64_t sum() {
        std::int64_t v = product();
        for (;;) {
            if (eat('+')) {
                v = checked(static_cast<__int128>(v) + product());
            } else if (eat('-')) {
                v = checked(static_cast<__int128>(v) - product());
            } else {
                return v;
            }
        }
    }
    std::int64_t product() {
        std::int64_t v = unary();
        for (;;) {
            if (eat('*')) {
                v = checked(static_cast<__int128>(v) * unary());
            } else if (eat('/') || eat('%')) {
                const char op = s_[i_ - 1];
                const std::int64_t r = unary();
                if (r == 0) fail("division by zero");
                v = op == '/' ? v / r : v % r;
            } else {
                return v;
            }
        }
    }
    std::int64_t unary() {
        if (eat('-')) return checked(-static_cast<__int128>(unary()));
        return primary();
    }
    std::int64_t primary() {
        skip();
        if (eat('(')) {
            const std::int64_t v = sum();
            if (!eat(')')) fail("expected )");
            return v;
        }
        if (i_ + 1 < s_.size() && s_[i_] == 'F' && !identChar(s_[i_ + 1])) {
            ++i_;
            if (!eat('(')) fail("expected ( after F");
            const std::int64_t a = sum();
            if (!eat(',')) fail("expected ,");
            const std::int64_t k = sum();
            if (!eat(')')) fail("expected )");
            if (a < 0 || k < 0 || static_cast<std::size_t>(k) >= primes_.size()) fail("bad F arguments");
            return chainMod(a, static_cast<std::size_t>(k), primes_);
        }
        if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            __int128 v = 0;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                v = v * 10 + (s_[i_++] - '0');
                checked(v);
            }
            return static_cast<std::int64_t>(v);
        }
        fail("unexpected character");
    }

    std::string_view s_;
    const std::vector<std::int64_t>& primes_;
    std::size_t i_ = 0;
};

// Offsets of characters that are code (not inside a string or char literal).
std::vector<bool> codeMask(std::string_view text) {
    std::vector<bool> code(text.size(), true);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '"' && text[i] != '\'') continue;
        const char q = text[i];
        code[i] = false;
        for (++i; i < text.size() && text[i] != q; ++i) {
            code[i] = false;
            if (text[i] == '\\' && i + 1 < text.size()) code[++i] = false;
        }
        if (i < text.size()) code[i] = false;
    }
    return code;
}

}  // namespace

std::int64_t evalExpression(std::string_view text, const std::vector<std::int64_t>& primes) {
    return ExprParser(text, primes).parseAll();
}

std::map<std::size_t, std::size_t> recountFCalls(std::string_view text) {
    const std::vector<bool> code = codeMask(text);
    struct Site {
        std::size_t open;
        std::size_t close;
        std::size_t depth = 0;
    };
    std::vector<Site> sites;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!code[i] || text[i] != 'F') continue;
        if (i > 0 && (identChar(text[i - 1]) || text[i - 1] == '.')) continue;
        std::size_t j = i + 1;
        while (j < text.size() && text[j] == ' ') ++j;
        if (j >= text.size() || text[j] != '(') continue;
        // Skip definitions: the previous word is a type keyword.
        std::size_t b = i;
        while (b > 0 && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
        std::size_t w = b;
        while (w > 0 && identChar(text[w - 1])) --w;
        const std::string_view prev = text.substr(w, b - w);
        if (prev == "int" || prev == "long") continue;
        int depth = 0;
        std::size_t k = j;
        for (; k < text.size(); ++k) {
            if (!code[k]) continue;
            if (text[k] == '(') ++depth;
            if (text[k] == ')' && --depth == 0) break;
        }
        if (k >= text.size()) throw std::runtime_error("unclosed F call");
        sites.push_back({j, k});
    }
    // Inner sites are shorter; resolve them first.
    std::vector<std::size_t> order(sites.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sites[a].close - sites[a].open < sites[b].close - sites[b].open;
    });
    std::map<std::size_t, std::size_t> hist;
    for (std::size_t idx : order) {
        Site& s = sites[idx];
        std::size_t inner = 0;
        // Sites are in order of their open offset; nested ones follow this one.
        for (std::size_t o = idx + 1; o < sites.size() && sites[o].open < s.close; ++o) {
            inner = std::max(inner, sites[o].depth);
        }
        s.depth = inner + 1;
        ++hist[s.depth];
    }
    return hist;
}

std::size_t countDecimalLiterals(std::string_view text) {
    const std::vector<bool> code = codeMask(text);
    std::size_t n = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!code[i] || !std::isdigit(static_cast<unsigned char>(text[i]))) continue;
        const bool glued = i > 0 && (identChar(text[i - 1]) || text[i - 1] == '.');
        std::size_t j = i;
        while (j < text.size() && identChar(text[j])) ++j;
        const std::string_view run = text.substr(i, j - i);
        const bool digitsOnly = std::all_of(run.begin(), run.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        const bool decimal = digitsOnly && (run.size() == 1 || run[0] != '0') && !(j < text.size() && text[j] == '.');
        if (!glued && decimal) ++n;
        i = j - 1;
    }
    return n;
}

}  // namespace oracle
