#include "hgl/lexer.hpp"

#include <cctype>

namespace hgl {

namespace {

struct Fold {
    std::string_view utf8;
    const char* ascii;
};

constexpr Fold kFolds[] = {
    {"\xE2\x8A\x97", "*"},   // ⊗
    {"\xE2\x8A\xB8", "-o"},  // ⊸
    {"\xE2\x8A\xA2", "|-"},  // ⊢
    {"\xE2\x88\x80", "fa"},  // ∀
    {"\xE2\x88\x83", "ex"},  // ∃
};

const Fold* fold_at(std::string_view s, std::size_t i) {
    for (const Fold& f : kFolds)
        if (s.substr(i, f.utf8.size()) == f.utf8) return &f;
    return nullptr;
}

bool ident_byte(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '\'' || c == '@' || c >= 0x80;
}

}  // namespace

Lexer::Lexer(std::string_view s, int first_line, bool keep_newlines) {
    int line = first_line;
    std::size_t line_start = 0;
    std::size_t i = 0;
    auto col = [&](std::size_t at) { return static_cast<int>(at - line_start) + 1; };
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (c == '\n') {
            if (keep_newlines) toks_.push_back({Token::Newline, "\n", line, col(i)});
            ++line;
            line_start = ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        if (c == ';') {
            if (keep_newlines) toks_.push_back({Token::Newline, ";", line, col(i)});
            ++i;
            continue;
        }
        if (const Fold* f = fold_at(s, i)) {
            Token::Kind k = std::isalpha(static_cast<unsigned char>(f->ascii[0])) ? Token::Ident
                                                                                   : Token::Punct;
            toks_.push_back({k, f->ascii, line, col(i)});
            i += f->utf8.size();
            continue;
        }
        std::string_view rest = s.substr(i);
        if (rest.starts_with("-o") || rest.starts_with("|-") || rest.starts_with("=>")) {
            toks_.push_back({Token::Punct, std::string(rest.substr(0, 2)), line, col(i)});
            i += 2;
            continue;
        }
        if (std::string_view("{}()[],.=:*!").find(static_cast<char>(c)) != std::string_view::npos) {
            toks_.push_back({Token::Punct, std::string(1, static_cast<char>(c)), line, col(i)});
            ++i;
            continue;
        }
        if (ident_byte(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_byte(static_cast<unsigned char>(s[j])) && !fold_at(s, j)) ++j;
            toks_.push_back({Token::Ident, std::string(s.substr(i, j - i)), line, col(i)});
            i = j;
            continue;
        }
        throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", line,
                         col(i));
    }
    toks_.push_back({Token::End, "", line, col(i)});
}

const Token& Lexer::peek(std::size_t k) const {
    std::size_t at = pos_ + k;
    return at < toks_.size() ? toks_[at] : toks_.back();
}

Token Lexer::next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
}

bool Lexer::at(std::string_view text) const {
    const Token& t = peek();
    return (t.kind == Token::Punct || t.kind == Token::Ident) && t.text == text;
}

bool Lexer::accept(std::string_view text) {
    if (!at(text)) return false;
    next();
    return true;
}

Token Lexer::expect(std::string_view text) {
    if (!at(text)) fail("expected '" + std::string(text) + "', found " + describe(peek()));
    return next();
}

Token Lexer::expect_ident(const std::string& what) {
    if (!at_ident()) fail("expected " + what + ", found " + describe(peek()));
    return next();
}

void Lexer::skip_newlines() {
    while (peek().kind == Token::Newline) next();
}

void Lexer::end_statement() {
    if (!at_line_end() && !at("}")) fail("unexpected " + describe(peek()));
    skip_newlines();
}

void Lexer::fail(const std::string& msg, const Token& at) { throw ParseError(msg, at.line, at.col); }

std::string describe(const Token& t) {
    switch (t.kind) {
        case Token::End: return "end of input";
        case Token::Newline: return "end of line";
        default: return "'" + t.text + "'";
    }
}

}  // namespace hgl
