#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hgl/error.hpp"

namespace hgl {

struct Token {
    enum Kind { Ident, Punct, Newline, End };
    Kind kind = End;
    std::string text;
    int line = 0;
    int col = 0;
};

// Tokenizer shared by every text format. `#` starts a comment, `;` acts as a
// line break. Identifiers take letters, digits, `_`, `'`, `@` and any
// non-ASCII byte; the Unicode connectives ⊗ ⊸ ⊢ ∀ ∃ are folded into their
// ASCII spellings.
class Lexer {
public:
    explicit Lexer(std::string_view text, int first_line = 1, bool keep_newlines = true);

    const Token& peek(std::size_t k = 0) const;
    Token next();
    bool at(std::string_view text) const;
    bool at_ident() const { return peek().kind == Token::Ident; }
    bool at_end() const { return peek().kind == Token::End; }
    bool at_line_end() const {
        return peek().kind == Token::Newline || peek().kind == Token::End;
    }
    bool accept(std::string_view text);
    Token expect(std::string_view text);
    Token expect_ident(const std::string& what);
    void skip_newlines();
    void end_statement();

    [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }
    [[noreturn]] static void fail(const std::string& msg, const Token& at);

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string describe(const Token& t);

}  // namespace hgl
