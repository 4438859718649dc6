#pragma once

#include <string>
#include <vector>

namespace seamlab {

enum class TokenKind {
    Keyword,
    Identifier,
    Number,
    String,
    Operator,
    Punctuation,
    Newline,
    Comment,
    End,  // sentinel appended by the tokenizer
};

struct Token {
    TokenKind kind;
    std::string lexeme;  // comments keep their leading '%'
    int line;
    int column;
};

/// Splits source text into tokens. Whitespace is skipped; comments and
/// newlines are preserved as tokens so later passes can see them.
std::vector<Token> tokenize(const std::string& source_text);

bool is_keyword(const std::string& word);

}  // namespace seamlab
