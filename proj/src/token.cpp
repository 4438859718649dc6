#include "seamlab/token.hpp"

#include <array>
#include <cctype>

#include "seamlab/error.hpp"

namespace seamlab {

bool is_keyword(const std::string& word) {
    static const std::array<const char*, 10> kw = {
        "function", "for", "while", "if", "elseif",
        "else", "end", "try", "catch", "return",
    };
    for (const char* k : kw)
        if (word == k) return true;
    return false;
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> tokens;
    size_t i = 0;
    int line = 1, col = 1;

    auto push = [&](TokenKind kind, std::string lexeme, int l, int c) {
        tokens.push_back(Token{kind, std::move(lexeme), l, c});
    };

    while (i < src.size()) {
        char c = src[i];
        int tl = line, tc = col;

        if (c == '\r') {
            ++i;
            ++col;
            continue;
        }
        if (c == '\n') {
            push(TokenKind::Newline, "\n", tl, tc);
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t') {
            ++i;
            ++col;
            continue;
        }
        if (c == '%') {
            size_t j = i;
            while (j < src.size() && src[j] != '\n') ++j;
            std::string text = src.substr(i, j - i);
            while (!text.empty() && text.back() == '\r') text.pop_back();
            push(TokenKind::Comment, text, tl, tc);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (c == '\'') {
            std::string text;
            size_t j = i + 1;
            int ccol = col + 1;
            bool closed = false;
            while (j < src.size()) {
                if (src[j] == '\n') break;
                if (src[j] == '\'') {
                    if (j + 1 < src.size() && src[j + 1] == '\'') {
                        text += '\'';
                        j += 2;
                        ccol += 2;
                        continue;
                    }
                    closed = true;
                    ++j;
                    ++ccol;
                    break;
                }
                text += src[j];
                ++j;
                ++ccol;
            }
            if (!closed) {
                throw Error(ErrorKind::Lex,
                            "unterminated string at line " + std::to_string(tl) +
                                ", column " + std::to_string(tc));
            }
            push(TokenKind::String, text, tl, tc);
            col = ccol;
            i = j;
            continue;
        }
        if (digit(c) || (c == '.' && i + 1 < src.size() && digit(src[i + 1]))) {
            size_t j = i;
            while (j < src.size() && digit(src[j])) ++j;
            if (j < src.size() && src[j] == '.' && j + 1 < src.size() && digit(src[j + 1])) {
                ++j;
                while (j < src.size() && digit(src[j])) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && digit(src[k])) {
                    while (k < src.size() && digit(src[k])) ++k;
                    j = k;
                }
            }
            push(TokenKind::Number, src.substr(i, j - i), tl, tc);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (ident_start(c)) {
            size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            std::string word = src.substr(i, j - i);
            TokenKind kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
            push(kind, std::move(word), tl, tc);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }

        // two-char operators first
        if (i + 1 < src.size()) {
            std::string two = src.substr(i, 2);
            if (two == "==" || two == "~=" || two == "<=" || two == ">=" ||
                two == "&&" || two == "||") {
                push(TokenKind::Operator, two, tl, tc);
                i += 2;
                col += 2;
                continue;
            }
        }
        switch (c) {
            case '=': case '+': case '-': case '*': case '/': case '^':
            case '<': case '>': case '~':
                push(TokenKind::Operator, std::string(1, c), tl, tc);
                ++i;
                ++col;
                continue;
            case '(': case ')': case '[': case ']': case ',': case ';':
            case ':': case '.': case '@':
                push(TokenKind::Punctuation, std::string(1, c), tl, tc);
                ++i;
                ++col;
                continue;
            default:
                throw Error(ErrorKind::Lex,
                            std::string("illegal character '") + c + "' at line " +
                                std::to_string(tl) + ", column " + std::to_string(tc));
        }
    }
    tokens.push_back(Token{TokenKind::End, "", line, col});
    return tokens;
}

}  // namespace seamlab
