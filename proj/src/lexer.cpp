#include "micropat/lexer.hpp"

#include <array>
#include <cctype>

#include <fmt/format.h>

namespace micropat {

namespace {

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool ident_char(char c)
{
    return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

// Longest first so that maximal munch works with a linear scan.
constexpr std::array<std::string_view, 26> multi_char_punct = {
    ">>>=", "<<=", ">>=", ">>>", "**", "=>", "==", "!=", "<=", ">=", "&&", "||", "++",
    "--",   "+=",  "-=",  "*=",  "/=", "%=", "|=", "&=", "^=", "<<", ">>", "->", ":=",
};

}  // namespace

std::vector<Token> tokenize(std::string_view src)
{
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    auto push = [&](TokenKind kind, std::string text) { out.push_back(Token{kind, std::move(text), line}); };

    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n')
                ++i;
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            int start_line = line;
            i += 2;
            while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) {
                if (src[i] == '\n')
                    ++line;
                ++i;
            }
            if (i + 1 >= src.size())
                throw LexError("unterminated block comment", start_line);
            i += 2;
            continue;
        }
        if (ident_start(c)) {
            std::size_t start = i;
            while (i < src.size() && ident_char(src[i]))
                ++i;
            std::string word(src.substr(start, i - start));
            // hex"..", unicode".." literals
            if ((word == "hex" || word == "unicode") && i < src.size() && (src[i] == '"' || src[i] == '\'')) {
                c = src[i];
            } else {
                bool is_pragma = word == "pragma";
                push(TokenKind::identifier, std::move(word));
                if (is_pragma) {
                    std::size_t body = i;
                    while (i < src.size() && src[i] != ';') {
                        if (src[i] == '\n')
                            ++line;
                        ++i;
                    }
                    std::string_view raw = src.substr(body, i - body);
                    std::size_t b = raw.find_first_not_of(" \t\r\n");
                    std::size_t e = raw.find_last_not_of(" \t\r\n");
                    push(TokenKind::string, b == std::string_view::npos ? std::string{} : std::string(raw.substr(b, e - b + 1)));
                }
                continue;
            }
        }
        if (c == '"' || c == '\'') {
            char quote = c;
            int start_line = line;
            ++i;
            std::string text;
            while (i < src.size() && src[i] != quote) {
                if (src[i] == '\\' && i + 1 < src.size()) {
                    text += src[i];
                    ++i;
                }
                if (src[i] == '\n')
                    ++line;
                text += src[i];
                ++i;
            }
            if (i >= src.size())
                throw LexError("unterminated string literal", start_line);
            ++i;
            push(TokenKind::string, std::move(text));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t start = i;
            if (c == '0' && i + 1 < src.size() && (src[i + 1] == 'x' || src[i + 1] == 'X')) {
                i += 2;
                while (i < src.size() && (std::isxdigit(static_cast<unsigned char>(src[i])) || src[i] == '_'))
                    ++i;
            } else {
                while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '_' || src[i] == '.'))
                    ++i;
                if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                    ++i;
                    if (i < src.size() && src[i] == '-')
                        ++i;
                    while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])))
                        ++i;
                }
            }
            push(TokenKind::number, std::string(src.substr(start, i - start)));
            continue;
        }
        bool matched = false;
        for (std::string_view p : multi_char_punct) {
            if (src.substr(i, p.size()) == p) {
                push(TokenKind::punct, std::string(p));
                i += p.size();
                matched = true;
                break;
            }
        }
        if (matched)
            continue;
        static constexpr std::string_view singles = "{}()[];,.=+-*/%!~&|^<>?:@";
        if (singles.find(c) == std::string_view::npos)
            throw LexError(fmt::format("unexpected character '{}'", c), line);
        push(TokenKind::punct, std::string(1, c));
        ++i;
    }
    out.push_back(Token{TokenKind::end, {}, line});
    return out;
}

SourceDirectives scan_directives(std::string_view source)
{
    SourceDirectives out;
    auto tokens = tokenize(source);
    int depth = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (t.is("{"))
            ++depth;
        else if (t.is("}"))
            --depth;
        if (depth != 0 || t.kind != TokenKind::identifier)
            continue;
        if (t.text == "pragma" && i + 1 < tokens.size()) {
            std::string_view raw = tokens[i + 1].text;
            if (raw.starts_with("solidity")) {
                raw.remove_prefix(8);
                std::size_t b = raw.find_first_not_of(" \t\r\n");
                out.solidity_pragmas.emplace_back(b == std::string_view::npos ? std::string_view{} : raw.substr(b));
            }
        } else if (t.text == "import") {
            // The path is the first string literal before ';'.
            for (std::size_t j = i + 1; j < tokens.size() && !tokens[j].is(";"); ++j) {
                if (tokens[j].kind == TokenKind::string) {
                    out.imports.push_back(tokens[j].text);
                    break;
                }
            }
        }
    }
    return out;
}

}  // namespace micropat
