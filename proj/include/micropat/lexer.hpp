#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace micropat {

enum class TokenKind { identifier, number, string, punct, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;  // string literals hold their unquoted contents
    int line = 0;

    bool is(std::string_view s) const { return kind != TokenKind::string && text == s; }
};

class LexError : public std::runtime_error {
public:
    LexError(const std::string& what, int line)
        : std::runtime_error(what), line_(line)
    {
    }
    int line() const { return line_; }

private:
    int line_;
};

// Tokenizes Solidity source. Comments are dropped; `pragma` directives are
// captured as a single identifier token "pragma" followed by one string token
// holding the raw directive text up to the terminating ';'.
std::vector<Token> tokenize(std::string_view source);

struct SourceDirectives {
    std::vector<std::string> imports;
    std::vector<std::string> solidity_pragmas;  // constraint text only
};

// Cheap pass over a file used by ingestion: import paths and solidity pragmas.
SourceDirectives scan_directives(std::string_view source);

}  // namespace micropat
