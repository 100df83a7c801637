#include "syntax_util.hpp"

#include <cctype>

namespace micropat::detail {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

bool fixed_suffix(std::string_view s)
{
    // MxN
    auto x = s.find('x');
    return x != std::string_view::npos && all_digits(s.substr(0, x)) && all_digits(s.substr(x + 1));
}

}  // namespace

bool is_elementary_type_name(std::string_view n)
{
    if (n == "bool" || n == "string" || n == "bytes" || n == "address" || n == "byte" || n == "int" || n == "uint"
        || n == "fixed" || n == "ufixed")
        return true;
    if (n.starts_with("uint"))
        return all_digits(n.substr(4));
    if (n.starts_with("int"))
        return all_digits(n.substr(3));
    if (n.starts_with("bytes"))
        return all_digits(n.substr(5));
    if (n.starts_with("ufixed"))
        return fixed_suffix(n.substr(6));
    if (n.starts_with("fixed"))
        return fixed_suffix(n.substr(5));
    return false;
}

std::string normalize_elementary(std::string_view name)
{
    if (name == "uint")
        return "uint256";
    if (name == "int")
        return "int256";
    if (name == "byte")
        return "bytes1";
    if (name == "fixed")
        return "fixed128x18";
    if (name == "ufixed")
        return "ufixed128x18";
    return std::string(name);
}

std::string abi_type(std::string_view normalized)
{
    std::string out(normalized);
    const std::string_view payable = "address payable";
    for (auto pos = out.find(payable); pos != std::string::npos; pos = out.find(payable, pos))
        out.replace(pos, payable.size(), "address");
    return out;
}

bool split_mapping(std::string_view type, std::string& key, std::string& value)
{
    if (!type.starts_with("mapping(") || !type.ends_with(")"))
        return false;
    std::string_view inner = type.substr(8, type.size() - 9);
    int depth = 0;
    for (std::size_t i = 0; i + 1 < inner.size(); ++i) {
        char c = inner[i];
        if (c == '(' || c == '[')
            ++depth;
        else if (c == ')' || c == ']')
            --depth;
        else if (depth == 0 && c == '=' && inner[i + 1] == '>') {
            key = std::string(inner.substr(0, i));
            value = std::string(inner.substr(i + 2));
            return true;
        }
    }
    return false;
}

std::string indexed_type(std::string_view type)
{
    std::string key, value;
    if (split_mapping(type, key, value))
        return value;
    if (type.ends_with("]")) {
        int depth = 0;
        for (std::size_t i = type.size(); i-- > 0;) {
            if (type[i] == ']')
                ++depth;
            else if (type[i] == '[' && --depth == 0)
                return std::string(type.substr(0, i));
        }
    }
    if (type == "bytes" || type.starts_with("bytes"))
        return "bytes1";
    return {};
}

std::string print_expr(const ast::Expr& e)
{
    using ast::ExprKind;
    auto child = [&](std::size_t i) -> std::string {
        return i < e.children.size() && e.children[i] ? print_expr(*e.children[i]) : std::string{};
    };
    switch (e.kind) {
    case ExprKind::identifier:
    case ExprKind::type_expr:
        return e.text;
    case ExprKind::literal:
        if (e.literal == ast::LiteralKind::string) {
            std::string out = "\"";
            for (std::size_t i = 0; i < e.text.size(); ++i) {
                if (e.text[i] == '\\' && i + 1 < e.text.size()) {
                    out += e.text.substr(i, 2);
                    ++i;
                    continue;
                }
                if (e.text[i] == '"')
                    out += '\\';
                out += e.text[i];
            }
            return out + "\"";
        }
        return e.text;
    case ExprKind::member:
        return child(0) + "." + e.text;
    case ExprKind::index:
        return child(0) + "[" + child(1) + "]";
    case ExprKind::slice:
        return child(0) + "[" + child(1) + ":" + child(2) + "]";
    case ExprKind::call:
    case ExprKind::call_options: {
        bool named = !e.names.empty();
        std::string out = child(0) + (e.kind == ExprKind::call ? "(" : "{");
        if (named && e.kind == ExprKind::call)
            out += "{";
        for (std::size_t i = 1; i < e.children.size(); ++i) {
            if (i > 1)
                out += ", ";
            if (named)
                out += e.names[i - 1] + ": ";
            out += child(i);
        }
        if (named && e.kind == ExprKind::call)
            out += "}";
        out += e.kind == ExprKind::call ? ")" : "}";
        return out;
    }
    case ExprKind::unary:
        if (e.postfix)
            return "(" + child(0) + e.text + ")";
        return "(" + e.text + (e.text == "delete" ? " " : "") + child(0) + ")";
    case ExprKind::binary:
        return "(" + child(0) + " " + e.text + " " + child(1) + ")";
    case ExprKind::assign:
        return "(" + child(0) + " " + e.text + " " + child(1) + ")";
    case ExprKind::conditional:
        return "(" + child(0) + " ? " + child(1) + " : " + child(2) + ")";
    case ExprKind::tuple:
    case ExprKind::inline_array: {
        std::string out = e.kind == ExprKind::tuple ? "(" : "[";
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            if (i > 0)
                out += ", ";
            out += child(i);
        }
        return out + (e.kind == ExprKind::tuple ? ")" : "]");
    }
    case ExprKind::new_expr:
        return "new " + e.text;
    }
    return {};
}

}  // namespace micropat::detail
