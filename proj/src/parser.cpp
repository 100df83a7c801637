#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "micropat/frontend.hpp"
#include "micropat/lexer.hpp"
#include "syntax_util.hpp"

namespace micropat {

namespace {

using namespace ast;

const std::set<std::string_view> kDataLocations = {"memory", "storage", "calldata"};

// Identifiers that cannot start a type name in statement position.
const std::set<std::string_view> kNonTypeWords = {
    "delete", "new",    "true",  "false",    "emit",     "return", "revert", "assembly", "unchecked", "try",
    "if",     "for",    "while", "do",       "break",    "continue", "throw", "_",       "else",      "catch",
};

const std::set<std::string_view> kNumberUnits = {"wei",     "gwei",    "szabo", "finney", "ether", "seconds",
                                                 "minutes", "hours",   "days",  "weeks",  "years"};

struct BinaryOp {
    std::string_view text;
    int precedence;
    bool right_assoc;
};

constexpr BinaryOp kBinaryOps[] = {
    {"**", 13, true}, {"*", 12, false},  {"/", 12, false}, {"%", 12, false},  {"+", 11, false}, {"-", 11, false},
    {"<<", 10, false}, {">>", 10, false}, {">>>", 10, false}, {"&", 9, false}, {"^", 8, false}, {"|", 7, false},
    {"<", 6, false},  {">", 6, false},   {"<=", 6, false}, {">=", 6, false},  {"==", 5, false}, {"!=", 5, false},
    {"&&", 4, false}, {"||", 3, false},
};

const std::set<std::string_view> kAssignOps = {"=",  "+=", "-=", "*=",  "/=",  "%=",
                                               "|=", "&=", "^=", "<<=", ">>=", ">>>="};

ExprPtr make_expr(ExprKind kind, std::string text = {}, std::vector<ExprPtr> children = {})
{
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->text = std::move(text);
    e->children = std::move(children);
    return e;
}

class Parser {
public:
    Parser(const std::vector<Token>& tokens, std::string file)
        : toks_(tokens), file_(std::move(file)), match_(tokens.size(), 0)
    {
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.is("{") || t.is("(") || t.is("[")) {
                stack.push_back(i);
            } else if (t.is("}") || t.is(")") || t.is("]")) {
                char open = t.text[0] == '}' ? '{' : t.text[0] == ')' ? '(' : '[';
                if (stack.empty() || toks_[stack.back()].text[0] != open)
                    throw ParseError(fmt::format("unbalanced '{}'", t.text), t.line);
                match_[stack.back()] = i;
                match_[i] = stack.back();
                stack.pop_back();
            }
        }
        if (!stack.empty())
            throw ParseError(fmt::format("unclosed '{}'", toks_[stack.back()].text), toks_[stack.back()].line);
    }

    SourceUnit parse_unit()
    {
        SourceUnit unit;
        unit.file_path = file_;
        while (!at_end()) {
            const Token& t = peek();
            if (t.is("pragma")) {
                advance();
                std::string raw = peek().text;
                advance();
                expect(";");
                if (raw.starts_with("solidity") && unit.pragma.empty()) {
                    std::string_view c = std::string_view(raw).substr(8);
                    auto b = c.find_first_not_of(" \t\r\n");
                    unit.pragma = b == std::string_view::npos ? std::string{} : std::string(c.substr(b));
                }
            } else if (t.is("import")) {
                advance();
                std::string path;
                while (!at_end() && !at(";")) {
                    if (path.empty() && peek().kind == TokenKind::string)
                        path = peek().text;
                    advance_skipping_groups();
                }
                expect(";");
                unit.imports.push_back(path);
            } else if (t.is("contract") || t.is("interface") || t.is("library")
                       || (t.is("abstract") && peek(1).is("contract"))) {
                parse_entity(unit);
            } else if (t.is("struct") || t.is("enum")) {
                bool is_struct = t.is("struct");
                advance();
                std::string name = expect_identifier();
                (is_struct ? unit.struct_names : unit.enum_names).push_back(name);
                skip_group("{");
            } else if (t.is("type") && peek(1).kind == TokenKind::identifier && peek(2).is("is")) {
                advance();
                std::string name = expect_identifier();
                expect("is");
                unit.value_type_aliases.emplace_back(name, parse_type_name());
                expect(";");
            } else if (t.is("function")) {
                // free function: header up to its body or ';'
                while (!at_end() && !at("{") && !at(";"))
                    advance_skipping_groups();
                if (at("{"))
                    skip_group("{");
                else
                    expect(";");
            } else if (t.is(";")) {
                advance();
            } else {
                // event / error / using / file-level constants
                while (!at_end() && !at(";"))
                    advance_skipping_groups();
                if (at_end())
                    throw ParseError(fmt::format("unexpected '{}' at file level", t.text), t.line);
                expect(";");
            }
        }
        return unit;
    }

    // Used by the entity-isolation path to resume after a failed entity.
    std::size_t position() const { return pos_; }

private:
    const std::vector<Token>& toks_;
    std::string file_;
    std::vector<std::size_t> match_;
    std::size_t pos_ = 0;

    // --- token helpers ---------------------------------------------------

    const Token& peek(std::size_t k = 0) const
    {
        std::size_t i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    bool at(std::string_view s) const { return peek().is(s); }
    bool at_end() const { return peek().kind == TokenKind::end; }
    void advance()
    {
        if (!at_end())
            ++pos_;
    }
    bool accept(std::string_view s)
    {
        if (!at(s))
            return false;
        advance();
        return true;
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(fmt::format("{} (found '{}')", what, peek().text), peek().line);
    }
    void expect(std::string_view s)
    {
        if (!accept(s))
            fail(fmt::format("expected '{}'", s));
    }
    std::string expect_identifier()
    {
        if (peek().kind != TokenKind::identifier)
            fail("expected identifier");
        std::string name = peek().text;
        advance();
        return name;
    }
    // Skips a bracketed group starting at the current token.
    void skip_group(std::string_view open)
    {
        if (!at(open))
            fail(fmt::format("expected '{}'", open));
        pos_ = match_[pos_] + 1;
    }
    void advance_skipping_groups()
    {
        if (at("{") || at("(") || at("["))
            pos_ = match_[pos_] + 1;
        else
            advance();
    }

    // --- declarations ----------------------------------------------------

    void parse_entity(SourceUnit& unit)
    {
        int line = peek().line;
        EntityKind kind = EntityKind::contract;
        if (accept("abstract")) {
            kind = EntityKind::abstract_contract;
            expect("contract");
        } else if (accept("interface")) {
            kind = EntityKind::interface;
        } else if (accept("library")) {
            kind = EntityKind::library;
        } else {
            expect("contract");
        }
        std::string name = expect_identifier();

        // Locate the body first so that a failure inside can be isolated.
        std::size_t scan = pos_;
        while (scan < toks_.size() && !toks_[scan].is("{") && toks_[scan].kind != TokenKind::end)
            scan = (toks_[scan].is("(") || toks_[scan].is("[")) ? match_[scan] + 1 : scan + 1;
        if (scan >= toks_.size() || toks_[scan].kind == TokenKind::end)
            throw ParseError(fmt::format("missing body for '{}'", name), line);
        std::size_t close = match_[scan];

        EntitySyntax syntax;
        syntax.entity.name = name;
        syntax.entity.kind = kind;
        syntax.entity.file_path = file_;
        syntax.entity.compiler_version = unit.pragma;
        try {
            if (accept("is")) {
                do {
                    std::string base = expect_identifier();
                    while (at(".") && peek(1).kind == TokenKind::identifier) {
                        advance();
                        base += "." + expect_identifier();
                    }
                    if (at("("))
                        skip_group("(");
                    syntax.entity.bases.push_back(base);
                } while (accept(","));
            }
            expect("{");
            while (pos_ < close)
                parse_member(syntax);
            if (kind == EntityKind::interface && !syntax.entity.state_vars.empty())
                throw ParseError("interface declares state variables", line);
            if (kind == EntityKind::interface
                && std::any_of(syntax.entity.functions.begin(), syntax.entity.functions.end(),
                               [](const FunctionDef& f) { return f.has_body; }))
                throw ParseError("interface function with a body", line);
            if (kind == EntityKind::library && !syntax.entity.bases.empty())
                throw ParseError("library declares base contracts", line);
            unit.entities.push_back(std::move(syntax));
        } catch (const ParseError& e) {
            unit.failed.push_back(FailedEntity{name, kind, file_, e.what()});
            unit.issues.push_back(ParseIssue{file_, e.line(), name, e.what()});
        }
        pos_ = close + 1;
    }

    void parse_member(EntitySyntax& s)
    {
        Entity& ent = s.entity;
        if (at("function") || ((at("constructor") || at("fallback") || at("receive")) && peek(1).is("("))) {
            parse_function(s);
        } else if (at("modifier")) {
            parse_modifier(s);
        } else if (accept("event")) {
            EventDef ev;
            ev.name = expect_identifier();
            ev.params = parse_params();
            accept("anonymous");
            expect(";");
            ent.events.push_back(std::move(ev));
        } else if (accept("error")) {
            expect_identifier();
            parse_params();
            expect(";");
        } else if (at("struct") || at("enum")) {
            bool is_struct = at("struct");
            advance();
            std::string name = expect_identifier();
            (is_struct ? ent.struct_names : ent.enum_names).push_back(name);
            skip_group("{");
        } else if (accept("using")) {
            UsingDirective u;
            if (at("{")) {
                skip_group("{");
            } else {
                u.library = expect_identifier();
                while (accept("."))
                    u.library += "." + expect_identifier();
            }
            expect("for");
            if (accept("*"))
                u.target = "*";
            else
                u.target = parse_type_name();
            accept("global");
            expect(";");
            ent.using_directives.push_back(std::move(u));
        } else if (at("type") && peek(1).kind == TokenKind::identifier && peek(2).is("is")) {
            advance();
            std::string alias = expect_identifier();
            expect("is");
            ent.value_type_aliases.emplace_back(alias, parse_type_name());
            expect(";");
        } else if (accept(";")) {
        } else {
            parse_state_var(ent);
        }
    }

    void parse_state_var(Entity& ent)
    {
        StateVar v;
        v.declared_type = parse_type_name();
        v.decl_index = static_cast<int>(ent.state_vars.size());
        while (true) {
            if (accept("public"))
                v.visibility = Visibility::public_;
            else if (accept("private"))
                v.visibility = Visibility::private_;
            else if (accept("internal"))
                v.visibility = Visibility::internal;
            else if (accept("constant"))
                v.mutability = VarMutability::constant;
            else if (accept("immutable"))
                v.mutability = VarMutability::immutable;
            else if (accept("transient")) {
            } else if (accept("override")) {
                if (at("("))
                    skip_group("(");
            } else
                break;
        }
        v.name = expect_identifier();
        if (accept("="))
            parse_expression();
        expect(";");
        ent.state_vars.push_back(std::move(v));
    }

    Param parse_param(bool allow_indexed)
    {
        Param p;
        p.type = parse_type_name();
        while (peek().kind == TokenKind::identifier
               && (kDataLocations.contains(peek().text) || (allow_indexed && peek().text == "indexed")))
            advance();
        if (peek().kind == TokenKind::identifier)
            p.name = expect_identifier();
        return p;
    }

    std::vector<Param> parse_params(bool allow_indexed = true)
    {
        std::vector<Param> params;
        expect("(");
        if (accept(")"))
            return params;
        do {
            params.push_back(parse_param(allow_indexed));
        } while (accept(","));
        expect(")");
        return params;
    }

    void parse_function(EntitySyntax& s)
    {
        Entity& ent = s.entity;
        FunctionDef f;
        f.declared_in = ent.name;
        if (accept("constructor")) {
            f.special = FunctionSpecial::constructor;
            f.name = "constructor";
        } else if (accept("fallback")) {
            f.special = FunctionSpecial::fallback;
            f.name = "fallback";
        } else if (accept("receive")) {
            f.special = FunctionSpecial::receive;
            f.name = "receive";
        } else {
            expect("function");
            if (at("(")) {
                f.special = FunctionSpecial::fallback;  // pre-0.6 unnamed fallback
                f.name = "fallback";
            } else {
                f.name = expect_identifier();
                if (f.name == ent.name) {
                    f.special = FunctionSpecial::constructor;  // pre-0.4.22 constructor
                    f.name = "constructor";
                }
            }
        }
        f.params = parse_params(false);
        bool explicit_visibility = false;
        while (!at(";") && !at("{")) {
            if (at_end())
                fail("unterminated function header");
            if (accept("public")) {
                f.visibility = Visibility::public_;
                explicit_visibility = true;
            } else if (accept("external")) {
                f.visibility = Visibility::external;
                explicit_visibility = true;
            } else if (accept("internal")) {
                f.visibility = Visibility::internal;
                explicit_visibility = true;
            } else if (accept("private")) {
                f.visibility = Visibility::private_;
                explicit_visibility = true;
            } else if (accept("view") || accept("constant")) {
                f.mutability = StateMutability::view;
            } else if (accept("pure")) {
                f.mutability = StateMutability::pure;
            } else if (accept("payable")) {
                f.mutability = StateMutability::payable;
            } else if (accept("virtual")) {
            } else if (accept("override")) {
                if (at("("))
                    skip_group("(");
            } else if (accept("returns")) {
                f.return_params = parse_params(false);
            } else if (peek().kind == TokenKind::identifier) {
                std::string mod = expect_identifier();
                while (at(".") && peek(1).kind == TokenKind::identifier) {
                    advance();
                    mod += "." + expect_identifier();
                }
                if (at("("))
                    skip_group("(");
                f.modifiers_invoked.push_back(mod);
            } else {
                fail("unexpected token in function header");
            }
        }
        if (!explicit_visibility)
            f.visibility = ent.kind == EntityKind::interface ? Visibility::external : Visibility::public_;
        BlockPtr body;
        if (at("{")) {
            f.has_body = true;
            body = parse_block();
        } else {
            expect(";");
        }
        ent.functions.push_back(std::move(f));
        s.function_bodies.push_back(std::move(body));
    }

    void parse_modifier(EntitySyntax& s)
    {
        expect("modifier");
        ModifierDef m;
        m.declared_in = s.entity.name;
        m.name = expect_identifier();
        if (at("("))
            m.params = parse_params(false);
        while (!at(";") && !at("{")) {
            if (accept("virtual")) {
            } else if (accept("override")) {
                if (at("("))
                    skip_group("(");
            } else {
                fail("unexpected token in modifier header");
            }
        }
        BlockPtr body;
        if (at("{")) {
            m.has_body = true;
            body = parse_block(true);
        } else {
            expect(";");
        }
        s.entity.modifiers.push_back(std::move(m));
        s.modifier_bodies.push_back(std::move(body));
    }

    // --- types -----------------------------------------------------------

    std::string parse_type_name()
    {
        std::string base;
        if (accept("mapping")) {
            expect("(");
            std::string key = parse_type_name();
            if (peek().kind == TokenKind::identifier)
                advance();
            expect("=>");
            std::string value = parse_type_name();
            if (peek().kind == TokenKind::identifier)
                advance();
            expect(")");
            base = "mapping(" + key + "=>" + value + ")";
        } else if (accept("function")) {
            auto params = parse_params(false);
            base = "function(";
            for (std::size_t i = 0; i < params.size(); ++i)
                base += (i ? "," : "") + detail::abi_type(params[i].type);
            base += ")";
            static const std::set<std::string_view> attrs = {"external", "internal", "public", "private",
                                                             "view",     "pure",     "payable", "constant"};
            while (peek().kind == TokenKind::identifier && attrs.contains(peek().text)) {
                base += " " + peek().text;
                advance();
            }
            if (at("returns")) {
                advance();
                auto rets = parse_params(false);
                base += " returns(";
                for (std::size_t i = 0; i < rets.size(); ++i)
                    base += (i ? "," : "") + detail::abi_type(rets[i].type);
                base += ")";
            }
        } else {
            std::string name = expect_identifier();
            if (name == "address" && at("payable")) {
                advance();
                base = "address payable";
            } else {
                base = detail::normalize_elementary(name);
                while (at(".") && peek(1).kind == TokenKind::identifier) {
                    advance();
                    base += "." + expect_identifier();
                }
            }
        }
        while (at("[")) {
            advance();
            if (accept("]")) {
                base += "[]";
                continue;
            }
            ExprPtr size = parse_expression();
            expect("]");
            base += "[" + detail::print_expr(*size) + "]";
        }
        return base;
    }

    // --- statements ------------------------------------------------------

    BlockPtr parse_block(bool in_modifier = false)
    {
        auto block = std::make_shared<Stmt>();
        block->kind = StmtKind::block;
        block->line = peek().line;
        expect("{");
        while (!at("}")) {
            if (at_end())
                fail("unterminated block");
            block->body.push_back(parse_statement(in_modifier));
        }
        expect("}");
        return block;
    }

    StmtPtr parse_statement(bool in_modifier)
    {
        auto st = std::make_shared<Stmt>();
        st->line = peek().line;
        if (at("{"))
            return parse_block(in_modifier);
        if (at("unchecked") && peek(1).is("{")) {
            advance();
            st->kind = StmtKind::unchecked_block;
            st->body.push_back(parse_block(in_modifier));
            return st;
        }
        if (accept("if")) {
            st->kind = StmtKind::if_;
            expect("(");
            st->exprs.push_back(parse_expression());
            expect(")");
            st->body.push_back(parse_statement(in_modifier));
            if (accept("else"))
                st->body.push_back(parse_statement(in_modifier));
            return st;
        }
        if (accept("for")) {
            st->kind = StmtKind::for_;
            expect("(");
            if (accept(";"))
                st->body.push_back(nullptr);
            else
                st->body.push_back(parse_simple_statement());
            st->exprs.push_back(at(";") ? nullptr : parse_expression());
            expect(";");
            st->exprs.push_back(at(")") ? nullptr : parse_expression());
            expect(")");
            st->body.push_back(parse_statement(in_modifier));
            return st;
        }
        if (accept("while")) {
            st->kind = StmtKind::while_;
            expect("(");
            st->exprs.push_back(parse_expression());
            expect(")");
            st->body.push_back(parse_statement(in_modifier));
            return st;
        }
        if (accept("do")) {
            st->kind = StmtKind::do_while;
            st->body.push_back(parse_statement(in_modifier));
            expect("while");
            expect("(");
            st->exprs.push_back(parse_expression());
            expect(")");
            expect(";");
            return st;
        }
        if (accept("return")) {
            st->kind = StmtKind::return_;
            if (!at(";"))
                st->exprs.push_back(parse_expression());
            expect(";");
            return st;
        }
        if (accept("emit")) {
            st->kind = StmtKind::emit;
            st->exprs.push_back(parse_expression());
            expect(";");
            return st;
        }
        if (at("revert") && !peek(1).is("(") && !peek(1).is(";")) {
            advance();
            st->kind = StmtKind::revert;
            st->exprs.push_back(parse_expression());
            expect(";");
            return st;
        }
        if (at("break") || at("continue") || at("throw")) {
            st->kind = at("break") ? StmtKind::break_ : at("continue") ? StmtKind::continue_ : StmtKind::throw_;
            advance();
            expect(";");
            return st;
        }
        if (at("_") && peek(1).is(";")) {
            if (!in_modifier)
                fail("placeholder outside modifier");
            advance();
            advance();
            st->kind = StmtKind::placeholder;
            return st;
        }
        if (accept("assembly")) {
            st->kind = StmtKind::assembly;
            if (peek().kind == TokenKind::string)
                advance();
            if (at("("))
                skip_group("(");
            if (!at("{"))
                fail("expected assembly block");
            std::size_t close = match_[pos_];
            for (std::size_t i = pos_; i <= close; ++i) {
                if (i > pos_)
                    st->text += ' ';
                st->text += toks_[i].kind == TokenKind::string ? "\"" + toks_[i].text + "\"" : toks_[i].text;
            }
            pos_ = close + 1;
            return st;
        }
        if (accept("try")) {
            st->kind = StmtKind::try_;
            st->exprs.push_back(parse_expression());
            if (accept("returns")) {
                st->has_returns = true;
                for (const auto& p : parse_param_vars())
                    st->vars.push_back(p);
            }
            st->body.push_back(parse_block(in_modifier));
            while (accept("catch")) {
                CatchClause clause;
                if (peek().kind == TokenKind::identifier)
                    clause.name = expect_identifier();
                if (at("(")) {
                    clause.has_params = true;
                    clause.params = parse_param_vars();
                }
                st->catches.push_back(std::move(clause));
                st->body.push_back(parse_block(in_modifier));
            }
            return st;
        }
        return parse_simple_statement();
    }

    std::vector<LocalVar> parse_param_vars()
    {
        std::vector<LocalVar> vars;
        for (auto& p : parse_params(false))
            vars.push_back(LocalVar{p.type, {}, p.name});
        return vars;
    }

    // Variable declaration or expression statement, consuming the ';'.
    StmtPtr parse_simple_statement()
    {
        auto st = std::make_shared<Stmt>();
        st->line = peek().line;
        if (auto decl = try_parse_declaration()) {
            st = std::const_pointer_cast<Stmt>(decl);
            expect(";");
            return st;
        }
        st->kind = StmtKind::expression;
        st->exprs.push_back(parse_expression());
        expect(";");
        return st;
    }

    StmtPtr try_parse_declaration()
    {
        std::size_t start = pos_;
        auto st = std::make_shared<Stmt>();
        st->kind = StmtKind::var_decl;
        st->line = peek().line;
        try {
            if (accept("var")) {
                if (accept("(")) {
                    st->tuple = true;
                    while (!at(")")) {
                        if (at(",")) {
                            st->vars.push_back(LocalVar{});
                        } else {
                            st->vars.push_back(LocalVar{{}, {}, expect_identifier()});
                        }
                        if (!accept(","))
                            break;
                        if (at(")"))
                            st->vars.push_back(LocalVar{});
                    }
                    expect(")");
                } else {
                    st->vars.push_back(LocalVar{{}, {}, expect_identifier()});
                }
            } else if (at("(")) {
                advance();
                st->tuple = true;
                while (true) {
                    if (at(",")) {
                        st->vars.push_back(LocalVar{});
                    } else if (at(")")) {
                        if (!st->vars.empty())
                            st->vars.push_back(LocalVar{});
                        break;
                    } else {
                        st->vars.push_back(parse_local_var());
                    }
                    if (!accept(","))
                        break;
                }
                expect(")");
                if (!at("="))
                    throw ParseError("not a tuple declaration", peek().line);
            } else {
                if (peek().kind != TokenKind::identifier || kNonTypeWords.contains(peek().text))
                    throw ParseError("not a declaration", peek().line);
                st->vars.push_back(parse_local_var());
                if (!at("=") && !at(";"))
                    throw ParseError("not a declaration", peek().line);
            }
        } catch (const ParseError&) {
            pos_ = start;
            return nullptr;
        }
        if (accept("="))
            st->exprs.push_back(parse_expression());
        return st;
    }

    LocalVar parse_local_var()
    {
        if (peek().kind != TokenKind::identifier || kNonTypeWords.contains(peek().text))
            throw ParseError("not a declaration", peek().line);
        LocalVar v;
        v.type = parse_type_name();
        if (peek().kind == TokenKind::identifier && kDataLocations.contains(peek().text)) {
            v.location = peek().text;
            advance();
        }
        if (peek().kind != TokenKind::identifier)
            throw ParseError("not a declaration", peek().line);
        v.name = expect_identifier();
        return v;
    }

    // --- expressions -----------------------------------------------------

    ExprPtr parse_expression()
    {
        ExprPtr lhs = parse_binary(3);
        if (accept("?")) {
            ExprPtr then = parse_expression();
            expect(":");
            ExprPtr otherwise = parse_expression();
            return make_expr(ExprKind::conditional, {}, {lhs, then, otherwise});
        }
        if (peek().kind == TokenKind::punct && kAssignOps.contains(peek().text)) {
            std::string op = peek().text;
            advance();
            ExprPtr rhs = parse_expression();
            return make_expr(ExprKind::assign, op, {lhs, rhs});
        }
        return lhs;
    }

    const BinaryOp* binary_op() const
    {
        if (peek().kind != TokenKind::punct)
            return nullptr;
        for (const auto& op : kBinaryOps)
            if (peek().text == op.text)
                return &op;
        return nullptr;
    }

    ExprPtr parse_binary(int min_precedence)
    {
        ExprPtr lhs = parse_unary();
        while (const BinaryOp* op = binary_op()) {
            if (op->precedence < min_precedence)
                break;
            advance();
            ExprPtr rhs = parse_binary(op->right_assoc ? op->precedence : op->precedence + 1);
            lhs = make_expr(ExprKind::binary, std::string(op->text), {lhs, rhs});
        }
        return lhs;
    }

    ExprPtr parse_unary()
    {
        for (std::string_view op : {"!", "-", "~", "++", "--", "+"}) {
            if (peek().kind == TokenKind::punct && peek().text == op) {
                advance();
                return make_expr(ExprKind::unary, std::string(op), {parse_unary()});
            }
        }
        if (at("delete")) {
            advance();
            return make_expr(ExprKind::unary, "delete", {parse_unary()});
        }
        return parse_postfix(parse_primary());
    }

    ExprPtr parse_primary()
    {
        const Token& t = peek();
        if (t.kind == TokenKind::number) {
            std::string text = t.text;
            advance();
            if (peek().kind == TokenKind::identifier && kNumberUnits.contains(peek().text)) {
                text += " " + peek().text;
                advance();
            }
            auto e = make_expr(ExprKind::literal, text);
            std::const_pointer_cast<Expr>(e)->literal = LiteralKind::number;
            return e;
        }
        if (t.kind == TokenKind::string) {
            std::string text;
            while (peek().kind == TokenKind::string) {
                text += peek().text;
                advance();
            }
            auto e = make_expr(ExprKind::literal, text);
            std::const_pointer_cast<Expr>(e)->literal = LiteralKind::string;
            return e;
        }
        if (t.is("true") || t.is("false")) {
            auto e = make_expr(ExprKind::literal, t.text);
            std::const_pointer_cast<Expr>(e)->literal = t.is("true") ? LiteralKind::bool_true : LiteralKind::bool_false;
            advance();
            return e;
        }
        if (accept("new"))
            return make_expr(ExprKind::new_expr, parse_type_name());
        if (t.is("mapping") || (t.is("function") && peek(1).is("(")))
            return make_expr(ExprKind::type_expr, parse_type_name());
        if (t.kind == TokenKind::identifier) {
            std::string name = t.text;
            advance();
            if (name == "address" && at("payable")) {
                advance();
                name = "address payable";
            }
            return make_expr(ExprKind::identifier, name);
        }
        if (at("(")) {
            advance();
            std::vector<ExprPtr> items;
            bool trailing_comma = false;
            if (!at(")")) {
                while (true) {
                    if (at(",") || at(")"))
                        items.push_back(nullptr);
                    else
                        items.push_back(parse_expression());
                    if (!accept(","))
                        break;
                    if (at(")")) {
                        items.push_back(nullptr);
                        trailing_comma = true;
                        break;
                    }
                }
            }
            expect(")");
            if (items.size() == 1 && items[0] && !trailing_comma)
                return items[0];
            return make_expr(ExprKind::tuple, {}, std::move(items));
        }
        if (accept("[")) {
            std::vector<ExprPtr> items;
            if (!at("]")) {
                do {
                    items.push_back(parse_expression());
                } while (accept(","));
            }
            expect("]");
            return make_expr(ExprKind::inline_array, {}, std::move(items));
        }
        fail("expected expression");
    }

    ExprPtr parse_postfix(ExprPtr e)
    {
        while (true) {
            if (at(".")) {
                advance();
                e = make_expr(ExprKind::member, expect_identifier(), {e});
            } else if (at("[")) {
                advance();
                if (accept("]")) {
                    e = make_expr(ExprKind::index, {}, {e});
                    continue;
                }
                ExprPtr first = at(":") ? nullptr : parse_expression();
                if (accept(":")) {
                    ExprPtr second = at("]") ? nullptr : parse_expression();
                    expect("]");
                    e = make_expr(ExprKind::slice, {}, {e, first, second});
                } else {
                    expect("]");
                    e = make_expr(ExprKind::index, {}, {e, first});
                }
            } else if (at("(")) {
                advance();
                auto call = std::make_shared<Expr>();
                call->kind = ExprKind::call;
                call->children.push_back(e);
                if (at("{") && peek(1).kind == TokenKind::identifier && peek(2).is(":")) {
                    advance();
                    parse_named_values(*call, "}");
                } else if (!at(")")) {
                    do {
                        call->children.push_back(parse_expression());
                    } while (accept(","));
                }
                expect(")");
                e = call;
            } else if (at("{") && ((peek(1).kind == TokenKind::identifier && peek(2).is(":")) || peek(1).is("}"))) {
                advance();
                auto opts = std::make_shared<Expr>();
                opts->kind = ExprKind::call_options;
                opts->children.push_back(e);
                parse_named_values(*opts, "}");
                e = opts;
            } else if (at("++") || at("--")) {
                auto u = std::make_shared<Expr>();
                u->kind = ExprKind::unary;
                u->text = peek().text;
                u->postfix = true;
                u->children.push_back(e);
                advance();
                e = u;
            } else {
                return e;
            }
        }
    }

    // `name: value, ...` followed by `close`, which is consumed.
    void parse_named_values(Expr& into, std::string_view close)
    {
        while (!at(close)) {
            into.names.push_back(expect_identifier());
            expect(":");
            into.children.push_back(parse_expression());
            if (!accept(","))
                break;
        }
        expect(close);
    }
};

}  // namespace

SourceUnit parse_source(std::string_view text, const std::string& file_path)
{
    auto tokens = tokenize(text);
    Parser parser(tokens, file_path);
    return parser.parse_unit();
}

}  // namespace micropat
