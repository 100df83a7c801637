#include <fmt/format.h>

#include "micropat/frontend.hpp"
#include "syntax_util.hpp"

namespace micropat {

namespace {

using namespace ast;

std::string params_text(const std::vector<Param>& params)
{
    std::string out = "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i)
            out += ", ";
        out += params[i].type;
        if (!params[i].name.empty())
            out += " " + params[i].name;
    }
    return out + ")";
}

std::string local_var_text(const LocalVar& v)
{
    if (v.name.empty())
        return {};
    std::string out = v.type.empty() ? std::string{} : v.type + " ";
    if (!v.location.empty())
        out += v.location + " ";
    return out + v.name;
}

std::string expr_text(const ExprPtr& e)
{
    return e ? detail::print_expr(*e) : std::string{};
}

// Top-level expression statements read better without the outer parens.
std::string statement_expr(const ExprPtr& e)
{
    std::string s = expr_text(e);
    if (e && e->kind == ExprKind::assign && s.size() >= 2)
        return s.substr(1, s.size() - 2);
    return s;
}

class Printer {
public:
    std::string out;

    void line(int depth, const std::string& text) { out += std::string(depth * 4, ' ') + text + "\n"; }

    // Non-block bodies are braced so `else` can never attach to the wrong `if`.
    void body(const StmtPtr& st, int depth)
    {
        if (st && st->kind == StmtKind::block) {
            block(*st, depth, "");
        } else {
            line(depth - 1, "{");
            statement(st, depth);
            line(depth - 1, "}");
        }
    }

    void block(const Stmt& st, int depth, const std::string& head)
    {
        line(depth - 1, head + "{");
        for (const auto& s : st.body)
            statement(s, depth);
        line(depth - 1, "}");
    }

    std::string simple(const StmtPtr& st)
    {
        if (!st)
            return {};
        if (st->kind == StmtKind::var_decl) {
            std::string decl;
            bool is_var = !st->vars.empty() && std::all_of(st->vars.begin(), st->vars.end(), [](const LocalVar& v) {
                return v.type.empty();
            });
            if (st->tuple) {
                decl = is_var ? "var (" : "(";
                for (std::size_t i = 0; i < st->vars.size(); ++i) {
                    if (i)
                        decl += ", ";
                    decl += is_var ? st->vars[i].name : local_var_text(st->vars[i]);
                }
                decl += ")";
            } else {
                decl = is_var ? "var " + st->vars[0].name : local_var_text(st->vars[0]);
            }
            if (!st->exprs.empty())
                decl += " = " + expr_text(st->exprs[0]);
            return decl;
        }
        return statement_expr(st->exprs.empty() ? nullptr : st->exprs[0]);
    }

    void statement(const StmtPtr& st, int depth)
    {
        if (!st)
            return;
        switch (st->kind) {
        case StmtKind::block:
            block(*st, depth + 1, "");
            break;
        case StmtKind::unchecked_block:
            line(depth, "unchecked");
            block(*st->body[0], depth + 1, "");
            break;
        case StmtKind::if_:
            line(depth, "if (" + expr_text(st->exprs[0]) + ")");
            body(st->body[0], depth + 1);
            if (st->body.size() > 1) {
                line(depth, "else");
                body(st->body[1], depth + 1);
            }
            break;
        case StmtKind::for_:
            line(depth, "for (" + simple(st->body[0]) + "; " + expr_text(st->exprs[0]) + "; "
                            + statement_expr(st->exprs[1]) + ")");
            body(st->body[1], depth + 1);
            break;
        case StmtKind::while_:
            line(depth, "while (" + expr_text(st->exprs[0]) + ")");
            body(st->body[0], depth + 1);
            break;
        case StmtKind::do_while:
            line(depth, "do");
            body(st->body[0], depth + 1);
            line(depth, "while (" + expr_text(st->exprs[0]) + ");");
            break;
        case StmtKind::return_:
            line(depth, st->exprs.empty() ? "return;" : "return " + expr_text(st->exprs[0]) + ";");
            break;
        case StmtKind::emit:
            line(depth, "emit " + expr_text(st->exprs[0]) + ";");
            break;
        case StmtKind::revert:
            line(depth, "revert " + expr_text(st->exprs[0]) + ";");
            break;
        case StmtKind::var_decl:
        case StmtKind::expression:
            line(depth, simple(st) + ";");
            break;
        case StmtKind::placeholder:
            line(depth, "_;");
            break;
        case StmtKind::break_:
            line(depth, "break;");
            break;
        case StmtKind::continue_:
            line(depth, "continue;");
            break;
        case StmtKind::throw_:
            line(depth, "throw;");
            break;
        case StmtKind::assembly:
            line(depth, "assembly " + st->text);
            break;
        case StmtKind::try_: {
            std::string head = "try " + expr_text(st->exprs[0]);
            if (st->has_returns) {
                head += " returns (";
                for (std::size_t i = 0; i < st->vars.size(); ++i)
                    head += (i ? ", " : "") + var_or_type(st->vars[i]);
                head += ")";
            }
            block(*st->body[0], depth + 1, head + " ");
            for (std::size_t c = 0; c < st->catches.size(); ++c) {
                const CatchClause& clause = st->catches[c];
                std::string h = "catch";
                if (!clause.name.empty())
                    h += " " + clause.name;
                if (clause.has_params) {
                    h += " (";
                    for (std::size_t i = 0; i < clause.params.size(); ++i)
                        h += (i ? ", " : "") + var_or_type(clause.params[i]);
                    h += ")";
                }
                block(*st->body[c + 1], depth + 1, h + " ");
            }
            break;
        }
        }
    }

    static std::string var_or_type(const LocalVar& v) { return v.name.empty() ? v.type : v.type + " " + v.name; }
};

std::string visibility_word(Visibility v)
{
    return v == Visibility::default_ ? std::string{} : std::string(to_string(v));
}

void print_entity(Printer& p, const EntitySyntax& syn)
{
    const Entity& e = syn.entity;
    std::string head = fmt::format("{} {}", e.kind == EntityKind::abstract_contract ? "abstract contract" : to_string(e.kind), e.name);
    if (!e.bases.empty()) {
        head += " is ";
        for (std::size_t i = 0; i < e.bases.size(); ++i)
            head += (i ? ", " : "") + e.bases[i];
    }
    p.line(0, head + " {");
    for (const auto& u : e.using_directives)
        p.line(1, fmt::format("using {} for {};", u.library.empty() ? "{_}" : u.library, u.target));
    for (const auto& s : e.struct_names)
        p.line(1, fmt::format("struct {} {{ uint256 _; }}", s));
    for (const auto& s : e.enum_names)
        p.line(1, fmt::format("enum {} {{ _ }}", s));
    for (const auto& [alias, underlying] : e.value_type_aliases)
        p.line(1, fmt::format("type {} is {};", alias, underlying));
    for (const auto& ev : e.events)
        p.line(1, fmt::format("event {}{};", ev.name, params_text(ev.params)));
    for (const auto& v : e.state_vars) {
        std::string text = v.declared_type + " " + visibility_word(v.visibility);
        if (v.mutability != VarMutability::plain)
            text += " " + std::string(to_string(v.mutability));
        p.line(1, text + " " + v.name + ";");
    }
    for (std::size_t i = 0; i < e.modifiers.size(); ++i) {
        const ModifierDef& m = e.modifiers[i];
        std::string text = "modifier " + m.name + params_text(m.params);
        const auto& b = i < syn.modifier_bodies.size() ? syn.modifier_bodies[i] : nullptr;
        if (b)
            p.block(*b, 2, text + " ");
        else
            p.line(1, text + ";");
    }
    for (std::size_t i = 0; i < e.functions.size(); ++i) {
        const FunctionDef& f = e.functions[i];
        std::string text;
        switch (f.special) {
        case FunctionSpecial::constructor: text = "constructor"; break;
        case FunctionSpecial::fallback: text = "fallback"; break;
        case FunctionSpecial::receive: text = "receive"; break;
        case FunctionSpecial::none: text = "function " + f.name; break;
        }
        text += params_text(f.params);
        std::string vis = visibility_word(f.visibility);
        if (!vis.empty())
            text += " " + vis;
        if (f.mutability != StateMutability::nonpayable)
            text += " " + std::string(to_string(f.mutability));
        for (const auto& m : f.modifiers_invoked)
            text += " " + m;
        if (!f.return_params.empty())
            text += " returns " + params_text(f.return_params);
        const auto& b = i < syn.function_bodies.size() ? syn.function_bodies[i] : nullptr;
        if (b)
            p.block(*b, 2, text + " ");
        else
            p.line(1, text + ";");
    }
    p.line(0, "}");
}

}  // namespace

std::string print_source(const SourceUnit& unit)
{
    Printer p;
    if (!unit.pragma.empty())
        p.line(0, "pragma solidity " + unit.pragma + ";");
    for (const auto& imp : unit.imports)
        p.line(0, "import \"" + imp + "\";");
    for (const auto& s : unit.struct_names)
        p.line(0, fmt::format("struct {} {{ uint256 _; }}", s));
    for (const auto& s : unit.enum_names)
        p.line(0, fmt::format("enum {} {{ _ }}", s));
    for (const auto& [alias, underlying] : unit.value_type_aliases)
        p.line(0, fmt::format("type {} is {};", alias, underlying));
    for (const auto& syn : unit.entities)
        print_entity(p, syn);
    return p.out;
}

}  // namespace micropat
