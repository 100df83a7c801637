#include <map>
#include <set>

#include "micropat/frontend.hpp"
#include "syntax_util.hpp"

namespace micropat {

namespace {

using namespace ast;

const std::set<std::string_view> kGlobals = {
    "msg",    "block",     "tx",        "abi",       "this",   "super",  "now",     "gasleft",  "blockhash",
    "keccak256", "sha256", "sha3",      "ripemd160", "ecrecover", "addmod", "mulmod", "selfdestruct", "suicide",
    "type",   "require",   "assert",    "revert",    "payable", "string", "bytes",   "address payable",
};

std::string last_segment(const std::string& name)
{
    auto dot = name.rfind('.');
    return dot == std::string::npos ? name : name.substr(dot + 1);
}

// Everything visible from inside one entity's bodies.
struct EntityScope {
    std::map<std::string, std::string> state_types;
    std::set<std::string> declared_symbols;  // functions, modifiers, events, structs, enums
    std::set<std::string> events;
    std::set<std::string> functions;
};

void collect_scope(const Entity& e, const ProjectSymbols& symbols, EntityScope& scope, std::set<std::string>& visited)
{
    if (!visited.insert(e.name).second)
        return;
    for (const auto& v : e.state_vars)
        scope.state_types.emplace(v.name, v.declared_type);  // derived declarations win
    for (const auto& f : e.functions) {
        scope.declared_symbols.insert(f.name);
        scope.functions.insert(f.name);
    }
    for (const auto& m : e.modifiers)
        scope.declared_symbols.insert(m.name);
    for (const auto& ev : e.events) {
        scope.declared_symbols.insert(ev.name);
        scope.events.insert(ev.name);
    }
    for (const auto& s : e.struct_names)
        scope.declared_symbols.insert(s);
    for (const auto& s : e.enum_names)
        scope.declared_symbols.insert(s);
    for (const auto& base : e.bases) {
        auto it = symbols.entities.find(last_segment(base));
        if (it != symbols.entities.end())
            collect_scope(*it->second, symbols, scope, visited);
    }
}

void collect_locals(const Stmt* st, std::map<std::string, std::string>& locals)
{
    if (!st)
        return;
    for (const auto& v : st->vars)
        if (!v.name.empty())
            locals[v.name] = v.type;
    for (const auto& c : st->catches)
        for (const auto& v : c.params)
            if (!v.name.empty())
                locals[v.name] = v.type;
    for (const auto& child : st->body)
        collect_locals(child.get(), locals);
}

class FactWalker {
public:
    FactWalker(const EntityScope& scope, const ProjectSymbols& symbols, std::string context,
               std::map<std::string, std::string> locals)
        : scope_(scope), symbols_(symbols), context_(std::move(context)), locals_(std::move(locals))
    {
    }

    std::vector<SourceFact> take() { return std::move(facts_); }

    void statement(const Stmt* st)
    {
        if (!st)
            return;
        switch (st->kind) {
        case StmtKind::block:
        case StmtKind::unchecked_block:
            for (const auto& s : st->body)
                statement(s.get());
            break;
        case StmtKind::if_:
            expr(st->exprs[0].get(), true);
            for (const auto& s : st->body)
                statement(s.get());
            break;
        case StmtKind::for_:
            statement(st->body[0].get());
            expr(st->exprs[0].get());
            statement(st->body[1].get());
            expr(st->exprs[1].get());
            break;
        case StmtKind::while_:
            expr(st->exprs[0].get());
            statement(st->body[0].get());
            break;
        case StmtKind::do_while:
            statement(st->body[0].get());
            expr(st->exprs[0].get());
            break;
        case StmtKind::emit:
            emit_statement(st->exprs[0].get());
            break;
        case StmtKind::placeholder: {
            SourceFact f = make(FactKind::placeholder_marker, context_, SubjectScope::type);
            facts_.push_back(std::move(f));
            break;
        }
        case StmtKind::return_:
        case StmtKind::revert:
        case StmtKind::var_decl:
        case StmtKind::expression:
            for (const auto& e : st->exprs)
                expr(e.get());
            break;
        case StmtKind::try_:
            expr(st->exprs[0].get());
            for (const auto& s : st->body)
                statement(s.get());
            break;
        case StmtKind::break_:
        case StmtKind::continue_:
        case StmtKind::throw_:
        case StmtKind::assembly:
            break;
        }
    }

private:
    const EntityScope& scope_;
    const ProjectSymbols& symbols_;
    std::string context_;
    std::map<std::string, std::string> locals_;
    std::vector<SourceFact> facts_;

    SourceFact make(FactKind kind, const std::string& subject, SubjectScope scope) const
    {
        SourceFact f;
        f.kind = kind;
        f.scope = scope;
        f.subject = scope == SubjectScope::unresolved ? "unresolved" : subject;
        f.context = context_;
        return f;
    }

    SubjectScope resolve(const std::string& name) const
    {
        if (locals_.contains(name))
            return SubjectScope::local;
        if (scope_.state_types.contains(name))
            return SubjectScope::state;
        if (scope_.declared_symbols.contains(name) || symbols_.entity_kinds.contains(name)
            || symbols_.struct_names.contains(name) || symbols_.enum_names.contains(name)
            || symbols_.value_type_aliases.contains(name))
            return SubjectScope::type;
        if (kGlobals.contains(name) || detail::is_elementary_type_name(name))
            return SubjectScope::global;
        return SubjectScope::unresolved;
    }

    std::string type_of_name(const std::string& name) const
    {
        if (auto it = locals_.find(name); it != locals_.end())
            return it->second;
        if (auto it = scope_.state_types.find(name); it != scope_.state_types.end())
            return it->second;
        return {};
    }

    bool is_cast_callee(const Expr& callee) const
    {
        if (callee.kind != ExprKind::identifier)
            return false;
        const std::string& n = callee.text;
        return n == "payable" || n == "address" || n == "address payable" || detail::is_elementary_type_name(n)
            || symbols_.is_contract_type(n);
    }

    // Strips type conversions such as payable(x), address(uint160(x)), IERC20(x).
    const Expr* unwrap_casts(const Expr* e) const
    {
        while (e && e->kind == ExprKind::call && e->children.size() == 2 && is_cast_callee(*e->children[0]))
            e = e->children[1].get();
        return e;
    }

    bool is_sender(const Expr* e) const
    {
        e = unwrap_casts(e);
        if (!e)
            return false;
        if (e->kind == ExprKind::member && e->text == "sender" && e->children[0]->kind == ExprKind::identifier
            && e->children[0]->text == "msg")
            return true;
        return e->kind == ExprKind::call && e->children.size() == 1 && e->children[0]->kind == ExprKind::identifier
            && e->children[0]->text == "_msgSender";
    }

    Recipient recipient(const Expr* e) const { return is_sender(e) ? Recipient::msg_sender : Recipient::other; }

    std::string type_of(const Expr* e) const
    {
        if (!e)
            return {};
        switch (e->kind) {
        case ExprKind::identifier:
            return type_of_name(e->text);
        case ExprKind::index:
            return detail::indexed_type(type_of(e->children[0].get()));
        case ExprKind::call:
            if (e->children.size() == 2 && e->children[0]->kind == ExprKind::identifier
                && symbols_.is_contract_type(e->children[0]->text))
                return e->children[0]->text;
            return {};
        default:
            return {};
        }
    }

    bool contract_typed(const std::string& type) const
    {
        return !type.empty() && symbols_.is_contract_type(type);
    }

    // Root identifier of an lvalue or receiver chain: a.b[c].d -> a.
    std::pair<std::string, SubjectScope> root_subject(const Expr* e) const
    {
        e = unwrap_casts(e);
        while (e && (e->kind == ExprKind::member || e->kind == ExprKind::index || e->kind == ExprKind::slice))
            e = unwrap_casts(e->children[0].get());
        if (e && e->kind == ExprKind::identifier)
            return {e->text, resolve(e->text)};
        return {"unresolved", SubjectScope::unresolved};
    }

    void emit_statement(const Expr* call)
    {
        if (!call)
            return;
        if (call->kind == ExprKind::call) {
            const Expr* callee = call->children[0].get();
            const std::string& name = callee->text;
            facts_.push_back(make(FactKind::emit_event, name, SubjectScope::type));
            for (std::size_t i = 1; i < call->children.size(); ++i)
                expr(call->children[i].get());
        } else {
            expr(call);
        }
    }

    void ether_transfer(const Expr* to)
    {
        SourceFact f = make(FactKind::ether_transfer, "", SubjectScope::global);
        auto [name, sc] = root_subject(to);
        f.subject = sc == SubjectScope::unresolved ? "unresolved" : name;
        f.scope = sc;
        f.recipient = recipient(to);
        facts_.push_back(std::move(f));
    }

    void member_call(const Expr& callee, std::size_t nargs, const Expr* first_arg)
    {
        const Expr* recv = callee.children[0].get();
        const std::string& m = callee.text;
        if (recv->kind == ExprKind::identifier) {
            SubjectScope sc = resolve(recv->text);
            if (sc == SubjectScope::type && symbols_.is_library(recv->text)) {
                SourceFact f = make(FactKind::library_qualified_call, recv->text, sc);
                f.member = m;
                facts_.push_back(std::move(f));
                if (m == "sendValue" && first_arg)
                    ether_transfer(first_arg);
                return;
            }
            if (sc == SubjectScope::global || sc == SubjectScope::type)
                return;
        }
        // legacy addr.call.value(v)(...)
        if (m == "value" && recv->kind == ExprKind::member && recv->text == "call") {
            ether_transfer(recv->children[0].get());
            return;
        }
        bool typed = contract_typed(type_of(recv));
        if (!typed && nargs == 1 && (m == "transfer" || m == "send" || m == "sendValue")) {
            ether_transfer(recv);
            if (m != "sendValue")
                return;
        }
        auto [name, sc] = root_subject(recv);
        SourceFact f = make(typed ? FactKind::external_member_call : FactKind::attached_call, name, sc);
        f.member = m;
        facts_.push_back(std::move(f));
    }

    void call(const Expr& e, bool condition)
    {
        const Expr* callee = e.children[0].get();
        std::size_t nargs = e.children.size() - 1;
        const Expr* first = nargs > 0 ? e.children[1].get() : nullptr;
        std::size_t start_arg = 1;
        if (callee->kind == ExprKind::identifier) {
            const std::string& name = callee->text;
            if (name == "require" && first && resolve(name) == SubjectScope::global) {
                expr(first, true);
                start_arg = 2;
            } else if (scope_.events.contains(name) && !scope_.functions.contains(name) && !locals_.contains(name)) {
                // pre-0.4.21 event invocation without `emit`
                facts_.push_back(make(FactKind::emit_event, name, SubjectScope::type));
            }
        } else if (callee->kind == ExprKind::member) {
            member_call(*callee, nargs, first);
            expr(callee->children[0].get(), condition);
        } else if (callee->kind == ExprKind::call_options) {
            const Expr* inner = callee->children[0].get();
            bool has_value = std::find(callee->names.begin(), callee->names.end(), "value") != callee->names.end();
            if (inner->kind == ExprKind::member && inner->text == "call" && has_value)
                ether_transfer(inner->children[0].get());
            else if (inner->kind == ExprKind::member)
                member_call(*inner, nargs, first);
            if (inner->kind == ExprKind::member)
                expr(inner->children[0].get(), condition);
            else
                expr(inner, condition);
            for (std::size_t i = 1; i < callee->children.size(); ++i)
                expr(callee->children[i].get(), condition);
        } else {
            expr(callee, condition);
        }
        for (std::size_t i = start_arg; i < e.children.size(); ++i)
            expr(e.children[i].get(), condition);
    }

    void assignment_target(const Expr* target, const std::string& op, const Expr* rhs)
    {
        if (!target)
            return;
        if (target->kind == ExprKind::tuple) {
            for (const auto& c : target->children)
                assignment_target(c.get(), "=", nullptr);
            return;
        }
        auto [name, sc] = root_subject(target);
        SourceFact f = make(FactKind::assigns_var, name, sc);
        if (target->kind == ExprKind::index) {
            f.assign = AssignDetail::indexed;
        } else if (target->kind == ExprKind::identifier && op == "=" && rhs) {
            if (rhs->kind == ExprKind::literal
                && (rhs->literal == LiteralKind::bool_true || rhs->literal == LiteralKind::bool_false))
                f.assign = AssignDetail::bool_literal;
            else if (rhs->kind == ExprKind::unary && rhs->text == "!" && !rhs->postfix
                     && rhs->children[0]->kind == ExprKind::identifier && rhs->children[0]->text == target->text)
                f.assign = AssignDetail::negation;
            else
                f.assign = AssignDetail::other;
        } else {
            f.assign = AssignDetail::other;
        }
        facts_.push_back(std::move(f));
    }

    void expr(const Expr* e, bool condition = false, bool plain_store = false)
    {
        if (!e)
            return;
        switch (e->kind) {
        case ExprKind::identifier:
            if (condition) {
                SubjectScope sc = resolve(e->text);
                if (sc == SubjectScope::state || sc == SubjectScope::local || sc == SubjectScope::unresolved)
                    facts_.push_back(make(FactKind::conditional_check, e->text, sc));
            }
            break;
        case ExprKind::literal:
        case ExprKind::new_expr:
        case ExprKind::type_expr:
            break;
        case ExprKind::member:
            expr(e->children[0].get(), condition);
            break;
        case ExprKind::index:
            if (e->children.size() > 1 && is_sender(e->children[1].get()) && !plain_store) {
                auto [name, sc] = root_subject(e->children[0].get());
                SourceFact f = make(FactKind::reads_var, name, sc);
                f.keyed_by_sender = true;
                facts_.push_back(std::move(f));
            }
            for (const auto& c : e->children)
                expr(c.get(), condition);
            break;
        case ExprKind::call:
            call(*e, condition);
            break;
        case ExprKind::assign:
            expr(e->children[1].get(), condition);
            expr(e->children[0].get(), false, e->text == "=");
            assignment_target(e->children[0].get(), e->text, e->children[1].get());
            break;
        case ExprKind::unary:
            expr(e->children[0].get(), condition);
            if (e->text == "++" || e->text == "--" || e->text == "delete")
                assignment_target(e->children[0].get(), e->text, nullptr);
            break;
        case ExprKind::slice:
        case ExprKind::call_options:
        case ExprKind::binary:
        case ExprKind::conditional:
        case ExprKind::tuple:
        case ExprKind::inline_array:
            for (const auto& c : e->children)
                expr(c.get(), condition, plain_store && e->kind == ExprKind::tuple);
            break;
        }
    }
};

}  // namespace

void ProjectSymbols::add(const SourceUnit& unit)
{
    for (const auto& s : unit.struct_names)
        struct_names.insert(s);
    for (const auto& s : unit.enum_names)
        enum_names.insert(s);
    for (const auto& [alias, underlying] : unit.value_type_aliases)
        value_type_aliases.emplace(alias, underlying);
    for (const auto& syn : unit.entities) {
        const Entity& e = syn.entity;
        entity_kinds.emplace(e.name, e.kind);
        entities.emplace(e.name, &e);
        for (const auto& s : e.struct_names) {
            struct_names.insert(s);
            struct_names.insert(e.name + "." + s);
        }
        for (const auto& s : e.enum_names) {
            enum_names.insert(s);
            enum_names.insert(e.name + "." + s);
        }
        for (const auto& [alias, underlying] : e.value_type_aliases) {
            value_type_aliases.emplace(alias, underlying);
            value_type_aliases.emplace(e.name + "." + alias, underlying);
        }
        if (e.kind == EntityKind::library) {
            auto& fns = library_functions[e.name];
            for (const auto& f : e.functions)
                fns.insert(f.name);
        }
    }
}

bool ProjectSymbols::is_contract_type(const std::string& type_name) const
{
    auto it = entity_kinds.find(last_segment(type_name));
    return it != entity_kinds.end() && it->second != EntityKind::library;
}

bool ProjectSymbols::is_library(const std::string& name) const
{
    auto it = entity_kinds.find(last_segment(name));
    return it != entity_kinds.end() && it->second == EntityKind::library;
}

std::vector<SourceFact> extract_facts(EntitySyntax& syntax, const ProjectSymbols& symbols)
{
    Entity& entity = syntax.entity;
    EntityScope scope;
    std::set<std::string> visited;
    // Own members first so they shadow inherited ones; then the base chain.
    for (const auto& v : entity.state_vars)
        scope.state_types.emplace(v.name, v.declared_type);
    collect_scope(entity, symbols, scope, visited);

    std::vector<SourceFact> all;
    auto params_to_locals = [](const std::vector<Param>& params, std::map<std::string, std::string>& locals) {
        for (const auto& p : params)
            if (!p.name.empty())
                locals[p.name] = p.type;
    };

    for (std::size_t i = 0; i < entity.functions.size(); ++i) {
        FunctionDef& f = entity.functions[i];
        const Stmt* body = i < syntax.function_bodies.size() ? syntax.function_bodies[i].get() : nullptr;
        std::map<std::string, std::string> locals;
        params_to_locals(f.params, locals);
        params_to_locals(f.return_params, locals);
        collect_locals(body, locals);
        FactWalker walker(scope, symbols, f.name, std::move(locals));
        walker.statement(body);
        f.facts = walker.take();
        all.insert(all.end(), f.facts.begin(), f.facts.end());
    }
    for (std::size_t i = 0; i < entity.modifiers.size(); ++i) {
        ModifierDef& m = entity.modifiers[i];
        const Stmt* body = i < syntax.modifier_bodies.size() ? syntax.modifier_bodies[i].get() : nullptr;
        std::map<std::string, std::string> locals;
        params_to_locals(m.params, locals);
        collect_locals(body, locals);
        FactWalker walker(scope, symbols, m.name, std::move(locals));
        walker.statement(body);
        m.facts = walker.take();
        m.placeholder_positions.clear();
        for (std::size_t k = 0; k < m.facts.size(); ++k)
            if (m.facts[k].kind == FactKind::placeholder_marker)
                m.placeholder_positions.push_back(k);
        all.insert(all.end(), m.facts.begin(), m.facts.end());
    }
    return all;
}

}  // namespace micropat
