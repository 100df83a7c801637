#pragma once

// Shallow syntax tree for function and modifier bodies. Only what the fact
// extractor and the source printer need is kept: expression shapes, not types.

#include <memory>
#include <string>
#include <vector>

namespace micropat::ast {

enum class ExprKind {
    identifier,
    literal,
    member,        // children: [object]; text: member name
    index,         // children: [base, index?]
    slice,         // children: [base, start?, end?]
    call,          // children: [callee, args...]; names: named-argument keys
    call_options,  // children: [callee, values...]; names: option keys
    unary,         // children: [operand]; text: operator; postfix flag
    binary,        // children: [lhs, rhs]; text: operator
    assign,        // children: [lhs, rhs]; text: operator
    conditional,   // children: [cond, then, else]
    tuple,         // children may be null for elided components
    inline_array,
    new_expr,      // text: type name
    type_expr,     // text: a type name used in expression position (mapping, arrays)
};

enum class LiteralKind { none, bool_true, bool_false, number, string };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind = ExprKind::identifier;
    std::string text;
    LiteralKind literal = LiteralKind::none;
    bool postfix = false;
    std::vector<ExprPtr> children;
    std::vector<std::string> names;
};

struct LocalVar {
    std::string type;  // empty for `var` and elided tuple slots
    std::string location;
    std::string name;  // empty for elided tuple slots
};

enum class StmtKind {
    block,
    unchecked_block,
    if_,
    for_,
    while_,
    do_while,
    return_,
    emit,
    revert,
    var_decl,
    expression,
    placeholder,
    break_,
    continue_,
    throw_,
    assembly,
    try_,
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

// Slot conventions:
//   if_:       exprs [cond]; body [then, else?]
//   for_:      body [init?, loop]; exprs [cond?, post?]
//   while_:    exprs [cond]; body [loop]       do_while: same
//   return_:   exprs [value?]
//   emit/revert: exprs [call]
//   var_decl:  vars; exprs [init?]; tuple flag when parenthesized
//   try_:      exprs [call]; vars: returns; body [success, catch...];
//              catch_clauses describe each catch
struct CatchClause {
    std::string name;  // "", "Error", "Panic"
    std::vector<LocalVar> params;
    bool has_params = false;
};

struct Stmt {
    StmtKind kind = StmtKind::expression;
    int line = 0;
    std::vector<ExprPtr> exprs;
    std::vector<StmtPtr> body;
    std::vector<LocalVar> vars;
    bool tuple = false;
    bool has_returns = false;
    std::vector<CatchClause> catches;
    std::string text;  // assembly block source tokens
};

using Block = Stmt;  // a StmtKind::block
using BlockPtr = StmtPtr;

}  // namespace micropat::ast
