#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace seamlab {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind {
        Number,      // num
        String,      // str
        ArrayLit,    // args = elements
        Var,         // name
        Field,       // target.name
        CallOrIndex, // target(args) -- call vs index resolved at runtime
        Unary,       // op, args[0]
        Binary,      // op, args[0], args[1]
        AnonFn,      // params, args[0] = body
        FnHandle,    // name
    };

    Kind kind;
    int line = 0;
    int column = 0;

    double num = 0;
    std::string str;
    std::string name;
    std::string op;
    ExprPtr target;
    std::vector<ExprPtr> args;
    std::vector<std::string> params;
};

struct Stmt {
    enum class Kind { Assign, ExprStmt, For, While, If, TryCatch, Return };

    Kind kind;
    int line = 0;

    ExprPtr lhs;   // Assign target: Var, Field, or CallOrIndex(Var, [index])
    ExprPtr rhs;   // Assign value / ExprStmt expression
    ExprPtr cond;  // While / If condition

    std::string var;  // For loop variable
    ExprPtr from, to, step;

    std::vector<Stmt> body;  // For/While body, If then-branch, Try body
    std::vector<std::pair<ExprPtr, std::vector<Stmt>>> elifs;
    std::vector<Stmt> else_body;  // If else-branch / Catch body
    std::string catch_var;
};

struct FunctionDef {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> outputs;
    std::vector<Stmt> body;
    int first_line = 0;
    int last_line = 0;
};

struct Program {
    enum class Kind { Script, FunctionFile };

    Kind kind;
    std::vector<FunctionDef> functions;  // FunctionFile: first is the entry
    std::vector<Stmt> script_body;
    std::string source_path;
    std::string name;  // entry function name, or file stem for scripts

    const FunctionDef* find_function(const std::string& fn) const;
};

}  // namespace seamlab
