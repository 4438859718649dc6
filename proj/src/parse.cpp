#include "seamlab/parse.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>

#include "seamlab/error.hpp"

namespace seamlab {

std::string path_stem(const std::string& path) {
    size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base;
}

const FunctionDef* Program::find_function(const std::string& fn) const {
    for (const auto& f : functions)
        if (f.name == fn) return &f;
    return nullptr;
}

namespace {

class Parser {
public:
    Parser(const std::vector<Token>& tokens, std::string path)
        : tokens_(tokens), path_(std::move(path)) {}

    std::shared_ptr<Program> parse_program() {
        auto program = std::make_shared<Program>();
        program->source_path = path_;

        skip_blank();
        if (at_keyword("function")) {
            program->kind = Program::Kind::FunctionFile;
            while (!at_end()) {
                program->functions.push_back(parse_function());
                skip_blank();
            }
            if (program->functions.empty())
                fail("expected at least one function");
            for (size_t i = 0; i < program->functions.size(); ++i)
                for (size_t j = i + 1; j < program->functions.size(); ++j)
                    if (program->functions[i].name == program->functions[j].name)
                        fail("duplicate function name '" + program->functions[i].name + "'");
            program->name = program->functions.front().name;
        } else {
            program->kind = Program::Kind::Script;
            program->script_body = parse_stmts({});
            program->name = path_stem(path_);
        }
        return program;
    }

private:
    const std::vector<Token>& tokens_;
    std::string path_;
    size_t pos_ = 0;

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    const Token& cur() const { return peek(); }
    bool at_end() const { return cur().kind == TokenKind::End; }
    void advance() { if (pos_ + 1 < tokens_.size()) ++pos_; }

    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = cur();
        Error e(ErrorKind::Parse,
                what + " at line " + std::to_string(t.line) + ", column " +
                    std::to_string(t.column) +
                    (t.kind == TokenKind::End ? " (end of input)"
                                              : " (found '" + t.lexeme + "')"));
        throw e;
    }

    bool at_keyword(const char* kw) const {
        return cur().kind == TokenKind::Keyword && cur().lexeme == kw;
    }
    bool at_op(const char* op) const {
        return cur().kind == TokenKind::Operator && cur().lexeme == op;
    }
    bool at_punct(const char* p) const {
        return cur().kind == TokenKind::Punctuation && cur().lexeme == p;
    }

    void expect_keyword(const char* kw) {
        if (!at_keyword(kw)) fail(std::string("expected '") + kw + "'");
        advance();
    }
    void expect_punct(const char* p) {
        if (!at_punct(p)) fail(std::string("expected '") + p + "'");
        advance();
    }
    std::string expect_identifier() {
        if (cur().kind != TokenKind::Identifier) fail("expected identifier");
        std::string name = cur().lexeme;
        advance();
        return name;
    }

    // skip newlines, comments and stray separators between statements
    void skip_blank() {
        while (cur().kind == TokenKind::Newline || cur().kind == TokenKind::Comment ||
               at_punct(";") || at_punct(","))
            advance();
    }
    // skip comments and a newline/separator ending the current statement
    void end_statement() {
        while (cur().kind == TokenKind::Comment) advance();
        if (cur().kind == TokenKind::Newline || at_punct(";") || at_punct(",")) {
            advance();
            return;
        }
        if (at_end() || at_keyword("end") || at_keyword("elseif") || at_keyword("else") ||
            at_keyword("catch") || at_keyword("function"))
            return;
        fail("expected end of statement");
    }

    FunctionDef parse_function() {
        FunctionDef fn;
        fn.first_line = cur().line;
        expect_keyword("function");

        // function name(...)  |  function out = name(...)  |  function [o1,o2] = name(...)
        std::vector<std::string> outputs;
        if (at_punct("[")) {
            advance();
            while (!at_punct("]")) {
                outputs.push_back(expect_identifier());
                if (at_punct(",")) advance();
            }
            expect_punct("]");
            if (!at_op("=")) fail("expected '='");
            advance();
            fn.name = expect_identifier();
        } else {
            std::string first = expect_identifier();
            if (at_op("=")) {
                advance();
                outputs.push_back(first);
                fn.name = expect_identifier();
            } else {
                fn.name = first;
            }
        }
        fn.outputs = std::move(outputs);

        if (at_punct("(")) {
            advance();
            while (!at_punct(")")) {
                fn.params.push_back(expect_identifier());
                if (at_punct(",")) advance();
            }
            expect_punct(")");
        }
        end_statement();
        fn.body = parse_stmts({"function"});
        // functions may optionally be end-terminated
        if (at_keyword("end")) {
            advance();
            end_statement();
        }
        fn.last_line = fn.body.empty() ? fn.first_line : last_line_of(fn.body);
        return fn;
    }

    static int last_line_of(const std::vector<Stmt>& stmts) {
        int line = 0;
        for (const auto& s : stmts) {
            line = std::max(line, s.line);
            line = std::max(line, s.body.empty() ? 0 : last_line_of(s.body));
            for (const auto& [c, b] : s.elifs)
                if (!b.empty()) line = std::max(line, last_line_of(b));
            if (!s.else_body.empty()) line = std::max(line, last_line_of(s.else_body));
        }
        return line;
    }

    bool at_block_close(const std::vector<const char*>& stops) const {
        if (at_end()) return true;
        if (cur().kind != TokenKind::Keyword) return false;
        for (const char* s : stops)
            if (cur().lexeme == s) return true;
        return cur().lexeme == "end" || cur().lexeme == "elseif" ||
               cur().lexeme == "else" || cur().lexeme == "catch";
    }

    std::vector<Stmt> parse_stmts(const std::vector<const char*>& stops) {
        std::vector<Stmt> stmts;
        for (;;) {
            skip_blank();
            if (at_block_close(stops)) return stmts;
            stmts.push_back(parse_stmt());
        }
    }

    Stmt parse_stmt() {
        int line = cur().line;
        if (at_keyword("for")) return parse_for();
        if (at_keyword("while")) return parse_while();
        if (at_keyword("if")) return parse_if();
        if (at_keyword("try")) return parse_try();
        if (at_keyword("return")) {
            Stmt s;
            s.kind = Stmt::Kind::Return;
            s.line = line;
            advance();
            end_statement();
            return s;
        }

        ExprPtr e = parse_expr();
        Stmt s;
        s.line = line;
        if (at_op("=")) {
            if (!assignable(*e)) fail("invalid assignment target");
            advance();
            s.kind = Stmt::Kind::Assign;
            s.lhs = e;
            s.rhs = parse_expr();
        } else {
            s.kind = Stmt::Kind::ExprStmt;
            s.rhs = e;
        }
        end_statement();
        return s;
    }

    static bool assignable(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Var:
            case Expr::Kind::Field:
                return true;
            case Expr::Kind::CallOrIndex:
                return e.target && e.target->kind == Expr::Kind::Var && e.args.size() == 1;
            default:
                return false;
        }
    }

    Stmt parse_for() {
        Stmt s;
        s.kind = Stmt::Kind::For;
        s.line = cur().line;
        expect_keyword("for");
        s.var = expect_identifier();
        if (!at_op("=")) fail("expected '='");
        advance();
        s.from = parse_expr();
        expect_punct(":");
        ExprPtr second = parse_expr();
        if (at_punct(":")) {
            advance();
            s.step = second;
            s.to = parse_expr();
        } else {
            s.to = second;
        }
        end_statement();
        s.body = parse_stmts({});
        expect_keyword("end");
        end_statement();
        return s;
    }

    Stmt parse_while() {
        Stmt s;
        s.kind = Stmt::Kind::While;
        s.line = cur().line;
        expect_keyword("while");
        s.cond = parse_expr();
        end_statement();
        s.body = parse_stmts({});
        expect_keyword("end");
        end_statement();
        return s;
    }

    Stmt parse_if() {
        Stmt s;
        s.kind = Stmt::Kind::If;
        s.line = cur().line;
        expect_keyword("if");
        s.cond = parse_expr();
        end_statement();
        s.body = parse_stmts({});
        while (at_keyword("elseif")) {
            advance();
            ExprPtr cond = parse_expr();
            end_statement();
            s.elifs.emplace_back(cond, parse_stmts({}));
        }
        if (at_keyword("else")) {
            advance();
            end_statement();
            s.else_body = parse_stmts({});
        }
        expect_keyword("end");
        end_statement();
        return s;
    }

    Stmt parse_try() {
        Stmt s;
        s.kind = Stmt::Kind::TryCatch;
        s.line = cur().line;
        expect_keyword("try");
        end_statement();
        s.body = parse_stmts({});
        if (at_keyword("catch")) {
            advance();
            if (cur().kind == TokenKind::Identifier) {
                s.catch_var = cur().lexeme;
                advance();
            }
            end_statement();
            s.else_body = parse_stmts({});
        }
        expect_keyword("end");
        end_statement();
        return s;
    }

    // ---- expressions ----------------------------------------------------

    ExprPtr make(Expr::Kind kind) {
        auto e = std::make_shared<Expr>();
        e->kind = kind;
        e->line = cur().line;
        e->column = cur().column;
        return e;
    }

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (at_op("||")) {
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Binary;
            e->op = "||";
            e->line = cur().line;
            e->column = cur().column;
            advance();
            e->args = {lhs, parse_and()};
            lhs = e;
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_cmp();
        while (at_op("&&")) {
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Binary;
            e->op = "&&";
            e->line = cur().line;
            e->column = cur().column;
            advance();
            e->args = {lhs, parse_cmp()};
            lhs = e;
        }
        return lhs;
    }

    bool at_cmp() const {
        return at_op("==") || at_op("~=") || at_op("<") || at_op("<=") ||
               at_op(">") || at_op(">=");
    }

    ExprPtr parse_cmp() {
        ExprPtr lhs = parse_add();
        while (at_cmp()) {
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Binary;
            e->op = cur().lexeme;
            e->line = cur().line;
            e->column = cur().column;
            advance();
            e->args = {lhs, parse_add()};
            lhs = e;
        }
        return lhs;
    }

    ExprPtr parse_add() {
        ExprPtr lhs = parse_mul();
        while (at_op("+") || at_op("-")) {
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Binary;
            e->op = cur().lexeme;
            e->line = cur().line;
            e->column = cur().column;
            advance();
            e->args = {lhs, parse_mul()};
            lhs = e;
        }
        return lhs;
    }

    ExprPtr parse_mul() {
        ExprPtr lhs = parse_unary();
        while (at_op("*") || at_op("/")) {
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Binary;
            e->op = cur().lexeme;
            e->line = cur().line;
            e->column = cur().column;
            advance();
            e->args = {lhs, parse_unary()};
            lhs = e;
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (at_op("-") || at_op("~") || at_op("+")) {
            auto e = make(Expr::Kind::Unary);
            auto mut = std::const_pointer_cast<Expr>(e);
            mut->op = cur().lexeme;
            advance();
            mut->args = {parse_unary()};
            return e;
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_postfix();
        if (at_op("^")) {
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Binary;
            e->op = "^";
            e->line = cur().line;
            e->column = cur().column;
            advance();
            e->args = {base, parse_unary()};  // right-assoc, binds above unary
            return e;
        }
        return base;
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        for (;;) {
            if (at_punct("(")) {
                auto call = std::make_shared<Expr>();
                call->kind = Expr::Kind::CallOrIndex;
                call->line = e->line;
                call->column = e->column;
                call->target = e;
                advance();
                while (!at_punct(")")) {
                    call->args.push_back(parse_expr());
                    if (at_punct(",")) advance();
                    else if (!at_punct(")")) fail("expected ',' or ')'");
                }
                expect_punct(")");
                e = call;
            } else if (at_punct(".") && peek(1).kind == TokenKind::Identifier) {
                auto field = std::make_shared<Expr>();
                field->kind = Expr::Kind::Field;
                field->line = e->line;
                field->column = e->column;
                field->target = e;
                advance();
                field->name = cur().lexeme;
                advance();
                e = field;
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_primary() {
        const Token& t = cur();
        switch (t.kind) {
            case TokenKind::Number: {
                auto e = make(Expr::Kind::Number);
                std::const_pointer_cast<Expr>(e)->num = std::strtod(t.lexeme.c_str(), nullptr);
                advance();
                return e;
            }
            case TokenKind::String: {
                auto e = make(Expr::Kind::String);
                std::const_pointer_cast<Expr>(e)->str = t.lexeme;
                advance();
                return e;
            }
            case TokenKind::Identifier: {
                auto e = make(Expr::Kind::Var);
                std::const_pointer_cast<Expr>(e)->name = t.lexeme;
                advance();
                return e;
            }
            default:
                break;
        }
        if (at_punct("(")) {
            advance();
            ExprPtr e = parse_expr();
            expect_punct(")");
            return e;
        }
        if (at_punct("[")) {
            auto e = make(Expr::Kind::ArrayLit);
            auto mut = std::const_pointer_cast<Expr>(e);
            advance();
            while (!at_punct("]")) {
                mut->args.push_back(parse_expr());
                if (at_punct(",")) advance();
                else if (!at_punct("]")) fail("expected ',' or ']'");
            }
            expect_punct("]");
            return e;
        }
        if (at_punct("@")) {
            advance();
            if (at_punct("(")) {
                auto e = make(Expr::Kind::AnonFn);
                auto mut = std::const_pointer_cast<Expr>(e);
                advance();
                while (!at_punct(")")) {
                    mut->params.push_back(expect_identifier());
                    if (at_punct(",")) advance();
                }
                expect_punct(")");
                mut->args = {parse_expr()};
                return e;
            }
            auto e = make(Expr::Kind::FnHandle);
            std::const_pointer_cast<Expr>(e)->name = expect_identifier();
            return e;
        }
        fail("expected expression");
    }
};

}  // namespace

std::shared_ptr<Program> parse(const std::vector<Token>& tokens, const std::string& path) {
    Parser parser(tokens, path);
    return parser.parse_program();
}

namespace {

const std::regex& label_regex() {
    static const std::regex re("<([A-Za-z_][A-Za-z0-9_]*:[0-9]+)>");
    return re;
}

const FunctionDef* enclosing_function(const Program& program, int line) {
    const FunctionDef* best = nullptr;
    for (const auto& f : program.functions) {
        // labels may trail past the last statement: a comment belongs to the
        // function started most recently before it
        if (f.first_line <= line && (!best || f.first_line > best->first_line))
            best = &f;
    }
    return best;
}

}  // namespace

LabelIndex index_labels(const std::string& source_text, const Program& program) {
    LabelIndex index;
    std::map<std::string, int> seen;

    auto tokens = tokenize(source_text);
    for (const auto& tok : tokens) {
        if (tok.kind != TokenKind::Comment) continue;
        auto begin = std::sregex_iterator(tok.lexeme.begin(), tok.lexeme.end(), label_regex());
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            std::string label = (*it)[1].str();
            if (seen.count(label)) {
                throw Error(ErrorKind::DuplicateLabel,
                            "label '" + label + "' occurs on lines " +
                                std::to_string(seen[label]) + " and " +
                                std::to_string(tok.line));
            }
            seen[label] = tok.line;
            std::string function = program.name;
            if (program.kind == Program::Kind::FunctionFile) {
                const FunctionDef* fn = enclosing_function(program, tok.line);
                if (fn) function = fn->name;
            }
            index.entries[label] = LabelEntry{function, tok.line};
        }
    }
    return index;
}

SiteSelector SiteSelector::from_label(std::string text) {
    if (text.size() >= 2 && text.front() == '<' && text.back() == '>')
        text = text.substr(1, text.size() - 2);
    return SiteSelector{Kind::Label, std::move(text), 0};
}

SiteSelector SiteSelector::from_line(int line) {
    return SiteSelector{Kind::Line, {}, line};
}

ResolvedSite resolve_site(const LabelIndex& index, const Program& program,
                          const std::string& function, const SiteSelector& selector) {
    const bool is_script = program.kind == Program::Kind::Script;
    const FunctionDef* fn = nullptr;
    if (!is_script) {
        fn = program.find_function(function);
        if (!fn)
            throw Error(ErrorKind::UnknownFunction, "unknown function '" + function + "'");
    } else if (function != program.name) {
        throw Error(ErrorKind::UnknownFunction, "unknown function '" + function + "'");
    }

    if (selector.kind == SiteSelector::Kind::Label) {
        auto it = index.entries.find(selector.label);
        if (it == index.entries.end())
            throw Error(ErrorKind::UnknownLabel, "unknown label '<" + selector.label + ">'");
        if (it->second.function != function)
            throw Error(ErrorKind::UnknownLabel,
                        "label '<" + selector.label + ">' belongs to function '" +
                            it->second.function + "', not '" + function + "'");
        return ResolvedSite{function, it->second.line};
    }

    int line = selector.line;
    int lo = is_script ? 1 : fn->first_line;
    int hi = is_script
                 ? (program.script_body.empty() ? 1 : program.script_body.back().line)
                 : fn->last_line;
    if (line < lo || line > hi)
        throw Error(ErrorKind::LineOutOfRange,
                    "line " + std::to_string(line) + " outside " + function + " (lines " +
                        std::to_string(lo) + ".." + std::to_string(hi) + ")");
    return ResolvedSite{function, line};
}

}  // namespace seamlab
