#include <cmath>
#include <memory>

#include "seamlab/error.hpp"
#include "seamlab/machine.hpp"

namespace seamlab {

namespace {

struct DepthGuard {
    int& depth;
    int limit;
    DepthGuard(int& d, int lim) : depth(d), limit(lim) {
        if (++depth > limit)
            throw Error(ErrorKind::RecursionLimit,
                        "call depth exceeds " + std::to_string(limit));
    }
    ~DepthGuard() { --depth; }
};

}  // namespace

/// Tree-walking evaluator. One instance per Machine operation; all mutable
/// state lives in the Machine and the frames.
class Interpreter {
public:
    explicit Interpreter(Machine& m) : m_(m) {}

    std::vector<Value> call_function(const FunctionDef& fn, const Program& owner,
                                     const std::vector<Value>& args);
    void run_script_body(const Program& program, Frame& frame);
    Value eval(Frame& frame, const Expr& e) { return eval_expr(frame, e, true); }
    Value invoke_closure(Frame& frame, const Value::Closure& c,
                         const std::vector<Value>& args, bool in_frame);

private:
    enum class Flow { Normal, Returned };
    struct ExecState {
        int last_hook = -1;
    };

    Machine& m_;

    bool hooks_on() const { return m_.config().hooks_enabled; }

    // Returns true when a return-now injection fired.
    bool maybe_fire(Frame& frame, ExecState& state, int line);
    bool apply_points(Frame& frame, int line);
    void handle_injected_error(Error e, Frame& frame, int line);

    Flow exec_stmts(Frame& frame, const std::vector<Stmt>& stmts, ExecState& state,
                    size_t start = 0);
    Flow exec_stmt(Frame& frame, const Stmt& s, ExecState& state);
    void exec_assign(Frame& frame, const Expr& lhs, Value v);

    Value eval_expr(Frame& frame, const Expr& e, bool want_value);
    Value eval_var(Frame& frame, const Expr& e, bool want_value);
    Value eval_call_or_index(Frame& frame, const Expr& e, bool want_value);
    Value call_named(Frame& frame, const std::string& name,
                     const std::vector<Value>& args, bool want_value, const Expr& site);
    Value index_array(const Value& v, const std::vector<Value>& args, const Expr& site);
    Value eval_binary(Frame& frame, const Expr& e);
    Value eval_unary(Frame& frame, const Expr& e);

    [[noreturn]] void runtime_error(Frame& frame, const Expr& at, const std::string& msg,
                                    ErrorKind kind = ErrorKind::Runtime) {
        throw Error(kind, msg, frame.function, frame.current_line);
    }
};

// ---- hook engine -----------------------------------------------------------

void Interpreter::handle_injected_error(Error e, Frame& frame, int line) {
    if (!e.has_context()) e.set_context(frame.function, line);
    if (m_.config().halt_on_injection_error)
        throw Error(ErrorKind::Injection, e.what(), frame.function, line);
    m_.diagnose(e.render());
}

bool Interpreter::apply_points(Frame& frame, int line) {
    auto points = m_.registry().at(frame.function, line);
    bool return_now = false;
    for (InjectionPoint* p : points) {
        switch (p->kind) {
            case InjectionKind::Assign:
                ++p->hit_count;
                for (const auto& [name, value] : p->assigns)
                    m_.assign_in_frame(frame, name, value);
                break;
            case InjectionKind::Eval: {
                ++p->hit_count;
                Value result;
                bool evaluated = false;
                try {
                    result = invoke_closure(frame, p->callback, {}, /*in_frame=*/true);
                    evaluated = true;
                } catch (Error& e) {
                    handle_injected_error(std::move(e), frame, p->site_line);
                }
                if (evaluated) {
                    bool hit = false;
                    try {
                        hit = !result.is_unset() && truthy(result);
                    } catch (Error& e) {
                        handle_injected_error(std::move(e), frame, p->site_line);
                    }
                    if (hit)
                        throw Error(ErrorKind::BreakpointHit,
                                    "injected evaluation returned a truthy value",
                                    frame.function, p->site_line);
                }
                break;
            }
            case InjectionKind::Capture: {
                ++p->hit_count;
                if (p->capture_var) {
                    auto it = frame.workspace.find(*p->capture_var);
                    if (it == frame.workspace.end() || it->second.is_unset()) {
                        handle_injected_error(
                            Error(ErrorKind::CaptureMiss,
                                  "variable '" + *p->capture_var + "' not in workspace",
                                  frame.function, p->site_line),
                            frame, p->site_line);
                    } else {
                        m_.captures().put(p->capture_key, it->second);
                    }
                } else {
                    Value::Record snapshot;
                    for (const auto& [name, value] : frame.workspace)
                        if (!value.is_unset()) snapshot.fields[name] = value;
                    m_.captures().put(p->capture_key, Value(std::move(snapshot)));
                }
                break;
            }
            case InjectionKind::Return:
                ++p->hit_count;
                if (m_.config().return_mode == MachineConfig::ReturnMode::Fidelity) {
                    m_.clear_frame(frame);
                } else {
                    return_now = true;
                }
                break;
            case InjectionKind::Goto:
                break;  // entry gotos are applied by call_function
        }
        if (return_now) break;
    }
    return return_now;
}

bool Interpreter::maybe_fire(Frame& frame, ExecState& state, int line) {
    if (!hooks_on()) return false;
    if (line == state.last_hook) return false;
    state.last_hook = line;
    return apply_points(frame, line);
}

// ---- statements ------------------------------------------------------------

Interpreter::Flow Interpreter::exec_stmts(Frame& frame, const std::vector<Stmt>& stmts,
                                          ExecState& state, size_t start) {
    for (size_t i = start; i < stmts.size(); ++i) {
        Flow flow = exec_stmt(frame, stmts[i], state);
        if (flow == Flow::Returned) return flow;
    }
    return Flow::Normal;
}

Interpreter::Flow Interpreter::exec_stmt(Frame& frame, const Stmt& s, ExecState& state) {
    if (maybe_fire(frame, state, s.line)) return Flow::Returned;
    frame.current_line = s.line;
    if (m_.config().record_trace) m_.trace_.push_back({frame.function, s.line});

    try {
        switch (s.kind) {
            case Stmt::Kind::Assign:
                exec_assign(frame, *s.lhs, eval_expr(frame, *s.rhs, true));
                return Flow::Normal;
            case Stmt::Kind::ExprStmt:
                eval_expr(frame, *s.rhs, false);
                return Flow::Normal;
            case Stmt::Kind::Return:
                return Flow::Returned;
            case Stmt::Kind::For: {
                Value from = eval_expr(frame, *s.from, true);
                Value to = eval_expr(frame, *s.to, true);
                double step = 1;
                if (s.step) {
                    Value sv = eval_expr(frame, *s.step, true);
                    if (!sv.is_number()) runtime_error(frame, *s.step, "loop step must be a number");
                    step = sv.number();
                }
                if (!from.is_number() || !to.is_number())
                    runtime_error(frame, *s.from, "loop bounds must be numbers");
                if (step == 0) runtime_error(frame, *s.from, "loop step must be nonzero");
                for (double v = from.number();
                     step > 0 ? v <= to.number() : v >= to.number(); v += step) {
                    frame.workspace[s.var] = Value(v);
                    state.last_hook = s.line;  // body lines re-fire each iteration
                    Flow flow = exec_stmts(frame, s.body, state);
                    if (flow == Flow::Returned) return flow;
                }
                return Flow::Normal;
            }
            case Stmt::Kind::While: {
                for (;;) {
                    Value cond = eval_expr(frame, *s.cond, true);
                    if (!truthy(cond)) return Flow::Normal;
                    Flow flow = exec_stmts(frame, s.body, state);
                    if (flow == Flow::Returned) return flow;
                    state.last_hook = -1;
                    if (maybe_fire(frame, state, s.line)) return Flow::Returned;
                    frame.current_line = s.line;
                }
            }
            case Stmt::Kind::If: {
                if (truthy(eval_expr(frame, *s.cond, true)))
                    return exec_stmts(frame, s.body, state);
                for (const auto& [cond, body] : s.elifs)
                    if (truthy(eval_expr(frame, *cond, true)))
                        return exec_stmts(frame, body, state);
                return exec_stmts(frame, s.else_body, state);
            }
            case Stmt::Kind::TryCatch: {
                try {
                    return exec_stmts(frame, s.body, state);
                } catch (Error& e) {
                    if (e.kind() == ErrorKind::BreakpointHit ||
                        e.kind() == ErrorKind::Injection)
                        throw;
                    if (!s.catch_var.empty()) {
                        Value::Record err;
                        err.fields["identifier"] = Value(std::string(error_kind_name(e.kind())));
                        err.fields["message"] = Value(e.message());
                        err.fields["file"] =
                            Value(e.function() + ".ms::" + std::to_string(e.line()));
                        frame.workspace[s.catch_var] = Value(std::move(err));
                    }
                    return exec_stmts(frame, s.else_body, state);
                }
            }
        }
    } catch (Error& e) {
        if (!e.has_context()) e.set_context(frame.function, s.line);
        throw;
    }
    return Flow::Normal;
}

void Interpreter::exec_assign(Frame& frame, const Expr& lhs, Value v) {
    switch (lhs.kind) {
        case Expr::Kind::Var:
            frame.workspace[lhs.name] = std::move(v);
            return;
        case Expr::Kind::Field: {
            // read container leniently: missing or cleared becomes a fresh record
            Value container;
            if (lhs.target->kind == Expr::Kind::Var) {
                auto it = frame.workspace.find(lhs.target->name);
                if (!frame.cleared && it != frame.workspace.end()) container = it->second;
            } else {
                container = eval_expr(frame, *lhs.target, true);
            }
            if (container.is_unset()) container = Value(Value::Record{});
            if (!container.is_record())
                runtime_error(frame, lhs, "cannot set field on a " +
                                              std::string(container.kind_name()),
                              ErrorKind::Type);
            container.record().fields[lhs.name] = std::move(v);
            exec_assign(frame, *lhs.target, std::move(container));
            return;
        }
        case Expr::Kind::CallOrIndex: {
            const std::string& name = lhs.target->name;
            Value container;
            auto it = frame.workspace.find(name);
            if (!frame.cleared && it != frame.workspace.end()) container = it->second;
            if (container.is_unset()) container = Value(Value::Array{});
            if (!container.is_array())
                runtime_error(frame, lhs, "cannot index-assign into a " +
                                              std::string(container.kind_name()),
                              ErrorKind::Type);
            if (!v.is_number())
                runtime_error(frame, lhs, "array elements must be numbers",
                              ErrorKind::Type);
            Value iv = eval_expr(frame, *lhs.args[0], true);
            if (!iv.is_number() || iv.number() != std::floor(iv.number()) || iv.number() < 1)
                runtime_error(frame, lhs, "array index must be a positive integer");
            size_t idx = static_cast<size_t>(iv.number());
            auto& arr = container.array();
            if (idx > arr.size()) arr.resize(idx, 0.0);
            arr[idx - 1] = v.number();
            frame.workspace[name] = std::move(container);
            return;
        }
        default:
            runtime_error(frame, lhs, "invalid assignment target");
    }
}

// ---- expressions -----------------------------------------------------------

Value Interpreter::eval_expr(Frame& frame, const Expr& e, bool want_value) {
    switch (e.kind) {
        case Expr::Kind::Number:
            return Value(e.num);
        case Expr::Kind::String:
            return Value(e.str);
        case Expr::Kind::ArrayLit: {
            Value::Array out;
            for (const auto& el : e.args) {
                Value v = eval_expr(frame, *el, true);
                if (v.is_number()) {
                    out.push_back(v.number());
                } else if (v.is_array()) {
                    for (double d : v.array()) out.push_back(d);
                } else {
                    runtime_error(frame, e, "array elements must be numbers",
                                  ErrorKind::Type);
                }
            }
            return Value(std::move(out));
        }
        case Expr::Kind::Var:
            return eval_var(frame, e, want_value);
        case Expr::Kind::Field: {
            Value base = eval_expr(frame, *e.target, true);
            if (!base.is_record())
                runtime_error(frame, e, "cannot read field '" + e.name + "' of a " +
                                            std::string(base.kind_name()),
                              ErrorKind::Type);
            auto it = base.record().fields.find(e.name);
            if (it == base.record().fields.end())
                runtime_error(frame, e, "no field '" + e.name + "'");
            return it->second;
        }
        case Expr::Kind::CallOrIndex:
            return eval_call_or_index(frame, e, want_value);
        case Expr::Kind::Unary:
            return eval_unary(frame, e);
        case Expr::Kind::Binary:
            return eval_binary(frame, e);
        case Expr::Kind::AnonFn: {
            Value::Closure c;
            c.params = e.params;
            c.body = e.args[0];
            c.captured = std::make_shared<const std::map<std::string, Value>>(frame.workspace);
            return Value(std::move(c));
        }
        case Expr::Kind::FnHandle:
            return Value(Value::Handle{e.name});
    }
    runtime_error(frame, e, "unreachable expression kind");
}

Value Interpreter::eval_var(Frame& frame, const Expr& e, bool want_value) {
    if (!frame.cleared) {
        auto it = frame.workspace.find(e.name);
        if (it != frame.workspace.end()) {
            if (it->second.is_unset())
                runtime_error(frame, e, "output '" + e.name + "' was never assigned",
                              ErrorKind::UnsetOutput);
            return it->second;
        }
    }
    // not a variable: a bare identifier calls a function with no arguments
    const Program* owner = nullptr;
    const FunctionDef* fn = nullptr;
    if (frame.program) fn = frame.program->find_function(e.name);
    if (!fn) fn = m_.find_function(e.name, &owner);
    if (fn || m_.find_host_builtin(e.name))
        return call_named(frame, e.name, {}, want_value, e);
    if (frame.cleared)
        runtime_error(frame, e, "Reference to a cleared variable.",
                      ErrorKind::RefClearedVar);
    runtime_error(frame, e, "undefined variable or function '" + e.name + "'");
}

Value Interpreter::eval_call_or_index(Frame& frame, const Expr& e, bool want_value) {
    std::vector<Value> args;
    auto eval_args = [&] {
        for (const auto& a : e.args) args.push_back(eval_expr(frame, *a, true));
    };

    if (e.target->kind == Expr::Kind::Var) {
        const std::string& name = e.target->name;
        if (!frame.cleared) {
            auto it = frame.workspace.find(name);
            if (it != frame.workspace.end()) {
                Value v = it->second;
                eval_args();
                if (v.is_array() || v.is_number()) return index_array(v, args, e);
                if (v.is_closure()) return invoke_closure(frame, v.closure(), args, false);
                if (v.is_handle()) return call_named(frame, v.handle().name, args, true, e);
                runtime_error(frame, e, "value of kind '" + std::string(v.kind_name()) +
                                            "' is not callable or indexable",
                              ErrorKind::Type);
            }
        }
        const Program* owner = nullptr;
        const FunctionDef* fn = nullptr;
        if (frame.program) fn = frame.program->find_function(name);
        if (!fn) fn = m_.find_function(name, &owner);
        if (fn || m_.find_host_builtin(name)) {
            eval_args();
            return call_named(frame, name, args, want_value, e);
        }
        if (frame.cleared)
            runtime_error(frame, e, "Reference to a cleared variable.",
                          ErrorKind::RefClearedVar);
        throw Error(ErrorKind::UnknownFunction, "unknown function '" + name + "'",
                    frame.function, frame.current_line);
    }

    Value v = eval_expr(frame, *e.target, true);
    eval_args();
    if (v.is_array() || v.is_number()) return index_array(v, args, e);
    if (v.is_closure()) return invoke_closure(frame, v.closure(), args, false);
    if (v.is_handle()) return call_named(frame, v.handle().name, args, true, e);
    runtime_error(frame, e, "value of kind '" + std::string(v.kind_name()) +
                                "' is not callable or indexable",
                  ErrorKind::Type);
}

Value Interpreter::index_array(const Value& v, const std::vector<Value>& args,
                               const Expr& site) {
    if (args.size() != 1 || !args[0].is_number())
        throw Error(ErrorKind::Runtime, "array index must be a single number");
    double d = args[0].number();
    if (d != std::floor(d) || d < 1)
        throw Error(ErrorKind::Runtime, "array index must be a positive integer");
    size_t idx = static_cast<size_t>(d);
    if (v.is_number()) {
        if (idx != 1) throw Error(ErrorKind::Runtime, "index out of range");
        return v;
    }
    if (idx > v.array().size())
        throw Error(ErrorKind::Runtime,
                    "index " + format_number(d) + " out of range for array of length " +
                        std::to_string(v.array().size()));
    return Value(v.array()[idx - 1]);
}

Value Interpreter::call_named(Frame& frame, const std::string& name,
                              const std::vector<Value>& args, bool want_value,
                              const Expr& site) {
    // subfunctions of the current file shadow loaded entry functions
    const Program* owner = nullptr;
    const FunctionDef* fn = nullptr;
    if (frame.program) {
        fn = frame.program->find_function(name);
        if (fn) owner = frame.program;
    }
    if (!fn) fn = m_.find_function(name, &owner);
    if (fn) {
        std::vector<Value> results = call_function(*fn, *owner, args);
        if (!want_value) return Value();
        if (results.empty() || results.front().is_unset())
            throw Error(ErrorKind::UnsetOutput,
                        "function '" + name + "' returned no value", frame.function,
                        frame.current_line);
        return results.front();
    }
    if (const HostBuiltin* b = m_.find_host_builtin(name)) return (*b)(m_, frame, args);
    throw Error(ErrorKind::UnknownFunction, "unknown function '" + name + "'",
                frame.function, frame.current_line);
}

Value Interpreter::invoke_closure(Frame& frame, const Value::Closure& c,
                                  const std::vector<Value>& args, bool in_frame) {
    DepthGuard guard(m_.depth_, m_.config().max_depth);
    if (args.size() > c.params.size())
        throw Error(ErrorKind::Arity, "too many arguments to anonymous function");

    Frame inner;
    inner.function = frame.function;
    inner.program = frame.program;
    inner.current_line = c.body ? c.body->line : frame.current_line;
    if (in_frame) {
        // evalin('caller', __) analog: the frame workspace is visible,
        // captured variables take precedence
        inner.workspace = frame.workspace;
        inner.cleared = frame.cleared;
        if (c.captured)
            for (const auto& [k, v] : *c.captured) inner.workspace[k] = v;
    } else if (c.captured) {
        inner.workspace = *c.captured;
    }
    for (size_t i = 0; i < args.size(); ++i) inner.workspace[c.params[i]] = args[i];

    return eval_expr(inner, *c.body, true);
}

namespace {

Value broadcast(const std::string& op, const Value& a, const Value& b,
                double (*f)(double, double)) {
    if (a.is_number() && b.is_number()) return Value(f(a.number(), b.number()));
    if (a.is_array() && b.is_number()) {
        Value::Array out = a.array();
        for (double& d : out) d = f(d, b.number());
        return Value(std::move(out));
    }
    if (a.is_number() && b.is_array()) {
        Value::Array out = b.array();
        for (double& d : out) d = f(a.number(), d);
        return Value(std::move(out));
    }
    if (a.is_array() && b.is_array()) {
        if (a.array().size() != b.array().size())
            throw Error(ErrorKind::Runtime, "array size mismatch in '" + op + "'");
        Value::Array out = a.array();
        for (size_t i = 0; i < out.size(); ++i) out[i] = f(out[i], b.array()[i]);
        return Value(std::move(out));
    }
    throw Error(ErrorKind::Type, "operator '" + op + "' expects numbers, got " +
                                     a.kind_name() + std::string(" and ") + b.kind_name());
}

}  // namespace

Value Interpreter::eval_binary(Frame& frame, const Expr& e) {
    const std::string& op = e.op;
    if (op == "&&") {
        if (!truthy(eval_expr(frame, *e.args[0], true))) return Value(false);
        return Value(truthy(eval_expr(frame, *e.args[1], true)));
    }
    if (op == "||") {
        if (truthy(eval_expr(frame, *e.args[0], true))) return Value(true);
        return Value(truthy(eval_expr(frame, *e.args[1], true)));
    }

    Value a = eval_expr(frame, *e.args[0], true);
    Value b = eval_expr(frame, *e.args[1], true);

    if (op == "+") return broadcast(op, a, b, [](double x, double y) { return x + y; });
    if (op == "-") return broadcast(op, a, b, [](double x, double y) { return x - y; });
    if (op == "*") return broadcast(op, a, b, [](double x, double y) { return x * y; });
    if (op == "/") return broadcast(op, a, b, [](double x, double y) { return x / y; });
    if (op == "^") return broadcast(op, a, b, [](double x, double y) { return std::pow(x, y); });

    auto cmp = [&](double (*f)(double, double)) -> Value {
        Value r = broadcast(op, a, b, f);
        if (r.is_number()) return Value(r.number() != 0);
        return r;  // elementwise comparison yields a 0/1 array
    };
    if (op == "==" || op == "~=") {
        bool eq;
        if ((a.is_number() || a.is_array()) && (b.is_number() || b.is_array())) {
            Value r = broadcast(op, a, b,
                                [](double x, double y) { return x == y ? 1.0 : 0.0; });
            if (r.is_array()) {
                if (op == "~=")
                    for (double& d : r.array()) d = d == 0 ? 1.0 : 0.0;
                return r;
            }
            eq = r.number() != 0;
        } else {
            eq = structurally_equal(a, b);
        }
        return Value(op == "==" ? eq : !eq);
    }
    if (op == "<") return cmp([](double x, double y) { return x < y ? 1.0 : 0.0; });
    if (op == "<=") return cmp([](double x, double y) { return x <= y ? 1.0 : 0.0; });
    if (op == ">") return cmp([](double x, double y) { return x > y ? 1.0 : 0.0; });
    if (op == ">=") return cmp([](double x, double y) { return x >= y ? 1.0 : 0.0; });
    runtime_error(frame, e, "unknown operator '" + op + "'");
}

Value Interpreter::eval_unary(Frame& frame, const Expr& e) {
    Value v = eval_expr(frame, *e.args[0], true);
    if (e.op == "~") return Value(!truthy(v));
    if (e.op == "+") {
        if (v.is_number() || v.is_array()) return v;
        runtime_error(frame, e, "unary '+' expects a number", ErrorKind::Type);
    }
    if (v.is_number()) return Value(-v.number());
    if (v.is_array()) {
        Value::Array out = v.array();
        for (double& d : out) d = -d;
        return Value(std::move(out));
    }
    runtime_error(frame, e, "unary '-' expects a number", ErrorKind::Type);
}

// ---- calls and scripts -----------------------------------------------------

std::vector<Value> Interpreter::call_function(const FunctionDef& fn, const Program& owner,
                                              const std::vector<Value>& args) {
    DepthGuard guard(m_.depth_, m_.config().max_depth);
    if (args.size() > fn.params.size())
        throw Error(ErrorKind::Runtime,
                    "too many arguments to '" + fn.name + "' (" +
                        std::to_string(args.size()) + " given, " +
                        std::to_string(fn.params.size()) + " accepted)");

    Frame frame;
    frame.function = fn.name;
    frame.program = &owner;
    frame.current_line = fn.first_line;
    frame.output_names = fn.outputs;
    for (size_t i = 0; i < args.size(); ++i)
        frame.workspace[fn.params[i]] = args[i];

    ExecState state;
    size_t start = 0;
    if (hooks_on()) {
        if (InjectionPoint* g = m_.registry().entry_goto(fn.name)) {
            ++g->hit_count;
            while (start < fn.body.size() && fn.body[start].line < g->goto_target)
                ++start;
        }
    }

    Flow flow = Flow::Normal;
    try {
        flow = exec_stmts(frame, fn.body, state, start);
        if (flow == Flow::Normal && hooks_on()) {
            // sites past the last executable statement fire at function exit
            maybe_fire(frame, state, kExitAnchor);
        }
    } catch (Error& e) {
        if (e.kind() == ErrorKind::RefClearedVar && frame.cleared) {
            // the restriction-3 trick: a cleared workspace turns the next
            // variable access into an early return
            m_.diagnose(e.render());
        } else {
            throw;
        }
    }

    std::vector<Value> results;
    for (const auto& out : fn.outputs) {
        auto it = frame.workspace.find(out);
        results.push_back(it == frame.workspace.end() || frame.cleared ? Value()
                                                                       : it->second);
    }
    return results;
}

void Interpreter::run_script_body(const Program& program, Frame& frame) {
    frame.function = program.name;
    frame.program = &program;
    ExecState state;
    exec_stmts(frame, program.script_body, state);
    if (hooks_on()) maybe_fire(frame, state, kExitAnchor);
}

// ---- Machine entry points --------------------------------------------------

std::vector<Value> Machine::call(const std::string& function, const std::vector<Value>& args) {
    Interpreter interp(*this);
    const Program* owner = nullptr;
    const FunctionDef* fn = find_function(function, &owner);
    if (fn) return interp.call_function(*fn, *owner, args);

    const LoadedProgram* lp = find_program(function);
    if (lp && lp->program->kind == Program::Kind::Script) {
        Frame frame;
        interp.run_script_body(*lp->program, frame);
        return {};
    }
    throw Error(ErrorKind::UnknownFunction, "unknown function '" + function + "'");
}

void Machine::run_script(const Program& program, Frame& frame) {
    Interpreter interp(*this);
    interp.run_script_body(program, frame);
}

Value Machine::eval_in_frame(Frame& frame, const std::string& expression_text) {
    auto tokens = tokenize(expression_text);
    auto program = parse(tokens, "<eval>");
    if (program->kind != Program::Kind::Script || program->script_body.size() != 1 ||
        program->script_body.front().kind != Stmt::Kind::ExprStmt)
        throw Error(ErrorKind::Runtime, "expected a single expression");
    Interpreter interp(*this);
    const Program* saved = frame.program;
    Value result = interp.eval(frame, *program->script_body.front().rhs);
    frame.program = saved;
    return result;
}

Value Machine::eval_in_frame(Frame& frame, const Value::Closure& callback) {
    Interpreter interp(*this);
    return interp.invoke_closure(frame, callback, {}, /*in_frame=*/true);
}

}  // namespace seamlab
