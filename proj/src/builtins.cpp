#include <cmath>
#include <optional>

#include "seamlab/error.hpp"
#include "seamlab/injection.hpp"
#include "seamlab/machine.hpp"
#include "seamlab/testkit.hpp"

namespace seamlab {

namespace {

const std::string& want_string(const std::vector<Value>& args, size_t i,
                               const char* who) {
    if (i >= args.size() || !args[i].is_string())
        throw Error(ErrorKind::Type, std::string(who) + ": expected a string argument");
    return args[i].string();
}

double want_number(const std::vector<Value>& args, size_t i, const char* who) {
    if (i >= args.size() || !args[i].is_number())
        throw Error(ErrorKind::Type, std::string(who) + ": expected a number argument");
    return args[i].number();
}

/// Shared argument convention of the ...at registration functions:
/// fun, then name/value string pairs ('at'/'goto' select the site).
struct AtArgs {
    std::string fun;
    std::optional<SiteSelector> at;
    std::optional<SiteSelector> target;  // 'goto'
    std::optional<std::string> var;
    std::vector<std::pair<std::string, Value>> assigns;
};

AtArgs parse_at_args(const char* who, const std::vector<Value>& args) {
    AtArgs out;
    out.fun = want_string(args, 0, who);
    if ((args.size() - 1) % 2 != 0)
        throw Error(ErrorKind::Arity,
                    std::string(who) + ": name/value arguments must come in pairs");
    for (size_t i = 1; i + 1 < args.size(); i += 2) {
        const std::string& key = want_string(args, i, who);
        const Value& val = args[i + 1];
        if (key == "at") out.at = selector_from_value(val);
        else if (key == "goto") out.target = selector_from_value(val);
        else if (key == "var") out.var = want_string(args, i + 1, who);
        else out.assigns.emplace_back(key, val);
    }
    return out;
}

void record_outcome(Machine& m, Frame& frame, AssertionOutcome o) {
    o.line = frame.current_line;
    if (TestSuiteResult* r = m.recorder()) {
        o.suite_file = r->suite;
        r->record(std::move(o));
    } else if (!o.passed) {
        m.diagnose("assertion failed at line " + std::to_string(frame.current_line) +
                   ": expected " + o.expected.display() + ", got " + o.actual.display());
    }
}

}  // namespace

void install_standard_builtins(Machine& machine) {
    machine.register_builtin("disp", [](Machine& m, Frame&, const std::vector<Value>& a) {
        if (a.size() != 1) throw Error(ErrorKind::Arity, "disp takes one argument");
        m.emit(a[0].display());
        return Value();
    });

    machine.register_builtin("num2str", [](Machine&, Frame&, const std::vector<Value>& a) {
        return Value(format_number(want_number(a, 0, "num2str")));
    });

    machine.register_builtin("length", [](Machine&, Frame&, const std::vector<Value>& a) {
        if (a.size() != 1) throw Error(ErrorKind::Arity, "length takes one argument");
        const Value& v = a[0];
        if (v.is_array()) return Value(static_cast<double>(v.array().size()));
        if (v.is_string()) return Value(static_cast<double>(v.string().size()));
        if (v.is_number() || v.is_bool() || v.is_record()) return Value(1.0);
        throw Error(ErrorKind::Type,
                    std::string("length: unsupported kind '") + v.kind_name() + "'");
    });

    machine.register_builtin("error", [](Machine&, Frame&, const std::vector<Value>& a) -> Value {
        throw Error(ErrorKind::Runtime, want_string(a, 0, "error"));
    });

    machine.register_builtin("true", [](Machine&, Frame&, const std::vector<Value>&) {
        return Value(true);
    });
    machine.register_builtin("false", [](Machine&, Frame&, const std::vector<Value>&) {
        return Value(false);
    });

    // ---- injection key functions ------------------------------------------

    machine.register_builtin("gotoat", [](Machine& m, Frame&, const std::vector<Value>& a) {
        AtArgs args = parse_at_args("gotoat", a);
        if (!args.target)
            throw Error(ErrorKind::Arity, "gotoat: missing 'goto' selector");
        gotoat(m, args.fun, *args.target);
        return Value();
    });

    machine.register_builtin("assignat", [](Machine& m, Frame&, const std::vector<Value>& a) {
        AtArgs args = parse_at_args("assignat", a);
        if (!args.at) throw Error(ErrorKind::Arity, "assignat: missing 'at' selector");
        assignat(m, args.fun, *args.at, args.assigns);
        return Value();
    });

    machine.register_builtin("captureat", [](Machine& m, Frame&, const std::vector<Value>& a) {
        if (a.empty()) return Value(captureat(m));  // retrieval drains the store
        AtArgs args = parse_at_args("captureat", a);
        if (!args.at) throw Error(ErrorKind::Arity, "captureat: missing 'at' selector");
        captureat(m, args.fun, *args.at, args.var);
        return Value();
    });

    machine.register_builtin("returnat", [](Machine& m, Frame&, const std::vector<Value>& a) {
        AtArgs args = parse_at_args("returnat", a);
        if (!args.at) throw Error(ErrorKind::Arity, "returnat: missing 'at' selector");
        returnat(m, args.fun, *args.at);
        return Value();
    });

    machine.register_builtin("evalat", [](Machine& m, Frame&, const std::vector<Value>& a) {
        // positional interface: evalat(fun, selector, callback)
        if (a.size() != 3)
            throw Error(ErrorKind::Arity, "evalat takes (fun, selector, callback)");
        if (!a[2].is_closure())
            throw Error(ErrorKind::Type, "evalat: callback must be an anonymous function");
        evalat(m, want_string(a, 0, "evalat"), selector_from_value(a[1]), a[2].closure());
        return Value();
    });

    machine.register_builtin("clearat", [](Machine& m, Frame&, const std::vector<Value>& a) {
        if (a.empty()) clearat(m);
        else clearat(m, want_string(a, 0, "clearat"));
        return Value();
    });

    // ---- testkit ----------------------------------------------------------

    machine.register_builtin("EXPECT_EQ", [](Machine& m, Frame& f, const std::vector<Value>& a) {
        if (a.size() != 2) throw Error(ErrorKind::Arity, "EXPECT_EQ takes two arguments");
        AssertionOutcome o = expect_eq(a[0], a[1]);
        bool passed = o.passed;
        record_outcome(m, f, std::move(o));
        return Value(passed);
    });

    machine.register_builtin("EXPECT_NEAR", [](Machine& m, Frame& f, const std::vector<Value>& a) {
        if (a.size() != 3) throw Error(ErrorKind::Arity, "EXPECT_NEAR takes three arguments");
        AssertionOutcome o = expect_near(want_number(a, 0, "EXPECT_NEAR"),
                                         want_number(a, 1, "EXPECT_NEAR"),
                                         want_number(a, 2, "EXPECT_NEAR"));
        bool passed = o.passed;
        record_outcome(m, f, std::move(o));
        return Value(passed);
    });

    machine.register_builtin("EXPECT_TRUE", [](Machine& m, Frame& f, const std::vector<Value>& a) {
        if (a.size() != 1) throw Error(ErrorKind::Arity, "EXPECT_TRUE takes one argument");
        AssertionOutcome o = expect_true(a[0]);
        bool passed = o.passed;
        record_outcome(m, f, std::move(o));
        return Value(passed);
    });

    machine.register_builtin("CACHE", [](Machine& m, Frame&, const std::vector<Value>& a) {
        if (a.size() != 2) throw Error(ErrorKind::Arity, "CACHE takes (key, value)");
        SnapshotStore store(m.config().cache_dir);
        return store.cache(want_string(a, 0, "CACHE"), a[1]);
    });
}

}  // namespace seamlab
