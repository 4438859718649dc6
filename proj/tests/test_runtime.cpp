#include <doctest.h>

#include <cmath>
#include <sstream>

#include "seamlab/error.hpp"
#include "seamlab/machine.hpp"
#include "seamlab/testkit.hpp"
#include "seamlab/value.hpp"

using namespace seamlab;

namespace {

std::string corpus(const std::string& name) {
    return std::string(SEAMLAB_CORPUS_DIR) + "/" + name;
}

// Evaluates one expression by running it as r = <expr> in a tiny script.
Value eval(const std::string& expr) {
    Machine m;
    m.load_source("r = " + expr + "\n", "probe.ms");
    Frame frame;
    m.run_script(*m.find_program("probe")->program, frame);
    return frame.workspace.at("r");
}

double num(const std::string& expr) {
    Value v = eval(expr);
    REQUIRE(v.is_number());
    return v.number();
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
    CHECK(num("1 + 2 * 3") == 7);
    CHECK(num("(1 + 2) * 3") == 9);
    CHECK(num("2 ^ 3 ^ 2") == 512);  // right associative
    CHECK(num("-2 ^ 2") == -4);
    CHECK(num("7 / 2") == 3.5);
    CHECK(num("10 - 4 - 3") == 3);
}

TEST_CASE("comparisons yield booleans on scalars") {
    CHECK(eval("1 < 2").boolean());
    CHECK_FALSE(eval("2 <= 1").boolean());
    CHECK(eval("3 == 3").boolean());
    CHECK(eval("3 ~= 4").boolean());
    CHECK(eval("'ab' == 'ab'").boolean());
    CHECK(eval("'ab' ~= 'ac'").boolean());
}

TEST_CASE("logical operators short-circuit") {
    CHECK(eval("1 > 0 || boom()").boolean());
    CHECK_FALSE(eval("1 < 0 && boom()").boolean());
    CHECK(eval("~(1 < 0)").boolean());
}

TEST_CASE("arrays index 1-based and concatenate") {
    Value v = eval("[1, 2, [3, 4]]");
    REQUIRE(v.is_array());
    CHECK(v.array() == Value::Array{1, 2, 3, 4});
    CHECK(num("length([5, 6, 7])") == 3);
    Machine m;
    m.load_source("a = [10, 20, 30]\nx = a(2)\na(1) = 99\n", "ix.ms");
    Frame f;
    m.run_script(*m.find_program("ix")->program, f);
    CHECK(f.workspace.at("x").number() == 20);
    CHECK(f.workspace.at("a").array() == Value::Array{99, 20, 30});
}

TEST_CASE("scalar array broadcasting") {
    CHECK(eval("[1, 2, 3] * 2").array() == Value::Array{2, 4, 6});
    CHECK(eval("1 + [1, 2]").array() == Value::Array{2, 3});
    CHECK(eval("[2, 4] / 2").array() == Value::Array{1, 2});
    // elementwise comparison gives a 0/1 array
    CHECK(eval("[1, 5, 3] > 2").array() == Value::Array{0, 1, 1});
}

TEST_CASE("records assign and read fields") {
    Machine m;
    m.load_source("s.a = 1\ns.b = 'x'\nt = s.a + 2\n", "rec.ms");
    Frame f;
    m.run_script(*m.find_program("rec")->program, f);
    CHECK(f.workspace.at("t").number() == 3);
    CHECK(f.workspace.at("s").record().fields.at("b").string() == "x");
}

TEST_CASE("truthiness table") {
    CHECK(truthy(Value(true)));
    CHECK_FALSE(truthy(Value(false)));
    CHECK(truthy(Value(1.0)));
    CHECK(truthy(Value(-0.5)));
    CHECK_FALSE(truthy(Value(0.0)));
    CHECK(truthy(Value(Value::Array{1, 2})));
    CHECK_FALSE(truthy(Value(Value::Array{1, 0})));
    CHECK_FALSE(truthy(Value(Value::Array{})));  // empty array is falsy
    CHECK_THROWS_AS(truthy(Value("text")), Error);
    CHECK_THROWS_AS(truthy(Value()), Error);
}

TEST_CASE("structural equality canonicalizes -0 and accepts NaN") {
    CHECK(structurally_equal(Value(0.0), Value(-0.0)));
    double nan = std::nan("");
    CHECK(structurally_equal(Value(nan), Value(nan)));
    CHECK_FALSE(structurally_equal(Value(1.0), Value(true)));
    Value::Record a, b;
    a.fields["x"] = Value(1.0);
    b.fields["x"] = Value(1.0);
    CHECK(structurally_equal(Value(a), Value(b)));
    b.fields["y"] = Value(2.0);
    CHECK_FALSE(structurally_equal(Value(a), Value(b)));
}

TEST_CASE("format_number gives shortest round-trip forms") {
    CHECK(format_number(120.0) == "120");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1e21) == "1e+21");
}

TEST_CASE("control flow in scripts") {
    Machine m;
    m.load_source(
        "s = 0\nfor i = 1:5\ns = s + i\nend\n"
        "w = 10\nwhile w > 3\nw = w - 3\nend\n"
        "if s == 15\nv = 'yes'\nelse\nv = 'no'\nend\n"
        "d = 0\nfor k = 10:-2:5\nd = d + k\nend\n",
        "cf.ms");
    Frame f;
    m.run_script(*m.find_program("cf")->program, f);
    CHECK(f.workspace.at("s").number() == 15);
    CHECK(f.workspace.at("w").number() == 1);
    CHECK(f.workspace.at("v").string() == "yes");
    CHECK(f.workspace.at("d").number() == 10 + 8 + 6);
}

TEST_CASE("try catch binds the error and recovers") {
    Machine m;
    m.load_source(
        "try\nerror('boom goes off')\nx = 1\ncatch e\nmsg = e.message\nend\n",
        "tc.ms");
    Frame f;
    m.run_script(*m.find_program("tc")->program, f);
    CHECK(f.workspace.count("x") == 0);
    CHECK(f.workspace.at("msg").string() == "boom goes off");
}

TEST_CASE("calling functions with outputs") {
    Machine m;
    m.load_source("function [a, b] = two(x)\na = x + 1\nb = x * 2\nend\n", "two.ms");
    auto out = m.call("two", {Value(10.0)});
    REQUIRE(out.size() == 2);
    CHECK(out[0].number() == 11);
    CHECK(out[1].number() == 20);
}

TEST_CASE("corpus foo prints its trace") {
    Machine m;
    m.load(corpus("foo.ms"));
    m.call("foo", {Value(15.0), Value(1.0)});
    REQUIRE(m.output().size() == 2);
    CHECK(m.output()[0] == "entering foo");
    CHECK(m.output()[1] == "120");
}

TEST_CASE("subfunctions shadow loaded functions inside their file") {
    Machine m;
    m.load_source("function y = helper()\ny = 'outer'\nend\n", "helper.ms");
    m.load_source(
        "function y = top()\ny = helper()\nend\n"
        "function y = helper()\ny = 'inner'\nend\n",
        "top.ms");
    CHECK(m.call("top", {})[0].string() == "inner");
    CHECK(m.call("helper", {})[0].string() == "outer");
}

TEST_CASE("subfunctions are reachable for direct testing") {
    Machine m;
    m.load(corpus("foo_refactored.ms"));
    auto out = m.call("sum0", {Value(15.0)});
    CHECK(out[0].number() == 120);
}

TEST_CASE("closures capture by value") {
    Machine m;
    m.load_source("n = 10\nf = @(x) x + n\nn = 99\nr = f(1)\n", "cl.ms");
    Frame f;
    m.run_script(*m.find_program("cl")->program, f);
    CHECK(f.workspace.at("r").number() == 11);
}

TEST_CASE("function handles call through") {
    Machine m;
    m.load_source("function y = dbl(x)\ny = x * 2\nend\n", "dbl.ms");
    m.load_source("h = @dbl\nr = h(21)\n", "hs.ms");
    Frame f;
    m.run_script(*m.find_program("hs")->program, f);
    CHECK(f.workspace.at("r").number() == 42);
}

TEST_CASE("runtime errors carry kind and context") {
    Machine m;
    m.load_source("function y = f(x)\ny = g(x)\nend\n", "f.ms");
    try {
        m.call("f", {Value(1.0)});
        FAIL("expected unknown function");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownFunction);
        CHECK(e.line() == 2);
    }
    try {
        m.call("nosuchfn", {});
        FAIL("expected unknown function");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownFunction);
    }
}

TEST_CASE("arity errors on surplus arguments") {
    Machine m;
    m.load_source("function y = one(x)\ny = x\nend\n", "one.ms");
    CHECK_THROWS_AS(m.call("one", {Value(1.0), Value(2.0)}), Error);
}

TEST_CASE("missing arguments are unset until used") {
    Machine m;
    m.load_source("function y = opt(a, b)\ny = a\nend\n", "opt.ms");
    CHECK(m.call("opt", {Value(7.0)})[0].number() == 7);

    m.load_source("function y = need(a, b)\ny = a + b\nend\n", "need.ms");
    CHECK_THROWS_AS(m.call("need", {Value(7.0)}), Error);
}

TEST_CASE("unset outputs error only when consumed") {
    Machine m;
    m.load_source("function y = maybe(flag)\nif flag > 0\ny = 1\nend\nend\n", "maybe.ms");
    auto out = m.call("maybe", {Value(0.0)});
    CHECK(out[0].is_unset());

    m.load_source("r = maybe(0) + 1\n", "use.ms");
    Frame f;
    try {
        m.run_script(*m.find_program("use")->program, f);
        FAIL("expected unset output error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsetOutput);
    }
}

TEST_CASE("recursion limit stops runaway calls") {
    Machine m;
    m.config().max_depth = 50;
    m.load_source("function y = down(n)\ny = down(n + 1)\nend\n", "down.ms");
    try {
        m.call("down", {Value(0.0)});
        FAIL("expected recursion limit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RecursionLimit);
    }
}

TEST_CASE("error render has the three-line diagnostic shape") {
    Error e(ErrorKind::RefClearedVar, "Reference to a cleared variable.", "spy", 42);
    std::string r = e.render();
    CHECK(r == "identifier: 'RefClearedVarError'\n"
               "message: 'Reference to a cleared variable.'\n"
               "file: 'spy.ms::42'");
}

TEST_CASE("hook machinery is transparent when no injections exist") {
    Machine hooked;
    Machine bare;
    bare.config().hooks_enabled = false;
    for (Machine* m : {&hooked, &bare}) m->load(corpus("foo.ms"));
    hooked.call("foo", {Value(12.0), Value(3.0)});
    bare.call("foo", {Value(12.0), Value(3.0)});
    CHECK(hooked.output() == bare.output());
}

TEST_CASE("repeated calls are deterministic") {
    Machine m;
    m.load(corpus("bar.ms"));
    m.call("bar", {Value(10.0)});
    auto first = m.output();
    m.clear_output();
    m.call("bar", {Value(10.0)});
    CHECK(m.output() == first);
}

TEST_CASE("num2str and disp builtins") {
    Machine m;
    m.load_source("disp(num2str(3.5))\ndisp('plain')\ndisp([1, 2])\n", "io.ms");
    Frame f;
    m.run_script(*m.find_program("io")->program, f);
    REQUIRE(m.output().size() == 3);
    CHECK(m.output()[0] == "3.5");
    CHECK(m.output()[1] == "plain");
    CHECK(m.output()[2] == "[1, 2]");
}

TEST_CASE("host builtins reach the live workspace") {
    Machine m;
    Value seen;
    m.register_builtin("peek", [&](Machine&, Frame& f, const std::vector<Value>&) {
        seen = f.workspace.at("secret");
        return Value();
    });
    m.load_source("secret = 77\npeek()\n", "hb.ms");
    Frame f;
    m.run_script(*m.find_program("hb")->program, f);
    CHECK(seen.number() == 77);
}

TEST_CASE("trace recording captures executed lines in order") {
    Machine m;
    m.config().record_trace = true;
    m.load_source("function y = t(n)\ny = 0\nfor i = 1:n\ny = y + i\nend\nend\n", "t.ms");
    m.call("t", {Value(2.0)});
    std::vector<int> lines;
    for (const auto& e : m.trace()) lines.push_back(e.line);
    // y=0, for header once, body once per iteration
    CHECK(lines == std::vector<int>{2, 3, 4, 4});
}
