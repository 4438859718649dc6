#include <doctest.h>

#include <map>

#include "seamlab/error.hpp"
#include "seamlab/injection.hpp"
#include "seamlab/machine.hpp"
#include "seamlab/token.hpp"

using namespace seamlab;

namespace {

std::string corpus(const std::string& name) {
    return std::string(SEAMLAB_CORPUS_DIR) + "/" + name;
}

Value::Closure closure_of(const std::string& expression) {
    auto program = parse(tokenize("@() " + expression), "<evalat>");
    const Expr& e = *program->script_body.front().rhs;
    Value::Closure c;
    c.params = e.params;
    c.body = e.args[0];
    c.captured = std::make_shared<const std::map<std::string, Value>>();
    return c;
}

SiteSelector label(const std::string& text) { return SiteSelector::from_label(text); }

}  // namespace

TEST_CASE("selector_from_value accepts labels and line numbers") {
    auto s1 = selector_from_value(Value("<FOO:1>"));
    CHECK(s1.kind == SiteSelector::Kind::Label);
    CHECK(s1.label == "FOO:1");
    auto s2 = selector_from_value(Value("FOO:1"));
    CHECK(s2.label == "FOO:1");
    auto s3 = selector_from_value(Value(7.0));
    CHECK(s3.kind == SiteSelector::Kind::Line);
    CHECK(s3.line == 7);
    CHECK_THROWS_AS(selector_from_value(Value(Value::Array{1})), Error);
}

TEST_CASE("capture_key_for strips the colon and prefixes line sites") {
    CHECK(capture_key_for(label("FOO:2")) == "FOO2");
    CHECK(capture_key_for(label("<FOO:2>")) == "FOO2");
    CHECK(capture_key_for(SiteSelector::from_line(5)) == "L5");
}

TEST_CASE("single variable capture observes the value before the site line") {
    Machine m;
    m.load(corpus("foo.ms"));
    // <FOO:2> sits after the loop; sum is complete there
    captureat(m, "foo", label("<FOO:2>"), "sum");
    m.call("foo", {Value(15.0), Value(1.0)});
    auto rec = captureat(m);
    REQUIRE(rec.fields.count("FOO2") == 1);
    CHECK(rec.fields.at("FOO2").number() == 120);
}

TEST_CASE("whole workspace capture snapshots every variable") {
    Machine m;
    m.load(corpus("foo.ms"));
    captureat(m, "foo", label("<FOO:2>"));
    m.call("foo", {Value(3.0), Value(2.0)});
    auto rec = captureat(m);
    const Value& snap = rec.fields.at("FOO2");
    REQUIRE(snap.is_record());
    CHECK(snap.record().fields.at("a1").number() == 3);
    CHECK(snap.record().fields.at("junk").number() == 4);
    CHECK(snap.record().fields.at("sum").number() == 6);
    CHECK(snap.record().fields.at("i").number() == 3);
}

TEST_CASE("capture retrieval drains the store") {
    Machine m;
    m.load(corpus("foo.ms"));
    captureat(m, "foo", label("<FOO:2>"), "sum");
    m.call("foo", {Value(2.0), Value(1.0)});
    CHECK_FALSE(m.captures().empty());
    captureat(m);
    CHECK(m.captures().empty());
    CHECK(captureat(m).fields.empty());
}

TEST_CASE("assignat overrides variables before the anchored line runs") {
    Machine m;
    m.load(corpus("foo.ms"));
    // loop bound is read from a1 on line 6; overriding at <FOO:1> (anchor 5)
    // happens before the loop starts
    assignat(m, "foo", label("<FOO:1>"), {{"a1", Value(4.0)}});
    m.call("foo", {Value(100.0), Value(1.0)});
    CHECK(m.output().back() == "10");
}

TEST_CASE("assignat requires at least one pair") {
    Machine m;
    m.load(corpus("foo.ms"));
    CHECK_THROWS_AS(assignat(m, "foo", label("<FOO:1>"), {}), Error);
}

TEST_CASE("gotoat skips the statements before the target") {
    Machine m;
    m.load(corpus("foo.ms"));
    gotoat(m, "foo", label("<FOO:1>"));
    assignat(m, "foo", label("<FOO:1>"), {{"a1", Value(15.0)}});
    // a2 is only used by the skipped lines, so an unset argument is fine
    m.call("foo", {Value(), Value()});
    REQUIRE(m.output().size() == 1);  // 'entering foo' was jumped over
    CHECK(m.output()[0] == "120");
}

TEST_CASE("gotoat rejects targets nested inside a block") {
    Machine m;
    m.load(corpus("foo.ms"));
    // line 7 is the loop body
    try {
        gotoat(m, "foo", SiteSelector::from_line(7));
        FAIL("expected a jump target error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::JumpTarget);
    }
}

TEST_CASE("returnat ends the call at the site") {
    Machine m;
    m.load(corpus("foo.ms"));
    captureat(m, "foo", label("<FOO:2>"), "sum");
    returnat(m, "foo", label("<FOO:2>"));
    m.call("foo", {Value(15.0), Value(1.0)});
    CHECK(captureat(m).fields.at("FOO2").number() == 120);
    // the final disp on line 9 never ran
    REQUIRE(m.output().size() == 1);
    CHECK(m.output()[0] == "entering foo");
}

TEST_CASE("full intercept flow matches the closed form") {
    for (double n : {15.0, 0.0, 7.0}) {
        Machine m;
        m.load(corpus("foo.ms"));
        gotoat(m, "foo", label("<FOO:1>"));
        assignat(m, "foo", label("<FOO:1>"), {{"a1", Value(n)}});
        captureat(m, "foo", label("<FOO:2>"), "sum");
        returnat(m, "foo", label("<FOO:2>"));
        m.call("foo", {Value(), Value()});
        auto rec = captureat(m);
        CHECK(rec.fields.at("FOO2").number() == n * (n + 1) / 2);
        clearat(m);
    }
}

TEST_CASE("points at a shared site apply assign, eval, capture, return in order") {
    Machine m;
    m.load(corpus("foo.ms"));
    assignat(m, "foo", label("<FOO:1>"), {{"probe", Value(5.0)}});
    evalat(m, "foo", label("<FOO:1>"), closure_of("probe * 0"));
    captureat(m, "foo", label("<FOO:1>"), "probe");
    returnat(m, "foo", label("<FOO:1>"));
    m.call("foo", {Value(9.0), Value(1.0)});
    // eval saw the assigned probe without erroring, capture stored it,
    // return stopped the run before the loop printed anything
    CHECK(m.diagnostics().empty());
    CHECK(captureat(m).fields.at("FOO1").number() == 5);
    CHECK(m.output().size() == 1);
}

TEST_CASE("registering again at the same site replaces the point") {
    Machine m;
    m.load(corpus("foo.ms"));
    assignat(m, "foo", label("<FOO:1>"), {{"a1", Value(3.0)}});
    assignat(m, "foo", label("<FOO:1>"), {{"a1", Value(4.0)}});
    CHECK(m.registry().all().size() == 1);
    m.call("foo", {Value(100.0), Value(1.0)});
    CHECK(m.output().back() == "10");
}

TEST_CASE("clearat scopes to a function or clears everything") {
    Machine m;
    m.load(corpus("foo.ms"));
    m.load(corpus("bar.ms"));
    assignat(m, "foo", label("<FOO:1>"), {{"a1", Value(1.0)}});
    captureat(m, "bar", label("<BAR:0>"));
    CHECK(m.registry().all().size() == 2);
    clearat(m, "foo");
    auto rest = m.registry().all();
    REQUIRE(rest.size() == 1);
    CHECK(rest[0]->function == "bar");
    clearat(m);
    CHECK(m.registry().empty());
}

TEST_CASE("a truthy evalat result aborts with a breakpoint hit at the site") {
    Machine m;
    m.load(corpus("foo.ms"));
    evalat(m, "foo", label("<FOO:2>"), closure_of("sum > 100"));
    try {
        m.call("foo", {Value(15.0), Value(1.0)});
        FAIL("expected a breakpoint hit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BreakpointHit);
        CHECK(e.function() == "foo");
        CHECK(e.line() == 8);
    }
    // falsy result continues normally
    clearat(m);
    m.clear_output();
    evalat(m, "foo", label("<FOO:2>"), closure_of("sum > 1000"));
    m.call("foo", {Value(15.0), Value(1.0)});
    CHECK(m.output().back() == "120");
}

TEST_CASE("errors in injected code are logged and the run continues") {
    Machine oracle;
    oracle.load(corpus("foo.ms"));
    oracle.call("foo", {Value(6.0), Value(1.0)});

    Machine m;
    m.load(corpus("foo.ms"));
    evalat(m, "foo", label("<FOO:2>"), closure_of("undefined_thing + 1"));
    m.call("foo", {Value(6.0), Value(1.0)});
    CHECK(m.output() == oracle.output());
    REQUIRE_FALSE(m.diagnostics().empty());
    CHECK(m.diagnostics()[0].find("identifier:") != std::string::npos);
}

TEST_CASE("halt_on_injection_error turns callback errors into aborts") {
    Machine m;
    m.config().halt_on_injection_error = true;
    m.load(corpus("foo.ms"));
    evalat(m, "foo", label("<FOO:2>"), closure_of("undefined_thing + 1"));
    try {
        m.call("foo", {Value(6.0), Value(1.0)});
        FAIL("expected an injection error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Injection);
    }
}

TEST_CASE("capturing an absent variable is a logged miss") {
    Machine m;
    m.load(corpus("foo.ms"));
    captureat(m, "foo", label("<FOO:1>"), "nothere");
    m.call("foo", {Value(2.0), Value(1.0)});
    CHECK(captureat(m).fields.empty());
    REQUIRE_FALSE(m.diagnostics().empty());
    CHECK(m.diagnostics()[0].find("CaptureMiss") != std::string::npos);
}

TEST_CASE("a site after the last statement fires once at function exit") {
    Machine m;
    m.load_source("function y = tail(x)\ny = x * 2\n% <TAIL:1>\nend\n", "tail.ms");
    captureat(m, "tail", label("<TAIL:1>"), "y");
    m.call("tail", {Value(21.0)});
    CHECK(captureat(m).fields.at("TAIL1").number() == 42);
}

TEST_CASE("capture-only injections do not change behavior") {
    Machine oracle;
    oracle.load(corpus("bar.ms"));
    auto want = oracle.call("bar", {Value(10.0)});

    Machine m;
    m.load(corpus("bar.ms"));
    captureat(m, "bar", label("<BAR:0>"));
    captureat(m, "bar", label("<BAR:1>"));
    auto got = m.call("bar", {Value(10.0)});
    CHECK(got.size() == want.size());
    CHECK(m.output() == oracle.output());
    captureat(m);  // drain

    // and after clearat the machine behaves exactly like the oracle again
    clearat(m);
    m.clear_output();
    m.call("bar", {Value(10.0)});
    CHECK(m.output() == oracle.output());
}

TEST_CASE("native and fidelity return modes agree on captures and results") {
    auto run = [](MachineConfig::ReturnMode mode) {
        Machine m;
        m.config().return_mode = mode;
        m.load(corpus("foo.ms"));
        captureat(m, "foo", label("<FOO:2>"), "sum");
        returnat(m, "foo", label("<FOO:2>"));
        m.call("foo", {Value(15.0), Value(1.0)});
        return std::make_pair(captureat(m), m.output());
    };
    auto [nativeRec, nativeOut] = run(MachineConfig::ReturnMode::Native);
    auto [fidelityRec, fidelityOut] = run(MachineConfig::ReturnMode::Fidelity);
    CHECK(structurally_equal(Value(nativeRec), Value(fidelityRec)));
    CHECK(nativeOut == fidelityOut);
}

TEST_CASE("fidelity mode logs the cleared-variable diagnostic") {
    Machine m;
    m.config().return_mode = MachineConfig::ReturnMode::Fidelity;
    m.load(corpus("foo.ms"));
    returnat(m, "foo", label("<FOO:2>"));
    m.call("foo", {Value(5.0), Value(1.0)});
    REQUIRE_FALSE(m.diagnostics().empty());
    const std::string& d = m.diagnostics()[0];
    CHECK(d.find("identifier: 'RefClearedVarError'") != std::string::npos);
    CHECK(d.find("message: 'Reference to a cleared variable.'") != std::string::npos);
    CHECK(d.find("file: 'foo.ms::9'") != std::string::npos);
}

TEST_CASE("injections on one function leave other functions alone") {
    Machine m;
    m.load(corpus("foo.ms"));
    m.load(corpus("bar.ms"));
    returnat(m, "foo", label("<FOO:1>"));
    m.call("bar", {Value(10.0)});
    CHECK(m.output().back() == "sum scaled");
}

TEST_CASE("registering against an unloaded function fails early") {
    Machine m;
    CHECK_THROWS_AS(captureat(m, "ghost", label("<G:1>"), "x"), Error);
}

TEST_CASE("evalat requires a zero-parameter callback") {
    Machine m;
    m.load(corpus("foo.ms"));
    auto program = parse(tokenize("@(x) x"), "<evalat>");
    const Expr& e = *program->script_body.front().rhs;
    Value::Closure c;
    c.params = e.params;
    c.body = e.args[0];
    c.captured = std::make_shared<const std::map<std::string, Value>>();
    CHECK_THROWS_AS(evalat(m, "foo", label("<FOO:1>"), c), Error);
}
