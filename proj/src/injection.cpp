#include "seamlab/injection.hpp"

#include <algorithm>
#include <limits>

#include "seamlab/error.hpp"

namespace seamlab {

namespace {

void collect_lines(const std::vector<Stmt>& stmts, std::vector<int>& lines) {
    for (const auto& s : stmts) {
        lines.push_back(s.line);
        collect_lines(s.body, lines);
        for (const auto& [c, b] : s.elifs) collect_lines(b, lines);
        collect_lines(s.else_body, lines);
    }
}

struct SiteInfo {
    const Program* program;
    const LoadedProgram* loaded;
    const std::vector<Stmt>* body;  // function body or script body
};

SiteInfo site_info(Machine& m, const std::string& fun) {
    // the function may be an entry function, a subfunction, or a script name
    const Program* owner = nullptr;
    const FunctionDef* fn = m.find_function(fun, &owner);
    if (fn) {
        const LoadedProgram* lp = m.find_program(owner->name);
        if (!lp) lp = m.find_program(owner->functions.front().name);
        return SiteInfo{owner, lp, &fn->body};
    }
    const LoadedProgram* lp = m.find_program(fun);
    if (lp && lp->program->kind == Program::Kind::Script)
        return SiteInfo{lp->program.get(), lp, &lp->program->script_body};
    throw Error(ErrorKind::UnknownFunction, "unknown function '" + fun + "'");
}

/// First executable statement line at or after `line`, or kExitAnchor when
/// the site lies past the last statement (full-line label at the end of a
/// function: the hook fires at function exit).
int anchor_line(const std::vector<Stmt>& body, int line) {
    std::vector<int> lines;
    collect_lines(body, lines);
    int best = std::numeric_limits<int>::max();
    for (int l : lines)
        if (l >= line) best = std::min(best, l);
    return best == std::numeric_limits<int>::max() ? kExitAnchor : best;
}

ResolvedSite resolve(Machine& m, const SiteInfo& info, const std::string& fun,
                     const SiteSelector& selector) {
    return resolve_site(info.loaded->labels, *info.program, fun, selector);
}

}  // namespace

SiteSelector selector_from_value(const Value& v) {
    if (v.is_string()) return SiteSelector::from_label(v.string());
    if (v.is_number()) return SiteSelector::from_line(static_cast<int>(v.number()));
    throw Error(ErrorKind::Type, "site selector must be a label string or a line number");
}

std::string capture_key_for(const SiteSelector& selector) {
    if (selector.kind == SiteSelector::Kind::Line)
        return "L" + std::to_string(selector.line);
    std::string key = selector.label;
    key.erase(std::remove(key.begin(), key.end(), ':'), key.end());
    return key;
}

void gotoat(Machine& m, const std::string& fun, const SiteSelector& target) {
    SiteInfo info = site_info(m, fun);
    ResolvedSite site = resolve(m, info, fun, target);
    int anchor = anchor_line(*info.body, site.line);
    if (anchor == kExitAnchor)
        throw Error(ErrorKind::JumpTarget,
                    "goto target has no executable statement at or after line " +
                        std::to_string(site.line));
    bool top_level = std::any_of(info.body->begin(), info.body->end(),
                                 [&](const Stmt& s) { return s.line == anchor; });
    if (!top_level)
        throw Error(ErrorKind::JumpTarget,
                    "goto target line " + std::to_string(anchor) +
                        " is nested inside a block");

    InjectionPoint p;
    p.function = fun;
    p.kind = InjectionKind::Goto;
    p.site_line = site.line;
    p.anchor = 0;  // entry gotos fire before any line hook
    p.goto_target = anchor;
    m.registry().put(std::move(p));
}

void assignat(Machine& m, const std::string& fun, const SiteSelector& selector,
              const std::vector<std::pair<std::string, Value>>& pairs) {
    if (pairs.empty())
        throw Error(ErrorKind::Arity, "assignat needs at least one name/value pair");
    SiteInfo info = site_info(m, fun);
    ResolvedSite site = resolve(m, info, fun, selector);

    InjectionPoint p;
    p.function = fun;
    p.kind = InjectionKind::Assign;
    p.site_line = site.line;
    p.anchor = anchor_line(*info.body, site.line);
    p.assigns = pairs;
    m.registry().put(std::move(p));
}

void captureat(Machine& m, const std::string& fun, const SiteSelector& selector,
               const std::optional<std::string>& var) {
    SiteInfo info = site_info(m, fun);
    ResolvedSite site = resolve(m, info, fun, selector);

    InjectionPoint p;
    p.function = fun;
    p.kind = InjectionKind::Capture;
    p.site_line = site.line;
    p.anchor = anchor_line(*info.body, site.line);
    p.capture_var = var;
    p.capture_key = capture_key_for(selector);
    m.registry().put(std::move(p));
}

Value::Record captureat(Machine& m) {
    return m.captures().drain();
}

void returnat(Machine& m, const std::string& fun, const SiteSelector& selector) {
    SiteInfo info = site_info(m, fun);
    ResolvedSite site = resolve(m, info, fun, selector);

    InjectionPoint p;
    p.function = fun;
    p.kind = InjectionKind::Return;
    p.site_line = site.line;
    p.anchor = anchor_line(*info.body, site.line);
    m.registry().put(std::move(p));
}

void evalat(Machine& m, const std::string& fun, const SiteSelector& selector,
            const Value::Closure& callback) {
    if (!callback.params.empty())
        throw Error(ErrorKind::Arity, "evalat callback must take no parameters");
    SiteInfo info = site_info(m, fun);
    ResolvedSite site = resolve(m, info, fun, selector);

    InjectionPoint p;
    p.function = fun;
    p.kind = InjectionKind::Eval;
    p.site_line = site.line;
    p.anchor = anchor_line(*info.body, site.line);
    p.callback = callback;
    m.registry().put(std::move(p));
}

void clearat(Machine& m) {
    m.registry().clear_all();
}

void clearat(Machine& m, const std::string& fun) {
    site_info(m, fun);  // UnknownFunctionError when never loaded
    m.registry().clear_function(fun);
}

}  // namespace seamlab
