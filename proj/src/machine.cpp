#include "seamlab/machine.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "seamlab/error.hpp"
#include "seamlab/testkit.hpp"

namespace seamlab {

// ---- InjectionRegistry -----------------------------------------------------

void InjectionRegistry::put(InjectionPoint point) {
    if (point.kind == InjectionKind::Goto) {
        entry_gotos_[point.function] = std::move(point);
        return;
    }
    auto& slot = points_[point.function][point.anchor][point.kind];
    slot = std::move(point);  // replace resets hit_count
}

void InjectionRegistry::clear_function(const std::string& function) {
    points_.erase(function);
    entry_gotos_.erase(function);
}

void InjectionRegistry::clear_all() {
    points_.clear();
    entry_gotos_.clear();
}

bool InjectionRegistry::empty() const {
    return points_.empty() && entry_gotos_.empty();
}

InjectionPoint* InjectionRegistry::entry_goto(const std::string& function) {
    auto it = entry_gotos_.find(function);
    return it == entry_gotos_.end() ? nullptr : &it->second;
}

std::vector<InjectionPoint*> InjectionRegistry::at(const std::string& function, int line) {
    std::vector<InjectionPoint*> out;
    auto fit = points_.find(function);
    if (fit == points_.end()) return out;
    auto lit = fit->second.find(line);
    if (lit == fit->second.end()) return out;
    // fixed application order: assign -> eval -> capture -> return
    for (InjectionKind k : {InjectionKind::Assign, InjectionKind::Eval,
                            InjectionKind::Capture, InjectionKind::Return}) {
        auto kit = lit->second.find(k);
        if (kit != lit->second.end()) out.push_back(&kit->second);
    }
    return out;
}

std::vector<const InjectionPoint*> InjectionRegistry::all() const {
    std::vector<const InjectionPoint*> out;
    for (const auto& [fn, lines] : points_)
        for (const auto& [line, kinds] : lines)
            for (const auto& [kind, p] : kinds) out.push_back(&p);
    for (const auto& [fn, p] : entry_gotos_) out.push_back(&p);
    return out;
}

Value::Record CaptureStore::drain() {
    Value::Record rec;
    rec.fields = std::move(entries_);
    entries_.clear();
    return rec;
}

// ---- Machine ---------------------------------------------------------------

Machine::Machine(MachineConfig config) : config_(std::move(config)) {
    install_standard_builtins(*this);
}

void Machine::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::StoreIO, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    load_source(ss.str(), path);
}

void Machine::load_source(const std::string& source, const std::string& path) {
    auto tokens = tokenize(source);
    auto program = parse(tokens, path);
    LabelIndex labels = index_labels(source, *program);

    if (programs_.count(program->name))
        diagnose("reloaded '" + program->name + "' from " + path);
    programs_[program->name] = LoadedProgram{program, std::move(labels), source};
}

const LoadedProgram* Machine::find_program(const std::string& name) const {
    auto it = programs_.find(name);
    return it == programs_.end() ? nullptr : &it->second;
}

const LoadedProgram& Machine::program_or_throw(const std::string& name) const {
    const LoadedProgram* p = find_program(name);
    if (!p)
        throw Error(ErrorKind::UnknownFunction, "unknown function '" + name + "'");
    return *p;
}

const FunctionDef* Machine::find_function(const std::string& name, const Program** owner) const {
    for (const auto& [entry, lp] : programs_) {
        if (lp.program->kind != Program::Kind::FunctionFile) continue;
        if (lp.program->functions.front().name == name) {
            if (owner) *owner = lp.program.get();
            return &lp.program->functions.front();
        }
    }
    // subfunctions, so suites can exercise them directly
    for (const auto& [entry, lp] : programs_) {
        if (lp.program->kind != Program::Kind::FunctionFile) continue;
        for (const auto& f : lp.program->functions) {
            if (f.name == name) {
                if (owner) *owner = lp.program.get();
                return &f;
            }
        }
    }
    return nullptr;
}

void Machine::emit(const std::string& line) {
    output_.push_back(line);
    if (echo_) *echo_ << line << '\n';
}

void Machine::diagnose(const std::string& text) {
    diagnostics_.push_back(text);
}

void Machine::register_builtin(const std::string& name, HostBuiltin fn) {
    host_builtins_[name] = std::move(fn);
}

const HostBuiltin* Machine::find_host_builtin(const std::string& name) const {
    auto it = host_builtins_.find(name);
    return it == host_builtins_.end() ? nullptr : &it->second;
}

void Machine::assign_in_frame(Frame& frame, const std::string& name, Value value) {
    frame.workspace[name] = std::move(value);
}

void Machine::clear_frame(Frame& frame) {
    frame.workspace.clear();
    frame.cleared = true;
}

}  // namespace seamlab
