#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seamlab/ast.hpp"
#include "seamlab/parse.hpp"
#include "seamlab/value.hpp"

namespace seamlab {

class Machine;
struct TestSuiteResult;

/// One live function (or script) invocation.
struct Frame {
    std::string function;
    std::map<std::string, Value> workspace;
    int current_line = 0;
    std::vector<std::string> output_names;
    bool cleared = false;
    const Program* program = nullptr;  // owning file, for subfunction lookup
};

enum class InjectionKind { Assign, Eval, Capture, Return, Goto };

/// Sentinel anchor line for sites that resolve past the last executable
/// statement of a function: the hook fires once at normal function exit.
inline constexpr int kExitAnchor = 1 << 30;

struct InjectionPoint {
    std::string function;
    int site_line = 0;  // line the selector resolved to (label comment line)
    int anchor = 0;     // executable line the hook fires at, or kExitAnchor
    InjectionKind kind;
    int hit_count = 0;

    std::vector<std::pair<std::string, Value>> assigns;  // Assign
    Value::Closure callback;                             // Eval
    std::optional<std::string> capture_var;              // Capture
    std::string capture_key;                             // Capture
    int goto_target = 0;                                 // Goto: target anchor line
};

class InjectionRegistry {
public:
    /// Replaces any existing point with the same (function, anchor, kind).
    void put(InjectionPoint point);
    void clear_function(const std::string& function);
    void clear_all();
    bool empty() const;

    InjectionPoint* entry_goto(const std::string& function);
    /// Points anchored at `line` of `function`, in application order
    /// assign -> eval -> capture -> return.
    std::vector<InjectionPoint*> at(const std::string& function, int line);
    std::vector<const InjectionPoint*> all() const;

private:
    // function -> anchor -> kind -> point
    std::map<std::string, std::map<int, std::map<InjectionKind, InjectionPoint>>> points_;
    std::map<std::string, InjectionPoint> entry_gotos_;
};

/// Label-keyed store of captured values; retrieval drains it.
class CaptureStore {
public:
    void put(const std::string& key, Value v) { entries_[key] = std::move(v); }
    Value::Record drain();
    bool empty() const { return entries_.empty(); }

private:
    std::map<std::string, Value> entries_;
};

struct MachineConfig {
    bool halt_on_injection_error = false;
    bool hooks_enabled = true;  // disabled builds the no-hook oracle path
    enum class ReturnMode { Native, Fidelity } return_mode = ReturnMode::Native;
    std::string cache_dir = "./.seamcache";
    bool record_trace = false;
    int max_depth = 1000;
};

struct TraceEntry {
    std::string function;
    int line;
};

struct LoadedProgram {
    std::shared_ptr<const Program> program;
    LabelIndex labels;
    std::string source;
};

/// Host-registered builtin; receives the calling frame so it can reach the
/// live workspace.
using HostBuiltin = std::function<Value(Machine&, Frame&, const std::vector<Value>&)>;

class Machine {
public:
    explicit Machine(MachineConfig config = {});

    MachineConfig& config() { return config_; }
    const MachineConfig& config() const { return config_; }

    void load(const std::string& path);
    void load_source(const std::string& source, const std::string& path);

    bool is_loaded(const std::string& name) const { return programs_.count(name) > 0; }
    const LoadedProgram* find_program(const std::string& name) const;
    const LoadedProgram& program_or_throw(const std::string& name) const;
    /// Function lookup across loaded programs: entry functions first, then
    /// subfunctions (suites may test subfunctions directly).
    const FunctionDef* find_function(const std::string& name, const Program** owner) const;

    std::vector<Value> call(const std::string& function, const std::vector<Value>& args);
    void run_script(const Program& program, Frame& frame);

    Value eval_in_frame(Frame& frame, const std::string& expression_text);
    Value eval_in_frame(Frame& frame, const Value::Closure& callback);
    void assign_in_frame(Frame& frame, const std::string& name, Value value);
    void clear_frame(Frame& frame);

    InjectionRegistry& registry() { return registry_; }
    CaptureStore& captures() { return captures_; }

    const std::vector<std::string>& output() const { return output_; }
    void clear_output() { output_.clear(); }
    void emit(const std::string& line);
    void set_echo(std::ostream* os) { echo_ = os; }

    const std::vector<std::string>& diagnostics() const { return diagnostics_; }
    void diagnose(const std::string& text);

    const std::vector<TraceEntry>& trace() const { return trace_; }
    void clear_trace() { trace_.clear(); }

    void register_builtin(const std::string& name, HostBuiltin fn);
    const HostBuiltin* find_host_builtin(const std::string& name) const;

    TestSuiteResult* recorder() { return recorder_; }
    void set_recorder(TestSuiteResult* r) { recorder_ = r; }

private:
    friend class Interpreter;

    MachineConfig config_;
    std::map<std::string, LoadedProgram> programs_;
    InjectionRegistry registry_;
    CaptureStore captures_;
    std::vector<std::string> diagnostics_;
    std::vector<std::string> output_;
    std::vector<TraceEntry> trace_;
    std::map<std::string, HostBuiltin> host_builtins_;
    std::ostream* echo_ = nullptr;
    TestSuiteResult* recorder_ = nullptr;
    int depth_ = 0;
};

}  // namespace seamlab
