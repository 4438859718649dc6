#include "seamlab/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "seamlab/error.hpp"
#include "seamlab/machine.hpp"
#include "seamlab/testkit.hpp"

namespace fs = std::filesystem;

namespace seamlab {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTestFailure = 1;
constexpr int kExitUsageOrParse = 2;
constexpr int kExitRuntime = 3;

bool is_parse_family(ErrorKind kind) {
    return kind == ErrorKind::Lex || kind == ErrorKind::Parse ||
           kind == ErrorKind::DuplicateLabel;
}

bool is_parse_family(const std::string& kind_name) {
    return kind_name == "LexError" || kind_name == "ParseError" ||
           kind_name == "DuplicateLabelError";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::StoreIO, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolve_cache_dir(const CliConfig& config) {
    if (!config.cache_dir.empty()) return config.cache_dir;
    if (const char* env = std::getenv("SEAMLAB_CACHE_DIR"); env && *env) return env;
    return "./.seamcache";
}

std::string assertion_site(const AssertionOutcome& o) {
    return o.suite_file + ":" + std::to_string(o.line);
}

void print_failure(std::ostream& out, const AssertionOutcome& o, const char* indent) {
    out << indent << "FAIL " << (o.section.empty() ? "(no section)" : o.section)
        << " at " << assertion_site(o) << "\n";
    if (!o.context.empty()) out << indent << "  " << o.context << "\n";
    if (!o.detail.empty()) out << indent << "  " << o.detail << "\n";
    auto render = [](const Value& v) {
        try {
            return serialize(v);
        } catch (const Error&) {
            return v.display();
        }
    };
    out << indent << "  expected: " << render(o.expected) << "\n";
    out << indent << "  actual:   " << render(o.actual) << "\n";
}

}  // namespace

std::vector<std::string> suite_load_pragmas(const std::string& suite_path) {
    std::vector<std::string> paths;
    std::ifstream in(suite_path);
    std::string line;
    const std::string tag = "% seamlab:load ";
    while (std::getline(in, line)) {
        size_t i = line.find_first_not_of(" \t");
        if (i == std::string::npos) continue;
        std::string trimmed = line.substr(i);
        if (trimmed.rfind(tag, 0) == 0) {
            std::string p = trimmed.substr(tag.size());
            size_t b = p.find_last_not_of(" \t\r");
            if (b != std::string::npos) p = p.substr(0, b + 1);
            if (!p.empty())
                paths.push_back((fs::path(suite_path).parent_path() / p).string());
        } else if (trimmed[0] != '%') {
            break;  // pragmas live in the comment block at the top
        }
    }
    return paths;
}

int cmd_run(const CliConfig& config, std::ostream& out, std::ostream& err) {
    for (const auto& path : config.paths) {
        Machine m;
        m.config().halt_on_injection_error = config.halt_on_injection_error;
        m.set_echo(&out);
        std::string entry;
        try {
            std::string source = read_file(path);
            auto program = parse(tokenize(source), path);
            m.load_source(source, path);
            entry = program->name;
        } catch (const Error& e) {
            err << e.render() << "\n";
            return is_parse_family(e.kind()) ? kExitUsageOrParse : kExitRuntime;
        }
        try {
            m.call(entry, {});
        } catch (const Error& e) {
            err << e.render() << "\n";
            return kExitRuntime;
        }
    }
    return kExitOk;
}

int cmd_test(const CliConfig& config, std::ostream& out, std::ostream& err) {
    std::vector<TestSuiteResult> results;
    std::string cache_dir = resolve_cache_dir(config);

    for (const auto& suite : config.paths) {
        Machine m;  // per-suite isolation
        m.config().cache_dir = cache_dir;
        m.config().halt_on_injection_error = config.halt_on_injection_error;

        TestSuiteResult result;
        result.suite = suite;
        bool load_failed = false;
        for (const auto& sut : suite_load_pragmas(suite)) {
            try {
                m.load(sut);
            } catch (const Error& e) {
                result.verdict = TestSuiteResult::Verdict::Error;
                result.error_kind = error_kind_name(e.kind());
                result.diagnostics.push_back(e.render());
                load_failed = true;
                break;
            }
        }
        if (!load_failed) result = run_suite(m, suite);
        results.push_back(std::move(result));

        const auto& r = results.back();
        if (config.fail_fast && r.verdict != TestSuiteResult::Verdict::Pass) break;
    }

    int exit_code = kExitOk;
    for (const auto& r : results) {
        if (r.verdict == TestSuiteResult::Verdict::Error) {
            int code = is_parse_family(r.error_kind) ? kExitUsageOrParse : kExitRuntime;
            if (exit_code == kExitOk || exit_code == kExitTestFailure || code < exit_code)
                exit_code = code;
        } else if (r.verdict == TestSuiteResult::Verdict::Fail && exit_code == kExitOk) {
            exit_code = kExitTestFailure;
        }
    }

    if (config.format == CliConfig::Format::Tap) {
        int total = 0;
        for (const auto& r : results) total += r.assertion_count();
        out << "TAP version 14\n";
        out << "1.." << total << "\n";
        int n = 0;
        for (const auto& r : results) {
            for (const auto& s : r.sections) {
                for (const auto& o : s.outcomes) {
                    ++n;
                    out << (o.passed ? "ok " : "not ok ") << n << " - "
                        << (o.section.empty() ? "(no section)" : o.section) << ": "
                        << assertion_site(o) << "\n";
                    if (!o.passed) {
                        out << "# " << (o.detail.empty() ? "assertion failed" : o.detail)
                            << "\n";
                    }
                }
            }
            for (const auto& d : r.diagnostics) {
                std::istringstream in(d);
                std::string line;
                while (std::getline(in, line)) out << "# " << line << "\n";
            }
        }
    } else {
        for (const auto& r : results) {
            const char* verdict = r.verdict == TestSuiteResult::Verdict::Pass ? "pass"
                                  : r.verdict == TestSuiteResult::Verdict::Fail ? "fail"
                                                                                : "error";
            out << r.suite << ": " << verdict << "\n";
            for (const auto& s : r.sections)
                for (const auto& o : s.outcomes)
                    if (!o.passed) print_failure(out, o, "  ");
            out << "  " << r.active_section_count() << " sections, "
                << r.assertion_count() << " assertions, " << r.failure_count()
                << " failures\n";
            for (const auto& d : r.diagnostics) err << d << "\n";
        }
    }
    return exit_code;
}

int cmd_labels(const CliConfig& config, std::ostream& out, std::ostream& err) {
    struct Entry {
        std::string label, function, file;
        int line;
    };
    std::vector<Entry> entries;
    std::vector<std::pair<std::string, std::string>> sources;  // (path, text)

    for (const auto& path : config.paths) {
        try {
            std::string text = read_file(path);
            sources.emplace_back(path, text);
            auto tokens = tokenize(text);
            auto program = parse(tokens, path);
            LabelIndex index = index_labels(text, *program);
            for (const auto& [label, entry] : index.entries)
                entries.push_back({label, entry.function, path, entry.line});
        } catch (const Error& e) {
            err << e.render() << "\n";
            return is_parse_family(e.kind()) ? kExitUsageOrParse : kExitRuntime;
        }
    }

    for (const auto& e : entries)
        out << e.label << "\t" << e.function << "\t" << e.line << "\n";

    // informational: labels no other given file refers to
    for (const auto& e : entries) {
        std::string needle = "<" + e.label + ">";
        bool referenced = false;
        for (const auto& [path, text] : sources) {
            if (path == e.file) continue;
            if (text.find(needle) != std::string::npos) {
                referenced = true;
                break;
            }
        }
        if (!referenced)
            err << "note: label <" << e.label << "> is not referenced by any given suite\n";
    }
    return kExitOk;
}

}  // namespace seamlab
