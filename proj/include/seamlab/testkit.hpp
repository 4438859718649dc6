#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seamlab/machine.hpp"
#include "seamlab/value.hpp"

namespace seamlab {

struct AssertionOutcome {
    enum class Kind { ExpectEq, ExpectNear, ExpectTrue };
    Kind kind;
    bool passed;
    Value actual;
    Value expected;
    std::optional<double> tolerance;
    std::string suite_file;
    int line = 0;
    std::string section;
    std::string context;  // trimmed source line of the assertion, when known
    std::string detail;   // mismatch description for failures
};

struct TestSuiteResult {
    enum class Verdict { Pass, Fail, Error };

    std::string suite;
    struct Section {
        std::string name;
        int first_line = 0;
        std::vector<AssertionOutcome> outcomes;
    };
    std::vector<Section> sections;
    std::vector<std::string> diagnostics;
    Verdict verdict = Verdict::Pass;
    std::string error_kind;  // error_kind_name of the escaped error, if any

    int assertion_count() const;
    int failure_count() const;
    /// Sections that recorded at least one assertion.
    int active_section_count() const;

    void record(AssertionOutcome outcome);
    // set by run_suite while executing, used to place outcomes in sections
    std::vector<std::pair<int, std::string>> section_markers;  // (line, name)
    std::string source_text;
};

AssertionOutcome expect_eq(const Value& actual, const Value& expected);
AssertionOutcome expect_near(double actual, double expected, double tol);
AssertionOutcome expect_true(const Value& actual);

/// Canonical deterministic text form: record keys sorted, shortest
/// round-trip numbers, '\n' line ends. Closures and handles are not
/// serializable.
std::string serialize(const Value& v);
Value deserialize(const std::string& text);

/// Disk-backed golden store: one file per key, `<key>.snap`, atomic writes.
class SnapshotStore {
public:
    explicit SnapshotStore(std::string directory);

    /// Miss: store `value`, return it. Hit: ignore `value`, return the
    /// stored one.
    Value cache(const std::string& key, const Value& value);

    bool has(const std::string& key) const;
    const std::string& directory() const { return directory_; }

private:
    std::string file_for(const std::string& key) const;
    std::string directory_;
};

/// Held for the duration of a suite run; refuses a second concurrent lock
/// on the same cache directory.
class DirectoryLock {
public:
    explicit DirectoryLock(const std::string& directory);
    ~DirectoryLock();
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    std::string lock_path_;
};

/// Runs a suite script with section tracking and the tear-down guarantee:
/// the machine's injection registry is cleared and the capture store
/// drained afterwards, pass or fail.
TestSuiteResult run_suite(Machine& m, const std::string& suite_path);

/// Install disp/num2str/length/error/true/false, the injection builtins,
/// and the testkit builtins (EXPECT_*, CACHE, captureat, ...) on a machine.
void install_standard_builtins(Machine& m);

}  // namespace seamlab
