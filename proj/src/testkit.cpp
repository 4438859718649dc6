#include "seamlab/testkit.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "seamlab/error.hpp"
#include "seamlab/injection.hpp"

namespace fs = std::filesystem;

namespace seamlab {

// ---- assertions ------------------------------------------------------------

namespace {

std::string mismatch_detail(const Value& actual, const Value& expected) {
    if (actual.is_record() && expected.is_record()) {
        const auto& a = actual.record().fields;
        const auto& e = expected.record().fields;
        std::vector<std::string> parts;
        for (const auto& [k, v] : e)
            if (!a.count(k)) parts.push_back("missing key '" + k + "'");
        for (const auto& [k, v] : a) {
            auto it = e.find(k);
            if (it == e.end())
                parts.push_back("unexpected key '" + k + "'");
            else if (!structurally_equal(v, it->second))
                parts.push_back("mismatch at key '" + k + "'");
        }
        if (!parts.empty()) {
            std::string detail = parts[0];
            for (size_t i = 1; i < parts.size(); ++i) detail += ", " + parts[i];
            return detail;
        }
    }
    return "values differ";
}

}  // namespace

AssertionOutcome expect_eq(const Value& actual, const Value& expected) {
    AssertionOutcome o;
    o.kind = AssertionOutcome::Kind::ExpectEq;
    o.actual = actual;
    o.expected = expected;
    o.passed = structurally_equal(actual, expected);
    if (!o.passed) o.detail = mismatch_detail(actual, expected);
    return o;
}

AssertionOutcome expect_near(double actual, double expected, double tol) {
    if (tol < 0) throw Error(ErrorKind::Runtime, "EXPECT_NEAR tolerance must be >= 0");
    AssertionOutcome o;
    o.kind = AssertionOutcome::Kind::ExpectNear;
    o.actual = Value(actual);
    o.expected = Value(expected);
    o.tolerance = tol;
    o.passed = std::abs(actual - expected) <= tol;
    if (!o.passed) o.detail = "difference " + format_number(std::abs(actual - expected)) +
                              " exceeds tolerance " + format_number(tol);
    return o;
}

AssertionOutcome expect_true(const Value& actual) {
    AssertionOutcome o;
    o.kind = AssertionOutcome::Kind::ExpectTrue;
    o.actual = actual;
    o.expected = Value(true);
    o.passed = truthy(actual);
    if (!o.passed) o.detail = "value is falsy";
    return o;
}

// ---- TestSuiteResult -------------------------------------------------------

int TestSuiteResult::assertion_count() const {
    int n = 0;
    for (const auto& s : sections) n += static_cast<int>(s.outcomes.size());
    return n;
}

int TestSuiteResult::failure_count() const {
    int n = 0;
    for (const auto& s : sections)
        for (const auto& o : s.outcomes)
            if (!o.passed) ++n;
    return n;
}

int TestSuiteResult::active_section_count() const {
    int n = 0;
    for (const auto& s : sections)
        if (!s.outcomes.empty()) ++n;
    return n;
}

void TestSuiteResult::record(AssertionOutcome outcome) {
    // place the outcome in the last section starting at or before its line
    size_t target = 0;
    bool found = false;
    for (size_t i = 0; i < sections.size(); ++i) {
        if (sections[i].first_line <= outcome.line &&
            sections[i].first_line > 0) {
            target = i;
            found = true;
        }
    }
    if (!found) {
        if (sections.empty() || sections.front().first_line != 0)
            sections.insert(sections.begin(), Section{"", 0, {}});
        target = 0;
    }
    outcome.section = sections[target].name;
    if (!source_text.empty() && outcome.line > 0) {
        std::istringstream in(source_text);
        std::string line;
        for (int i = 1; std::getline(in, line); ++i) {
            if (i == outcome.line) {
                size_t a = line.find_first_not_of(" \t");
                size_t b = line.find_last_not_of(" \t\r");
                if (a != std::string::npos) outcome.context = line.substr(a, b - a + 1);
                break;
            }
        }
    }
    sections[target].outcomes.push_back(std::move(outcome));
}

// ---- snapshot store --------------------------------------------------------

namespace {

void validate_key(const std::string& key) {
    static const std::regex re("[A-Za-z0-9_]+");
    if (!std::regex_match(key, re))
        throw Error(ErrorKind::StoreIO, "invalid snapshot key '" + key + "'");
}

}  // namespace

SnapshotStore::SnapshotStore(std::string directory) : directory_(std::move(directory)) {
    std::error_code ec;
    fs::create_directories(directory_, ec);
    if (ec)
        throw Error(ErrorKind::StoreIO,
                    "cannot create cache directory '" + directory_ + "': " + ec.message());
}

std::string SnapshotStore::file_for(const std::string& key) const {
    return (fs::path(directory_) / (key + ".snap")).string();
}

bool SnapshotStore::has(const std::string& key) const {
    return fs::exists(file_for(key));
}

Value SnapshotStore::cache(const std::string& key, const Value& value) {
    validate_key(key);
    const std::string path = file_for(key);
    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorKind::StoreIO, "cannot read '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        if (!text.empty() && text.back() == '\n') text.pop_back();
        return deserialize(text);
    }
    std::string text = serialize(value);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::StoreIO, "cannot write '" + tmp + "'");
        out << text << '\n';
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::StoreIO, "cannot rename '" + tmp + "': " + ec.message());
    return value;
}

DirectoryLock::DirectoryLock(const std::string& directory) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    lock_path_ = (fs::path(directory) / ".lock").string();
    if (fs::exists(lock_path_))
        throw Error(ErrorKind::StoreIO,
                    "cache directory '" + directory + "' is locked by another suite");
    std::ofstream out(lock_path_, std::ios::trunc);
    if (!out) throw Error(ErrorKind::StoreIO, "cannot create '" + lock_path_ + "'");
}

DirectoryLock::~DirectoryLock() {
    std::error_code ec;
    fs::remove(lock_path_, ec);
}

// ---- suite runner ----------------------------------------------------------

namespace {

std::vector<std::pair<int, std::string>> scan_sections(const std::string& source) {
    std::vector<std::pair<int, std::string>> markers;
    std::istringstream in(source);
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        size_t i = line.find_first_not_of(" \t");
        if (i == std::string::npos || line.compare(i, 2, "%%") != 0) continue;
        std::string name = line.substr(i + 2);
        size_t a = name.find_first_not_of(" \t");
        size_t b = name.find_last_not_of(" \t\r");
        name = a == std::string::npos ? "" : name.substr(a, b - a + 1);
        markers.emplace_back(n, name);
    }
    return markers;
}

struct TearDown {
    Machine& m;
    ~TearDown() {
        m.registry().clear_all();
        m.captures().drain();
        m.set_recorder(nullptr);
    }
};

}  // namespace

TestSuiteResult run_suite(Machine& m, const std::string& suite_path) {
    TestSuiteResult result;
    result.suite = suite_path;

    std::string source;
    {
        std::ifstream in(suite_path, std::ios::binary);
        if (!in) {
            result.verdict = TestSuiteResult::Verdict::Error;
            result.error_kind = error_kind_name(ErrorKind::StoreIO);
            result.diagnostics.push_back("cannot open '" + suite_path + "'");
            return result;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        source = ss.str();
    }
    result.source_text = source;
    for (const auto& [line, name] : scan_sections(source)) {
        result.section_markers.emplace_back(line, name);
        result.sections.push_back(TestSuiteResult::Section{name, line, {}});
    }

    TearDown guard{m};
    try {
        DirectoryLock lock(m.config().cache_dir);
        auto tokens = tokenize(source);
        auto program = parse(tokens, suite_path);
        if (program->kind != Program::Kind::Script)
            throw Error(ErrorKind::Parse, "a test suite must be a script");
        m.set_recorder(&result);
        Frame frame;
        m.run_script(*program, frame);
    } catch (const Error& e) {
        result.verdict = TestSuiteResult::Verdict::Error;
        result.error_kind = error_kind_name(e.kind());
        result.diagnostics.push_back(e.render());
        return result;
    }

    result.verdict = result.failure_count() == 0 ? TestSuiteResult::Verdict::Pass
                                                 : TestSuiteResult::Verdict::Fail;
    return result;
}

}  // namespace seamlab
