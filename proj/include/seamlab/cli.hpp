#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seamlab {

struct CliConfig {
    enum class Command { Run, Test, Labels } command = Command::Run;
    std::vector<std::string> paths;
    std::string cache_dir;  // resolved: flag > SEAMLAB_CACHE_DIR > ./.seamcache
    enum class Format { Human, Tap } format = Format::Human;
    bool fail_fast = false;
    bool halt_on_injection_error = false;
};

// Exit codes: 0 success, 1 test failures, 2 usage/parse error, 3 runtime error.
int cmd_run(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_test(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_labels(const CliConfig& config, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Reads the `% seamlab:load <path>` pragmas at the top of a suite file;
/// paths are relative to the suite's directory.
std::vector<std::string> suite_load_pragmas(const std::string& suite_path);

}  // namespace seamlab
