#include <ostream>

#include <CLI11.hpp>

#include "seamlab/cli.hpp"

namespace seamlab {

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"seamlab - MiniScript interpreter with injection testing"};
    app.require_subcommand(1);

    CliConfig config;
    std::string format = "human";

    auto* run = app.add_subcommand("run", "Run scripts or function files");
    run->add_option("paths", config.paths, "MiniScript files (.ms)")->required();
    run->add_flag("--halt-on-injection-error", config.halt_on_injection_error,
                  "Abort a run when injected code throws");

    auto* test = app.add_subcommand("test", "Run test suites");
    test->add_option("paths", config.paths, "Suite scripts (.ms)")->required();
    test->add_option("--format", format, "Report format: human or tap")
        ->check(CLI::IsMember({"human", "tap"}));
    test->add_option("--cache-dir", config.cache_dir,
                     "Snapshot cache directory (default $SEAMLAB_CACHE_DIR or ./.seamcache)");
    test->add_flag("--fail-fast", config.fail_fast, "Stop after the first failing suite");
    test->add_flag("--halt-on-injection-error", config.halt_on_injection_error,
                   "Abort a run when injected code throws");

    auto* labels = app.add_subcommand("labels", "List injection labels");
    labels->add_option("paths", config.paths, "MiniScript files (.ms)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    config.format = format == "tap" ? CliConfig::Format::Tap : CliConfig::Format::Human;

    if (app.got_subcommand(run)) {
        config.command = CliConfig::Command::Run;
        return cmd_run(config, out, err);
    }
    if (app.got_subcommand(test)) {
        config.command = CliConfig::Command::Test;
        return cmd_test(config, out, err);
    }
    config.command = CliConfig::Command::Labels;
    return cmd_labels(config, out, err);
}

}  // namespace seamlab
