#include <exception>

#include "commands.hpp"
#include "uvgb/cli.hpp"
#include "uvgb/error.hpp"

namespace uvgb::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"UV-G-B aerial flower monitoring pipeline", "uvgb"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand help for every subcommand");

    Streams io{out, err};
    add_calibrate(app, io);
    add_plan(app, io);
    add_tile(app, io);
    add_augment(app, io);
    add_split(app, io);
    add_detect(app, io);
    add_eval(app, io);
    add_simulate(app, io);
    add_survey(app, io);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const BackendError& e) {
        err << "error: " << e.what() << "\n";
        return kBackendError;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kSuccess;
}

}  // namespace uvgb::cli
