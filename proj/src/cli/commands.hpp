#pragma once

#include <ostream>

#include <CLI11.hpp>

namespace uvgb::cli {

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

// Each registers one subcommand whose callback performs the work.
void add_calibrate(CLI::App& app, Streams io);
void add_plan(CLI::App& app, Streams io);
void add_tile(CLI::App& app, Streams io);
void add_augment(CLI::App& app, Streams io);
void add_split(CLI::App& app, Streams io);
void add_detect(CLI::App& app, Streams io);
void add_eval(CLI::App& app, Streams io);
void add_simulate(CLI::App& app, Streams io);
void add_survey(CLI::App& app, Streams io);

}  // namespace uvgb::cli
