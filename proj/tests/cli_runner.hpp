#pragma once

#include "perckit/io_util.hpp"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace cli_runner {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::filesystem::path scratch_dir(const std::string& name) {
    std::filesystem::path d = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(d);
    return d;
}

inline RunResult run(const std::string& cli, const std::string& args,
                     const std::filesystem::path& scratch) {
    std::filesystem::path out = scratch / "stdout.txt";
    std::filesystem::path err = scratch / "stderr.txt";
    std::string cmd = cli + " " + args + " > " + out.string() + " 2> " + err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = perckit::read_file(out.string());
    r.err = perckit::read_file(err.string());
    return r;
}

} // namespace cli_runner
