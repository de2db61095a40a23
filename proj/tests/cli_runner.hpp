#pragma once

// Runs the qsh binary through the shell and captures stdout and the exit code.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace qsh::testing {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

inline std::string model_path(const std::string& name) {
    return std::string(QSH_MODELS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// `stdin_text`, when given, is piped in through a here-document.
inline CliResult run_cli(const std::string& args, const std::string& stdin_text = {}) {
    std::string cmd = std::string(QSH_CLI_PATH) + " " + args + " 2>/dev/null";
    if (!stdin_text.empty()) cmd += " <<'QSH_EOF'\n" + stdin_text + "\nQSH_EOF";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace qsh::testing
