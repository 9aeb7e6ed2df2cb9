#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace testutil {

inline std::string tmp_dir() {
#ifdef TNCODE_TMP_DIR
  std::string dir = TNCODE_TMP_DIR;
#else
  std::string dir = std::filesystem::temp_directory_path().string() + "/tncode_tests";
#endif
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string cli_path() {
#ifdef TNCODE_CLI_PATH
  return TNCODE_CLI_PATH;
#else
  throw std::runtime_error("TNCODE_CLI_PATH not defined");
#endif
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

// Runs the CLI with the given arguments, capturing stdout+stderr.
// `env` is a prefix like "TNCODE_THREADS=4 " (may be empty).
inline CliResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + "\"" + cli_path() + "\" " + args + " 2>&1";
  CliResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.output.append(buf.data(), got);
  int status = pclose(pipe);
  res.exit_code = (status >= 256) ? status / 256 : status;
  return res;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testutil
