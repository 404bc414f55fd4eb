#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "sps/dsl/build.hpp"
#include "sps/dsl/parser.hpp"
#include "sps/engine.hpp"

inline std::string fixture(const std::string& name) { return std::string(SPS_FIXTURES) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline sps::Value key(const std::string& op, std::vector<sps::Value> args = {}) {
  return sps::make_key(op, std::move(args));
}
inline sps::Value at(const std::string& name) { return sps::Value::atom(name); }
inline sps::Value num(double d) { return sps::Value::real(d); }

struct Shell {
  int status = 0;
  std::string out;
};

// Runs a shell command, capturing stdout (stderr is folded in with 2>&1 by callers).
inline Shell shell(const std::string& cmd) {
  Shell r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

inline std::string cli() { return SPS_CLI; }
