#pragma once

// One PASS/FAIL/SKIP line per acceptance criterion.

#include <cstdio>
#include <string>

namespace acceptance {

class Ledger {
public:
  void record(int id, const std::string& title, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    failures_ += pass ? 0 : 1;
  }
  void skip(int id, const std::string& title, const std::string& reason) {
    std::printf("[SKIP] criterion %d: %s -- %s\n", id, title.c_str(), reason.c_str());
    std::fflush(stdout);
    ++skips_;
  }
  void soft(int id, const std::string& title, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d (soft): %s -- %s\n", pass ? "PASS" : "WARN", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  int failures() const { return failures_; }
  int skips() const { return skips_; }

private:
  int failures_ = 0;
  int skips_ = 0;
};

inline std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

} // namespace acceptance
