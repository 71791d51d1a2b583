#include "nctk/common.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace nctk {

namespace {
std::mutex g_warn_mutex;
WarnSink g_sink;
std::atomic<long> g_warnings{0};
}  // namespace

void set_warn_sink(WarnSink sink) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  g_sink = std::move(sink);
}

void warn(const std::string& msg) {
  ++g_warnings;
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  if (g_sink)
    g_sink(msg);
  else
    std::cerr << "nctk: warning: " << msg << "\n";
}

long warning_count() { return g_warnings.load(); }

}  // namespace nctk
