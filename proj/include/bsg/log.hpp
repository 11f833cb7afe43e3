#ifndef BSG_LOG_HPP
#define BSG_LOG_HPP

#include <cstdio>
#include <cstdlib>
#include <cstring>

// Minimal stderr logger gated by the BGL_LOG env var
// (error|warn|info|debug, default warn).

namespace bsg::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline Level threshold() {
  static const Level lvl = [] {
    const char* s = std::getenv("BGL_LOG");
    if (s == nullptr) return Level::Warn;
    if (std::strcmp(s, "error") == 0) return Level::Error;
    if (std::strcmp(s, "warn") == 0) return Level::Warn;
    if (std::strcmp(s, "info") == 0) return Level::Info;
    if (std::strcmp(s, "debug") == 0) return Level::Debug;
    return Level::Warn;
  }();
  return lvl;
}

template <typename... Args>
inline void emit(Level lvl, const char* tag, const char* fmt, Args... args) {
  if (lvl > threshold()) return;
  std::fprintf(stderr, "[%s] ", tag);
  std::fprintf(stderr, fmt, args...);
  std::fputc('\n', stderr);
}

template <typename... Args>
inline void error(const char* fmt, Args... args) {
  emit(Level::Error, "error", fmt, args...);
}
template <typename... Args>
inline void warn(const char* fmt, Args... args) {
  emit(Level::Warn, "warn", fmt, args...);
}
template <typename... Args>
inline void info(const char* fmt, Args... args) {
  emit(Level::Info, "info", fmt, args...);
}
template <typename... Args>
inline void debug(const char* fmt, Args... args) {
  emit(Level::Debug, "debug", fmt, args...);
}

}  // namespace bsg::log

#endif
