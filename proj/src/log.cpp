#include "ionroute/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string>

namespace ionroute {

std::shared_ptr<spdlog::logger> logger() {
  static const std::shared_ptr<spdlog::logger> instance = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto log = std::make_shared<spdlog::logger>("ionroute", sink);
    log->set_pattern("[ionroute %l] %v");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("IONROUTE_LOG")) {
      level = spdlog::level::from_str(env);
      if (level == spdlog::level::off && std::string(env) != "off") {
        level = spdlog::level::warn;
      }
    }
    log->set_level(level);
    return log;
  }();
  return instance;
}

} // namespace ionroute
