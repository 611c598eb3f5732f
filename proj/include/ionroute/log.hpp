#pragma once

#include <spdlog/logger.h>

#include <memory>

namespace ionroute {

/// Shared stderr logger. Level comes from IONROUTE_LOG
/// (error|warn|info|debug), default warn.
std::shared_ptr<spdlog::logger> logger();

} // namespace ionroute
