#include "snl/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "snl/types.hpp"

namespace snl {

void set_log_level(std::string_view level) {
  spdlog::level::level_enum lvl;
  if (level == "off") {
    lvl = spdlog::level::off;
  } else if (level == "info") {
    lvl = spdlog::level::info;
  } else if (level == "debug") {
    lvl = spdlog::level::debug;
  } else {
    throw InvalidArgument("log level must be off, info or debug, got '" + std::string(level) +
                          "'");
  }
  // Logs go to stderr so that stdout stays machine readable.
  static const auto sink = [] {
    auto logger = spdlog::stderr_color_mt("snl");
    spdlog::set_default_logger(logger);
    return logger;
  }();
  sink->set_level(lvl);
  spdlog::set_level(lvl);
}

void configure_logging_from_env() {
  const char *env = std::getenv("SNL_LOG");
  set_log_level(env && *env ? env : "off");
}

}  // namespace snl
