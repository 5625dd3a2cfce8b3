#pragma once

#include <string_view>

namespace snl {

// Sets the library log level: "off", "info" or "debug".
void set_log_level(std::string_view level);

// Applies SNL_LOG if set; the default is off.
void configure_logging_from_env();

}  // namespace snl
