#pragma once

#include <string>

namespace vlmtie::log {

enum class Level { quiet = 0, warn = 1, info = 2, debug = 3 };

/// Active level, read once from the VLMTIE_LOG environment variable
/// (quiet | warn | info | debug). Defaults to warn.
Level level();

void warn(const std::string& msg);
void info(const std::string& msg);
void debug(const std::string& msg);

}  // namespace vlmtie::log
