#include "vlmtie/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string_view>

namespace vlmtie::log {

namespace {

Level parse_level() {
    const char* env = std::getenv("VLMTIE_LOG");
    if (!env) return Level::warn;
    std::string_view v(env);
    if (v == "quiet") return Level::quiet;
    if (v == "warn") return Level::warn;
    if (v == "info") return Level::info;
    if (v == "debug") return Level::debug;
    return Level::warn;
}

}  // namespace

Level level() {
    static const Level lvl = parse_level();
    return lvl;
}

void warn(const std::string& msg) {
    if (level() >= Level::warn) std::cerr << "[warn] " << msg << '\n';
}

void info(const std::string& msg) {
    if (level() >= Level::info) std::cerr << "[info] " << msg << '\n';
}

void debug(const std::string& msg) {
    if (level() >= Level::debug) std::cerr << "[debug] " << msg << '\n';
}

}  // namespace vlmtie::log
