#include "vlmtie/manifest.hpp"

#include <cstdio>

#include "vlmtie/util.hpp"
#include "vlmtie/version.hpp"

namespace vlmtie {

namespace {

std::string checksum_hex(const std::filesystem::path& path) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(path)));
    return buf;
}

}  // namespace

Manifest::Manifest(std::string subcommand, nlohmann::json config)
    : subcommand_(std::move(subcommand)), config_(std::move(config)) {}

void Manifest::add_input(const std::filesystem::path& path) {
    inputs_.push_back({path.string(), checksum_hex(path)});
}

void Manifest::add_output(const std::filesystem::path& path) {
    outputs_.push_back({path.string(), checksum_hex(path)});
}

nlohmann::json Manifest::to_json() const {
    auto entries = [](const std::vector<Entry>& list) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Entry& e : list)
            arr.push_back({{"path", e.path}, {"fnv1a64", e.checksum}});
        return arr;
    };
    return nlohmann::json{{"tool", kToolName},
                          {"version", kVersion},
                          {"subcommand", subcommand_},
                          {"config", config_},
                          {"inputs", entries(inputs_)},
                          {"outputs", entries(outputs_)}};
}

void Manifest::save(const std::filesystem::path& dir) const {
    write_file_atomic(dir / "manifest.json", to_json().dump(2) + "\n");
}

}  // namespace vlmtie
