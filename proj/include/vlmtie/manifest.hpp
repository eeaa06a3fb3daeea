#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace vlmtie {

/// Machine-readable record of one CLI run: subcommand, configuration, and
/// FNV-1a checksums of every input and output, so a run can be replayed and
/// diffed exactly. Deliberately carries no timestamps: a repeated run with
/// the same inputs must be byte-identical.
class Manifest {
public:
    Manifest(std::string subcommand, nlohmann::json config);

    void add_input(const std::filesystem::path& path);
    void add_output(const std::filesystem::path& path);

    nlohmann::json to_json() const;

    /// Writes <dir>/manifest.json atomically.
    void save(const std::filesystem::path& dir) const;

private:
    struct Entry {
        std::string path;
        std::string checksum;
    };

    std::string subcommand_;
    nlohmann::json config_;
    std::vector<Entry> inputs_;
    std::vector<Entry> outputs_;
};

}  // namespace vlmtie
