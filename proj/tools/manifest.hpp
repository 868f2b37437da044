#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace uh::cli {

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& bytes);

struct InputRecord {
    std::string path;  // as given on the command line
    std::string sha256;
    std::string content;
};

// Everything needed to rerun a command: arguments (without --out-dir), parsed options,
// embedded inputs and the hashes of the artifacts it wrote.
struct RunManifest {
    std::vector<std::string> command;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::vector<InputRecord> inputs;
    std::map<std::string, std::string> artifacts;  // name relative to the output directory -> sha256
    std::string tool_version;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

}  // namespace uh::cli
