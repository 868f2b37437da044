#include "manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace uh::cli {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << bytes;
}

nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& in : m.inputs) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}, {"content", in.content}});
    return {{"schema", "univhol/manifest/1"},
            {"tool_version", m.tool_version},
            {"command", m.command},
            {"config", m.config},
            {"seed", m.seed},
            {"inputs", inputs},
            {"artifacts", m.artifacts}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
    if (j.value("schema", "") != "univhol/manifest/1") throw std::invalid_argument("not a run manifest");
    RunManifest m;
    m.command = j.at("command").get<std::vector<std::string>>();
    m.config = j.value("config", nlohmann::json::object());
    m.seed = j.value("seed", std::uint64_t{0});
    m.tool_version = j.value("tool_version", "");
    for (const auto& in : j.value("inputs", nlohmann::json::array())) {
        InputRecord r{in.at("path"), in.at("sha256"), in.at("content")};
        if (sha256_hex(r.content) != r.sha256) throw std::invalid_argument("embedded input " + r.path + " is corrupted");
        m.inputs.push_back(std::move(r));
    }
    m.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
    return m;
}

}  // namespace uh::cli
