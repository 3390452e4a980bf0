#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slash/common.hpp"

namespace slash {

inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    return fnv1a64(s.data(), s.size(), h);
}

/// Provenance record written alongside every command's outputs. Equal digests
/// imply bit-identical outputs.
struct RunManifest {
    std::string command;
    std::vector<std::string> input_paths;
    std::vector<std::string> output_paths;
    std::optional<std::uint64_t> seed;
    std::string config_digest;
    std::string tool_version = kToolVersion;
};

/// Digest over every input file's bytes plus the flag configuration string.
inline std::string digest_inputs(const std::vector<std::string>& input_paths, const std::string& config) {
    std::uint64_t h = fnv1a64(config);
    for (const std::string& path : input_paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("cannot read input for digest: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string bytes = buf.str();
        h = fnv1a64(path, h);
        h = fnv1a64(bytes, h);
    }
    char hex[19];
    std::snprintf(hex, sizeof(hex), "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return hex;
}

inline nlohmann::json manifest_to_json(const RunManifest& m) {
    nlohmann::json j = {{"command", m.command},
                        {"input_paths", m.input_paths},
                        {"output_paths", m.output_paths},
                        {"config_digest", m.config_digest},
                        {"tool_version", m.tool_version}};
    if (m.seed) {
        j["seed"] = *m.seed;
    } else {
        j["seed"] = nullptr;
    }
    return j;
}

inline void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw Error("cannot write manifest under " + dir.string());
    out << manifest_to_json(m).dump(2) << "\n";
}

} // namespace slash
