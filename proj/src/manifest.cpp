#include "gaze3d/manifest.hpp"

#include <cstdio>
#include <filesystem>

#include "gaze3d/csv.hpp"
#include "gaze3d/errors.hpp"
#include "json.hpp"

namespace gaze3d {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

DirLock::DirLock(const std::string& dir) : path_(dir + "/.lock") {
    fs::create_directories(dir);
    if (fs::exists(path_)) {
        throw ConfigInvalid("output directory is locked by another run: " + dir);
    }
    write_text_file(path_, "locked\n");
}

DirLock::~DirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

void Manifest::add_output(const std::string& name, const std::string& content) {
    outputs[name] = hex64(fnv1a64(content));
}

void Manifest::add_input_file(const std::string& path) {
    // keyed by basename: manifests must not depend on where a run happened
    inputs[fs::path(path).filename().string()] = hex64(fnv1a64(read_text_file(path)));
}

std::string Manifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    const std::string cfg = config_json.empty() ? "{}" : config_json;
    j["config"] = nlohmann::json::parse(cfg);
    j["config_hash"] = hex64(fnv1a64(cfg));
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

void emit_file(Manifest& manifest, const std::string& dir, const std::string& name,
               const std::string& content) {
    write_text_file(dir + "/" + name, content);
    manifest.add_output(name, content);
}

}  // namespace gaze3d
