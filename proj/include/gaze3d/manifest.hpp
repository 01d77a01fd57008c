#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gaze3d {

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

// Exclusive ownership of an output directory for the lifetime of a command.
class DirLock {
public:
    explicit DirLock(const std::string& dir);
    ~DirLock();
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    std::string path_;
};

// Every output directory carries a manifest with the command, its
// configuration echo and content hashes of all produced files, enough to
// reproduce the run.
struct Manifest {
    std::string command;
    std::string config_json;  // serialized RunConfig
    std::map<std::string, std::string> inputs;   // path -> content hash
    std::map<std::string, std::string> outputs;  // filename -> content hash

    void add_output(const std::string& name, const std::string& content);
    void add_input_file(const std::string& path);
    std::string to_json() const;
};

// writes content and records its hash in the manifest
void emit_file(Manifest& manifest, const std::string& dir, const std::string& name,
               const std::string& content);

}  // namespace gaze3d
