#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace goalspot::cli {

std::string sha256_hex(const std::string& bytes);

/// Output files held in memory until the command has succeeded, so a
/// failing run leaves nothing behind.
class OutputSet {
public:
    std::string& add(const std::string& name);
    const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

struct RunManifest {
    std::string command;
    std::string version;
    unsigned long long seed = 0;
    std::string config;  // effective configuration, one key=value per line
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::vector<std::pair<std::string, double>> timings;

    std::string render(const OutputSet& outputs) const;
};

/// Writes every output plus manifest.txt into `dir`, creating it if needed.
void commit(const std::string& dir, const OutputSet& outputs, const RunManifest& manifest);

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace goalspot::cli
