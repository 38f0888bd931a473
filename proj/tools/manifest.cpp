#include "manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace goalspot::cli {

std::string sha256_hex(const std::string& bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256 failed");
    std::string hex;
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

std::string& OutputSet::add(const std::string& name)
{
    for (auto& [n, body] : files_)
        if (n == name)
            return body;
    return files_.emplace_back(name, std::string{}).second;
}

std::string RunManifest::render(const OutputSet& outputs) const
{
    std::ostringstream out;
    out << "command=" << command << '\n';
    out << "version=" << version << '\n';
    out << "seed=" << seed << '\n';
    std::istringstream cfg(config);
    for (std::string line; std::getline(cfg, line);)
        if (!line.empty() && line.front() != '#' && line.front() != '[')
            out << "config." << line << '\n';
    for (const auto& [path, digest] : inputs)
        out << "input." << path << "=sha256:" << digest << '\n';
    for (const auto& [name, body] : outputs.files())
        out << "output." << name << "=sha256:" << sha256_hex(body) << '\n';
    for (const auto& [stage, secs] : timings)
        out << "timing." << stage << "_seconds=" << secs << '\n';
    return out.str();
}

void commit(const std::string& dir, const OutputSet& outputs, const RunManifest& manifest)
{
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root);
    const auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream f(root / name, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot write " + (root / name).string());
        f << body;
    };
    for (const auto& [name, body] : outputs.files())
        write(name, body);
    write("manifest.txt", manifest.render(outputs));
}

}  // namespace goalspot::cli
