#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace prada {

uint64_t fnv1a(const void* data, size_t size, uint64_t seed = 0xcbf29ce484222325ull);

inline uint64_t fnv1a(const std::string& s, uint64_t seed = 0xcbf29ce484222325ull) {
    return fnv1a(s.data(), s.size(), seed);
}

uint64_t hash_file(const std::filesystem::path& path);

std::string hash_hex(uint64_t h);

/// Flat key/value run manifest, written as JSON. Values are stored as
/// preformatted JSON literals (strings are quoted by `set`).
class Manifest {
  public:
    void set(const std::string& key, const std::string& value);
    void set_raw(const std::string& key, const std::string& json_literal);
    void set(const std::string& key, double value);
    void set(const std::string& key, long value);
    void set(const std::string& key, uint64_t value);

    std::string to_json() const;
    void write(const std::filesystem::path& path) const;

  private:
    std::map<std::string, std::string> entries_;
};

}  // namespace prada
