#include "prada/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace prada {

uint64_t fnv1a(const void* data, size_t size, uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for hashing: " + path.string());
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        h = fnv1a(buf, static_cast<size_t>(in.gcount()), h);
    }
    return h;
}

std::string hash_hex(uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void Manifest::set(const std::string& key, const std::string& value) {
    entries_[key] = "\"" + json_escape(value) + "\"";
}

void Manifest::set_raw(const std::string& key, const std::string& json_literal) {
    entries_[key] = json_literal;
}

void Manifest::set(const std::string& key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    entries_[key] = buf;
}

void Manifest::set(const std::string& key, long value) { entries_[key] = std::to_string(value); }

void Manifest::set(const std::string& key, uint64_t value) { entries_[key] = std::to_string(value); }

std::string Manifest::to_json() const {
    std::ostringstream out;
    out << "{\n";
    bool first = true;
    for (const auto& [k, v] : entries_) {
        if (!first) out << ",\n";
        first = false;
        out << "  \"" << json_escape(k) << "\": " << v;
    }
    out << "\n}\n";
    return out.str();
}

void Manifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
    out << to_json();
}

}  // namespace prada
