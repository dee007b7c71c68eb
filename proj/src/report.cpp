#include "lirkw/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lirkw/common.hpp"

namespace lirkw {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Manifest::set(const std::string& key, const std::string& value) {
    for (auto& kv : entries_)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    entries_.emplace_back(key, value);
}

const std::string* Manifest::find(const std::string& key) const {
    for (const auto& kv : entries_)
        if (kv.first == key) return &kv.second;
    return nullptr;
}

void Manifest::write(std::ostream& os) const {
    for (const auto& kv : entries_) os << kv.first << "=" << kv.second << "\n";
}

Manifest Manifest::parse(std::istream& is) {
    Manifest m;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("manifest: missing '=' on line " + std::to_string(lineno));
        m.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    if (m.entries_.empty()) throw ParseError("manifest: empty file");
    return m;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << text;
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace lirkw
