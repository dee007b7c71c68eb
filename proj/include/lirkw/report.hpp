#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lirkw {

/// 17 significant digits, C locale: doubles round-trip bit-exactly.
std::string format_double(double v);

/// Ordered key=value run description written alongside every CSV output.
/// Reruns from a manifest reproduce outputs byte-identically.
class Manifest {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value) { set(key, format_double(value)); }
    void set(const std::string& key, long value) { set(key, std::to_string(value)); }
    const std::string* find(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    void write(std::ostream& os) const;
    static Manifest parse(std::istream& is);  // throws ParseError

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Writes `text` to `path` (creating parent directories is the caller's
/// concern); throws std::runtime_error on failure.
void write_file(const std::string& path, const std::string& text);

std::string read_file(const std::string& path);  // throws on failure

}  // namespace lirkw
