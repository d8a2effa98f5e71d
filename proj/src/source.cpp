#include "huuzlee/source.hpp"

#include <fstream>
#include <sstream>

namespace huuzlee {

SourceUnit read_source(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return {buf.str(), path.string()};
}

std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
    return os << d.file << ':' << d.line << ':' << d.column << ": " << d.code << ": " << d.message;
}

} // namespace huuzlee
