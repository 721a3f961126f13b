#include "textio.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.h"

namespace memcell {

// snprintf with %g honors the global C locale; the library never changes it
// and the CLI pins LC_NUMERIC to "C", so output is byte-stable.
static std::string fmt(const char *conv, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, conv, v);
    return buf;
}

std::string fmt_g(double v) { return fmt("%.12g", v); }
std::string fmt_full(double v) { return fmt("%.17g", v); }

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f)
        throw ConfigError("write to '" + path + "' failed");
}

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot open '" + path + "'");
    std::ostringstream out;
    out << f.rdbuf();
    return out.str();
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace memcell
