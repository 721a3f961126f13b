#pragma once

#include <string>
#include <vector>

namespace memcell {

// Locale-independent numeric formatting ('.' decimal separator always).
std::string fmt_g(double v);        // shortest reasonable, %.12g
std::string fmt_full(double v);     // round-trip exact, %.17g

// Whole-file helpers. write_file throws ConfigError on I/O failure.
void write_file(const std::string &path, const std::string &content);
std::string read_file(const std::string &path);

std::vector<std::string> split(const std::string &s, char sep);
std::string trim(const std::string &s);

} // namespace memcell
