#pragma once

#include <string>
#include <vector>

namespace gaze3d {

// Shortest decimal string that round-trips the double bit pattern.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
    std::string to_string() const;
};

// Strict reader for the project's own files: comma separated, no quoting.
CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace gaze3d
