#pragma once

#include <string>
#include <vector>

namespace bnpmle::csv {

//! Split one CSV line on commas; fields are trimmed of surrounding whitespace
//! and optional double quotes. No escaping — the formats handled here are
//! plain numeric tables.
std::vector<std::string> split_line(const std::string& line);

//! Strict double parse; returns false unless the whole field is consumed.
bool parse_double(const std::string& field, double& out);

//! Read all lines of a text file, dropping blank lines and a trailing newline.
//! Throws Error{io} when the file cannot be opened. Each returned pair is
//! (1-based line number, line content) so parse errors can name their row.
std::vector<std::pair<std::size_t, std::string>> read_lines(const std::string& path);

} // namespace bnpmle::csv
