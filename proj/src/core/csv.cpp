#include "core/csv.hpp"

#include "core/error.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>

namespace bnpmle::csv {

namespace {

std::string trim(const std::string& s)
{
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string t = s.substr(b, e - b);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
    t = t.substr(1, t.size() - 2);
  }
  return t;
}

} // namespace

std::vector<std::string> split_line(const std::string& line)
{
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& field, double& out)
{
  if (field.empty()) return false;
  const char* begin = field.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + field.size();
}

std::vector<std::pair<std::size_t, std::string>> read_lines(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open file: " + path);
  }
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = true;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
    }
    if (!blank) lines.emplace_back(lineno, line);
  }
  return lines;
}

} // namespace bnpmle::csv
