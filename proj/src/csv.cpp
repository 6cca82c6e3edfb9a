#include "svine/csv.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace svine::csv {
namespace {

// Splits one record into fields, honoring RFC 4180 quoting ("" escapes a
// quote inside a quoted field). Embedded record terminators are not
// supported; a numeric table never needs them.
std::vector<std::string> split_record(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted)
    throw std::invalid_argument("csv: line " + std::to_string(line_no) +
                                ": unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

bool parse_number(const std::string& field, double& out) {
  const char* b = field.data();
  const char* e = b + field.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t')) --e;
  if (b == e) return false;
  const auto res = std::from_chars(b, e, out);
  return res.ec == std::errc() && res.ptr == e;
}

}  // namespace

Table read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("csv: cannot open " + path);
  std::vector<std::vector<std::string>> records;
  std::vector<int> line_numbers;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    records.push_back(split_record(line, line_no));
    line_numbers.push_back(line_no);
  }
  if (records.empty())
    throw std::invalid_argument("csv: " + path + " holds no records");

  const std::size_t cols = records.front().size();
  Table table;
  std::size_t first_data = 0;
  {
    double v;
    for (const std::string& f : records.front()) {
      if (!parse_number(f, v)) {
        table.header = records.front();
        first_data = 1;
        break;
      }
    }
  }
  if (first_data == records.size())
    throw std::invalid_argument("csv: " + path +
                                " holds a header but no data records");

  table.values.resize(Eigen::Index(records.size() - first_data),
                      Eigen::Index(cols));
  std::string bad;
  for (std::size_t r = first_data; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != cols)
      throw std::invalid_argument(
          "csv: " + path + ": line " + std::to_string(line_numbers[r]) +
          " has " + std::to_string(rec.size()) + " fields, expected " +
          std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) {
      double v;
      if (parse_number(rec[c], v)) {
        table.values(Eigen::Index(r - first_data), Eigen::Index(c)) = v;
      } else {
        if (!bad.empty()) bad += ", ";
        bad += "line " + std::to_string(line_numbers[r]) + " ('" + rec[c] +
               "')";
        break;
      }
    }
  }
  if (!bad.empty())
    throw std::invalid_argument("csv: " + path + ": non-numeric data at " +
                                bad);
  return table;
}

namespace {

void write_field(std::ostream& out, const std::string& f) {
  if (f.find_first_of(",\"\r\n") == std::string::npos) {
    out << f;
    return;
  }
  out << '"';
  for (char c : f) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write(const std::string& path, const std::vector<std::string>& header,
           const Eigen::MatrixXd& values) {
  if (!header.empty() &&
      Eigen::Index(header.size()) != values.cols())
    throw std::invalid_argument("csv: header size does not match columns");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("csv: cannot write " + path);
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c) out << ',';
      write_field(out, header[c]);
    }
    out << "\r\n";
  }
  std::ostringstream num;
  num << std::setprecision(17);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) out << ',';
      num.str("");
      num << values(r, c);
      out << num.str();
    }
    out << "\r\n";
  }
  if (!out) throw std::invalid_argument("csv: write to " + path + " failed");
}

}  // namespace svine::csv
