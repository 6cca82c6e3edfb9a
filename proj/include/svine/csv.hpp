#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace svine::csv {

struct Table {
  std::vector<std::string> header;  // empty when the file had no header line
  Eigen::MatrixXd values;
};

/// Reads an RFC 4180 numeric table. Decimal point is always '.', record
/// terminators CRLF or LF, quoted fields allowed. A single leading header
/// line is auto-detected: if any field of the first record fails to parse
/// as a number, that record is taken as the header. Every later offending
/// record is collected and reported in one std::invalid_argument that
/// lists the line numbers.
Table read(const std::string& path);

/// Writes an RFC 4180 file (CRLF records). Numbers carry 17 significant
/// digits, so every double survives a read/write round trip exactly.
/// header may be empty; otherwise its size must match the column count.
void write(const std::string& path, const std::vector<std::string>& header,
           const Eigen::MatrixXd& values);

}  // namespace svine::csv
