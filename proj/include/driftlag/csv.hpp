#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace driftlag::csv {

using Row = std::vector<std::string>;

/// RFC 4180 style reader: quoted fields, doubled quotes, CRLF or LF.
/// Lines starting with '#' are treated as comments when `skip_comments` is set;
/// artifact-owned files use them to echo the run configuration.
std::vector<Row> parse(std::string_view text, bool skip_comments = true);

/// Quotes a field only when it needs quoting.
std::string escape(std::string_view field);

std::string_view trim(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace driftlag::csv
