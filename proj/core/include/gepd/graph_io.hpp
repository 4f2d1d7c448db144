#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gepd/graph.hpp"

namespace gepd {

/// Edge-list text format: first non-comment line "V E", then E lines "u v".
/// Lines starting with '#' (after optional blanks) and blank lines are
/// ignored. Errors are reported as DataError with the 1-based line number.
Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::filesystem::path& path);

/// Writes LF-terminated text; each entry of `comments` becomes a "# ..." line
/// before the header.
void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& comments = {});
void write_edge_list(const std::filesystem::path& path, const Graph& g,
                     const std::vector<std::string>& comments = {});

}  // namespace gepd
