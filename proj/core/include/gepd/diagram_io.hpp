#pragma once

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "gepd/persistence.hpp"

namespace gepd {

/// Marks a pair whose creator or destroyer is not a simplex (predicted
/// points have no destroyer). Written as "-".
inline constexpr std::uint32_t kNoSimplex = std::numeric_limits<std::uint32_t>::max();

/// Diagram file:
///
///   # gepd diagram v1
///   # <comment lines, e.g. the run configuration>
///   zero_persistence included|dropped
///   dim0 <count>
///   <birth> <death> <creator> <destroyer>     (count lines)
///   dim1 <count>
///   <birth> <death> <creator> <destroyer>
///
/// Values are printed with 17 significant digits so they read back
/// exactly. Pairs are written in diagram_order.
void write_diagram(std::ostream& out, const PersistenceDiagram& d, const std::vector<std::string>& comments = {});
void write_diagram(const std::filesystem::path& path, const PersistenceDiagram& d,
                   const std::vector<std::string>& comments = {});
PersistenceDiagram read_diagram(std::istream& in);
PersistenceDiagram read_diagram(const std::filesystem::path& path);

/// Edge-pairing sidecar: one line per edge,
///   <edge id> <u> <v> negative|positive <birth> <death> <partner>
/// where partner is the paired vertex (negative) or edge (positive).
void write_edge_pairings(std::ostream& out, const Graph& g, const EdgePairingMap& map,
                         const std::vector<std::string>& comments = {});
void write_edge_pairings(const std::filesystem::path& path, const Graph& g, const EdgePairingMap& map,
                         const std::vector<std::string>& comments = {});

/// "%.17g" formatting used by every text artifact.
std::string format_real(double value);

}  // namespace gepd
