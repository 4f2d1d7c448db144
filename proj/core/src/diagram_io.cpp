#include "gepd/diagram_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gepd/error.hpp"

namespace gepd {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string format_ref(std::uint32_t id) { return id == kNoSimplex ? "-" : std::to_string(id); }

void write_section(std::ostream& out, const char* name, std::vector<PersistencePair> pairs) {
  std::sort(pairs.begin(), pairs.end(), diagram_order);
  out << name << ' ' << pairs.size() << '\n';
  for (const auto& p : pairs) {
    out << format_real(p.birth) << ' ' << format_real(p.death) << ' ' << format_ref(p.creator) << ' '
        << format_ref(p.destroyer) << '\n';
  }
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-comment, non-blank line; false at end of input.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("diagram line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

double parse_real(const std::string& text, const LineReader& reader) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    reader.fail("bad number \"" + text + "\"");
  }
  if (used != text.size() || !std::isfinite(v)) reader.fail("bad number \"" + text + "\"");
  return v;
}

std::uint32_t parse_ref(const std::string& text, const LineReader& reader) {
  if (text == "-") return kNoSimplex;
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &used);
  } catch (const std::exception&) {
    reader.fail("bad simplex id \"" + text + "\"");
  }
  if (used != text.size() || v >= kNoSimplex) reader.fail("bad simplex id \"" + text + "\"");
  return static_cast<std::uint32_t>(v);
}

std::vector<PersistencePair> read_section(LineReader& reader, const std::string& name, int dim) {
  std::string line;
  if (!reader.next(line)) reader.fail("missing \"" + name + "\" section");
  std::istringstream head(line);
  std::string tag;
  std::size_t count = 0;
  std::string rest;
  if (!(head >> tag >> count) || tag != name || (head >> rest)) reader.fail("expected \"" + name + " <count>\"");
  std::vector<PersistencePair> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!reader.next(line)) reader.fail("section " + name + " ends early");
    std::istringstream fields(line);
    std::string b, d, c, k;
    if (!(fields >> b >> d >> c >> k) || (fields >> rest)) reader.fail("expected \"birth death creator destroyer\"");
    pairs.push_back({parse_real(b, reader), parse_real(d, reader), dim, parse_ref(c, reader), parse_ref(k, reader)});
  }
  return pairs;
}

}  // namespace

void write_diagram(std::ostream& out, const PersistenceDiagram& d, const std::vector<std::string>& comments) {
  out << "# gepd diagram v1\n";
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "zero_persistence " << (d.include_zero_persistence ? "included" : "dropped") << '\n';
  write_section(out, "dim0", d.dim0);
  write_section(out, "dim1", d.dim1);
}

void write_diagram(const std::filesystem::path& path, const PersistenceDiagram& d,
                   const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write diagram file " + path.string());
  write_diagram(out, d, comments);
}

PersistenceDiagram read_diagram(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) reader.fail("empty diagram file");
  std::istringstream head(line);
  std::string tag, mode;
  if (!(head >> tag >> mode) || tag != "zero_persistence" || (mode != "included" && mode != "dropped")) {
    reader.fail("expected \"zero_persistence included|dropped\"");
  }
  PersistenceDiagram d;
  d.include_zero_persistence = mode == "included";
  d.dim0 = read_section(reader, "dim0", 0);
  d.dim1 = read_section(reader, "dim1", 1);
  if (reader.next(line)) reader.fail("unexpected trailing content");
  return d;
}

PersistenceDiagram read_diagram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open diagram file " + path.string());
  try {
    return read_diagram(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_edge_pairings(std::ostream& out, const Graph& g, const EdgePairingMap& map,
                         const std::vector<std::string>& comments) {
  out << "# gepd edge pairings v1\n";
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "edges " << map.entries.size() << '\n';
  for (EdgeId e = 0; e < map.entries.size(); ++e) {
    const auto& entry = map.entries[e];
    const Edge& ed = g.edge(e);
    const bool positive = entry.role == EdgeRole::positive_ascending;
    out << e << ' ' << ed.u << ' ' << ed.v << ' ' << (positive ? "positive" : "negative") << ' '
        << format_real(entry.pair.birth) << ' ' << format_real(entry.pair.death) << ' '
        << format_ref(positive ? entry.pair.destroyer : entry.pair.creator) << '\n';
  }
}

void write_edge_pairings(const std::filesystem::path& path, const Graph& g, const EdgePairingMap& map,
                         const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write pairing file " + path.string());
  write_edge_pairings(out, g, map, comments);
}

}  // namespace gepd
