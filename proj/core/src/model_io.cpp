#include "gepd/model_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gepd/diagram_io.hpp"
#include "gepd/error.hpp"

namespace gepd {
namespace {

constexpr std::array<char, 8> kMagic = {'G', 'E', 'P', 'D', 'M', 'O', 'D', 'L'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw DataError("model file is truncated");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

void check_count(const ModelParams& p) {
  const std::size_t expected = layout_of(p.config).total;
  if (p.values.size() != expected) {
    throw DataError("model has " + std::to_string(p.values.size()) + " parameters; its configuration needs " +
                    std::to_string(expected));
  }
}

ModelConfig parse_config(const std::string& text) {
  ModelConfig cfg;
  std::istringstream s(text);
  std::string field;
  int seen = 0;
  while (s >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw DataError("malformed model config field \"" + field + "\"");
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    std::size_t number = 0;
    auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), number);
    if (ec != std::errc() || ptr != val.data() + val.size()) {
      throw DataError("malformed value in model config field \"" + field + "\"");
    }
    if (key == "input") cfg.input_dim = number;
    else if (key == "hidden") cfg.hidden_dim = number;
    else if (key == "layers") cfg.num_layers = number;
    else if (key == "head") cfg.head_hidden = number;
    else if (key == "min") cfg.min_aggregation = number != 0;
    else if (key == "edge_messages") cfg.edge_messages = number != 0;
    else if (key == "attention") cfg.attention = number != 0;
    else if (key == "symmetric_head") cfg.symmetric_head = number != 0;
    else throw DataError("unknown model config field \"" + key + "\"");
    ++seen;
  }
  if (seen != 8) throw DataError("model config must name all 8 fields");
  return cfg;
}

ModelParams read_text(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&](const char* what) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      return;
    }
    throw DataError(std::string("model file ends before ") + what);
  };
  auto fail = [&](const std::string& msg) { throw DataError("model file line " + std::to_string(line_no) + ": " + msg); };

  next("the header");
  if (line != "gepd-model 1") fail("expected header \"gepd-model 1\"");
  next("the config line");
  if (line.rfind("config ", 0) != 0) fail("expected \"config ...\"");
  ModelParams p;
  try {
    p.config = parse_config(line.substr(7));
  } catch (const DataError& e) {
    fail(e.what());
  }
  next("the count line");
  std::size_t count = 0;
  {
    std::istringstream s(line);
    std::string key, extra;
    if (!(s >> key >> count) || key != "count" || (s >> extra)) fail("expected \"count <n>\"");
  }
  p.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    next("all parameters are listed");
    const char* b = line.data();
    const char* e = b + line.size();
    auto [ptr, ec] = std::from_chars(b, e, p.values[k]);
    if (ec != std::errc() || ptr != e) fail("malformed parameter value \"" + line + "\"");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '#') fail("unexpected trailing content");
  }
  check_count(p);
  return p;
}

ModelParams read_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw DataError("model file has no binary magic");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kVersion) throw DataError("unsupported binary model version " + std::to_string(version));
  ModelParams p;
  p.config.input_dim = get_le<std::uint32_t>(in);
  p.config.hidden_dim = get_le<std::uint32_t>(in);
  p.config.num_layers = get_le<std::uint32_t>(in);
  p.config.head_hidden = get_le<std::uint32_t>(in);
  p.config.min_aggregation = get_le<std::uint8_t>(in) != 0;
  p.config.edge_messages = get_le<std::uint8_t>(in) != 0;
  p.config.attention = get_le<std::uint8_t>(in) != 0;
  p.config.symmetric_head = get_le<std::uint8_t>(in) != 0;
  const auto comment_len = get_le<std::uint64_t>(in);
  if (comment_len > (1u << 24)) throw DataError("binary model comment block is implausibly large");
  in.ignore(static_cast<std::streamsize>(comment_len));
  const auto count = get_le<std::uint64_t>(in);
  if (count != layout_of(p.config).total) {
    throw DataError("binary model parameter count does not match its configuration");
  }
  p.values.resize(count);
  for (auto& v : p.values) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
  if (in.peek() != std::char_traits<char>::eof()) throw DataError("binary model has trailing bytes");
  return p;
}

}  // namespace

void write_model_text(std::ostream& out, const ModelParams& p, const std::vector<std::string>& comments) {
  check_count(p);
  out << "gepd-model 1\n";
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "config " << p.config.to_string() << '\n';
  out << "count " << p.values.size() << '\n';
  for (double v : p.values) out << format_real(v) << '\n';
}

void write_model_binary(std::ostream& out, const ModelParams& p, const std::vector<std::string>& comments) {
  check_count(p);
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.config.input_dim));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.config.hidden_dim));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.config.num_layers));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.config.head_hidden));
  put_le<std::uint8_t>(out, p.config.min_aggregation);
  put_le<std::uint8_t>(out, p.config.edge_messages);
  put_le<std::uint8_t>(out, p.config.attention);
  put_le<std::uint8_t>(out, p.config.symmetric_head);
  std::string joined;
  for (std::size_t i = 0; i < comments.size(); ++i) {
    if (i) joined += '\n';
    joined += comments[i];
  }
  put_le<std::uint64_t>(out, joined.size());
  out.write(joined.data(), static_cast<std::streamsize>(joined.size()));
  put_le<std::uint64_t>(out, p.values.size());
  for (double v : p.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

ModelParams read_model(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::istringstream data(buffer.str(), std::ios::binary);
  const std::string& bytes = buffer.str();
  if (bytes.size() >= kMagic.size() && std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) == 0) {
    return read_binary(data);
  }
  return read_text(data);
}

void write_model(const std::filesystem::path& path, const ModelParams& p, const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file " + path.string());
  if (path.extension() == ".bin") write_model_binary(out, p, comments);
  else write_model_text(out, p, comments);
  if (!out) throw DataError("failed writing model file " + path.string());
}

ModelParams read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace gepd
