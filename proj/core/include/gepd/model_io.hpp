#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gepd/pdgnn.hpp"

namespace gepd {

/// Text model file:
///
///   gepd-model 1
///   # <comment lines>
///   config <ModelConfig::to_string()>
///   count <number of parameters>
///   <one value per line, 17 significant digits, layout_of order>
///
/// Binary model file (all integers and doubles little-endian):
///
///   "GEPDMODL"  u32 version = 1
///   u32 input_dim, hidden_dim, num_layers, head_hidden
///   u8 min_aggregation, edge_messages, attention, symmetric_head
///   u64 comment byte length, comment bytes (lines joined by '\n')
///   u64 count, count x f64
///
/// Both round-trip bit-exactly.
void write_model_text(std::ostream& out, const ModelParams& p, const std::vector<std::string>& comments = {});
void write_model_binary(std::ostream& out, const ModelParams& p, const std::vector<std::string>& comments = {});

/// Detects the format from the first bytes. Throws DataError on malformed
/// input or a parameter count that does not match the configuration.
ModelParams read_model(std::istream& in);

/// A ".bin" extension selects the binary format.
void write_model(const std::filesystem::path& path, const ModelParams& p, const std::vector<std::string>& comments = {});
ModelParams read_model(const std::filesystem::path& path);

}  // namespace gepd
