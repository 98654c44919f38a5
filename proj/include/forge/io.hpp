#pragma once

// JSON model files ("forge-model/1"): serialization and parsing of model
// bundles over the Gaussian rationals.  Rationals are encoded as "p/q"
// strings in lowest terms ("p" when the denominator is one) and scalars as
// two-element arrays ["re","im"]; all tables are sparse lists of
// [index..., value] entries in ascending index order, so identical bundles
// serialize to identical bytes.
//
// Loading is purely structural: indices and shapes are checked (throwing
// std::runtime_error with a "model file:" message on malformed input) but no
// algebraic identity is verified, so deliberately broken fixtures load fine;
// run bundle_check on the result before computing.  Procedural
// polynomial-coefficient models have no table form and cannot be serialized.

#include "forge/models.hpp"

#include <string>

namespace forge {

// FNV-1a 64-bit digest of a byte string, as 16 lowercase hex digits.
std::string fnv1a64_hex(const std::string& bytes);

std::string bundle_to_json(const ModelBundle& b);
ModelBundle bundle_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

void save_bundle(const ModelBundle& b, const std::string& path);
ModelBundle load_bundle(const std::string& path);

}  // namespace forge
