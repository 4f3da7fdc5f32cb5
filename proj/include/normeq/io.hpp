#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "normeq/invariant.hpp"
#include "normeq/matrix.hpp"
#include "normeq/sigma.hpp"

namespace normeq {

using Json = nlohmann::json;

// Operator files: {"rows":R,"cols":C,"data":[[re,im],...]} row-major.
// Throws parse_error (position-annotated), shape_error, non_finite.
Matrix parse_operator_json(const std::string& text);

// Canonical rendering; parse_operator_json(render_operator_json(m)) == m
// bit for bit.
std::string render_operator_json(const Matrix& m);

// Symbolic invariant files:
// {"atoms":[{"re":"...","im":"...","mult":"3"|"aleph0"|"card:1"},...]}.
AtomicSpectralType parse_invariant_json(const std::string& text);
std::string render_invariant_json(const AtomicSpectralType& invariant);

// Structure bundles: a manifest {"dim":N,"T":path,"P":path,"Q":path,
// "U":path[,"embedding":path]} with member paths relative to the manifest.
struct StructureBundle {
  LStructure structure;
  std::optional<Matrix> embedding;
  std::string digest;  // over the canonical renderings of all members
};
StructureBundle load_structure_bundle(const std::filesystem::path& manifest_path);

std::string read_file(const std::filesystem::path& path);

// FNV-1a 64-bit over the given bytes, as 16 hex digits.
std::string digest_hex(const std::string& bytes);

// Byte-stable JSON: keys sorted, floats with 17 significant digits,
// compact separators, a single trailing LF.
std::string emit_json(const Json& doc);

// Human-oriented rendering; not byte-stable across versions and excluded
// from golden comparisons.
std::string emit_text(const Json& doc);

// A float rendered exactly as the stable emitter would print it.
std::string format_double(double value);

}  // namespace normeq
