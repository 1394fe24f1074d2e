#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "momentflow/bracket.hpp"

namespace momentflow {

/// One structure constant mu(e_i, e_j) = c e_k with 1-based indices, i < j.
struct DocumentEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  Complex c;

  friend bool operator==(const DocumentEntry&, const DocumentEntry&) = default;
};

/// On-disk form of a bracket: UTF-8 JSON, one bracket per file.
struct BracketDocument {
  int n = 0;
  bool complex_field = false;  // "field": "real" | "complex"
  std::vector<DocumentEntry> entries;
  std::string name;      // optional
  std::string metadata;  // optional

  friend bool operator==(const BracketDocument&, const BracketDocument&) = default;
};

/// Parses and validates a document; throws InputError with the offending
/// field/entry named.
BracketDocument parse_document(const std::string& json_text);
BracketDocument load_document(const std::filesystem::path& path);

/// Serialization with 17-significant-digit scalars; parse(serialize(d)) == d.
std::string serialize_document(const BracketDocument& doc);

Bracket to_bracket(const BracketDocument& doc);                 // real documents
ComplexBracket to_complex_bracket(const BracketDocument& doc);  // either field

BracketDocument document_from_bracket(const Bracket& mu, const std::string& name);

/// FNV-1a digest of the canonical serialization, as fixed-width hex.
std::string document_digest(const BracketDocument& doc);

struct CatalogEntry {
  std::string name;
  BracketDocument doc;
};

/// Built-in algebra catalog: abelian n<=4, Heisenberg h3/h5, free 2-step on 3
/// generators, sl2(R), so(3).
const std::vector<CatalogEntry>& builtin_catalog();

/// Looks up "catalog:<name>"; plain paths load from disk.
BracketDocument resolve_input(const std::string& selector);

}  // namespace momentflow
