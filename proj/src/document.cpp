#include "momentflow/document.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "momentflow/report.hpp"

namespace momentflow {

using nlohmann::json;

namespace {

std::string entry_label(size_t idx) { return "entries[" + std::to_string(idx) + "]"; }

int require_int(const json& j, const std::string& where) {
  if (!j.is_number_integer())
    throw InputError(where + ": expected an integer");
  return j.get<int>();
}

Complex parse_scalar(const json& j, bool complex_field, const std::string& where) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array()) {
    if (!complex_field)
      throw InputError(where + ": [re, im] scalar in a document with field \"real\"");
    if (j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      throw InputError(where + ": complex scalar must be [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw InputError(where + ": scalar must be a number or [re, im]");
}

}  // namespace

BracketDocument parse_document(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("document parse error: ") + e.what());
  }
  if (!j.is_object()) throw InputError("document root must be an object");

  BracketDocument doc;
  if (!j.contains("n")) throw InputError("document missing field \"n\"");
  doc.n = require_int(j["n"], "n");
  if (doc.n < 1) throw InputError("n must be a positive integer");

  if (j.contains("field")) {
    const std::string f = j["field"].is_string() ? j["field"].get<std::string>() : "";
    if (f == "real")
      doc.complex_field = false;
    else if (f == "complex")
      doc.complex_field = true;
    else
      throw InputError("field must be \"real\" or \"complex\"");
  }
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw InputError("name must be a string");
    doc.name = j["name"].get<std::string>();
  }
  if (j.contains("metadata")) {
    if (!j["metadata"].is_string()) throw InputError("metadata must be a string");
    doc.metadata = j["metadata"].get<std::string>();
  }

  if (!j.contains("entries")) throw InputError("document missing field \"entries\"");
  if (!j["entries"].is_array()) throw InputError("entries must be an array");

  std::set<std::tuple<int, int, int>> seen;
  size_t idx = 0;
  for (const auto& e : j["entries"]) {
    const std::string where = entry_label(idx++);
    if (!e.is_object()) throw InputError(where + ": expected an object {i, j, k, c}");
    for (const char* key : {"i", "j", "k", "c"})
      if (!e.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
    DocumentEntry entry;
    entry.i = require_int(e["i"], where + ".i");
    entry.j = require_int(e["j"], where + ".j");
    entry.k = require_int(e["k"], where + ".k");
    if (entry.i < 1 || entry.i > doc.n || entry.j < 1 || entry.j > doc.n || entry.k < 1 ||
        entry.k > doc.n)
      throw InputError(where + ": indices must lie in 1.." + std::to_string(doc.n));
    if (!(entry.i < entry.j))
      throw InputError(where + ": requires i < j strictly (skew slots are stored once)");
    if (!seen.insert({entry.i, entry.j, entry.k}).second)
      throw InputError(where + ": duplicate (i, j, k) key");
    entry.c = parse_scalar(e["c"], doc.complex_field, where + ".c");
    doc.entries.push_back(entry);
  }
  return doc;
}

BracketDocument load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open document: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

std::string serialize_document(const BracketDocument& doc) {
  OrderedJson j;
  if (!doc.name.empty()) j["name"] = doc.name;
  j["n"] = doc.n;
  j["field"] = doc.complex_field ? "complex" : "real";
  OrderedJson entries = OrderedJson::array();
  for (const auto& e : doc.entries) {
    OrderedJson je;
    je["i"] = e.i;
    je["j"] = e.j;
    je["k"] = e.k;
    if (doc.complex_field)
      je["c"] = OrderedJson::array({e.c.real(), e.c.imag()});
    else
      je["c"] = e.c.real();
    entries.push_back(je);
  }
  j["entries"] = entries;
  if (!doc.metadata.empty()) j["metadata"] = doc.metadata;
  return dump_json(j) + "\n";
}

Bracket to_bracket(const BracketDocument& doc) {
  if (doc.complex_field)
    throw InputError("document holds a complex bracket; a real bracket was required");
  Bracket mu(doc.n);
  for (const auto& e : doc.entries) mu.set(e.i - 1, e.j - 1, e.k - 1, e.c.real());
  return mu;
}

ComplexBracket to_complex_bracket(const BracketDocument& doc) {
  ComplexBracket mu(doc.n);
  for (const auto& e : doc.entries) mu.set(e.i - 1, e.j - 1, e.k - 1, e.c);
  return mu;
}

BracketDocument document_from_bracket(const Bracket& mu, const std::string& name) {
  BracketDocument doc;
  doc.n = static_cast<int>(mu.dim());
  doc.name = name;
  for (Index i = 0; i < mu.dim(); ++i)
    for (Index j = i + 1; j < mu.dim(); ++j)
      for (Index k = 0; k < mu.dim(); ++k)
        if (mu.c(i, j, k) != 0.0)
          doc.entries.push_back({int(i) + 1, int(j) + 1, int(k) + 1, Complex(mu.c(i, j, k), 0)});
  return doc;
}

std::string document_digest(const BracketDocument& doc) {
  const std::string bytes = serialize_document(doc);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

namespace {

BracketDocument make_doc(const std::string& name, int n,
                         std::initializer_list<DocumentEntry> entries) {
  BracketDocument doc;
  doc.name = name;
  doc.n = n;
  doc.entries = entries;
  return doc;
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> cat;
  for (int n = 2; n <= 4; ++n)
    cat.push_back({"abelian" + std::to_string(n),
                   make_doc("abelian" + std::to_string(n), n, {})});
  cat.push_back({"heisenberg3", make_doc("heisenberg3", 3, {{1, 2, 3, 1.0}})});
  cat.push_back({"heisenberg5", make_doc("heisenberg5", 5, {{1, 2, 5, 1.0}, {3, 4, 5, 1.0}})});
  cat.push_back({"free2step3",
                 make_doc("free2step3", 6, {{1, 2, 4, 1.0}, {1, 3, 5, 1.0}, {2, 3, 6, 1.0}})});
  // basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h
  cat.push_back({"sl2r", make_doc("sl2r", 3, {{1, 2, 2, 2.0}, {1, 3, 3, -2.0}, {2, 3, 1, 1.0}})});
  // [e1,e2] = e3 cyclic; [e3,e1] = e2 stored as [e1,e3] = -e2
  cat.push_back({"so3", make_doc("so3", 3, {{1, 2, 3, 1.0}, {1, 3, 2, -1.0}, {2, 3, 1, 1.0}})});
  return cat;
}

}  // namespace

const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> catalog = build_catalog();
  return catalog;
}

BracketDocument resolve_input(const std::string& selector) {
  constexpr std::string_view prefix = "catalog:";
  if (selector.rfind(prefix, 0) == 0) {
    const std::string name = selector.substr(prefix.size());
    for (const auto& entry : builtin_catalog())
      if (entry.name == name) return entry.doc;
    throw InputError("unknown catalog algebra: " + name);
  }
  return load_document(selector);
}

}  // namespace momentflow
