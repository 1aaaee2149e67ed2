#include "pachner4/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pachner4/error.hpp"

namespace pachner4 {

using nlohmann::json;

Complex4 ComplexDocument::complex() const {
  return Complex4::build(simplices, /*allow_boundary=*/true);
}

Realization ComplexDocument::realization() const {
  if (!coords) throw SchemaError("document has no coords");
  Realization r;
  r.coords = *coords;
  return r;
}

RealizeOptions ComplexDocument::realize_options() const {
  RealizeOptions o;
  o.squared_length_overrides = squared_length_overrides;
  return o;
}

namespace {

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void schema(const std::string& field, const std::string& msg) {
  throw SchemaError(field + ": " + msg);
}

int as_vertex(const json& v, const std::string& field) {
  if (!v.is_number_integer()) schema(field, "expected an integer vertex id");
  return v.get<int>();
}

double as_real(const json& v, const std::string& field) {
  if (!v.is_number()) schema(field, "expected a number");
  return v.get<double>();
}

int parse_key_vertex(const std::string& key, const std::string& field) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != key.size()) schema(field, "key \"" + key + "\" is not a vertex id");
  return v;
}

Edge parse_key_edge(const std::string& key, const std::string& field) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) schema(field, "key \"" + key + "\" is not of the form \"a,b\"");
  const int a = parse_key_vertex(key.substr(0, comma), field);
  const int b = parse_key_vertex(key.substr(comma + 1), field);
  if (a == b) schema(field, "key \"" + key + "\" repeats a vertex");
  return sorted_key(Edge{a, b});
}

}  // namespace

ComplexDocument parse_complex(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw SchemaError("syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) schema("<root>", "expected an object");

  static const std::set<std::string> known{"format_version", "simplices", "coords", "metadata",
                                           "squared_length_overrides"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) schema(key, "unknown field");

  ComplexDocument doc;
  if (!j.contains("format_version") || !j["format_version"].is_string())
    schema("format_version", "required string");
  doc.format_version = j["format_version"].get<std::string>();
  if (doc.format_version.rfind("1.", 0) != 0)
    schema("format_version", "unsupported version \"" + doc.format_version + "\"");

  if (!j.contains("simplices") || !j["simplices"].is_array())
    schema("simplices", "required array");
  const auto& simplices = j["simplices"];
  for (std::size_t k = 0; k < simplices.size(); ++k) {
    const std::string field = "simplices[" + std::to_string(k) + "]";
    const auto& s = simplices[k];
    if (!s.is_array() || s.size() != 5)
      schema(field, "expected an array of 5 vertex ids");
    Simplex t;
    for (int p = 0; p < 5; ++p)
      t[p] = as_vertex(s[p], field + "[" + std::to_string(p) + "]");
    doc.simplices.push_back(t);
  }

  if (j.contains("coords")) {
    const auto& c = j["coords"];
    if (!c.is_object()) schema("coords", "expected an object keyed by vertex id");
    std::map<VertexId, Point4> coords;
    for (const auto& [key, value] : c.items()) {
      const std::string field = "coords[\"" + key + "\"]";
      const int v = parse_key_vertex(key, "coords");
      if (!value.is_array() || value.size() != 4) schema(field, "expected 4 numbers");
      Point4 p;
      for (int i = 0; i < 4; ++i) p[i] = as_real(value[i], field);
      coords[v] = p;
    }
    doc.coords = std::move(coords);
  }

  if (j.contains("metadata")) {
    const auto& md = j["metadata"];
    if (!md.is_object()) schema("metadata", "expected an object of strings");
    for (const auto& [key, value] : md.items()) {
      if (!value.is_string()) schema("metadata[\"" + key + "\"]", "expected a string");
      doc.metadata[key] = value.get<std::string>();
    }
  }

  if (j.contains("squared_length_overrides")) {
    const auto& ov = j["squared_length_overrides"];
    if (!ov.is_object()) schema("squared_length_overrides", "expected an object");
    for (const auto& [key, value] : ov.items()) {
      const Edge e = parse_key_edge(key, "squared_length_overrides");
      const double x = as_real(value, "squared_length_overrides[\"" + key + "\"]");
      if (!(x > 0.0)) schema("squared_length_overrides[\"" + key + "\"]", "must be positive");
      doc.squared_length_overrides[e] = x;
    }
  }

  // Complex-level validation.
  const Complex4 c = doc.complex();
  if (doc.coords) {
    for (VertexId v : c.vertices())
      if (!doc.coords->count(v)) schema("coords", "missing vertex " + std::to_string(v));
    for (const auto& [v, _] : *doc.coords)
      if (!c.vertex_index(v)) schema("coords", "vertex " + std::to_string(v) + " is not in the complex");
  }
  for (const auto& [e, _] : doc.squared_length_overrides)
    if (!c.edge_index(e))
      schema("squared_length_overrides", "edge {" + to_string(e) + "} is not in the complex");
  return doc;
}

ComplexDocument load_complex(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_complex(ss.str());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::string serialize(const ComplexDocument& doc) {
  std::ostringstream out;
  out << "{\n  \"format_version\": " << json(doc.format_version).dump() << ",\n";
  out << "  \"simplices\": [";
  for (std::size_t k = 0; k < doc.simplices.size(); ++k)
    out << (k ? ",\n    " : "\n    ") << json(doc.simplices[k]).dump();
  out << (doc.simplices.empty() ? "]" : "\n  ]");

  if (doc.coords) {
    out << ",\n  \"coords\": {";
    bool first = true;
    for (const auto& [v, p] : *doc.coords) {
      out << (first ? "\n    " : ",\n    ") << json(std::to_string(v)).dump() << ": "
          << json(std::vector<double>{p[0], p[1], p[2], p[3]}).dump();
      first = false;
    }
    out << (first ? "}" : "\n  }");
  }
  if (!doc.metadata.empty()) out << ",\n  \"metadata\": " << json(doc.metadata).dump();
  if (!doc.squared_length_overrides.empty()) {
    json ov = json::object();
    for (const auto& [e, x] : doc.squared_length_overrides)
      ov[std::to_string(e[0]) + "," + std::to_string(e[1])] = x;
    out << ",\n  \"squared_length_overrides\": " << ov.dump();
  }
  out << "\n}\n";
  return out.str();
}

void save_complex(const std::filesystem::path& path, const ComplexDocument& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize(doc);
}

}  // namespace pachner4
