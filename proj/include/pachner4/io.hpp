#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pachner4/complex.hpp"
#include "pachner4/flatmetric.hpp"

namespace pachner4 {

inline constexpr const char* kFormatVersion = "1.0";

/// On-disk form of a complex:
///
///   {
///     "format_version": "1.0",
///     "simplices": [[0, 1, 2, 3, 4], ...],        // array order = orientation
///     "coords": {"0": [x, y, z, w], ...},          // optional
///     "metadata": {"key": "value", ...},           // optional
///     "squared_length_overrides": {"0,1": 1.5}     // optional
///   }
struct ComplexDocument {
  std::string format_version = kFormatVersion;
  std::vector<Simplex> simplices;
  std::optional<std::map<VertexId, Point4>> coords;
  std::map<std::string, std::string> metadata;
  std::map<Edge, double> squared_length_overrides;

  /// Builds the complex; boundary is allowed so that open clusters load.
  Complex4 complex() const;

  /// Throws SchemaError when the document carries no coordinates.
  Realization realization() const;

  RealizeOptions realize_options() const;

  friend bool operator==(const ComplexDocument&, const ComplexDocument&) = default;
};

/// Validates syntax, schema and the complex itself. Syntax errors name the
/// line and column; schema errors name the offending field.
ComplexDocument parse_complex(std::string_view text);

ComplexDocument load_complex(const std::filesystem::path& path);

/// Stable text form: one simplex or point per line, numbers in shortest
/// round-trip notation.
std::string serialize(const ComplexDocument& doc);

void save_complex(const std::filesystem::path& path, const ComplexDocument& doc);

}  // namespace pachner4
