#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rigicert/certify.hpp"
#include "rigicert/framework.hpp"
#include "rigicert/rigidity.hpp"

// Framework file format and report serialization. A framework file is
// one JSON document:
//
//   {
//     "name": "collinear_brace",          // optional
//     "dimension": 2,
//     "vertices": [[0.0, 0.0], [2.0, 0.0], ...],
//     "edges": [[1, 2], [1, 3], ...],     // 1-based vertex pairs
//     "pins": [[1, 1], [1, 2], [2, 2]]    // optional (vertex, coordinate), 1-based
//   }
//
// Vertex and coordinate indices are 1-based on disk and in reports;
// conversion to 0-based is internal.

namespace rigicert {

inline constexpr const char* kToolVersion = "0.2.0";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParsedFramework {
  std::string name;
  Framework framework;
  std::optional<PinSet> pins;  // validated when present
};

// Parse with diagnostics that name the offending line/field.
ParsedFramework parse_framework_text(const std::string& text);
ParsedFramework parse_framework_json(const nlohmann::json& j);
ParsedFramework read_framework_file(const std::string& path);

nlohmann::json framework_to_json(const Framework& f, const std::string& name = "",
                                 const std::optional<std::vector<int>>& pinned_coords = std::nullopt);
void write_framework_file(const std::string& path, const nlohmann::json& j);

// "(1,x)" for pinned coordinate 0 in d = 2.
std::string coord_label(int col, int dim);

nlohmann::json report_to_json(const CertificateReport& rep, double elapsed_seconds);
std::string render_report_text(const CertificateReport& rep);

// 0 when the verdict implies rigidity, 1 otherwise; input failures are
// mapped to 2 by the CLI.
int verdict_exit_status(Verdict v);

}  // namespace rigicert
