#include "rigicert/framework_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rigicert {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw IoError(what); }

int line_of_byte(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

int require_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail("field '" + field + "': expected an integer");
  return j.get<int>();
}

double require_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail("field '" + field + "': expected a number");
  return j.get<double>();
}

}  // namespace

ParsedFramework parse_framework_json(const json& j) {
  if (!j.is_object()) fail("top level: expected a JSON object");
  for (const char* field : {"dimension", "vertices", "edges"})
    if (!j.contains(field)) fail(std::string("missing field '") + field + "'");

  ParsedFramework out;
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail("field 'name': expected a string");
    out.name = j["name"].get<std::string>();
  }

  const int dim = require_int(j["dimension"], "dimension");
  if (dim < 1) fail("field 'dimension': must be >= 1");
  out.framework.config.dim = dim;

  const json& verts = j["vertices"];
  if (!verts.is_array() || verts.empty()) fail("field 'vertices': expected a non-empty array");
  const int n = static_cast<int>(verts.size());
  out.framework.config.points.resize(n, dim);
  for (int i = 0; i < n; ++i) {
    const std::string field = "vertices[" + std::to_string(i + 1) + "]";
    if (!verts[i].is_array() || static_cast<int>(verts[i].size()) != dim)
      fail("field '" + field + "': expected " + std::to_string(dim) + " coordinates");
    for (int k = 0; k < dim; ++k)
      out.framework.config.points(i, k) = require_number(verts[i][k], field);
  }
  out.framework.graph.n = n;

  const json& edges = j["edges"];
  if (!edges.is_array()) fail("field 'edges': expected an array");
  for (size_t e = 0; e < edges.size(); ++e) {
    const std::string field = "edges[" + std::to_string(e + 1) + "]";
    if (!edges[e].is_array() || edges[e].size() != 2)
      fail("field '" + field + "': expected a pair of vertex indices");
    const int a = require_int(edges[e][0], field);
    const int b = require_int(edges[e][1], field);
    if (a < 1 || a > n || b < 1 || b > n)
      fail("field '" + field + "': vertex index out of range 1.." + std::to_string(n));
    out.framework.graph.edges.emplace_back(a - 1, b - 1);
  }

  require_valid(out.framework);

  if (j.contains("pins")) {
    const json& pins = j["pins"];
    if (!pins.is_array()) fail("field 'pins': expected an array");
    std::vector<int> cols;
    for (size_t p = 0; p < pins.size(); ++p) {
      const std::string field = "pins[" + std::to_string(p + 1) + "]";
      if (!pins[p].is_array() || pins[p].size() != 2)
        fail("field '" + field + "': expected (vertex, coordinate)");
      const int v = require_int(pins[p][0], field);
      const int k = require_int(pins[p][1], field);
      if (v < 1 || v > n) fail("field '" + field + "': vertex index out of range");
      if (k < 1 || k > dim) fail("field '" + field + "': coordinate index out of range");
      cols.push_back((v - 1) * dim + (k - 1));
    }
    out.pins = make_pin_set(out.framework, std::move(cols));
  }
  return out;
}

ParsedFramework parse_framework_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("line " + std::to_string(line_of_byte(text, e.byte)) + ": " + e.what());
  }
  return parse_framework_json(j);
}

ParsedFramework read_framework_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_framework_text(buf.str());
  } catch (const IoError& e) {
    fail(path + ": " + e.what());
  }
}

json framework_to_json(const Framework& f, const std::string& name,
                       const std::optional<std::vector<int>>& pinned_coords) {
  json j;
  if (!name.empty()) j["name"] = name;
  j["dimension"] = f.config.dim;
  json verts = json::array();
  for (int i = 0; i < f.config.vertex_count(); ++i) {
    json v = json::array();
    for (int k = 0; k < f.config.dim; ++k) v.push_back(f.config.points(i, k));
    verts.push_back(std::move(v));
  }
  j["vertices"] = std::move(verts);
  json edges = json::array();
  for (const Edge& e : f.graph.edges) edges.push_back(json::array({e.i + 1, e.j + 1}));
  j["edges"] = std::move(edges);
  if (pinned_coords) {
    json pins = json::array();
    for (int c : *pinned_coords)
      pins.push_back(json::array({c / f.config.dim + 1, c % f.config.dim + 1}));
    j["pins"] = std::move(pins);
  }
  return j;
}

void write_framework_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

std::string coord_label(int col, int dim) {
  static const char* axes = "xyzw";
  const int axis = col % dim;
  std::string a = axis < 4 ? std::string(1, axes[axis]) : std::to_string(axis + 1);
  return "(" + std::to_string(col / dim + 1) + "," + a + ")";
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json pins_to_json(const std::vector<int>& cols, int dim) {
  json a = json::array();
  for (int c : cols) a.push_back(json::array({c / dim + 1, c % dim + 1}));
  return a;
}

}  // namespace

json report_to_json(const CertificateReport& rep, double elapsed_seconds) {
  json j;
  j["tool"] = "rigicert";
  j["version"] = kToolVersion;
  if (!rep.framework_name.empty()) j["framework"] = rep.framework_name;
  j["dof"] = {{"m", rep.dof.m},
              {"nd", rep.dof.nd},
              {"D", rep.dof.trivial_dim},
              {"class", to_string(rep.dof.dof_class)},
              {"surplus", rep.dof.surplus}};
  // recover the ambient dimension from D = d(d+1)/2
  int d = 1;
  while (trivial_motion_dim(d) < rep.dof.trivial_dim) ++d;
  j["pins"] = pins_to_json(rep.pinned_coords, d);
  j["pins_explicit"] = rep.pins_explicit;
  j["rank"] = rep.rank;
  j["flex_count"] = rep.flex_count;
  j["stress_count"] = rep.stress_count;
  j["kernel_tol"] = rep.kernel_tol;
  j["marginal"] = rep.marginal;
  j["verdict"] = to_string(rep.verdict);
  j["rigid"] = verdict_implies_rigid(rep.verdict);

  json pre;
  pre["status"] = to_string(rep.prestress.status);
  pre["energy"] = rep.prestress.energy;
  pre["threshold"] = rep.prestress.threshold;
  if (rep.prestress.stress.size()) pre["stress"] = vector_to_json(rep.prestress.stress);
  if (rep.prestress.flex.size()) pre["flex"] = vector_to_json(rep.prestress.flex);
  if (!rep.prestress.basis_energies.empty()) pre["basis_energies"] = rep.prestress.basis_energies;
  if (!rep.prestress.note.empty()) pre["note"] = rep.prestress.note;
  j["prestress"] = std::move(pre);

  json tr;
  tr["status"] = to_string(rep.transverse.status);
  tr["value"] = rep.transverse.value;
  tr["threshold"] = rep.transverse.threshold;
  if (rep.transverse.gradient.partials.size()) {
    tr["gradient"] = vector_to_json(rep.transverse.gradient.partials);
    tr["gradient_degenerate"] = rep.transverse.gradient.degenerate;
  }
  if (!rep.transverse.row_results.empty()) {
    json rows = json::array();
    for (const auto& rd : rep.transverse.row_results) {
      json r;
      r["row"] = rd.edge_index + 1;
      r["status"] = to_string(rd.status);
      r["value"] = rd.value;
      r["threshold"] = rd.threshold;
      if (rd.stress.size()) r["stress"] = vector_to_json(rd.stress);
      rows.push_back(std::move(r));
    }
    tr["row_results"] = std::move(rows);
  }
  if (!rep.transverse.note.empty()) tr["note"] = rep.transverse.note;
  j["transverse"] = std::move(tr);

  if (rep.equivalence) {
    j["equivalence"] = {{"alpha", rep.equivalence->alpha},
                        {"residual", rep.equivalence->residual},
                        {"degenerate", rep.equivalence->degenerate},
                        {"threshold", rep.options.equivalence_threshold},
                        {"pass", rep.equivalence->degenerate ||
                                     rep.equivalence->residual <=
                                         rep.options.equivalence_threshold}};
  }
  if (rep.tests_agree) j["tests_agree"] = *rep.tests_agree;
  j["warnings"] = rep.warnings;
  j["options"] = {{"margin", rep.options.margin},
                  {"fd_step_rel", rep.options.fd_step_rel},
                  {"equivalence_threshold", rep.options.equivalence_threshold},
                  {"tol_factor", rep.options.tol_factor}};
  j["timings"] = {{"analysis_seconds", elapsed_seconds}};
  j["exit_status"] = verdict_exit_status(rep.verdict);
  j["assumes"] = "graph generic rigidity is assumed, not verified";
  return j;
}

namespace {

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

std::string render_report_text(const CertificateReport& rep) {
  std::ostringstream o;
  int d = 1;
  while (trivial_motion_dim(d) < rep.dof.trivial_dim) ++d;

  o << "framework: " << (rep.framework_name.empty() ? "(unnamed)" : rep.framework_name) << "\n";
  o << "  counts: m=" << rep.dof.m << "  nd=" << rep.dof.nd << "  D=" << rep.dof.trivial_dim
    << "  class=" << to_string(rep.dof.dof_class);
  if (rep.dof.dof_class != DofClass::isostatic) o << "(" << rep.dof.surplus << ")";
  o << "\n";
  o << "  pins:";
  for (int c : rep.pinned_coords) o << " " << coord_label(c, d);
  o << (rep.pins_explicit ? "  [explicit]" : "  [auto]") << "\n";
  o << "  rank: " << rep.rank << "  flexes: " << rep.flex_count
    << "  stresses: " << rep.stress_count << "  (tol " << format_double(rep.kernel_tol) << ")";
  if (rep.marginal) o << "  MARGINAL";
  o << "\n";

  o << "  prestress:  " << to_string(rep.prestress.status);
  if (rep.prestress.status == TestStatus::certified ||
      rep.prestress.status == TestStatus::not_certified)
    o << "  energy=" << format_double(rep.prestress.energy)
      << "  threshold=" << format_double(rep.prestress.threshold);
  if (!rep.prestress.note.empty()) o << "  (" << rep.prestress.note << ")";
  o << "\n";

  o << "  transverse: " << to_string(rep.transverse.status);
  if (rep.transverse.status == TestStatus::certified ||
      rep.transverse.status == TestStatus::not_certified)
    o << "  value=" << format_double(rep.transverse.value)
      << "  threshold=" << format_double(rep.transverse.threshold);
  if (!rep.transverse.note.empty()) o << "  (" << rep.transverse.note << ")";
  o << "\n";
  for (const auto& rd : rep.transverse.row_results) {
    o << "    drop row " << rd.edge_index + 1 << ": " << to_string(rd.status);
    if (rd.status != TestStatus::inapplicable) o << "  value=" << format_double(rd.value);
    o << "\n";
  }

  if (rep.equivalence) {
    o << "  equivalence: ";
    if (rep.equivalence->degenerate)
      o << "degenerate (both sides vanish)";
    else
      o << "alpha=" << format_double(rep.equivalence->alpha)
        << "  residual=" << format_double(rep.equivalence->residual) << "  ("
        << (rep.equivalence->residual <= rep.options.equivalence_threshold ? "pass" : "FAIL")
        << " at " << format_double(rep.options.equivalence_threshold) << ")";
    o << "\n";
  }
  if (rep.tests_agree) o << "  agreement: " << (*rep.tests_agree ? "yes" : "NO") << "\n";
  for (const auto& w : rep.warnings) o << "  warning: " << w << "\n";
  o << "  verdict: " << to_string(rep.verdict)
    << (verdict_implies_rigid(rep.verdict) ? " (rigid)" : "") << "\n";
  o << "  note: generic rigidity of the graph is assumed, not verified\n";
  return o.str();
}

int verdict_exit_status(Verdict v) { return verdict_implies_rigid(v) ? 0 : 1; }

}  // namespace rigicert
