#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cnls/errors.hpp"

namespace cnls::cli {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON has no NaN or infinity; those become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string profile_csv(const RadialGrid& grid, const FieldVector& U) {
  if (U.cells() != grid.size()) throw StructuralError("profile does not match grid");
  std::string out = "r";
  for (std::size_t i = 0; i < U.components(); ++i) out += ",u_" + std::to_string(i + 1);
  out += '\n';
  const auto r = grid.centers();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out += fmt17(r[j]);
    for (std::size_t i = 0; i < U.components(); ++i) out += ',' + fmt17(U[i][j]);
    out += '\n';
  }
  return out;
}

void write_profile_csv(const std::filesystem::path& path, const RadialGrid& grid, const FieldVector& U) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << profile_csv(grid, U);
}

FieldVector parse_profile_csv(const std::string& text, const RadialGrid& grid) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw StructuralError("profile CSV is empty");
  std::size_t cols = 1;
  for (char ch : line) cols += ch == ',';
  if (line.rfind("r,", 0) != 0 || cols < 2) throw StructuralError("profile CSV header must read r,u_1,...");
  const std::size_t m = cols - 1;
  std::vector<std::vector<double>> comps(m);
  const auto r = grid.centers();
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (row >= grid.size()) throw StructuralError("profile CSV has more rows than the grid has cells");
    std::vector<double> vals;
    const char* p = line.c_str();
    while (true) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) throw StructuralError("profile CSV row " + std::to_string(row + 2) + ": bad number");
      vals.push_back(v);
      p = end;
      if (*p == ',') {
        ++p;
      } else {
        break;
      }
    }
    if (vals.size() != cols) {
      throw StructuralError("profile CSV row " + std::to_string(row + 2) + ": expected " + std::to_string(cols) + " columns");
    }
    if (std::abs(vals[0] - r[row]) > 1e-9 * std::max(1.0, r[row])) {
      throw StructuralError("profile CSV row " + std::to_string(row + 2) + ": r does not match the grid");
    }
    for (std::size_t i = 0; i < m; ++i) comps[i].push_back(vals[i + 1]);
    ++row;
  }
  if (row != grid.size()) {
    throw StructuralError("profile CSV has " + std::to_string(row) + " rows, grid has " + std::to_string(grid.size()));
  }
  return FieldVector(std::move(comps));
}

FieldVector read_profile_csv(const std::filesystem::path& path, const RadialGrid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_profile_csv(ss.str(), grid);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json to_json(const FieldVector& U) {
  json arr = json::array();
  for (std::size_t i = 0; i < U.components(); ++i) arr.push_back(std::vector<double>(U[i].begin(), U[i].end()));
  return arr;
}

json to_json(const EnergyBreakdown& b) {
  return {{"total", number(b.total)},
          {"kinetic", b.kinetic},
          {"potential", number(b.potential_term)},
          {"coupling", number(b.coupling_term)}};
}

json to_json(const CheckOutcome& c) {
  json j = {{"name", c.name}, {"holds", c.holds}, {"worst_slack", number(c.worst_slack)},
            {"samples", c.samples}, {"note", c.note}};
  if (c.witness) {
    json scalars = json::object();
    for (const auto& [k, v] : c.witness->scalars) scalars[k] = number(v);
    j["witness"] = {{"description", c.witness->description}, {"scalars", scalars}, {"point", c.witness->point}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json to_json(const HypothesisReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"checks", checks}, {"all_hold", r.all_hold()}};
}

json to_json(const GroundStateReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"margin", number(c.margin)}, {"detail", c.detail}});
  }
  return {{"checks", checks}, {"all_passed", r.all_passed()}};
}

json to_json(const SolveResult& r) {
  json events = json::array();
  for (const auto& e : r.symmetrization_events) {
    events.push_back({{"iteration", e.iteration}, {"energy_before", e.energy_before},
                      {"energy_after", number(e.energy_after)}, {"accepted", e.accepted}});
  }
  return {{"converged", r.converged},
          {"diagnostic", r.diagnostic},
          {"message", r.message},
          {"iterations", r.iterations},
          {"energy", to_json(r.breakdown)},
          {"lambda", r.lambda},
          {"residuals", r.residuals},
          {"is_symmetric", r.is_symmetric},
          {"energy_history", r.energy_history},
          {"symmetrization_events", events}};
}

json to_json(const CertificateResult& c) {
  json scan = json::array();
  for (const auto& e : c.scan) scan.push_back({{c.parameter_name, e.parameter}, {"energy", number(e.energy)}});
  return {{"kind", c.kind},
          {"found", c.found},
          {"parameter_name", c.parameter_name},
          {"parameter", c.parameter},
          {"energy", number(c.energy_value)},
          {"full_energy", number(c.full_energy)},
          {"note", c.note},
          {"scan", scan}};
}

json to_json(const DilationScanResult& d) {
  json scan = json::array();
  for (const auto& e : d.table) scan.push_back({{"alpha", e.parameter}, {"energy", number(e.energy)}});
  return {{"kind", "dilation"}, {"unbounded_below", d.unbounded_below}, {"note", d.note}, {"scan", scan}};
}

json to_json(const RearrangementReport& r) {
  json j = {{"l2_before", r.l2_before},
            {"l2_after", r.l2_after},
            {"dirichlet_before", r.dirichlet_before},
            {"dirichlet_after", r.dirichlet_after},
            {"l2_before_per_component", r.l2_before_per_component},
            {"l2_after_per_component", r.l2_after_per_component}};
  j["G_integral_before"] = r.G_integral_before ? json(*r.G_integral_before) : json(nullptr);
  j["G_integral_after"] = r.G_integral_after ? json(*r.G_integral_after) : json(nullptr);
  return j;
}

}  // namespace cnls::cli
