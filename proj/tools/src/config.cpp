#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cnls/certificates.hpp"
#include "cnls/errors.hpp"
#include "io.hpp"

namespace cnls::cli {

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"problem", {"dimension", "components", "masses", "cells", "r_max"}},
    {"nonlinearity",
     {"family", "p", "beta", "terms", "a_breaks", "a_levels", "b_breaks", "b_levels", "sigma", "b",
      "growth_K", "growth_ell", "g5_R1", "g5_S1", "g5_A", "g5_t", "g5_sigma", "gn_constant"}},
    {"potential", {"breaks", "levels"}},
    {"solver",
     {"initial_step", "backtrack_factor", "step_growth", "max_step", "min_step", "max_iterations",
      "energy_tolerance", "residual_tolerance", "symmetrize_every", "seed", "initial_guess",
      "initial_alpha", "given_profile", "preconditioner", "preconditioner_shift"}},
    {"certify", {"kind", "alphas", "alpha_min", "alpha_max", "alpha_count", "dilations", "radius"}},
    {"check", {"samples", "seed"}},
};

const std::map<std::string, std::set<std::string>> kFamilyKeys = {
    {"power", {"p", "beta"}},
    {"R", {"terms", "a_breaks", "a_levels", "b_breaks", "b_levels"}},
    {"Rprime", {"terms", "a_breaks", "a_levels", "sigma", "b"}},
    {"zero", {}},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

class Reader {
 public:
  Reader(const RawConfig& raw, std::string origin) : raw_(raw), origin_(std::move(origin)) {}

  [[noreturn]] void fail(int line, const std::string& msg) const {
    std::ostringstream os;
    os << origin_ << ':';
    if (line > 0) os << line << ':';
    os << ' ' << msg;
    throw ConfigError(os.str());
  }

  const RawConfig::Entry* entry(const std::string& sec, const std::string& key) const {
    const auto s = raw_.sections.find(sec);
    if (s == raw_.sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
  bool has(const std::string& sec, const std::string& key) const { return entry(sec, key) != nullptr; }
  bool has_section(const std::string& sec) const { return raw_.sections.count(sec) > 0; }
  int line(const std::string& sec, const std::string& key) const {
    const auto* e = entry(sec, key);
    if (e) return e->line;
    const auto s = raw_.section_lines.find(sec);
    return s == raw_.section_lines.end() ? 0 : s->second;
  }

  double parse_number(const std::string& sec, const std::string& key, const std::string& text) const {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty()) {
      fail(line(sec, key), sec + "." + key + ": expected a number, got '" + text + "'");
    }
    return v;
  }

  std::optional<double> number(const std::string& sec, const std::string& key) const {
    const auto* e = entry(sec, key);
    if (!e) return std::nullopt;
    return parse_number(sec, key, e->value);
  }

  std::optional<std::uint64_t> integer(const std::string& sec, const std::string& key) const {
    const auto* e = entry(sec, key);
    if (!e) return std::nullopt;
    std::uint64_t v = 0;
    const auto& t = e->value;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
      fail(e->line, sec + "." + key + ": expected a non-negative integer, got '" + t + "'");
    }
    return v;
  }

  std::optional<std::vector<double>> list(const std::string& sec, const std::string& key) const {
    const auto* e = entry(sec, key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    if (trim(e->value).empty()) return out;
    for (const auto& item : split(e->value, ',')) out.push_back(parse_number(sec, key, item));
    return out;
  }

  std::optional<std::string> text(const std::string& sec, const std::string& key) const {
    const auto* e = entry(sec, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  /// Runs f, turning library exceptions into line-anchored config errors.
  template <class F>
  auto anchored(const std::string& sec, const std::string& key, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      fail(line(sec, key), sec + "." + key + ": " + ex.what());
    }
  }

  void require(bool cond, const std::string& sec, const std::string& key, const std::string& msg) const {
    if (!cond) fail(line(sec, key), sec + "." + key + ": " + msg);
  }

 private:
  const RawConfig& raw_;
  std::string origin_;
};

PiecewiseConstant coefficient(const Reader& rd, const std::string& prefix, double fallback) {
  const std::string sec = "nonlinearity";
  const auto breaks = rd.list(sec, prefix + "_breaks");
  const auto levels = rd.list(sec, prefix + "_levels");
  if (!levels) {
    rd.require(!breaks, sec, prefix + "_breaks", "given without " + prefix + "_levels");
    return PiecewiseConstant(fallback);
  }
  return rd.anchored(sec, prefix + "_levels",
                     [&] { return PiecewiseConstant(breaks.value_or(std::vector<double>{}), *levels); });
}

std::vector<ProductTerm> product_terms(const Reader& rd) {
  const auto t = rd.text("nonlinearity", "terms");
  rd.require(t.has_value(), "nonlinearity", "terms", "required for this family (e.g. terms = 1:1)");
  std::vector<ProductTerm> out;
  for (const auto& item : split(*t, ',')) {
    const auto parts = split(item, ':');
    rd.require(parts.size() == 2, "nonlinearity", "terms", "each term must read ell1:ell2, got '" + item + "'");
    out.push_back({rd.parse_number("nonlinearity", "terms", parts[0]),
                   rd.parse_number("nonlinearity", "terms", parts[1])});
  }
  return out;
}

std::vector<double> widen(const Reader& rd, const std::string& key, std::size_t m) {
  auto v = *rd.list("nonlinearity", key);
  if (v.size() == 1) v.assign(m, v[0]);
  rd.require(v.size() == m, "nonlinearity", key, "needs one value or one per component");
  return v;
}

NonlinearitySpec build_spec(const Reader& rd, std::size_t m) {
  const std::string sec = "nonlinearity";
  const auto family = rd.text(sec, "family");
  rd.require(family.has_value(), sec, "family", "required (power, R, Rprime or zero)");
  const auto allowed = kFamilyKeys.find(*family);
  rd.require(allowed != kFamilyKeys.end(), sec, "family", "unknown family '" + *family + "'");
  for (const auto& fam : kFamilyKeys) {
    for (const auto& key : fam.second) {
      if (rd.has(sec, key) && !allowed->second.count(key)) {
        rd.fail(rd.line(sec, key), sec + "." + key + ": not a parameter of family " + *family);
      }
    }
  }

  CouplingFamily fam;
  if (*family == "power") {
    fam = PowerCoupling{rd.number(sec, "p").value_or(2.0), rd.number(sec, "beta").value_or(0.0)};
  } else if (*family == "R") {
    fam = FamilyR{product_terms(rd), coefficient(rd, "a", 1.0), coefficient(rd, "b", 0.0)};
  } else if (*family == "Rprime") {
    const auto sigma = rd.number(sec, "sigma");
    rd.require(sigma.has_value(), sec, "sigma", "required for family Rprime");
    fam = FamilyRPrime{*sigma, rd.number(sec, "b").value_or(0.0), product_terms(rd), coefficient(rd, "a", 1.0)};
  } else {
    fam = ZeroCoupling{};
  }

  std::optional<GrowthBound> growth;
  if (rd.has(sec, "growth_K") || rd.has(sec, "growth_ell")) {
    rd.require(rd.has(sec, "growth_K"), sec, "growth_K", "growth_ell given without growth_K");
    rd.require(rd.has(sec, "growth_ell"), sec, "growth_ell", "growth_K given without growth_ell");
    growth = GrowthBound{*rd.number(sec, "growth_K"), widen(rd, "growth_ell", m)};
  }

  std::optional<LowerBound> lower;
  const std::vector<std::string> g5 = {"g5_R1", "g5_S1", "g5_A", "g5_t", "g5_sigma"};
  const bool any_g5 = std::any_of(g5.begin(), g5.end(), [&](const auto& k) { return rd.has(sec, k); });
  if (any_g5) {
    for (const auto& k : g5) rd.require(rd.has(sec, k), sec, k, "all of g5_R1, g5_S1, g5_A, g5_t, g5_sigma are needed");
    lower = LowerBound{*rd.number(sec, "g5_R1"), *rd.number(sec, "g5_S1"), widen(rd, "g5_A", m),
                       widen(rd, "g5_t", m), widen(rd, "g5_sigma", m)};
  }
  return rd.anchored(sec, "family", [&] { return NonlinearitySpec(m, fam, growth, lower); });
}

InitialGuess parse_guess(const Reader& rd, const std::string& v) {
  if (v == "gaussian") return InitialGuess::Gaussian;
  if (v == "given") return InitialGuess::Given;
  if (v == "random-positive") return InitialGuess::RandomPositive;
  rd.fail(rd.line("solver", "initial_guess"), "solver.initial_guess: expected gaussian, given or random-positive");
}

void read_solver(const Reader& rd, RunConfig& cfg, const std::filesystem::path& base) {
  const std::string sec = "solver";
  auto& s = cfg.solver;
  s.initial_step = rd.number(sec, "initial_step").value_or(s.initial_step);
  s.backtrack_factor = rd.number(sec, "backtrack_factor").value_or(s.backtrack_factor);
  s.step_growth = rd.number(sec, "step_growth").value_or(s.step_growth);
  s.max_step = rd.number(sec, "max_step").value_or(s.max_step);
  s.min_step = rd.number(sec, "min_step").value_or(s.min_step);
  s.max_iterations = rd.integer(sec, "max_iterations").value_or(s.max_iterations);
  s.energy_tolerance = rd.number(sec, "energy_tolerance").value_or(s.energy_tolerance);
  s.residual_tolerance = rd.number(sec, "residual_tolerance").value_or(s.residual_tolerance);
  s.symmetrize_every = rd.integer(sec, "symmetrize_every").value_or(s.symmetrize_every);
  s.seed = rd.integer(sec, "seed").value_or(s.seed);
  s.initial_alpha = rd.number(sec, "initial_alpha").value_or(s.initial_alpha);
  s.preconditioner_shift = rd.number(sec, "preconditioner_shift").value_or(s.preconditioner_shift);
  if (const auto g = rd.text(sec, "initial_guess")) s.initial_guess = parse_guess(rd, *g);
  if (const auto p = rd.text(sec, "preconditioner")) {
    if (*p == "sobolev") {
      s.preconditioner = Preconditioner::Sobolev;
    } else if (*p == "none") {
      s.preconditioner = Preconditioner::None;
    } else {
      rd.fail(rd.line(sec, "preconditioner"), "solver.preconditioner: expected sobolev or none");
    }
  }
  if (const auto path = rd.text(sec, "given_profile")) {
    const auto full = std::filesystem::path(*path).is_absolute() ? std::filesystem::path(*path) : base / *path;
    s.given = rd.anchored(sec, "given_profile", [&] { return read_profile_csv(full, cfg.problem().grid()); });
  }
  rd.require(s.initial_guess != InitialGuess::Given || s.given.has_value(), sec, "initial_guess",
             "'given' needs solver.given_profile");
  rd.anchored(sec, "initial_step", [&] { s.validate(); });
}

void read_certify(const Reader& rd, RunConfig& cfg) {
  const std::string sec = "certify";
  auto& c = cfg.certify;
  if (const auto k = rd.text(sec, "kind")) {
    if (*k == "gaussian") {
      c.kind = CertificateKind::Gaussian;
    } else if (*k == "potential") {
      c.kind = CertificateKind::Potential;
    } else if (*k == "dilation") {
      c.kind = CertificateKind::Dilation;
    } else {
      rd.fail(rd.line(sec, "kind"), "certify.kind: expected gaussian, potential or dilation");
    }
  }
  if (const auto a = rd.list(sec, "alphas")) {
    rd.require(!rd.has(sec, "alpha_min") && !rd.has(sec, "alpha_max") && !rd.has(sec, "alpha_count"), sec,
               "alphas", "give either alphas or alpha_min/alpha_max/alpha_count");
    c.alphas = *a;
  } else if (rd.has(sec, "alpha_min") || rd.has(sec, "alpha_max") || rd.has(sec, "alpha_count")) {
    for (const auto* k : {"alpha_min", "alpha_max", "alpha_count"}) {
      rd.require(rd.has(sec, k), sec, k, "alpha_min, alpha_max and alpha_count go together");
    }
    c.alphas = rd.anchored(sec, "alpha_min", [&] {
      return log_spaced(*rd.number(sec, "alpha_min"), *rd.number(sec, "alpha_max"),
                        static_cast<std::size_t>(*rd.integer(sec, "alpha_count")));
    });
  }
  if (const auto d = rd.list(sec, "dilations")) c.dilations = *d;
  c.radius = rd.number(sec, "radius");
  if (c.radius) rd.require(*c.radius > 0.0, sec, "radius", "must be positive");
}

}  // namespace

RawConfig parse_raw(const std::string& text, const std::string& origin) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int n = 0;
  auto fail = [&](const std::string& msg) { throw ConfigError(origin + ":" + std::to_string(n) + ": " + msg); };
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!kSchema.count(section)) fail("unknown section [" + section + "]");
      if (raw.sections.count(section)) fail("duplicate section [" + section + "]");
      raw.sections[section];
      raw.section_lines[section] = n;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    if (section.empty()) fail("key outside of any section");
    const auto key = trim(std::string_view(line).substr(0, eq));
    const auto value = trim(std::string_view(line).substr(eq + 1));
    if (!kSchema.at(section).count(key)) fail("unknown key '" + key + "' in [" + section + "]");
    if (raw.sections[section].count(key)) fail("duplicate key '" + key + "' in [" + section + "]");
    raw.sections[section][key] = {value, n};
  }
  return raw;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  return parse_config_at(text, origin, std::filesystem::current_path());
}

RunConfig parse_config_at(const std::string& text, const std::string& origin,
                          const std::filesystem::path& base) {
  const RawConfig raw = parse_raw(text, origin);
  const Reader rd(raw, origin);
  RunConfig cfg;
  cfg.source = origin;

  const std::string P = "problem";
  if (!rd.has_section(P)) throw ConfigError(origin + ": missing [problem] section");
  if (!rd.has_section("nonlinearity")) throw ConfigError(origin + ": missing [nonlinearity] section");
  const auto dim = rd.integer(P, "dimension");
  rd.require(dim.has_value(), P, "dimension", "required");
  const auto masses_in = rd.list(P, "masses");
  rd.require(masses_in.has_value() && !masses_in->empty(), P, "masses", "required");
  for (double c : *masses_in) rd.require(c > 0.0, P, "masses", "every mass must be positive");
  auto masses = *masses_in;
  const auto m = rd.integer(P, "components").value_or(masses.size());
  rd.require(m >= 1, P, "components", "must be at least 1");
  if (masses.size() == 1) masses.assign(m, masses[0]);
  rd.require(masses.size() == m, P, "masses", "needs one value or one per component");
  const auto cells = rd.integer(P, "cells").value_or(1024);
  const auto r_max = rd.number(P, "r_max").value_or(20.0);

  auto grid = rd.anchored(P, "cells", [&] {
    return RadialGrid::uniform(static_cast<int>(*dim), static_cast<std::size_t>(cells), r_max);
  });
  auto spec = build_spec(rd, m);
  cfg.gn_constant = rd.number("nonlinearity", "gn_constant").value_or(1.0);
  rd.require(cfg.gn_constant > 0.0, "nonlinearity", "gn_constant", "must be positive");

  std::optional<PotentialSpec> potential;
  if (rd.has_section("potential")) {
    const auto levels = rd.list("potential", "levels");
    rd.require(levels.has_value(), "potential", "levels", "required in [potential]");
    const auto breaks = rd.list("potential", "breaks").value_or(std::vector<double>{});
    potential = rd.anchored("potential", "levels", [&] { return PotentialSpec{PiecewiseConstant(breaks, *levels)}; });
  }
  cfg.instance.emplace(rd.anchored(P, "masses", [&] {
    return ProblemInstance(std::move(grid), std::move(spec), masses, potential);
  }));

  read_solver(rd, cfg, base);
  read_certify(rd, cfg);
  cfg.check.samples = rd.integer("check", "samples").value_or(cfg.check.samples);
  rd.require(cfg.check.samples > 0, "check", "samples", "must be positive");
  cfg.check.seed = rd.integer("check", "seed").value_or(cfg.check.seed);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_at(ss.str(), path.string(), path.parent_path());
}

}  // namespace cnls::cli
