#include "cnls/hypotheses.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "cnls/bessel.hpp"
#include "cnls/errors.hpp"

namespace cnls {

namespace {

constexpr double kRoundoff = 1e-12;

/// Seeded generator for radii, magnitudes and increments.
class Sampler {
 public:
  Sampler(std::uint64_t seed, std::span<const double> breakpoints)
      : rng_(seed), breaks_(breakpoints.begin(), breakpoints.end()) {}

  double log_uniform(double lo_exp, double hi_exp) {
    return std::pow(10.0, std::uniform_real_distribution<double>(lo_exp, hi_exp)(rng_));
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  double radius() {
    if (!breaks_.empty() && chance(0.3)) {
      const double b = breaks_[index(breaks_.size())];
      return b * (1.0 + uniform(-0.1, 0.1));
    }
    return log_uniform(-3.0, 3.0);
  }

  /// Two radii r0 < r1, often straddling a breakpoint.
  std::pair<double, double> radius_pair() {
    double r0 = radius();
    double r1 = radius();
    if (!breaks_.empty() && chance(0.3)) {
      const double b = breaks_[index(breaks_.size())];
      r0 = b * (1.0 - uniform(1e-6, 0.2));
      r1 = b * (1.0 + uniform(1e-6, 0.2));
    }
    if (r0 > r1) std::swap(r0, r1);
    if (r0 == r1) r1 = r0 * 1.5;
    return {r0, r1};
  }

  double magnitude() { return chance(0.1) ? 0.0 : log_uniform(-4.0, 2.0); }
  double increment() { return log_uniform(-4.0, 1.0); }

  std::vector<double> point(std::size_t m) {
    std::vector<double> s(m);
    for (auto& v : s) v = magnitude();
    return s;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<double> breaks_;
};

/// Tracks the worst normalised slack seen by a check.
class SlackTracker {
 public:
  explicit SlackTracker(std::string name) { out_.name = std::move(name); }

  /// slack >= 0 means satisfied. Differences within roundoff of the term
  /// magnitudes are not violations.
  void record(double slack, double scale, const std::function<Witness()>& witness) {
    ++out_.samples;
    const double normalised = scale > 0.0 ? slack / scale : slack;
    const bool violated = !std::isfinite(slack) || slack < -kRoundoff * scale;
    if (violated && out_.holds) {
      out_.holds = false;
      out_.worst_slack = normalised;
      out_.witness = witness();
    } else if (normalised < out_.worst_slack && (violated || out_.holds)) {
      out_.worst_slack = std::isfinite(normalised) ? normalised : -1.0;
      if (violated || !out_.witness) out_.witness = witness();
    }
  }

  CheckOutcome& outcome() { return out_; }

 private:
  CheckOutcome out_;
};

std::vector<double> with_step(std::vector<double> y, std::size_t i, double h) {
  y[i] += h;
  return y;
}

double norm_squared(std::span<const double> s) {
  double sum = 0.0;
  for (double v : s) sum += v * v;
  return sum;
}

std::vector<std::vector<double>> adversarial_points(std::size_t m) {
  std::vector<std::vector<double>> pts;
  for (double mag : {0.0, 1e-8, 1e-3, 0.5, 1.0, 7.0, 1e3}) {
    pts.emplace_back(m, mag);  // diagonal
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> axis(m, 0.0);
      axis[i] = mag;
      pts.push_back(axis);
    }
  }
  return pts;
}

CheckOutcome check_g0(const NonlinearitySpec& spec, std::size_t samples, Sampler& sampler) {
  SlackTracker tracker("G0");
  const std::size_t m = spec.components();
  std::vector<double> signed_s(m), abs_s(m);
  for (std::size_t n = 0; n < samples; ++n) {
    const double r = sampler.radius();
    for (std::size_t i = 0; i < m; ++i) {
      abs_s[i] = sampler.magnitude();
      signed_s[i] = sampler.chance(0.5) ? -abs_s[i] : abs_s[i];
    }
    const double g_signed = eval_G(spec, r, signed_s);
    const double g_abs = spec.G(r, abs_s);
    tracker.record(g_abs - g_signed, std::abs(g_abs) + std::abs(g_signed), [&] {
      return Witness{"G(r, s) > G(r, |s|)", {{"r", r}}, signed_s};
    });

    // Continuity in each coordinate: shrinking perturbations must give
    // vanishing changes.
    const std::size_t k = sampler.index(m);
    const double delta = 1e-9 * std::max(1.0, abs_s[k]);
    auto moved = with_step(abs_s, k, delta);
    const double jump = std::abs(spec.G(r, moved) - g_abs);
    const double allowed = 1e-6 * (1.0 + std::abs(g_abs));
    tracker.record(allowed - jump, allowed + jump, [&] {
      return Witness{"discontinuity in s_" + std::to_string(k + 1), {{"r", r}, {"delta", delta}},
                     abs_s};
    });
  }
  auto& out = tracker.outcome();
  out.note = "G is evaluated on |s|; measurability in r is represented by " +
             std::to_string(spec.radial_breakpoints().size()) + " radial breakpoint(s)";
  return out;
}

CheckOutcome check_g1(const NonlinearitySpec& spec, int dimension, std::size_t samples,
                      Sampler& sampler) {
  SlackTracker tracker("G1");
  const auto& growth = spec.growth();
  const std::size_t m = spec.components();
  const double critical = 4.0 / dimension;
  std::ostringstream note;
  note << "K = " << growth.K << (spec.growth_declared() ? " (declared)" : " (derived)");

  bool exponents_ok = true;
  if (growth.K > 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!(growth.ell[i] > 0.0 && growth.ell[i] < critical)) {
        exponents_ok = false;
        note << "; ell_" << i + 1 << " = " << growth.ell[i] << " is not in (0, 4/N = " << critical
             << ")";
      }
    }
  }

  auto test_point = [&](double r, const std::vector<double>& s) {
    const double g = spec.G(r, s);
    double bound = norm_squared(s);
    for (std::size_t i = 0; i < m; ++i) bound += std::pow(s[i], growth.ell[i] + 2.0);
    bound *= growth.K;
    tracker.record(g, std::abs(g), [&] { return Witness{"G < 0", {{"r", r}}, s}; });
    tracker.record(bound - g, std::abs(bound) + std::abs(g), [&] {
      return Witness{"G > K(|s|^2 + sum s_i^(ell_i+2))", {{"r", r}, {"G", g}, {"bound", bound}}, s};
    });
  };

  for (std::size_t n = 0; n < samples; ++n) test_point(sampler.radius(), sampler.point(m));
  // Dilation rays t * s0 over twelve decades expose growth faster than declared.
  for (std::size_t ray = 0; ray < 16; ++ray) {
    std::vector<double> dir(m);
    for (auto& v : dir) v = sampler.uniform(0.1, 1.0);
    if (ray < m) {
      std::fill(dir.begin(), dir.end(), 0.0);
      dir[ray] = 1.0;
    } else if (ray == m) {
      std::fill(dir.begin(), dir.end(), 1.0);
    }
    const double r = sampler.radius();
    for (int e = -6; e <= 6; ++e) {
      std::vector<double> s(dir);
      for (auto& v : s) v *= std::pow(10.0, e);
      test_point(r, s);
    }
  }
  for (const auto& s : adversarial_points(m)) test_point(1.0, s);

  auto& out = tracker.outcome();
  if (!exponents_ok) out.holds = false;
  if (const auto* power = std::get_if<PowerCoupling>(&spec.family())) {
    note << "; power coupling exponent ell = 2p - 2 = " << 2.0 * power->p - 2.0;
  }
  out.note = note.str();
  return out;
}

CheckOutcome check_g3(const NonlinearitySpec& spec, std::size_t samples, Sampler& sampler) {
  CheckOutcome out;
  out.name = "G3";
  const std::size_t m = spec.components();
  const std::size_t per_candidate = std::max<std::size_t>(samples / 64, 32);
  std::ostringstream note;

  for (double eps : {1e-1, 1e-2, 1e-3}) {
    bool found = false;
    double best_slack = -1.0;
    std::optional<Witness> last_witness;
    for (int sk = 1; sk <= 40 && !found; ++sk) {
      const double s0 = std::ldexp(1.0, -sk);
      for (double r0 : {1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6}) {
        bool ok = true;
        double worst = 1.0;
        for (std::size_t n = 0; n < per_candidate; ++n) {
          const double r = r0 * sampler.log_uniform(0.0, 3.0) * (1.0 + 1e-12);
          std::vector<double> s(m);
          for (auto& v : s) v = s0 * sampler.log_uniform(-6.0, 0.0) * (1.0 - 1e-12);
          if (n < m) {  // axes
            std::fill(s.begin(), s.end(), 0.0);
            s[n] = s0 * 0.999;
          }
          const double g = spec.G(r, s);
          const double bound = eps * norm_squared(s);
          const double slack = bound - g;
          const double scale = std::abs(bound) + std::abs(g);
          ++out.samples;
          if (scale > 0.0) worst = std::min(worst, slack / scale);
          if (slack < -kRoundoff * scale) {
            ok = false;
            last_witness = Witness{"G > eps |s|^2", {{"eps", eps}, {"R0", r0}, {"S0", s0}, {"r", r}}, s};
            break;
          }
        }
        if (ok) {
          found = true;
          best_slack = worst;
          note << "eps=" << eps << ": R0=" << r0 << ", S0=" << s0 << "; ";
          break;
        }
      }
    }
    if (!found) {
      out.holds = false;
      out.witness = last_witness;
      note << "eps=" << eps << ": no (R0, S0) found; ";
    }
    out.worst_slack = std::min(out.worst_slack, found ? best_slack : -1.0);
  }
  out.note = note.str();
  return out;
}

CheckOutcome check_g4(const NonlinearitySpec& spec, std::size_t samples, Sampler& sampler,
                      bool scalar) {
  SlackTracker tracker(scalar ? "G4_scalar" : "G4");
  const std::size_t m = spec.components();
  for (std::size_t n = 0; n < samples; ++n) {
    const double r = sampler.radius();
    const auto s = sampler.point(m);
    std::vector<double> t(m);
    if (scalar) {
      std::fill(t.begin(), t.end(), sampler.log_uniform(0.0, 2.0));
    } else {
      for (auto& v : t) v = sampler.chance(0.2) ? 1.0 : sampler.log_uniform(0.0, 2.0);
    }
    std::vector<double> ts(m);
    for (std::size_t i = 0; i < m; ++i) ts[i] = t[i] * s[i];
    const double tmax = *std::max_element(t.begin(), t.end());
    const double lhs = spec.G(r, ts);
    const double rhs = tmax * tmax * spec.G(r, s);
    tracker.record(lhs - rhs, std::abs(lhs) + std::abs(rhs), [&] {
      Witness w{"G(r, t s) < t_max^2 G(r, s)", {{"r", r}, {"t_max", tmax}}, s};
      for (std::size_t i = 0; i < m; ++i) w.scalars.emplace_back("t_" + std::to_string(i + 1), t[i]);
      return w;
    });
  }
  auto& out = tracker.outcome();
  out.note = scalar ? "common factor t_i = t" : "independent factors t_i >= 1";
  return out;
}

CheckOutcome check_g5(const NonlinearitySpec& spec, int dimension, std::size_t samples,
                      Sampler& sampler) {
  SlackTracker tracker("G5");
  const auto& lower = spec.lower_bound();
  if (!lower) {
    auto& out = tracker.outcome();
    out.holds = false;
    out.worst_slack = -1.0;
    out.note = "no lower-bound data (R1, S1, A_i, t_i, sigma_i) declared";
    return out;
  }
  const std::size_t m = spec.components();
  std::ostringstream note;
  bool params_ok = true;
  for (std::size_t i = 0; i < m; ++i) {
    const double cap = 2.0 * (2.0 - lower->t[i]) / dimension;
    if (lower->sigma[i] > cap) {
      params_ok = false;
      note << "sigma_" << i + 1 << " = " << lower->sigma[i] << " exceeds 2(2 - t_i)/N = " << cap << "; ";
    }
  }
  note << "s_i sampled componentwise in (0, S1)";

  for (std::size_t n = 0; n < samples; ++n) {
    const double r = lower->R1 * sampler.log_uniform(0.0, 4.0) * (1.0 + 1e-12);
    std::vector<double> s(m);
    for (auto& v : s) v = lower->S1 * sampler.log_uniform(-8.0, 0.0) * (1.0 - 1e-12);
    const double g = spec.G(r, s);
    double bound = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      bound += lower->A[i] * std::pow(r, -lower->t[i]) * std::pow(s[i], lower->sigma[i] + 2.0);
    }
    tracker.record(g - bound, std::abs(g) + std::abs(bound), [&] {
      return Witness{"G < sum A_i r^-t_i s_i^(sigma_i+2)", {{"r", r}, {"G", g}, {"bound", bound}}, s};
    });
  }
  auto& out = tracker.outcome();
  if (!params_ok) out.holds = false;
  out.note = note.str();
  return out;
}

}  // namespace

const CheckOutcome* HypothesisReport::find(std::string_view name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool HypothesisReport::all_hold() const noexcept {
  for (const auto& c : checks) {
    if (c.name == "G4" || c.name == "G4_scalar") continue;
    if (c.name == "G5" && c.note.starts_with("no lower-bound data")) continue;
    if (!c.holds) return false;
  }
  const auto* g4 = find("G4");
  const auto* g4s = find("G4_scalar");
  if (g4 || g4s) return (g4 && g4->holds) || (g4s && g4s->holds);
  return true;
}

CheckOutcome check_supermodular(const CouplingFunction& G, std::size_t components,
                                std::size_t sample_count, std::uint64_t seed,
                                std::span<const double> radial_breakpoints) {
  if (sample_count == 0) throw PreconditionError("check_supermodular: sample_count must be >= 1");
  Sampler sampler(seed, radial_breakpoints);
  SlackTracker tracker("G2");
  const std::size_t m = components;

  auto mixed = [&](double r, const std::vector<double>& y, std::size_t i, std::size_t j, double h,
                   double k) {
    const auto yi = with_step(y, i, h);
    const auto yj = with_step(y, j, k);
    const auto yij = with_step(yi, j, k);
    const double a = G(r, yij), b = G(r, y), c = G(r, yi), d = G(r, yj);
    tracker.record(a + b - c - d, std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d), [&] {
      return Witness{"mixed second difference < 0",
                     {{"r", r}, {"h", h}, {"k", k}, {"i", double(i + 1)}, {"j", double(j + 1)}},
                     y};
    });
  };
  auto radial = [&](double r0, double r1, const std::vector<double>& y, std::size_t i, double h) {
    const auto yi = with_step(y, i, h);
    const double a = G(r1, y), b = G(r0, yi), c = G(r1, yi), d = G(r0, y);
    tracker.record(a + b - c - d, std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d), [&] {
      return Witness{"G(r1, y + h e_i) + G(r0, y) > G(r1, y) + G(r0, y + h e_i)",
                     {{"r0", r0}, {"r1", r1}, {"h", h}, {"i", double(i + 1)}},
                     y};
    });
  };

  for (std::size_t n = 0; n < sample_count; ++n) {
    const auto y = sampler.point(m);
    if (m >= 2) {
      const std::size_t i = sampler.index(m);
      std::size_t j = sampler.index(m - 1);
      if (j >= i) ++j;
      mixed(sampler.radius(), y, i, j, sampler.increment(), sampler.increment());
    }
    const auto [r0, r1] = sampler.radius_pair();
    radial(r0, r1, y, sampler.index(m), sampler.increment());
  }
  for (const auto& y : adversarial_points(m)) {
    for (double h : {1e-6, 1.0, 50.0}) {
      if (m >= 2) mixed(1.0, y, 0, 1, h, h);
      radial(0.5, 2.0, y, 0, h);
    }
  }
  return tracker.outcome();
}

CheckOutcome check_supermodular(const NonlinearitySpec& spec, std::size_t sample_count,
                                std::uint64_t seed) {
  const auto breaks = spec.radial_breakpoints();
  return check_supermodular([&spec](double r, std::span<const double> s) { return spec.G(r, s); },
                            spec.components(), sample_count, seed, breaks);
}

HypothesisReport check_hypotheses(const NonlinearitySpec& spec, int dimension,
                                  std::size_t sample_count, std::uint64_t seed) {
  if (sample_count == 0) throw PreconditionError("check_hypotheses: sample_count must be >= 1");
  if (dimension < 1) throw StructuralError("check_hypotheses: dimension must be positive");
  const auto breaks = spec.radial_breakpoints();
  HypothesisReport report;
  {
    Sampler s(seed, breaks);
    report.checks.push_back(check_g0(spec, sample_count, s));
  }
  {
    Sampler s(seed + 1, breaks);
    report.checks.push_back(check_g1(spec, dimension, sample_count, s));
  }
  report.checks.push_back(check_supermodular(spec, sample_count, seed + 2));
  {
    Sampler s(seed + 3, breaks);
    report.checks.push_back(check_g3(spec, sample_count, s));
  }
  {
    Sampler s(seed + 4, breaks);
    report.checks.push_back(check_g4(spec, sample_count, s, false));
  }
  {
    Sampler s(seed + 5, breaks);
    report.checks.push_back(check_g4(spec, sample_count, s, true));
  }
  {
    Sampler s(seed + 6, breaks);
    report.checks.push_back(check_g5(spec, dimension, sample_count, s));
  }
  return report;
}

std::vector<CheckOutcome> check_potential(const PotentialSpec& potential, int dimension) {
  const auto& p = potential.profile;
  const auto breaks = p.breaks();
  const auto levels = p.levels();

  CheckOutcome p1;
  p1.name = "P1";
  p1.samples = levels.size();
  std::ostringstream n1;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double lo = k == 0 ? 0.0 : breaks[k - 1];
    if (levels[k] < 0.0) {
      p1.holds = false;
      p1.worst_slack = std::min(p1.worst_slack, -1.0);
      p1.witness = Witness{"p < 0", {{"r", lo}, {"p", levels[k]}}, {}};
      n1 << "negative level on [" << lo << ", ...); ";
    }
    if (k > 0 && levels[k] > levels[k - 1]) {
      p1.holds = false;
      p1.worst_slack = std::min(p1.worst_slack, -1.0);
      const double r_before = k >= 2 ? 0.5 * (breaks[k - 2] + breaks[k - 1]) : 0.5 * breaks[0];
      p1.witness = Witness{"p increases", {{"r0", r_before}, {"r1", breaks[k - 1]},
                                           {"p(r0)", levels[k - 1]}, {"p(r1)", levels[k]}}, {}};
      n1 << "increase at r = " << breaks[k - 1] << "; ";
    }
  }
  if (p.tail_level() != 0.0) {
    p1.holds = false;
    p1.worst_slack = std::min(p1.worst_slack, -1.0);
    n1 << "p does not vanish at infinity (tail level " << p.tail_level() << ")";
  }
  p1.note = n1.str();

  CheckOutcome p2;
  p2.name = "P2";
  p2.holds = false;
  p2.worst_slack = -1.0;
  if (dimension <= 2) {
    // Need a in (0, 1] with p(a) > 0.
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const double lo = k == 0 ? 0.0 : breaks[k - 1];
      if (lo >= 1.0) break;
      ++p2.samples;
      if (levels[k] > 0.0) {
        const double hi = k < breaks.size() ? std::min(breaks[k], 1.0) : 1.0;
        const double a = k < breaks.size() && breaks[k] <= 1.0 ? 0.5 * (lo + hi) : hi;
        p2.holds = true;
        p2.worst_slack = 1.0;
        p2.witness = Witness{"p(a) > 0", {{"a", a}, {"p(a)", p(a)}}, {}};
        break;
      }
    }
    p2.note = p2.holds ? "p positive inside the unit ball" : "p vanishes on (0, 1]";
  } else {
    const double j = bessel_first_zero(0.5 * dimension - 1.0);
    // On r < breaks[k], p >= min(levels[0..k]); the best R for that window is breaks[k].
    double running_min = levels.empty() ? 0.0 : levels[0];
    double best = -1.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      running_min = std::min(running_min, levels[k]);
      ++p2.samples;
      if (k < breaks.size()) {
        const double R = breaks[k];
        const double margin = running_min - j * j / (R * R);
        const double normalised = margin / (running_min + j * j / (R * R));
        if (normalised > best) best = normalised;
        if (margin > 0.0 && !p2.holds) {
          p2.holds = true;
          p2.witness = Witness{"p > j^2 / R^2 on |x| < R", {{"R", R}, {"j", j}, {"p_min", running_min}}, {}};
        }
      } else if (running_min > 0.0 && !p2.holds) {
        // Positive everywhere: any R > j / sqrt(p_min) works.
        const double R = 2.0 * j / std::sqrt(running_min);
        p2.holds = true;
        best = 1.0;
        p2.witness = Witness{"p > j^2 / R^2 on |x| < R", {{"R", R}, {"j", j}, {"p_min", running_min}}, {}};
      }
    }
    p2.worst_slack = p2.holds ? std::max(best, 0.0) : best;
    std::ostringstream n2;
    n2 << "first zero of J_" << 0.5 * dimension - 1.0 << " = " << j;
    p2.note = n2.str();
  }
  return {p1, p2};
}

}  // namespace cnls
