#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cnls/bessel.hpp"
#include "cnls/certificates.hpp"
#include "cnls/energy.hpp"
#include "cnls/hypotheses.hpp"
#include "cnls/minimize.hpp"
#include "cnls/symmetrize.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "io.hpp"

using namespace cnls;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// Runs one criterion; an exception counts as a failure.
void criterion(int id, const std::string& title, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  report(id, pass, title, detail);
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

fs::path config(const std::string& name) { return fs::path(CNLS_CONFIG_DIR) / name; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Accepted symmetrization events and energy histories from every solver run.
std::vector<SolveResult> runs;

ProblemInstance cubic_instance(std::size_t components) {
  return ProblemInstance(RadialGrid::uniform(1, 4096, 20.0), NonlinearitySpec(components, PowerCoupling{2.0, 0.0}),
                         std::vector<double>(components, 1.0));
}

SolveConfig benchmark_solver() {
  SolveConfig c;
  c.symmetrize_every = 5;
  return c;
}

std::vector<double> uniform_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> u(n);
  for (auto& x : u) x = d(rng);
  return u;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  double single_energy = 0.0;

  criterion(1, "sech soliton benchmark", [&](std::string& d) {
    const auto inst = cubic_instance(1);
    const auto t0 = std::chrono::steady_clock::now();
    auto r = solve(inst, benchmark_solver());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    single_energy = r.breakdown.total;
    const double eE = rel(r.breakdown.total, -1.0 / 96.0);
    const double eL = rel(r.lambda[0], -1.0 / 16.0);
    d = fmt("E=%.8f (rel err %.2e), lambda=%.8f (rel err %.2e), %zu iterations, %.2f s", r.breakdown.total, eE,
            r.lambda[0], eL, r.iterations, secs);
    const bool ok = r.converged && eE < 1e-2 && eL < 1e-2 && secs < 30.0;
    runs.push_back(std::move(r));
    return ok;
  });

  criterion(2, "decoupled pair", [&](std::string& d) {
    const auto inst = cubic_instance(2);
    auto r = solve(inst, benchmark_solver());
    const double reference = 2.0 * single_energy;
    const double eE = rel(r.breakdown.total, reference);
    double diff = 0.0;
    for (std::size_t j = 0; j < r.U.cells(); ++j) diff += std::pow(r.U[0][j] - r.U[1][j], 2) * inst.grid().measures()[j];
    diff = std::sqrt(diff);
    d = fmt("E=%.8f vs 2*E1=%.8f (rel err %.2e), |u1-u2|_2=%.2e", r.breakdown.total, reference, eE, diff);
    const bool ok = r.converged && eE < 5e-3 && diff < 1e-6;
    runs.push_back(std::move(r));
    return ok;
  });

  criterion(3, "rearrangement suite", [&](std::string& d) {
    const auto g = RadialGrid::uniform(1, 64, 5.0);
    const std::vector<NonlinearitySpec> specs = {
        NonlinearitySpec(2, PowerCoupling{2.0, 1.0}),
        NonlinearitySpec(2, FamilyR{{{1.0, 1.0}, {0.5, 1.0}}, PiecewiseConstant({1.0, 3.0}, {3.0, 2.0, 1.0}),
                                    PiecewiseConstant({2.0}, {0.5, 0.0})})};
    std::mt19937_64 rng(2024);
    std::size_t measure_bad = 0, l2_bad = 0, dirichlet_bad = 0, coupling_bad = 0;
    double worst_l2 = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const FieldVector U({uniform_values(rng, g.size()), uniform_values(rng, g.size())});
      const auto star = rearrange_vector(g, U);
      for (std::size_t i = 0; i < 2; ++i) {
        std::vector<double> a(U[i].begin(), U[i].end()), b(star[i].begin(), star[i].end());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) ++measure_bad;
      }
      for (const auto& spec : specs) {
        const auto rep = verify_inequalities(g, U, &spec);
        const double el2 = std::abs(rep.l2_after - rep.l2_before) / rep.l2_before;
        worst_l2 = std::max(worst_l2, el2);
        if (el2 > 1e-12) ++l2_bad;
        if (rep.dirichlet_after > rep.dirichlet_before * (1.0 + 1e-12)) ++dirichlet_bad;
        const double scale = std::max(1.0, std::abs(*rep.G_integral_before));
        if (*rep.G_integral_after < *rep.G_integral_before - 1e-12 * scale) ++coupling_bad;
      }
    }
    d = fmt("1000 fields: equimeasurability violations %zu, L2 violations %zu (worst %.1e), Dirichlet increases %zu, "
            "coupling decreases %zu",
            measure_bad, l2_bad, worst_l2, dirichlet_bad, coupling_bad);
    return measure_bad + l2_bad + dirichlet_bad + coupling_bad == 0;
  });

  criterion(4, "supermodularity suite", [&](std::string& d) {
    const NonlinearitySpec family_r(2, FamilyR{{{1.0, 1.0}, {0.5, 2.0}}, PiecewiseConstant({1.0, 4.0}, {3.0, 2.0, 1.0}),
                                               PiecewiseConstant({2.0, 5.0}, {0.6, 0.2, 0.0})});
    const auto good = check_supermodular(family_r, 100000, 11);
    const CouplingFunction anti = [](double, std::span<const double> s) { return -s[0] * s[1]; };
    const auto bad = check_supermodular(anti, 2, 100000, 12);
    d = fmt("FamilyR holds=%d over %zu samples (worst slack %.2e); -s1*s2 holds=%d, witness=%d", good.holds,
            good.samples, good.worst_slack, bad.holds, bad.witness.has_value());
    if (bad.witness) d += " (" + bad.witness->description + ")";
    return good.holds && good.samples >= 100000 && !bad.holds && bad.witness.has_value();
  });

  criterion(5, "gradient against central differences", [&](std::string& d) {
    const auto g1 = RadialGrid::uniform(1, 64, 6.0);
    const auto g3 = RadialGrid::uniform(3, 64, 6.0);
    const std::vector<ProblemInstance> instances = {
        ProblemInstance(g1, NonlinearitySpec(2, PowerCoupling{2.0, 0.7}), {1.0, 2.0}),
        ProblemInstance(g3, NonlinearitySpec(2, FamilyR{{{1.0, 1.0}, {0.5, 1.0}}, PiecewiseConstant({3.0}, {2.0, 1.0}),
                                                        PiecewiseConstant({1.0}, {0.5, 0.0})}),
                        {1.0, 1.0}),
        ProblemInstance(g1, NonlinearitySpec(2, FamilyRPrime{0.5, 0.3, {{1.0, 1.0}}, PiecewiseConstant(1.0)}), {1.0, 1.0}),
        ProblemInstance(g3, NonlinearitySpec(1, ZeroCoupling{}), {1.0}, PotentialSpec{PiecewiseConstant({2.0}, {1.5, 0.0})}),
    };
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(0.1, 0.6), dir(-1.0, 1.0);
    double worst = 0.0;
    std::size_t bad = 0, total = 0;
    for (const auto& inst : instances) {
      const auto& g = inst.grid();
      for (int trial = 0; trial < 100; ++trial) {
        FieldVector U(inst.components(), g.size()), V(inst.components(), g.size());
        for (std::size_t i = 0; i < U.components(); ++i) {
          for (std::size_t j = 0; j < g.size(); ++j) {
            U[i][j] = val(rng);
            V[i][j] = dir(rng);
          }
          U[i].back() = V[i].back() = 0.0;
        }
        const double eps = 1e-5;
        FieldVector P(U), M(U);
        for (std::size_t i = 0; i < U.components(); ++i) {
          for (std::size_t j = 0; j < g.size(); ++j) {
            P[i][j] += eps * V[i][j];
            M[i][j] -= eps * V[i][j];
          }
        }
        const double fd = (energy(inst, P).total - energy(inst, M).total) / (2.0 * eps);
        const auto grad = energy_gradient(inst, U);
        double an = 0.0;
        for (std::size_t i = 0; i < U.components(); ++i) {
          for (std::size_t j = 0; j < g.size(); ++j) an += grad[i][j] * V[i][j] * g.measures()[j];
        }
        const double e = std::abs(fd - an) / std::max(std::abs(an), 1e-300);
        worst = std::max(worst, e);
        if (e > 1e-5) ++bad;
        ++total;
      }
    }
    d = fmt("%zu fields over power, R, Rprime and zero-with-potential; worst rel err %.2e, failures %zu", total, worst,
            bad);
    return bad == 0;
  });

  criterion(6, "Gaussian certificate for a FamilyR coupling", [&](std::string& d) {
    const auto cfg = cli::load_config(config("family_r.ini"));
    const auto& inst = cfg.problem();
    const auto cert = gaussian_certificate(inst, cfg.certify.alphas);
    auto r = solve(inst, cfg.solver);
    d = fmt("certificate found=%d alpha=%.4g E_cert=%.6f; solve E=%.6f converged=%d", cert.found, cert.parameter,
            cert.full_energy, r.breakdown.total, r.converged);
    const bool ok = cert.found && cert.full_energy < 0.0 && r.converged &&
                    r.breakdown.total <= cert.full_energy + 1e-12 * std::abs(cert.full_energy);
    runs.push_back(std::move(r));
    return ok;
  });

  criterion(7, "trap potential certificates", [&](std::string& d) {
    const auto one = cli::load_config(config("potential_1d.ini"));
    const auto c1 = potential_certificate(one.problem());
    const auto three = cli::load_config(config("potential_3d.ini"));
    const auto c3 = potential_certificate(three.problem());
    const double zero = bessel_first_zero(0.5);
    d = fmt("N=1 found=%d alpha=%.4g form=%.4g; N=3 found=%d R=%.4g form=%.4g; j_{1/2,1}-pi=%.1e", c1.found,
            c1.parameter, c1.energy_value, c3.found, c3.parameter, c3.energy_value, zero - std::numbers::pi);
    return c1.found && c1.energy_value < 0.0 && c3.found && c3.energy_value < 0.0 &&
           std::abs(zero - std::numbers::pi) < 1e-10;
  });

  criterion(8, "dilation scan", [&](std::string& d) {
    const auto alphas = log_spaced(1e-2, 1e2, 25);
    const auto super = cli::load_config(config("supercritical.ini"));
    const auto s = dilation_scan(super.problem(), alphas);
    const auto c = dilation_scan(cubic_instance(1), alphas);
    d = fmt("p=4 unbounded=%d (last E=%.3g); cubic unbounded=%d (last E=%.3g)", s.unbounded_below,
            s.table.back().energy, c.unbounded_below, c.table.back().energy);
    return s.unbounded_below && !c.unbounded_below;
  });

  criterion(9, "symmetrization never raises the energy", [&](std::string& d) {
    // Non-symmetric starts.
    const auto inst = cubic_instance(1);
    SolveConfig off = benchmark_solver();
    off.symmetrize_every = 3;
    off.initial_guess = InitialGuess::Given;
    std::vector<double> u(inst.grid().size());
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double r = inst.grid().centers()[j];
      u[j] = std::exp(-(r - 6.0) * (r - 6.0)) - 0.1 * std::exp(-(r - 12.0) * (r - 12.0));
    }
    off.given = FieldVector({u});
    runs.push_back(solve(inst, off));
    SolveConfig random = benchmark_solver();
    random.initial_guess = InitialGuess::RandomPositive;
    random.seed = 3;
    runs.push_back(solve(cubic_instance(2), random));

    std::size_t accepted = 0, rejected = 0, violations = 0, history_rises = 0;
    for (const auto& r : runs) {
      for (const auto& ev : r.symmetrization_events) {
        if (!ev.accepted) {
          ++rejected;
          continue;
        }
        ++accepted;
        const double scale = std::max(1.0, std::abs(ev.energy_before));
        if (ev.energy_after > ev.energy_before + 1e-12 * scale) ++violations;
      }
      for (std::size_t k = 1; k < r.energy_history.size(); ++k) {
        const double scale = std::max(1.0, std::abs(r.energy_history[k - 1]));
        if (r.energy_history[k] > r.energy_history[k - 1] + 1e-12 * scale) ++history_rises;
      }
    }
    d = fmt("%zu runs: %zu accepted and %zu rejected symmetrizations, %zu increases, %zu history increases",
            runs.size(), accepted, rejected, violations, history_rises);
    return accepted > 0 && violations == 0 && history_rises == 0;
  });

  criterion(10, "deterministic energy histories", [&](std::string& d) {
    const auto base = fs::temp_directory_path() / "cnls_acceptance_determinism";
    fs::remove_all(base);
    std::vector<std::string> histories;
    for (int run = 0; run < 2; ++run) {
      auto cfg = cli::load_config(config("family_r.ini"));
      cfg.solver.initial_guess = InitialGuess::RandomPositive;
      cli::CommandOptions opt;
      opt.out_dir = base / std::to_string(run);
      opt.seed = 17;
      opt.quiet = true;
      fs::create_directories(opt.out_dir);
      std::ostringstream log;
      cli::cmd_solve(cfg, opt, log);
      const auto j = cli::json::parse(slurp(opt.out_dir / "result.json"));
      histories.push_back(j.at("energy_history").dump());
    }
    const bool same = histories[0] == histories[1];
    d = fmt("two runs with seed 17: histories of %zu bytes, identical=%d", histories[0].size(), same);
    return same && histories[0].size() > 2;
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
