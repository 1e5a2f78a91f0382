#include "commands.hpp"

#include <ostream>

#include "cnls/errors.hpp"
#include "io.hpp"

namespace cnls::cli {

namespace {

void prepare(const CommandOptions& options) { std::filesystem::create_directories(options.out_dir); }

std::vector<double> default_gaussian_alphas() { return log_spaced(1e-3, 1.0, 40); }
std::vector<double> default_dilation_alphas() { return log_spaced(1e-2, 1e4, 25); }

}  // namespace

int cmd_solve(RunConfig config, const CommandOptions& options, std::ostream& log) {
  prepare(options);
  if (options.seed) config.solver.seed = *options.seed;
  const auto& inst = config.problem();

  SolveResult result;
  try {
    result = solve(inst, config.solver);
  } catch (const DivergenceError& err) {
    const auto dump = options.out_dir / "divergent_iterate.csv";
    write_profile_csv(dump, inst.grid(), err.iterate());
    throw NumericError(std::string(err.what()) + "; iterate written to " + dump.string());
  }
  const auto report = verify_ground_state(inst, result);

  json j = to_json(result);
  j["command"] = "solve";
  j["seed"] = config.solver.seed;
  j["checks"] = to_json(report);
  write_json(options.out_dir / "result.json", j);
  write_profile_csv(options.out_dir / "profile.csv", inst.grid(), result.U);

  if (!options.quiet) {
    log << "energy " << result.breakdown.total << " after " << result.iterations << " iterations";
    for (std::size_t i = 0; i < result.lambda.size(); ++i) log << ", lambda_" << i + 1 << ' ' << result.lambda[i];
    log << '\n';
  }
  if (result.converged) return kSuccess;
  log << "not converged: " << result.diagnostic << " (" << result.message << ")\n";
  return result.diagnostic == "non-attainment" ? kNonAttainment : kError;
}

int cmd_certify(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  prepare(options);
  const auto& inst = config.problem();
  const auto& c = config.certify;
  json j;
  bool positive = false;
  switch (c.kind) {
    case CertificateKind::Gaussian: {
      if (!inst.spec().lower_bound() && !inst.spec().is_zero()) {
        throw PreconditionError("gaussian certificate needs lower-bound data (g5_* keys in [nonlinearity])");
      }
      const auto alphas = c.alphas.empty() ? default_gaussian_alphas() : c.alphas;
      const auto cert = gaussian_certificate(inst, alphas);
      j = to_json(cert);
      write_profile_csv(options.out_dir / "witness.csv", inst.grid(), cert.witness);
      positive = cert.found;
      if (!options.quiet) log << "gaussian: best alpha " << cert.parameter << ", energy " << cert.energy_value << '\n';
      break;
    }
    case CertificateKind::Potential: {
      if (!inst.potential()) throw PreconditionError("potential certificate needs a [potential] section");
      PotentialCertificateParams params{c.alphas, c.dilations, c.radius};
      const auto cert = potential_certificate(inst, params);
      j = to_json(cert);
      write_profile_csv(options.out_dir / "witness.csv", inst.grid(), cert.witness);
      positive = cert.found;
      if (!options.quiet) {
        log << cert.kind << ": best " << cert.parameter_name << ' ' << cert.parameter << ", form "
            << cert.energy_value << '\n';
      }
      break;
    }
    case CertificateKind::Dilation: {
      const auto alphas = c.alphas.empty() ? default_dilation_alphas() : c.alphas;
      const auto scan = dilation_scan(inst, alphas);
      j = to_json(scan);
      positive = scan.unbounded_below;
      if (!options.quiet) log << "dilation: unbounded_below = " << std::boolalpha << scan.unbounded_below << '\n';
      break;
    }
  }
  j["command"] = "certify";
  write_json(options.out_dir / "certificate.json", j);
  return positive ? kSuccess : kNegative;
}

int cmd_check(RunConfig config, const CommandOptions& options, std::ostream& log) {
  prepare(options);
  if (options.seed) config.check.seed = *options.seed;
  const auto& inst = config.problem();
  const int dim = inst.grid().dimension();
  const auto report = check_hypotheses(inst.spec(), dim, config.check.samples, config.check.seed);
  bool ok = report.all_hold();

  json j = to_json(report);
  j["command"] = "check";
  j["seed"] = config.check.seed;
  j["samples"] = config.check.samples;
  if (inst.potential()) {
    json pj = json::array();
    for (const auto& c : check_potential(*inst.potential(), dim)) {
      ok = ok && c.holds;
      pj.push_back(to_json(c));
    }
    j["potential"] = pj;
  }
  try {
    j["coercivity_bound"] = coercivity_bound(inst, config.gn_constant);
  } catch (const PreconditionError& err) {
    j["coercivity_bound"] = nullptr;
    j["coercivity_note"] = err.what();
  }
  j["all_hold"] = ok;
  write_json(options.out_dir / "hypotheses.json", j);

  if (!options.quiet) {
    for (const auto& c : report.checks) log << c.name << ' ' << (c.holds ? "holds" : "FAILS") << '\n';
    if (j.contains("potential")) {
      for (const auto& c : j["potential"]) log << c["name"].get<std::string>() << ' ' << (c["holds"].get<bool>() ? "holds" : "FAILS") << '\n';
    }
  }
  return ok ? kSuccess : kNegative;
}

int cmd_rearrange(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  prepare(options);
  const auto& inst = config.problem();
  if (options.input.empty()) throw PreconditionError("rearrange needs an input profile (--input)");
  const auto U = read_profile_csv(options.input, inst.grid());
  if (U.components() != inst.components()) {
    throw StructuralError("input has " + std::to_string(U.components()) + " components, config declares " +
                          std::to_string(inst.components()));
  }
  const auto abs_u = absolute(U);
  const auto star = rearrange_vector(inst.grid(), abs_u);
  const auto report = verify_inequalities(inst.grid(), abs_u, &inst.spec());
  write_profile_csv(options.out_dir / "rearranged.csv", inst.grid(), star);
  json j = to_json(report);
  j["command"] = "rearrange";
  write_json(options.out_dir / "rearrangement.json", j);
  if (!options.quiet) {
    log << "l2 " << report.l2_before << " -> " << report.l2_after << ", dirichlet " << report.dirichlet_before
        << " -> " << report.dirichlet_after << '\n';
  }
  return kSuccess;
}

}  // namespace cnls::cli
