#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnls/energy.hpp"
#include "cnls/minimize.hpp"

namespace cnls::cli {

/// Bad config file; the message starts with "<file>:<line>:" when a line is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CertificateKind { Gaussian, Potential, Dilation };

struct CertifyOptions {
  CertificateKind kind = CertificateKind::Gaussian;
  std::vector<double> alphas;
  std::vector<double> dilations;
  std::optional<double> radius;
};

struct CheckOptions {
  std::size_t samples = 20000;
  std::uint64_t seed = 1;
};

struct RunConfig {
  std::filesystem::path source;
  std::optional<ProblemInstance> instance;
  SolveConfig solver;
  CertifyOptions certify;
  CheckOptions check;
  double gn_constant = 1.0;

  const ProblemInstance& problem() const { return *instance; }
};

/// Raw `[section]` / `key = value` content with line numbers.
struct RawConfig {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::map<std::string, int> section_lines;
};

RawConfig parse_raw(const std::string& text, const std::string& origin);

/// Parses and validates a whole config; every problem is a ConfigError.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
/// As parse_config; relative paths inside the config resolve against `base`.
RunConfig parse_config_at(const std::string& text, const std::string& origin,
                          const std::filesystem::path& base);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace cnls::cli
