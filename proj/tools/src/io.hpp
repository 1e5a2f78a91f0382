#pragma once

#include <filesystem>
#include <string>

#include "cnls/certificates.hpp"
#include "cnls/hypotheses.hpp"
#include "cnls/minimize.hpp"
#include "cnls/symmetrize.hpp"
#include "json.hpp"

namespace cnls::cli {

using nlohmann::json;

/// CSV with header r,u_1,...,u_m, one row per cell, values printed with 17
/// significant digits; reading back is exact.
void write_profile_csv(const std::filesystem::path& path, const RadialGrid& grid, const FieldVector& U);
std::string profile_csv(const RadialGrid& grid, const FieldVector& U);

/// Reads a profile CSV; the r column must match the grid centres.
FieldVector read_profile_csv(const std::filesystem::path& path, const RadialGrid& grid);
FieldVector parse_profile_csv(const std::string& text, const RadialGrid& grid);

void write_json(const std::filesystem::path& path, const json& j);

json to_json(const EnergyBreakdown& b);
json to_json(const CheckOutcome& c);
json to_json(const HypothesisReport& r);
json to_json(const GroundStateReport& r);
json to_json(const SolveResult& r);
json to_json(const CertificateResult& c);
json to_json(const DilationScanResult& d);
json to_json(const RearrangementReport& r);
json to_json(const FieldVector& U);

}  // namespace cnls::cli
