#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlb/energy_monitor.hpp"
#include "nlb/estimate_verifier.hpp"
#include "nlb/experiments.hpp"

namespace nlb {

using json = nlohmann::json;

// Library version, with the git description of the source tree when available.
std::string version_string();

// Field snapshot: header "k,re,im", one line per mode k = -K/2 .. K/2-1.
void write_field_csv(const std::filesystem::path& path, const SpectralField& f);
// Reads a snapshot; K is the number of rows.  Throws FormatError on malformed
// lines, missing or duplicated modes, or a Hermitian defect above tol.
SpectralField read_field_csv(const std::filesystem::path& path, double L = 2.0 * 3.141592653589793,
                             double tol = 1e-10);

// Plot-ready CSV: header line then one row per index.
void write_series_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns);
// Same with preformatted cells (mixed text and numbers).
void write_rows_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

// Throws ConfigError naming the first key of j not in allowed.
void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where);

// {"kind": "fkdv", "alpha": 0.5} / {"kind": "whitham", "tau": 1} / {"kind": "ilw", "delta": 1} /
// {"kind": "smith"}; every kind accepts "xi0".
DispersiveSymbol symbol_from_json(const json& j);
json symbol_to_json(const DispersiveSymbol& sym);

json to_json(const BoundReport& r);
json to_json(const EnergyBreakdown& e);
json to_json(const CoercivityResult& r);
json to_json(const TruncationTable& t);
json to_json(const LipschitzTable& t);
json to_json(const ConservationRow& r);
json to_json(const EnergyStudyRow& r);
json to_json(const CoercivityStudy& s);

}  // namespace nlb
