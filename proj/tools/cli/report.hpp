#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "atollpr/alignment.hpp"
#include "atollpr/atoll.hpp"
#include "atollpr/constants.hpp"
#include "atollpr/grid.hpp"
#include "atollpr/retrieval.hpp"

namespace atollpr::cli {

using json = nlohmann::json;

json to_json(cd z);
json to_json(const Lattice& lat);
json to_json(const ParamDomain& d);
json to_json(const StabilityCertificate& c);
json to_json(const PhaseAlignmentReport& r);
json to_json(const PhaseDiagnosis& d);
// Writes one TFG mask per D, D_plus and lagoon under `dir` with `stem`
// prefixes and returns the decomposition JSON referencing them.
json write_decomposition(const AtollDecomposition& dec, const std::filesystem::path& dir, const std::string& stem);

void write_json(const std::filesystem::path& path, const json& j);

}  // namespace atollpr::cli
