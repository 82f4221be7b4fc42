#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "heatlab/classifier.hpp"
#include "heatlab/heat_solver.hpp"
#include "heatlab/initial_data.hpp"
#include "heatlab/monitor.hpp"
#include "heatlab/nonlinearity.hpp"

namespace heatlab {

using Json = nlohmann::ordered_json;

/// Finite numbers pass through, everything else becomes null.
Json number(double x);

/// Member `key` of `j`; a missing key raises SpecError naming `context.key`.
const Json& require(const Json& j, const std::string& key, const std::string& context);
double require_number(const Json& j, const std::string& key, const std::string& context);
int require_int(const Json& j, const std::string& key, const std::string& context);

/// {"kind": "Power", "params": {"p": 3}}; kinds Power, LogPerturbedPower, FBeta, ExpPower, ExpLogPower,
/// Example3, IteratedExp, LogCorrectedCritical, Tabulated.
Nonlinearity nonlinearity_from_json(const Json& j);
Json to_json(const Nonlinearity& f);

/// {"kind": "FNegPower", "params": {"r": 2}}; F-based kinds use the supplied nonlinearity.
Monitor monitor_from_json(const Json& j, const std::optional<Nonlinearity>& f);

/// {"kind": "Counterexample", "params": {...}} for dimension N.
RadialProfile profile_from_json(const Json& j, int N, const std::optional<Nonlinearity>& f = std::nullopt);

/// {"R": 6, "h": 0.02, "r_min": 1e-6, "grading": 1.2}, missing keys keep defaults.
GridSpec grid_from_json(const Json& j);
/// "R=6,h=0.02,r_min=1e-6,grading=1.2"
GridSpec grid_from_string(const std::string& s, GridSpec base = {});

Json to_json(const LimitEstimate& e);
Json to_json(const ClassificationOutcome& c);
Json to_json(const ExponentProfile& p);
Json to_json(const ULNormEstimate& u);
Json to_json(const ClosureHeuristic& c);
Json to_json(const SingularIntegral& s);
Json to_json(const IterationTrace& t);
Json to_json(const SupersolutionCheck& s);
Json to_json(const BlowupFunctional& b, std::size_t max_points = 200);
Json to_json(const ContradictionSides& s);
Json to_json(const SmoothingFit& s);

/// FNV-1a over the compact dump.
std::uint64_t fnv1a(const std::string& s);
std::string manifest_hash(const Json& manifest);

void write_json(const std::string& path, const Json& j);
void write_csv(const std::string& path, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

}  // namespace heatlab
