#pragma once
#include <string>
#include <vector>

#include "clusterem/io.hpp"
#include "clusterem/studies.hpp"

namespace clusterem {

struct FoldylaxConfig {
    DomainShape domain;
    ScaleInputs scales;
    WaveSpec wave;
    int direction_level = 1;
};

struct LseConfig {
    DomainShape domain;
    ScaleInputs scales;
    WaveSpec wave;
    int grid_n = 0;
    int direction_level = 1;
};

Json read_json_file(const std::string& path);
// key.path=value; value parsed as JSON when possible, else taken as a string
void apply_override(Json& j, const std::string& assignment);

FoldylaxConfig parse_foldylax(const Json& j);
LseConfig parse_lse(const Json& j);
ConvergenceConfig parse_convergence(const Json& j);
RegimeMapConfig parse_regime_map(const Json& j);
ResonanceConfig parse_resonance(const Json& j);
CountingConfig parse_counting(const Json& j);
SpectrumConfig parse_spectrum(const Json& j);

Json to_json(const FoldylaxConfig& c);
Json to_json(const LseConfig& c);
Json to_json(const ConvergenceConfig& c);
Json to_json(const RegimeMapConfig& c);
Json to_json(const ResonanceConfig& c);
Json to_json(const CountingConfig& c);
Json to_json(const SpectrumConfig& c);

}  // namespace clusterem
