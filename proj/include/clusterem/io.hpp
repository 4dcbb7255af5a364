#pragma once
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "clusterem/foldylax.hpp"
#include "clusterem/geometry.hpp"
#include "clusterem/studies.hpp"

namespace clusterem {

using Json = nlohmann::ordered_json;

// a table cell; complex values become _re/_im columns in CSV and {"re","im"} in JSON
using Cell = std::variant<double, long long, std::string, cplx, bool>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::string kind;
    Json meta = Json::object();  // resolved inputs, echoed into every output header
    std::vector<Table> tables;
    Table plot{"plot", {"series", "x", "y"}, {}};
    bool all_ok = true;
};

enum class Format { Csv, Json };
Format parse_format(const std::string& s);

// shortest decimal that round-trips; nan/inf spelled out
std::string format_double(double v);

std::string to_csv(const Table& t, const Json& meta);
Json to_json(const Report& r);

// writes <dir>/<kind>_<table>.csv (and _plot.csv) or <dir>/<kind>.json; returns written paths
std::vector<std::filesystem::path> emit(const Report& r, Format f, const std::filesystem::path& dir);

Json scales_to_json(const ScaleSet& s);
Json domain_to_json(const DomainShape& d);
DomainShape domain_from_json(const Json& j);  // strict keys

Json cluster_to_json(const Cluster& c);
Cluster cluster_from_json(const Json& j);  // recovers the lattice when centres are aligned

Table far_field_table(const std::string& name, const FarFieldSamples& s);

Report convergence_report(const ConvergenceConfig& cfg, const ConvergenceReport& r);
Report regime_report(const RegimeMapConfig& cfg, const RegimeMapReport& r);
Report resonance_report(const ResonanceConfig& cfg, const ResonanceReport& r);
Report counting_report(const CountingConfig& cfg, const CountingReport& r);
Report spectrum_report(const SpectrumConfig& cfg, const SpectrumStudy& r);

}  // namespace clusterem
