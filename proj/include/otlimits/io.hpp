#ifndef OTLIMITS_IO_HPP
#define OTLIMITS_IO_HPP

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "otlimits/degeneracy.hpp"
#include "otlimits/dual_face.hpp"
#include "otlimits/inference.hpp"
#include "otlimits/limit_law.hpp"
#include "otlimits/measures.hpp"
#include "otlimits/ot_core.hpp"

namespace otl {

using Json = nlohmann::ordered_json;

/// Throws InvalidInput naming the first key of `object` outside `allowed`,
/// or if `object` is not a JSON object.
void require_keys(const Json& object, std::initializer_list<const char*> allowed,
                  const std::string& where);

/// {"points": [{"id": 0, "coords": [...]}, ...], "weights": [...]}
DiscreteMeasure measure_from_json(const Json& doc);
Json measure_to_json(const DiscreteMeasure& measure);

/// {"matrix": [[...], ...]}
Matrix matrix_from_json(const Json& doc);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

Json to_json(const TransportSolution& solution);
Json to_json(const FaceSummary& summary);
Json to_json(const ProjectionReport& report);
Json to_json(const SampleSummary& summary);
Json to_json(const ExperimentReport& report);

/// Shortest-round-trip-safe decimal form with 17 significant digits.
std::string csv_number(double x);
/// RFC 4180 field quoting.
std::string csv_field(const std::string& text);
/// One header row, then one row per index across equally long columns.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

}  // namespace otl

#endif  // OTLIMITS_IO_HPP
