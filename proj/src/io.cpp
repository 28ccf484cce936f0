#include "otlimits/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace otl {

void require_keys(const Json& object, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  if (!object.is_object()) throw InvalidInput(where + ": expected a JSON object");
  for (const auto& item : object.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw InvalidInput(where + ": unknown key '" + item.key() + "'");
  }
}

namespace {

double number_at(const Json& value, const std::string& where) {
  if (!value.is_number()) throw InvalidInput(where + ": expected a number");
  return value.get<double>();
}

const Json& member(const Json& object, const char* key, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) throw InvalidInput(where + ": missing key '" + key + "'");
  return *it;
}

}  // namespace

DiscreteMeasure measure_from_json(const Json& doc) {
  require_keys(doc, {"points", "weights"}, "measure");
  const Json& points = member(doc, "points", "measure");
  const Json& weights = member(doc, "weights", "measure");
  if (!points.is_array() || !weights.is_array()) {
    throw InvalidInput("measure: 'points' and 'weights' must be arrays");
  }
  if (points.size() != weights.size()) {
    throw InvalidInput("measure: " + std::to_string(points.size()) + " points but " +
                       std::to_string(weights.size()) + " weights");
  }
  const auto n = static_cast<Index>(points.size());
  std::vector<std::int64_t> ids;
  std::vector<std::vector<double>> coords;
  Vector w(n);
  for (Index i = 0; i < n; ++i) {
    const Json& p = points[static_cast<std::size_t>(i)];
    const std::string where = "measure point " + std::to_string(i);
    require_keys(p, {"id", "coords"}, where);
    const Json& id = member(p, "id", where);
    if (!id.is_number_integer()) throw InvalidInput(where + ": 'id' must be an integer");
    ids.push_back(id.get<std::int64_t>());
    if (const auto c = p.find("coords"); c != p.end()) {
      if (!c->is_array() || c->empty()) throw InvalidInput(where + ": 'coords' must be a non-empty array");
      std::vector<double> row;
      for (const auto& v : *c) row.push_back(number_at(v, where));
      coords.push_back(std::move(row));
    }
    w(i) = number_at(weights[static_cast<std::size_t>(i)], "measure weight");
  }
  std::optional<Matrix> coord_matrix;
  if (!coords.empty()) {
    if (static_cast<Index>(coords.size()) != n) {
      throw InvalidInput("measure: either every point or no point has coordinates");
    }
    const auto d = static_cast<Index>(coords.front().size());
    Matrix c(n, d);
    for (Index i = 0; i < n; ++i) {
      if (static_cast<Index>(coords[static_cast<std::size_t>(i)].size()) != d) {
        throw InvalidInput("measure: coordinates of different dimension");
      }
      for (Index k = 0; k < d; ++k) c(i, k) = coords[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    coord_matrix = std::move(c);
  }
  return DiscreteMeasure(std::move(ids), std::move(coord_matrix), std::move(w));
}

Json measure_to_json(const DiscreteMeasure& measure) {
  Json points = Json::array();
  for (Index i = 0; i < measure.size(); ++i) {
    Json p;
    p["id"] = measure.ids()[static_cast<std::size_t>(i)];
    if (measure.has_coords()) {
      Json c = Json::array();
      for (Index k = 0; k < measure.dimension(); ++k) c.push_back(measure.coords()(i, k));
      p["coords"] = std::move(c);
    }
    points.push_back(std::move(p));
  }
  Json weights = Json::array();
  for (Index i = 0; i < measure.size(); ++i) weights.push_back(measure.weight(i));
  return Json{{"points", std::move(points)}, {"weights", std::move(weights)}};
}

Matrix matrix_from_json(const Json& doc) {
  require_keys(doc, {"matrix"}, "cost matrix");
  const Json& rows = member(doc, "matrix", "cost matrix");
  if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty()) {
    throw InvalidInput("cost matrix: 'matrix' must be a non-empty array of rows");
  }
  const auto n = static_cast<Index>(rows.size());
  const auto m = static_cast<Index>(rows[0].size());
  Matrix out(n, m);
  for (Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != m) {
      throw InvalidInput("cost matrix: rows of different length");
    }
    for (Index j = 0; j < m; ++j) out(i, j) = number_at(row[static_cast<std::size_t>(j)], "cost matrix");
  }
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

namespace {

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

Json index_json(const std::vector<Index>& idx) {
  Json a = Json::array();
  for (Index i : idx) a.push_back(i);
  return a;
}

}  // namespace

Json to_json(const TransportSolution& solution) {
  return Json{{"value", solution.value},
              {"plan", matrix_json(solution.plan)},
              {"dual_f", vector_json(solution.dual_f)},
              {"dual_g", vector_json(solution.dual_g)}};
}

Json to_json(const FaceSummary& summary) {
  Json tight = Json::array();
  for (const auto& [i, j] : summary.tight_set) tight.push_back(Json::array({i, j}));
  return Json{{"ot_value", summary.ot_value},
              {"tight_set", std::move(tight)},
              {"n_probe_vertices", summary.n_probe_vertices},
              {"unique", summary.unique}};
}

Json to_json(const ProjectionReport& report) {
  return Json{{"projected_value", report.projected_value},
              {"ot_value", report.ot_value},
              {"is_projected", report.is_projected},
              {"gamma_set", index_json(report.gamma_set)}};
}

Json to_json(const SampleSummary& summary) {
  return Json{{"mean", summary.mean}, {"sd", summary.sd},   {"q05", summary.q05},
              {"q25", summary.q25},   {"q50", summary.q50}, {"q75", summary.q75},
              {"q95", summary.q95}};
}

Json to_json(const ExperimentReport& report) {
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    failures.push_back(Json{{"index", f.index}, {"message", f.message}});
  }
  return Json{{"mode", report.mode},
              {"n", report.n},
              {"m", report.m},
              {"reps", report.reps},
              {"seed", report.seed},
              {"population_value", report.population_value},
              {"ks_distance", report.ks_distance},
              {"limit_reference", report.limit_reference},
              {"statistic", to_json(report.quantiles)},
              {"coverage", report.coverage ? Json(*report.coverage) : Json()},
              {"limit_variance", report.limit_variance ? Json(*report.limit_variance) : Json()},
              {"failures", std::move(failures)},
              {"wall_time", report.wall_time}};
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) {
    throw std::invalid_argument("write_csv: header and column counts differ");
  }
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw std::invalid_argument("write_csv: columns of different length");
  }
  std::ostringstream out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    out << (k ? "," : "") << csv_field(header[k]);
  }
  out << "\r\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      out << (k ? "," : "") << csv_number(columns[k][r]);
    }
    out << "\r\n";
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
  file << out.str();
}

}  // namespace otl
