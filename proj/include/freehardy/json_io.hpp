#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "freehardy/graph.hpp"
#include "freehardy/nceval.hpp"
#include "freehardy/pick.hpp"
#include "freehardy/series.hpp"

namespace freehardy::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Input that does not match a schema. `path` names the offending field,
/// e.g. "$.terms[2].word".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Parses text, reporting syntax errors with line and column.
json parse_text(const std::string& text, const std::string& source = "<input>");
json read_file(const std::string& path);
/// Writes via a temporary file in the same directory and a rename.
void write_file_atomic(const std::string& path, const std::string& text);

// Series: {"d": 2, "maxDegree": 3, "terms": [{"word": [1, 2], "re": 0.5, "im": 0}]}
json to_json(const Series& f);
Series series_from_json(const json& j, const std::string& path = "$");

// Complex matrix: {"re": [[...]], "im": [[...]]}, row-major. "im" may be omitted.
json to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const json& j, const std::string& path = "$");

// Complex vector: {"re": [...], "im": [...]}.
json vector_to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd vector_from_json(const json& j, const std::string& path = "$");

// MatrixPoint: {"d": 2, "n": 2, "mats": [matrix, ...]}.
json to_json(const MatrixPoint& z);
MatrixPoint point_from_json(const json& j, const std::string& path = "$");

// Point list: {"d": 2, "points": [MatrixPoint, ...]}.
json points_to_json(const std::vector<MatrixPoint>& points, int d);
std::vector<MatrixPoint> points_from_json(const json& j, const std::string& path = "$");

// {"d": 2, "data": [{"Z": MatrixPoint, "W": matrix}, ...]}
json to_json(const std::vector<PickDatum>& data, int d);
std::vector<PickDatum> pick_data_from_json(const json& j, const std::string& path = "$");

// Symbol: a series (polynomial) or {"den": series, "num": series}.
json to_json(const MultiplicationOperator& t);
MultiplicationOperator operator_from_json(const json& j, const std::string& path = "$");

// {"N", "workDegree", "a", "b", "normalizer", "residuals": {"wandering", "columnNorm", "normalEq"}}
json to_json(const InnerOuterPair& p);
InnerOuterPair pair_from_json(const json& j, const std::string& path = "$");

json to_json(const GramMatrix& g);

/// Leech data: {"d", "points": [MatrixPoint, ...], "A": values, "B": values}
/// where values is a list of matrices (one per point) or a series evaluated
/// at the points.
struct LeechData {
  std::vector<MatrixPoint> points;
  std::vector<Eigen::MatrixXcd> a;
  std::vector<Eigen::MatrixXcd> b;
};
LeechData leech_data_from_json(const json& j, const std::string& path = "$");

}  // namespace freehardy::io
