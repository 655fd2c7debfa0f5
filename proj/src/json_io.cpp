#include "freehardy/json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace freehardy::io {

namespace {

using Keys = std::initializer_list<const char*>;

std::string at(const std::string& path, const char* key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Every document type may carry "schemaVersion", which must be 1 when present.
void check_object(const json& j, const std::string& path, Keys required, Keys optional) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  for (const char* key : required) {
    if (!j.contains(key)) throw SchemaError(at(path, key), "missing field");
  }
  for (const auto& [key, value] : j.items()) {
    const auto known = [&](Keys keys) {
      return std::any_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; });
    };
    if (key == "schemaVersion") {
      if (!value.is_number_integer() || value.get<int>() != kSchemaVersion) {
        throw SchemaError(path + ".schemaVersion", "unsupported schema version (expected 1)");
      }
      continue;
    }
    if (!known(required) && !known(optional)) throw SchemaError(path + "." + key, "unknown field");
  }
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path, int lo) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > 1'000'000'000) throw SchemaError(path, "out of range (minimum " + std::to_string(lo) + ")");
  return static_cast<int>(v);
}

Eigen::MatrixXd real_rows(const json& j, const std::string& path) {
  array_at(j, path);
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = 0;
  for (std::size_t r = 0; r < j.size(); ++r) {
    array_at(j[r], at(path, r));
    if (r == 0) cols = static_cast<Eigen::Index>(j[r].size());
    if (static_cast<Eigen::Index>(j[r].size()) != cols) throw SchemaError(at(path, r), "ragged matrix row");
  }
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(j[r][c], at(at(path, r), c));
    }
  }
  return m;
}

Eigen::VectorXd real_vector(const json& j, const std::string& path) {
  array_at(j, path);
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], at(path, i));
  return v;
}

}  // namespace

json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SchemaError(source + ":" + std::to_string(line) + ":" + std::to_string(column), "malformed JSON");
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

void write_file_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

json to_json(const Series& f) {
  json terms = json::array();
  for (const auto& [w, c] : f.terms()) {
    json word = json::array();
    for (int letter : w.letters()) word.push_back(letter);
    terms.push_back(json{{"word", word}, {"re", c.real()}, {"im", c.imag()}});
  }
  return json{{"d", f.alphabet()}, {"maxDegree", f.max_degree()}, {"terms", terms}};
}

Series series_from_json(const json& j, const std::string& path) {
  check_object(j, path, {"d", "terms"}, {"maxDegree"});
  const int d = integer(j["d"], at(path, "d"), 1);
  Series f(d);
  const std::string tpath = at(path, "terms");
  const json& terms = array_at(j["terms"], tpath);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string p = at(tpath, i);
    check_object(terms[i], p, {"word", "re"}, {"im"});
    const json& jw = array_at(terms[i]["word"], at(p, "word"));
    std::vector<int> letters;
    for (std::size_t k = 0; k < jw.size(); ++k) {
      const int letter = integer(jw[k], at(at(p, "word"), k), 1);
      if (letter > d) throw SchemaError(at(at(p, "word"), k), "letter exceeds alphabet size " + std::to_string(d));
      letters.push_back(letter);
    }
    const double re = number(terms[i]["re"], at(p, "re"));
    const double im = terms[i].contains("im") ? number(terms[i]["im"], at(p, "im")) : 0.0;
    const Word w(d, std::move(letters));
    if (f.coeff(w) != cplx{}) throw SchemaError(p, "duplicate word " + w.to_string());
    f.set(w, {re, im});
  }
  if (j.contains("maxDegree")) {
    const int n = integer(j["maxDegree"], at(path, "maxDegree"), 0);
    if (n < f.degree()) throw SchemaError(at(path, "maxDegree"), "smaller than the degree of the terms");
    f.set_max_degree(n);
  }
  return f;
}

json to_json(const Eigen::MatrixXcd& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return json{{"re", re}, {"im", im}};
}

Eigen::MatrixXcd matrix_from_json(const json& j, const std::string& path) {
  check_object(j, path, {"re"}, {"im"});
  const Eigen::MatrixXd re = real_rows(j["re"], at(path, "re"));
  Eigen::MatrixXcd m = re.cast<cplx>();
  if (j.contains("im")) {
    const Eigen::MatrixXd im = real_rows(j["im"], at(path, "im"));
    if (im.rows() != re.rows() || im.cols() != re.cols()) throw SchemaError(at(path, "im"), "shape differs from re");
    m.imag() = im;
  }
  return m;
}

json vector_to_json(const Eigen::VectorXcd& v) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"re", re}, {"im", im}};
}

Eigen::VectorXcd vector_from_json(const json& j, const std::string& path) {
  check_object(j, path, {"re"}, {"im"});
  const Eigen::VectorXd re = real_vector(j["re"], at(path, "re"));
  Eigen::VectorXcd v = re.cast<cplx>();
  if (j.contains("im")) {
    const Eigen::VectorXd im = real_vector(j["im"], at(path, "im"));
    if (im.size() != re.size()) throw SchemaError(at(path, "im"), "length differs from re");
    v.imag() = im;
  }
  return v;
}

json to_json(const MatrixPoint& z) {
  json mats = json::array();
  for (const auto& m : z.mats) mats.push_back(to_json(m));
  return json{{"d", z.d}, {"n", z.n}, {"mats", mats}};
}

MatrixPoint point_from_json(const json& j, const std::string& path) {
  check_object(j, path, {"d", "n", "mats"}, {});
  const int d = integer(j["d"], at(path, "d"), 1);
  const int n = integer(j["n"], at(path, "n"), 1);
  const std::string mpath = at(path, "mats");
  const json& mats = array_at(j["mats"], mpath);
  if (static_cast<int>(mats.size()) != d) {
    throw SchemaError(mpath, "expected " + std::to_string(d) + " matrices, got " + std::to_string(mats.size()));
  }
  std::vector<Eigen::MatrixXcd> out;
  for (std::size_t k = 0; k < mats.size(); ++k) {
    out.push_back(matrix_from_json(mats[k], at(mpath, k)));
    if (out.back().rows() != n || out.back().cols() != n) {
      throw SchemaError(at(mpath, k), "expected a " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
    }
  }
  return MatrixPoint(std::move(out));
}

json points_to_json(const std::vector<MatrixPoint>& points, int d) {
  json list = json::array();
  for (const auto& z : points) list.push_back(to_json(z));
  return json{{"d", d}, {"points", list}};
}

std::vector<MatrixPoint> points_from_json(const json& j, const std::string& path) {
  check_object(j, path, {"d", "points"}, {});
  const int d = integer(j["d"], at(path, "d"), 1);
  const std::string ppath = at(path, "points");
  const json& list = array_at(j["points"], ppath);
  std::vector<MatrixPoint> points;
  for (std::size_t k = 0; k < list.size(); ++k) {
    points.push_back(point_from_json(list[k], at(ppath, k)));
    if (points.back().d != d) throw SchemaError(at(at(ppath, k), "d"), "alphabet mismatch with d = " + std::to_string(d));
  }
  return points;
}

json to_json(const std::vector<PickDatum>& data, int d) {
  json list = json::array();
  for (const auto& datum : data) list.push_back(json{{"Z", to_json(datum.z)}, {"W", to_json(datum.w)}});
  return json{{"d", d}, {"data", list}};
}

std::vector<PickDatum> pick_data_from_json(const json& j, const std::string& path) {
  check_object(j, path, {"d", "data"}, {});
  const int d = integer(j["d"], at(path, "d"), 1);
  const std::string dpath = at(path, "data");
  const json& list = array_at(j["data"], dpath);
  std::vector<PickDatum> data;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string p = at(dpath, k);
    check_object(list[k], p, {"Z", "W"}, {});
    MatrixPoint z = point_from_json(list[k]["Z"], at(p, "Z"));
    if (z.d != d) throw SchemaError(at(at(p, "Z"), "d"), "alphabet mismatch with d = " + std::to_string(d));
    Eigen::MatrixXcd w = matrix_from_json(list[k]["W"], at(p, "W"));
    if (w.rows() != z.n || w.cols() != z.n) {
      throw SchemaError(at(p, "W"), "size mismatch: expected " + std::to_string(z.n) + " x " + std::to_string(z.n));
    }
    data.emplace_back(std::move(z), std::move(w));
  }
  return data;
}

json to_json(const MultiplicationOperator& t) {
  if (!t.rational) return to_json(t.numerator);
  return json{{"den", to_json(t.denominator)}, {"num", to_json(t.numerator)}};
}

MultiplicationOperator operator_from_json(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("den")) {
    check_object(j, path, {"den", "num"}, {});
    Series den = series_from_json(j["den"], at(path, "den"));
    Series num = series_from_json(j["num"], at(path, "num"));
    if (den.alphabet() != num.alphabet()) throw SchemaError(at(path, "num.d"), "alphabet mismatch with den");
    if (den.coeff(Word(den.alphabet())) == cplx{}) throw SchemaError(at(path, "den"), "constant term must be non-zero");
    return MultiplicationOperator::rational_symbol(std::move(den), std::move(num));
  }
  return MultiplicationOperator::polynomial(series_from_json(j, path));
}

json to_json(const InnerOuterPair& p) {
  return json{{"N", p.degree},
              {"workDegree", p.work_degree},
              {"a", to_json(p.a)},
              {"b", to_json(p.b)},
              {"normalizer", p.normalizer},
              {"residuals",
               {{"wandering", p.wandering_residual},
                {"columnNorm", p.column_norm_residual},
                {"normalEq", p.normal_residual}}}};
}

InnerOuterPair pair_from_json(const json& j, const std::string& path) {
  check_object(j, path, {"N", "a", "b", "normalizer", "residuals"}, {"workDegree"});
  InnerOuterPair p{Series(1), Series(1)};
  p.degree = integer(j["N"], at(path, "N"), 0);
  p.work_degree = j.contains("workDegree") ? integer(j["workDegree"], at(path, "workDegree"), 0) : p.degree;
  p.a = series_from_json(j["a"], at(path, "a"));
  p.b = series_from_json(j["b"], at(path, "b"));
  if (p.a.alphabet() != p.b.alphabet()) throw SchemaError(at(path, "b.d"), "alphabet mismatch with a");
  p.normalizer = number(j["normalizer"], at(path, "normalizer"));
  const std::string rpath = at(path, "residuals");
  const json& r = j["residuals"];
  check_object(r, rpath, {"wandering", "columnNorm", "normalEq"}, {});
  p.wandering_residual = number(r["wandering"], at(rpath, "wandering"));
  p.column_norm_residual = number(r["columnNorm"], at(rpath, "columnNorm"));
  p.normal_residual = number(r["normalEq"], at(rpath, "normalEq"));
  return p;
}

json to_json(const GramMatrix& g) {
  json index = json::array();
  for (const auto& [k, a, b] : g.index) index.push_back(json::array({k, a, b}));
  return json{{"index", index}, {"entries", to_json(g.entries)}};
}

LeechData leech_data_from_json(const json& j, const std::string& path) {
  check_object(j, path, {"d", "points", "A", "B"}, {});
  LeechData data;
  data.points = points_from_json(json{{"d", j["d"]}, {"points", j["points"]}}, path);
  const int d = j["d"].get<int>();
  const auto values = [&](const char* key) {
    const std::string p = at(path, key);
    std::vector<Eigen::MatrixXcd> out;
    if (j[key].is_object()) {
      const Series f = series_from_json(j[key], p);
      if (f.alphabet() != d) throw SchemaError(at(p, "d"), "alphabet mismatch with d = " + std::to_string(d));
      for (const auto& z : data.points) out.push_back(eval(f, z));
      return out;
    }
    const json& list = array_at(j[key], p);
    if (list.size() != data.points.size()) {
      throw SchemaError(p, "size mismatch: " + std::to_string(list.size()) + " values for " +
                               std::to_string(data.points.size()) + " points");
    }
    for (std::size_t k = 0; k < list.size(); ++k) {
      out.push_back(matrix_from_json(list[k], at(p, k)));
      const int n = data.points[k].n;
      if (out.back().rows() != n || out.back().cols() != n) {
        throw SchemaError(at(p, k), "size mismatch: expected " + std::to_string(n) + " x " + std::to_string(n));
      }
    }
    return out;
  };
  data.a = values("A");
  data.b = values("B");
  return data;
}

}  // namespace freehardy::io
