#include "freehardy/cli.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "freehardy/graph.hpp"
#include "freehardy/json_io.hpp"
#include "freehardy/nceval.hpp"
#include "freehardy/pick.hpp"
#include "freehardy/sampling.hpp"

namespace freehardy::cli {

namespace {

using io::json;

struct Config {
  std::optional<int> degree;
  std::optional<double> tol;
  std::uint64_t seed = kDefaultSeed;
  double r = kDefaultNilpotentScale;
  std::string out;
  std::string method;
  std::string side = "left";

  std::string series;
  std::string point;
  std::string w_point;
  std::string p_matrix;
  std::string y;
  std::string v;
  std::string word;
  std::string data;
  std::string points;
  std::string f;
  std::string a;
  std::string b;

  int d = 2;
  int count = 5;
  int max_level = 3;
  double max_radius = 0.7;
  bool include_nilpotent = false;
  int margin = 4;
};

struct Outcome {
  json body = json::object();
  int code = kOk;
};

class InputError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string("missing required option ") + flag);
}

json complex_json(cplx c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

std::vector<MatrixPoint> points_or_sample(const Config& cfg, int d) {
  if (!cfg.points.empty()) {
    auto pts = io::points_from_json(io::read_file(cfg.points));
    for (const auto& z : pts) {
      if (z.d != d) throw InputError("alphabet mismatch: points have d = " + std::to_string(z.d) +
                                     ", series has d = " + std::to_string(d));
    }
    return pts;
  }
  SampleOptions opts;
  opts.seed = cfg.seed;
  opts.max_level = cfg.max_level;
  opts.max_radius = cfg.max_radius;
  opts.include_nilpotent = cfg.include_nilpotent;
  return sample_points(d, cfg.count, opts);
}

Side parse_side(const std::string& s) { return s == "right" ? Side::Right : Side::Left; }

SolveOptions solve_options(const Config& cfg) {
  SolveOptions opts;
  if (cfg.method == "cholesky") opts.solver = LinearSolver::Cholesky;
  if (cfg.method == "cg") opts.solver = LinearSolver::ConjugateGradient;
  return opts;
}

void check_alphabet(int expected, int got, const char* what) {
  if (expected != got) {
    throw InputError(std::string("alphabet mismatch: ") + what + " has d = " + std::to_string(got) + ", expected " +
                     std::to_string(expected));
  }
}

json psd_json(const PsdVerdict& v) {
  return json{{"feasible", v.feasible},
              {"minEig", v.min_eig},
              {"dim", v.dim},
              {"norm", v.norm},
              {"residuals", {{"hermiticity", v.hermiticity}}}};
}

Outcome cmd_eval(const Config& cfg) {
  require(cfg.series, "--series");
  require(cfg.point, "--point");
  const Series f = io::series_from_json(io::read_file(cfg.series));
  const MatrixPoint z = io::point_from_json(io::read_file(cfg.point));
  check_alphabet(f.alphabet(), z.d, "point");
  Outcome o;
  o.body["value"] = io::to_json(eval(f, z));
  o.body["rowNorm"] = row_norm(z);
  o.body["insideBall"] = inside_ball(z);
  o.body["residuals"] = {{"tailBound", 0.0}};
  return o;
}

Outcome cmd_szego(const Config& cfg) {
  require(cfg.point, "--point");
  const MatrixPoint z = io::point_from_json(io::read_file(cfg.point));
  const MatrixPoint w = cfg.w_point.empty() ? z : io::point_from_json(io::read_file(cfg.w_point));
  check_alphabet(z.d, w.d, "second point");
  Eigen::MatrixXcd p;
  if (cfg.p_matrix.empty()) {
    if (z.n != w.n) throw InputError("--p is required when the points have different levels");
    p = Eigen::MatrixXcd::Identity(z.n, z.n);
  } else {
    p = io::matrix_from_json(io::read_file(cfg.p_matrix));
    if (p.rows() != z.n || p.cols() != w.n) {
      throw InputError("size mismatch: P must be " + std::to_string(z.n) + " x " + std::to_string(w.n));
    }
  }
  const bool truncated = cfg.method == "truncated";
  Outcome o;
  const Eigen::MatrixXcd k = szego_apply(z, w, p);
  json residuals = {{"fixedPoint", szego_residual(z, w, p, k)}};
  if (truncated) {
    const int n = cfg.degree.value_or(14);
    const Eigen::MatrixXcd kt = szego_truncated(z, w, p, n);
    const double rho = row_norm(z) * row_norm(w);
    o.body["value"] = io::to_json(kt);
    residuals["tailBound"] = p.operatorNorm() * std::pow(rho, n + 1) / (1.0 - rho);
    residuals["closedDifference"] = (kt - k).norm();
  } else {
    o.body["value"] = io::to_json(k);
  }
  o.body["residuals"] = residuals;
  return o;
}

Outcome cmd_kernel_vector(const Config& cfg) {
  require(cfg.point, "--point");
  require(cfg.y, "--y");
  require(cfg.v, "--v");
  const MatrixPoint z = io::point_from_json(io::read_file(cfg.point));
  const Eigen::VectorXcd y = io::vector_from_json(io::read_file(cfg.y));
  const Eigen::VectorXcd v = io::vector_from_json(io::read_file(cfg.v));
  if (y.size() != z.n || v.size() != z.n) throw InputError("size mismatch: y and v must have length " + std::to_string(z.n));
  if (!inside_ball(z)) throw InputError("point outside open NC ball");
  const int n = cfg.degree.value_or(8);
  Outcome o;
  o.body["series"] = io::to_json(kernel_vector(KernelVectorSpec(z, y, v), n));
  o.body["residuals"] = {{"tailBound", tail_bound(y.norm() * v.norm(), row_norm(z), n)}};
  return o;
}

Outcome cmd_word_point(const Config& cfg) {
  if (!(cfg.r > 0.0 && cfg.r < 1.0)) throw InputError("--r must lie in (0, 1)");
  Series target(cfg.d);
  std::optional<KernelVectorSpec> spec;
  if (!cfg.series.empty()) {
    target = io::series_from_json(io::read_file(cfg.series));
    spec = poly_point(target, cfg.r);
  } else {
    std::vector<int> letters;
    std::stringstream ss(cfg.word);
    for (std::string tok; std::getline(ss, tok, ',');) {
      if (tok.empty()) continue;
      const int letter = std::stoi(tok);
      if (letter < 1 || letter > cfg.d) throw InputError("letter " + tok + " outside alphabet 1.." + std::to_string(cfg.d));
      letters.push_back(letter);
    }
    const Word w(cfg.d, std::move(letters));
    target = Series::basis(w);
    spec = word_point(w, cfg.r);
  }
  const Series k = kernel_vector(*spec, std::max(target.degree(), 0));
  Outcome o;
  o.body["point"] = io::to_json(spec->z);
  o.body["y"] = io::vector_to_json(spec->y);
  o.body["v"] = io::vector_to_json(spec->v);
  o.body["residuals"] = {{"reproduction", sup_distance(k, target)}};
  return o;
}

Outcome cmd_factor(const Config& cfg) {
  require(cfg.series, "--series");
  const MultiplicationOperator t = io::operator_from_json(io::read_file(cfg.series));
  InnerOuterOptions opts;
  opts.margin = cfg.margin;
  opts.solve = solve_options(cfg);
  const InnerOuterPair pair = inner_outer(t, cfg.degree.value_or(10), opts);
  const double tol = cfg.tol.value_or(1e-6);
  Outcome o;
  o.body = io::to_json(pair);
  const bool pass = pair.wandering_residual <= tol;
  o.body["status"] = pass ? "PASS" : "FAIL";
  o.code = pass ? kOk : kFail;
  return o;
}

Outcome cmd_wandering(const Config& cfg) {
  require(cfg.series, "--series");
  const MultiplicationOperator t = io::operator_from_json(io::read_file(cfg.series));
  const int n = cfg.degree.value_or(8);
  const WanderingSpace ws = wandering_space(t, n, cfg.tol.value_or(1e-6), solve_options(cfg));
  Outcome o;
  o.body["N"] = n;
  o.body["dim"] = ws.dim;
  o.body["singularValues"] = ws.singular_values;
  json basis = json::array();
  double worst = 0.0;
  for (const auto& col : ws.basis) {
    basis.push_back(json{{"a", io::to_json(col.top)}, {"b", io::to_json(col.bottom)}});
    worst = std::max(worst, wandering_residual(col, n - t.degree()));
  }
  o.body["basis"] = basis;
  o.body["residuals"] = {{"wandering", worst}};
  o.code = ws.dim == 1 ? kOk : kFail;
  return o;
}

Outcome cmd_local_check(const Config& cfg) {
  require(cfg.series, "--series");
  const MultiplicationOperator t = io::operator_from_json(io::read_file(cfg.series));
  const LocalityReport rep = is_local(t, cfg.degree.value_or(8), cfg.tol.value_or(1e-8));
  Outcome o;
  o.body["local"] = rep.local;
  o.body["checked"] = rep.checked;
  o.body["residuals"] = {{"locality", rep.max_residual}};
  o.code = rep.local ? kOk : kFail;
  return o;
}

Outcome cmd_outer_check(const Config& cfg) {
  require(cfg.series, "--series");
  const Series a = io::series_from_json(io::read_file(cfg.series));
  const std::vector<MatrixPoint> pts = points_or_sample(cfg, a.alphabet());
  const OuterDiagnostics diag = is_outer(a, cfg.degree.value_or(8), pts);
  Outcome o;
  o.body["constantTerm"] = complex_json(diag.constant_term);
  o.body["minSingularAtPoints"] = diag.min_singular ? json(*diag.min_singular) : json(nullptr);
  o.body["rangeDensityProxy"] = diag.range_distance;
  o.body["samplePoints"] = pts.size();
  o.body["residuals"] = {{"rangeDistance", diag.range_distance}};
  return o;
}

Outcome cmd_diverge(const Config& cfg) {
  require(cfg.series, "--series");
  const MultiplicationOperator h = io::operator_from_json(io::read_file(cfg.series));
  const Series f = cfg.f.empty() ? Series::constant(h.alphabet(), 1.0) : io::series_from_json(io::read_file(cfg.f));
  check_alphabet(h.alphabet(), f.alphabet(), "f");
  const DivergenceReport rep = divergence_witness(h, f, cfg.degree.value_or(40));
  Outcome o;
  o.body["degrees"] = rep.degrees;
  o.body["leftNorms"] = rep.left_norms;
  o.body["rightNorms"] = rep.right_norms;
  o.body["residuals"] = {{"leftGrowth", rep.left_norms.back() - rep.left_norms.front()},
                         {"rightGrowth", rep.right_norms.back() - rep.right_norms.front()}};
  return o;
}

Outcome cmd_pick(const Config& cfg) {
  require(cfg.data, "--data");
  const std::vector<PickDatum> data = io::pick_data_from_json(io::read_file(cfg.data));
  Outcome o;
  const PsdVerdict v = pick_check(data, parse_side(cfg.side), cfg.tol.value_or(kDefaultPsdTol));
  o.body = psd_json(v);
  o.code = v.feasible ? kOk : kFail;
  return o;
}

Outcome cmd_leech(const Config& cfg) {
  require(cfg.data, "--data");
  const io::LeechData data = io::leech_data_from_json(io::read_file(cfg.data));
  Outcome o;
  const PsdVerdict v = leech_check(data.points, data.a, data.b, parse_side(cfg.side), cfg.tol.value_or(kDefaultPsdTol));
  o.body = psd_json(v);
  o.code = v.feasible ? kOk : kFail;
  return o;
}

Outcome cmd_member(const Config& cfg) {
  require(cfg.series, "--series");
  const Series f = io::series_from_json(io::read_file(cfg.series));
  const std::vector<MatrixPoint> pts = points_or_sample(cfg, f.alphabet());
  const MembershipReport rep = membership_lambda(f, pts);
  Outcome o;
  o.body["lambda"] = rep.lambda;
  o.body["norm"] = f.norm();
  o.body["samplePoints"] = pts.size();
  o.body["residuals"] = {{"condition", rep.condition}, {"shift", rep.shift}};
  return o;
}

Outcome cmd_smirnov_check(const Config& cfg) {
  require(cfg.series, "--series");
  require(cfg.a, "--a");
  require(cfg.b, "--b");
  const MultiplicationOperator f = io::operator_from_json(io::read_file(cfg.series));
  const Series a = io::series_from_json(io::read_file(cfg.a));
  const Series b = io::series_from_json(io::read_file(cfg.b));
  check_alphabet(f.alphabet(), a.alphabet(), "A");
  check_alphabet(f.alphabet(), b.alphabet(), "B");
  if (b.coeff(Word(b.alphabet())) != cplx{}) throw InputError("B must have zero constant term");
  const std::vector<MatrixPoint> pts = points_or_sample(cfg, f.alphabet());
  std::vector<Eigen::MatrixXcd> values;
  for (const auto& z : pts) values.push_back(f.value_at(z));
  const SmirnovFormReport rep = smirnov_form_check(values, a, b, pts, cfg.tol.value_or(1e-10));
  Outcome o;
  o.body["pass"] = rep.pass;
  o.body["contractive"] = rep.contractive;
  o.body["maxBNorm"] = rep.max_b_norm;
  o.body["samplePoints"] = pts.size();
  o.body["residuals"] = {{"maxResidual", rep.max_residual}};
  o.code = rep.pass ? kOk : kFail;
  return o;
}

Outcome cmd_sample_points(const Config& cfg) {
  SampleOptions opts;
  opts.seed = cfg.seed;
  opts.max_level = cfg.max_level;
  opts.max_radius = cfg.max_radius;
  opts.include_nilpotent = cfg.include_nilpotent;
  const std::vector<MatrixPoint> pts = sample_points(cfg.d, cfg.count, opts);
  double worst = 0.0;
  for (const auto& z : pts) worst = std::max(worst, row_norm(z));
  Outcome o;
  o.body = io::points_to_json(pts, cfg.d);
  o.body["residuals"] = {{"maxRowNorm", worst}};
  return o;
}

json config_echo(const CLI::App& sub, const Config& cfg) {
  json echo = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const auto& res = opt->results();
    if (opt->get_expected_max() == 0) {
      echo[opt->get_lnames().front()] = true;
    } else {
      echo[opt->get_lnames().front()] = res.size() == 1 ? json(res.front()) : json(res);
    }
  }
  if (cfg.degree) echo["degree"] = *cfg.degree;
  if (cfg.tol) echo["tol"] = *cfg.tol;
  echo["seed"] = cfg.seed;
  return echo;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Free Hardy space computations at truncated degree", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::map<std::string, std::function<Outcome(const Config&)>> handlers;
  auto sub = [&](const char* name, const char* help, std::function<Outcome(const Config&)> fn) {
    CLI::App* s = app.add_subcommand(name, help);
    handlers[name] = std::move(fn);
    s->add_option("--degree", cfg.degree, "truncation degree N")->check(CLI::NonNegativeNumber);
    s->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
    s->add_option("--seed", cfg.seed, "seed for sampled points");
    s->add_option("--r", cfg.r, "nilpotent scale in (0, 1)");
    s->add_option("--out", cfg.out, "write the report here instead of stdout");
    s->add_option("--method", cfg.method, "closed|truncated for szego; auto|cholesky|cg for solves")
        ->check(CLI::IsMember({"", "closed", "truncated", "auto", "cholesky", "cg"}));
    return s;
  };
  auto with_points = [&](CLI::App* s) {
    s->add_option("--points", cfg.points, "point list JSON (sampled when omitted)");
    s->add_option("--count", cfg.count, "number of sampled points")->check(CLI::NonNegativeNumber);
    s->add_option("--max-level", cfg.max_level, "largest sampled level")->check(CLI::PositiveNumber);
    s->add_option("--max-radius", cfg.max_radius, "largest sampled row norm")->check(CLI::Range(0.0, 1.0));
    s->add_flag("--include-nilpotent", cfg.include_nilpotent, "append nilpotent word points");
  };

  CLI::App* s = sub("eval", "evaluate a series at a matrix point", cmd_eval);
  s->add_option("--series", cfg.series, "series JSON");
  s->add_option("--point", cfg.point, "MatrixPoint JSON");

  s = sub("szego", "apply the Szego kernel K(Z,W)[P]", cmd_szego);
  s->add_option("--point", cfg.point, "Z");
  s->add_option("--w", cfg.w_point, "W (defaults to Z)");
  s->add_option("--p", cfg.p_matrix, "P (defaults to identity)");

  s = sub("kernel-vector", "coefficients of K{Z,y,v}", cmd_kernel_vector);
  s->add_option("--point", cfg.point, "Z");
  s->add_option("--y", cfg.y, "vector JSON");
  s->add_option("--v", cfg.v, "vector JSON");

  s = sub("word-point", "nilpotent point reproducing a word or polynomial", cmd_word_point);
  s->add_option("--word", cfg.word, "comma-separated letters, e.g. 1,2,1");
  s->add_option("--d", cfg.d, "alphabet size")->check(CLI::PositiveNumber);
  s->add_option("--series", cfg.series, "polynomial JSON (instead of --word)");

  s = sub("factor", "inner-outer pair of the graph of a multiplier", cmd_factor);
  s->add_option("--series", cfg.series, "series or {den, num} symbol JSON");
  s->add_option("--margin", cfg.margin, "extra working degree")->check(CLI::NonNegativeNumber);

  s = sub("wandering", "wandering space of the truncated graph", cmd_wandering);
  s->add_option("--series", cfg.series, "series or {den, num} symbol JSON");

  s = sub("local-check", "locality of the truncated domain", cmd_local_check);
  s->add_option("--series", cfg.series, "series or {den, num} symbol JSON");

  s = sub("outer-check", "outer diagnostics for a series", cmd_outer_check);
  s->add_option("--series", cfg.series, "series JSON");
  with_points(s);

  s = sub("diverge", "partial norms of H f and f H", cmd_diverge);
  s->add_option("--series", cfg.series, "symbol H");
  s->add_option("--f", cfg.f, "series f (defaults to 1)");

  s = sub("pick", "free Pick feasibility", cmd_pick);
  s->add_option("--data", cfg.data, "pick data JSON");
  s->add_option("--side", cfg.side, "left|right")->check(CLI::IsMember({"left", "right"}));

  s = sub("leech", "Leech condition feasibility", cmd_leech);
  s->add_option("--data", cfg.data, "leech data JSON");
  s->add_option("--side", cfg.side, "left|right")->check(CLI::IsMember({"left", "right"}));

  s = sub("member", "lower bound for the Fock norm from point values", cmd_member);
  s->add_option("--series", cfg.series, "series JSON");
  with_points(s);

  s = sub("smirnov-check", "check f (I - B) = A at points", cmd_smirnov_check);
  s->add_option("--series", cfg.series, "f: series or {den, num} symbol JSON");
  s->add_option("--a", cfg.a, "A series JSON");
  s->add_option("--b", cfg.b, "B series JSON");
  with_points(s);

  s = sub("sample-points", "seeded random points in the NC ball", cmd_sample_points);
  s->add_option("--d", cfg.d, "alphabet size")->check(CLI::PositiveNumber);
  s->add_option("--count", cfg.count, "number of points")->check(CLI::NonNegativeNumber);
  s->add_option("--max-level", cfg.max_level, "largest level")->check(CLI::PositiveNumber);
  s->add_option("--max-radius", cfg.max_radius, "largest row norm")->check(CLI::Range(0.0, 1.0));
  s->add_flag("--include-nilpotent", cfg.include_nilpotent, "append nilpotent word points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    Outcome o = handlers.at(name)(cfg);
    json report = {{"schemaVersion", io::kSchemaVersion},
                   {"tool", kToolName},
                   {"version", kVersion},
                   {"command", name},
                   {"config", config_echo(*chosen, cfg)}};
    for (auto& [key, value] : o.body.items()) report[key] = value;
    const std::string text = report.dump(2) + "\n";
    if (cfg.out.empty()) {
      out << text;
    } else {
      io::write_file_atomic(cfg.out, text);
    }
    return o.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace freehardy::cli
