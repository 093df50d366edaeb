// matrange: command-line front end.
//
// Exit codes: 0 ok, 1 acceptance failure or numerical failure, 2 usage or bad input.
// Failures print a JSON object {"status": ..., "error": ..., "message": ...} on stdout.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "matrange/acceptance.hpp"
#include "matrange/balls.hpp"
#include "matrange/error.hpp"
#include "matrange/fock.hpp"
#include "matrange/free_norms.hpp"
#include "matrange/harness.hpp"
#include "matrange/kernels.hpp"
#include "matrange/limits.hpp"
#include "matrange/ranges.hpp"
#include "matrange/sphere.hpp"
#include "matrange/tuple_io.hpp"

using namespace matrange;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0, kExitFail = 1, kExitUsage = 2;

// Keys outside any [section] belong to the selected subcommand, so a config file
// is a flat "key = value" list mirroring that subcommand's flags.
class FlatConfig : public CLI::ConfigTOML {
 public:
  explicit FlatConfig(const CLI::App* app) : app_(app) {}
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    std::vector<std::string> path;
    for (const CLI::App* a = app_; !a->get_subcommands().empty();) {
      a = a->get_subcommands().front();
      path.push_back(a->get_name());
    }
    for (auto& it : items)
      if (it.parents.empty()) it.parents = path;
    return items;
  }

 private:
  const CLI::App* app_;
};

struct Failure {
  int code;
  json body;
};

[[noreturn]] void fail_with(int code, const std::string& status, const std::string& error, const std::string& msg) {
  throw Failure{code, {{"status", status}, {"error", error}, {"message", msg}}};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text(path, text);
}

void emit_json(const std::string& path, const json& j) { emit(path, j.dump(2) + "\n"); }

// Options of the subcommand that ran, for the provenance block.
std::vector<std::pair<std::string, std::string>> options_of(const CLI::App* sub) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::Option* o : sub->get_options()) {
    if (o->get_name().empty() || o->get_name() == "--help" || o->get_name() == "--out" || !o->nonpositional()) continue;
    if (o->count() == 0) continue;
    std::string v;
    for (const auto& r : o->results()) v += (v.empty() ? "" : " ") + r;
    out.emplace_back("flag " + o->get_name(), v.empty() ? "true" : v);
  }
  return out;
}

json pencil_json(const LinearPencil& p) {
  json a = json::array();
  for (const auto& M : p.a) a.push_back(matrix_to_json(M));
  return {{"n", p.size()}, {"d", p.d()}, {"a0", matrix_to_json(p.a0)}, {"a", a}};
}

json certificate_json(const BallCertificate& c) {
  json j = {{"kind", c.kind}, {"value", c.value}, {"note", c.note}};
  if (c.direction.size()) j["direction"] = std::vector<double>(c.direction.data(), c.direction.data() + c.direction.size());
  if (c.pencil) j["pencil"] = pencil_json(*c.pencil);
  if (c.dual_point) j["dual_point"] = tuple_to_json(*c.dual_point);
  if (c.atoms.size()) {
    json atoms = json::array();
    for (Eigen::Index k = 0; k < c.atoms.rows(); ++k) {
      std::vector<double> row(static_cast<std::size_t>(c.atoms.cols()));
      for (Eigen::Index i = 0; i < c.atoms.cols(); ++i) row[static_cast<std::size_t>(i)] = c.atoms(k, i);
      atoms.push_back(row);
    }
    j["atoms"] = atoms;
  }
  return j;
}

// CSV of per-direction rows: direction..., support, point...
std::string direction_csv(const RMat& dirs, const RVec& values, const RMat& points, const std::string& command,
                          const std::vector<std::pair<std::string, std::string>>& prov,
                          const std::vector<std::string>& summary) {
  Table t;
  for (Eigen::Index i = 0; i < dirs.cols(); ++i) t.header.push_back("theta_" + std::to_string(i + 1));
  t.header.push_back("support");
  for (Eigen::Index i = 0; i < points.cols(); ++i) t.header.push_back("x_" + std::to_string(i + 1));
  for (Eigen::Index k = 0; k < dirs.rows(); ++k) {
    std::vector<std::string> row;
    for (Eigen::Index i = 0; i < dirs.cols(); ++i) row.push_back(format_number(dirs(k, i)));
    row.push_back(format_number(values(k)));
    for (Eigen::Index i = 0; i < points.cols(); ++i) row.push_back(format_number(points(k, i)));
    t.rows.push_back(std::move(row));
  }
  t.summary = summary;
  t.provenance = {{"command", command}, {"version", kVersion}};
  t.provenance.insert(t.provenance.end(), prov.begin(), prov.end());
  return t.csv();
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      fail_with(kExitUsage, "usage", "precondition", "not a number: '" + item + "'");
    }
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix ranges, free-probability norms and random-matrix convergence experiments", "matrange"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "Flat key = value file with defaults for the subcommand's flags");
  app.config_formatter(std::make_shared<FlatConfig>(&app));

  int exit_code = kExitOk;
  std::function<void()> action;

  // ------------------------------------------------------------ sample
  auto* sample_cmd = app.add_subcommand("sample", "Sample a random tuple (MatrixTuple JSON)");
  struct {
    std::string kind = "wigner", entries = "gaussian", out;
    int d = 2, N = 100;
    std::uint64_t seed = 0, trial = 0;
  } so;
  sample_cmd->add_option("--kind", so.kind, "wigner | haar | ginibre")->capture_default_str();
  sample_cmd->add_option("--entries", so.entries, "gaussian | rademacher | uniform (wigner)")->capture_default_str();
  sample_cmd->add_option("--d", so.d)->capture_default_str();
  sample_cmd->add_option("--N", so.N)->capture_default_str();
  sample_cmd->add_option("--seed", so.seed)->capture_default_str();
  sample_cmd->add_option("--trial", so.trial, "stream index")->capture_default_str();
  sample_cmd->add_option("--out", so.out, "output path (default stdout)");
  sample_cmd->callback([&] {
    action = [&] {
      EnsembleSpec s;
      s.kind = parse_ensemble_kind(so.kind);
      s.entries = parse_entry_distribution(so.entries);
      s.d = so.d;
      s.N = so.N;
      s.seed = so.seed;
      s.stream = so.trial;
      emit_json(so.out, tuple_to_json(sample(s)));
    };
  });

  // ------------------------------------------------------------ norm
  auto* norm_cmd = app.add_subcommand("norm", "Norm of sum X_i (x) s_i for free semicirculars (or Haar unitaries)");
  struct {
    std::string tuple, oracle = "lmi", law = "semicircular", out;
    double tol = 1e-7;
    int m = 10;
  } no;
  norm_cmd->add_option("--tuple", no.tuple, "MatrixTuple JSON")->required();
  norm_cmd->add_option("--oracle", no.oracle, "lmi | scalar | fock")->capture_default_str();
  norm_cmd->add_option("--law", no.law, "scalar oracle: semicircular | haar")->capture_default_str();
  norm_cmd->add_option("--tol", no.tol)->capture_default_str();
  norm_cmd->add_option("--m", no.m, "fock truncation degree")->capture_default_str();
  norm_cmd->add_option("--out", no.out);
  norm_cmd->callback([&] {
    action = [&] {
      const MatrixTuple X = read_tuple_file(no.tuple);
      json j = {{"oracle", no.oracle}, {"d", X.d()}, {"n", X.n()}};
      if (no.oracle == "lmi") {
        LehnerOptions lo;
        lo.tol = no.tol;
        const auto r = lehner_semicircular(X, lo);
        j.update({{"value", r.value}, {"certified_upper", r.certified_upper}, {"dual_lower", r.dual_lower},
                  {"rho", r.rho}, {"oracle_calls", r.oracle_calls}});
      } else if (no.oracle == "scalar") {
        require(X.n() == 1, ErrorKind::precondition, "scalar oracle needs a level-1 tuple");
        RVec x(X.d());
        for (int i = 0; i < X.d(); ++i) {
          require(X[i](0, 0).imag() == 0.0, ErrorKind::precondition, "scalar oracle needs real coordinates");
          x(i) = X[i](0, 0).real();
        }
        if (no.law == "semicircular")
          j["value"] = lehner_scalar_semicircular(x);
        else if (no.law == "haar")
          j["value"] = lehner_scalar_haar(x);
        else
          fail_with(kExitUsage, "usage", "precondition", "unknown law '" + no.law + "'");
        j["law"] = no.law;
      } else if (no.oracle == "fock") {
        j["m"] = no.m;
        j["value"] = fock_pencil_norm(X, no.m);
        j["note"] = "lower bound, nondecreasing in m";
      } else {
        fail_with(kExitUsage, "usage", "precondition", "unknown oracle '" + no.oracle + "'");
      }
      emit_json(no.out, j);
    };
  });

  // ------------------------------------------------------------ fock
  auto* fock_cmd = app.add_subcommand("fock", "Dump the truncated semicircular tuple s^(m) (MatrixTuple JSON)");
  struct {
    int d = 2, m = 4;
    std::string out;
  } fo;
  fock_cmd->add_option("--d", fo.d)->capture_default_str();
  fock_cmd->add_option("--m", fo.m)->capture_default_str();
  fock_cmd->add_option("--out", fo.out);
  fock_cmd->callback([&] { action = [&] { emit_json(fo.out, tuple_to_json(semicircular_truncation(fo.d, fo.m))); }; });

  // ------------------------------------------------------------ range
  auto* range_cmd = app.add_subcommand("range", "Matrix range computations");
  range_cmd->require_subcommand(1);
  struct {
    std::string tuple, other, point, out, direction;
    int K = 360, level = 1, samples = 64;
    double tol = 1e-7, eps = 0, R = 0, r = 0;
    std::uint64_t seed = 0;
    bool pencil = false, force_fattening = false;
  } ro;
  auto* support_cmd = range_cmd->add_subcommand("support", "Level-1 support function (CSV)");
  auto* boundary_cmd = range_cmd->add_subcommand("boundary", "Level-1 boundary points (CSV)");
  for (auto* c : {support_cmd, boundary_cmd}) {
    c->add_option("--tuple", ro.tuple, "selfadjoint MatrixTuple JSON (others are realified)")->required();
    c->add_option("--K", ro.K, "number of directions")->capture_default_str();
    c->add_option("--direction", ro.direction, "single direction, comma separated");
    c->add_option("--seed", ro.seed, "rotation of the direction grid")->capture_default_str();
    c->add_option("--out", ro.out);
  }
  auto level1 = [&](bool points) {
    MatrixTuple A = read_tuple_file(ro.tuple);
    if (!A.selfadjoint) A = realify(A);
    RMat dirs;
    if (!ro.direction.empty()) {
      const auto v = parse_list(ro.direction);
      require(static_cast<int>(v.size()) == A.d(), ErrorKind::dimension, "direction length != d");
      dirs = Eigen::Map<const RVec>(v.data(), A.d()).normalized().transpose();
    } else {
      dirs = sphere_directions(A.d(), ro.K, ro.seed);
    }
    const SupportCloud sc = boundary_level1(A, dirs);
    const RMat none(dirs.rows(), 0);
    emit(ro.out, direction_csv(dirs, sc.values, points ? sc.points : none, points ? "range boundary" : "range support",
                               {{"tuple", ro.tuple}, {"d", std::to_string(A.d())}, {"N", std::to_string(A.n())}},
                               {"max support " + format_number(sc.values.maxCoeff()),
                                "min support " + format_number(sc.values.minCoeff())}));
  };
  support_cmd->callback([&] { action = [&] { level1(false); }; });
  boundary_cmd->callback([&] { action = [&] { level1(true); }; });

  auto* member_cmd = range_cmd->add_subcommand("member", "Is X in W_n(A)? (JSON)");
  member_cmd->add_option("--tuple", ro.tuple, "generator A")->required();
  member_cmd->add_option("--point", ro.point, "candidate X")->required();
  member_cmd->add_option("--tol", ro.tol)->capture_default_str();
  member_cmd->add_flag("--pencil", ro.pencil, "attach a separating pencil when outside");
  member_cmd->add_option("--out", ro.out);
  member_cmd->callback([&] {
    action = [&] {
      MembershipOptions mo;
      mo.tol = ro.tol;
      mo.build_pencil = ro.pencil;
      const auto r = membership(read_tuple_file(ro.tuple), read_tuple_file(ro.point), mo);
      json j = {{"verdict", to_string(r.verdict)},     {"distance", r.distance},
                {"distance_lower", r.distance_lower}, {"witness_residual", r.witness_residual},
                {"message", r.message}};
      if (r.verdict == Verdict::inside) j["image"] = tuple_to_json(r.image);
      if (r.pencil) j["pencil"] = pencil_json(*r.pencil);
      emit_json(ro.out, j);
      if (r.verdict == Verdict::numerical_failure) exit_code = kExitFail;
    };
  });

  auto* haus_cmd = range_cmd->add_subcommand("hausdorff", "Levelwise Hausdorff distance between two ranges (JSON)");
  haus_cmd->add_option("--tuple", ro.tuple)->required();
  haus_cmd->add_option("--other", ro.other)->required();
  haus_cmd->add_option("--level", ro.level)->capture_default_str();
  haus_cmd->add_option("--K", ro.K, "number of directions")->capture_default_str();
  haus_cmd->add_option("--tol", ro.tol)->capture_default_str();
  haus_cmd->add_option("--seed", ro.seed)->capture_default_str();
  haus_cmd->add_option("--out", ro.out);
  haus_cmd->callback([&] {
    action = [&] {
      const auto h = hausdorff_levels(read_tuple_file(ro.tuple), read_tuple_file(ro.other), ro.level, ro.K, ro.tol,
                                      ro.seed);
      emit_json(ro.out, {{"level", ro.level},
                         {"metric", ro.level == 1 ? "euclidean" : "hilbert-schmidt"},
                         {"estimate", h.estimate},
                         {"discretization", std::isnan(h.discretization) ? json() : json(h.discretization)},
                         {"op_lower", h.op_lower},
                         {"op_upper", std::isnan(h.op_upper) ? json() : json(h.op_upper)},
                         {"directions", h.directions}});
    };
  });

  auto* sep_cmd = range_cmd->add_subcommand("separate", "Effective separating pencil (JSON certificate)");
  sep_cmd->add_option("--tuple", ro.tuple, "generator xi")->required();
  sep_cmd->add_option("--point", ro.point, "point A outside W(xi)")->required();
  sep_cmd->add_option("--eps", ro.eps, "distance margin (default: half the certified distance)");
  sep_cmd->add_option("--R", ro.R, "outer radius (default: row norm of xi)");
  sep_cmd->add_option("--r", ro.r, "inner radius (0: fatten the generator)")->capture_default_str();
  sep_cmd->add_option("--samples", ro.samples)->capture_default_str();
  sep_cmd->add_option("--seed", ro.seed)->capture_default_str();
  sep_cmd->add_flag("--fatten", ro.force_fattening);
  sep_cmd->add_option("--out", ro.out);
  sep_cmd->callback([&] {
    action = [&] {
      const MatrixTuple xi = read_tuple_file(ro.tuple), A = read_tuple_file(ro.point);
      double eps = ro.eps;
      if (eps <= 0) {
        const auto m = membership(xi, A);
        require(m.verdict == Verdict::outside, ErrorKind::precondition, "point is not outside the range");
        eps = 0.5 * m.distance_lower;
      }
      SeparationOptions o;
      o.samples = ro.samples;
      o.seed = ro.seed;
      o.force_fattening = ro.force_fattening;
      const auto s = separating_pencil(xi, A, eps, ro.R > 0 ? ro.R : row_norm(xi), ro.r, o);
      emit_json(ro.out, {{"pencil", pencil_json(s.pencil)},
                         {"monic", pencil_json(s.monic)},
                         {"delta", s.delta},
                         {"eps", s.eps},
                         {"R", s.R},
                         {"r", s.r},
                         {"fattened", s.fattened},
                         {"value_at_point", s.value_at_A},
                         {"certified_margin", s.certified_margin},
                         {"sampled_margin", s.sampled_margin},
                         {"norm_lower", s.norm.lower},
                         {"norm_upper", s.norm.upper}});
    };
  });

  // ------------------------------------------------------------ balls / audit
  auto* balls_cmd = app.add_subcommand("balls", "Noncommutative unit balls");
  balls_cmd->require_subcommand(1);
  struct {
    std::string ball = "fB", tuple, out;
    double tol = 1e-7;
    int d = 2, n = 2, samples = 500, level1_points = 1000;
    std::uint64_t seed = 0;
    bool no_witnesses = false;
  } bo;
  auto* ball_member_cmd = balls_cmd->add_subcommand("member", "Ball membership with certificate (JSON)");
  ball_member_cmd->add_option("--ball", bo.ball, "wmin | fB | fD | wmax | lehner | fB-dual | W-s-half")->capture_default_str();
  ball_member_cmd->add_option("--tuple", bo.tuple)->required();
  ball_member_cmd->add_option("--tol", bo.tol)->capture_default_str();
  ball_member_cmd->add_option("--out", bo.out);
  ball_member_cmd->callback([&] {
    action = [&] {
      BallOptions o;
      o.tol = bo.tol;
      const auto v = ball_member(parse_ball(bo.ball), read_tuple_file(bo.tuple), o);
      emit_json(bo.out, {{"ball", to_string(v.ball)},
                         {"answer", to_string(v.answer)},
                         {"tol", v.tol},
                         {"certificate", certificate_json(v.certificate)}});
    };
  });
  auto audit_options = [&](CLI::App* c) {
    c->add_option("--d", bo.d)->capture_default_str();
    c->add_option("--n", bo.n)->capture_default_str();
    c->add_option("--samples", bo.samples)->capture_default_str();
    c->add_option("--seed", bo.seed)->capture_default_str();
    c->add_option("--level1-points", bo.level1_points)->capture_default_str();
    c->add_flag("--no-witnesses", bo.no_witnesses);
    c->add_option("--out", bo.out);
  };
  auto run_audit = [&] {
    AuditOptions o;
    o.d = bo.d;
    o.n = bo.n;
    o.samples = bo.samples;
    o.seed = bo.seed;
    o.level1_points = bo.level1_points;
    o.witnesses = !bo.no_witnesses;
    const auto rep = audit_chain(o);
    emit_json(bo.out, to_json(rep));
    if (!rep.ok()) exit_code = kExitFail;
  };
  auto* ball_audit = balls_cmd->add_subcommand("audit", "Audit of the ball inclusion chain (JSON report)");
  audit_options(ball_audit);
  ball_audit->callback([&] { action = run_audit; });
  auto* audit_cmd = app.add_subcommand("audit", "Same as `balls audit`");
  audit_options(audit_cmd);
  audit_cmd->callback([&] { action = run_audit; });

  // ------------------------------------------------------------ limits
  auto* limits_cmd = app.add_subcommand("limits", "Boundary of a limit body (CSV)");
  struct {
    std::string kind = "wigner", out;
    int d = 2, K = 360;
  } lo;
  limits_cmd->add_option("--kind", lo.kind, "wigner | haar")->capture_default_str();
  limits_cmd->add_option("--d", lo.d)->capture_default_str();
  limits_cmd->add_option("--K", lo.K)->capture_default_str();
  limits_cmd->add_option("--out", lo.out);
  limits_cmd->callback([&] {
    action = [&] {
      const LimitKind kind = parse_limit_kind(lo.kind);
      const int dim = kind == LimitKind::wigner ? lo.d : 2 * lo.d;
      const RMat dirs = sphere_directions(dim, lo.K);
      RVec values(lo.K);
      RMat points(lo.K, dim);
      for (int k = 0; k < lo.K; ++k) {
        const RVec th = dirs.row(k).transpose();
        if (kind == LimitKind::wigner) {
          values(k) = wigner_limit_support(lo.d, th);
          points.row(k) = values(k) * dirs.row(k);
        } else {
          values(k) = haar_limit_support(th);
          points.row(k) = haar_limit_support_point(th).transpose();
        }
      }
      emit(lo.out, direction_csv(dirs, values, points, "limits",
                                 {{"kind", to_string(kind)}, {"d", std::to_string(lo.d)}, {"K", std::to_string(lo.K)}},
                                 {kind == LimitKind::haar ? "coordinates interleave Re and Im" : "ball of radius 2"}));
    };
  });

  // ------------------------------------------------------------ converge
  auto* conv_cmd = app.add_subcommand("converge", "Convergence experiment (CSV)");
  struct {
    std::string kind = "wigner", entries = "gaussian", measure = "range", pencil, out;
    std::vector<int> Ns{100, 200};
    int d = 2, trials = 1, K = 720, level = 1;
    double tol = 1e-7;
    std::uint64_t seed = 0;
    bool timing = false;
  } co;
  conv_cmd->add_option("--kind", co.kind, "wigner | haar")->capture_default_str();
  conv_cmd->add_option("--entries", co.entries)->capture_default_str();
  conv_cmd->add_option("--measure", co.measure, "range | square-sum | pencil")->capture_default_str();
  conv_cmd->add_option("--pencil", co.pencil, "coefficients a_i (MatrixTuple JSON) for --measure pencil");
  conv_cmd->add_option("--d", co.d)->capture_default_str();
  conv_cmd->add_option("--Ns", co.Ns, "comma separated, strictly increasing")->delimiter(',')->capture_default_str();
  conv_cmd->add_option("--trials", co.trials)->capture_default_str();
  conv_cmd->add_option("--seed", co.seed)->capture_default_str();
  conv_cmd->add_option("--K", co.K, "directions")->capture_default_str();
  conv_cmd->add_option("--level", co.level)->capture_default_str();
  conv_cmd->add_option("--tol", co.tol)->capture_default_str();
  conv_cmd->add_flag("--timing", co.timing, "add a wall-time column (not reproducible)");
  conv_cmd->add_option("--out", co.out);
  conv_cmd->callback([&] {
    action = [&] {
      ExperimentConfig c;
      c.kind = parse_ensemble_kind(co.kind);
      c.entries = parse_entry_distribution(co.entries);
      c.d = co.d;
      c.Ns = co.Ns;
      c.trials = co.trials;
      c.seed = co.seed;
      c.K = co.K;
      c.level = co.level;
      c.tol = co.tol;
      c.timing = co.timing;
      Table t;
      if (co.measure == "range") {
        t = run_converge(c).table();
      } else if (co.measure == "square-sum") {
        t = run_square_sum(c).table();
      } else if (co.measure == "pencil") {
        require(!co.pencil.empty(), ErrorKind::precondition, "--measure pencil needs --pencil");
        const MatrixTuple a = read_tuple_file(co.pencil);
        LinearPencil p;
        p.a0 = CMat::Zero(a.n(), a.n());
        p.a = a.mats;
        t = run_poly_norms(c, p).table();
      } else {
        fail_with(kExitUsage, "usage", "precondition", "unknown measure '" + co.measure + "'");
      }
      const auto flags = options_of(conv_cmd);
      t.provenance.insert(t.provenance.end(), flags.begin(), flags.end());
      emit(co.out, t.csv());
    };
  });

  // ------------------------------------------------------------ selftest
  auto* self_cmd = app.add_subcommand("selftest", "Run the acceptance suite");
  struct {
    bool quick = false;
    std::vector<int> criteria;
    std::uint64_t seed = 7;
    std::string json_out;
  } st;
  self_cmd->add_flag("--quick", st.quick, "only the criteria that finish in seconds");
  self_cmd->add_option("--criteria", st.criteria, "comma separated ids")->delimiter(',');
  self_cmd->add_option("--seed", st.seed)->capture_default_str();
  self_cmd->add_option("--json", st.json_out, "write all results as JSON");
  self_cmd->callback([&] {
    action = [&] {
      std::vector<int> ids = st.criteria;
      if (ids.empty() && st.quick) ids = quick_criteria();
      if (ids.empty())
        for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
      AcceptanceOptions o;
      o.seed = st.seed;
      json all = json::array(), failed = json::array();
      for (int id : ids) {
        const auto r = run_criterion(id, o);
        std::cout << format_line(r) << std::endl;
        all.push_back(to_json(r));
        if (!r.passed) failed.push_back(to_json(r));
      }
      if (!st.json_out.empty()) write_text(st.json_out, all.dump(2) + "\n");
      if (!failed.empty()) {
        std::cout << json{{"status", "acceptance-failure"}, {"failed", failed}}.dump() << std::endl;
        exit_code = kExitFail;
      }
    };
  });

  for (auto* c : app.get_subcommands({})) c->fallthrough();
  for (auto* c : {range_cmd, balls_cmd})
    for (auto* s : c->get_subcommands({})) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << '\n';
    std::cout << json{{"status", "usage"}, {"error", e.get_name()}, {"message", e.what()}}.dump() << std::endl;
    return kExitUsage;
  }

  try {
    if (action) action();
  } catch (const Failure& f) {
    std::cout << f.body.dump() << std::endl;
    return f.code;
  } catch (const Error& e) {
    const bool input = e.kind() != ErrorKind::numerical;
    std::cout << json{{"status", input ? "usage" : "failure"}, {"error", to_string(e.kind())}, {"message", e.what()}}.dump()
              << std::endl;
    return input ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::cout << json{{"status", "failure"}, {"error", "internal"}, {"message", e.what()}}.dump() << std::endl;
    return kExitFail;
  }
  return exit_code;
}
