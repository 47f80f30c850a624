#include "schurlab/cli.hpp"

#include "schurlab/diameter_graph.hpp"
#include "schurlab/extremal_search.hpp"
#include "schurlab/lemma_lab.hpp"
#include "schurlab/pointset_io.hpp"
#include "schurlab/reuleaux.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace schurlab::cli {

namespace {

using nlohmann::ordered_json;

ordered_json make_manifest(const std::string& subcommand, ordered_json flags,
                           const ordered_json& seed, const std::string& input,
                           const std::string& output) {
  ordered_json m;
  m["type"] = "manifest";
  m["subcommand"] = subcommand;
  m["flags"] = std::move(flags);
  m["seed"] = seed;  // null for fully deterministic subcommands
  m["version"] = kVersion;
  m["input"] = input.empty() ? ordered_json(nullptr) : ordered_json(input);
  m["output"] = output.empty() ? "-" : output;
  return m;
}

int emit_report(const ordered_json& manifest,
                const std::vector<ordered_json>& lines,
                const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  std::ostringstream body;
  body << manifest.dump() << "\n";
  for (const ordered_json& line : lines) body << line.dump() << "\n";
  if (out_path.empty()) {
    out << body.str();
    return kOk;
  }
  std::ofstream file(out_path);
  file << body.str();
  file.flush();
  if (!file.good()) {
    err << "error: cannot write report to " << out_path << "\n";
    return kUsageError;
  }
  return kOk;
}

void report_witness(const std::string& path, const ordered_json& manifest,
                    const ordered_json& payload,
                    const std::optional<PointConfig>& config,
                    std::ostream& err) {
  try {
    write_witness(path, manifest, payload, config);
    err << "violation witness written to " << path << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
}

//----------------------------------------------------------------------------
// cliques / audit
//----------------------------------------------------------------------------

ordered_json audit_to_json(const AuditReport& a) {
  ordered_json j;
  j["type"] = "audit";
  j["n"] = a.n;
  j["dim"] = a.dim;
  j["clique_count"] = a.clique_count;
  j["count_bound_holds"] = a.count_bound_holds;
  j["min_pairwise_intersection"] = a.min_pairwise_intersection;
  j["intersection_bound_holds"] = a.intersection_bound_holds;
  j["min_edge_dist"] = a.min_edge_dist;
  j["max_nonedge_dist"] = a.max_nonedge_dist;
  j["geodesic_residual"] = a.geodesic_residual;
  j["out_of_scope"] = a.out_of_scope;
  j["violation"] = a.violation;
  return j;
}

struct CliquesFlags {
  std::string input;
  int l = 2;
  double eq_tol = 1e-9;
  bool audit = false;
  std::string out;
  std::string witness = "cliques.witness.json";
};

int run_cliques(const CliquesFlags& f, std::ostream& out, std::ostream& err) {
  Tolerance tol;
  tol.eq_tol = f.eq_tol;
  ordered_json flags;
  flags["input"] = f.input;
  flags["l"] = f.l;
  flags["tol"] = f.eq_tol;
  flags["audit"] = f.audit;
  const ordered_json manifest =
      make_manifest("cliques", std::move(flags), nullptr, f.input, f.out);

  const PointConfig config = read_config(f.input, tol);
  const DiameterGraph graph = build_diameter_graph(config, tol);
  const CliqueReport report = count_cliques(graph, f.l);

  std::vector<ordered_json> lines;
  ordered_json line;
  line["type"] = "clique-report";
  line["l"] = report.l;
  line["count"] = report.count;
  line["pairwise_shared"] = report.pairwise_shared;
  line["cliques"] = report.cliques;
  lines.push_back(std::move(line));

  ordered_json violating;
  if (f.audit) {
    const AuditReport audit = schur_audit(config, tol);
    lines.push_back(audit_to_json(audit));
    if (audit.violation) violating = lines.back();
  }
  const int code = emit_report(manifest, lines, f.out, out, err);
  if (code != kOk) return code;
  if (!violating.is_null()) {
    report_witness(f.witness, manifest, violating, config, err);
    return kViolation;
  }
  return kOk;
}

struct AuditFlags {
  std::string input;
  int d = 0;  // 0 = take the input's own dimension
  double eq_tol = 1e-9;
  std::string out;
  std::string witness = "audit.witness.json";
};

int run_audit(const AuditFlags& f, std::ostream& out, std::ostream& err) {
  Tolerance tol;
  tol.eq_tol = f.eq_tol;
  ordered_json flags;
  flags["input"] = f.input;
  flags["d"] = f.d;
  flags["tol"] = f.eq_tol;
  const ordered_json manifest =
      make_manifest("audit", std::move(flags), nullptr, f.input, f.out);

  const PointConfig config = read_config(f.input, tol);
  if (f.d != 0 && f.d != config.space.dim)
    throw ArgumentError("--d " + std::to_string(f.d) +
                        " does not match the input dimension " +
                        std::to_string(config.space.dim));
  const AuditReport audit = schur_audit(config, tol);

  std::vector<ordered_json> lines{audit_to_json(audit)};
  const int code = emit_report(manifest, lines, f.out, out, err);
  if (code != kOk) return code;
  if (audit.violation) {
    report_witness(f.witness, manifest, lines.front(), config, err);
    return kViolation;
  }
  return kOk;
}

//----------------------------------------------------------------------------
// lemmas
//----------------------------------------------------------------------------

struct LemmaFlags {
  std::string lemma = "all";
  int d = 3;
  long trials = 2000;
  std::uint64_t seed = kDefaultSeed;
  double r = 1.0;
  int k = 2;
  std::string out;
  std::string witness_dir = ".";
};

int run_lemmas(const LemmaFlags& f, std::ostream& out, std::ostream& err) {
  ordered_json flags;
  flags["lemma"] = f.lemma;
  flags["d"] = f.d;
  flags["trials"] = f.trials;
  flags["r"] = f.r;
  flags["k"] = f.k;
  flags["witness-dir"] = f.witness_dir;
  const ordered_json manifest =
      make_manifest("lemmas", std::move(flags), f.seed, "", f.out);

  std::vector<ordered_json> lines;
  long violating_reports = 0;
  const auto add_report = [&](const LemmaReport& report) {
    ordered_json line;
    line["type"] = "lemma-report";
    const ordered_json fields = lemma_report_to_json(report);
    for (const auto& [key, value] : fields.items()) line[key] = value;
    lines.push_back(std::move(line));
    if (report.violations > 0) {
      ++violating_reports;
      ordered_json payload;
      payload["id"] = report.id;
      payload["violations"] = report.violations;
      payload["witness"] =
          report.witness ? *report.witness : ordered_json(nullptr);
      report_witness(f.witness_dir + "/" + report.id + ".witness.json",
                     manifest, payload, std::nullopt, err);
    }
  };

  const bool all = f.lemma == "all";
  if (all || f.lemma == "half-body-diameter")
    add_report(verify_half_body_diameter(f.d, f.trials, f.seed));
  if (all || f.lemma == "vertex-farthest")
    add_report(verify_vertex_farthest(f.d, f.trials, f.seed));
  if (all || f.lemma == "boundary-farthest") {
    add_report(verify_boundary_farthest(true, f.trials, f.seed));
    add_report(verify_boundary_farthest(false, f.trials, f.seed));
  }
  if (all || f.lemma == "cut-radius") {
    const SphereCut cut = sphere_cut_closed_form(f.r, f.k);
    ordered_json closed;
    closed["type"] = "closed-form";
    closed["id"] = "cut-radius";
    closed["r"] = f.r;
    closed["k"] = f.k;
    closed["axis_offset"] = cut.axis_offset;
    closed["cut_offset"] = cut.cut_offset;
    closed["radius"] = cut.radius;
    closed["identity_residual"] =
        std::abs(2.0 * cut.radius * cut.radius - 1.0 -
                 2.0 * cut.cut_offset * (cut.axis_offset - cut.cut_offset));
    lines.push_back(std::move(closed));
    if (f.k <= f.d)
      add_report(verify_sphere_cut(f.r, f.k, f.d, f.trials, f.seed));
  }
  if (all || f.lemma == "rotation")
    add_report(verify_rotation(f.d, f.trials, f.seed));
  if (all || f.lemma == "observations")
    add_report(verify_observations(f.trials, f.seed));

  const int code = emit_report(manifest, lines, f.out, out, err);
  if (code != kOk) return code;
  return violating_reports > 0 ? kViolation : kOk;
}

//----------------------------------------------------------------------------
// construct
//----------------------------------------------------------------------------

struct ConstructFlags {
  std::string kind;  // red-blue | simplex | polygon | body
  int d = 3;
  double delta = 1e-3;
  bool max_delta = false;
  int k = 0;
  int n = 5;
  std::string body_kind = "reuleaux";
  long samples = 200;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string points_out;
};

int run_construct(const ConstructFlags& f, std::ostream& out,
                  std::ostream& err) {
  ordered_json flags;
  flags["kind"] = f.kind;
  std::vector<ordered_json> lines;
  PointConfig emitted;
  ordered_json seed_field = nullptr;

  if (f.kind == "red-blue") {
    flags["d"] = f.d;
    flags["delta"] = f.delta;
    const RedBlue rb = red_blue_construction(f.d, f.delta);
    emitted.space = rb.red.space;
    for (int i = 0; i < rb.red.n(); ++i) {
      emitted.points.push_back(rb.red.points[static_cast<size_t>(i)]);
      emitted.labels.push_back("red_" + std::to_string(i));
    }
    for (int i = 0; i < rb.blue.n(); ++i) {
      emitted.points.push_back(rb.blue.points[static_cast<size_t>(i)]);
      emitted.labels.push_back("blue_" + std::to_string(i));
    }
    ordered_json line;
    line["type"] = "red-blue";
    line["d"] = f.d;
    line["delta"] = rb.delta;
    line["margins"] = ordered_json{{"min_blue_blue", rb.min_blue_blue},
                                   {"max_red_blue", rb.max_red_blue},
                                   {"min_body_margin", rb.min_margin}};
    line["config"] = config_to_json(emitted);
    lines.push_back(std::move(line));
    if (f.max_delta) {
      ordered_json extra;
      extra["type"] = "red-blue-max-delta";
      extra["d"] = f.d;
      extra["max_delta"] = red_blue_max_delta(f.d);
      lines.push_back(std::move(extra));
    }
  } else if (f.kind == "simplex") {
    const int k = f.k == 0 ? f.d + 1 : f.k;
    flags["d"] = f.d;
    flags["k"] = k;
    emitted = regular_unit_simplex(f.d, k);
    ordered_json line;
    line["type"] = "simplex";
    line["d"] = f.d;
    line["k"] = k;
    line["circumradius"] = circumscribed_ball(emitted).radius;
    line["config"] = config_to_json(emitted);
    lines.push_back(std::move(line));
  } else if (f.kind == "polygon") {
    flags["n"] = f.n;
    emitted = reuleaux_polygon(f.n);
    ordered_json line;
    line["type"] = "polygon";
    line["n"] = f.n;
    line["edges"] = build_diameter_graph(emitted).edge_count();
    line["config"] = config_to_json(emitted);
    lines.push_back(std::move(line));
  } else if (f.kind == "body") {
    flags["body"] = f.body_kind;
    flags["d"] = f.d;
    flags["samples"] = f.samples;
    seed_field = f.seed;
    const ReuleauxBody body =
        f.body_kind == "rugby"
            ? ReuleauxBody::rugby_ball(regular_unit_simplex(f.d, f.d))
            : ReuleauxBody::simplex(regular_unit_simplex(f.d, f.d + 1));
    emitted.space = Space::euclidean(f.d);
    emitted.points = sample_body(body, f.samples, f.seed);
    ordered_json line;
    line["type"] = "body";
    line["body"] = f.body_kind;
    line["d"] = f.d;
    line["samples"] = f.samples;
    line["diameter"] = diameter(emitted.points);
    line["config"] = config_to_json(emitted);
    lines.push_back(std::move(line));
  } else {
    throw ArgumentError("unknown construction \"" + f.kind + "\"");
  }

  const ordered_json manifest = make_manifest(
      "construct", std::move(flags), seed_field, "", f.out);
  if (!f.points_out.empty()) write_config(emitted, f.points_out);
  return emit_report(manifest, lines, f.out, out, err);
}

//----------------------------------------------------------------------------
// search
//----------------------------------------------------------------------------

struct SearchFlags {
  bool hunt = false;
  int d = 2;
  int n = 0;
  int l = 0;
  std::string space = "euclidean";
  double radius = 1.0;
  long budget = 20000;
  int restarts = 4;
  std::uint64_t seed = kDefaultSeed;
  int second_size = 0;
  std::string out;
  std::string points_out;
  std::string witness = "search.witness.json";
};

int run_search(const SearchFlags& f, std::ostream& out, std::ostream& err) {
  ordered_json flags;
  flags["hunt"] = f.hunt;
  flags["d"] = f.d;
  if (!f.hunt) {
    flags["n"] = f.n;
    flags["l"] = f.l;
    flags["space"] = f.space;
    if (f.space == "sphere") flags["radius"] = f.radius;
    flags["restarts"] = f.restarts;
  } else if (f.second_size != 0) {
    flags["second-size"] = f.second_size;
  }
  flags["budget"] = f.budget;
  const ordered_json manifest =
      make_manifest("search", std::move(flags), f.seed, "", f.out);

  SearchResult result;
  std::string type;
  if (f.hunt) {
    result = counterexample_hunt(f.d, f.budget, f.seed, f.second_size);
    type = "hunt-result";
  } else {
    if (f.n == 0 || f.l == 0)
      throw ArgumentError("search needs --n and --l (or --hunt)");
    SearchProblem problem;
    problem.space = f.space == "sphere" ? Space::sphere(f.d, f.radius)
                                        : Space::euclidean(f.d);
    problem.n = f.n;
    problem.l = f.l;
    problem.budget = f.budget;
    problem.restarts = f.restarts;
    problem.seed = f.seed;
    result = search(problem);
    type = "search-result";
  }

  ordered_json line;
  line["type"] = type;
  const ordered_json fields = search_result_to_json(result);
  for (const auto& [key, value] : fields.items()) line[key] = value;
  std::vector<ordered_json> lines{line};
  if (!f.points_out.empty()) write_config(result.best, f.points_out);
  const int code = emit_report(manifest, lines, f.out, out, err);
  if (code != kOk) return code;

  // an emitted count above the ceiling in the critical case is a violation
  if (!f.hunt && f.space != "sphere" && f.l == f.d && result.count > f.n) {
    report_witness(f.witness, manifest, line, result.best, err);
    return kViolation;
  }
  return kOk;
}

}  // namespace

void write_witness(const std::string& path, const ordered_json& manifest,
                   const ordered_json& payload,
                   const std::optional<PointConfig>& config) {
  ordered_json w;
  if (config) {
    const ordered_json c = config_to_json(*config);
    for (const auto& [key, value] : c.items()) w[key] = value;
  }
  w["witness"] = payload;
  w["manifest"] = manifest;
  std::ofstream file(path);
  file << w.dump(2) << "\n";
  file.flush();
  if (!file.good()) throw Error("cannot write witness to " + path);
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "verification laboratory for diameter graphs and Reuleaux bodies"};
  app.name("schurlab");

  CliquesFlags cf;
  CLI::App* cliques = app.add_subcommand(
      "cliques", "count unit-distance cliques in a point configuration");
  cliques->add_option("--input", cf.input, "point-set JSON file")->required();
  cliques->add_option("--l", cf.l, "clique size to count")->required();
  cliques->add_option("--tol", cf.eq_tol, "distance-equality tolerance");
  cliques->add_flag("--audit", cf.audit, "also run the clique-bound audit");
  cliques->add_option("--out", cf.out, "write the report to a file");
  cliques->add_option("--witness", cf.witness, "violation witness path");

  LemmaFlags lf;
  CLI::App* lemmas = app.add_subcommand(
      "lemmas", "randomized verification suites for the geometric bounds");
  lemmas
      ->add_option("--lemma", lf.lemma,
                   "which suite to run (default all)")
      ->check(CLI::IsMember({"half-body-diameter", "vertex-farthest",
                             "boundary-farthest", "cut-radius", "rotation",
                             "observations", "all"}));
  lemmas->add_option("--d", lf.d, "ambient dimension (default 3)");
  lemmas->add_option("--trials", lf.trials, "samples per suite");
  lemmas->add_option("--seed", lf.seed, "master seed (default 42)");
  lemmas->add_option("--r", lf.r, "frame sphere radius for cut-radius");
  lemmas->add_option("--k", lf.k, "simplex vertex count for cut-radius");
  lemmas->add_option("--out", lf.out, "write the report to a file");
  lemmas->add_option("--witness-dir", lf.witness_dir,
                     "directory for violation witness files");

  ConstructFlags xf;
  CLI::App* construct = app.add_subcommand(
      "construct", "emit the reference constructions as point-set JSON");
  construct->require_subcommand(1);
  CLI::App* red_blue = construct->add_subcommand(
      "red-blue", "unit simplex plus contracted arc midpoints");
  red_blue->add_option("--d", xf.d, "dimension")->required();
  red_blue->add_option("--delta", xf.delta, "contraction (default 1e-3)");
  red_blue->add_flag("--max-delta", xf.max_delta,
                     "also report the largest admissible contraction");
  CLI::App* simplex =
      construct->add_subcommand("simplex", "regular unit simplex vertices");
  simplex->add_option("--d", xf.d, "dimension")->required();
  simplex->add_option("--k", xf.k, "vertex count (default d+1)");
  CLI::App* polygon = construct->add_subcommand(
      "polygon", "odd polygon whose long chords all have length 1");
  polygon->add_option("--n", xf.n, "vertex count, odd")->required();
  CLI::App* body = construct->add_subcommand(
      "body", "points sampled uniformly from a unit-ball intersection body");
  body->add_option("--kind", xf.body_kind, "reuleaux | rugby")
      ->check(CLI::IsMember({"reuleaux", "rugby"}));
  body->add_option("--d", xf.d, "dimension")->required();
  body->add_option("--samples", xf.samples, "number of points");
  body->add_option("--seed", xf.seed, "master seed (default 42)");
  for (CLI::App* sub : {red_blue, simplex, polygon, body}) {
    sub->add_option("--out", xf.out, "write the report to a file");
    sub->add_option("--points-out", xf.points_out,
                    "write the configuration as point-set JSON");
  }

  SearchFlags sf;
  CLI::App* search_cmd = app.add_subcommand(
      "search", "anneal configurations toward many unit-distance cliques");
  CLI::Option* hunt_flag = search_cmd->add_flag(
      "--hunt", sf.hunt, "pose-anneal a second unit simplex instead");
  search_cmd->add_option("--d", sf.d, "dimension")->required();
  CLI::Option* n_opt =
      search_cmd->add_option("--n", sf.n, "number of points");
  CLI::Option* l_opt =
      search_cmd->add_option("--l", sf.l, "clique size to maximize");
  CLI::Option* space_opt =
      search_cmd->add_option("--space", sf.space, "euclidean | sphere")
          ->check(CLI::IsMember({"euclidean", "sphere"}));
  CLI::Option* radius_opt =
      search_cmd->add_option("--radius", sf.radius, "sphere radius");
  search_cmd->add_option("--budget", sf.budget, "total iterations");
  CLI::Option* restarts_opt =
      search_cmd->add_option("--restarts", sf.restarts, "restart count");
  search_cmd->add_option("--seed", sf.seed, "master seed (default 42)");
  CLI::Option* second_opt = search_cmd->add_option(
      "--second-size", sf.second_size,
      "second simplex vertex count for --hunt (default floor((d+1)/2)+1)");
  search_cmd->add_option("--out", sf.out, "write the report to a file");
  search_cmd->add_option("--points-out", sf.points_out,
                         "write the best configuration as point-set JSON");
  search_cmd->add_option("--witness", sf.witness, "violation witness path");
  hunt_flag->excludes(n_opt, l_opt, space_opt, radius_opt, restarts_opt);
  second_opt->needs(hunt_flag);

  AuditFlags af;
  CLI::App* audit = app.add_subcommand(
      "audit", "check the clique-count and shared-vertex bounds");
  audit->add_option("--input", af.input, "point-set JSON file")->required();
  audit->add_option("--d", af.d, "expected intrinsic dimension");
  audit->add_option("--tol", af.eq_tol, "distance-equality tolerance");
  audit->add_option("--out", af.out, "write the report to a file");
  audit->add_option("--witness", af.witness, "violation witness path");

  app.require_subcommand(1);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (cliques->parsed()) return run_cliques(cf, out, err);
    if (lemmas->parsed()) return run_lemmas(lf, out, err);
    if (construct->parsed()) {
      for (CLI::App* sub : {red_blue, simplex, polygon, body})
        if (sub->parsed()) xf.kind = sub->get_name();
      return run_construct(xf, out, err);
    }
    if (search_cmd->parsed()) return run_search(sf, out, err);
    if (audit->parsed()) return run_audit(af, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  err << "error: no subcommand\n";
  return kUsageError;
}

}  // namespace schurlab::cli
