#include "pachner4/cli.hpp"

#include <chrono>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pachner4/error.hpp"
#include "pachner4/flatmetric.hpp"
#include "pachner4/invariant.hpp"
#include "pachner4/io.hpp"
#include "pachner4/jacobian.hpp"

namespace pachner4 {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

/// Input that is readable but not meaningful for the command.
struct UsageError : Error {
  using Error::Error;
};

template <std::size_t N>
std::string key(const std::array<VertexId, N>& cell) {
  return to_string(cell);
}

template <std::size_t N>
json keys(const std::vector<std::array<VertexId, N>>& cells) {
  json out = json::array();
  for (const auto& c : cells) out.push_back(key(c));
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

json coords_json(const Realization& r) {
  json out = json::object();
  for (const auto& [v, p] : r.coords) out[std::to_string(v)] = {p[0], p[1], p[2], p[3]};
  return out;
}

Triangle parse_face(const std::string& text) {
  std::vector<int> ids;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw UsageError("--face expects a,b,c; got " + text);
    ids.push_back(v);
  }
  if (ids.size() != 3) throw UsageError("--face expects three vertex ids; got " + text);
  return sorted_key(Triangle{ids[0], ids[1], ids[2]});
}

struct Report {
  json doc;
  bool pass = true;

  void check(const std::string& name, bool ok, std::optional<double> value = std::nullopt,
             std::optional<double> tolerance = std::nullopt) {
    json c = {{"name", name}, {"pass", ok}};
    if (value) c["value"] = *value;
    if (tolerance) c["tolerance"] = *tolerance;
    doc["checks"].push_back(std::move(c));
    pass = pass && ok;
  }
};

struct Common {
  std::string input;
  std::optional<std::uint64_t> seed;
  double fd_step = 1e-5;
  bool no_richardson = false;
  double pivot_tol = kDefaultPivotTolerance;

  FdOptions fd() const { return {fd_step, !no_richardson}; }

  json tolerances() const {
    return {{"fd_rel_step", fd_step}, {"richardson", !no_richardson}, {"pivot_tol", pivot_tol}};
  }
};

struct Loaded {
  ComplexDocument doc;
  Complex4 complex;
};

Loaded load(const Common& common) {
  try {
    ComplexDocument doc = load_complex(common.input);
    Complex4 c = doc.complex();
    return {std::move(doc), std::move(c)};
  } catch (const StructuralError& e) {
    throw SchemaError(common.input + ": " + e.what());
  }
}

// Placement from --seed when given, else from the document.
Realization placement(const Common& common, const Loaded& in) {
  if (common.seed) return random_realization(in.complex, *common.seed);
  if (!in.doc.coords) throw UsageError(common.input + " has no coords; pass --seed to sample them");
  return in.doc.realization();
}

FlatMetric metric(const Common& common, const Loaded& in) {
  return realize(in.complex, placement(common, in), in.doc.realize_options());
}

json value_json(const InvariantValue& v) {
  return {{"value", v.value},           {"sign", v.sign},
          {"log_abs", v.log_abs},       {"detB", v.detB},
          {"log_prod_S", v.log_prod_S}, {"log_abs_prod_V", v.log_abs_prod_V},
          {"sign_prod_V", v.sign_prod_V}};
}

json selection_json(const InvariantReport& rep) {
  return {{"rank", rep.selection.rank},
          {"D", keys(rep.D)},
          {"C", keys(rep.C)},
          {"D_bar", keys(rep.D_bar)},
          {"C_bar", keys(rep.C_bar)}};
}

json record_json(const MoveRecord& r) {
  return {{"old_face", key(r.old_face)},
          {"new_face", key(r.new_face)},
          {"removed", r.removed},
          {"added", r.added},
          {"six_vertices", r.six_vertices}};
}

// Subcommand bodies. Each fills report.doc["results"] and the checks.

void cmd_inspect(const Common& common, Report& rep) {
  const Loaded in = load(common);
  const Complex4& c = in.complex;
  const auto nv = static_cast<long>(c.vertices().size());
  const auto ne = static_cast<long>(c.edges().size());
  const auto nt = static_cast<long>(c.triangles().size());
  const auto n3 = static_cast<long>(c.tetrahedra().size());
  const auto n4 = static_cast<long>(c.num_simplices());
  rep.doc["results"] = {
      {"vertices", nv},
      {"edges", ne},
      {"triangles", nt},
      {"tetrahedra", n3},
      {"simplices", n4},
      {"euler_characteristic", nv - ne + nt - n3 + n4},
      {"closed", c.is_closed()},
      {"orientation_consistent", c.is_orientation_consistent()},
      {"movable_triangles", keys(movable_triangles(c))},
      {"has_coords", in.doc.coords.has_value()},
  };
  rep.check("orientation_consistent", c.is_orientation_consistent());
}

void cmd_realize(const Common& common, double min_quality, const std::string& output,
                 Report& rep) {
  if (!common.seed) throw UsageError("realize needs --seed");
  Loaded in = load(common);
  RandomRealizationOptions opts;
  opts.min_shape_quality = min_quality;
  const Realization r = random_realization(in.complex, *common.seed, opts);
  RealizeOptions ropts;
  ropts.allow_boundary = true;
  const FlatMetric m = realize(in.complex, r, ropts);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < in.complex.num_simplices(); ++k)
    worst = std::min(worst, shape_quality(m.V[k], m.simplex_lengths(in.complex, k)));
  rep.doc["tolerances"]["min_shape_quality"] = min_quality;
  rep.doc["results"] = {{"coords", coords_json(r)}, {"min_shape_quality_achieved", worst}};
  rep.check("nondegenerate", true);
  if (!output.empty()) {
    in.doc.coords = r.coords;
    save_complex(output, in.doc);
    rep.doc["results"]["output"] = output;
  }
}

void cmd_check_flat(const Common& common, double tol, Report& rep) {
  const Loaded in = load(common);
  const FlatMetric m = metric(common, in);
  const FlatnessReport fr = check_flat(in.complex, m, tol);
  rep.doc["tolerances"]["flat_tol"] = tol;
  rep.doc["results"] = {{"max_abs_omega", fr.max_abs_omega},
                        {"max_abs_Omega", fr.max_abs_Omega},
                        {"offending_faces", keys(fr.offending_faces)},
                        {"offending_edges", keys(fr.offending_edges)},
                        {"length_overrides", m.has_overrides}};
  rep.check("omega_vanishes", fr.offending_faces.empty(), fr.max_abs_omega, tol);
  rep.check("Omega_vanishes", fr.offending_edges.empty(), fr.max_abs_Omega, tol);
}

struct Battery {
  Battery(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}

  std::string name;
  double tolerance;
  std::size_t passed = 0;
  std::size_t trials = 0;
  double worst = 0.0;
  std::vector<std::size_t> failures;

  void add(std::size_t trial, double residual) {
    ++trials;
    worst = std::max(worst, residual);
    if (residual <= tolerance)
      ++passed;
    else
      failures.push_back(trial);
  }
};

void cmd_verify_identities(std::size_t trials, std::uint64_t seed, double tol, double cos_tol,
                           const Common& common, Report& rep) {
  const FdOptions fd = common.fd();
  std::vector<Battery> b = {
      {"dihedral_length_derivative", tol}, {"schlafli", tol},
      {"modified_schlafli", tol},          {"two_edge_relation", tol},
      {"deficit_derivative_abc", tol},     {"deficit_derivative_def", tol},
      {"coefficient_ratios", tol},         {"six_term_relation", tol},
      {"gradient_parallelism", cos_tol},
  };
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    const ClusterSix cluster = random_cluster(s);
    SimplexCoords x;
    for (int v = 0; v < 5; ++v) x[v] = cluster.points()[v];
    b[0].add(i, check_basic1(x, fd).residual);

    std::mt19937_64 rng(s);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vector10d dir;
    for (int a = 0; a < 10; ++a) dir[a] = unit(rng);
    const SchlafliResult sch = check_schlafli(SimplexLengths::from_coords(x),
                                              cluster.volume_hat(5) > 0 ? 1 : -1, dir,
                                              common.fd_step);
    b[1].add(i, sch.residual);
    b[2].add(i, sch.modified_residual);
    b[3].add(i, check_basic2(cluster).residual);

    const SixTermResult six = check_6term(cluster, fd);
    b[4].add(i, six.eq4_residual);
    b[5].add(i, six.eq5_residual);
    b[6].add(i, std::max(six.ratio12_residual, six.ratio34_residual));
    b[7].add(i, six.residual);
    b[8].add(i, 1.0 - six.cosine);
  }
  rep.doc["seed"] = seed;
  rep.doc["tolerances"]["identity_tol"] = tol;
  rep.doc["tolerances"]["parallelism_tol"] = cos_tol;
  json results = json::object();
  results["trials"] = trials;
  for (const Battery& x : b) {
    results["batteries"][x.name] = {{"passed", x.passed},
                                    {"trials", x.trials},
                                    {"max_residual", x.worst},
                                    {"failed_trials", x.failures}};
    rep.check(x.name, x.passed == x.trials, x.worst, x.tolerance);
  }
  rep.doc["results"] = std::move(results);
}

void cmd_jacobian(const Common& common, double tol, bool with_matrices,
                  std::optional<std::size_t> expect_rank, Report& rep) {
  const Loaded in = load(common);
  if (!in.complex.is_closed()) throw UsageError("jacobian needs a closed complex");
  const FlatMetric m = metric(common, in);
  const JacobianSet j = compute_jacobians(in.complex, m, common.fd());
  const SubmatrixSelection sel = rank_and_submatrix(j.domega_dL, std::nullopt, common.pivot_tol);

  // Rigid-motion-free check: a random vertex velocity field.
  std::mt19937_64 rng(derive_seed(common.seed.value_or(0), 1));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::map<VertexId, Point4> velocity;
  for (VertexId v : in.complex.vertices())
    velocity[v] = Point4(unit(rng), unit(rng), unit(rng), unit(rng));
  const double kernel = kernel_residual(
      j.domega_dL, induced_length_change(in.complex, m.placement, velocity));

  const double sym = asymmetry(j.domega_dS);
  const double conj = conjugacy_residual(j.dBigOmega_dS, j.domega_dL);
  rep.doc["tolerances"]["matrix_tol"] = tol;
  json results = {{"rank", sel.rank},
                  {"faces", keys(j.faces)},
                  {"edges", keys(j.edges)},
                  {"symmetry_residual", sym},
                  {"conjugacy_residual", conj},
                  {"kernel_residual", kernel}};
  if (with_matrices) {
    results["domega_dL"] = matrix_json(j.domega_dL);
    results["domega_dS"] = matrix_json(j.domega_dS);
    results["dBigOmega_dS"] = matrix_json(j.dBigOmega_dS);
  }
  rep.doc["results"] = std::move(results);
  rep.check("symmetry", sym <= tol, sym, tol);
  rep.check("conjugacy", conj <= tol, conj, tol);
  rep.check("flat_deformations_in_kernel", kernel <= tol, kernel, tol);
  if (expect_rank)
    rep.check("rank", sel.rank == *expect_rank, static_cast<double>(sel.rank));
}

void cmd_move(const Common& common, const std::string& face, const std::string& output,
              Report& rep) {
  const Triangle t = parse_face(face);
  const Loaded in = load(common);
  rep.doc["results"]["face"] = key(t);
  auto [moved, record] = pachner_33(in.complex, t);
  ComplexDocument out = in.doc;
  out.simplices = moved.ordered_simplices();
  rep.doc["results"]["record"] = record_json(record);
  rep.doc["results"]["document"] = json::parse(serialize(out));
  rep.check("move_applied", true);
  rep.check("orientation_consistent", moved.is_orientation_consistent());
  if (!output.empty()) {
    save_complex(output, out);
    rep.doc["results"]["output"] = output;
  }
}

void cmd_invariant(const Common& common, Report& rep) {
  const Loaded in = load(common);
  if (!in.complex.is_closed()) throw UsageError("invariant needs a closed complex");
  const FlatMetric m = metric(common, in);
  const InvariantReport ir = full_invariant(in.complex, m, common.fd(), common.pivot_tol);
  rep.doc["results"] = {{"value", ir.value},
                        {"restricted", value_json(ir.restricted)},
                        {"selection", selection_json(ir)}};
  rep.check("nonsingular_selection", true);
}

void cmd_compare(const Common& common, const std::string& face, double tol, Report& rep) {
  const Triangle t = parse_face(face);
  const Loaded in = load(common);
  if (!in.complex.is_closed()) throw UsageError("compare needs a closed complex");
  const FlatMetric m = metric(common, in);
  rep.doc["tolerances"]["invariance_tol"] = tol;
  rep.doc["results"]["face"] = key(t);
  const InvariantReport ir = compare_under_move(in.complex, m, t, common.fd(), common.pivot_tol);
  const MoveComparison& mv = *ir.move;
  rep.doc["results"] = {
      {"face", key(t)},
      {"record", record_json(mv.record)},
      {"selection", selection_json(ir)},
      {"rows_after", keys(mv.rows_after)},
      {"before", value_json(mv.before)},
      {"after", value_json(mv.after)},
      {"ratio", mv.ratio},
      {"deviation", mv.deviation},
      {"rank_before", mv.rank_before},
      {"rank_after", mv.rank_after},
      {"detB_ratio", mv.detB_ratio},
      {"gradient_ratio", mv.gradient_ratio},
      {"row_swap_residual", mv.row_swap_residual},
  };
  rep.check("move_invariance", mv.deviation <= tol, mv.deviation, tol);
  rep.check("row_swap_factor", mv.row_swap_residual <= tol, mv.row_swap_residual, tol);
  rep.check("rank_preserved", mv.rank_before == mv.rank_after);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric invariant of 3->3 Pachner moves on triangulated 4-manifolds",
               "pachner4"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  std::uint64_t seed_value = 0;
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", common.input, "Complex document (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_numeric = [&](CLI::App* sub) {
    sub->add_option("--fd-step", common.fd_step, "Relative finite-difference step")
        ->capture_default_str();
    sub->add_flag("--no-richardson", common.no_richardson, "Plain central differences");
    sub->add_option("--pivot-tol", common.pivot_tol, "Relative pivot threshold")
        ->capture_default_str();
  };
  auto add_seed = [&](CLI::App* sub, const char* help) {
    return sub->add_option("--seed", seed_value, help);
  };

  auto* inspect = app.add_subcommand("inspect", "Counts, closedness and orientation");
  add_input(inspect);

  auto* realize_cmd = app.add_subcommand("realize", "Sample a flat realization");
  add_input(realize_cmd);
  auto* realize_seed = add_seed(realize_cmd, "Sampling seed")->required();
  double min_quality = 0.05;
  std::string output;
  realize_cmd->add_option("--min-quality", min_quality, "Shape-quality floor")
      ->capture_default_str();
  realize_cmd->add_option("--output", output, "Write the document with coords here");

  auto* flat_cmd = app.add_subcommand("check-flat", "Deficit angles at faces and edges");
  add_input(flat_cmd);
  auto* flat_seed = add_seed(flat_cmd, "Sample coords instead of using the document's");
  double flat_tol = kDefaultFlatTolerance;
  flat_cmd->add_option("--tol", flat_tol, "Absolute tolerance in radians")->capture_default_str();

  auto* ident = app.add_subcommand("verify-identities", "Local identities on random clusters");
  std::size_t trials = 100;
  std::uint64_t ident_seed = 7;
  double ident_tol = 1e-6, cos_tol = 1e-10;
  ident->add_option("--trials", trials, "Number of random clusters")->capture_default_str();
  ident->add_option("--seed", ident_seed, "Batch seed")->capture_default_str();
  ident->add_option("--tol", ident_tol, "Relative residual tolerance")->capture_default_str();
  ident->add_option("--cos-tol", cos_tol, "Tolerance on 1 - |cos|")->capture_default_str();
  add_numeric(ident);

  auto* jac = app.add_subcommand("jacobian", "Derivative matrices, rank and identities");
  add_input(jac);
  add_numeric(jac);
  auto* jac_seed = add_seed(jac, "Sample coords instead of using the document's");
  double jac_tol = 1e-6;
  bool no_matrices = false;
  std::size_t expect_rank = 0;
  jac->add_option("--tol", jac_tol, "Relative tolerance")->capture_default_str();
  jac->add_flag("--no-matrices", no_matrices, "Omit the matrices from the report");
  auto* expect_rank_opt = jac->add_option("--expect-rank", expect_rank, "Required rank");

  auto* move = app.add_subcommand("move", "Apply a 3->3 move");
  add_input(move);
  std::string face;
  move->add_option("--face", face, "Triangle a,b,c")->required();
  move->add_option("--output", output, "Write the new document here");

  auto* inv = app.add_subcommand("invariant", "Invariant with a complete-pivoting selection");
  add_input(inv);
  add_numeric(inv);
  auto* inv_seed = add_seed(inv, "Sample coords instead of using the document's");

  auto* cmp = app.add_subcommand("compare", "Invariant before and after a 3->3 move");
  add_input(cmp);
  add_numeric(cmp);
  auto* cmp_seed = add_seed(cmp, "Sample coords instead of using the document's");
  double cmp_tol = 1e-6;
  cmp->add_option("--face", face, "Triangle a,b,c")->required();
  cmp->add_option("--tol", cmp_tol, "Tolerance on | |ratio| - 1 |")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  for (auto* opt : {realize_seed, flat_seed, jac_seed, inv_seed, cmp_seed})
    if (opt && opt->count()) common.seed = seed_value;

  Report rep;
  rep.doc["command"] = sub->get_name();
  rep.doc["arguments"] = std::vector<std::string>(args.begin() + 1, args.end());
  rep.doc["version"] = kVersion;
  rep.doc["tolerances"] = common.tolerances();
  rep.doc["checks"] = json::array();
  if (common.seed) rep.doc["seed"] = *common.seed;
  if (!common.input.empty()) rep.doc["input"] = common.input;

  const auto start = std::chrono::steady_clock::now();
  try {
    const std::string name = sub->get_name();
    if (name == "inspect") cmd_inspect(common, rep);
    else if (name == "realize") cmd_realize(common, min_quality, output, rep);
    else if (name == "check-flat") cmd_check_flat(common, flat_tol, rep);
    else if (name == "verify-identities")
      cmd_verify_identities(trials, ident_seed, ident_tol, cos_tol, common, rep);
    else if (name == "jacobian")
      cmd_jacobian(common, jac_tol, !no_matrices,
                   expect_rank_opt->count() ? std::optional<std::size_t>(expect_rank)
                                            : std::nullopt,
                   rep);
    else if (name == "move") cmd_move(common, face, output, rep);
    else if (name == "invariant") cmd_invariant(common, rep);
    else if (name == "compare") cmd_compare(common, face, cmp_tol, rep);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << sub->help();
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    rep.doc["error"] = {{"message", e.what()}};
    rep.pass = false;
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - start);
  rep.doc["pass"] = rep.pass;
  rep.doc["timing"] = {{"elapsed_ms", elapsed.count()}};
  out << rep.doc.dump(2) << "\n";
  return rep.pass ? kExitPass : kExitCheckFailed;
}

}  // namespace pachner4
