// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "pachner4/cli.hpp"
#include "pachner4/error.hpp"
#include "pachner4/invariant.hpp"
#include "pachner4/io.hpp"
#include "swap_path.hpp"

using namespace pachner4;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Loaded {
  Complex4 c;
  FlatMetric m;
};

Loaded load_fixture(const char* name) {
  const ComplexDocument doc = load_complex(oracle::fixture(name));
  Complex4 c = doc.complex();
  FlatMetric m = realize(c, doc.realization(), doc.realize_options());
  return {std::move(c), std::move(m)};
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SimplexCoords hat(const ClusterSix& cl, int x) {
  SimplexCoords s;
  for (int v = 0, k = 0; v < 6; ++v)
    if (v != x) s[k++] = cl.points()[v];
  return s;
}

Outcome local_derivative() {
  std::mt19937_64 rng(kSeed);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const SimplexCoords x = oracle::random_simplex(rng);
    const double predicted = oracle::area(x[1], x[2], x[3]) / oracle::volume(x);
    worst = std::max(worst, oracle::rel(check_basic1(x).measured, predicted));
  }
  return {worst <= 1e-6, fmt("100 simplices, max relative residual %.2e (tol 1e-6)", worst)};
}

Outcome schlafli() {
  std::mt19937_64 rng(kSeed + 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0, worst_mod = 0;
  for (int i = 0; i < 100; ++i) {
    const SimplexCoords x = oracle::random_simplex(rng);
    Vector10d dir;
    for (int a = 0; a < 10; ++a) dir[a] = u(rng);
    const auto r =
        check_schlafli(SimplexLengths::from_coords(x), oracle::volume(x) > 0 ? 1 : -1, dir);
    worst = std::max(worst, r.residual);
    worst_mod = std::max(worst_mod, r.modified_residual);
  }
  return {worst <= 1e-6 && worst_mod <= 1e-6,
          fmt("100 simplices, Schlafli %.2e, edge identity %.2e (tol 1e-6)", worst, worst_mod)};
}

Outcome closed_form_cluster() {
  double worst = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const ClusterSix cl = random_cluster(derive_seed(kSeed + 2, i));
    const auto& p = cl.points();
    double v[6];
    for (int x = 0; x < 6; ++x) v[x] = oracle::volume(hat(cl, x));
    const double s_abc = oracle::area(p[0], p[1], p[2]), s_def = oracle::area(p[3], p[4], p[5]);
    const SixTermResult six = check_6term(cl);
    // AB is pair 0 and DE pair 12 among the lexicographic pairs of 0..5.
    worst = std::max(worst, oracle::rel(six.grad_ABC[0], -s_abc / 24 * v[0] * v[1] /
                                                             (v[3] * v[4] * v[5])));
    worst = std::max(worst, oracle::rel(six.grad_DEF[12], -s_def / 24 * v[3] * v[4] /
                                                              (v[0] * v[1] * v[2])));
  }
  return {worst <= 1e-6, fmt("100 clusters, max relative residual %.2e (tol 1e-6)", worst)};
}

Outcome six_term() {
  double worst = 0, worst_cos = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const SixTermResult six = check_6term(random_cluster(derive_seed(kSeed + 3, i)));
    worst = std::max(worst, six.residual);
    worst_cos = std::max(worst_cos, 1.0 - six.cosine);
  }
  return {worst <= 1e-6 && worst_cos <= 1e-10,
          fmt("100 clusters, 15-component residual %.2e (tol 1e-6), 1-cos %.2e (tol 1e-10)",
              worst, worst_cos)};
}

Outcome flatness() {
  const Complex4 c = Complex4::build(boundary_of_5_simplex());
  double w = 0, W = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const FlatMetric m = realize(c, random_realization(c, derive_seed(kSeed + 4, i)));
    const FlatnessReport f = check_flat(c, m, 1e-9);
    w = std::max(w, f.max_abs_omega);
    W = std::max(W, f.max_abs_Omega);
  }
  return {w < 1e-9 && W < 1e-9,
          fmt("20 realizations, max|omega| %.2e, max|Omega| %.2e (bound 1e-9)", w, W)};
}

Outcome symmetry_conjugacy() {
  Outcome o;
  for (const char* name : {"boundary_delta5.json", "subdivided.json", "subdivided_large.json"}) {
    const auto [c, m] = load_fixture(name);
    const JacobianSet j = compute_jacobians(c, m);
    const double sym = asymmetry(j.domega_dS);
    const double conj = conjugacy_residual(j.dBigOmega_dS, j.domega_dL);
    o.pass = o.pass && sym <= 1e-6 && conj <= 1e-6;
    o.detail += fmt("%s%s sym %.1e conj %.1e", o.detail.empty() ? "" : "; ", name, sym, conj);
  }
  o.detail += " (tol 1e-6)";
  return o;
}

Outcome rank_delta5() {
  const Complex4 c = Complex4::build(boundary_of_5_simplex());
  std::mt19937_64 rng(kSeed + 5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Outcome o;
  double worst = 0;
  std::size_t bad_rank = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const FlatMetric m = realize(c, random_realization(c, derive_seed(kSeed + 5, i)));
    const Eigen::MatrixXd a = assemble_domega_dL(c, m);
    if (rank_and_submatrix(a).rank != 1) ++bad_rank;
    for (int t = 0; t < 5; ++t) {
      std::map<VertexId, Point4> disp;
      for (VertexId v : c.vertices()) disp[v] = Point4(u(rng), u(rng), u(rng), u(rng));
      worst = std::max(worst, kernel_residual(a, induced_length_change(c, m.placement, disp)));
    }
  }
  o.pass = bad_rank == 0 && worst <= 1e-6;
  o.detail = fmt("10 realizations, rank != 1 in %zu, max kernel residual %.2e (tol 1e-6)",
                 bad_rank, worst);
  return o;
}

Outcome move_invariance_delta5() {
  const auto [c, m] = load_fixture("boundary_delta5.json");
  std::size_t ok = 0;
  std::string first_error;
  for (const auto& t : c.triangles()) {
    try {
      const InvariantReport rep = compare_under_move(c, m, t);
      if (rep.move->deviation <= 1e-6) ++ok;
    } catch (const Error& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }
  Outcome o;
  o.pass = ok == c.triangles().size();
  o.detail = fmt("%zu of %zu triangles of the boundary of the 5-simplex", ok, c.triangles().size());
  if (!first_error.empty()) o.detail += "; move undefined: " + first_error;
  return o;
}

// Not a numbered criterion: the same bound where the move is defined.
Outcome move_invariance_fixtures() {
  Outcome o;
  for (const char* name : {"subdivided.json", "subdivided_large.json"}) {
    const auto [c, m] = load_fixture(name);
    double worst = 0;
    std::size_t n = 0;
    for (const auto& t : movable_triangles(c)) {
      const InvariantReport rep = compare_under_move(c, m, t);
      worst = std::max(worst, rep.move->deviation);
      o.pass = o.pass && rep.move->rank_before == rep.move->rank_after;
      ++n;
    }
    o.pass = o.pass && n > 0 && worst <= 1e-6;
    o.detail += fmt("%s%s %zu moves, max deviation %.2e", o.detail.empty() ? "" : "; ", name, n,
                    worst);
  }
  o.detail += " (tol 1e-6)";
  return o;
}

Outcome selection_independence() {
  Outcome o;
  for (const char* name : {"subdivided.json", "subdivided_large.json"}) {
    const auto [c, m] = load_fixture(name);
    const JacobianSet j = compute_jacobians(c, m);
    const SubmatrixSelection sel = rank_and_submatrix(j.domega_dL);
    double contract = 0, composite = 0;
    std::size_t edge = 0, face = 0;
    for (const auto& s : swap_path::walk(j, sel, 10)) {
      contract = std::max(contract, s.contract_residual);
      composite = std::max(composite, s.composite_deviation);
      (s.edge ? edge : face) += 1;
    }
    o.pass = o.pass && sel.rank >= 2 && edge > 0 && face > 0 && contract <= 1e-6 &&
             composite <= 1e-6;
    o.detail += fmt("%s%s rank %zu, %zu edge + %zu face swaps, contract %.1e, composite %.1e",
                    o.detail.empty() ? "" : "; ", name, sel.rank, edge, face, contract, composite);
  }
  o.detail += " (tol 1e-6)";
  return o;
}

std::string cli_numbers(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  std::vector<std::string> full{"pachner4"};
  full.insert(full.end(), args.begin(), args.end());
  run_cli(full, out, err);
  auto j = nlohmann::json::parse(out.str());
  j.erase("timing");
  return j.dump();
}

Outcome determinism() {
  const std::string d5 = oracle::fixture("boundary_delta5.json").string();
  const std::string sub = oracle::fixture("subdivided.json").string();
  const std::string per = oracle::fixture("perturbed_delta5.json").string();
  const std::vector<std::vector<std::string>> cmds = {
      {"inspect", sub},
      {"realize", d5, "--seed", "17"},
      {"check-flat", per},
      {"check-flat", d5, "--seed", "17"},
      {"verify-identities", "--trials", "10", "--seed", "17"},
      {"jacobian", sub},
      {"move", sub, "--face", "0,2,3"},
      {"invariant", d5, "--seed", "17"},
      {"compare", sub, "--face", "0,2,3"},
  };
  std::size_t same = 0;
  for (const auto& c : cmds) same += cli_numbers(c) == cli_numbers(c);
  return {same == cmds.size(), fmt("%zu of %zu commands reproduce their reports", same, cmds.size())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    const char* name;
    std::function<Outcome()> run;
    double budget_s;  // 0 when the criterion sets no runtime bound
  };
  const std::vector<Criterion> criteria = {
      {"1", "local derivative formula", local_derivative, 5},
      {"2", "Schlafli and edge identities", schlafli, 5},
      {"3", "closed-form deficit derivatives on clusters", closed_form_cluster, 10},
      {"4", "6-term relation", six_term, 0},
      {"5", "flatness of the boundary of the 5-simplex", flatness, 0},
      {"6", "symmetry and conjugacy", symmetry_conjugacy, 0},
      {"7", "rank and kernel on the boundary of the 5-simplex", rank_delta5, 0},
      {"8", "move invariance on the boundary of the 5-simplex", move_invariance_delta5, 10},
      {"8+", "move invariance on subdivided fixtures (supplementary)", move_invariance_fixtures, 10},
      {"9", "basis-change contracts and selection independence", selection_independence, 0},
      {"10", "determinism of the command-line tool", determinism, 0},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += fmt(" [over the %.0f s budget]", c.budget_s);
    }
    std::printf("%s criterion %-2s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.label, c.name,
                o.detail.c_str(), secs);
    all = all && o.pass;
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
