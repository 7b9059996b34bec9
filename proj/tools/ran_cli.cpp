// Command line front end: instance generation, graph metrics, longest paths,
// the analytic constant table, branching walks, urn draws and the exponent
// integral. Exit codes: 0 success, 1 data/invariant failure, 2 bad
// arguments, 3 I/O failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ran/analytic.hpp"
#include "ran/branching.hpp"
#include "ran/core.hpp"
#include "ran/harness.hpp"
#include "ran/longest_path.hpp"
#include "ran/metrics.hpp"
#include "ran/serialize.hpp"
#include "ran/urn.hpp"

namespace {

using nlohmann::json;
using namespace ran;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Out {
 public:
  explicit Out(const std::string& path) {
    if (path.empty()) {
      os_ = &std::cout;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot open output file: " + path);
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }
  void finish() {
    os_->flush();
    if (!*os_) throw IoError("writing output failed");
  }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RanInstance load_instance(const std::string& in, u64 n, u64 seed) {
  if (in.empty()) {
    if (n < 3) throw std::invalid_argument("need --n >= 3 or --in FILE");
    return generate_ran(static_cast<u32>(n), seed);
  }
  std::ifstream f(in, std::ios::binary);
  if (!f) throw IoError("cannot open input file: " + in);
  int c = f.peek();
  while (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
    f.get();
    c = f.peek();
  }
  if (c == '{') return read_json(f);
  return replay(read_trace(f));
}

void require_valid(const RanInstance& inst) {
  const ValidationReport rep = validate(inst);
  if (!rep.ok) throw std::runtime_error("instance validation failed: " + rep.violation);
}

// ----------------------------------------------------------------- generate

int cmd_generate(u64 n, u64 seed, const std::string& format, const std::string& out) {
  const RanInstance inst = generate_ran(static_cast<u32>(n), seed);
  require_valid(inst);
  Out o(out);
  if (format == "trace")
    write_trace(o.stream(), inst.graph.trace());
  else if (format == "edges")
    write_edges(o.stream(), inst.graph);
  else
    write_json(o.stream(), inst);
  o.finish();
  return 0;
}

// ------------------------------------------------------------------ metrics

int cmd_metrics(const std::string& in, u64 n, u64 seed, u64 pairs, u64 pair_seed,
                const std::string& format, const std::string& out) {
  const RanInstance inst = load_instance(in, n, seed);
  require_valid(inst);
  const MetricsReport rep = compute_metrics(inst, pairs, pair_seed);
  Out o(out);
  if (format == "json") {
    json j{{"n", rep.n},
           {"seed", rep.seed},
           {"diameter", rep.diameter},
           {"radius", rep.radius},
           {"aux_height", rep.aux_height},
           {"avg_dist_est", rep.avg_distance},
           {"stderr", rep.avg_distance_stderr},
           {"pairs", pairs}};
    o.stream() << j.dump(2) << "\n";
  } else {
    o.stream() << MetricsReport::csv_header() << "\n" << rep.csv_row() << "\n";
  }
  o.finish();
  return 0;
}

// ------------------------------------------------------------- longest path

int cmd_longest_path(const std::string& in, u64 n, u64 seed, const std::string& method,
                     u64 from, u64 to, bool print_path, const std::vector<u64>& n_grid,
                     u64 trials, unsigned threads, const std::string& format,
                     const std::string& out) {
  Out o(out);
  if (!n_grid.empty()) {
    std::vector<u32> grid(n_grid.begin(), n_grid.end());
    const std::vector<LmTrendRow> rows = lm_trend(grid, trials, seed, threads);
    if (format == "json") {
      json j = json::array();
      for (const LmTrendRow& r : rows)
        j.push_back({{"n", r.n},
                     {"trial", r.trial},
                     {"length_vertices", r.length_vertices},
                     {"ratio", r.ratio}});
      o.stream() << j.dump(2) << "\n";
    } else {
      o.stream() << "n,trial,length_vertices,ratio\n";
      for (const LmTrendRow& r : rows)
        o.stream() << r.n << "," << r.trial << "," << r.length_vertices << ","
                   << fmt_double(r.ratio) << "\n";
    }
    o.finish();
    return 0;
  }

  const RanInstance inst = load_instance(in, n, seed);
  require_valid(inst);
  PathResult res;
  if (method == "exact")
    res = longest_path_exact(inst);
  else if (method == "brute")
    res = longest_path_brute(inst.graph);
  else if (method == "constructive") {
    if (from > 2 || to > 2 || from == to)
      throw std::invalid_argument("--from/--to must be distinct corners in {0,1,2}");
    res = constructive_boundary_path(inst, static_cast<u32>(from),
                                     static_cast<u32>(to),
                                     3 - static_cast<u32>(from) - static_cast<u32>(to));
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }
  if (!is_simple_path(inst.graph, res.vertices))
    throw std::runtime_error("computed path failed the simplicity check");

  if (format == "json") {
    json j{{"n", inst.graph.n},
           {"seed", inst.graph.seed},
           {"method", res.method},
           {"length_vertices", res.length_vertices()},
           {"length_edges", res.length_edges()}};
    if (print_path) j["path"] = res.vertices;
    o.stream() << j.dump(2) << "\n";
  } else {
    o.stream() << "n,seed,method,length_vertices,length_edges\n";
    o.stream() << inst.graph.n << "," << inst.graph.seed << "," << res.method << ","
               << res.length_vertices() << "," << res.length_edges() << "\n";
    if (print_path) {
      o.stream() << "path";
      for (u32 v : res.vertices) o.stream() << "," << v;
      o.stream() << "\n";
    }
  }
  o.finish();
  return 0;
}

// ---------------------------------------------------------------- constants

int cmd_constants(double tol, bool rho_table, const std::string& format,
                  const std::string& out) {
  const AnalyticContext ctx = build_analytic_context(tol);
  struct RowDef {
    const char* name;
    double value;
    const char* definition;
  };
  const RowDef rows[] = {
      {"xhat", ctx.xhat,
       "root in (0.1 0.2) of x(x-1)h'(x)/h(x) = log h(x) with h(x) = "
       "6x^3/((1-2x)(1-x))"},
      {"c", ctx.c, "(1 - 1/xhat)/log h(xhat)"},
      {"wh_at_0.1", ctx.wh_at_01, "x(x-1)h'(x)/h(x) - log h(x) at x = 0.1"},
      {"wh_at_0.2", ctx.wh_at_02, "x(x-1)h'(x)/h(x) - log h(x) at x = 0.2"},
      {"psi", ctx.psi, "root in (0 1.5) of 2x log(3e/(2x)) = 1"},
      {"eta1", ctx.eta1, "6/11"},
      {"eta2", ctx.eta2, "root with x > 1 of exp(1/x) = 3e/x"},
      {"zeta_integral_0.88", ctx.zeta_value,
       "I(0.88): outer t in (1/3 1), weight 1/(2 sqrt(t)); inner theta from "
       "pi/4 to asin(sqrt(min(1 t/(1-t)))), integrand (2/pi)(t^0.88 + "
       "((1-t) sin^2 theta)^0.88)"},
      {"k_min_lower", static_cast<double>(ctx.k_min_lower),
       "smallest series order whose root bracket (0.1 0.2) brackets a sign "
       "change, lower family"},
      {"k_min_upper", static_cast<double>(ctx.k_min_upper),
       "same for the upper family"},
  };

  Out o(out);
  if (format == "json") {
    json j;
    j["tol"] = ctx.tol;
    for (const RowDef& r : rows)
      j["constants"][r.name] = {{"value", r.value}, {"definition", r.definition}};
    json table = json::array();
    for (const RhoEntry& e : ctx.rho_table)
      table.push_back({{"k", e.k},
                       {"x_lower", e.x_lower},
                       {"rho_lower", e.rho_lower},
                       {"b_lower", e.b_lower},
                       {"x_upper", e.x_upper},
                       {"rho_upper", e.rho_upper},
                       {"b_upper", e.b_upper}});
    j["rho_table"] = table;
    o.stream() << j.dump(2) << "\n";
  } else if (rho_table) {
    o.stream() << "k,x_lower,rho_lower,b_lower,x_upper,rho_upper,b_upper\n";
    for (const RhoEntry& e : ctx.rho_table)
      o.stream() << e.k << "," << fmt_double(e.x_lower) << ","
                 << fmt_double(e.rho_lower) << "," << e.b_lower << ","
                 << fmt_double(e.x_upper) << "," << fmt_double(e.rho_upper) << ","
                 << e.b_upper << "\n";
  } else {
    o.stream() << "name,value,definition\n";
    for (const RowDef& r : rows)
      o.stream() << r.name << "," << fmt_double(r.value) << ",\"" << r.definition
                 << "\"\n";
  }
  o.finish();
  return 0;
}

// ---------------------------------------------------------------- branching

BranchVariant parse_variant(const std::string& s) {
  if (s == "plain") return BranchVariant::plain;
  if (s == "pruned") return BranchVariant::pruned;
  if (s == "boosted") return BranchVariant::boosted;
  throw std::invalid_argument("unknown variant: " + s);
}

int cmd_branching(const std::string& variant_s, u64 k, double t,
                  const std::vector<double>& t_grid, u64 trials, u64 seed,
                  u64 max_nodes, const std::string& format, const std::string& out) {
  const BranchVariant variant = parse_variant(variant_s);
  BranchLimits limits;
  if (max_nodes) limits.max_nodes = max_nodes;
  Out o(out);
  if (!t_grid.empty()) {
    const GrowthResult res =
        growth_experiment(variant, static_cast<u32>(k), t_grid, trials, seed, limits);
    if (format == "json") {
      json j;
      j["slope_log_count"] = res.slope_log_count;
      j["slope_aux_height"] = res.slope_aux_height;
      json rows = json::array();
      for (const GrowthRow& r : res.rows)
        rows.push_back({{"t", r.t},
                        {"trial", r.trial},
                        {"nodes", r.node_count},
                        {"height", r.height},
                        {"aux_height", r.aux_height}});
      j["rows"] = rows;
      o.stream() << j.dump(2) << "\n";
    } else {
      o.stream() << "t,trial,nodes,height,aux_height\n";
      for (const GrowthRow& r : res.rows)
        o.stream() << fmt_double(r.t) << "," << r.trial << "," << r.node_count << ","
                   << r.height << "," << r.aux_height << "\n";
      o.stream() << "# slope_log_count=" << fmt_double(res.slope_log_count) << "\n";
      o.stream() << "# slope_aux_height=" << fmt_double(res.slope_aux_height) << "\n";
    }
    o.finish();
    return 0;
  }

  if (format == "json") {
    json rows = json::array();
    for (u64 tr = 0; tr < trials; ++tr) {
      const BranchTree tree =
          branch_simulate(variant, static_cast<u32>(k), t, seed + tr, limits);
      rows.push_back({{"trial", tr},
                      {"nodes", tree.node_count()},
                      {"height", tree.height()},
                      {"aux_height", auxiliary_height_of(tree)}});
    }
    o.stream() << rows.dump(2) << "\n";
  } else {
    o.stream() << "trial,nodes,height,aux_height\n";
    for (u64 tr = 0; tr < trials; ++tr) {
      const BranchTree tree =
          branch_simulate(variant, static_cast<u32>(k), t, seed + tr, limits);
      o.stream() << tr << "," << tree.node_count() << "," << tree.height() << ","
                 << auxiliary_height_of(tree) << "\n";
    }
  }
  o.finish();
  return 0;
}

// ---------------------------------------------------------------------- urn

int cmd_urn(u64 w0, u64 b0, u64 s, u64 draws, u64 trials, u64 seed, double beta_p,
            double beta_q, unsigned threads, const std::string& format,
            const std::string& out) {
  const std::vector<double> fractions =
      run_trials<double>(trials, threads, [&](u64 tr) {
        return urn_simulate(w0, b0, s, draws, seed + tr).white_fraction();
      });
  const bool with_ks = beta_p > 0 && beta_q > 0;
  double ks = 0.0, crit = 0.0;
  if (with_ks) {
    std::vector<double> copy = fractions;
    ks = ks_distance(std::move(copy),
                     [&](double x) { return beta_cdf(x, beta_p, beta_q); });
    crit = ks_critical(trials, 1e-3);
  }
  Out o(out);
  if (format == "json") {
    json j;
    j["params"] = {{"w0", w0}, {"b0", b0}, {"s", s},
                   {"draws", draws}, {"trials", trials}, {"seed", seed}};
    j["white_fractions"] = fractions;
    if (with_ks) {
      j["ks_distance"] = ks;
      j["ks_critical_alpha_1e-3"] = crit;
      j["beta"] = {{"p", beta_p}, {"q", beta_q}};
    }
    o.stream() << j.dump(2) << "\n";
  } else {
    o.stream() << "trial,white_fraction\n";
    for (u64 tr = 0; tr < trials; ++tr)
      o.stream() << tr << "," << fmt_double(fractions[tr]) << "\n";
    if (with_ks) {
      o.stream() << "# ks_distance=" << fmt_double(ks) << "\n";
      o.stream() << "# ks_critical_alpha_1e-3=" << fmt_double(crit) << "\n";
    }
  }
  o.finish();
  return 0;
}

// ------------------------------------------------------------ zeta integral

int cmd_zeta(double zeta, double tol, const std::string& format,
             const std::string& out) {
  const double value = zeta_integral(zeta, tol);
  Out o(out);
  if (format == "json") {
    json j{{"zeta", zeta}, {"value", value}, {"tol", tol}};
    o.stream() << j.dump(2) << "\n";
  } else {
    o.stream() << "zeta,value,tol\n"
               << fmt_double(zeta) << "," << fmt_double(value) << ","
               << fmt_double(tol) << "\n";
  }
  o.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random plane triangulation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ran 1.0.0");

  u64 seed = 1;
  u64 trials = 1;
  unsigned threads = 1;
  std::string out_path;
  double tol = 1e-10;
  std::string format = "csv";

  u64 gen_n = 0;
  std::string gen_format = "trace";
  CLI::App* c_gen = app.add_subcommand("generate", "grow an instance and export it");
  c_gen->add_option("--n", gen_n, "vertex count")->required()->check(CLI::Range(u64{3}, u64{100000000}));
  c_gen->add_option("--seed", seed, "RNG seed");
  c_gen->add_option("--format", gen_format, "export form")
      ->check(CLI::IsMember({"trace", "edges", "json"}));
  c_gen->add_option("--out", out_path, "output file (default stdout)");

  std::string in_path;
  u64 m_n = 0, m_pairs = 2000, m_pair_seed = 1;
  CLI::App* c_met = app.add_subcommand("metrics", "diameter, radius, heights, distances");
  c_met->add_option("--in", in_path, "trace or json instance file");
  c_met->add_option("--n", m_n, "generate with this vertex count instead");
  c_met->add_option("--seed", seed, "RNG seed for --n");
  c_met->add_option("--pairs", m_pairs, "sampled vertex pairs for the distance estimate");
  c_met->add_option("--pair-seed", m_pair_seed, "seed for pair sampling");
  c_met->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  c_met->add_option("--out", out_path, "output file (default stdout)");

  u64 lp_n = 0, lp_from = 0, lp_to = 1;
  std::string lp_method = "exact";
  bool lp_print = false;
  std::vector<u64> lp_grid;
  CLI::App* c_lp = app.add_subcommand("longest-path", "longest simple path search");
  c_lp->add_option("--in", in_path, "trace or json instance file");
  c_lp->add_option("--n", lp_n, "generate with this vertex count instead");
  c_lp->add_option("--seed", seed, "RNG seed");
  c_lp->add_option("--method", lp_method, "exact, constructive or brute")
      ->check(CLI::IsMember({"exact", "constructive", "brute"}));
  c_lp->add_option("--from", lp_from, "constructive start corner (0..2)");
  c_lp->add_option("--to", lp_to, "constructive end corner (0..2)");
  c_lp->add_flag("--print-path", lp_print, "include the vertex sequence");
  c_lp->add_option("--n-grid", lp_grid, "trend mode: vertex counts")->delimiter(',');
  c_lp->add_option("--trials", trials, "trend mode: trials per grid point");
  c_lp->add_option("--threads", threads, "worker threads");
  c_lp->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  c_lp->add_option("--out", out_path, "output file (default stdout)");

  bool rho_table = false;
  CLI::App* c_const = app.add_subcommand("constants", "analytic constants with their defining equations");
  c_const->add_option("--tol", tol, "root finding tolerance");
  c_const->add_flag("--rho-table", rho_table, "print the per-order rate table");
  c_const->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  c_const->add_option("--out", out_path, "output file (default stdout)");

  std::string br_variant = "plain";
  u64 br_k = 1, br_max_nodes = 0;
  double br_t = 4.0;
  std::vector<double> br_grid;
  CLI::App* c_br = app.add_subcommand("branching", "continuous time branching walks");
  c_br->add_option("--variant", br_variant, "plain, pruned or boosted")
      ->check(CLI::IsMember({"plain", "pruned", "boosted"}));
  c_br->add_option("--k", br_k, "saturation distance for pruned/boosted");
  c_br->add_option("--t", br_t, "time horizon");
  c_br->add_option("--t-grid", br_grid, "growth mode: time grid")->delimiter(',');
  c_br->add_option("--trials", trials, "independent walks");
  c_br->add_option("--seed", seed, "RNG seed");
  c_br->add_option("--max-nodes", br_max_nodes, "override the node budget");
  c_br->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  c_br->add_option("--out", out_path, "output file (default stdout)");

  u64 u_w0 = 1, u_b0 = 2, u_s = 2, u_draws = 10000;
  double u_beta_p = 0.0, u_beta_q = 0.0;
  CLI::App* c_urn = app.add_subcommand("urn", "two color urn draws");
  c_urn->add_option("--w0", u_w0, "initial white mass");
  c_urn->add_option("--b0", u_b0, "initial black mass");
  c_urn->add_option("--s", u_s, "mass added per draw");
  c_urn->add_option("--draws", u_draws, "draws per trial");
  c_urn->add_option("--trials", trials, "independent trials");
  c_urn->add_option("--seed", seed, "RNG seed");
  c_urn->add_option("--beta-p", u_beta_p, "compare against Beta(p,q): p");
  c_urn->add_option("--beta-q", u_beta_q, "compare against Beta(p,q): q");
  c_urn->add_option("--threads", threads, "worker threads");
  c_urn->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  c_urn->add_option("--out", out_path, "output file (default stdout)");

  double z_zeta = 0.88, z_tol = 1e-8;
  CLI::App* c_zeta = app.add_subcommand("zeta-integral", "exponent integral I(zeta)");
  c_zeta->add_option("--zeta", z_zeta, "exponent");
  c_zeta->add_option("--tol", z_tol, "absolute quadrature tolerance");
  c_zeta->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  c_zeta->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c_gen)) return cmd_generate(gen_n, seed, gen_format, out_path);
    if (app.got_subcommand(c_met))
      return cmd_metrics(in_path, m_n, seed, m_pairs, m_pair_seed, format, out_path);
    if (app.got_subcommand(c_lp))
      return cmd_longest_path(in_path, lp_n, seed, lp_method, lp_from, lp_to, lp_print,
                              lp_grid, trials, threads, format, out_path);
    if (app.got_subcommand(c_const)) return cmd_constants(tol, rho_table, format, out_path);
    if (app.got_subcommand(c_br))
      return cmd_branching(br_variant, br_k, br_t, br_grid, trials, seed, br_max_nodes,
                           format, out_path);
    if (app.got_subcommand(c_urn))
      return cmd_urn(u_w0, u_b0, u_s, u_draws, trials, seed, u_beta_p, u_beta_q, threads,
                     format, out_path);
    if (app.got_subcommand(c_zeta)) return cmd_zeta(z_zeta, z_tol, format, out_path);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
