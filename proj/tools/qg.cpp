// qg — spectra, indices, isoperimetric constants and heat traces for finite
// metric graphs with generalized vertex conditions.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "qg/discrete_laplacian.hpp"
#include "qg/graphspec.hpp"
#include "qg/isoperimetric.hpp"
#include "qg/metric_laplacian.hpp"
#include "qg/trace_formulas.hpp"
#include "qg/verify.hpp"

namespace {

using namespace qg;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Input {
  ParsedGraph parsed;
  std::string digest;
};

Input load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return Input{parse_graphspec(text), fnv1a_digest(text)};
}

void preamble(const std::string& command, const Input& input, const std::string& params) {
  std::cout << "# command\t" << command << "\n";
  std::cout << "# digest\t" << input.digest << "\n";
  if (!params.empty()) std::cout << "# params\t" << params << "\n";
}

// report rows: quantity <TAB> lhs <TAB> rhs <TAB> status
struct Report {
  bool any_fail = false;
  Report() { std::cout << "quantity\tlhs\trhs\tstatus\n"; }
  void value(const std::string& name, const std::string& v) {
    std::cout << name << "\t" << v << "\t-\t-\n";
  }
  void check(const std::string& name, double lhs, double rhs, bool pass) {
    std::cout << name << "\t" << fmt(lhs) << "\t" << fmt(rhs) << "\t" << (pass ? "PASS" : "FAIL") << "\n";
    if (!pass) any_fail = true;
  }
};

int cmd_spectrum(const Input& in, double lmax, const std::string& method, int fem_n, double tol) {
  const WeightedGraph& g = in.parsed.graph;
  const TotalVertexSpace& total = in.parsed.total;

  struct Row {
    double lambda;
    int mult;
    std::string method;
  };
  std::vector<Row> rows;
  SpectrumResult fem;
  bool have_fem = false;

  auto run_fem = [&]() {
    const int count = static_cast<int>(g.total_length() * std::sqrt(lmax) / std::numbers::pi) +
                      g.num_edges() + total.total_dim() + 4;
    fem = fem_spectrum(g, total, fem_n, count);
    have_fem = true;
    for (const auto& l : fem.lines)
      if (l.lambda <= lmax) rows.push_back({l.lambda, l.multiplicity, "fem"});
  };

  if (method == "dtn" || method == "all") {
    SpectrumResult r = secular_spectrum_dtn(g, total, lmax, tol);
    for (const auto& l : r.lines) rows.push_back({l.lambda, l.multiplicity, l.tag});
    for (const auto& [a, b] : r.unresolved) rows.push_back({(a + b) / 2, 0, "unresolved"});
  }
  if (method == "bond" || method == "all") {
    SpectrumResult r = bond_secular_spectrum(g, total, lmax, std::max(tol, 1e-9));
    for (const auto& l : r.lines) rows.push_back({l.lambda, l.multiplicity, l.tag});
  }
  if (method == "equilateral" || (method == "all" && g.is_equilateral())) {
    SpectrumResult r = equilateral_spectrum(g, total, lmax);
    for (const auto& l : r.lines) rows.push_back({l.lambda, l.multiplicity, l.tag});
  }
  if (method == "fem" || method == "all") run_fem();

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.lambda < b.lambda; });

  bool all_consistent = true;
  std::cout << "lambda\tmultiplicity\tmethod\tconsistent\n";
  for (const Row& r : rows) {
    std::string consistent = "-";
    if (method == "all" && have_fem && r.method != "fem" && r.method != "unresolved" && r.mult > 0) {
      const double w = std::max(1e-6, 5 * fem_eigenvalue_error_estimate(r.lambda, fem.fem_h));
      const bool ok = fem.multiplicity_near(r.lambda, w) >= r.mult;
      consistent = ok ? "yes" : "no";
      if (!ok) all_consistent = false;
    }
    std::cout << fmt(r.lambda) << "\t" << r.mult << "\t" << r.method << "\t" << consistent << "\n";
  }
  return method == "all" && !all_consistent ? 1 : 0;
}

int cmd_index(const Input& in) {
  const WeightedGraph& g = in.parsed.graph;
  const TotalVertexSpace& total = in.parsed.total;
  Report rep;
  const IndexResult disc = index_discrete(g, total);
  const MetricIndexResult met = metric_index(g, total);
  const int formula = total.total_dim() - g.num_edges();
  rep.value("dim_H0_discrete", fmt(disc.h0));
  rep.value("dim_H1_discrete", fmt(disc.h1));
  rep.value("dim_H0_metric", fmt(met.h0));
  rep.value("dim_H1_metric", fmt(met.h1));
  rep.value("dim_G_minus_E", fmt(formula));
  rep.check("index_discrete = dim G - |E|", disc.index, formula, disc.index == formula);
  rep.check("index_metric = index_discrete", met.index, disc.index, met.index == disc.index);
  const IndexResult dual = index_discrete(g, dual_total(total));
  const IndexResult orient = index_discrete(g, oriented_total(total, g));
  rep.check("index(G-perp) = -index(oriented G)", dual.index, -orient.index,
            dual.index == -orient.index);
  return rep.any_fail ? 1 : 0;
}

int cmd_trace(const Input& in, double t, const std::string& mode, double cutoff, int terms) {
  const WeightedGraph& g = in.parsed.graph;
  const TotalVertexSpace& total = in.parsed.total;
  Report rep;

  if (mode == "discrete") {
    ValueWithBound tr = heat_trace_discrete(g, total, t, terms);
    RVec ev = hermitian_eigenvalues(laplacian(g, total, 0));
    double spectral = 0;
    for (int i = 0; i < ev.size(); ++i) spectral += std::exp(-t * ev(i));
    rep.value("formula", fmt(tr.value));
    rep.value("spectral", fmt(spectral));
    rep.value("remainder_bound", fmt(tr.bound));
    rep.check("abs_difference <= bound + 1e-9", std::abs(tr.value - spectral), tr.bound + 1e-9,
              std::abs(tr.value - spectral) <= tr.bound + 1e-9);
    return rep.any_fail ? 1 : 0;
  }

  const double scan = std::max(20.0, 45.0 / t);
  SpectrumResult bond = bond_secular_spectrum(g, total, scan);
  auto [spectral, slack] = heat_spectral_sum(g, bond, t, scan);
  if (mode == "spectral") {
    rep.value("spectral", fmt(spectral));
    rep.value("tail_slack", fmt(slack));
    return 0;
  }
  ValueWithBound tr = heat_trace_metric(g, total, t, cutoff, 4000000);
  rep.value("formula", fmt(tr.value));
  rep.value("spectral", fmt(spectral));
  rep.value("truncation_estimate", fmt(tr.bound));
  const double budget = tr.bound + slack + 1e-9;
  rep.check("abs_difference <= bound + 1e-9", std::abs(tr.value - spectral), budget,
            std::abs(tr.value - spectral) <= budget);
  return rep.any_fail ? 1 : 0;
}

int cmd_cheeger(const Input& in, bool discrete, int carve_depth) {
  const WeightedGraph& g = in.parsed.graph;
  Report rep;
  TotalVertexSpace std_total = standard_total(g);
  if (discrete) {
    DiscreteCheegerResult dc = cheeger_discrete(g, true);
    std::string witness;
    for (int v : dc.witness) witness += (witness.empty() ? "" : ",") + g.vertex_name(v);
    rep.value("h_discrete", fmt(dc.h));
    rep.value("witness", witness);
    RVec ev = hermitian_eigenvalues(laplacian(g, std_total, 0));
    const double l2 = ev.size() > 1 ? ev(1) : 0.0;
    rep.value("lambda2_discrete", fmt(l2));
    rep.check("lambda2 >= h^2/2", l2, dc.h * dc.h / 2 - 1e-9, l2 >= dc.h * dc.h / 2 - 1e-9);
    return rep.any_fail ? 1 : 0;
  }
  CheegerVerification cv = verify_cheeger(g, carve_depth);
  MetricCheegerResult mc = cheeger_metric_upper(g, carve_depth);
  std::string witness = "labels=";
  for (char c : mc.witness.label) witness += c ? '+' : '-';
  witness += " carved=";
  for (size_t i = 0; i < mc.witness.carved.size(); ++i)
    witness += (i ? "," : "") + g.edge(mc.witness.carved[i]).name;
  witness += " boundary=" + std::to_string(mc.witness.boundary_points);
  witness += " vol=" + fmt(mc.witness.volume);
  rep.value("h_ub", fmt(mc.h_ub));
  rep.value("witness", witness);
  rep.value("lambda2_metric", fmt(cv.lambda2_metric));
  rep.check("lambda2 >= h_ub^2/4", cv.lambda2_metric, mc.h_ub * mc.h_ub / 4 - 1e-9, cv.metric_ok);
  return rep.any_fail ? 1 : 0;
}

int cmd_verify(const Input& in, double lmax) {
  auto rows = run_verification(in.parsed.graph, in.parsed.total, lmax);
  bool any_fail = false;
  std::cout << "check\tlhs\trhs\tstatus\n";
  for (const auto& r : rows) {
    std::cout << r.name << "\t" << fmt(r.lhs) << "\t" << fmt(r.rhs) << "\t"
              << (r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL");
    if (!r.note.empty()) std::cout << "\t# " << r.note;
    std::cout << "\n";
    if (!r.pass && !r.skipped) any_fail = true;
  }
  return any_fail ? 1 : 0;
}

int cmd_decompose(const Input& in) {
  Decomposition dec = irreducible_decomposition(in.parsed.graph, in.parsed.total);
  std::cout << print_graphspec(dec.graph, dec.total);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum graph spectra, indices, Cheeger constants and heat traces"};
  app.require_subcommand(1);

  std::string file, method = "all", mode = "metric";
  double lmax = 20, tol = 1e-9, t = 0.1, cutoff = 12;
  int fem_n = 200, terms = 40, carve_depth = 1;
  bool discrete = false;

  auto* sc_spectrum = app.add_subcommand("spectrum", "eigenvalues of the metric Laplacian");
  sc_spectrum->add_option("file", file)->required();
  sc_spectrum->add_option("--lmax", lmax, "scan limit");
  sc_spectrum->add_option("--method", method)->check(CLI::IsMember({"dtn", "bond", "equilateral", "fem", "all"}));
  sc_spectrum->add_option("--fem-n", fem_n, "mesh density per unit length");
  sc_spectrum->add_option("--tol", tol, "secular tolerance");

  auto* sc_index = app.add_subcommand("index", "discrete and metric index");
  sc_index->add_option("file", file)->required();

  auto* sc_trace = app.add_subcommand("trace", "heat trace formulas vs spectral sums");
  sc_trace->add_option("file", file)->required();
  sc_trace->add_option("--t", t, "heat time");
  sc_trace->add_option("--mode", mode)->check(CLI::IsMember({"metric", "discrete", "spectral"}));
  sc_trace->add_option("--cutoff", cutoff, "metric length cutoff for the cycle sum");
  sc_trace->add_option("--terms", terms, "series terms for the discrete trace");

  auto* sc_cheeger = app.add_subcommand("cheeger", "isoperimetric constants and bounds");
  sc_cheeger->add_option("file", file)->required();
  sc_cheeger->add_flag("--discrete", discrete, "discrete constant instead of the metric bound");
  sc_cheeger->add_option("--carve-depth", carve_depth, "carved monochromatic edges");

  auto* sc_verify = app.add_subcommand("verify", "run the full invariant suite");
  sc_verify->add_option("file", file)->required();
  sc_verify->add_option("--lmax", lmax, "spectral scan limit");

  auto* sc_decompose = app.add_subcommand("decompose", "print the irreducible graph");
  sc_decompose->add_option("file", file)->required();

  CLI11_PARSE(app, argc, argv);
  const auto started = std::chrono::steady_clock::now();

  int code = 0;
  try {
    Input in = load(file);
    if (sc_spectrum->parsed()) {
      preamble("spectrum", in,
               "lmax=" + fmt(lmax) + " method=" + method + " fem-n=" + std::to_string(fem_n) +
                   " tol=" + fmt(tol));
      code = cmd_spectrum(in, lmax, method, fem_n, tol);
    } else if (sc_index->parsed()) {
      preamble("index", in, "");
      code = cmd_index(in);
    } else if (sc_trace->parsed()) {
      preamble("trace", in,
               "t=" + fmt(t) + " mode=" + mode + " cutoff=" + fmt(cutoff) +
                   " terms=" + std::to_string(terms));
      code = cmd_trace(in, t, mode, cutoff, terms);
    } else if (sc_cheeger->parsed()) {
      preamble("cheeger", in,
               std::string("discrete=") + (discrete ? "1" : "0") +
                   " carve-depth=" + std::to_string(carve_depth));
      code = cmd_cheeger(in, discrete, carve_depth);
    } else if (sc_verify->parsed()) {
      preamble("verify", in, "lmax=" + fmt(lmax));
      code = cmd_verify(in, lmax);
    } else if (sc_decompose->parsed()) {
      code = cmd_decompose(in);
    }
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const precondition_error& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
  std::fprintf(stderr, "wall time: %.3fs\n", elapsed.count());
  return code;
}
