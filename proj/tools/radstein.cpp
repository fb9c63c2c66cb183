// Command-line front end: decompose / contract / operators / bound /
// distance / sparse / rates / verify, wiring the JSON file formats to the
// library and emitting machine-readable run reports.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radstein/generator.hpp"
#include "radstein/io.hpp"
#include "radstein/radstein.hpp"

using nlohmann::json;
using namespace radstein;

namespace {

struct run_report {
  std::string command;
  std::string mode = "float";
  json inputs = json::object();
  json values = json::object();
  std::vector<json> checks;
  bool all_pass = true;

  void add_check(const std::string& id, double lhs, double rhs, bool pass,
                 double tolerance) {
    checks.push_back(json{{"id", id},
                          {"lhs", lhs},
                          {"rhs", rhs},
                          {"pass", pass},
                          {"tolerance", tolerance}});
    all_pass = all_pass && pass;
  }

  json to_json(double wall_seconds) const {
    return json{{"command", command},
                {"inputs", inputs},
                {"values", values},
                {"checks", checks},
                {"all_pass", all_pass},
                {"environment",
                 {{"version", version_string},
                  {"rng", counter_rng::algorithm()},
                  {"mode", mode}}},
                {"wall_time_s", wall_seconds}};
  }
};

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

void note_input(run_report& rep, const std::string& role, const std::string& path) {
  std::ostringstream hex;
  hex << std::hex << fnv1a_file(path);
  rep.inputs[role] = json{{"path", path}, {"digest", hex.str()}};
}

double parse_param(const std::string& spec, const std::string& key, double fallback,
                   bool required = false) {
  // specs look like name:a=1,b=0
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    if (required) throw parse_error("missing parameter " + key + " in " + spec);
    return fallback;
  }
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    if (item.substr(0, eq) == key) return std::stod(item.substr(eq + 1));
  }
  if (required) throw parse_error("missing parameter " + key + " in " + spec);
  return fallback;
}

test_function parse_test_function(const std::string& spec) {
  if (spec.rfind("cos", 0) == 0)
    return cosine_test(parse_param(spec, "a", 1.0), parse_param(spec, "b", 0.0));
  if (spec.rfind("sin", 0) == 0)
    return sine_test(parse_param(spec, "a", 1.0), parse_param(spec, "b", 0.0));
  if (spec.rfind("bump", 0) == 0) return bump_test();
  throw parse_error("unknown test function spec: " + spec);
}

weight_sequence parse_weights(const std::string& spec) {
  if (spec.rfind("ones", 0) == 0)
    return ones_weights(static_cast<long long>(parse_param(spec, "n", 0, true)));
  if (spec.rfind("partial", 0) == 0)
    return partial_sum_weights(static_cast<long long>(parse_param(spec, "n", 0, true)));
  if (spec.rfind("inv", 0) == 0)
    return inverse_tail_weights(static_cast<long long>(parse_param(spec, "r", 0, true)));
  if (spec.rfind("file:", 0) == 0)
    return io::weights_from_json(io::load_json(spec.substr(5)));
  throw parse_error("unknown weight spec: " + spec);
}

cover parse_cover(int d, int m, const std::string& text) {
  std::vector<std::vector<int>> sets;
  std::stringstream ss(text);
  std::string group;
  while (std::getline(ss, group, ';')) {
    std::vector<int> s;
    std::stringstream gs(group);
    std::string idx;
    while (std::getline(gs, idx, ',')) s.push_back(std::stoi(idx));
    sets.push_back(std::move(s));
  }
  return cover(d, m, std::move(sets));
}

std::vector<index_t> parse_index_list(const std::string& text) {
  std::vector<index_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

std::string csv_escape_bool(bool b) { return b ? "1" : "0"; }

// turn a CSV body (header + rows) into an array of objects
json csv_to_json(const std::string& csv) {
  std::stringstream ss(csv);
  std::string line;
  std::vector<std::string> header;
  json rows = json::array();
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header.empty() || cells.size() != header.size()) {
      if (!header.empty() && cells.size() != header.size()) {
        header = cells;  // a new section starts with its own header
        continue;
      }
      header = cells;
      continue;
    }
    json row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(row);
  }
  return rows;
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw error("cannot write " + path);
  out << body;
}

char fmt_buf[64];
std::string num(double v) {
  std::snprintf(fmt_buf, sizeof(fmt_buf), "%.17g", v);
  return fmt_buf;
}

// ---------------------------------------------------------------------------
// Verify suites (shared by the verify subcommands and `verify all`)
// ---------------------------------------------------------------------------

std::string run_estimate_suite(run_report& rep, long long seeds, std::uint64_t master_seed,
                               double tol_override = 0.0) {
  const double tol = tol_override > 0.0 ? tol_override : 1e-9;
  std::ostringstream csv;
  csv << "seed,n,m,inequality,lhs,rhs,pass\n";
  counter_rng master(master_seed);
  for (long long s = 0; s < seeds; ++s) {
    rng_stream stream(master.split(static_cast<std::uint64_t>(s)));
    const int n = static_cast<int>(stream.next_int(1, 4));
    const int m = static_cast<int>(stream.next_int(1, 4));
    const auto f = random_kernel<double>(stream, n, 8, 8);
    const auto g = random_kernel<double>(stream, m, 8, 8);
    if (f.empty() || g.empty()) continue;
    const auto report = check_estimates(f, g, tol);
    for (const auto& c : report.checks) {
      csv << s << "," << n << "," << m << "," << c.id << "," << num(c.lhs) << ","
          << num(c.rhs) << "," << csv_escape_bool(c.pass) << "\n";
      if (!c.pass) rep.add_check("estimates:" + c.id + " seed=" + std::to_string(s),
                                 c.lhs, c.rhs, false, tol);
    }
  }
  rep.add_check("contraction-estimate-chains", 0, 0, rep.all_pass, tol);
  return csv.str();
}

std::string run_malliavin_suite(run_report& rep, int d, long long seeds,
                                std::uint64_t master_seed, double tol_override = 0.0) {
  std::ostringstream csv;
  csv << "seed,identity,deviation,tolerance,pass\n";
  counter_rng master(master_seed);
  const std::size_t size = std::size_t{1} << d;
  bool all = true;
  auto emit = [&](long long s, const std::string& id, double dev, double default_tol) {
    const double tol = tol_override > 0.0 ? tol_override : default_tol;
    const bool pass = dev <= tol;
    all = all && pass;
    csv << s << "," << id << "," << num(dev) << "," << num(tol) << ","
        << csv_escape_bool(pass) << "\n";
    if (!pass) rep.add_check("malliavin:" + id + " seed=" + std::to_string(s), dev, tol,
                             false, tol);
  };

  for (long long s = 0; s < seeds; ++s) {
    rng_stream stream(master.split(static_cast<std::uint64_t>(s) + 1000));
    auto dec = random_centered_decomposition<double>(stream, d, std::min(4, d), 6);
    const auto table = to_truth_table(dec, d);

    // delta D = -L
    std::vector<chaos_decomposition<double>> grad;
    for (index_t k = 1; k <= d; ++k) grad.push_back(gradient_component(dec, k));
    const auto deltaD = divergence(grad, d);
    const auto minusL = apply_L(dec);
    const auto t1 = to_truth_table(deltaD, d);
    double dev = 0.0;
    for (std::size_t msk = 0; msk < size; ++msk)
      dev = std::max(dev, std::fabs(t1.values[msk] +
                                    evaluate(minusL, rademacher_point::from_mask(d, msk))));
    emit(s, "divergence-of-gradient-equals-minus-L", dev, 1e-10);

    // integration by parts E[F phi(F)] = E[<D phi(F), -D L^{-1} F>]
    const auto phi = cosine_smooth(1.0);
    double lhs = 0.0, rhs = 0.0;
    std::vector<std::vector<double>> gl(d);
    for (index_t k = 1; k <= d; ++k)
      gl[k - 1] = to_truth_table(minus_gradient_Linv_component(dec, k), d).values;
    for (std::size_t msk = 0; msk < size; ++msk) {
      lhs += table.values[msk] * phi.eval(table.values[msk]);
      double inner = 0.0;
      for (index_t k = 1; k <= d; ++k) {
        const std::uint64_t bit = std::uint64_t{1} << (k - 1);
        const double dphi =
            0.5 * (phi.eval(table.values[msk | bit]) - phi.eval(table.values[msk & ~bit]));
        inner += dphi * gl[k - 1][msk];
      }
      rhs += inner;
    }
    emit(s, "integration-by-parts", std::fabs(lhs - rhs) / size, 1e-10);

    // Mehler representation vs semigroup
    double mdev = 0.0;
    for (double t : {0.3, 1.5}) {
      const auto pt = apply_Pt(dec, t);
      for (std::size_t msk = 0; msk < size; ++msk) {
        const auto p = rademacher_point::from_mask(d, msk);
        mdev = std::max(mdev, std::fabs(mehler_evaluate(table, t, p) - evaluate(pt, p)));
      }
    }
    emit(s, "mehler-semigroup-agreement", mdev, 1e-10);

    // chain rule bound
    double crdev = 0.0;
    for (index_t k = 1; k <= d; ++k)
      for (std::size_t msk = 0; msk < size; ++msk) {
        const auto res =
            chain_rule_residual(table, phi, k, rademacher_point::from_mask(d, msk));
        crdev = std::max(crdev, res.residual - res.bound);
      }
    emit(s, "chain-rule-residual-bound", std::max(0.0, crdev), 0.0);

    // exchangeable drift
    const auto drift = exchangeable_drift_check(dec, 1e-12);
    double ddev = 0.0;
    for (const auto& row : drift.per_order) ddev = std::max(ddev, row.max_abs_deviation);
    emit(s, "exchangeable-pair-drift", ddev, 1e-12);
  }

  // exact identities in rational mode
  for (long long s = 0; s < seeds; ++s) {
    rng_stream stream(master.split(static_cast<std::uint64_t>(s) + 5000));
    const int q = static_cast<int>(stream.next_int(1, 4));
    const auto f = random_kernel<rational>(stream, q, 6, 6);
    if (f.empty()) continue;
    const int dim = 6;
    const rational enumerated = enumerate_expectation_exact<rational>(
        [&](const rademacher_point& p) {
          const rational v = evaluate_multiple_integral(f, p);
          return v * v;
        },
        dim);
    const rational closed = factorial_as<rational>(q) * l2_norm_squared(f);
    emit(s, "isometry-exact", enumerated == closed ? 0.0 : 1.0, 0.0);

    const int qg = static_cast<int>(stream.next_int(1, 3));
    const auto g = random_kernel<rational>(stream, qg, 6, 6);
    if (g.empty()) continue;
    const auto prod = product(f, g);
    bool ok = true;
    for (std::size_t msk = 0; msk < (std::size_t{1} << dim) && ok; ++msk) {
      const auto p = rademacher_point::from_mask(dim, msk);
      ok = evaluate(prod, p) ==
           evaluate_multiple_integral(f, p) * evaluate_multiple_integral(g, p);
    }
    emit(s, "product-formula-exact", ok ? 0.0 : 1.0, 0.0);
  }

  rep.add_check("malliavin-operator-identities", 0, 0, all, 1e-10);
  return csv.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Malliavin-Stein calculus for Rademacher functionals"};
  app.require_subcommand(1);
  // --h is a documented option on several subcommands, so help keeps only
  // its long spelling
  app.set_help_flag("--help", "print help and exit");

  std::string mode = "float";
  std::string out_format = "csv";
  std::string report_path = "radstein_report.json";
  app.add_option("--mode", mode, "scalar mode: float|rational")
      ->check(CLI::IsMember({"float", "rational"}));
  app.add_option("--format", out_format, "tabular output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--report", report_path, "run-report JSON path");

  // decompose
  auto* sc_decompose = app.add_subcommand("decompose", "truth table -> chaos decomposition");
  std::string table_path, method = "walsh", out_path;
  sc_decompose->add_option("--table", table_path)->required();
  sc_decompose->add_option("--method", method)->check(CLI::IsMember({"walsh", "hoeffding"}));
  sc_decompose->add_option("--out", out_path)->required();

  // contract
  auto* sc_contract = app.add_subcommand("contract", "star contraction of two kernels");
  std::string f_path, g_path;
  int opt_r = 0, opt_l = 0;
  sc_contract->add_option("--f", f_path)->required();
  sc_contract->add_option("--g", g_path)->required();
  sc_contract->add_option("--r", opt_r)->required();
  sc_contract->add_option("--l", opt_l)->required();
  sc_contract->add_option("--out", out_path)->required();

  // operators
  auto* sc_operators = app.add_subcommand("operators", "apply L, L^{-1} or P_t");
  std::string dec_path, op_name;
  double op_t = 0.0;
  sc_operators->add_option("--dec", dec_path)->required();
  sc_operators->add_option("--op", op_name)->required()
      ->check(CLI::IsMember({"L", "Linv", "Pt"}));
  sc_operators->add_option("--t", op_t);
  sc_operators->add_option("--out", out_path)->required();

  // bound
  auto* sc_bound = app.add_subcommand("bound", "normal-approximation bounds");
  std::string bound_mode = "general", h_spec = "cos:a=1", alpha_spec, set_path, beta_spec;
  sc_bound->add_option("--mode", bound_mode)
      ->check(CLI::IsMember({"general", "average", "fixed-chaos", "double",
                             "single-double", "runs", "sparse"}));
  sc_bound->add_option("--dec", dec_path);
  sc_bound->add_option("--f", f_path);
  sc_bound->add_option("--g", g_path);
  sc_bound->add_option("--alpha", alpha_spec);
  sc_bound->add_option("--set", set_path);
  sc_bound->add_option("--beta", beta_spec);
  sc_bound->add_option("--h", h_spec);
  sc_bound->add_option("--out", out_path);

  // distance
  auto* sc_distance = app.add_subcommand("distance", "|E h(F) - E h(Z)|");
  std::string dist_mode = "exact";
  long long samples = 100000;
  std::uint64_t seed = 42;
  sc_distance->add_option("--dec", dec_path)->required();
  sc_distance->add_option("--h", h_spec);
  sc_distance->add_option("--mode", dist_mode)->check(CLI::IsMember({"exact", "mc"}));
  sc_distance->add_option("--samples", samples);
  sc_distance->add_option("--seed", seed);

  // sparse build / scale
  auto* sc_sparse = app.add_subcommand("sparse", "sparse index set tools");
  sc_sparse->require_subcommand(1);
  auto* sc_build = sc_sparse->add_subcommand("build", "fractional Cartesian product");
  int sp_d = 3, sp_m = 2;
  index_t sp_N = 64;
  std::string cover_spec = "1,2;2,3;1,3", ns_spec, phi_spec = "mixed";
  sc_build->add_option("--d", sp_d);
  sc_build->add_option("--m", sp_m);
  sc_build->add_option("--cover", cover_spec);
  sc_build->add_option("--N", sp_N)->required();
  sc_build->add_option("--phi", phi_spec);
  sc_build->add_option("--out", out_path)->required();
  auto* sc_scale = sc_sparse->add_subcommand("scale", "scaling study over N");
  sc_scale->add_option("--d", sp_d);
  sc_scale->add_option("--m", sp_m);
  sc_scale->add_option("--cover", cover_spec);
  sc_scale->add_option("--Ns", ns_spec)->required();
  sc_scale->add_option("--h", h_spec);
  sc_scale->add_option("--phi", phi_spec);
  sc_scale->add_option("--out", out_path);

  // rates
  auto* sc_rates = app.add_subcommand("rates", "rate-study CSV for weight families");
  std::string family = "partial";
  sc_rates->add_option("--family", family)->check(CLI::IsMember({"partial", "inv"}));
  sc_rates->add_option("--ns", ns_spec)->required();
  sc_rates->add_option("--h", h_spec);
  sc_rates->add_option("--out", out_path);

  // verify
  auto* sc_vest = app.add_subcommand("verify-estimates", "contraction estimate chains");
  long long n_seeds = 100;
  std::uint64_t master_seed = 20240817;
  double tol_override = 0.0;
  sc_vest->add_option("--seeds", n_seeds);
  sc_vest->add_option("--master-seed", master_seed);
  sc_vest->add_option("--tol", tol_override, "override the per-identity default tolerances");
  sc_vest->add_option("--out", out_path);

  auto* sc_vmal = app.add_subcommand("verify-malliavin", "operator identity suite");
  int vd = 6;
  sc_vmal->add_option("--d", vd);
  sc_vmal->add_option("--seeds", n_seeds);
  sc_vmal->add_option("--master-seed", master_seed);
  sc_vmal->add_option("--tol", tol_override, "override the per-identity default tolerances");
  sc_vmal->add_option("--out", out_path);

  auto* sc_verify = app.add_subcommand("verify", "full identity suite");
  std::string verify_what = "all";
  sc_verify->add_option("what", verify_what)->check(CLI::IsMember({"all"}));
  sc_verify->add_option("--d", vd);
  sc_verify->add_option("--seeds", n_seeds);
  sc_verify->add_option("--master-seed", master_seed);
  sc_verify->add_option("--tol", tol_override, "override the per-identity default tolerances");
  sc_verify->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  run_report rep;
  rep.mode = mode;
  for (int i = 0; i < argc; ++i) rep.command += std::string(i ? " " : "") + argv[i];
  const auto t0 = std::chrono::steady_clock::now();
  const bool rational_mode = (mode == "rational");

  try {
    if (*sc_decompose) {
      note_input(rep, "table", table_path);
      const json tj = io::load_json(table_path);
      if (rational_mode) {
        const auto table = io::table_from_json<rational>(tj);
        const auto dec = method == "walsh" ? decompose_walsh(table)
                                           : decompose_hoeffding(table);
        // reconstruction must reproduce the table exactly
        bool ok = true;
        for (std::uint64_t msk = 0; msk < table.values.size(); ++msk)
          ok = ok && evaluate(dec, rademacher_point::from_mask(table.d, msk)) ==
                         table.values[msk];
        rep.add_check("decomposition-reconstruction", ok ? 0 : 1, 0, ok, 0);
        io::save_json(out_path, io::decomposition_to_json(dec));
      } else {
        const auto table = io::table_from_json<double>(tj);
        const auto dec = method == "walsh" ? decompose_walsh(table)
                                           : decompose_hoeffding(table);
        double dev = 0.0;
        for (std::uint64_t msk = 0; msk < table.values.size(); ++msk)
          dev = std::max(dev,
                         std::fabs(evaluate(dec, rademacher_point::from_mask(table.d, msk)) -
                                   table.values[msk]));
        rep.add_check("decomposition-reconstruction", dev, 1e-10, dev <= 1e-10, 1e-10);
        io::save_json(out_path, io::decomposition_to_json(dec));
      }
    } else if (*sc_contract) {
      note_input(rep, "f", f_path);
      note_input(rep, "g", g_path);
      if (rational_mode) {
        const auto f = io::kernel_from_json<rational>(io::load_json(f_path));
        const auto g = io::kernel_from_json<rational>(io::load_json(g_path));
        const auto out = star(f, g, opt_r, opt_l);
        json entries = json::array();
        for (const auto& [t, v] : out.entries())
          entries.push_back(json::array({json(t), io::scalar_to_json(v)}));
        io::save_json(out_path, json{{"order", out.order()}, {"entries", entries}});
      } else {
        const auto f = io::kernel_from_json<double>(io::load_json(f_path));
        const auto g = io::kernel_from_json<double>(io::load_json(g_path));
        const auto out = star(f, g, opt_r, opt_l);
        json entries = json::array();
        for (const auto& [t, v] : out.entries())
          entries.push_back(json::array({json(t), io::scalar_to_json(v)}));
        io::save_json(out_path, json{{"order", out.order()}, {"entries", entries}});
        const auto norms = contraction_norms(f, g, opt_r, opt_l);
        rep.values["norm"] = std::sqrt(norms.full);
        rep.values["norm_off_diagonal"] = std::sqrt(norms.off_diagonal);
      }
    } else if (*sc_operators) {
      note_input(rep, "dec", dec_path);
      if (op_name == "Pt" && rational_mode)
        throw parse_error("P_t requires float mode");
      if (rational_mode) {
        const auto dec = io::decomposition_from_json<rational>(io::load_json(dec_path));
        const auto out = op_name == "L" ? apply_L(dec) : apply_L_inverse(dec);
        io::save_json(out_path, io::decomposition_to_json(out));
      } else {
        const auto dec = io::decomposition_from_json<double>(io::load_json(dec_path));
        const auto out = op_name == "L"      ? apply_L(dec)
                         : op_name == "Linv" ? apply_L_inverse(dec)
                                             : apply_Pt(dec, op_t);
        io::save_json(out_path, io::decomposition_to_json(out));
      }
    } else if (*sc_bound) {
      const auto h = parse_test_function(h_spec);
      json breakdown = json::array();
      auto push_addends = [&](const std::vector<std::pair<std::string, double>>& items) {
        for (const auto& [k, v] : items) breakdown.push_back(json{{"label", k}, {"value", v}});
      };
      if (bound_mode == "general") {
        note_input(rep, "dec", dec_path);
        const auto dec = io::decomposition_from_json<double>(io::load_json(dec_path));
        const auto b = bound_general(dec, h);
        rep.values = {{"B1", b.B1},
                      {"B1_variance_form", b.B1_variance_form},
                      {"B2", b.B2},
                      {"total", b.total}};
        push_addends(b.breakdown);
      } else if (bound_mode == "average") {
        const auto alpha = parse_weights(alpha_spec);
        const auto b = bound_average(alpha, h);
        rep.values = {{"B1", b.B1}, {"B2", b.B2}, {"total", b.total}};
        push_addends(b.breakdown);
        if (auto w = wasserstein_bound(b.B1, b.B2, 1.0))
          rep.values["wasserstein_with_unit_eabs"] = *w;
      } else if (bound_mode == "fixed-chaos") {
        note_input(rep, "f", f_path);
        const auto f = io::kernel_from_json<double>(io::load_json(f_path));
        const auto b = bound_fixed_chaos(f, h);
        rep.values = {{"B1_variance_form", b.bound.B1_variance_form},
                      {"B2", b.bound.B2},
                      {"total", b.bound.total},
                      {"variance_identity", b.variance_identity},
                      {"variance_identity_upper", b.variance_identity_upper},
                      {"fourth_moment_bound", b.fourth_moment_bound}};
        push_addends(b.bound.breakdown);
      } else if (bound_mode == "double") {
        note_input(rep, "f", f_path);
        const auto f = io::kernel_from_json<double>(io::load_json(f_path));
        const auto b = bound_double_integral(f, h);
        rep.values = {{"value", b.value},
                      {"via_cross_contraction", b.via_cross_contraction},
                      {"via_diagonal_restriction", b.via_diagonal_restriction},
                      {"trace_chain", b.trace_chain},
                      {"trace", b.trace}};
        push_addends(b.breakdown);
      } else if (bound_mode == "single-double") {
        note_input(rep, "g", g_path);
        const auto alpha = parse_weights(alpha_spec);
        const auto g = io::kernel_from_json<double>(io::load_json(g_path));
        const auto b = bound_single_plus_double(alpha, g, h);
        rep.values = {{"value", b.value},
                      {"smooth_term", b.smooth_term},
                      {"fourth_term", b.fourth_term}};
        push_addends(b.breakdown);
      } else if (bound_mode == "runs") {
        const auto alpha = parse_weights(alpha_spec);
        const auto b = bound_two_runs(alpha, h);
        rep.values = {{"value", b.value},
                      {"var_g", b.var_g},
                      {"first_term", b.first_term},
                      {"second_term", b.second_term}};
      } else if (bound_mode == "sparse") {
        note_input(rep, "set", set_path);
        const auto F = io::sparse_set_from_json(io::load_json(set_path));
        const auto b = bound_sparse_stats(F, h);
        rep.values = {{"stat1", b.stat1},
                      {"stat2", b.stat2},
                      {"exact_bound", b.exact.bound.total},
                      {"variance_identity", b.exact.variance_identity},
                      {"fourth_moment_bound", b.exact.fourth_moment_bound}};
        push_addends(b.exact.bound.breakdown);
        if (!beta_spec.empty()) {
          const auto beta = parse_weights(beta_spec);
          const auto wb = bound_weighted_sparse(beta, F, h);
          rep.values["weighted_stat1"] = wb.stat1;
          rep.values["weighted_stat2"] = wb.stat2;
        }
      }
      rep.values["h"] = h.name;
      rep.values["addends"] = breakdown;
      if (!out_path.empty()) io::save_json(out_path, rep.values);
    } else if (*sc_distance) {
      note_input(rep, "dec", dec_path);
      const auto h = parse_test_function(h_spec);
      const auto dec = io::decomposition_from_json<double>(io::load_json(dec_path));
      if (dist_mode == "exact") {
        const double dist = distance(dec, h);
        rep.values = {{"distance", dist}, {"mode", "exact"}};
        std::cout << num(dist) << "\n";
      } else {
        const auto e = distance_mc(dec, h, samples, seed);
        rep.values = {{"distance", e.value}, {"mode", "mc"}};
        rep.values["estimate"] = io::estimate_to_json(e);
        std::cout << num(e.value) << " +- " << num(e.std_error) << "\n";
      }
    } else if (*sc_build) {
      const cover cov = parse_cover(sp_d, sp_m, cover_spec);
      injection_spec phi;
      if (phi_spec.rfind("seed:", 0) == 0)
        phi = injection_spec::seeded(std::stoull(phi_spec.substr(5)));
      const auto F = fractional_product(cov, sp_N, phi);
      io::save_json(out_path, io::sparse_set_to_json(F));
      rep.values = {{"cardinality", F.cardinality()},
                    {"representatives", F.reps().size()}};
    } else if (*sc_scale) {
      const cover cov = parse_cover(sp_d, sp_m, cover_spec);
      injection_spec phi;
      if (phi_spec.rfind("seed:", 0) == 0)
        phi = injection_spec::seeded(std::stoull(phi_spec.substr(5)));
      const auto h = parse_test_function(h_spec);
      const auto res = scaling_table(cov, parse_index_list(ns_spec), h, phi);
      std::ostringstream csv;
      csv << "N,cardinality,max_star,sharp,stat1,stat2,exact_bound,exact_smooth_term\n";
      for (const auto& row : res.rows)
        csv << row.N << "," << row.cardinality << "," << row.max_star << "," << row.sharp
            << "," << num(row.stat1) << "," << num(row.stat2) << ","
            << num(row.exact_bound) << "," << num(row.exact_smooth_term) << "\n";
      write_text(out_path, out_format == "json" ? csv_to_json(csv.str()).dump(2) + "\n"
                                                 : csv.str());
      rep.values = {{"slope_cardinality", res.slope_cardinality},
                    {"slope_star_ratio", res.slope_star_ratio},
                    {"slope_exact_bound", res.slope_exact_bound},
                    {"slope_exact_smooth", res.slope_exact_smooth}};
    } else if (*sc_rates) {
      const auto h = parse_test_function(h_spec);
      std::ostringstream csv;
      csv << "n,B1,B2,total,measured_distance\n";
      for (index_t n : parse_index_list(ns_spec)) {
        const weight_sequence alpha =
            family == "partial" ? partial_sum_weights(n) : inverse_tail_weights(n);
        const auto b = bound_average(alpha, h);
        csv << n << "," << num(b.B1) << "," << num(b.B2) << "," << num(b.total) << ",";
        if (family == "partial" && n <= 16) {
          const auto dec = first_chaos(alpha);
          csv << num(distance(dec, h));
        }
        csv << "\n";
      }
      write_text(out_path, out_format == "json" ? csv_to_json(csv.str()).dump(2) + "\n"
                                                 : csv.str());
    } else if (*sc_vest) {
      const std::string csv = run_estimate_suite(rep, n_seeds, master_seed, tol_override);
      write_text(out_path, out_format == "json" ? csv_to_json(csv).dump(2) + "\n" : csv);
    } else if (*sc_vmal) {
      const std::string csv = run_malliavin_suite(rep, vd, n_seeds, master_seed, tol_override);
      write_text(out_path, out_format == "json" ? csv_to_json(csv).dump(2) + "\n" : csv);
    } else if (*sc_verify) {
      std::string csv = run_estimate_suite(rep, n_seeds, master_seed, tol_override);
      csv += run_malliavin_suite(rep, vd, n_seeds, master_seed, tol_override);
      write_text(out_path, out_format == "json" ? csv_to_json(csv).dump(2) + "\n" : csv);
    }
  } catch (const parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::save_json(report_path, rep.to_json(wall));
  return rep.all_pass ? 0 : 1;
}
