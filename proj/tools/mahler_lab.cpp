// mahler-lab: command-line front end.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mahler/areal.hpp"
#include "mahler/classical.hpp"
#include "mahler/errors.hpp"
#include "mahler/operator.hpp"
#include "mahler/text.hpp"
#include "mahler/verify.hpp"

using namespace mahler;
using json = nlohmann::ordered_json;

namespace {

bool g_csv = false;

json record(const std::string& poly, const MeasureResult& m) {
  json params = json::object();
  for (const auto& [k, v] : m.params) params[k] = v;
  return {{"poly", poly},
          {"value", m.value},
          {"method", to_string(m.method)},
          {"params", params},
          {"error_estimate", m.error_estimate}};
}

std::string params_field(const MeasureResult& m) {
  std::string out;
  for (const auto& [k, v] : m.params) {
    if (!out.empty()) out += ';';
    out += k + '=' + format_double(v);
  }
  return out;
}

void print_records(const std::vector<std::pair<std::string, MeasureResult>>& rows) {
  if (g_csv) {
    std::cout << "poly,value,method,params,error_estimate\n";
    for (const auto& [poly, m] : rows)
      std::cout << '"' << poly << "\"," << format_double(m.value) << ',' << to_string(m.method) << ','
                << params_field(m) << ',' << format_double(m.error_estimate) << '\n';
    return;
  }
  if (rows.size() == 1) {
    std::cout << record(rows[0].first, rows[0].second).dump(2) << '\n';
    return;
  }
  json arr = json::array();
  for (const auto& [poly, m] : rows) arr.push_back(record(poly, m));
  std::cout << arr.dump(2) << '\n';
}

std::uint64_t env_seed() {
  const char* s = std::getenv("MAHLER_LAB_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ArgumentError("MAHLER_LAB_SEED must be a non-negative integer");
  }
}

FiniteOperator shift_operator(const std::string& spec, Eigen::Index dim) {
  if (spec == "hardy") return WeightedShiftSpec::hardy(dim).materialize();
  if (spec == "bergman") return WeightedShiftSpec::bergman(dim).materialize();
  if (spec.rfind("const:", 0) == 0) {
    const ParsedPolynomial c = parse_polynomial(spec.substr(6));
    return WeightedShiftSpec::constant(as_complex(c).coeffs()[0], dim).materialize();
  }
  if (spec.rfind("file:", 0) == 0)
    return WeightedShiftSpec::explicit_weights(weights_from_json(read_json_file(spec.substr(5))), dim).materialize();
  throw ArgumentError("--shift must be hardy, bergman, const:<c> or file:<weights.json>");
}

VectorH start_vector(const std::string& spec, Eigen::Index dim) {
  if (spec.rfind("unit:", 0) == 0) return VectorH::unit(dim, std::stol(spec.substr(5)));
  if (spec.rfind("file:", 0) == 0) {
    VectorXc v = vector_from_json(read_json_file(spec.substr(5)));
    if (v.size() != dim) throw ArgumentError("vector length does not match the operator dimension");
    return VectorH(std::move(v));
  }
  throw ArgumentError("--e must be unit:<k> or file:<vec.json>");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical, areal and operator Mahler measures"};
  app.require_subcommand(1);
  app.add_flag("--csv", g_csv, "CSV output instead of JSON");

  // mahler
  std::string poly_text;
  std::string method = "roots";
  int nodes = 4096;
  auto* mahler_cmd = app.add_subcommand("mahler", "Mahler measure M(p)");
  mahler_cmd->add_option("poly", poly_text, "polynomial")->required();
  mahler_cmd->add_option("--method", method, "roots|integral")->check(CLI::IsMember({"roots", "integral"}));
  mahler_cmd->add_option("--nodes", nodes, "circle quadrature nodes");

  // pierce
  int pierce_n = 20;
  auto* pierce_cmd = app.add_subcommand("pierce", "Pierce sequence Delta_1..Delta_n");
  pierce_cmd->add_option("poly", poly_text, "monic integer polynomial")->required();
  pierce_cmd->add_option("--n", pierce_n, "last index")->required();

  // search
  int deg = 10, height = 1, jobs = 1;
  double threshold = 1.3;
  auto* search_cmd = app.add_subcommand("search", "exhaustive search for small measures");
  search_cmd->add_option("--deg", deg, "maximal degree")->required();
  search_cmd->add_option("--height", height, "maximal coefficient size")->required();
  search_cmd->add_option("--threshold", threshold, "report measures below this");
  search_cmd->add_option("--jobs", jobs, "worker threads");

  // opmahler
  std::string shift_spec, matrix_file, e_spec = "unit:0";
  long dim = 512, krylov_k = 256;
  bool sup = false;
  int restarts = 32;
  std::uint64_t seed = 0;
  auto* op_cmd = app.add_subcommand("opmahler", "T-Mahler measure");
  auto* shift_opt = op_cmd->add_option("--shift", shift_spec, "hardy|bergman|const:c|file:<weights.json>");
  auto* matrix_opt = op_cmd->add_option("--matrix", matrix_file, "matrix JSON file");
  shift_opt->excludes(matrix_opt);
  op_cmd->add_option("--dim", dim, "truncation for shifts");
  op_cmd->add_option("--e", e_spec, "unit:<k>|file:<vec.json>");
  op_cmd->add_option("--poly", poly_text, "polynomial")->required();
  op_cmd->add_option("--K", krylov_k, "Krylov directions");
  op_cmd->add_flag("--sup", sup, "maximize over unit vectors");
  op_cmd->add_option("--restarts", restarts, "restarts for --sup");
  auto* seed_opt = op_cmd->add_option("--seed", seed, "seed for --sup");

  // areal
  std::string areal_method = "closed", rho_file;
  auto* areal_cmd = app.add_subcommand("areal", "areal Mahler measure");
  areal_cmd->add_option("poly", poly_text, "polynomial")->required();
  areal_cmd->add_option("--method", areal_method, "closed|quad")->check(CLI::IsMember({"closed", "quad"}));
  areal_cmd->add_option("--rho", rho_file, "radial weight JSON");

  // chain
  long chain_n = 0, chain_k = 200;
  auto* chain_cmd = app.add_subcommand("chain", "areal <= Bergman <= classical");
  chain_cmd->add_option("poly", poly_text, "polynomial")->required();
  chain_cmd->add_option("--dim", chain_n, "Bergman truncation (default 2 (K + deg))");
  chain_cmd->add_option("--K", chain_k, "Krylov directions");

  // limit
  int from = 3, to = 200;
  long limit_n = 1024, limit_k = 480;
  auto* limit_cmd = app.add_subcommand("limit", "z^n + z + 1 table");
  limit_cmd->add_option("--from", from, "first n");
  limit_cmd->add_option("--to", to, "last n");
  limit_cmd->add_option("--N", limit_n, "Bergman truncation");
  limit_cmd->add_option("--K", limit_k, "Krylov directions");
  limit_cmd->add_option("--jobs", jobs, "worker threads");
  limit_cmd->add_flag("--csv", g_csv, "CSV output");

  // verify
  std::string config_file, out_file;
  std::vector<std::string> suites;
  std::uint64_t verify_seed = 0;
  int verify_jobs = 1;
  bool timings = false;
  auto* verify_cmd = app.add_subcommand("verify", "run the claim suites");
  verify_cmd->add_option("--config", config_file, "suite config JSON");
  verify_cmd->add_option("--suite", suites, "claim ids");
  auto* vseed_opt = verify_cmd->add_option("--seed", verify_seed, "seed (fallback: MAHLER_LAB_SEED)");
  auto* vjobs_opt = verify_cmd->add_option("--jobs", verify_jobs, "claims run concurrently");
  verify_cmd->add_option("--out", out_file, "report path, .json or .csv");
  verify_cmd->add_flag("--timings", timings, "record wall-clock runtimes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mahler_cmd) {
      const ParsedPolynomial p = parse_polynomial(poly_text);
      const ComplexPolynomial cp = as_complex(p);
      print_records({{format_polynomial(p), method == "roots" ? mahler_roots(cp) : mahler_integral(cp, nodes)}});
    } else if (*pierce_cmd) {
      const ParsedPolynomial p = parse_polynomial(poly_text);
      const auto* ip = std::get_if<IntPolynomial>(&p);
      if (!ip) throw ArgumentError("pierce needs an integer polynomial");
      const PierceSequence s = pierce(*ip, pierce_n);
      if (g_csv) {
        std::cout << "n,delta,ratio\n";
        for (std::size_t i = 0; i < s.values.size(); ++i)
          std::cout << i + 1 << ',' << s.values[i].str() << ','
                    << (s.ratios[i] ? format_double(*s.ratios[i]) : std::string()) << '\n';
      } else {
        json values = json::array(), ratios = json::array();
        for (std::size_t i = 0; i < s.values.size(); ++i) {
          values.push_back(s.values[i].str());
          ratios.push_back(s.ratios[i] ? json(*s.ratios[i]) : json(nullptr));
        }
        std::cout << json{{"poly", format_polynomial(p)}, {"values", values}, {"ratios", ratios}}.dump(2) << '\n';
      }
    } else if (*search_cmd) {
      SearchOptions opts;
      opts.jobs = jobs;
      const SearchReport r = lehmer_search(deg, height, threshold, opts);
      if (g_csv) {
        std::vector<std::pair<std::string, MeasureResult>> rows;
        for (const auto& c : r.candidates) rows.emplace_back(format_polynomial(c.poly), c.measure);
        print_records(rows);
      } else {
        json cands = json::array();
        for (const auto& c : r.candidates) cands.push_back(record(format_polynomial(c.poly), c.measure));
        std::cout << json{{"degree_max", r.degree_max},
                          {"height_max", r.height_max},
                          {"threshold", r.threshold},
                          {"enumerated", r.enumerated},
                          {"skipped_zero_constant", r.skipped_zero_constant},
                          {"skipped_noncanonical", r.skipped_noncanonical},
                          {"skipped_cyclotomic", r.skipped_cyclotomic},
                          {"inconclusive", r.inconclusive},
                          {"quotient", r.quotient},
                          {"candidates", cands}}
                         .dump(2)
                  << '\n';
      }
    } else if (*op_cmd) {
      if (shift_spec.empty() == matrix_file.empty()) throw ArgumentError("give exactly one of --shift and --matrix");
      const FiniteOperator t = matrix_file.empty() ? shift_operator(shift_spec, dim)
                                                   : FiniteOperator(matrix_from_json(read_json_file(matrix_file)));
      const ParsedPolynomial p = parse_polynomial(poly_text);
      MeasureResult m;
      if (sup) {
        m = op_mahler_sup(t, as_complex(p), restarts, krylov_k, seed_opt->count() ? seed : env_seed());
      } else {
        m = op_mahler_on_vector(t, start_vector(e_spec, t.dim()), as_complex(p), krylov_k);
      }
      print_records({{format_polynomial(p), m}});
    } else if (*areal_cmd) {
      const ParsedPolynomial p = parse_polynomial(poly_text);
      const ComplexPolynomial cp = as_complex(p);
      MeasureResult m;
      if (!rho_file.empty()) {
        m = weighted_areal(cp, radial_weight_from_json(read_json_file(rho_file)));
      } else {
        m = areal_method == "closed" ? areal_mahler_closed(cp) : areal_mahler_quadrature(cp);
      }
      print_records({{format_polynomial(p), m}});
    } else if (*chain_cmd) {
      const ParsedPolynomial p = parse_polynomial(poly_text);
      const ComplexPolynomial cp = as_complex(p);
      const long n = chain_n ? chain_n : 2 * (chain_k + cp.degree());
      const ChainReport r = chain_check(cp, n, chain_k);
      if (g_csv) {
        print_records({{format_polynomial(p), r.areal}, {format_polynomial(p), r.bergman_op}, {format_polynomial(p), r.classical}});
      } else {
        std::cout << json{{"poly", format_polynomial(p)},
                          {"areal", record(format_polynomial(p), r.areal)},
                          {"bergman_op", record(format_polynomial(p), r.bergman_op)},
                          {"classical", record(format_polynomial(p), r.classical)},
                          {"lower_slack", r.lower_slack},
                          {"upper_slack", r.upper_slack},
                          {"chain_ok", r.chain_ok}}
                         .dump(2)
                  << '\n';
      }
    } else if (*limit_cmd) {
      const auto rows = lehmer_limit_table(from, to, limit_n, limit_k, jobs);
      if (g_csv) {
        std::cout << "n,bergman_op,bergman_exact,areal\n";
        for (const auto& r : rows)
          std::cout << r.n << ',' << format_double(r.bergman_op) << ',' << format_double(r.bergman_exact) << ','
                    << format_double(r.areal) << '\n';
      } else {
        json arr = json::array();
        for (const auto& r : rows)
          arr.push_back({{"n", r.n}, {"bergman_op", r.bergman_op}, {"bergman_exact", r.bergman_exact}, {"areal", r.areal}});
        std::cout << arr.dump(2) << '\n';
      }
    } else if (*verify_cmd) {
      SuiteConfig config;
      bool config_has_seed = false;
      if (!config_file.empty()) {
        const nlohmann::json j = read_json_file(config_file);
        config = SuiteConfig::from_json(j);
        config_has_seed = j.contains("seed");
      }
      if (vseed_opt->count()) config.seed = verify_seed;
      else if (!config_has_seed) config.seed = env_seed();
      if (vjobs_opt->count()) config.jobs = verify_jobs;
      if (!suites.empty()) config.suites = suites;
      if (timings) config.timings = true;
      if (!out_file.empty()) {
        config.output_path = out_file;
        config.format = out_file.size() >= 4 && out_file.substr(out_file.size() - 4) == ".csv" ? "csv" : "json";
      } else if (g_csv) {
        config.format = "csv";
      }
      config.validate();
      const auto results = run_suite(config);
      emit_report(results, report_format(config.format), config.output_path);
      for (const auto& r : results)
        std::cerr << r.claim_id << ": " << to_string(r.status) << (r.violation.empty() ? "" : "  " + r.violation) << '\n';
      return exit_code(results);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
