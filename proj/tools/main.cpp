#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sard/closed_form.hpp"
#include "sard/discrete_operator.hpp"
#include "sard/errors.hpp"
#include "sard/grid.hpp"
#include "sard/oracle.hpp"
#include "sard/quadrature.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_invalid_input = 2;
constexpr int exit_node_collision = 3;
constexpr int exit_verification_failure = 4;

constexpr double moment_tolerance = 1e-9;
constexpr double operator_tolerance = 1e-10;
constexpr int convolution_window = 80;

struct Diagnostic {
  std::string check;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

// one serialization for both formats so CSV and JSON carry identical bytes
std::string num(double v) { return json(v).dump(); }

json envelope(const std::string& command, json inputs, json payload,
              const std::vector<Diagnostic>& diagnostics) {
  json env;
  env["schema_version"] = 1;
  env["command"] = command;
  env["inputs"] = std::move(inputs);
  env["payload"] = std::move(payload);
  json list = json::array();
  for (const Diagnostic& d : diagnostics) {
    json entry;
    entry["check"] = d.check;
    entry["pass"] = d.pass;
    entry["measured"] = d.measured;
    entry["tolerance"] = d.tolerance;
    list.push_back(std::move(entry));
  }
  env["diagnostics"] = std::move(list);
  return env;
}

void emit_json(const json& env) { std::cout << env.dump(2) << "\n"; }

void emit_csv_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::cerr << "check,pass,measured,tolerance\n";
  for (const Diagnostic& d : diagnostics) {
    std::cerr << d.check << "," << (d.pass ? "true" : "false") << "," << num(d.measured)
              << "," << num(d.tolerance) << "\n";
  }
}

// the dense solve is O(n^3) and meant for desk-scale grids
constexpr int max_verify_n = 1024;
// closed-form-only commands just need the rule to fit comfortably in memory
constexpr int max_rule_n = 1 << 20;

void check_rule_size(int n) {
  if (n > max_rule_n) {
    throw sard::InvalidInputError("grid size " + std::to_string(n) + " exceeds the " +
                                  std::to_string(max_rule_n) + " cap");
  }
}

double parse_t(const std::string& token) {
  if (token == "1/pi") return 1.0 / std::numbers::pi;
  if (token == "1/e") return 1.0 / std::numbers::e;
  if (token == "sqrt2/2") return std::sqrt(2.0) / 2.0;
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw sard::InvalidInputError("cannot parse t value '" + token +
                                  "' (expected a decimal or 1/pi, 1/e, sqrt2/2)");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> items;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  if (items.empty()) {
    throw sard::InvalidInputError("empty list argument");
  }
  return items;
}

int parse_int(const std::string& token) {
  int value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw sard::InvalidInputError("cannot parse integer '" + token + "'");
  }
  return value;
}

std::vector<double> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw sard::InvalidInputError("cannot open samples file '" + path + "'");
  }
  std::vector<double> samples;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::stringstream stream(line);
    std::string token;
    while (stream >> token) {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw sard::InvalidInputError("bad sample value '" + token + "' in " + path);
      }
      samples.push_back(value);
    }
  }
  return samples;
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double rel_gap(std::span<const double> a, std::span<const double> b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap / max_abs(b);
}

std::vector<Diagnostic> moment_diagnostics(const sard::QuadratureRule& rule) {
  const sard::Singularity t(rule.t);
  const double ref0 = sard::g0(t);
  const double ref1 = sard::g1(t);
  double sum0 = 0.0;
  double sum1 = 0.0;
  for (std::size_t b = 0; b < rule.coefficients.size(); ++b) {
    sum0 += rule.coefficients[b];
    sum1 += rule.coefficients[b] * rule.grid.nodes[b];
  }
  const double m0 = std::abs(sum0 - ref0) / std::max(1.0, std::abs(ref0));
  const double m1 = std::abs(sum1 - ref1) / std::max(1.0, std::abs(ref1));
  return {{"moment_sum", m0 <= moment_tolerance, m0, moment_tolerance},
          {"moment_first", m1 <= moment_tolerance, m1, moment_tolerance}};
}

int finish(const std::string& command, const json& inputs, const json& payload,
           const std::vector<Diagnostic>& diagnostics, const std::string& format,
           const std::string& csv_text, int exit_code) {
  if (format == "csv") {
    std::cout << csv_text;
    emit_csv_diagnostics(diagnostics);
  } else {
    emit_json(envelope(command, inputs, payload, diagnostics));
  }
  return exit_code;
}

int cmd_coeffs(int n, const std::string& t_token, const std::string& format) {
  check_rule_size(n);
  const sard::GridSpec grid = sard::make_grid(n);
  const sard::Singularity t(parse_t(t_token));
  const sard::QuadratureRule rule = sard::coefficients(grid, t);

  json inputs;
  inputs["n"] = n;
  inputs["t"] = t.value();
  inputs["t_token"] = t_token;
  inputs["format"] = format;

  json payload;
  payload["h"] = grid.h;
  payload["nodes"] = grid.nodes;
  payload["coefficients"] = rule.coefficients;
  payload["p1"] = rule.multipliers.p1;
  payload["p0"] = rule.multipliers.p0;

  const std::vector<Diagnostic> diagnostics = moment_diagnostics(rule);
  bool all_pass = true;
  for (const Diagnostic& d : diagnostics) all_pass = all_pass && d.pass;

  std::ostringstream csv;
  csv << "beta,node,coefficient\n";
  for (std::size_t b = 0; b < rule.coefficients.size(); ++b) {
    csv << b << "," << num(grid.nodes[b]) << "," << num(rule.coefficients[b]) << "\n";
  }
  return finish("coeffs", inputs, payload, diagnostics, format, csv.str(),
                all_pass ? exit_ok : exit_verification_failure);
}

int cmd_verify(const std::string& n_csv, const std::string& t_csv, double tol,
               const std::string& format) {
  if (!(tol > 0.0)) {
    throw sard::InvalidInputError("tolerance must be positive");
  }
  const std::vector<std::string> n_tokens = split_list(n_csv);
  const std::vector<std::string> t_tokens = split_list(t_csv);

  json inputs;
  inputs["n_list"] = n_csv;
  inputs["t_list"] = t_csv;
  inputs["tol"] = tol;
  inputs["format"] = format;

  std::vector<Diagnostic> diagnostics;
  json cells = json::array();
  std::ostringstream csv;
  csv << "n,t,status,gap_closed_oracle,gap_convolution,gap_multipliers,gap_f,pass\n";
  bool all_pass = true;

  for (const std::string& nt : n_tokens) {
    const int n = parse_int(nt);
    if (n > max_verify_n) {
      throw sard::InvalidInputError("verify grids are capped at " +
                                    std::to_string(max_verify_n) + " (dense solve)");
    }
    const sard::GridSpec grid = sard::make_grid(n);
    for (const std::string& tt : t_tokens) {
      const sard::Singularity t(parse_t(tt));
      const std::string cell_tag = "[n=" + nt + ",t=" + tt + "]";
      json cell;
      cell["n"] = n;
      cell["t"] = t.value();
      cell["t_token"] = tt;
      try {
        sard::require_no_collision(grid, t);
      } catch (const sard::NodeCollisionError&) {
        cell["status"] = "skipped: node collision";
        cells.push_back(std::move(cell));
        csv << n << "," << num(t.value()) << ",skipped,,,,,\n";
        continue;
      }

      const sard::QuadratureRule closed = sard::coefficients(grid, t);
      const sard::QuadratureRule oracle = sard::oracle_rule(grid, t);
      const sard::QuadratureRule conv =
          sard::coefficients_via_convolution(grid, t, convolution_window);

      const double gap_oracle = rel_gap(closed.coefficients, oracle.coefficients);
      const double gap_conv = rel_gap(conv.coefficients, closed.coefficients);
      const double gap_mult = std::max(
          std::abs(closed.multipliers.p1 - oracle.multipliers.p1) /
              std::max(1.0, std::abs(oracle.multipliers.p1)),
          std::abs(closed.multipliers.p0 - oracle.multipliers.p0) /
              std::max(1.0, std::abs(oracle.multipliers.p0)));
      double gap_f = 0.0;
      for (int b = 0; b <= n; ++b) {
        gap_f = std::max(gap_f, std::abs(sard::f_value(grid, b, t) -
                                         sard::f_oracle(grid, b, t)));
      }

      const bool pass =
          gap_oracle <= tol && gap_conv <= tol && gap_mult <= tol && gap_f <= tol;
      all_pass = all_pass && pass;

      diagnostics.push_back({"closed_vs_oracle" + cell_tag, gap_oracle <= tol, gap_oracle, tol});
      diagnostics.push_back({"convolution_route" + cell_tag, gap_conv <= tol, gap_conv, tol});
      diagnostics.push_back({"multipliers" + cell_tag, gap_mult <= tol, gap_mult, tol});
      diagnostics.push_back({"f_formula" + cell_tag, gap_f <= tol, gap_f, tol});

      cell["status"] = "ok";
      cell["gap_closed_oracle"] = gap_oracle;
      cell["gap_convolution"] = gap_conv;
      cell["gap_multipliers"] = gap_mult;
      cell["gap_f"] = gap_f;
      cell["pass"] = pass;
      cells.push_back(std::move(cell));
      csv << n << "," << num(t.value()) << ",ok," << num(gap_oracle) << "," << num(gap_conv)
          << "," << num(gap_mult) << "," << num(gap_f) << "," << (pass ? "true" : "false")
          << "\n";
    }
  }

  json payload;
  payload["tolerance"] = tol;
  payload["cells"] = std::move(cells);
  payload["all_pass"] = all_pass;
  return finish("verify", inputs, payload, diagnostics, format, csv.str(),
                all_pass ? exit_ok : exit_verification_failure);
}

int cmd_integrate(const std::string& func_id, const std::string& samples_path, int n,
                  const std::string& t_token, const std::string& format) {
  if (func_id.empty() == samples_path.empty()) {
    throw sard::InvalidInputError("pass exactly one of --func or --samples");
  }
  check_rule_size(n);
  const sard::GridSpec grid = sard::make_grid(n);
  const sard::Singularity t(parse_t(t_token));
  const sard::QuadratureRule rule = sard::coefficients(grid, t);

  json inputs;
  inputs["n"] = n;
  inputs["t"] = t.value();
  inputs["t_token"] = t_token;
  if (!func_id.empty()) inputs["func"] = func_id;
  if (!samples_path.empty()) inputs["samples"] = samples_path;
  inputs["format"] = format;

  double approx = 0.0;
  std::optional<double> reference;
  if (!func_id.empty()) {
    const sard::CatalogFunction* func = sard::find_catalog(func_id);
    if (func == nullptr) {
      throw sard::InvalidInputError("unknown catalog function '" + func_id + "'");
    }
    approx = sard::apply_rule(rule, *func);
    reference = sard::reference_value(*func, t);
  } else {
    const std::vector<double> samples = read_samples(samples_path);
    approx = sard::apply_rule(rule, samples);
  }

  json payload;
  payload["approximation"] = approx;
  if (reference) {
    payload["reference"] = *reference;
    payload["abs_error"] = std::abs(approx - *reference);
  } else {
    payload["reference"] = nullptr;
    payload["abs_error"] = nullptr;
  }

  const std::vector<Diagnostic> diagnostics = moment_diagnostics(rule);
  std::ostringstream csv;
  csv << "approximation,reference,abs_error\n";
  csv << num(approx) << ",";
  if (reference) {
    csv << num(*reference) << "," << num(std::abs(approx - *reference));
  } else {
    csv << ",";
  }
  csv << "\n";
  return finish("integrate", inputs, payload, diagnostics, format, csv.str(), exit_ok);
}

int cmd_convergence(const std::string& func_id, const std::string& t_token, int n_start,
                    int doublings, const std::string& format) {
  if (n_start < 2) throw sard::InvalidInputError("--n-start must be >= 2");
  if (doublings < 0) throw sard::InvalidInputError("--doublings must be >= 0");
  if (doublings > 20 || (static_cast<long>(n_start) << doublings) > (1L << 20)) {
    throw sard::InvalidInputError("grid ladder too large");
  }
  const sard::CatalogFunction* func = sard::find_catalog(func_id);
  if (func == nullptr) {
    throw sard::InvalidInputError("unknown catalog function '" + func_id + "'");
  }
  const sard::Singularity t(parse_t(t_token));
  std::vector<int> n_list;
  for (int k = 0; k <= doublings; ++k) n_list.push_back(n_start << k);

  const sard::ConvergenceReport report = sard::convergence_study(*func, t, n_list);

  json inputs;
  inputs["func"] = func_id;
  inputs["t"] = t.value();
  inputs["t_token"] = t_token;
  inputs["n_start"] = n_start;
  inputs["doublings"] = doublings;
  inputs["format"] = format;

  json rows = json::array();
  std::ostringstream csv;
  csv << "n,approx,reference,abs_error,order\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const sard::ConvergenceRow& row = report.rows[i];
    json jrow;
    jrow["n"] = row.n;
    if (row.skipped) {
      jrow["approx"] = nullptr;
      jrow["reference"] = nullptr;
      jrow["abs_error"] = nullptr;
      jrow["note"] = row.note;
      csv << row.n << ",,,,\n";
    } else {
      jrow["approx"] = row.approx;
      jrow["reference"] = row.reference;
      jrow["abs_error"] = row.abs_error;
      csv << row.n << "," << num(row.approx) << "," << num(row.reference) << ","
          << num(row.abs_error) << ",";
      if (i > 0 && report.orders[i - 1]) {
        csv << num(*report.orders[i - 1]);
      }
      csv << "\n";
    }
    rows.push_back(std::move(jrow));
  }
  json orders = json::array();
  for (const std::optional<double>& order : report.orders) {
    if (order) {
      orders.push_back(*order);
    } else {
      orders.push_back(nullptr);
    }
  }

  json payload;
  payload["function"] = report.function_id;
  payload["t"] = report.t;
  payload["rows"] = std::move(rows);
  payload["orders"] = std::move(orders);
  return finish("convergence", inputs, payload, {}, format, csv.str(), exit_ok);
}

int cmd_operator_check(int window, const std::string& format) {
  if (window < 10) {
    throw sard::InvalidInputError("--window must be >= 10");
  }
  const sard::OperatorKernel kernel{1.0};

  json inputs;
  inputs["window"] = window;
  inputs["format"] = format;

  std::vector<Diagnostic> diagnostics;
  json annihilation = json::array();
  json delta = json::array();
  std::ostringstream csv;
  csv << "check,value\n";
  bool all_pass = true;

  for (int alpha = 0; alpha <= 3; ++alpha) {
    const double residual = sard::check_annihilation(kernel, alpha, window);
    const bool pass = residual <= operator_tolerance;
    all_pass = all_pass && pass;
    const std::string name = "annihilation_alpha_" + std::to_string(alpha);
    diagnostics.push_back({name, pass, residual, operator_tolerance});
    annihilation.push_back(residual);
    csv << name << "," << num(residual) << "\n";
  }
  for (long beta = -5; beta <= 5; ++beta) {
    const double value = sard::check_delta_identity(kernel, beta, window);
    const double target = beta == 0 ? 1.0 : 0.0;
    const double deviation = std::abs(value - target);
    const bool pass = deviation <= operator_tolerance;
    all_pass = all_pass && pass;
    const std::string name = "delta_identity_beta_" + std::to_string(beta);
    diagnostics.push_back({name, pass, deviation, operator_tolerance});
    delta.push_back(value);
    csv << name << "," << num(value) << "\n";
  }

  json payload;
  payload["window"] = window;
  payload["annihilation_residuals"] = std::move(annihilation);
  payload["delta_identity_values"] = std::move(delta);
  return finish("operator-check", inputs, payload, diagnostics, format, csv.str(),
                all_pass ? exit_ok : exit_verification_failure);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal quadrature rules for the Cauchy principal-value integral "
               "int_0^1 phi(x)/(x-t) dx on uniform grids"};
  app.require_subcommand(1);

  std::string format = "json";
  std::string t_token = "1/pi";

  auto* coeffs = app.add_subcommand("coeffs", "Optimal coefficients for one (n, t)");
  int coeffs_n = 8;
  coeffs->add_option("--n", coeffs_n, "number of subintervals (>= 2)")->required();
  coeffs->add_option("--t", t_token, "singularity in (0,1); accepts 1/pi, 1/e, sqrt2/2")
      ->required();
  coeffs->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  auto* verify = app.add_subcommand(
      "verify", "Cross-check the explicit formulas against the dense solve, the "
                "convolution route, and the pv integrator");
  std::string n_list = "2,4,8,16,32,64";
  std::string t_list = "1/pi,1/e,sqrt2/2";
  double tol = 1e-8;
  verify->add_option("--n-list", n_list, "comma-separated grid sizes");
  verify->add_option("--t-list", t_list, "comma-separated t values");
  verify->add_option("--tol", tol, "verification tolerance");
  verify->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  auto* integrate = app.add_subcommand("integrate", "Apply a rule to a catalog function "
                                                    "or a samples file");
  std::string func_id;
  std::string samples_path;
  int integrate_n = 16;
  integrate->add_option("--func", func_id, "catalog id: one,x,x2,x3,x4,inv1p,exp");
  integrate->add_option("--samples", samples_path, "file with N+1 sample values");
  integrate->add_option("--n", integrate_n, "number of subintervals")->required();
  integrate->add_option("--t", t_token, "singularity in (0,1)")->required();
  integrate->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  auto* convergence = app.add_subcommand("convergence", "Error decay under grid doubling");
  int n_start = 32;
  int doublings = 3;
  convergence->add_option("--func", func_id, "catalog id")->required();
  convergence->add_option("--t", t_token, "singularity in (0,1)")->required();
  convergence->add_option("--n-start", n_start, "first grid size");
  convergence->add_option("--doublings", doublings, "number of doublings");
  convergence->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* operator_check = app.add_subcommand("operator-check",
                                            "Discrete-operator identity self-tests");
  int window = 80;
  operator_check->add_option("--window", window, "truncation window (>= 10)");
  operator_check->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return exit_invalid_input;
  }

  try {
    if (coeffs->parsed()) return cmd_coeffs(coeffs_n, t_token, format);
    if (verify->parsed()) return cmd_verify(n_list, t_list, tol, format);
    if (integrate->parsed()) {
      return cmd_integrate(func_id, samples_path, integrate_n, t_token, format);
    }
    if (convergence->parsed()) {
      return cmd_convergence(func_id, t_token, n_start, doublings, format);
    }
    if (operator_check->parsed()) return cmd_operator_check(window, format);
    std::cerr << "no subcommand\n";
    return exit_invalid_input;
  } catch (const sard::NodeCollisionError& e) {
    std::cerr << "node collision: " << e.what() << "\n";
    return exit_node_collision;
  } catch (const sard::InvalidInputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return exit_invalid_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid_input;
  }
}
