// Command-line front end. Talks to the library through the C interface only.
//
// Polynomials are given as ascending coefficients: "1,0,1" is t^2 + 1.
// Matrices and cones are JSON. Any input may be replaced by @path.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "conespectra/conespectra.h"

namespace {

enum class Command { Eig, Factor, Roots, Pf, PsdForm, ConeDual, ConeExtremal, ConeSeparate, ConeChain };

struct Settings {
  cs_options opts{};
  std::string format = "json";
  std::string batch;
  std::string input;
  std::string point;
  std::string op;
  std::size_t steps = 10;
  std::uint64_t seed = 0;
  Command command = Command::Eig;
};

struct Outcome {
  cs_status status = CS_OK;
  std::string output;
  std::string error;
  std::string warning;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string resolve(const std::string& arg) { return (!arg.empty() && arg[0] == '@') ? read_file(arg.substr(1)) : arg; }

Outcome execute(const Settings& s, const std::string& input, bool compact) {
  cs_report* report = nullptr;
  cs_status st = CS_OK;
  const char* in = input.c_str();
  switch (s.command) {
    case Command::Eig: st = cs_eig(in, &s.opts, &report); break;
    case Command::Factor: st = cs_factor(in, &s.opts, &report); break;
    case Command::Roots: st = cs_roots(in, &s.opts, &report); break;
    case Command::Pf: st = cs_perron(in, &s.opts, &report); break;
    case Command::PsdForm: st = cs_psd_form(in, &s.opts, &report); break;
    case Command::ConeDual: st = cs_cone_dual(in, &s.opts, &report); break;
    case Command::ConeExtremal: st = cs_cone_extremal(in, &s.opts, &report); break;
    case Command::ConeSeparate: st = cs_cone_separate(in, s.point.c_str(), &s.opts, &report); break;
    case Command::ConeChain: st = cs_cone_chain(in, s.op.c_str(), s.steps, &s.opts, &report); break;
  }
  Outcome o;
  o.status = st;
  if (st != CS_OK) {
    o.error = std::string("error [") + cs_last_error_kind() + "]: " + cs_last_error();
    return o;
  }
  o.warning = cs_report_warning(report);
  if (s.format == "text")
    o.output = cs_report_text(report);
  else
    o.output = std::string(compact ? cs_report_json_compact(report) : cs_report_json(report)) + "\n";
  cs_report_free(report);
  return o;
}

int exit_code(cs_status s) {
  switch (s) {
    case CS_OK: return 0;
    case CS_INPUT_ERROR: return 1;
    case CS_NUMERICAL_ERROR: return 2;
    default: return 3;
  }
}

int run_single(const Settings& s) {
  if (s.input.empty()) {
    std::cerr << "error [InvalidArgument]: missing input (or use --batch)\n";
    return 1;
  }
  const Outcome o = execute(s, resolve(s.input), false);
  if (o.status != CS_OK) {
    std::cerr << o.error << "\n";
    return exit_code(o.status);
  }
  if (!o.warning.empty()) std::cerr << "warning: " << o.warning << "\n";
  std::cout << o.output;
  return 0;
}

// Lines are processed concurrently; results are printed in line order.
int run_batch(const Settings& s) {
  std::vector<std::string> lines;
  {
    std::istringstream in(read_file(s.batch));
    for (std::string line; std::getline(in, line);)
      if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  std::vector<Outcome> results(lines.size());
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(lines.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < lines.size();) results[i] = execute(s, lines[i], true);
    });
  for (auto& t : pool) t.join();

  int worst = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].status != CS_OK) {
      std::cerr << "line " << (i + 1) << ": " << results[i].error << "\n";
      worst = std::max(worst, exit_code(results[i].status));
      continue;
    }
    if (!results[i].warning.empty()) std::cerr << "line " << (i + 1) << ": warning: " << results[i].warning << "\n";
    if (s.format == "text" && i > 0) std::cout << "---\n";
    std::cout << results[i].output;
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  cs_options_init(&s.opts);
  bool verify = false, all = false;

  CLI::App app{"Eigenvalues, Perron vectors and real polynomial factors from cone-preserving maps"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tol", s.opts.tol, "Engine tolerance (default 1e-10 or $CONE_SPECTRA_TOL)")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iter", s.opts.max_iter, "Iteration budget of the cone engine")->check(CLI::Range(1, 1 << 30));
  app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--verify", verify, "Append an independent oracle check");
  app.add_option("--perturb-seed", s.seed, "Perturb the engine seed inside the cone");
  app.add_option("--batch", s.batch, "Process one input per line of this file");

  auto* eig = app.add_subcommand("eig", "Eigenvalue certificate of a symmetric matrix (JSON)");
  eig->add_option("matrix", s.input, "Matrix JSON or @file");
  eig->add_flag("--all", all, "Full decomposition");
  auto* factor = app.add_subcommand("factor", "Factor a polynomial into real factors of degree <= 2");
  factor->add_option("coefficients", s.input, "Ascending coefficients, e.g. 1,0,1 for t^2+1");
  auto* roots = app.add_subcommand("roots", "Real roots and conjugate pairs of a polynomial");
  roots->add_option("coefficients", s.input, "Ascending coefficients, e.g. 1,0,1 for t^2+1");
  auto* pf = app.add_subcommand("pf", "Perron vector and Collatz-Wielandt bracket of a nonnegative matrix");
  pf->add_option("matrix", s.input, "Matrix JSON or @file");
  auto* psd = app.add_subcommand("psd-form", "PSD form S with u^T S u = lambda S");
  psd->add_option("matrix", s.input, "Matrix JSON or @file");

  auto* cone = app.add_subcommand("cone", "Polyhedral cone operations");
  cone->require_subcommand(1);
  auto* dual = cone->add_subcommand("dual", "Dual cone");
  auto* extremal = cone->add_subcommand("extremal", "Extremal rays");
  auto* sep = cone->add_subcommand("separate", "Functional separating a point from the cone");
  auto* chain = cone->add_subcommand("chain", "Iterated images C, u(C), ..., u^n(C)");
  for (auto* sub : {dual, extremal, sep, chain}) sub->add_option("cone", s.input, "Cone JSON or @file");
  sep->add_option("--point", s.point, "Point, e.g. [-1,0]")->required();
  chain->add_option("--op", s.op, "Operator matrix JSON or @file")->required();
  chain->add_option("--n", s.steps, "Number of steps")->check(CLI::Range(0, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (eig->parsed()) s.command = Command::Eig;
  if (factor->parsed()) s.command = Command::Factor;
  if (roots->parsed()) s.command = Command::Roots;
  if (pf->parsed()) s.command = Command::Pf;
  if (psd->parsed()) s.command = Command::PsdForm;
  if (dual->parsed()) s.command = Command::ConeDual;
  if (extremal->parsed()) s.command = Command::ConeExtremal;
  if (sep->parsed()) s.command = Command::ConeSeparate;
  if (chain->parsed()) s.command = Command::ConeChain;
  s.opts.verify = verify;
  s.opts.all = all;
  if (app.count("--perturb-seed")) {
    s.opts.has_perturb_seed = 1;
    s.opts.perturb_seed = s.seed;
  }

  try {
    if (!s.point.empty()) s.point = resolve(s.point);
    if (!s.op.empty()) s.op = resolve(s.op);
    return s.batch.empty() ? run_single(s) : run_batch(s);
  } catch (const std::exception& e) {
    std::cerr << "error [InvalidArgument]: " << e.what() << "\n";
    return 1;
  }
}
