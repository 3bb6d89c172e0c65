#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "pspectra/eigenfunctions.hpp"
#include "pspectra/emit.hpp"
#include "pspectra/errors.hpp"
#include "pspectra/oracle.hpp"
#include "pspectra/ptrig.hpp"
#include "pspectra/spectra.hpp"
#include "pspectra/verify.hpp"
#include "pspectra/version.hpp"

namespace {

using namespace pspectra;

struct Options {
  double p = 2.0, a = 1.0, b = 1.0, L = 1.0;
  int resolution = kDefaultResolution;
  std::uint64_t seed = 20240901;
  std::string format = "csv";
  std::string output;  // empty -> stdout
  int k_max = 10;
  int k = 1;
  int start_sign = 1;
  int samples = 201;
  int P = 1, N = 1;
  double mu_lo = 0.0, mu_hi = 0.0;  // 0 -> window around the diagonal point
};

ProblemParams params_of(const Options& o) { return {o.p, o.a, o.b, o.L}; }

Meta meta_of(const Options& o, const std::string& command) {
  return Meta{{"command", command},
              {"p", o.p},
              {"a", o.a},
              {"b", o.b},
              {"L", o.L},
              {"resolution", static_cast<long long>(o.resolution)},
              {"seed", static_cast<long long>(o.seed)},
              {"format", o.format},
              {"version", std::string(kVersion)}};
}

std::string cache_file_name(double p, int resolution) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "ptrig_p%.17g_r%d.tab", p, resolution);
  std::string name(buf);
  for (char& c : name)
    if (c == '.' || c == '+') c = '_';
  return name;
}

// build the evaluation table, going through the cache directory named by
// PSPECTRA_TABLE_CACHE when that variable is set
std::shared_ptr<const PTrigTable> acquire_table(double p, int resolution) {
  const char* dir = std::getenv("PSPECTRA_TABLE_CACHE");
  if (dir != nullptr && *dir != '\0') {
    const std::string path = std::string(dir) + "/" + cache_file_name(p, resolution);
    try {
      PTrigTable t = PTrigTable::load(path);
      if (t.p() == p && t.resolution() == resolution)
        return std::make_shared<PTrigTable>(std::move(t));
    } catch (const std::exception&) {
      // fall through and rebuild
    }
    auto table = std::make_shared<PTrigTable>(PTrigTable::build(p, resolution));
    try {
      table->save(path);
    } catch (const std::exception&) {
      // cache write is best-effort
    }
    return table;
  }
  return std::make_shared<PTrigTable>(PTrigTable::build(p, resolution));
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("cannot open output path " + path);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

int run_pi_p(const Options& o) {
  char buf[64];
  std::string text;
  std::snprintf(buf, sizeof buf, "%.16g\n", compute_pi_p(o.p));
  text += buf;
  std::snprintf(buf, sizeof buf, "%.16g\n", lambda_k_symmetric(o.p, o.L, 1));
  text += buf;
  write_text(text, o.output);
  return 0;
}

int run_spectrum(const Options& o) {
  const ProblemParams prm = params_of(o);
  Table t;
  t.columns = {"k", "lambda"};
  for (const DirichletEigenvalue& ev : dirichlet_spectrum(prm, o.k_max))
    t.rows.push_back({static_cast<long long>(ev.k), ev.value});
  emit(t, meta_of(o, "spectrum"), o.format, o.output);
  return 0;
}

int run_eigenfunction(const Options& o) {
  const ProblemParams prm = params_of(o);
  if (o.samples < 2) throw std::domain_error("need at least 2 samples");
  const auto table = acquire_table(o.p, o.resolution);
  const PiecewisePSolution u = build_kth(prm, o.k, o.start_sign, table);
  Table t;
  t.columns = {"t", "u", "du"};
  for (int i = 0; i < o.samples; ++i) {
    const double x = prm.L * i / (o.samples - 1);
    t.rows.push_back({x, u.value(x), u.slope(x)});
  }
  emit(t, meta_of(o, "eigenfunction"), o.format, o.output);
  return 0;
}

int run_fucik(const Options& o) {
  const ProblemParams prm = params_of(o);
  const FucikCurveId curve(o.P, o.N);
  const double lam1 = lambda_1_asym(prm);
  double lo = o.mu_lo, hi = o.mu_hi;
  if (lo == 0.0) lo = lam1 * std::pow(o.P + 0.5 * o.N, prm.p);
  if (hi == 0.0) hi = lam1 * std::pow(o.P + 4.0 * o.N, prm.p);
  Table t;
  t.columns = {"mu", "nu", "P", "N"};
  for (const FucikPoint& pt : sample_fucik_curve(prm, curve, lo, hi, o.samples))
    t.rows.push_back({pt.mu, pt.nu, static_cast<long long>(o.P),
                      static_cast<long long>(o.N)});
  emit(t, meta_of(o, "fucik"), o.format, o.output);
  return 0;
}

int run_verify_cmd(const Options& o) {
  const ProblemParams prm = params_of(o);
  const auto table = acquire_table(o.p, o.resolution);
  const VerifyReport rep = run_verify(prm, table, o.seed);
  Table t;
  t.columns = {"check", "status", "error", "bound"};
  for (const VerifyCheck& c : rep.checks)
    t.rows.push_back(
        {c.name, std::string(c.pass ? "pass" : "fail"), c.error, c.bound});
  emit(t, meta_of(o, "verify"), o.format, o.output);
  return rep.all_pass() ? 0 : 2;
}

void add_problem_flags(CLI::App* cmd, Options* o, bool with_table_opts) {
  cmd->add_option("--p", o->p, "exponent p")->capture_default_str();
  cmd->add_option("--a", o->a, "positive-slope weight")->capture_default_str();
  cmd->add_option("--b", o->b, "negative-slope weight")->capture_default_str();
  cmd->add_option("--L", o->L, "interval length")->capture_default_str();
  cmd->add_option("--format", o->format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output", o->output, "output path (default stdout)");
  if (with_table_opts) {
    cmd->add_option("--resolution", o->resolution, "evaluation table nodes")
        ->capture_default_str();
    cmd->add_option("--seed", o->seed, "seed for sampled checks")
        ->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spectra of the one-dimensional asymmetric p-Laplacian: closed forms, "
      "eigenfunction sampling, and numerical cross-checks"};
  app.require_subcommand(1);
  Options o;

  CLI::App* pi_cmd =
      app.add_subcommand("pi-p", "print the half-period constant and the "
                                 "first symmetric eigenvalue on (0, L)");
  pi_cmd->add_option("--p", o.p, "exponent p")->capture_default_str();
  pi_cmd->add_option("--L", o.L, "interval length")->capture_default_str();
  pi_cmd->add_option("--output", o.output, "output path (default stdout)");

  CLI::App* spec_cmd =
      app.add_subcommand("spectrum", "list the first k_max eigenvalues");
  add_problem_flags(spec_cmd, &o, true);
  spec_cmd->add_option("--k-max", o.k_max, "number of eigenvalues")
      ->capture_default_str();

  CLI::App* eig_cmd = app.add_subcommand(
      "eigenfunction", "sample the k-th eigenfunction and its slope");
  add_problem_flags(eig_cmd, &o, true);
  eig_cmd->add_option("--k", o.k, "eigenvalue index")->capture_default_str();
  eig_cmd->add_option("--start-sign", o.start_sign, "sign of the first hump")
      ->check(CLI::IsMember({1, -1}))
      ->capture_default_str();
  eig_cmd->add_option("--samples", o.samples, "number of sample abscissae")
      ->capture_default_str();

  CLI::App* fucik_cmd = app.add_subcommand(
      "fucik", "sample one curve of the two-parameter spectrum");
  add_problem_flags(fucik_cmd, &o, true);
  fucik_cmd->add_option("--P", o.P, "positive hump count")
      ->capture_default_str();
  fucik_cmd->add_option("--N", o.N, "negative hump count")
      ->capture_default_str();
  fucik_cmd->add_option("--mu-lo", o.mu_lo, "left end of the mu range");
  fucik_cmd->add_option("--mu-hi", o.mu_hi, "right end of the mu range");
  fucik_cmd->add_option("--samples", o.samples, "points per curve")
      ->capture_default_str();

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "run the oracle cross-check suite at one parameter point");
  add_problem_flags(verify_cmd, &o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (pi_cmd->parsed()) return run_pi_p(o);
    if (spec_cmd->parsed()) return run_spectrum(o);
    if (eig_cmd->parsed()) return run_eigenfunction(o);
    if (fucik_cmd->parsed()) return run_fucik(o);
    if (verify_cmd->parsed()) return run_verify_cmd(o);
    std::cerr << "no command selected\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
