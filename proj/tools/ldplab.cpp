// ldplab command-line tool: runs one experiment and writes CSV/JSON reports.
//
//   ldplab rate --measure m.json --n 12 --grid 0:4:0.05 --out results
//   ldplab suite --seed 20240611
//
// Exit codes: 0 ok, 1 error (error JSON on stderr), 2 suite refutation.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ldplab/ldplab.hpp"
#include "ldplab/suite.hpp"

namespace fs = std::filesystem;
using ldplab::io::Json;

namespace {

struct Config {
  std::string command;
  std::string measure;
  std::size_t n = 20;
  std::size_t samples = 10000;
  std::size_t nmax = 8;
  std::size_t depth = 8;
  std::string grid;
  std::string mode = "top";
  std::string method = "auto";
  double r = 0.25;
  double eps = 0.1;
  std::string theta = "1";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t workers = 1;
  std::string out = ".";
  int K = 4;
  double budget = ldplab::kDefaultWordBudget;
  std::string only;
};

struct GridSpec {
  double min = 0, max = 0, pitch = 0;
};

ldplab::Error bad(const std::string& what) { return ldplab::Error(ldplab::ErrorKind::BadParameters, what); }

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> g.min >> c1 >> g.max >> c2 >> g.pitch) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw bad("--grid expects MIN:MAX:PITCH, got '" + text + "'");
  }
  if (!(g.min < g.max) || !(g.pitch > 0.0)) throw bad("--grid needs MIN < MAX and PITCH > 0");
  return g;
}

std::vector<int> parse_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw bad("expected a comma-separated list of integers, got '" + text + "'");
    }
  }
  if (out.empty()) throw bad("empty list");
  return out;
}

ldplab::GridMode parse_mode(const std::string& m) {
  if (m == "top") return ldplab::GridMode::TopCoordinate;
  if (m == "chamber") return ldplab::GridMode::FullChamber;
  throw bad("--mode must be top or chamber");
}

ldplab::RateGrid make_grid(const Config& cfg, std::size_t dim, const std::string& fallback = {}) {
  if (cfg.grid.empty() && fallback.empty()) throw bad("--grid MIN:MAX:PITCH is required");
  const auto g = parse_grid(cfg.grid.empty() ? fallback : cfg.grid);
  return parse_mode(cfg.mode) == ldplab::GridMode::TopCoordinate ? ldplab::RateGrid::top(g.min, g.max, g.pitch)
                                                                  : ldplab::RateGrid::chamber(dim, g.min, g.max, g.pitch);
}

ldplab::MeasureSpec require_measure(const Config& cfg) {
  if (cfg.measure.empty()) throw bad("--measure PATH is required");
  return ldplab::io::load_measure(cfg.measure);
}

// JSON has no infinities; they become null next to an explicit flag
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json points_json(const std::vector<ldplab::Point>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(p);
  return arr;
}

Json config_echo(const Config& c) {
  return {{"command", c.command}, {"measure", c.measure}, {"n", c.n},       {"samples", c.samples},
          {"nmax", c.nmax},       {"depth", c.depth},     {"grid", c.grid}, {"mode", c.mode},
          {"method", c.method},   {"r", c.r},             {"eps", c.eps},   {"theta", c.theta},
          {"seed", c.seed},       {"workers", c.workers}, {"K", c.K},       {"budget", c.budget},
          {"only", c.only}};
}

Json report_head(const Config& c) {
  return {{"tool", "ldplab"}, {"version", ldplab::version()}, {"command", c.command}, {"seed", c.seed},
          {"config", config_echo(c)}};
}

class Output {
 public:
  explicit Output(fs::path dir) : dir_(std::move(dir)) {}

  void json(const std::string& name, const Json& doc) {
    ldplab::io::write_json(dir_ / name, doc);
    files_.push_back(name);
  }
  void csv(const std::string& name, const ldplab::io::CsvTable& table) {
    ldplab::io::write_atomic(dir_ / name, table.str());
    files_.push_back(name);
  }
  void measure(const std::string& name, const ldplab::MeasureSpec& mu) {
    ldplab::io::write_measure(dir_ / name, mu);
    files_.push_back(name);
  }

  /// Wall-clock lives here so the reports themselves are reproducible.
  void manifest(const Config& c, double seconds, const std::string& started) {
    Json doc = report_head(c);
    doc["startedAt"] = started;
    doc["wallClockSeconds"] = seconds;
    doc["files"] = files_;
    ldplab::io::write_json(dir_ / "manifest.json", doc);
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::vector<std::string> coordinate_header(std::size_t coords) {
  std::vector<std::string> h;
  for (std::size_t k = 0; k < coords; ++k) h.push_back("kappa_" + std::to_string(k + 1));
  return h;
}

ldplab::io::CsvTable rate_table(const ldplab::RateEstimate& est) {
  using ldplab::io::format_number;
  auto header = coordinate_header(est.grid.coords());
  for (const char* h : {"value", "ciHalfWidth", "flag"}) header.emplace_back(h);
  ldplab::io::CsvTable t(header);
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    std::vector<std::string> row;
    for (double x : est.grid.point(i)) row.push_back(format_number(x));
    row.push_back(format_number(est.values[i]));
    row.push_back(format_number(est.ci_half_width(i)));
    row.emplace_back(ldplab::to_string(est.flags[i]));
    t.add_row(std::move(row));
  }
  return t;
}

Json rate_summary(const ldplab::RateEstimate& est) {
  std::size_t finite = 0, warnings = 0;
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    if (est.finite(i)) ++finite;
    if (!est.boundary_warning.empty() && est.boundary_warning[i]) ++warnings;
  }
  Json doc = {{"method", ldplab::to_string(est.method)}, {"n", est.n}, {"count", est.count},
              {"cells", est.grid.size()},                 {"finiteCells", finite}};
  if (est.method == ldplab::RateMethod::LegendreDual) {
    doc["boundaryWarnings"] = warnings;
  } else {
    const auto violations = ldplab::convexity_report(est);
    doc["convexityViolations"] = violations.size();
  }
  if (finite > 0) {
    const auto support = ldplab::support_estimate(est, INFINITY);
    doc["supportVertices"] = points_json(support.hull->vertices());
  }
  return doc;
}

ldplab::RateEstimate compute_rate(const Config& cfg, const ldplab::MeasureSpec& mu, const ldplab::RateGrid& grid,
                                  std::size_t n) {
  const double words = ldplab::word_count(ldplab::detail::weights_of(mu), n);
  std::string method = cfg.method;
  if (method == "auto") method = words <= cfg.budget ? "exact" : "mc";
  if (method == "exact") return ldplab::exact_rate(mu, n, grid, cfg.budget, cfg.workers);
  if (method == "mc") return ldplab::mc_rate(mu, n, cfg.samples, grid, cfg.seed, cfg.workers);
  if (method == "legendre") {
    const auto duals = ldplab::dual_box(grid.coords(), ldplab::dual_ladder());
    const auto lap = ldplab::laplace_transform(mu, n, grid.mode(), duals, cfg.budget, cfg.samples, cfg.seed, cfg.workers);
    return ldplab::legendre_conjugate(lap, grid);
  }
  throw bad("--method must be auto, exact, mc or legendre");
}

Json spectrum_json(const ldplab::SpectrumApproximation& sp) {
  Json levels = Json::array();
  for (const auto& lv : sp.levels) {
    levels.push_back({{"depth", lv.depth},
                      {"products", lv.cloud.size()},
                      {"vertices", points_json(lv.hull.vertices())},
                      {"hausdorffToPrevious", lv.hausdorff_to_previous ? Json(*lv.hausdorff_to_previous) : Json(nullptr)},
                      {"maxTopGap", lv.max_top_gap}});
  }
  return {{"mode", sp.mode == ldplab::GridMode::TopCoordinate ? "top" : "chamber"}, {"levels", std::move(levels)}};
}

ldplab::io::CsvTable spectrum_table(const ldplab::SpectrumApproximation& sp) {
  using ldplab::io::format_number;
  const std::size_t coords = sp.deepest().hull.ambient_dim();
  std::vector<std::string> header{"depth", "vertex"};
  for (auto& h : coordinate_header(coords)) header.push_back(h);
  header.emplace_back("hausdorffToPrevious");
  ldplab::io::CsvTable t(header);
  for (const auto& lv : sp.levels) {
    const auto verts = lv.hull.vertices();
    for (std::size_t v = 0; v < verts.size(); ++v) {
      std::vector<std::string> row{std::to_string(lv.depth), std::to_string(v)};
      for (double x : verts[v]) row.push_back(format_number(x));
      row.push_back(lv.hausdorff_to_previous ? format_number(*lv.hausdorff_to_previous) : "");
      t.add_row(std::move(row));
    }
  }
  return t;
}

Json jsr_json(const ldplab::JsrBounds& b) {
  return {{"depth", b.depth},           {"lower", number(b.lower)},         {"upper", number(b.upper)},
          {"subLower", number(b.sub_lower)}, {"subUpper", number(b.sub_upper)}, {"visited", b.visited},
          {"pruned", b.pruned},         {"budgetHit", b.budget_hit}};
}

ldplab::io::CsvTable jsr_table(const ldplab::JsrBounds& b) {
  ldplab::io::CsvTable t({"depth", "lower", "upper"});
  for (std::size_t k = 0; k < b.lower_by_depth.size(); ++k) {
    t.add_row({std::to_string(k + 1), ldplab::io::format_number(b.lower_by_depth[k]),
               ldplab::io::format_number(b.upper_by_depth[k])});
  }
  return t;
}

Json certificate_json(const ldplab::ProximalityCertificate& c) {
  return {{"verdict", ldplab::to_string(c.verdict)},
          {"attractor", std::vector<double>(c.attractor.representative().data(),
                                            c.attractor.representative().data() + c.attractor.dim())},
          {"repellerNormal", std::vector<double>(c.repeller.unit_normal().data(),
                                                 c.repeller.unit_normal().data() + c.repeller.dim())},
          {"gap", c.gap},
          {"topModulus", number(c.top_modulus)},
          {"lipschitzOnBasin", number(c.lipschitz_on_basin)},
          {"maxImageDistance", number(c.max_image_distance)},
          {"samples", c.sample_count}};
}

// commands -------------------------------------------------------------------

int cmd_simulate(const Config& cfg, Output& out) {
  const auto mu = require_measure(cfg);
  const auto paired = ldplab::paired_samples(mu, cfg.n, cfg.samples, cfg.seed, {cfg.workers, true, true});
  const std::size_t d = mu.dim();
  auto header = std::vector<std::string>{"sample"};
  for (std::size_t k = 0; k < d; ++k) header.push_back("kappa_" + std::to_string(k + 1));
  for (std::size_t k = 0; k < d; ++k) header.push_back("lambda_" + std::to_string(k + 1));
  ldplab::io::CsvTable t(header);
  std::vector<std::vector<double>> columns(d, std::vector<double>(cfg.samples));
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    std::vector<std::string> row{std::to_string(s)};
    for (std::size_t k = 0; k < d; ++k) {
      row.push_back(ldplab::io::format_number(paired.kappa[s][k]));
      columns[k][s] = paired.kappa[s][k];
    }
    for (std::size_t k = 0; k < d; ++k) row.push_back(ldplab::io::format_number(paired.lambda[s][k]));
    t.add_row(std::move(row));
  }
  Json lyap = Json::array(), half = Json::array();
  for (const auto& col : columns) {
    const auto m = ldplab::stats::batch_means(col);
    lyap.push_back(m.mean);
    half.push_back(number(m.half_width));
  }
  Json doc = report_head(cfg);
  doc["lyapunovEstimate"] = lyap;
  doc["halfWidth95"] = half;
  out.csv("samples.csv", t);
  out.json("simulate.json", doc);
  return 0;
}

int cmd_rate(const Config& cfg, Output& out) {
  const auto mu = require_measure(cfg);
  const auto grid = make_grid(cfg, mu.dim());
  const auto est = compute_rate(cfg, mu, grid, cfg.n);
  Json doc = report_head(cfg);
  doc["rate"] = rate_summary(est);
  out.csv("rate.csv", rate_table(est));
  out.json("rate.json", doc);
  return 0;
}

int cmd_spectrum(const Config& cfg, Output& out) {
  const auto mu = require_measure(cfg);
  const auto sp = ldplab::iterate_spectrum(mu.support(), cfg.nmax, cfg.budget, parse_mode(cfg.mode));
  Json doc = report_head(cfg);
  doc["spectrum"] = spectrum_json(sp);
  out.csv("spectrum.csv", spectrum_table(sp));
  out.json("spectrum.json", doc);
  return 0;
}

int cmd_jsr(const Config& cfg, Output& out) {
  const auto mu = require_measure(cfg);
  const auto b = ldplab::joint_bounds(mu.support(), cfg.depth);
  Json doc = report_head(cfg);
  doc["bounds"] = jsr_json(b);
  out.csv("jsr.csv", jsr_table(b));
  out.json("jsr.json", doc);
  return 0;
}

int cmd_certify(const Config& cfg, Output& out) {
  const auto mu = require_measure(cfg);
  const auto theta = parse_list(cfg.theta);
  const auto family = mu.support();
  const auto sch = ldplab::is_schottky(family, theta, cfg.r, cfg.eps, cfg.samples, cfg.seed);
  Json members = Json::array();
  for (std::size_t j = 0; j < sch.members.size(); ++j) {
    Json per = Json::array();
    for (const auto& [i, c] : sch.members[j].per_index) {
      Json entry = certificate_json(c);
      entry["exteriorPower"] = i;
      per.push_back(std::move(entry));
    }
    members.push_back({{"label", mu.atom(j).label}, {"allCertified", sch.members[j].all_certified}, {"powers", per}});
  }
  const auto narrow = ldplab::narrowness(family, theta);
  Json doc = report_head(cfg);
  doc["schottky"] = {{"verdict", sch.verdict}, {"minCrossGap", sch.min_cross_gap}, {"required", 6.0 * cfg.r}};
  doc["narrowness"] = {{"attractorDiameter", narrow.attractor_diameter},
                       {"maxRepellerHausdorff", narrow.max_repeller_hausdorff},
                       {"a", narrow.a}};
  doc["members"] = members;
  out.json("certify.json", doc);
  return 0;
}

int cmd_example_boundary(const Config& cfg, Output& out) {
  const auto mu = ldplab::benchmarks::boundary_example(cfg.K);
  const double endpoint = 4.0 - 1.0 / cfg.K;
  const auto sp = ldplab::iterate_spectrum(mu.support(), cfg.nmax, cfg.budget);
  const auto jsr = ldplab::jsr_bounds(mu.support(), 1);
  const auto grid = make_grid(cfg, mu.dim(), "0:4:0.05");
  const auto est = compute_rate(cfg, mu, grid, cfg.n);
  const double cap = -std::log(mu.min_positive_weight());

  Json trend = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i)[0];
    if (x >= endpoint - 0.5 - 1e-12 && x <= endpoint + 0.25 + 1e-12) {
      trend.push_back({{"kappa_1", x}, {"value", number(est.values[i])}, {"flag", ldplab::to_string(est.flags[i])}});
    }
  }
  Json interior = nullptr;
  if (const auto cell = grid.locate(std::vector<double>{3.0})) {
    interior = {{"kappa_1", grid.point(*cell)[0]}, {"value", number(est.values[*cell])},
                {"flag", ldplab::to_string(est.flags[*cell])}, {"cap", cap}, {"belowCap", est.values[*cell] <= cap + 1e-9}};
  }
  Json doc = report_head(cfg);
  doc["K"] = cfg.K;
  doc["rightEndpoint"] = endpoint;
  doc["jsrDepth1"] = {{"lower", jsr.lower}, {"upper", jsr.upper}};
  doc["spectrum"] = spectrum_json(sp);
  doc["rate"] = rate_summary(est);
  doc["rateCap"] = cap;
  doc["rightEndpointTrend"] = trend;
  doc["interiorPoint"] = interior;
  out.measure("measure.json", mu);
  out.csv("rate.csv", rate_table(est));
  out.csv("spectrum.csv", spectrum_table(sp));
  out.json("example_boundary.json", doc);
  return 0;
}

int cmd_suite(const Config& cfg, Output& out) {
  if (!cfg.seed_given) throw bad("suite mode requires an explicit --seed");
  std::vector<int> ids;
  if (cfg.only.empty()) {
    for (int i = 1; i <= static_cast<int>(ldplab::suite::criteria().size()); ++i) ids.push_back(i);
  } else {
    ids = parse_list(cfg.only);
  }
  const ldplab::suite::SuiteOptions opt{cfg.seed, cfg.workers};
  Json results = Json::array();
  bool all = true;
  for (int id : ids) {
    const auto r = ldplab::suite::run(id, opt);
    all = all && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << " -- " << r.detail << "\n"
              << std::flush;
    Json metrics = Json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
    results.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"metrics", metrics}});
  }
  Json doc = report_head(cfg);
  doc["pass"] = all;
  doc["criteria"] = results;
  out.json("suite.json", doc);
  return all ? 0 : 2;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void print_error(const std::string& kind, const std::string& message) {
  Json err = {{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large deviations of random matrix products: experiments and reports"};
  app.set_version_flag("--version", std::string(ldplab::version()));
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed (default 0; required by suite)");
    sub->add_option("--workers", cfg.workers, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "Output directory (LDPLAB_OUT overrides)");
  };
  auto measure = [&](CLI::App* sub) { sub->add_option("--measure", cfg.measure, "Measure JSON file")->required(); };
  auto positive = [](CLI::App* sub, const char* name, auto& target, const char* help) {
    sub->add_option(name, target, help)->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "Sample kappa(Y_n)/n and lambda(Y_n)/n");
  measure(simulate);
  positive(simulate, "--n", cfg.n, "Walk length");
  positive(simulate, "--samples", cfg.samples, "Number of walks");

  auto* rate = app.add_subcommand("rate", "Rate function on a grid");
  measure(rate);
  positive(rate, "--n", cfg.n, "Walk length");
  positive(rate, "--samples", cfg.samples, "Monte Carlo samples");
  rate->add_option("--grid", cfg.grid, "MIN:MAX:PITCH")->required();
  rate->add_option("--mode", cfg.mode, "top or chamber")->check(CLI::IsMember({"top", "chamber"}));
  rate->add_option("--method", cfg.method, "auto, exact, mc or legendre")
      ->check(CLI::IsMember({"auto", "exact", "mc", "legendre"}));
  positive(rate, "--budget", cfg.budget, "Largest number of words to enumerate");

  auto* spectrum = app.add_subcommand("spectrum", "Scaled Cartan clouds (1/n) kappa(S^n) and their hulls");
  measure(spectrum);
  positive(spectrum, "--nmax", cfg.nmax, "Deepest word length");
  spectrum->add_option("--mode", cfg.mode, "top or chamber")->check(CLI::IsMember({"top", "chamber"}));
  positive(spectrum, "--budget", cfg.budget, "Largest number of products");

  auto* jsr = app.add_subcommand("jsr", "Joint spectral radius and subradius brackets");
  measure(jsr);
  positive(jsr, "--depth", cfg.depth, "Search depth");

  auto* certify = app.add_subcommand("certify", "(r, eps)-proximality and Schottky certificates");
  measure(certify);
  certify->add_option("--r", cfg.r, "Gap radius r");
  certify->add_option("--eps", cfg.eps, "Contraction epsilon");
  certify->add_option("--theta", cfg.theta, "Exterior powers, e.g. 1,2");
  positive(certify, "--samples", cfg.samples, "Basin samples per certificate");

  auto* boundary = app.add_subcommand("example-boundary", "Truncated boundary example mu_K: spectrum and rate");
  positive(boundary, "--K", cfg.K, "Number of diagonal atoms");
  positive(boundary, "--n", cfg.n, "Walk length");
  positive(boundary, "--samples", cfg.samples, "Monte Carlo samples when enumeration is too large");
  positive(boundary, "--nmax", cfg.nmax, "Deepest spectrum level");
  boundary->add_option("--grid", cfg.grid, "MIN:MAX:PITCH (default 0:4:0.05)");
  boundary->add_option("--method", cfg.method, "auto, exact, mc or legendre")
      ->check(CLI::IsMember({"auto", "exact", "mc", "legendre"}));
  positive(boundary, "--budget", cfg.budget, "Largest number of words to enumerate");

  auto* suite = app.add_subcommand("suite", "Acceptance criteria 1-10");
  suite->add_option("--only", cfg.only, "Comma-separated criterion ids");

  for (auto* sub : {simulate, rate, spectrum, jsr, certify, boundary, suite}) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("UsageError", e.what());
    return 1;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.seed_given = app.get_subcommands().front()->count("--seed") > 0;
  if (const char* env = std::getenv("LDPLAB_OUT"); env && *env) cfg.out = env;

  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Output out(cfg.out);
    int code = 0;
    if (cfg.command == "simulate") code = cmd_simulate(cfg, out);
    else if (cfg.command == "rate") code = cmd_rate(cfg, out);
    else if (cfg.command == "spectrum") code = cmd_spectrum(cfg, out);
    else if (cfg.command == "jsr") code = cmd_jsr(cfg, out);
    else if (cfg.command == "certify") code = cmd_certify(cfg, out);
    else if (cfg.command == "example-boundary") code = cmd_example_boundary(cfg, out);
    else if (cfg.command == "suite") code = cmd_suite(cfg, out);
    out.manifest(cfg, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), started);
    return code;
  } catch (const ldplab::Error& e) {
    print_error(std::string(ldplab::to_string(e.kind())), e.what());
  } catch (const fs::filesystem_error& e) {
    print_error("IoError", e.what());
  } catch (const std::exception& e) {
    print_error("InternalError", e.what());
  }
  return 1;
}
