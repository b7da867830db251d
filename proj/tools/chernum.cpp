// chernum: command-line driver for the Chern-number pipeline.
//
//   chernum solve FILE            track a square system, report clusters
//   chernum equivalence FILE      one equivalence D for --degrees
//   chernum chern FILE            all Chern degrees of Z
//   chernum corpus NAME           write a bundled example in the system file format

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "chernum/chern.hpp"
#include "chernum/corpus.hpp"
#include "chernum/errors.hpp"

using json = nlohmann::ordered_json;
using namespace chernum;

namespace {

constexpr int kSchemaVersion = 1;

struct Options {
  std::string input;
  std::uint64_t seed = 1;
  std::string degrees;
  std::string schedule;
  std::string output = "json";
  int threads = 0;
  PipelineConfig cfg;
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos == 0 || pos != item.size()) throw InputError("bad degree '" + item + "' in '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("empty degree list");
  return out;
}

// "4,4,4,4,4;4,4,4,4,5"
DegreeSchedule parse_schedule(const std::string& text) {
  DegreeSchedule s;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) s.push_back(parse_degrees(row));
  if (s.empty()) throw InputError("empty schedule");
  return s;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json point_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(complex_json(p[i]));
  return a;
}

json config_json(const Options& o) {
  const auto& h = o.cfg.homotopy;
  const auto& c = o.cfg.classify;
  json j;
  j["homotopy"] = {{"t_min", h.t_min},
                   {"step_initial", h.step_initial},
                   {"step_min", h.step_min},
                   {"step_max", h.step_max},
                   {"track_tol", h.track_tol},
                   {"corrector_max_iters", h.corrector_max_iters},
                   {"newton_tol", h.newton_tol},
                   {"newton_max_iters", h.newton_max_iters},
                   {"max_steps_per_path", h.max_steps_per_path},
                   {"max_retries", h.max_retries},
                   {"truncation_zone", h.truncation_zone},
                   {"patch_threshold", h.patch_threshold}};
  j["classify"] = {{"cluster_tol", c.cluster_tol},
                   {"residual_tol", c.residual_tol},
                   {"rank_tol", c.rank_tol},
                   {"macaulay_max_order", c.macaulay_max_order},
                   {"macaulay_max_columns", c.macaulay_max_columns},
                   {"junk_band_factor", c.junk_band_factor},
                   {"polish_iters", c.polish_iters}};
  j["allow_low_degrees"] = o.cfg.allow_low_degrees;
  j["run_retries"] = o.cfg.run_retries;
  return j;
}

json status_histogram(const std::vector<PathResult>& paths) {
  json h = json::object();
  for (auto s : {PathStatus::converged, PathStatus::truncated_at_tmin, PathStatus::step_failure,
                 PathStatus::diverged_in_patch}) {
    int n = 0;
    for (const auto& p : paths) n += p.status == s;
    h[std::string(to_string(s))] = n;
  }
  return h;
}

json clusters_json(const std::vector<EndpointCluster>& clusters) {
  json a = json::array();
  for (const auto& c : clusters) {
    json j;
    j["classification"] = std::string(to_string(c.classification));
    j["multiplicity"] = c.multiplicity ? json(*c.multiplicity) : json(nullptr);
    j["paths"] = c.path_indices;
    j["nullity_sequence"] = c.nullity_sequence;
    j["square_residual"] = c.square_residual;
    j["ideal_residual"] = c.ideal_residual;
    j["jacobian_rank_ratio"] = c.jacobian_rank_ratio;
    j["representative"] = point_json(c.representative);
    a.push_back(std::move(j));
  }
  return a;
}

json relation_json(const Relation& r) {
  return {{"degrees", r.degrees_used}, {"coeffs", r.coeffs}, {"rhs", r.rhs}};
}

json run_json(const EquivalenceRun& run) {
  json j;
  j["degrees"] = run.solve.degrees;
  j["gamma"] = complex_json(run.solve.gamma);
  j["bezout"] = run.bezout;
  j["attempts"] = run.attempts;
  j["path_status"] = status_histogram(run.solve.paths);
  j["isolated_points"] = run.isolated_points;
  j["residual_multiplicity"] = run.residual_multiplicity;
  j["equivalence"] = run.equivalence;
  j["clusters"] = clusters_json(run.clusters);
  return j;
}

json timings_json(const StageTimings& t) { return {{"track", t.track}, {"cluster", t.cluster}, {"classify", t.classify}}; }

std::string format_degrees(const std::vector<int>& d) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << ")";
  return os.str();
}

void print_run_table(std::ostream& os, const std::vector<const EquivalenceRun*>& runs) {
  os << std::left << std::setw(24) << "degrees" << " | " << std::setw(19) << "non-singular points"
     << " | " << "singular points\n";
  os << std::string(24, '-') << "-+-" << std::string(19, '-') << "-+-" << std::string(15, '-') << "\n";
  for (const auto* r : runs)
    os << std::left << std::setw(24) << format_degrees(r->solve.degrees) << " | " << std::setw(19)
       << r->isolated_points << " | " << r->equivalence << "\n";
}

struct Loaded {
  PolySystem sys;
  std::string digest;
};

Loaded load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return {parse_system(text), sha256_hex(text)};
}

json base_report(const std::string& command, const Options& o, const Loaded& in) {
  json r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = command;
  json input;
  input["path"] = o.input;
  input["sha256"] = in.digest;
  input["num_vars"] = in.sys.num_vars();
  input["num_polys"] = in.sys.size();
  json hist = json::object();
  for (const auto& [d, c] : corpus::degree_histogram(in.sys)) hist[std::to_string(d)] = c;
  input["degree_histogram"] = hist;
  r["input"] = input;
  r["seed"] = o.seed;
  json args = json::object();
  if (!o.degrees.empty()) args["degrees"] = o.degrees;
  if (!o.schedule.empty()) args["schedule"] = o.schedule;
  r["arguments"] = args;
  r["config"] = config_json(o);
  return r;
}

int cmd_solve(const Options& o, json& report, std::ostream& table) {
  const Loaded in = load(o.input);
  report = base_report("solve", o, in);
  const PolySystem& sys = in.sys;
  if (static_cast<int>(sys.size()) != sys.num_vars() - 1)
    throw InputError("solve needs a square system: " + std::to_string(sys.size()) + " forms in P^" +
                     std::to_string(sys.num_vars() - 1));
  o.cfg.validate();
  Rng rng(o.seed);
  const AffinePatch patch = AffinePatch::random(sys.num_vars(), rng);
  StageTimings t;
  auto t0 = std::chrono::steady_clock::now();
  const SquareSolve sol = solve_square_system(sys, o.cfg.homotopy, patch, rng, o.cfg.solve);
  t.track = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t0 = std::chrono::steady_clock::now();
  auto clusters = cluster_endpoints(sol.paths, o.cfg.classify.cluster_tol, &sys, o.cfg.classify.polish_iters);
  t.cluster = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t0 = std::chrono::steady_clock::now();
  clusters = classify_clusters(std::move(clusters), sys, sys, o.cfg.classify, o.cfg.solve);
  t.classify = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  int isolated = 0, unresolved_paths = 0, unresolved_clusters = 0;
  for (const auto& c : clusters) {
    isolated += c.classification == Classification::isolated_S;
    unresolved_clusters += c.classification == Classification::unresolved;
  }
  json paths = json::array();
  for (const auto& p : sol.paths) {
    unresolved_paths += !p.resolved();
    paths.push_back({{"index", p.path_index},
                     {"status", std::string(to_string(p.status))},
                     {"final_t", p.final_t},
                     {"residual", p.newton_residual},
                     {"jacobian_rank_ratio", p.jacobian_rank_ratio},
                     {"steps", p.steps},
                     {"retries", p.retries},
                     {"endpoint", point_json(p.endpoint)}});
  }
  json result;
  result["degrees"] = sol.degrees;
  result["gamma"] = complex_json(sol.gamma);
  result["bezout"] = bezout_number(sol.degrees);
  result["path_status"] = status_histogram(sol.paths);
  result["isolated_points"] = isolated;
  result["clusters"] = clusters_json(clusters);
  result["paths"] = paths;
  report["result"] = result;
  report["timings"] = timings_json(t);

  table << "paths: " << sol.paths.size() << " (unresolved " << unresolved_paths << ")\n"
        << "clusters: " << clusters.size() << "\n"
        << "isolated points: " << isolated << "\n";
  for (const auto& c : clusters)
    if (c.classification == Classification::isolated_S)
      table << "  multiplicity " << c.multiplicity.value_or(0) << " at " << point_json(c.representative).dump() << "\n";
  if (unresolved_paths > 0) throw NumericalFailure(std::to_string(unresolved_paths) + " path(s) did not resolve");
  if (unresolved_clusters > 0)
    throw NumericalFailure(std::to_string(unresolved_clusters) + " cluster(s) could not be classified");
  return 0;
}

int cmd_equivalence(const Options& o, json& report, std::ostream& table) {
  const Loaded in = load(o.input);
  report = base_report("equivalence", o, in);
  if (o.degrees.empty()) throw InputError("--degrees is required");
  const std::vector<int> degrees = parse_degrees(o.degrees);
  check_degree_floor(in.sys, degrees, o.cfg);
  Rng rng(o.seed);
  const PolySystem square = random_square_system(in.sys, degrees, rng);
  const EquivalenceRun run = equivalence_of_z(in.sys, square, o.cfg, rng);
  json result = run_json(run);
  report["result"] = result;
  report["timings"] = timings_json(run.timings);
  print_run_table(table, {&run});
  return 0;
}

int cmd_chern(const Options& o, json& report, std::ostream& table) {
  const Loaded in = load(o.input);
  report = base_report("chern", o, in);
  std::optional<DegreeSchedule> schedule;
  if (!o.schedule.empty()) schedule = parse_schedule(o.schedule);
  Rng rng(o.seed);
  const ChernResult res = chern_numbers(in.sys, o.cfg, rng, schedule);
  json result;
  result["dimension"] = res.dimension;
  result["chern_degrees"] = res.chern_degrees;
  result["det_m"] = res.det_m;
  result["residual_of_solve"] = res.residual_of_solve;
  result["genus"] = res.genus ? json(*res.genus) : json(nullptr);
  json rels = json::array();
  for (const auto& r : res.relations) rels.push_back(relation_json(r));
  result["relations"] = rels;
  json runs = json::array();
  json timings = json::array();
  std::vector<const EquivalenceRun*> run_ptrs;
  for (const auto& r : res.runs) {
    runs.push_back(run_json(r));
    timings.push_back(timings_json(r.timings));
    run_ptrs.push_back(&r);
  }
  result["runs"] = runs;
  report["result"] = result;
  report["timings"] = {{"runs", timings}};

  print_run_table(table, run_ptrs);
  table << "\ndimension: " << res.dimension << "\n";
  for (std::size_t i = 0; i < res.relations.size(); ++i) {
    const auto& r = res.relations[i];
    table << "relation " << format_degrees(r.degrees_used) << ":";
    // Highest Chern class first: a_n deg c_n + ... + a_0 deg Z.
    for (std::size_t k = r.coeffs.size(); k-- > 0;) {
      const bool first = k + 1 == r.coeffs.size();
      const std::int64_t a = r.coeffs[k];
      table << " " << (first ? (a < 0 ? "-" : "") : (a < 0 ? "- " : "+ ")) << std::abs(a) << "*"
            << (k == 0 ? std::string("deg Z") : "deg c_" + std::to_string(k));
    }
    table << " = " << r.rhs << "\n";
  }
  table << "deg Z = " << res.chern_degrees[0] << "\n";
  for (std::size_t i = 1; i < res.chern_degrees.size(); ++i)
    table << "deg c_" << i << " = " << res.chern_degrees[i] << "\n";
  if (res.genus) table << "genus = " << *res.genus << "\n";
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return 2;
  if (dynamic_cast<const AssumptionViolation*>(&e)) return 4;
  return 3;
}

std::string error_kind(int code) {
  switch (code) {
    case 2:
      return "input_error";
    case 4:
      return "assumption_violation";
    default:
      return "numerical_failure";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chern numbers of smooth projective varieties by homotopy continuation"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Seed for every random choice")->capture_default_str();
    sub->add_option("--tol-track", o.cfg.homotopy.track_tol, "Corrector acceptance tolerance")->capture_default_str();
    sub->add_option("--tol-newton", o.cfg.homotopy.newton_tol, "Endpoint residual tolerance")->capture_default_str();
    sub->add_option("--tol-cluster", o.cfg.classify.cluster_tol, "Projective clustering distance")
        ->capture_default_str();
    sub->add_option("--tol-rank", o.cfg.classify.rank_tol, "Singular-value ratio rank cutoff")->capture_default_str();
    sub->add_option("--macaulay-max-order", o.cfg.classify.macaulay_max_order, "Largest Macaulay order tried")
        ->capture_default_str();
    sub->add_flag("--allow-low-degrees", o.cfg.allow_low_degrees,
                  "Accept degrees below the largest generator degree (you assert the forms still cut out Z plus "
                  "finitely many points)");
    sub->add_option("--threads", o.threads, "Worker threads (0: all)")->capture_default_str();
    sub->add_option("--output", o.output, "Report format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "Track all paths of a square system and classify the endpoints");
  solve->add_option("file", o.input, "Square system file")->required();
  add_common(solve);

  auto* equiv = app.add_subcommand("equivalence", "Equivalence of Z for one degree vector");
  equiv->add_option("file", o.input, "Ideal generator file")->required();
  equiv->add_option("--degrees", o.degrees, "Comma-separated degrees, e.g. 2,2,3")->required();
  add_common(equiv);

  auto* chern = app.add_subcommand("chern", "Chern degrees of Z");
  chern->add_option("file", o.input, "Ideal generator file")->required();
  chern->add_option("--schedule", o.schedule, "Degree vectors separated by ';', e.g. '2,2,2;2,2,3'");
  add_common(chern);

  std::string example;
  std::optional<std::uint64_t> example_seed;
  std::string out_path;
  auto* corp = app.add_subcommand("corpus", "Write a bundled example ideal");
  corp->add_option("name", example, "Example name")->required();
  corp->add_option("--seed", example_seed, "Builder seed (default: the example's own)");
  corp->add_option("-o,--out", out_path, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*corp) {
    try {
      const auto& spec = corpus::spec(example);
      const PolySystem sys = corpus::build(example, example_seed.value_or(spec.seed));
      const std::string text = serialize_system(sys);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw InputError("cannot write '" + out_path + "'");
        f << text;
      }
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_code_for(e);
    }
  }

  o.cfg.solve.threads = o.threads;
  json report;
  std::ostringstream table;
  int code = 0;
  try {
    if (*solve) code = cmd_solve(o, report, table);
    if (*equiv) code = cmd_equivalence(o, report, table);
    if (*chern) code = cmd_chern(o, report, table);
  } catch (const std::exception& e) {
    code = exit_code_for(e);
    std::cerr << "error (" << error_kind(code) << "): " << e.what() << "\n";
    if (report.is_null()) report = {{"schema_version", kSchemaVersion}};
    report.erase("result");
    report["error"] = {{"kind", error_kind(code)}, {"message", e.what()}};
  }
  report["status"] = code == 0 ? "ok" : "error";
  report["exit_code"] = code;
  report["execution"] = {{"threads", o.threads}};
  if (!report.contains("timings")) report["timings"] = json::object();

  if (o.output == "table")
    std::cout << table.str();
  else
    std::cout << report.dump(2) << "\n";
  return code;
}
