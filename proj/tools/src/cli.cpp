#include "plstat/cli/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "plstat/cli/io.hpp"
#include "plstat/errors.hpp"
#include "plstat/rigidity.hpp"
#include "plstat/sampling_clt.hpp"

namespace plstat::cli {

namespace fs = std::filesystem;

namespace {

struct Output {
  std::string dir;
  std::string format = "both";
  int workers = 0;
};

struct SeedFlags {
  std::uint64_t seed = 0;
  bool from_entropy = false;
  CLI::Option* option = nullptr;

  bool given() const { return option && option->count() > 0; }
};

void add_output_flags(CLI::App* cmd, Output& o) {
  cmd->add_option("--output-dir", o.dir, "Directory for config.resolved.json, report.json, samples.csv");
  cmd->add_option("--format", o.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  cmd->add_option("--workers", o.workers, "Worker threads (never changes results)")->check(CLI::PositiveNumber);
}

void add_seed_flags(CLI::App* cmd, SeedFlags& s) {
  s.option = cmd->add_option("--seed", s.seed, "Master seed");
  cmd->add_flag("--seed-from-entropy", s.from_entropy, "Draw the master seed from std::random_device");
}

int resolve_workers(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("PLSTAT_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (const std::exception&) {
    }
    throw ConfigError("PLSTAT_WORKERS: expected a positive integer");
  }
  return 1;
}

std::string resolve_output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PLSTAT_OUTPUT_DIR")) return env;
  return {};
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Applies --seed / --seed-from-entropy to a config document, insisting on one
// explicit source of randomness.
void apply_seed(json& doc, const SeedFlags& s) {
  if (s.given() && s.from_entropy) throw ConfigError("--seed and --seed-from-entropy are mutually exclusive");
  if (s.given()) {
    doc["master_seed"] = s.seed;
  } else if (s.from_entropy) {
    doc["master_seed"] = entropy_seed();
  } else if (!doc.contains("master_seed")) {
    throw ConfigError("master_seed: pass --seed N (or --seed-from-entropy)");
  }
}

void emit(const Output& o, std::ostream& out, const json& config, const json& report,
          const std::vector<std::pair<std::string, std::string>>& csv_files) {
  const std::string report_text = canonical_json(report);
  out << report_text;
  const std::string dir = resolve_output_dir(o.dir);
  if (dir.empty()) return;
  fs::create_directories(dir);
  if (!config.is_null()) write_text(fs::path(dir) / "config.resolved.json", canonical_json(config));
  if (o.format != "csv") write_text(fs::path(dir) / "report.json", report_text);
  if (o.format != "json") {
    for (const auto& [name, text] : csv_files) write_text(fs::path(dir) / name, text);
  }
}

int exit_for(const json& report) { return report.value("pass", false) ? kSuccess : kThresholdFailure; }

std::string profile_csv(const RigidityProfile& profile, const Spectrum& s, const ClassicalLocations& locs) {
  std::string out = "j,lambda,location,deviation,weighted\n";
  char buf[160];
  for (int j = 0; j < profile.n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", j + 1, s.ordered[i], locs.values[i],
                  profile.deviations[i], profile.weighted[i]);
    out += buf;
  }
  return out;
}

int run_rigidity_scan(const RunSpec& spec, const Output& o, std::ostream& out) {
  const ExperimentConfig& base = spec.experiment;
  const int workers = resolve_workers(o.workers);
  const double max_exponent =
      spec.max_growth_exponent >= 0.0 ? spec.max_growth_exponent : (base.ensemble == EnsembleKind::Wigner ? 0.1 : 0.15);
  json sizes = json::array();
  json medians = json::array();
  json per_size = json::array();
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::pair<std::string, std::string>> csv;
  bool edges_hold = true;
  for (int n : spec.scan_sizes) {
    ExperimentConfig c = base;
    c.wigner.n = n;
    c.sample_cov.n = n;
    const ExperimentResult r = run_experiment(c, workers);
    const double med = r.report.details.at("median_max_weighted");
    xs.push_back(n);
    ys.push_back(med);
    sizes.push_back(n);
    medians.push_back(med);
    json entry = report_to_json(r.report, r.samples.size());
    entry["n"] = n;
    per_size.push_back(entry);
    if (base.ensemble == EnsembleKind::SampleCov) {
      edges_hold = edges_hold && r.report.details.at("hard_edge_violations") == 0.0 &&
                   r.report.details.at("corrected_soft_edge_violations") == 0.0;
    }
    csv.emplace_back("samples_n" + std::to_string(n) + ".csv", samples_csv(r.samples.samples));
  }
  const double exponent = growth_exponent(xs, ys);
  json report;
  report["comparison"] = "rigidity_scan";
  report["sizes"] = sizes;
  report["medians"] = medians;
  report["growth_exponent"] = exponent;
  report["max_growth_exponent"] = max_exponent;
  report["edge_bounds_hold"] = edges_hold;
  report["per_size"] = per_size;
  report["pass"] = exponent <= max_exponent && edges_hold && !contains_nan(report);
  emit(o, out, config_to_json(spec), report, csv);
  return exit_for(report);
}

// Runs a fully resolved configuration and writes every artefact.
int execute(const RunSpec& spec, const Output& o, std::ostream& out) {
  const ExperimentConfig& c = spec.experiment;
  if (c.comparison == Comparison::Rigidity && !spec.scan_sizes.empty()) return run_rigidity_scan(spec, o, out);

  const ExperimentResult result = run_experiment(c, resolve_workers(o.workers));
  json report = report_to_json(result.report, result.samples.size());
  std::vector<std::pair<std::string, std::string>> csv{{"samples.csv", samples_csv(result.samples.samples)}};
  if (result.reference) csv.emplace_back("reference.csv", samples_csv(result.reference->samples));
  if (c.comparison == Comparison::SamplingClt) report["variance_exact"] = result.report.variance_theory;
  if (c.comparison == Comparison::Rigidity) {
    // Per-index profile of the first replication.
    const Spectrum s = replicate_spectrum(c, 0);
    const ClassicalLocations locs = classical_locations(limit_law_of(c), c.n());
    const RigidityProfile p = c.ensemble == EnsembleKind::Wigner ? wigner_rigidity(s, locs) : sc_rigidity(s, locs);
    csv.emplace_back("rigidity_profile.csv", profile_csv(p, s, locs));
  }
  emit(o, out, config_to_json(spec), report, csv);
  return exit_for(report);
}

json entry_law(const std::string& law, double m4_or_variance) {
  if (law == "two_point") return {{"law", law}, {"m4", m4_or_variance}};
  return {{"law", law}, {"variance", m4_or_variance}};
}

std::string normalise_ensemble(const std::string& s) {
  if (s == "wigner") return "wigner";
  if (s == "sample_cov" || s == "sc" || s == "sample-cov" || s == "mp") return "sample_cov";
  throw ConfigError("ensemble.kind: expected wigner or sample_cov, got '" + s + "'");
}

struct SimulateFlags {
  std::string config_path;
  std::string comparison;
  std::string ensemble;
  int n = 0;
  std::string f;
  long k = 0;
  std::string k_rule;
  double ratio = 0.0;
  long l = 0;
  int reps = 0;
  int limit_reps = 0;
  std::string entry;
  double m4 = 3.0;
  std::string diag;
  double sigma2 = 1.0;
  std::string symmetry;
  std::string partial_mode;
  double ks_max = 0.0;
  double vr_min = 0.0;
  double vr_max = 0.0;
  int nodes = 0;
  std::string sc_integrand;
  double rigidity_c = 0.0;
  int population = 0;
  std::vector<int> sizes;
  double max_exponent = 0.0;
};

// Registers every experiment flag on `cmd`; returns a function that folds the
// flags that were actually given into a config document.
std::function<void(json&)> add_experiment_flags(CLI::App* cmd, SimulateFlags& s) {
  auto* o_config = cmd->add_option("--config", s.config_path, "JSON config file; flags override its values");
  auto* o_comparison = cmd->add_option("--comparison", s.comparison,
                                       "full_linear, fixed_k, growing_k, fixed_tail, rigidity, sampling_clt");
  auto* o_ensemble = cmd->add_option("--ensemble", s.ensemble, "wigner or sample_cov");
  auto* o_n = cmd->add_option("--n", s.n, "Matrix size");
  auto* o_f = cmd->add_option("--f", s.f, "Test function from the catalog");
  auto* o_k = cmd->add_option("--k", s.k, "Fixed number of removed eigenvalues");
  auto* o_k_rule = cmd->add_option("--k-rule", s.k_rule, "fixed, growing_sqrt, proportional, complement_fixed");
  auto* o_ratio = cmd->add_option("--ratio", s.ratio, "k / n for the proportional rule");
  auto* o_l = cmd->add_option("--l", s.l, "Number of kept eigenvalues for complement_fixed");
  auto* o_reps = cmd->add_option("--reps", s.reps, "Replications");
  auto* o_limit = cmd->add_option("--limit-reps", s.limit_reps, "Draws from the limit law (0: same as --reps)");
  auto* o_entry = cmd->add_option("--entry", s.entry, "Entry law: gaussian, rademacher, uniform, two_point");
  auto* o_m4 = cmd->add_option("--m4", s.m4, "Fourth moment of the two_point entry law");
  auto* o_diag = cmd->add_option("--diag", s.diag, "Wigner diagonal law");
  auto* o_sigma2 = cmd->add_option("--sigma2", s.sigma2, "Wigner diagonal variance");
  auto* o_sym = cmd->add_option("--symmetry", s.symmetry, "real or complex");
  auto* o_mode = cmd->add_option("--partial-mode", s.partial_mode, "unordered_prefix or sampling_complement");
  auto* o_ks = cmd->add_option("--ks-max", s.ks_max, "KS distance threshold");
  auto* o_vmin = cmd->add_option("--variance-ratio-min", s.vr_min, "Lower variance ratio threshold");
  auto* o_vmax = cmd->add_option("--variance-ratio-max", s.vr_max, "Upper variance ratio threshold");
  auto* o_nodes = cmd->add_option("--nodes", s.nodes, "Quadrature nodes for the variance functional");
  auto* o_integrand = cmd->add_option("--sc-m4-integrand", s.sc_integrand, "weighted or unweighted");
  auto* o_c = cmd->add_option("--c", s.rigidity_c, "Exponent constant c of the polylog envelope");
  auto* o_pop = cmd->add_option("--population", s.population, "Population size for sampling_clt");
  auto* o_sizes = cmd->add_option("--sizes", s.sizes, "Matrix sizes for a rigidity growth scan")->delimiter(',');
  auto* o_maxexp = cmd->add_option("--max-exponent", s.max_exponent, "Largest acceptable growth exponent");

  return [=, &s](json& doc) {
    auto given = [](CLI::Option* o) { return o->count() > 0; };
    if (given(o_config)) doc = read_json_file(s.config_path);
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    if (given(o_comparison)) doc["comparison"] = s.comparison;
    json& ens = doc["ensemble"];
    if (ens.is_null()) ens = json::object();
    if (!ens.is_object()) throw ConfigError("ensemble: must be an object");
    if (given(o_ensemble)) ens["kind"] = normalise_ensemble(s.ensemble);
    const std::string kind = ens.value("kind", std::string("wigner"));
    if (given(o_n)) ens["n"] = s.n;
    const char* slot = kind == "sample_cov" ? "entry" : "offdiag";
    if (given(o_entry)) {
      ens[slot] = entry_law(s.entry, s.entry == "two_point" ? s.m4 : 1.0);
    } else if (given(o_m4)) {
      ens[slot] = entry_law("two_point", s.m4);
    }
    if (given(o_diag) || given(o_sigma2)) {
      if (kind == "sample_cov") throw ConfigError("--diag/--sigma2 apply to the wigner ensemble only");
      ens["diag"] = entry_law(given(o_diag) ? s.diag : "gaussian", s.sigma2);
    }
    if (given(o_sym)) ens["symmetry"] = s.symmetry;
    if (ens.empty()) doc.erase("ensemble");
    if (given(o_f)) doc["f"] = s.f;
    if (given(o_k_rule) || given(o_k) || given(o_ratio) || given(o_l)) {
      std::string type = given(o_k_rule) ? s.k_rule
                         : given(o_ratio) ? "proportional"
                         : given(o_l)     ? "complement_fixed"
                                          : "fixed";
      json rule{{"type", type}};
      if (type == "fixed") rule["k"] = s.k;
      if (type == "proportional") rule["ratio"] = s.ratio;
      if (type == "complement_fixed") rule["l"] = s.l;
      doc["k_rule"] = rule;
    }
    if (given(o_reps)) doc["replications"] = s.reps;
    if (given(o_limit)) doc["limit_replications"] = s.limit_reps;
    if (given(o_mode)) doc["partial_mode"] = s.partial_mode;
    if (given(o_ks) || given(o_vmin) || given(o_vmax)) {
      json& t = doc["thresholds"];
      if (t.is_null()) t = json::object();
      if (given(o_ks)) t["ks_max"] = s.ks_max;
      if (given(o_vmin)) t["variance_ratio_min"] = s.vr_min;
      if (given(o_vmax)) t["variance_ratio_max"] = s.vr_max;
    }
    if (given(o_nodes)) doc["quadrature_nodes"] = s.nodes;
    if (given(o_integrand)) doc["sc_m4_integrand"] = s.sc_integrand;
    if (given(o_c)) doc["rigidity_c"] = s.rigidity_c;
    if (given(o_pop)) doc["population"] = s.population;
    if (given(o_sizes)) doc["scan_sizes"] = s.sizes;
    if (given(o_maxexp)) doc["max_growth_exponent"] = s.max_exponent;
  };
}

int cmd_theory(const std::string& law, const std::string& f_name, double m4, double sigma2, int nodes,
               const std::string& integrand, const Output& o, std::ostream& out) {
  const TestFunction* f = nullptr;
  try {
    f = &find_test_function(f_name);
  } catch (const std::invalid_argument&) {
    throw ConfigError("f: unknown test function '" + f_name + "'");
  }
  const std::string kind = normalise_ensemble(law);
  std::vector<std::string> violations;
  if (!(m4 >= 1.0)) violations.push_back("m4: must be at least 1");
  if (!(sigma2 >= 0.0)) violations.push_back("sigma2: must be nonnegative");
  if (nodes < 32) violations.push_back("nodes: must be at least 32");
  if (integrand != "weighted" && integrand != "unweighted") {
    violations.push_back("sc_m4_integrand: expected weighted or unweighted");
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));

  json config{{"law", kind}, {"f", f_name}, {"m4", m4}, {"nodes", nodes}};
  VarianceReport v;
  LimitLaw limit = LimitLaw::semicircle();
  if (kind == "wigner") {
    config["sigma2"] = sigma2;
    v = wigner_variance(*f, m4, sigma2, nodes);
  } else {
    config["sc_m4_integrand"] = integrand;
    limit = LimitLaw::marchenko_pastur();
    v = sc_variance(*f, m4, nodes,
                    integrand == "weighted" ? FourthMomentIntegrand::WeightedByF : FourthMomentIntegrand::Unweighted);
  }
  json report = variance_report_to_json(v);
  report["law"] = kind;
  report["f"] = f->name;
  report["limit_mean"] = expect_f(limit, *f);
  report["limit_variance"] = var_f(limit, *f);
  report["pass"] = v.total >= -1e-10 && !contains_nan(report);
  emit(o, out, config, report, {});
  return exit_for(report);
}

int cmd_exhaustive(int n, int k, const std::string& g_name, const Output& o, std::ostream& out) {
  std::vector<std::string> violations;
  if (n < 2 || n > kMaxExhaustiveN) {
    violations.push_back("n: exhaustive mode needs 2 <= n <= " + std::to_string(kMaxExhaustiveN));
  }
  if (k < 1 || k >= n) violations.push_back("k: must satisfy 1 <= k < n");
  const TestFunction* g = nullptr;
  try {
    g = &find_test_function(g_name);
  } catch (const std::invalid_argument&) {
    violations.push_back("g: unknown test function '" + g_name + "'");
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));

  json rows = json::array();
  std::string csv = "j,r2,r4,r2_scaled,r4_scaled\n";
  double max2 = 0.0;
  double max4 = 0.0;
  char buf[160];
  for (int j = 1; j <= k; ++j) {
    const LemmaB2Residuals r = lemma_b2_residuals(n, k, j, *g);
    const double scale = n - j + 1;
    max2 = std::max(max2, r.r2 * scale);
    max4 = std::max(max4, r.r4 * scale);
    rows.push_back({{"j", j}, {"r2", r.r2}, {"r4", r.r4}, {"r2_scaled", r.r2 * scale}, {"r4_scaled", r.r4 * scale}});
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", j, r.r2, r.r4, r.r2 * scale, r.r4 * scale);
    csv += buf;
  }
  json report{{"comparison", "lemma_b2_exhaustive"},
              {"n", n},
              {"k", k},
              {"g", g->name},
              {"lemma_b2", rows},
              {"max_r2_scaled", max2},
              {"max_r4_scaled", max4}};
  report["pass"] = !contains_nan(report);
  json config{{"n", n}, {"k", k}, {"g", g->name}, {"exhaustive", true}};
  emit(o, out, config, report, {{"lemma_b2.csv", csv}});
  return exit_for(report);
}

int cmd_compare(const std::string& samples, const std::string& against, double normal_variance, bool has_normal,
                double ks_max, const Output& o, std::ostream& out) {
  if (against.empty() == !has_normal) {
    throw ConfigError("compare: pass exactly one of --against FILE or --normal-variance V");
  }
  if (has_normal && !(normal_variance >= 0.0)) throw ConfigError("normal_variance: must be nonnegative");
  const auto a = EmpiricalDistribution::from_samples(read_samples_csv(samples));
  json report{{"comparison", "compare"}, {"size_a", a.size()}, {"mean_a", a.mean}, {"variance_a", a.variance}};
  double ks = 0.0;
  if (has_normal) {
    ks = ks_one_sample(a, [normal_variance](double x) { return normal_cdf(x, normal_variance); });
    report["kind"] = "one_sample";
    report["normal_variance"] = normal_variance;
  } else {
    const auto b = EmpiricalDistribution::from_samples(read_samples_csv(against));
    ks = ks_two_sample(a, b);
    report["kind"] = "two_sample";
    report["size_b"] = b.size();
    report["mean_b"] = b.mean;
    report["variance_b"] = b.variance;
  }
  report["ks_distance"] = ks;
  report["ks_max"] = ks_max;
  report["pass"] = ks <= ks_max && !contains_nan(report);
  emit(o, out, json(), report, {});
  return exit_for(report);
}

int cmd_catalog(const Output& o, std::ostream& out) {
  const LimitLaw sc = LimitLaw::semicircle();
  const LimitLaw mp = LimitLaw::marchenko_pastur();
  json functions = json::array();
  for (const auto& f : catalog()) {
    functions.push_back({{"name", f.name},
                         {"lipschitz_bound", f.lipschitz_bound},
                         {"bounded", f.bounded},
                         {"semicircle", {{"mean", expect_f(sc, f)}, {"variance", var_f(sc, f)}}},
                         {"marchenko_pastur", {{"mean", expect_f(mp, f)}, {"variance", var_f(mp, f)}}}});
  }
  json report{{"functions", functions}, {"pass", true}};
  emit(o, out, json(), report, {});
  return kSuccess;
}

void print_error(std::ostream& err, const std::string& kind, const std::vector<std::string>& messages) {
  json doc{{"error", kind}, {"messages", messages}};
  err << doc.dump() << "\n";
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear and partial linear eigenvalue statistics of random matrices", "plstat"};
  app.require_subcommand(1);

  Output o_theory, o_sim, o_rig, o_samp, o_cmp, o_cat;
  SeedFlags s_theory, s_sim, s_rig, s_samp, s_cmp, s_cat;

  auto* theory = app.add_subcommand("theory", "Evaluate a limiting variance functional");
  std::string law = "wigner";
  std::string theory_f = "x2";
  double m4 = 3.0;
  double sigma2 = 1.0;
  int nodes = kDefaultVarianceNodes;
  std::string integrand = "weighted";
  theory->add_option("--law", law, "wigner or sample_cov");
  theory->add_option("--f", theory_f, "Test function");
  theory->add_option("--m4", m4, "Off-diagonal fourth moment");
  theory->add_option("--sigma2", sigma2, "Diagonal variance (wigner)");
  theory->add_option("--nodes", nodes, "Quadrature nodes");
  theory->add_option("--sc-m4-integrand", integrand, "weighted or unweighted");
  add_output_flags(theory, o_theory);
  add_seed_flags(theory, s_theory);

  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
  SimulateFlags sim_flags;
  auto sim_apply = add_experiment_flags(simulate, sim_flags);
  add_output_flags(simulate, o_sim);
  add_seed_flags(simulate, s_sim);

  auto* rigidity = app.add_subcommand("rigidity", "Rigidity statistics, optionally scanned over sizes");
  SimulateFlags rig_flags;
  auto rig_apply = add_experiment_flags(rigidity, rig_flags);
  add_output_flags(rigidity, o_rig);
  add_seed_flags(rigidity, s_rig);

  auto* sampling = app.add_subcommand("sampling-clt", "Sampling-without-replacement CLT");
  int pop_n = 0;
  int pop_k = 0;
  std::string g_name = "identity";
  int samp_reps = 10000;
  bool exhaustive = false;
  double samp_ks = 0.05;
  auto* o_pop_n = sampling->add_option("--n", pop_n, "Population size");
  auto* o_pop_k = sampling->add_option("--k", pop_k, "Sample size");
  sampling->add_option("--g", g_name, "Function on [0, 1]");
  sampling->add_option("--reps", samp_reps, "Replications");
  sampling->add_option("--ks-max", samp_ks, "KS distance threshold");
  sampling->add_flag("--exhaustive", exhaustive, "Exact residual table by enumeration (n <= 10)");
  add_output_flags(sampling, o_samp);
  add_seed_flags(sampling, s_samp);

  auto* compare = app.add_subcommand("compare", "KS distance between sample files or against a normal law");
  std::string samples_path;
  std::string against_path;
  double normal_variance = 0.0;
  double cmp_ks = 0.05;
  compare->add_option("--samples", samples_path, "CSV with a value column")->required();
  compare->add_option("--against", against_path, "Second CSV for a two-sample distance");
  auto* o_nv = compare->add_option("--normal-variance", normal_variance, "Variance of the N(0, v) reference");
  compare->add_option("--ks-max", cmp_ks, "KS distance threshold");
  add_output_flags(compare, o_cmp);
  add_seed_flags(compare, s_cmp);

  auto* cat = app.add_subcommand("catalog", "List the built-in test functions");
  add_output_flags(cat, o_cat);
  add_seed_flags(cat, s_cat);

  std::vector<const char*> argv{"plstat"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kSuccess;
    } catch (const CLI::ParseError& e) {
      print_error(err, "usage", {e.what()});
      return kConfigError;
    }

    if (theory->parsed()) return cmd_theory(law, theory_f, m4, sigma2, nodes, integrand, o_theory, out);
    if (cat->parsed()) return cmd_catalog(o_cat, out);
    if (compare->parsed()) {
      return cmd_compare(samples_path, against_path, normal_variance, o_nv->count() > 0, cmp_ks, o_cmp, out);
    }
    if (simulate->parsed()) {
      json doc = json::object();
      sim_apply(doc);
      if (!doc.contains("ensemble") || !doc["ensemble"].contains("n")) {
        if (doc.value("comparison", std::string()) != "sampling_clt") {
          throw ConfigError("ensemble.n: required field is missing (pass --n or set it in --config)");
        }
      }
      apply_seed(doc, s_sim);
      return execute(config_from_json(doc), o_sim, out);
    }
    if (rigidity->parsed()) {
      json doc = json::object();
      rig_apply(doc);
      if (doc.contains("comparison") && doc["comparison"] != "rigidity") {
        throw ConfigError("comparison: the rigidity subcommand only runs rigidity experiments");
      }
      doc["comparison"] = "rigidity";
      if (!doc.contains("replications")) doc["replications"] = 200;
      const bool has_n = doc.contains("ensemble") && doc["ensemble"].contains("n");
      if (!has_n) {
        if (!doc.contains("scan_sizes")) throw ConfigError("ensemble.n: pass --n or --sizes");
        doc["ensemble"]["n"] = doc["scan_sizes"][0];
      }
      apply_seed(doc, s_rig);
      return execute(config_from_json(doc), o_rig, out);
    }
    if (sampling->parsed()) {
      std::vector<std::string> missing;
      if (o_pop_n->count() == 0) missing.push_back("n: required field is missing");
      if (o_pop_k->count() == 0) missing.push_back("k: required field is missing");
      if (!missing.empty()) throw ConfigError(std::move(missing));
      if (exhaustive) return cmd_exhaustive(pop_n, pop_k, g_name, o_samp, out);
      json doc{{"comparison", "sampling_clt"},
               {"population", pop_n},
               {"k_rule", {{"type", "fixed"}, {"k", pop_k}}},
               {"f", g_name},
               {"replications", samp_reps},
               {"thresholds", {{"ks_max", samp_ks}}}};
      apply_seed(doc, s_samp);
      return execute(config_from_json(doc), o_samp, out);
    }
    return kConfigError;
  } catch (const ConfigError& e) {
    print_error(err, "config", e.violations());
    return kConfigError;
  } catch (const ConvergenceError& e) {
    print_error(err, "convergence", {e.what()});
    return kConvergenceError;
  } catch (const std::exception& e) {
    print_error(err, "unexpected", {e.what()});
    return kUnexpected;
  }
}

}  // namespace plstat::cli
