#include "plstat/cli/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "plstat/errors.hpp"

namespace plstat::cli {

namespace {

std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_value(std::ostringstream& os, const json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {  // object_t is an ordered std::map
        if (!first) os << ",\n";
        first = false;
        os << pad << json(key).dump() << ": ";
        write_value(os, item, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_value(os, v[i], depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float:
      os << format_double(v.get<double>());
      return;
    default:
      os << v.dump();
  }
}

// Strict reader over one JSON object; records every problem it sees.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) errors_.push_back(where() + "must be an object");
  }

  bool ok() const { return obj_.is_object(); }
  bool has(const std::string& key) const { return ok() && obj_.contains(key); }

  const json* get(const std::string& key, bool required) {
    seen_.insert(key);
    if (!ok()) return nullptr;
    auto it = obj_.find(key);
    if (it == obj_.end()) {
      if (required) errors_.push_back(field(key) + ": required field is missing");
      return nullptr;
    }
    return &*it;
  }

  template <class T>
  void number(const std::string& key, T& out, bool required = false) {
    const json* v = get(key, required);
    if (!v) return;
    if constexpr (std::is_floating_point_v<T>) {
      if (!v->is_number()) {
        errors_.push_back(field(key) + ": expected a number");
        return;
      }
      out = v->get<T>();
    } else if constexpr (std::is_unsigned_v<T>) {
      const bool nonnegative = v->is_number_unsigned() || (v->is_number_integer() && v->get<std::int64_t>() >= 0);
      if (!nonnegative) {
        errors_.push_back(field(key) + ": expected a nonnegative integer");
        return;
      }
      out = v->get<T>();
    } else {
      if (!v->is_number_integer()) {
        errors_.push_back(field(key) + ": expected an integer");
        return;
      }
      out = v->get<T>();
    }
  }

  void string(const std::string& key, std::string& out, bool required = false) {
    const json* v = get(key, required);
    if (!v) return;
    if (!v->is_string()) {
      errors_.push_back(field(key) + ": expected a string");
      return;
    }
    out = v->get<std::string>();
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() {
    if (!ok()) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) errors_.push_back(field(key) + ": unknown key");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config " : path_ + " "; }

  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

EntryDistribution entry_from_json(const json& doc, const std::string& path, std::vector<std::string>& errors) {
  ObjectReader r(doc, path, errors);
  std::string law = "gaussian";
  r.string("law", law, true);
  EntryDistribution out = EntryDistribution::gaussian(1.0);
  try {
    if (law == "gaussian" || law == "rademacher" || law == "uniform") {
      double variance = 1.0;
      r.number("variance", variance);
      if (!(variance > 0.0)) {
        errors.push_back(r.field("variance") + ": must be positive");
      } else if (law == "gaussian") {
        out = EntryDistribution::gaussian(variance);
      } else if (law == "rademacher") {
        out = EntryDistribution::rademacher(variance);
      } else {
        out = EntryDistribution::symmetric_uniform(variance);
      }
    } else if (law == "two_point") {
      double m4 = 3.0;
      r.number("m4", m4, true);
      if (!(m4 >= 1.0)) {
        errors.push_back(r.field("m4") + ": must be at least 1");
      } else {
        out = EntryDistribution::scaled_two_point(m4);
      }
    } else if (law == "custom") {
      std::vector<double> values;
      std::vector<double> probs;
      for (auto [key, target] : {std::pair{"values", &values}, std::pair{"probabilities", &probs}}) {
        const json* v = r.get(key, true);
        if (!v) continue;
        if (!v->is_array()) {
          errors.push_back(r.field(key) + ": expected an array of numbers");
          continue;
        }
        for (const auto& x : *v) {
          if (!x.is_number()) {
            errors.push_back(r.field(key) + ": expected an array of numbers");
            break;
          }
          target->push_back(x.get<double>());
        }
      }
      out = EntryDistribution::custom(values, probs);
    } else {
      errors.push_back(r.field("law") + ": unknown law '" + law + "'");
    }
  } catch (const std::invalid_argument& e) {
    errors.push_back(path + ": " + e.what());
  }
  r.finish();
  return out;
}

std::string symmetry_name(SymmetryClass s) { return s == SymmetryClass::RealSymmetric ? "real" : "complex"; }

void read_symmetry(ObjectReader& r, SymmetryClass& out, std::vector<std::string>& errors) {
  std::string name = "real";
  r.string("symmetry", name);
  if (name == "real") {
    out = SymmetryClass::RealSymmetric;
  } else if (name == "complex") {
    out = SymmetryClass::ComplexHermitian;
  } else {
    errors.push_back(r.field("symmetry") + ": expected \"real\" or \"complex\"");
  }
}

}  // namespace

std::string canonical_json(const json& doc) {
  std::ostringstream os;
  write_value(os, doc, 0);
  os << "\n";
  return os.str();
}

bool contains_nan(const json& doc) {
  if (doc.is_number_float()) return std::isnan(doc.get<double>());
  if (doc.is_structured()) {
    for (const auto& item : doc) {
      if (contains_nan(item)) return true;
    }
  }
  return false;
}

json entry_to_json(const EntryDistribution& dist) {
  json out;
  out["law"] = dist.name();
  switch (dist.kind()) {
    case EntryKind::Gaussian:
    case EntryKind::Rademacher:
    case EntryKind::SymmetricUniform:
      out["variance"] = dist.parameter();
      break;
    case EntryKind::ScaledTwoPoint:
      out["m4"] = dist.parameter();
      break;
    case EntryKind::Custom:
      out["values"] = dist.atoms();
      out["probabilities"] = dist.weights();
      break;
  }
  return out;
}

json config_to_json(const RunSpec& spec) {
  const ExperimentConfig& c = spec.experiment;
  json out;
  out["comparison"] = to_string(c.comparison);
  json ensemble;
  if (c.ensemble == EnsembleKind::Wigner) {
    ensemble["kind"] = "wigner";
    ensemble["n"] = c.wigner.n;
    ensemble["offdiag"] = entry_to_json(c.wigner.offdiag);
    ensemble["diag"] = entry_to_json(c.wigner.diag);
    ensemble["symmetry"] = symmetry_name(c.wigner.symmetry);
  } else {
    ensemble["kind"] = "sample_cov";
    ensemble["n"] = c.sample_cov.n;
    ensemble["entry"] = entry_to_json(c.sample_cov.entry);
    ensemble["symmetry"] = symmetry_name(c.sample_cov.symmetry);
  }
  out["ensemble"] = ensemble;
  out["f"] = c.f;
  json k_rule;
  k_rule["type"] = to_string(c.k_rule.type);
  switch (c.k_rule.type) {
    case KRule::Type::Fixed: k_rule["k"] = c.k_rule.k; break;
    case KRule::Type::GrowingSqrt: break;
    case KRule::Type::Proportional: k_rule["ratio"] = c.k_rule.ratio; break;
    case KRule::Type::ComplementFixed: k_rule["l"] = c.k_rule.l; break;
  }
  out["k_rule"] = k_rule;
  out["replications"] = c.replications;
  out["limit_replications"] = c.limit_replications;
  out["master_seed"] = c.master_seed;
  out["partial_mode"] = c.partial_mode == PartialMode::UnorderedPrefix ? "unordered_prefix" : "sampling_complement";
  out["thresholds"] = {{"ks_max", c.thresholds.ks_max},
                       {"variance_ratio_min", c.thresholds.variance_ratio_min},
                       {"variance_ratio_max", c.thresholds.variance_ratio_max}};
  out["quadrature_nodes"] = c.quadrature_nodes;
  out["sc_m4_integrand"] = c.sc_integrand == FourthMomentIntegrand::WeightedByF ? "weighted" : "unweighted";
  out["rigidity_c"] = c.rigidity_c;
  out["population"] = c.population;
  if (!spec.scan_sizes.empty()) out["scan_sizes"] = spec.scan_sizes;
  if (spec.max_growth_exponent >= 0.0) out["max_growth_exponent"] = spec.max_growth_exponent;
  return out;
}

RunSpec config_from_json(const json& doc) {
  std::vector<std::string> errors;
  RunSpec spec;
  ExperimentConfig& c = spec.experiment;
  ObjectReader r(doc, "", errors);

  std::string comparison = to_string(c.comparison);
  r.string("comparison", comparison);
  if (auto parsed = parse_comparison(comparison)) {
    c.comparison = *parsed;
  } else {
    errors.push_back("comparison: unknown value '" + comparison + "'");
  }
  const bool needs_matrix = c.comparison != Comparison::SamplingClt;

  if (const json* e = r.get("ensemble", needs_matrix)) {
    ObjectReader er(*e, "ensemble", errors);
    std::string kind = "wigner";
    er.string("kind", kind);
    int n = 0;
    er.number("n", n, needs_matrix);
    if (kind == "wigner") {
      c.ensemble = EnsembleKind::Wigner;
      c.wigner.n = n;
      if (const json* v = er.get("offdiag", false)) c.wigner.offdiag = entry_from_json(*v, "ensemble.offdiag", errors);
      if (const json* v = er.get("diag", false)) c.wigner.diag = entry_from_json(*v, "ensemble.diag", errors);
      read_symmetry(er, c.wigner.symmetry, errors);
    } else if (kind == "sample_cov") {
      c.ensemble = EnsembleKind::SampleCov;
      c.sample_cov.n = n;
      if (const json* v = er.get("entry", false)) c.sample_cov.entry = entry_from_json(*v, "ensemble.entry", errors);
      read_symmetry(er, c.sample_cov.symmetry, errors);
    } else {
      errors.push_back("ensemble.kind: expected \"wigner\" or \"sample_cov\"");
    }
    er.finish();
  }

  r.string("f", c.f);

  if (const json* k = r.get("k_rule", false)) {
    ObjectReader kr(*k, "k_rule", errors);
    std::string type = "fixed";
    kr.string("type", type, true);
    if (type == "fixed") {
      c.k_rule = KRule::fixed(0);
      kr.number("k", c.k_rule.k, true);
    } else if (type == "growing_sqrt") {
      c.k_rule = KRule::growing_sqrt();
    } else if (type == "proportional") {
      c.k_rule = KRule::proportional(0.0);
      kr.number("ratio", c.k_rule.ratio, true);
    } else if (type == "complement_fixed") {
      c.k_rule = KRule::complement_fixed(0);
      kr.number("l", c.k_rule.l, true);
    } else {
      errors.push_back("k_rule.type: unknown value '" + type + "'");
    }
    kr.finish();
  }

  r.number("replications", c.replications);
  r.number("limit_replications", c.limit_replications);
  r.number("master_seed", c.master_seed);

  std::string mode = "unordered_prefix";
  r.string("partial_mode", mode);
  if (mode == "unordered_prefix") {
    c.partial_mode = PartialMode::UnorderedPrefix;
  } else if (mode == "sampling_complement") {
    c.partial_mode = PartialMode::SamplingComplement;
  } else {
    errors.push_back("partial_mode: expected \"unordered_prefix\" or \"sampling_complement\"");
  }

  if (const json* t = r.get("thresholds", false)) {
    ObjectReader tr(*t, "thresholds", errors);
    tr.number("ks_max", c.thresholds.ks_max);
    tr.number("variance_ratio_min", c.thresholds.variance_ratio_min);
    tr.number("variance_ratio_max", c.thresholds.variance_ratio_max);
    tr.finish();
  }

  r.number("quadrature_nodes", c.quadrature_nodes);
  std::string integrand = "weighted";
  r.string("sc_m4_integrand", integrand);
  if (integrand == "weighted") {
    c.sc_integrand = FourthMomentIntegrand::WeightedByF;
  } else if (integrand == "unweighted") {
    c.sc_integrand = FourthMomentIntegrand::Unweighted;
  } else {
    errors.push_back("sc_m4_integrand: expected \"weighted\" or \"unweighted\"");
  }
  r.number("rigidity_c", c.rigidity_c);
  r.number("population", c.population, !needs_matrix);

  if (const json* s = r.get("scan_sizes", false)) {
    if (!s->is_array()) {
      errors.push_back("scan_sizes: expected an array of integers");
    } else {
      for (const auto& x : *s) {
        if (!x.is_number_integer() || x.get<long>() < 3) {
          errors.push_back("scan_sizes: every size must be an integer >= 3");
          break;
        }
        spec.scan_sizes.push_back(x.get<int>());
      }
    }
  }
  r.number("max_growth_exponent", spec.max_growth_exponent);
  r.finish();

  if (errors.empty()) {
    for (auto& v : c.validate()) errors.push_back(std::move(v));
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return spec;
}

json variance_report_to_json(const VarianceReport& report) {
  return {{"main_term", report.main_term},
          {"fourth_moment_term", report.fourth_moment_term},
          {"diagonal_term", report.diagonal_term},
          {"total", report.total},
          {"node_count", report.node_count}};
}

json report_to_json(const ComparisonReport& report, std::size_t replications) {
  json out;
  out["comparison"] = to_string(report.comparison);
  out["replications"] = replications;
  out["variance_empirical"] = report.variance_empirical;
  json rows = json::array();
  const bool has_theory = report.comparison != Comparison::Rigidity;
  if (has_theory) {
    out["ks_distance"] = report.ks_distance;
    out["variance_theory"] = report.variance_theory;
    out["variance_ratio"] = report.variance_ratio;
  }
  for (const auto& row : report.moment_table) {
    json j{{"order", row.order}, {"empirical", row.empirical}};
    if (has_theory) j["reference"] = row.reference;
    rows.push_back(j);
  }
  out["moment_table"] = rows;
  json details = json::object();
  for (const auto& [key, value] : report.details) details[key] = value;
  out["details"] = details;
  out["pass"] = report.pass && !contains_nan(out);
  return out;
}

std::string samples_csv(const std::vector<double>& samples) {
  std::string out = "replication,value\n";
  char buf[64];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, samples[i]);
    out += buf;
  }
  return out;
}

std::vector<double> read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open samples file");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty samples file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::size_t column = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "value") column = i;
  }
  if (column == header.size()) throw ConfigError(path.string() + ": no 'value' column in header");
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t i = 0; i <= column; ++i) {
      if (!std::getline(ss, cell, ',')) throw ConfigError(path.string() + ": short row " + std::to_string(row));
    }
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ": bad number on row " + std::to_string(row));
    }
  }
  if (values.empty()) throw ConfigError(path.string() + ": no samples");
  return values;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace plstat::cli
