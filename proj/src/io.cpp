#include "levybm/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "json.hpp"
#include "levybm/errors.hpp"

namespace levybm {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt(double x) { return format_double(x); }

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                const std::string& what) {
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      throw ParseError("unknown field '" + item.key() + "' in " + what);
  }
}

double get_number(const Json& j, const std::string& key, const std::string& what) {
  const Json& v = j.at(key);
  if (!v.is_number())
    throw ParseError("field '" + key + "' in " + what + " must be a number");
  return v.get<double>();
}

double get_number_or(const Json& j, const std::string& key,
                     const std::string& what, double fallback) {
  return j.contains(key) ? get_number(j, key, what) : fallback;
}

std::vector<Atom> parse_atoms(const Json& j) {
  if (!j.is_array()) throw ParseError("'atoms' must be an array");
  std::vector<Atom> out;
  for (const Json& e : j) {
    if (!e.is_object()) throw ParseError("each atom must be an object");
    check_keys(e, {"x", "mass"}, "atom");
    out.push_back({get_number(e, "x", "atom"), get_number(e, "mass", "atom")});
  }
  return out;
}

Json atoms_to_json(const std::vector<Atom>& atoms) {
  Json arr = Json::array();
  for (const Atom& a : atoms) arr.push_back({{"x", a.x}, {"mass", a.mass}});
  return arr;
}

LevyTriplet triplet_from_object(const Json& j) {
  if (!j.is_object()) throw ParseError("triplet must be a JSON object");
  if (!j.contains("family") || !j.at("family").is_string())
    throw ParseError("triplet needs a string field 'family'");
  const std::string family = j.at("family").get<std::string>();
  const Json params = j.contains("params") ? j.at("params") : Json::object();
  if (!params.is_object()) throw ParseError("'params' must be an object");

  if (family == "poisson") {
    check_keys(j, {"family", "params"}, "poisson triplet");
    check_keys(params, {"rate"}, "poisson params");
    return LevyTriplet::poisson(get_number(params, "rate", "poisson params"));
  }
  if (family == "compound_poisson") {
    check_keys(j, {"family", "params", "atoms"}, "compound_poisson triplet");
    check_keys(params, {"rate"}, "compound_poisson params");
    if (!j.contains("atoms"))
      throw ParseError("compound_poisson triplet needs 'atoms' (the jump law)");
    return LevyTriplet::compound_poisson(
        get_number(params, "rate", "compound_poisson params"),
        parse_atoms(j.at("atoms")));
  }
  if (family == "brownian") {
    check_keys(j, {"family", "sigma", "drift"}, "brownian triplet");
    return LevyTriplet::brownian(get_number_or(j, "sigma", "brownian", 0.0),
                                 get_number_or(j, "drift", "brownian", 0.0));
  }
  if (family == "jump_diffusion") {
    check_keys(j, {"family", "params", "drift", "sigma", "atoms"},
               "jump_diffusion triplet");
    check_keys(params, {"rate"}, "jump_diffusion params");
    std::vector<Atom> law =
        j.contains("atoms") ? parse_atoms(j.at("atoms")) : std::vector<Atom>{};
    return LevyTriplet::jump_diffusion(
        get_number_or(j, "drift", "jump_diffusion", 0.0),
        get_number_or(j, "sigma", "jump_diffusion", 0.0),
        get_number_or(params, "rate", "jump_diffusion params", 0.0),
        std::move(law));
  }
  if (family == "symmetric_stable") {
    check_keys(j, {"family", "params"}, "symmetric_stable triplet");
    check_keys(params, {"alpha", "scale"}, "symmetric_stable params");
    return LevyTriplet::symmetric_stable(
        get_number(params, "alpha", "symmetric_stable params"),
        get_number(params, "scale", "symmetric_stable params"));
  }
  if (family == "custom") {
    check_keys(j, {"family", "drift", "sigma", "atoms"}, "custom triplet");
    LevyMeasure measure;
    if (j.contains("atoms")) measure.atoms = parse_atoms(j.at("atoms"));
    return LevyTriplet::custom(get_number_or(j, "drift", "custom", 0.0),
                               get_number_or(j, "sigma", "custom", 0.0),
                               std::move(measure));
  }
  throw ParseError("unknown family '" + family + "'");
}

Json triplet_to_object(const LevyTriplet& t) {
  if (t.measure.density)
    throw ValidationError(
        "density-backed triplets carry a function and are not serialisable");
  Json j;
  j["family"] = to_string(t.family);
  switch (t.family) {
    case Family::Poisson:
      j["params"] = {{"rate", t.rate}};
      break;
    case Family::CompoundPoisson:
      j["params"] = {{"rate", t.rate}};
      j["atoms"] = atoms_to_json(t.measure.atoms);
      break;
    case Family::JumpDiffusion:
      j["params"] = {{"rate", t.rate}};
      j["drift"] = t.pathwise_drift();
      j["sigma"] = t.sigma;
      j["atoms"] = atoms_to_json(t.measure.atoms);
      break;
    case Family::SymmetricStable:
      j["params"] = {{"alpha", t.stable ? t.stable->alpha : 2.0},
                     {"scale", t.stable ? t.stable->scale : 0.0}};
      break;
    case Family::Custom:
      j["drift"] = t.drift;
      j["sigma"] = t.sigma;
      j["atoms"] = atoms_to_json(t.measure.atoms);
      break;
  }
  return j;
}

ExperimentConfig config_from_object(const Json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  check_keys(j,
             {"name", "triplet", "thetas", "epsilon", "T", "n_out", "replicas",
              "master_seed", "grid_step", "allow_degenerate"},
             "config");
  if (!j.contains("triplet")) throw ParseError("config needs 'triplet'");
  if (!j.contains("thetas") || !j.at("thetas").is_array())
    throw ParseError("config needs an array field 'thetas'");

  ExperimentConfig c;
  c.triplet = triplet_from_object(j.at("triplet"));
  for (const Json& v : j.at("thetas")) {
    if (!v.is_number()) throw ParseError("'thetas' entries must be numbers");
    c.thetas.push_back(v.get<double>());
  }
  c.epsilon = get_number_or(j, "epsilon", "config", c.epsilon);
  c.T = get_number_or(j, "T", "config", c.T);
  if (j.contains("n_out")) c.n_out = j.at("n_out").get<int>();
  if (j.contains("replicas")) c.replicas = j.at("replicas").get<int>();
  if (j.contains("master_seed"))
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("grid_step") && !j.at("grid_step").is_null())
    c.grid_step = get_number(j, "grid_step", "config");
  if (j.contains("allow_degenerate")) {
    if (!j.at("allow_degenerate").is_boolean())
      throw ParseError("'allow_degenerate' must be a boolean");
    c.allow_degenerate = j.at("allow_degenerate").get<bool>();
  }
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ParseError("'name' must be a string");
    c.name = j.at("name").get<std::string>();
  }
  return c;
}

Json config_to_object(const ExperimentConfig& c) {
  Json j;
  j["name"] = c.name;
  j["triplet"] = triplet_to_object(c.triplet);
  j["thetas"] = c.thetas;
  j["epsilon"] = c.epsilon;
  j["T"] = c.T;
  j["n_out"] = c.n_out;
  j["replicas"] = c.replicas;
  j["master_seed"] = c.master_seed;
  if (c.grid_step) j["grid_step"] = *c.grid_step;
  j["allow_degenerate"] = c.allow_degenerate;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

template <class F>
auto rethrow_as_parse(const std::string& what, F&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

const char* exactness_name(Exactness e) {
  return e == Exactness::ExactJump ? "exact_jump" : "grid";
}

}  // namespace

std::string triplet_to_json(const LevyTriplet& triplet) {
  return dump(triplet_to_object(triplet));
}

LevyTriplet triplet_from_json(const std::string& text) {
  return rethrow_as_parse("triplet", [&] {
    return triplet_from_object(Json::parse(text));
  });
}

std::string config_to_json(const ExperimentConfig& config) {
  return dump(config_to_object(config));
}

ExperimentConfig config_from_json(const std::string& text) {
  return rethrow_as_parse("config", [&] {
    return config_from_object(Json::parse(text));
  });
}

LoadedConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();

  LoadedConfig out;
  out.config = config_from_json(buf.str());
  out.config.validate();

  for (std::size_t i = 0; i < out.config.thetas.size(); ++i) {
    ThetaClass cls = classify_theta(out.config.thetas[i], out.config.triplet);
    if (cls.kind != ThetaKind::ComplexAdmissible)
      out.warnings.push_back("theta[" + std::to_string(i) + "] = " +
                             fmt(out.config.thetas[i]) + " is " +
                             to_string(cls.kind) + ": " + cls.reason);
  }
  if (out.config.thetas.size() > 1) {
    AdmissibilityReport adm =
        admissible_vector(out.config.thetas, out.config.triplet);
    if (!adm.pass) out.warnings.push_back(adm.summary());
  }
  return out;
}

std::string report_to_json(const StatReport& report) {
  Json j;
  j["name"] = report.config.name;
  j["preamble"] = report.preamble;
  j["n_replicas"] = report.n_replicas;
  j["re_scale"] = report.re_scale;
  j["all_pass"] = report.all_pass();
  j["config"] = config_to_object(report.config);
  Json cls = Json::array();
  for (std::size_t i = 0; i < report.classifications.size(); ++i) {
    const ThetaClass& c = report.classifications[i];
    cls.push_back({{"theta", report.config.thetas[i]},
                   {"kind", to_string(c.kind)},
                   {"reason", c.reason}});
  }
  j["classifications"] = cls;
  Json checks = Json::array();
  for (const CheckRecord& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"estimate", c.estimate},
                      {"standard_error", c.standard_error},
                      {"target", c.target},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  j["checks"] = checks;
  Json ks = Json::array();
  for (const KsRecord& k : report.ks)
    ks.push_back({{"label", k.label},
                  {"epsilon", k.epsilon},
                  {"ks_stat", k.ks_stat},
                  {"p_value", k.p_value}});
  j["ks"] = ks;
  return dump(j);
}

std::string report_to_csv(const StatReport& report) {
  std::string out = "name,epsilon,estimate,standard_error,target,tolerance,pass\n";
  for (const CheckRecord& c : report.checks) {
    out += c.name;
    out += ',';
    out += fmt(report.config.epsilon);
    out += ',';
    out += fmt(c.estimate);
    out += ',';
    out += fmt(c.standard_error);
    out += ',';
    out += fmt(c.target);
    out += ',';
    out += fmt(c.tolerance);
    out += ',';
    out += c.pass ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string path_to_csv(const ComplexPath& path) {
  std::string out = "t,re,im\n";
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    out += fmt(path.times[i]);
    out += ',';
    out += fmt(path.re[i]);
    out += ',';
    out += fmt(path.im[i]);
    out += '\n';
  }
  return out;
}

std::string paths_to_csv(std::span<const ComplexPath> components) {
  std::string out = "t,re,im,component\n";
  for (std::size_t j = 0; j < components.size(); ++j) {
    const ComplexPath& p = components[j];
    for (std::size_t i = 0; i < p.times.size(); ++i) {
      out += fmt(p.times[i]);
      out += ',';
      out += fmt(p.re[i]);
      out += ',';
      out += fmt(p.im[i]);
      out += ',';
      out += std::to_string(j);
      out += '\n';
    }
  }
  return out;
}

std::string driver_to_csv(const PathSample& path) {
  std::string out = "t,X\n";
  for (std::size_t i = 0; i < path.breakpoints.size(); ++i) {
    out += fmt(path.breakpoints[i]);
    out += ',';
    out += fmt(path.values[i]);
    out += '\n';
  }
  if (!path.breakpoints.empty() && path.horizon > path.breakpoints.back()) {
    out += fmt(path.horizon);
    out += ',';
    out += fmt(path.values.back());
    out += '\n';
  }
  return out;
}

std::string path_meta_json(std::span<const ComplexPath> components,
                           const ExperimentConfig& config,
                           std::uint64_t replica_index) {
  Json j;
  j["name"] = config.name;
  j["replica_index"] = replica_index;
  j["master_seed"] = config.master_seed;
  j["epsilon"] = config.epsilon;
  j["T"] = config.T;
  j["n_out"] = config.n_out;
  j["driver_horizon"] = config.driver_horizon();
  Json comps = Json::array();
  for (std::size_t k = 0; k < components.size(); ++k) {
    const PathMeta& m = components[k].meta;
    comps.push_back({{"component", k},
                     {"theta", m.theta},
                     {"c_theta", m.c_theta},
                     {"classification", to_string(m.classification.kind)},
                     {"reason", m.classification.reason},
                     {"driver", exactness_name(m.driver_exactness)},
                     {"grid_step", m.grid_step}});
  }
  j["components"] = comps;
  return dump(j);
}

std::string format_double(double x) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17] = {};
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[h & 0xF];
    h >>= 4;
  }
  return std::string(buf, 16);
}

Manifest write_artifacts(
    const std::filesystem::path& out_dir,
    std::span<const std::pair<std::string, std::string>> files, bool force) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  for (const auto& [name, content] : files)
    if (name == "manifest.json")
      throw IoError("'manifest.json' is reserved for the manifest itself");

  if (!force) {
    auto refuse = [&](const std::string& name) {
      const auto target = out_dir / name;
      if (std::filesystem::exists(target))
        throw IoError("refusing to overwrite " + target.string() +
                      " (pass --force to replace existing results)");
    };
    for (const auto& [name, content] : files) refuse(name);
    refuse("manifest.json");
  }

  auto write_one = [&](const std::string& name, const std::string& content) {
    const auto target = out_dir / name;
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + target.string());
    return target;
  };

  Manifest manifest;
  manifest.out_dir = out_dir;
  Json listing = Json::array();
  for (const auto& [name, content] : files) {
    manifest.files.push_back(write_one(name, content));
    listing.push_back({{"name", name},
                       {"bytes", content.size()},
                       {"fnv1a64", fnv1a64_hex(content)}});
  }
  Json mj;
  mj["files"] = listing;
  manifest.files.push_back(write_one("manifest.json", dump(mj)));
  return manifest;
}

Manifest write_report(const StatReport& report,
                      const std::filesystem::path& out_dir, bool force) {
  const std::pair<std::string, std::string> files[] = {
      {"report.json", report_to_json(report)},
      {"summary.csv", report_to_csv(report)},
  };
  return write_artifacts(out_dir, files, force);
}

}  // namespace levybm
