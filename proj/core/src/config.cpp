#include "boltzlp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace boltzlp {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      std::ostringstream msg;
      msg << "config: unknown key \"" << item.key() << "\" in " << where;
      throw ConfigError(msg.str());
    }
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    std::ostringstream msg;
    msg << "config: " << where << " requires numeric field \"" << key << '"';
    throw ConfigError(msg.str());
  }
  return obj[key].get<double>();
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file: " + path);
  json root;
  try {
    in >> root;
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config: JSON parse error: ") + err.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(root,
             {"dimension", "grid", "kernel", "norms", "l1_moments", "suite",
              "ensemble", "quadrature", "flow", "initial_state", "probe",
              "output"},
             "the top level");

  RunConfig cfg;
  if (root.contains("dimension")) cfg.dimension = root["dimension"].get<int>();
  if (cfg.dimension != 2 && cfg.dimension != 3)
    throw ConfigError("config: dimension must be 2 or 3");

  if (root.contains("grid")) {
    const json& g = root["grid"];
    check_keys(g, {"n", "R"}, "grid");
    cfg.grid_n = static_cast<int>(get_number(g, "n", "grid"));
    cfg.grid_R = get_number(g, "R", "grid");
  }

  if (root.contains("kernel")) {
    const json& k = root["kernel"];
    check_keys(k, {"gamma", "angular"}, "kernel");
    cfg.kernel.gamma = get_number(k, "gamma", "kernel");
    if (k.contains("angular")) {
      const json& a = k["angular"];
      check_keys(a,
                 {"type", "c", "nu", "strength", "theta0", "cos_nodes",
                  "values", "support"},
                 "kernel.angular");
      if (a.contains("type")) cfg.kernel.type = a["type"].get<std::string>();
      if (a.contains("c")) cfg.kernel.c = a["c"].get<double>();
      if (a.contains("nu")) cfg.kernel.nu = a["nu"].get<double>();
      if (a.contains("strength"))
        cfg.kernel.strength = a["strength"].get<double>();
      if (a.contains("theta0")) cfg.kernel.theta0 = a["theta0"].get<double>();
      if (a.contains("cos_nodes"))
        cfg.kernel.cos_nodes = a["cos_nodes"].get<std::vector<double>>();
      if (a.contains("values"))
        cfg.kernel.values = a["values"].get<std::vector<double>>();
      if (a.contains("support")) {
        auto s = a["support"].get<std::vector<double>>();
        if (s.size() != 2)
          throw ConfigError("config: kernel.angular.support must be [lo, hi]");
        cfg.kernel.support = std::make_pair(s[0], s[1]);
      }
    }
  }

  if (root.contains("norms")) {
    for (const json& item : root["norms"]) {
      check_keys(item, {"p", "q"}, "norms[]");
      cfg.norms.emplace_back(get_number(item, "p", "norms[]"),
                             get_number(item, "q", "norms[]"));
    }
  }
  if (root.contains("l1_moments"))
    cfg.l1_orders = root["l1_moments"].get<std::vector<double>>();

  if (root.contains("suite")) cfg.suite = root["suite"].get<std::string>();

  if (root.contains("ensemble")) {
    const json& e = root["ensemble"];
    check_keys(e,
               {"size", "seed", "components", "T_range", "drift_max",
                "mass_range"},
               "ensemble");
    cfg.has_ensemble = true;
    if (e.contains("size")) cfg.ensemble.size = e["size"].get<int>();
    if (!e.contains("seed"))
      throw ConfigError(
          "config: ensemble.seed is mandatory (seeded ensembles only)");
    cfg.ensemble.seed = e["seed"].get<std::uint64_t>();
    if (e.contains("components")) {
      auto c = e["components"].get<std::vector<int>>();
      if (c.size() != 2)
        throw ConfigError("config: ensemble.components must be [min, max]");
      cfg.ensemble.min_components = c[0];
      cfg.ensemble.max_components = c[1];
    }
    if (e.contains("T_range")) {
      auto t = e["T_range"].get<std::vector<double>>();
      if (t.size() != 2)
        throw ConfigError("config: ensemble.T_range must be [min, max]");
      cfg.ensemble.T_min = t[0];
      cfg.ensemble.T_max = t[1];
    }
    if (e.contains("drift_max"))
      cfg.ensemble.drift_max = e["drift_max"].get<double>();
    if (e.contains("mass_range")) {
      auto m = e["mass_range"].get<std::vector<double>>();
      if (m.size() != 2)
        throw ConfigError("config: ensemble.mass_range must be [min, max]");
      cfg.ensemble.mass_min = m[0];
      cfg.ensemble.mass_max = m[1];
    }
  }

  if (root.contains("quadrature")) {
    const json& q = root["quadrature"];
    check_keys(q,
               {"m_theta", "band_nodes", "theta_min", "ratio", "m_u",
                "interp_order"},
               "quadrature");
    if (q.contains("m_theta")) cfg.quad.m_theta = q["m_theta"].get<int>();
    if (q.contains("band_nodes"))
      cfg.quad.band_nodes = q["band_nodes"].get<int>();
    if (q.contains("theta_min"))
      cfg.quad.theta_min = q["theta_min"].get<double>();
    if (q.contains("ratio")) cfg.quad.ratio = q["ratio"].get<double>();
    if (q.contains("m_u")) cfg.quad.m_u = q["m_u"].get<int>();
    if (q.contains("interp_order"))
      cfg.quad.interp_order = q["interp_order"].get<int>();
  }

  if (root.contains("flow")) {
    const json& f = root["flow"];
    check_keys(f,
               {"dt", "t_final", "scheme", "eps_reg", "mollifier_width",
                "positivity", "mass_rescale", "sample_interval",
                "kt_exponent_override", "bernoulli_r", "t_min"},
               "flow");
    if (f.contains("dt")) cfg.flow.dt = f["dt"].get<double>();
    if (f.contains("t_final")) cfg.flow.t_final = f["t_final"].get<double>();
    if (f.contains("scheme")) {
      std::string s = f["scheme"].get<std::string>();
      if (s == "euler")
        cfg.flow.scheme = TimeScheme::ExplicitEuler;
      else if (s == "rk4")
        cfg.flow.scheme = TimeScheme::RK4;
      else
        throw ConfigError("config: flow.scheme must be \"euler\" or \"rk4\"");
    }
    if (f.contains("eps_reg")) cfg.flow.eps_reg = f["eps_reg"].get<double>();
    if (f.contains("mollifier_width"))
      cfg.flow.mollifier_width = f["mollifier_width"].get<double>();
    if (f.contains("positivity"))
      cfg.flow.positivity = f["positivity"].get<bool>();
    if (f.contains("mass_rescale"))
      cfg.flow.mass_rescale = f["mass_rescale"].get<bool>();
    if (f.contains("sample_interval"))
      cfg.flow.sample_interval = f["sample_interval"].get<double>();
    if (f.contains("kt_exponent_override") &&
        !f["kt_exponent_override"].is_null())
      cfg.flow.kt_exponent_override = f["kt_exponent_override"].get<double>();
    if (f.contains("bernoulli_r"))
      cfg.bernoulli_r = f["bernoulli_r"].get<std::vector<double>>();
    if (f.contains("t_min")) cfg.t_min = f["t_min"].get<double>();
  }

  if (root.contains("initial_state")) {
    const json& s = root["initial_state"];
    check_keys(s, {"components"}, "initial_state");
    for (const json& item : s["components"]) {
      check_keys(item, {"rho", "u", "T"}, "initial_state.components[]");
      MaxwellComponent c{};
      c.rho = get_number(item, "rho", "initial_state");
      c.T = get_number(item, "T", "initial_state");
      auto u = item.contains("u") ? item["u"].get<std::vector<double>>()
                                  : std::vector<double>{};
      for (std::size_t d = 0; d < u.size() && d < 3; ++d) c.u[d] = u[d];
      cfg.initial_components.push_back(c);
    }
  }

  if (root.contains("probe")) {
    const json& p = root["probe"];
    check_keys(p, {"members", "shrink", "theta0"}, "probe");
    if (p.contains("members")) cfg.probe_members = p["members"].get<int>();
    if (p.contains("shrink")) cfg.probe_shrink = p["shrink"].get<double>();
    if (p.contains("theta0")) cfg.probe_theta0 = p["theta0"].get<double>();
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, {"trajectory", "reports", "snapshot_prefix"}, "output");
    if (o.contains("trajectory"))
      cfg.out_trajectory = o["trajectory"].get<std::string>();
    if (o.contains("reports"))
      cfg.out_reports = o["reports"].get<std::string>();
    if (o.contains("snapshot_prefix"))
      cfg.out_snapshot_prefix = o["snapshot_prefix"].get<std::string>();
  }

  validate_config(cfg);
  return cfg;
}

AngularKernel build_angular(const KernelConfig& kc, int dim) {
  double lo = 0.0, hi = kPi;
  if (kc.support) {
    lo = kc.support->first;
    hi = kc.support->second;
  }
  if (kc.type == "constant") return AngularKernel::constant(kc.c, lo, hi);
  if (kc.type == "table")
    return AngularKernel::table(kc.cos_nodes, kc.values, lo, hi);
  if (kc.type == "singular")
    return AngularKernel::singular(kc.strength, kc.nu, dim, lo, hi);
  throw ConfigError(
      "config: kernel.angular.type must be one of constant | table | "
      "singular, got \"" +
      kc.type + '"');
}

CollisionKernel build_kernel(const RunConfig& config) {
  try {
    return CollisionKernel(config.kernel.gamma,
                           build_angular(config.kernel, config.dimension),
                           config.dimension);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }
}

void validate_config(const RunConfig& config) {
  try {
    VelocityGrid grid(config.dimension, config.grid_n, config.grid_R);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }
  CollisionKernel kernel = build_kernel(config);

  // (p, q) versus singularity class, the conditions of the main theorem
  for (const NormSpec& spec : config.norms) {
    try {
      require_norm_compatible(spec, kernel.angular);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("config: ") + err.what() +
                        " (weight condition (ii)/(iii) on pq versus nu)");
    }
  }

  const bool flow_suite = config.suite == "apriori";
  if ((flow_suite || config.suite.empty()) &&
      kernel.angular.symmetrized().singular_at_origin() && flow_suite) {
    throw ConfigError(
        "config: flows require a cutoff kernel (angular part integrable at "
        "theta = 0); split the kernel or use the static check suites");
  }

  static const std::set<std::string> known_suites = {
      "estim1",    "fonc",        "estim3",  "estim5",
      "lemma-sym", "cv-identity", "apriori", "probe-eps"};
  if (!config.suite.empty() && !known_suites.count(config.suite)) {
    std::ostringstream msg;
    msg << "config: unknown suite \"" << config.suite
        << "\"; expected one of estim1 | fonc | estim3 | estim5 | lemma-sym "
           "| cv-identity | apriori | probe-eps";
    throw ConfigError(msg.str());
  }

  static const std::set<std::string> ensemble_suites = {"estim1", "fonc",
                                                        "estim3", "estim5"};
  if (ensemble_suites.count(config.suite) && !config.has_ensemble)
    throw ConfigError("config: suite \"" + config.suite +
                      "\" needs an ensemble block (with a seed)");
  if ((config.suite == "apriori" || config.suite == "probe-eps") &&
      config.initial_components.empty())
    throw ConfigError("config: suite \"" + config.suite +
                      "\" needs initial_state.components");
}

}  // namespace boltzlp
