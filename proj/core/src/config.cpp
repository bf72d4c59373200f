#include "twophase/config.hpp"

#include <set>

#include "json.hpp"
#include "twophase/errors.hpp"
#include "twophase/io.hpp"

namespace twophase {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
  if (!obj.is_object()) throw ParseError(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (!required.count(item.key()) && !optional.count(item.key()))
      throw ParseError("unknown key \"" + item.key() + "\" in " + where);
  }
  for (const std::string& key : required) {
    if (!obj.contains(key)) throw ParseError("missing key \"" + key + "\" in " + where);
  }
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + " must be a number");
  return v.get<double>();
}

std::vector<double> as_numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(as_number(x, where));
  return out;
}

Coefficient parse_coefficient(const json& obj, const std::string& where) {
  require_keys(obj, where, {"kind"}, {"params", "values"});
  Coefficient c;
  c.kind = coeff_kind_from_name(obj.at("kind").get<std::string>());
  if (c.kind == CoeffKind::GridSampled) {
    if (!obj.contains("values")) throw ParseError(where + ": grid_sampled needs \"values\"");
    c.params.clear();
    c.values = as_numbers(obj.at("values"), where + ".values");
  } else {
    if (!obj.contains("params")) throw ParseError(where + ": missing \"params\"");
    c.params = as_numbers(obj.at("params"), where + ".params");
    if (c.params.empty()) throw ParseError(where + ".params must be nonempty");
  }
  return c;
}

json coefficient_json(const Coefficient& c) {
  json obj;
  obj["kind"] = coeff_kind_name(c.kind);
  if (c.kind == CoeffKind::GridSampled)
    obj["values"] = c.values;
  else
    obj["params"] = c.params;
  return obj;
}

int parse_order(const json& v, const std::string& where) {
  if (v.is_string()) return order_from_label(v.get<std::string>());
  if (v.is_number_integer()) return v.get<int>();
  throw ParseError(where + " must be an integer or \"inf\"");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(doc, "config", {"domain", "grid", "law", "coefficients"},
               {"c_gamma", "solver", "output_dir"});

  RunConfig cfg;

  const json& dom = doc.at("domain");
  require_keys(dom, "domain", {"kind", "bounds"});
  const std::string kind = dom.at("kind").get<std::string>();
  const std::vector<double> bounds = as_numbers(dom.at("bounds"), "domain.bounds");
  if (kind == "interval") {
    if (bounds.size() != 2) throw ParseError("interval bounds must be [a, b]");
    cfg.problem.domain = Domain::interval(bounds[0], bounds[1]);
  } else if (kind == "rectangle") {
    if (bounds.size() != 4) throw ParseError("rectangle bounds must be [x0, x1, y0, y1]");
    cfg.problem.domain = Domain::rectangle(bounds[0], bounds[1], bounds[2], bounds[3]);
  } else {
    throw ParseError("domain.kind must be \"interval\" or \"rectangle\"");
  }

  const json& grid = doc.at("grid");
  require_keys(grid, "grid", {"resolution"});
  const json& res = grid.at("resolution");
  if (!res.is_array() || res.empty() || res.size() > 2)
    throw ParseError("grid.resolution must be [nx] or [nx, ny]");
  cfg.res_x = res[0].get<int>();
  cfg.res_y = res.size() == 2 ? res[1].get<int>() : 0;
  if (cfg.problem.domain.dim() == 1 && cfg.res_y != 0)
    throw ParseError("interval domains take a single resolution entry");
  if (cfg.problem.domain.dim() == 2 && res.size() != 2)
    throw ParseError("rectangle domains need [nx, ny]");

  const json& law = doc.at("law");
  require_keys(law, "law", {"k"}, {"exp_cap"});
  const int order = parse_order(law.at("k"), "law.k");
  const double cap = law.contains("exp_cap") ? as_number(law.at("exp_cap"), "law.exp_cap") : 700.0;
  cfg.problem.law = order == EnergyLaw::kInfinite ? EnergyLaw::exponential(cap)
                                                  : EnergyLaw::truncated(order, cap);

  const json& coeffs = doc.at("coefficients");
  require_keys(coeffs, "coefficients",
               {"f_plus", "f_minus", "gamma_plus", "gamma_minus", "psi"});
  cfg.problem.f_plus = parse_coefficient(coeffs.at("f_plus"), "coefficients.f_plus");
  cfg.problem.f_minus = parse_coefficient(coeffs.at("f_minus"), "coefficients.f_minus");
  cfg.problem.gamma_plus = parse_coefficient(coeffs.at("gamma_plus"), "coefficients.gamma_plus");
  cfg.problem.gamma_minus =
      parse_coefficient(coeffs.at("gamma_minus"), "coefficients.gamma_minus");
  cfg.problem.psi = parse_coefficient(coeffs.at("psi"), "coefficients.psi");

  if (doc.contains("c_gamma")) cfg.problem.c_gamma = as_number(doc.at("c_gamma"), "c_gamma");

  if (doc.contains("solver")) {
    const json& sol = doc.at("solver");
    require_keys(sol, "solver", {},
                 {"max_iters", "grad_tol", "armijo_c", "backtrack", "k_schedule",
                  "delta_schedule", "seed", "starts"});
    if (sol.contains("max_iters")) cfg.solver.max_iters = sol.at("max_iters").get<int>();
    if (sol.contains("grad_tol")) cfg.solver.grad_tol = as_number(sol.at("grad_tol"), "grad_tol");
    if (sol.contains("armijo_c")) cfg.solver.armijo_c = as_number(sol.at("armijo_c"), "armijo_c");
    if (sol.contains("backtrack"))
      cfg.solver.backtrack_factor = as_number(sol.at("backtrack"), "backtrack");
    if (sol.contains("k_schedule")) {
      cfg.solver.k_schedule.clear();
      if (!sol.at("k_schedule").is_array()) throw ParseError("k_schedule must be an array");
      for (const auto& entry : sol.at("k_schedule"))
        cfg.solver.k_schedule.push_back(parse_order(entry, "k_schedule entry"));
    }
    if (sol.contains("delta_schedule"))
      cfg.solver.delta_schedule = as_numbers(sol.at("delta_schedule"), "delta_schedule");
    if (sol.contains("seed")) cfg.solver.seed = sol.at("seed").get<std::uint64_t>();
    if (sol.contains("starts")) cfg.solver.starts = sol.at("starts").get<int>();
  }

  if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();

  if (cfg.solver.delta_schedule.empty())
    throw ValidationError("delta_schedule must be nonempty");
  cfg.problem.smoothing_delta = cfg.solver.delta_schedule.back();

  // Nodal invariants on the declared grid (also validates the resolution).
  const Mesh mesh = build_config_mesh(cfg);
  validate_on_mesh(cfg.problem, mesh);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path));
}

std::string serialize_config(const RunConfig& cfg) {
  json doc;
  const Domain& d = cfg.problem.domain;
  doc["domain"]["kind"] = d.kind == Domain::Kind::Interval ? "interval" : "rectangle";
  doc["domain"]["bounds"] = d.kind == Domain::Kind::Interval
                                ? std::vector<double>{d.x0, d.x1}
                                : std::vector<double>{d.x0, d.x1, d.y0, d.y1};
  doc["grid"]["resolution"] =
      d.dim() == 1 ? std::vector<int>{cfg.res_x} : std::vector<int>{cfg.res_x, cfg.res_y};
  if (cfg.problem.law.infinite())
    doc["law"]["k"] = "inf";
  else
    doc["law"]["k"] = cfg.problem.law.order;
  doc["law"]["exp_cap"] = cfg.problem.law.exp_cap;
  doc["coefficients"]["f_plus"] = coefficient_json(cfg.problem.f_plus);
  doc["coefficients"]["f_minus"] = coefficient_json(cfg.problem.f_minus);
  doc["coefficients"]["gamma_plus"] = coefficient_json(cfg.problem.gamma_plus);
  doc["coefficients"]["gamma_minus"] = coefficient_json(cfg.problem.gamma_minus);
  doc["coefficients"]["psi"] = coefficient_json(cfg.problem.psi);
  doc["c_gamma"] = cfg.problem.c_gamma;
  json sol;
  sol["max_iters"] = cfg.solver.max_iters;
  sol["grad_tol"] = cfg.solver.grad_tol;
  sol["armijo_c"] = cfg.solver.armijo_c;
  sol["backtrack"] = cfg.solver.backtrack_factor;
  json ks = json::array();
  for (int k : cfg.solver.k_schedule) {
    if (k == EnergyLaw::kInfinite)
      ks.push_back("inf");
    else
      ks.push_back(k);
  }
  sol["k_schedule"] = ks;
  sol["delta_schedule"] = cfg.solver.delta_schedule;
  sol["seed"] = cfg.solver.seed;
  sol["starts"] = cfg.solver.starts;
  doc["solver"] = sol;
  doc["output_dir"] = cfg.output_dir;
  return doc.dump(2) + "\n";
}

Mesh build_config_mesh(const RunConfig& cfg) {
  return cfg.problem.domain.dim() == 1 ? build_mesh(cfg.problem.domain, cfg.res_x)
                                       : build_mesh(cfg.problem.domain, cfg.res_x, cfg.res_y);
}

}  // namespace twophase
