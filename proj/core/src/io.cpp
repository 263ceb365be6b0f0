#include "nulllab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "json.hpp"
#include "nulllab/errors.hpp"

namespace nulllab::io {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError("config " + path + ": " + msg);
}

const json& need(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path, std::string("missing key '") + key + "'");
  return obj.at(key);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(path, "unknown key '" + it.key() + "'");
  }
}

double as_num(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

double need_num(const json& obj, const std::string& path, const char* key) {
  return as_num(need(obj, path, key), path + "." + key);
}

std::string need_str(const json& obj, const std::string& path, const char* key) {
  const json& v = need(obj, path, key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::uint64_t as_uint(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    fail(path, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

mix::ScalarLaw law_from_json(const json& v, const std::string& path) {
  check_keys(v, path, {"law", "value", "a", "b", "shape", "scale", "shift"});
  const std::string kind = need_str(v, path, "law");
  if (kind == "const") {
    check_keys(v, path, {"law", "value"});
    return mix::Const{need_num(v, path, "value")};
  }
  if (kind == "uniform") {
    check_keys(v, path, {"law", "a", "b"});
    return mix::Uniform{need_num(v, path, "a"), need_num(v, path, "b")};
  }
  if (kind == "gamma") {
    check_keys(v, path, {"law", "shape", "scale", "shift"});
    mix::GammaShifted g{need_num(v, path, "shape"), need_num(v, path, "scale"), 0.0};
    if (v.contains("shift")) g.shift = as_num(v.at("shift"), path + ".shift");
    return g;
  }
  fail(path + ".law", "unknown law '" + kind + "' (expected const|uniform|gamma)");
}

json law_to_json(const mix::ScalarLaw& law) {
  return std::visit(
      [](const auto& l) -> json {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, mix::Const>) {
          return json{{"law", "const"}, {"value", l.value}};
        } else if constexpr (std::is_same_v<T, mix::Uniform>) {
          return json{{"law", "uniform"}, {"a", l.lo}, {"b", l.hi}};
        } else {
          return json{{"law", "gamma"}, {"shape", l.shape}, {"scale", l.scale}, {"shift", l.shift}};
        }
      },
      law);
}

mix::MixtureSpec model_from_json(const json& v, const std::string& path) {
  check_keys(v, path, {"u0", "sigma0_sq", "eps", "mixing", "A", "delta_n"});
  mix::MixtureSpec spec;
  spec.u0 = need_num(v, path, "u0");
  spec.sigma0_sq = need_num(v, path, "sigma0_sq");
  spec.eps = need_num(v, path, "eps");
  const json& mixing = need(v, path, "mixing");
  const std::string mpath = path + ".mixing";
  if (!mixing.is_object()) fail(mpath, "expected an object");
  const std::string type = need_str(mixing, mpath, "type");
  if (type == "point_mass") {
    check_keys(mixing, mpath, {"type", "u", "sigma_sq"});
    spec.mixing = mix::PointMass{need_num(mixing, mpath, "u"), need_num(mixing, mpath, "sigma_sq")};
  } else if (type == "product") {
    check_keys(mixing, mpath, {"type", "u", "sigma"});
    spec.mixing = mix::ProductLaw{law_from_json(need(mixing, mpath, "u"), mpath + ".u"),
                                  law_from_json(need(mixing, mpath, "sigma"), mpath + ".sigma")};
  } else {
    fail(mpath + ".type", "unknown mixing type '" + type + "' (expected point_mass|product)");
  }
  if (v.contains("A")) spec.A = as_num(v.at("A"), path + ".A");
  if (v.contains("delta_n")) spec.delta_n = as_num(v.at("delta_n"), path + ".delta_n");
  spec.validate();
  return spec;
}

json model_to_json_obj(const mix::MixtureSpec& spec) {
  json v;
  v["u0"] = spec.u0;
  v["sigma0_sq"] = spec.sigma0_sq;
  v["eps"] = spec.eps;
  if (const auto* pm = std::get_if<mix::PointMass>(&spec.mixing)) {
    v["mixing"] = json{{"type", "point_mass"}, {"u", pm->u}, {"sigma_sq", pm->sigma_sq}};
  } else {
    const auto& prod = std::get<mix::ProductLaw>(spec.mixing);
    v["mixing"] = json{{"type", "product"},
                       {"u", law_to_json(prod.u_law)},
                       {"sigma", law_to_json(prod.sigma_law)}};
  }
  if (spec.A) v["A"] = *spec.A;
  if (spec.delta_n) v["delta_n"] = *spec.delta_n;
  return v;
}

est::Config estimator_from_json(const json& v, const std::string& path) {
  check_keys(v, path, {"gamma", "family", "t_override", "clamp_sigma", "A"});
  est::Config cfg;
  if (v.contains("gamma")) cfg.gamma = as_num(v.at("gamma"), path + ".gamma");
  if (v.contains("family")) {
    const std::string fam = v.at("family").is_string() ? v.at("family").get<std::string>() : "";
    if (fam == "gem")
      cfg.family = est::Family::GEM;
    else if (fam == "gev")
      cfg.family = est::Family::GEV;
    else
      fail(path + ".family", "expected \"gem\" or \"gev\"");
  }
  if (v.contains("t_override")) cfg.t_override = as_num(v.at("t_override"), path + ".t_override");
  if (v.contains("clamp_sigma")) {
    if (!v.at("clamp_sigma").is_boolean()) fail(path + ".clamp_sigma", "expected a boolean");
    cfg.clamp_sigma = v.at("clamp_sigma").get<bool>();
  }
  if (v.contains("A")) cfg.variance_cap = as_num(v.at("A"), path + ".A");
  return cfg;
}

mc::Plan plan_from_json(const json& v, const std::string& path, const mix::MixtureSpec& spec) {
  check_keys(v, path,
             {"n_grid", "gamma_grid", "L_grid", "eps_grid", "reps", "master_seed", "pipelines"});
  mc::Plan plan;
  plan.spec = spec;

  const json& n_grid = need(v, path, "n_grid");
  if (!n_grid.is_array() || n_grid.empty()) fail(path + ".n_grid", "expected a nonempty array");
  plan.n_grid.clear();
  for (std::size_t i = 0; i < n_grid.size(); ++i)
    plan.n_grid.push_back(as_uint(n_grid[i], path + ".n_grid[" + std::to_string(i) + "]"));

  const json& g_grid = need(v, path, "gamma_grid");
  if (!g_grid.is_array() || g_grid.empty()) fail(path + ".gamma_grid", "expected a nonempty array");
  plan.gamma_grid.clear();
  for (std::size_t i = 0; i < g_grid.size(); ++i)
    plan.gamma_grid.push_back(as_num(g_grid[i], path + ".gamma_grid[" + std::to_string(i) + "]"));

  if (v.contains("L_grid")) {
    const json& l_grid = v.at("L_grid");
    if (!l_grid.is_array() || l_grid.empty()) fail(path + ".L_grid", "expected a nonempty array");
    plan.L_grid.clear();
    for (std::size_t i = 0; i < l_grid.size(); ++i)
      plan.L_grid.push_back(as_uint(l_grid[i], path + ".L_grid[" + std::to_string(i) + "]"));
  }
  if (v.contains("eps_grid")) {
    const json& e_grid = v.at("eps_grid");
    if (!e_grid.is_array()) fail(path + ".eps_grid", "expected an array");
    for (std::size_t i = 0; i < e_grid.size(); ++i)
      plan.eps_grid.push_back(as_num(e_grid[i], path + ".eps_grid[" + std::to_string(i) + "]"));
  }
  if (v.contains("reps")) plan.reps = as_uint(v.at("reps"), path + ".reps");
  if (v.contains("master_seed"))
    plan.master_seed = as_uint(v.at("master_seed"), path + ".master_seed");
  if (v.contains("pipelines")) {
    const json& pipes = v.at("pipelines");
    if (!pipes.is_array() || pipes.empty()) fail(path + ".pipelines", "expected a nonempty array");
    plan.pipelines.clear();
    for (const auto& p : pipes) {
      if (!p.is_string()) fail(path + ".pipelines", "expected strings");
      plan.pipelines.push_back(mc::pipeline_from_name(p.get<std::string>()));
    }
  }
  plan.validate();
  return plan;
}

json parse_json_text(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) throw ValidationError("config: malformed JSON");
  return v;
}

// Strict double parse of one whole token.
double parse_value(const std::string& token, std::size_t line_no) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0')) {
    throw ValidationError("input line " + std::to_string(line_no) + ": not a number: '" + token +
                          "'");
  }
  if (!std::isfinite(value)) {
    throw ValidationError("input line " + std::to_string(line_no) + ": non-finite value rejected");
  }
  return value;
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      fields.push_back(strip(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(strip(cur));
  return fields;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_samples(std::istream& in, const SampleReadOptions& opt) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t column = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip(line);
    if (body.empty() || body[0] == '#') continue;

    if (opt.csv_column) {
      const std::vector<std::string> fields = split_csv(body);
      if (!header_seen) {
        header_seen = true;
        bool found = false;
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (fields[i] == *opt.csv_column) {
            column = i;
            found = true;
            break;
          }
        }
        if (!found) {
          char* end = nullptr;
          const long idx = std::strtol(opt.csv_column->c_str(), &end, 10);
          if (end && *end == '\0' && idx >= 0 && static_cast<std::size_t>(idx) < fields.size()) {
            column = static_cast<std::size_t>(idx);
          } else {
            throw ValidationError("column '" + *opt.csv_column + "' not found in CSV header");
          }
        }
        continue;  // header row carries no data
      }
      if (column >= fields.size()) {
        throw ValidationError("input line " + std::to_string(line_no) + ": only " +
                              std::to_string(fields.size()) + " columns");
      }
      out.push_back(parse_value(fields[column], line_no));
    } else {
      out.push_back(parse_value(body, line_no));
    }
  }
  return out;
}

std::vector<double> read_sample_file(const std::string& path, const SampleReadOptions& opt) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file: " + path);
  return parse_samples(in, opt);
}

void write_sample_file(std::ostream& out, const mix::SampleSet& samples,
                       const mix::MixtureSpec& spec) {
  out << "# nulllab samples\n";
  out << "# model: " << model_to_json(spec) << "\n";
  out << "# n: " << samples.size() << "\n";
  out << "# block_L: " << samples.block_len << "\n";
  if (samples.seed) out << "# seed: " << *samples.seed << "\n";
  out << "# nulls: " << mix::null_count(spec, samples.size()) << "\n";
  for (const double v : samples.values) out << fmt17(v) << "\n";
}

std::string model_to_json(const mix::MixtureSpec& spec) {
  return model_to_json_obj(spec).dump();
}

mix::MixtureSpec model_from_json_text(const std::string& text) {
  const json v = parse_json_text(text);
  if (!v.is_object()) throw ValidationError("config: expected a JSON object");
  if (v.contains("model")) {
    const RunConfig cfg = parse_config_text(text);
    if (!cfg.model) throw ValidationError("config: missing model section");
    return *cfg.model;
  }
  return model_from_json(v, "model");
}

RunConfig parse_config_text(const std::string& text) {
  const json v = parse_json_text(text);
  check_keys(v, "$", {"model", "plan", "estimator", "output"});
  RunConfig cfg;
  if (v.contains("model")) cfg.model = model_from_json(v.at("model"), "model");
  if (v.contains("estimator")) cfg.estimator = estimator_from_json(v.at("estimator"), "estimator");
  if (v.contains("plan")) {
    if (!cfg.model) fail("plan", "a plan requires a model section");
    cfg.plan = plan_from_json(v.at("plan"), "plan", *cfg.model);
  }
  if (v.contains("output")) {
    const json& o = v.at("output");
    check_keys(o, "output", {"format", "path"});
    OutputSpec out;
    out.format = need_str(o, "output", "format");
    if (out.format != "csv" && out.format != "json")
      fail("output.format", "expected \"csv\" or \"json\"");
    out.path = need_str(o, "output", "path");
    cfg.output = out;
  }
  return cfg;
}

std::string report_to_json(const est::Report& report) {
  json v;
  v["u0_hat"] = report.u0_hat;
  v["sigma0_sq_hat"] = report.sigma0_sq_hat;
  v["eps_hat"] = report.eps_hat;
  v["t_used"] = report.t_used;
  v["gamma"] = report.gamma;
  v["n"] = report.n;
  json diag;
  diag["gchar_modulus"] = report.diagnostics.gchar_modulus;
  diag["raw_eps"] =
      json{{"re", report.diagnostics.raw_eps.real()}, {"im", report.diagnostics.raw_eps.imag()}};
  diag["raw_sigma0_sq"] = report.diagnostics.raw_sigma0_sq;
  if (report.diagnostics.variance_bound)
    diag["variance_bound"] = *report.diagnostics.variance_bound;
  else
    diag["variance_bound"] = nullptr;
  diag["warnings"] = report.diagnostics.warnings;
  v["diagnostics"] = diag;
  return v.dump(2) + "\n";
}

std::string report_to_csv(const est::Report& report) {
  std::ostringstream out;
  out << "u0_hat,sigma0_sq_hat,eps_hat,t_used,gamma,n,gchar_modulus,raw_eps_re,raw_eps_im,"
         "raw_sigma0_sq,variance_bound,warnings\n";
  out << fmt17(report.u0_hat) << ',' << fmt17(report.sigma0_sq_hat) << ','
      << fmt17(report.eps_hat) << ',' << fmt17(report.t_used) << ',' << fmt17(report.gamma) << ','
      << report.n << ',' << fmt17(report.diagnostics.gchar_modulus) << ','
      << fmt17(report.diagnostics.raw_eps.real()) << ','
      << fmt17(report.diagnostics.raw_eps.imag()) << ','
      << fmt17(report.diagnostics.raw_sigma0_sq) << ',';
  if (report.diagnostics.variance_bound) out << fmt17(*report.diagnostics.variance_bound);
  out << ',';
  out << '"';
  for (std::size_t i = 0; i < report.diagnostics.warnings.size(); ++i) {
    if (i) out << ';';
    out << report.diagnostics.warnings[i];
  }
  out << "\"\n";
  return out.str();
}

std::string result_to_csv(const mc::Result& result) {
  std::ostringstream out;
  out << "n,gamma,L,pipeline,estimator,mse,bias,sd,reps,eps\n";
  for (const mc::CellRecord& rec : result.records) {
    out << rec.n << ',' << fmt17(rec.gamma) << ',' << rec.L << ','
        << mc::pipeline_name(rec.pipeline) << ',' << rec.estimator << ',' << fmt17(rec.mse) << ','
        << fmt17(rec.bias) << ',' << fmt17(rec.sd) << ',' << rec.reps << ',' << fmt17(rec.eps)
        << '\n';
  }
  return out.str();
}

std::string result_to_json(const mc::Result& result) {
  json v;
  v["master_seed"] = result.master_seed;
  v["failure_threshold"] = result.failure_threshold;
  json cells = json::array();
  for (const mc::CellRecord& rec : result.records) {
    cells.push_back(json{{"eps", rec.eps},
                         {"n", rec.n},
                         {"gamma", rec.gamma},
                         {"L", rec.L},
                         {"pipeline", mc::pipeline_name(rec.pipeline)},
                         {"estimator", rec.estimator},
                         {"mse", rec.mse},
                         {"bias", rec.bias},
                         {"sd", rec.sd},
                         {"reps", rec.reps}});
  }
  v["cells"] = cells;
  return v.dump(2) + "\n";
}

}  // namespace nulllab::io
