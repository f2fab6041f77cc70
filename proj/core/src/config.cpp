#include "bimdecomp/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "bimdecomp/errors.hpp"
#include "bimdecomp/grid.hpp"

namespace bimdecomp {

const char* to_string(SqrtAlgorithm a) {
  switch (a) {
    case SqrtAlgorithm::ClosedForm: return "closed_form";
    case SqrtAlgorithm::Eigen: return "eigen";
    case SqrtAlgorithm::Polar: return "polar";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_number(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_number(key, v);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x)
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  return i;
}

// Key/value store preserving file order, with consumption tracking so
// leftovers can be rejected as typos.
class KeyStore {
public:
  void insert(const std::string& key, const std::string& value, int line) {
    if (map_.count(key))
      throw ConfigError("config key '" + key + "' appears more than once (line " +
                        std::to_string(line) + ")");
    map_[key] = value;
  }

  bool has(const std::string& key) const { return map_.count(key) != 0; }

  std::string take(const std::string& key) {
    const auto it = map_.find(key);
    if (it == map_.end())
      throw ConfigError("missing required config key '" + key + "'");
    consumed_.insert(consumed_.end(), key);
    return it->second;
  }

  std::string take_or(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    return take(key);
  }

  // All keys with the given prefix, in lexicographic order.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : map_)
      if (k.rfind(prefix, 0) == 0) out.push_back(k);
    return out;
  }

  void reject_leftovers() const {
    for (const auto& [k, v] : map_) {
      if (std::find(consumed_.begin(), consumed_.end(), k) == consumed_.end())
        throw ConfigError("unknown key '" + k + "' in config");
    }
  }

private:
  std::map<std::string, std::string> map_;
  std::vector<std::string> consumed_;
};

// Expression values must be double-quoted; strips the quotes.
std::string unquote(const std::string& key, const std::string& v) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"')
    throw ConfigError("config key '" + key +
                      "': expression values must be double-quoted");
  return v.substr(1, v.size() - 2);
}

ExprField parse_expr_field(const std::string& key, const std::string& quoted,
                           const Chart& chart,
                           const std::vector<std::string>& params) {
  ExprField f;
  f.src = unquote(key, quoted);
  try {
    f.ast = parse(f.src, chart, params);
  } catch (const SyntaxError& e) {
    throw SyntaxError("config key '" + key + "': " + e.what(), e.offset());
  } catch (const UnknownSymbol& e) {
    throw UnknownSymbol("config key '" + key + "': " + e.what());
  }
  return f;
}

const std::array<const char*, 6> kSymKeys = {"11", "12", "13", "22", "23", "33"};
const std::array<const char*, 3> kLowerTriangle = {"21", "31", "32"};
const std::array<const char*, 9> kMatKeys = {"11", "12", "13", "21", "22",
                                             "23", "31", "32", "33"};

} // namespace

AnsatzConfig parse_config_text(const std::string& text) {
  KeyStore store;
  {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      // strip comments, respecting quoted strings
      bool in_quote = false;
      std::string stripped;
      for (char c : line) {
        if (c == '"') in_quote = !in_quote;
        if (c == '#' && !in_quote) break;
        stripped += c;
      }
      stripped = trim(stripped);
      if (stripped.empty()) continue;
      const auto eq = stripped.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": expected 'section.key = value'");
      const std::string key = trim(stripped.substr(0, eq));
      const std::string value = trim(stripped.substr(eq + 1));
      if (key.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
      store.insert(key, value, lineno);
    }
  }

  AnsatzConfig cfg;
  cfg.raw_text = text;

  // ---- chart ----
  cfg.chart.name = store.take("chart.name");
  {
    const auto coords = split_list(store.take("chart.coords"));
    if (coords.size() != 3)
      throw ConfigError("chart.coords: exactly 3 coordinate names required");
    for (int i = 0; i < 3; ++i) cfg.chart.coords[static_cast<std::size_t>(i)] = coords[static_cast<std::size_t>(i)];
    for (int i = 0; i < 3; ++i) {
      const std::string key = "chart.bounds." + coords[static_cast<std::size_t>(i)];
      const auto b = split_list(store.take(key));
      if (b.size() != 2) throw ConfigError(key + ": expected 'lower, upper'");
      cfg.chart.lower[static_cast<std::size_t>(i)] = parse_number(key, b[0]);
      cfg.chart.upper[static_cast<std::size_t>(i)] = parse_number(key, b[1]);
    }
    for (const std::string& name : split_list(store.take_or("chart.positive", ""))) {
      const int ci = cfg.chart.coord_index(name);
      if (ci < 0)
        throw ConfigError("chart.positive: '" + name + "' is not a chart coordinate");
      cfg.chart.strictly_positive[static_cast<std::size_t>(ci)] = true;
    }
  }
  cfg.chart.validate();

  // ---- grid ----
  {
    const auto pts = split_list(store.take("grid.points"));
    if (pts.size() != 3) throw ConfigError("grid.points: expected three integers");
    for (int i = 0; i < 3; ++i)
      cfg.points[static_cast<std::size_t>(i)] = parse_int("grid.points", pts[static_cast<std::size_t>(i)]);
    cfg.ghosts = parse_int("grid.ghosts", store.take_or("grid.ghosts", "2"));
  }

  // ---- params (optional, free names) ----
  for (const std::string& key : store.keys_with_prefix("params.")) {
    const std::string name = key.substr(7);
    if (name.empty()) throw ConfigError("params: empty parameter name");
    if (cfg.chart.coord_index(name) >= 0)
      throw ConfigError("params." + name + ": shadows a chart coordinate");
    cfg.param_names.push_back(name);
    cfg.param_values.push_back(parse_number(key, store.take(key)));
  }

  // ---- ansatz ----
  const auto expr_at = [&](const std::string& key) {
    return parse_expr_field(key, store.take(key), cfg.chart, cfg.param_names);
  };

  for (const char* lt : kLowerTriangle) {
    for (const char* side : {"gEBS", "fEBS"}) {
      const std::string key = std::string("ansatz.") + side + "." + lt;
      if (store.has(key))
        throw ConfigError("config key '" + key +
                          "': vielbeins are upper triangular, lower-triangle "
                          "entries are forbidden");
    }
  }

  cfg.phi_g = expr_at("ansatz.phi_g");
  cfg.phi_f = expr_at("ansatz.phi_f");
  for (int c = 0; c < 6; ++c) {
    cfg.g_vielbein_conf[static_cast<std::size_t>(c)] =
        expr_at(std::string("ansatz.gEBS.") + kSymKeys[static_cast<std::size_t>(c)]);
    cfg.f_vielbein_conf[static_cast<std::size_t>(c)] =
        expr_at(std::string("ansatz.fEBS.") + kSymKeys[static_cast<std::size_t>(c)]);
  }
  for (int c = 0; c < 3; ++c) {
    cfg.p[static_cast<std::size_t>(c)] = expr_at("ansatz.p." + std::to_string(c + 1));
    cfg.q[static_cast<std::size_t>(c)] = expr_at("ansatz.q." + std::to_string(c + 1));
    cfg.g_lambda[static_cast<std::size_t>(c)] =
        expr_at("ansatz.gLam." + std::to_string(c + 1));
    cfg.f_lambda[static_cast<std::size_t>(c)] =
        expr_at("ansatz.fLam." + std::to_string(c + 1));
  }
  for (int c = 0; c < 9; ++c) {
    cfg.g_a_ud[static_cast<std::size_t>(c)] =
        expr_at(std::string("ansatz.gA.") + kMatKeys[static_cast<std::size_t>(c)]);
    cfg.f_a_ud[static_cast<std::size_t>(c)] =
        expr_at(std::string("ansatz.fA.") + kMatKeys[static_cast<std::size_t>(c)]);
  }
  cfg.alpha_g = expr_at("ansatz.alpha_g");
  cfg.alpha_f = expr_at("ansatz.alpha_f");
  cfg.kbar_g = expr_at("ansatz.Kbar_g");
  cfg.kbar_f = expr_at("ansatz.Kbar_f");

  // ---- backgrounds (each block optional; all-or-nothing per sector) ----
  const auto load_background = [&](const char* sector, std::array<ExprField, 6>& dst) {
    const std::string prefix = std::string("background.") + sector + ".";
    bool any = false, all = true;
    for (const char* c : kSymKeys) {
      if (store.has(prefix + c)) any = true;
      else all = false;
    }
    if (any && !all)
      throw ConfigError("background." + std::string(sector) +
                        ": all six components 11,12,13,22,23,33 are required "
                        "when the block is present");
    if (!any) {
      for (int c = 0; c < 6; ++c) {
        const bool diag = (c == 0 || c == 3 || c == 5);
        dst[static_cast<std::size_t>(c)].src = diag ? "1" : "0";
        dst[static_cast<std::size_t>(c)].ast =
            parse(dst[static_cast<std::size_t>(c)].src, cfg.chart, cfg.param_names);
      }
      return;
    }
    for (int c = 0; c < 6; ++c)
      dst[static_cast<std::size_t>(c)] =
          expr_at(prefix + kSymKeys[static_cast<std::size_t>(c)]);
  };
  load_background("g", cfg.bg_g);
  load_background("f", cfg.bg_f);
  load_background("h", cfg.bg_h);

  // ---- options ----
  {
    const std::string alg = store.take_or("options.sqrt_algorithm", "closed_form");
    if (alg == "closed_form") cfg.sqrt_algorithm = SqrtAlgorithm::ClosedForm;
    else if (alg == "eigen") cfg.sqrt_algorithm = SqrtAlgorithm::Eigen;
    else if (alg == "polar") cfg.sqrt_algorithm = SqrtAlgorithm::Polar;
    else
      throw ConfigError(
          "options.sqrt_algorithm: expected closed_form, eigen or polar, got '" +
          alg + "'");

    cfg.geometry_of = {false, false, false};
    const std::string of = store.take_or("options.compute_geometry_of", "g, f");
    for (const std::string& s : split_list(of)) {
      if (s == "g") cfg.geometry_of[0] = true;
      else if (s == "f") cfg.geometry_of[1] = true;
      else if (s == "h") cfg.geometry_of[2] = true;
      else
        throw ConfigError("options.compute_geometry_of: expected subset of g,f,h");
    }

    const auto tol_key = [&](const char* name, double& slot) {
      const std::string key = std::string("options.tol.") + name;
      if (store.has(key)) slot = parse_number(key, store.take(key));
    };
    tol_key("spd_rel", cfg.tol.spd_rel);
    tol_key("k_branch_rel", cfg.tol.k_branch_rel);
    tol_key("degenerate_den", cfg.tol.degenerate_den);
    tol_key("det_rel", cfg.tol.det_rel);
    tol_key("orth", cfg.tol.orth);
    tol_key("sym", cfg.tol.sym);
    tol_key("lowered_a", cfg.tol.lowered_a);
    tol_key("mean_property", cfg.tol.mean_property);
    tol_key("shift_identity", cfg.tol.shift_identity);
    tol_key("clamp_slack", cfg.tol.clamp_slack);
  }

  store.reject_leftovers();

  // Validate grid geometry now so bad configs fail before any computation.
  (void)GridSpec::create(cfg.chart, cfg.points, cfg.ghosts);

  // AutoDetect: which coordinates the ansatz actually uses.
  std::array<bool, 3> used{false, false, false};
  {
    const auto scan = [&](const ExprField& f) {
      if (!f.ast) return;
      const auto u = referenced_coords(f.ast);
      for (int i = 0; i < 3; ++i) used[static_cast<std::size_t>(i)] =
          used[static_cast<std::size_t>(i)] || u[static_cast<std::size_t>(i)];
    };
    scan(cfg.phi_g); scan(cfg.phi_f);
    for (const auto& f : cfg.g_vielbein_conf) scan(f);
    for (const auto& f : cfg.f_vielbein_conf) scan(f);
    for (const auto& f : cfg.p) scan(f);
    for (const auto& f : cfg.q) scan(f);
    for (const auto& f : cfg.g_a_ud) scan(f);
    for (const auto& f : cfg.f_a_ud) scan(f);
    for (const auto& f : cfg.g_lambda) scan(f);
    for (const auto& f : cfg.f_lambda) scan(f);
    scan(cfg.alpha_g); scan(cfg.alpha_f); scan(cfg.kbar_g); scan(cfg.kbar_f);
    for (int i = 0; i < 3; ++i)
      if (!used[static_cast<std::size_t>(i)])
        cfg.unused_coordinates.push_back(cfg.chart.coords[static_cast<std::size_t>(i)]);
  }

  // Derivatives along a single-point dimension are identically zero, so
  // chart geometry would silently drop terms for any field that actually
  // varies along it.  Reject that combination up front.
  if (cfg.geometry_of[0] || cfg.geometry_of[1] || cfg.geometry_of[2]) {
    std::array<bool, 3> used_any = used;
    const auto scan_bg = [&](const std::array<ExprField, 6>& bg) {
      for (const auto& f : bg) {
        const auto u = referenced_coords(f.ast);
        for (int i = 0; i < 3; ++i) used_any[static_cast<std::size_t>(i)] =
            used_any[static_cast<std::size_t>(i)] || u[static_cast<std::size_t>(i)];
      }
    };
    scan_bg(cfg.bg_g);
    scan_bg(cfg.bg_f);
    scan_bg(cfg.bg_h);
    for (int i = 0; i < 3; ++i)
      if (cfg.points[static_cast<std::size_t>(i)] == 1 &&
          used_any[static_cast<std::size_t>(i)])
        throw ConfigError(
            "coordinate '" + cfg.chart.coords[static_cast<std::size_t>(i)] +
            "' appears in the ansatz or background but its grid dimension "
            "has a single point; give it at least 9 points or drop "
            "options.compute_geometry_of");
  }

  return cfg;
}

AnsatzConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

} // namespace bimdecomp
