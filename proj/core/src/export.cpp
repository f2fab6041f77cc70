#include "bimdecomp/export.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bimdecomp/errors.hpp"

namespace bimdecomp {

namespace {

constexpr int kEngineVersion = 1;
constexpr const char* kEngineFormat = "bimdecomp-engine-snapshot";

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sector_flags_string(const std::array<bool, 3>& of) {
  std::string s;
  const char* names[3] = {"g", "f", "h"};
  for (int i = 0; i < 3; ++i) {
    if (!of[static_cast<std::size_t>(i)]) continue;
    if (!s.empty()) s += ", ";
    s += names[i];
  }
  return s;
}

void print_components(std::ostream& os, const char* label, const GridField& f,
                      const GridSpec& spec, int i, int j, int k) {
  os << "  " << label << " =";
  for (int c = 0; c < f.ncomp; ++c) os << " " << fmt17(f.at(spec, i, j, k, c));
  os << "\n";
}

} // namespace

std::string summarize(const DecompositionResult& r, const std::array<bool, 3>& sectors,
                      const std::array<int, 3>& point) {
  const GridSpec& spec = r.grid;
  std::array<int, 3> stored_idx{};
  for (int d = 0; d < 3; ++d) {
    const auto ud = static_cast<std::size_t>(d);
    const int n = spec.points[ud];
    if (point[ud] < 0 || point[ud] >= n)
      throw PointOffGrid("summarize: point index " + std::to_string(point[ud]) +
                         " outside interior range [0," + std::to_string(n) +
                         ") along " + spec.chart.coords[ud]);
    stored_idx[ud] = spec.active[ud] ? point[ud] + spec.ghosts : 0;
  }
  const int i = stored_idx[0], j = stored_idx[1], k = stored_idx[2];
  const auto pt = spec.point(i, j, k);

  std::ostringstream os;
  os << "chart " << spec.chart.name << ", point index (" << point[0] << ","
     << point[1] << "," << point[2] << "), coordinates (" << fmt17(pt[0]) << ", "
     << fmt17(pt[1]) << ", " << fmt17(pt[2]) << ")\n";

  os << "[frame]\n";
  print_components(os, "p_u", r.frame.p_u, spec, i, j, k);
  print_components(os, "lambda", r.frame.lambda, spec, i, j, k);
  print_components(os, "boost", r.frame.boost, spec, i, j, k);
  print_components(os, "rotation", r.frame.rotation, spec, i, j, k);
  print_components(os, "L", r.frame.L, spec, i, j, k);

  const auto print_sector = [&](const char* name, const SectorResult& s) {
    os << "[" << name << "]\n";
    print_components(os, "phi", s.phi, spec, i, j, k);
    print_components(os, "lapse", s.lapse, spec, i, j, k);
    print_components(os, "Kbar", s.kbar, spec, i, j, k);
    print_components(os, "vielbeinc", s.vielbein_conf, spec, i, j, k);
    print_components(os, "gamma_dd", s.gamma_dd, spec, i, j, k);
    print_components(os, "gammac_dd", s.gammac_dd, spec, i, j, k);
    print_components(os, "A_ud", s.a_ud, spec, i, j, k);
    print_components(os, "K_dd", s.k_dd, spec, i, j, k);
    print_components(os, "K_trace", s.k_trace, spec, i, j, k);
    print_components(os, "shift_u", s.shift_u, spec, i, j, k);
    print_components(os, "Lam_u", s.lam_u, spec, i, j, k);
    if (s.has_geometry) {
      print_components(os, "Lamc_u", s.lamc_u, spec, i, j, k);
      print_components(os, "Riccic_dd", s.riccic_dd, spec, i, j, k);
    }
  };
  if (sectors[0]) print_sector("g", r.g);
  if (sectors[1]) print_sector("f", r.f);
  if (sectors[2]) {
    os << "[h]\n";
    print_components(os, "gamma_dd", r.h.gamma_dd, spec, i, j, k);
    print_components(os, "gammac_dd", r.h.gammac_dd, spec, i, j, k);
    print_components(os, "shift_u", r.h.shift_u, spec, i, j, k);
    if (r.h.has_geometry) {
      print_components(os, "Lamc_u", r.h.lamc_u, spec, i, j, k);
      print_components(os, "Riccic_dd", r.h.riccic_dd, spec, i, j, k);
    }
  }
  return os.str();
}

std::string export_plain(const DecompositionResult& r, const std::string& out_dir,
                         const std::string& name_prefix) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("export_plain: cannot create directory '" + out_dir + "'");

  const GridSpec& spec = r.grid;
  const auto fields = named_fields(r);

  for (const NamedField& nf : fields) {
    const std::string path = out_dir + "/" + name_prefix + nf.name + ".csv";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("export_plain: cannot open '" + path + "'");
    os << "# field=" << nf.name << " chart=" << spec.chart.name << " shape="
       << spec.points[0] << "," << spec.points[1] << "," << spec.points[2]
       << " components=" << nf.field->ncomp << " index_flags="
       << (nf.field->index_flags.empty() ? "scalar" : nf.field->index_flags)
       << "\n";
    for (int i = 0; i < spec.stored[0]; ++i) {
      if (!spec.interior_index(0, i)) continue;
      for (int j = 0; j < spec.stored[1]; ++j) {
        if (!spec.interior_index(1, j)) continue;
        for (int k = 0; k < spec.stored[2]; ++k) {
          if (!spec.interior_index(2, k)) continue;
          const auto pt = spec.point(i, j, k);
          os << fmt17(pt[0]) << "," << fmt17(pt[1]) << "," << fmt17(pt[2]);
          for (int c = 0; c < nf.field->ncomp; ++c)
            os << "," << fmt17(nf.field->at(spec, i, j, k, c));
          os << "\n";
        }
      }
    }
    if (!os) throw IoError("export_plain: write failure on '" + path + "'");
  }

  const std::string manifest_path = out_dir + "/" + name_prefix + "manifest.txt";
  std::ofstream m(manifest_path, std::ios::binary);
  if (!m) throw IoError("export_plain: cannot open '" + manifest_path + "'");
  m << "bimdecomp plain export\n";
  m << "version = 1\n";
  m << "chart = " << spec.chart.name << "\n";
  m << "coords = " << spec.chart.coords[0] << ", " << spec.chart.coords[1] << ", "
    << spec.chart.coords[2] << "\n";
  m << "shape = " << spec.points[0] << ", " << spec.points[1] << ", "
    << spec.points[2] << "\n";
  m << "ghosts = " << spec.ghosts << "\n";
  m << "spacing = " << fmt17(spec.spacing[0]) << ", " << fmt17(spec.spacing[1])
    << ", " << fmt17(spec.spacing[2]) << "\n";
  m << "sqrt_algorithm = " << to_string(r.config.sqrt_algorithm) << "\n";
  m << "compute_geometry_of = " << sector_flags_string(r.config.geometry_of) << "\n";
  for (std::size_t n = 0; n < r.config.param_names.size(); ++n)
    m << "param " << r.config.param_names[n] << " = "
      << fmt17(r.config.param_values[n]) << "\n";
  if (!r.config.unused_coordinates.empty()) {
    m << "unused_coordinates =";
    for (const std::string& c : r.config.unused_coordinates) m << " " << c;
    m << "\n";
  }
  const ToleranceProfile& t = r.config.tol;
  m << "tolerances:\n";
  m << "  spd_rel = " << fmt17(t.spd_rel) << "\n";
  m << "  k_branch_rel = " << fmt17(t.k_branch_rel) << "\n";
  m << "  degenerate_den = " << fmt17(t.degenerate_den) << "\n";
  m << "  det_rel = " << fmt17(t.det_rel) << "\n";
  m << "  orth = " << fmt17(t.orth) << "\n";
  m << "  sym = " << fmt17(t.sym) << "\n";
  m << "  lowered_a = " << fmt17(t.lowered_a) << "\n";
  m << "  mean_property = " << fmt17(t.mean_property) << "\n";
  m << "  shift_identity = " << fmt17(t.shift_identity) << "\n";
  m << "  clamp_slack = " << fmt17(t.clamp_slack) << "\n";
  m << "fields:\n";
  for (const NamedField& nf : fields)
    m << "  " << nf.name << " file=" << name_prefix << nf.name
      << ".csv components=" << nf.field->ncomp << " index_flags="
      << (nf.field->index_flags.empty() ? "scalar" : nf.field->index_flags) << "\n";
  m << "validation:\n";
  for (const ValidationEntry& v : r.report) {
    m << "  " << v.name << " value=" << fmt17(v.value);
    if (v.informational)
      m << " status=info";
    else
      m << " threshold=" << fmt17(v.threshold)
        << " status=" << (v.pass ? "pass" : "FAIL");
    m << "\n";
  }
  m << "notes:\n";
  m << "  no determinant constraint is imposed on the conformal metrics\n";
  m << "  background connections are treated as time-independent\n";
  if (!m) throw IoError("export_plain: write failure on '" + manifest_path + "'");
  return manifest_path;
}

void export_engine(const DecompositionResult& r, const std::string& path) {
  nlohmann::ordered_json j;
  j["format"] = kEngineFormat;
  j["version"] = kEngineVersion;
  j["config_text"] = r.config.raw_text;
  j["geometry_of"] = {r.config.geometry_of[0], r.config.geometry_of[1],
                      r.config.geometry_of[2]};
  nlohmann::ordered_json jf = nlohmann::ordered_json::array();
  for (const NamedField& nf : named_fields(r)) {
    nlohmann::ordered_json e;
    e["name"] = nf.name;
    e["ncomp"] = nf.field->ncomp;
    e["index_flags"] = nf.field->index_flags;
    e["symmetric"] = nf.field->symmetric;
    e["values"] = nf.field->values;
    jf.push_back(std::move(e));
  }
  j["fields"] = std::move(jf);
  nlohmann::ordered_json jv = nlohmann::ordered_json::array();
  for (const ValidationEntry& v : r.report) {
    nlohmann::ordered_json e;
    e["name"] = v.name;
    e["value"] = v.value;
    e["threshold"] = v.threshold;
    e["informational"] = v.informational;
    e["pass"] = v.pass;
    jv.push_back(std::move(e));
  }
  j["validation"] = std::move(jv);

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("export_engine: cannot open '" + path + "'");
  os << j.dump(1) << "\n";
  if (!os) throw IoError("export_engine: write failure on '" + path + "'");
}

DecompositionResult import_engine(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("import_engine: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("import_engine: malformed snapshot: ") + e.what());
  }

  try {
    if (!j.contains("format") || j["format"] != kEngineFormat)
      throw IoError("import_engine: not an engine snapshot");
    if (!j.contains("version") || !j["version"].is_number_integer() ||
        j["version"].get<int>() != kEngineVersion)
      throw VersionMismatch("import_engine: snapshot version " +
                            (j.contains("version") ? j["version"].dump()
                                                   : std::string("<missing>")) +
                            ", expected " + std::to_string(kEngineVersion));

    DecompositionResult r;
    r.config = parse_config_text(j.at("config_text").get<std::string>());
    r.grid = GridSpec::create(r.config.chart, r.config.points, r.config.ghosts);
    const auto of = j.at("geometry_of");
    r.g.has_geometry = of.at(0).get<bool>();
    r.f.has_geometry = of.at(1).get<bool>();
    r.h.has_geometry = of.at(2).get<bool>();

    std::map<std::string, const nlohmann::json*> by_name;
    for (const auto& e : j.at("fields"))
      by_name[e.at("name").get<std::string>()] = &e;

    for (NamedFieldMut& nf : named_fields_mut(r)) {
      const auto it = by_name.find(nf.name);
      if (it == by_name.end())
        throw IoError("import_engine: snapshot is missing field '" + nf.name + "'");
      const nlohmann::json& e = *it->second;
      GridField f;
      f.stored = r.grid.stored;
      f.ncomp = e.at("ncomp").get<int>();
      f.index_flags = e.at("index_flags").get<std::string>();
      f.symmetric = e.at("symmetric").get<bool>();
      f.values = e.at("values").get<std::vector<double>>();
      if (f.values.size() !=
          r.grid.total_stored() * static_cast<std::size_t>(f.ncomp))
        throw IoError("import_engine: field '" + nf.name + "' has wrong size");
      *nf.field = std::move(f);
      by_name.erase(it);
    }
    if (!by_name.empty())
      throw IoError("import_engine: snapshot has unknown field '" +
                    by_name.begin()->first + "'");

    for (const auto& e : j.at("validation")) {
      ValidationEntry v;
      v.name = e.at("name").get<std::string>();
      v.value = e.at("value").get<double>();
      v.threshold = e.at("threshold").get<double>();
      v.informational = e.at("informational").get<bool>();
      v.pass = e.at("pass").get<bool>();
      r.report.push_back(std::move(v));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("import_engine: malformed snapshot: ") + e.what());
  }
}

bool results_equal(const DecompositionResult& a, const DecompositionResult& b) {
  const auto fa = named_fields(a);
  const auto fb = named_fields(b);
  if (fa.size() != fb.size()) return false;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (fa[i].name != fb[i].name) return false;
    const GridField& x = *fa[i].field;
    const GridField& y = *fb[i].field;
    if (x.ncomp != y.ncomp || x.index_flags != y.index_flags ||
        x.symmetric != y.symmetric || x.values != y.values)
      return false;
  }
  if (a.report.size() != b.report.size()) return false;
  for (std::size_t i = 0; i < a.report.size(); ++i) {
    if (a.report[i].name != b.report[i].name ||
        a.report[i].value != b.report[i].value ||
        a.report[i].pass != b.report[i].pass)
      return false;
  }
  return true;
}

} // namespace bimdecomp
