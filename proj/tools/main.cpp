#include <array>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bimdecomp/config.hpp"
#include "bimdecomp/errors.hpp"
#include "bimdecomp/export.hpp"
#include "bimdecomp/pipeline.hpp"
#include "bimdecomp/selftest.hpp"

namespace {

// 0 ok, 2 config error, 3 check failure, 4 I/O error.
constexpr int kExitConfig = 2;
constexpr int kExitCheck = 3;
constexpr int kExitIo = 4;

std::array<bool, 3> parse_sectors(const std::string& csv) {
  std::array<bool, 3> out{false, false, false};
  std::string cur;
  for (std::size_t i = 0; i <= csv.size(); ++i) {
    if (i == csv.size() || csv[i] == ',') {
      if (cur == "g") out[0] = true;
      else if (cur == "f") out[1] = true;
      else if (cur == "h") out[2] = true;
      else if (!cur.empty())
        throw bimdecomp::ConfigError("--sectors: expected subset of g,f,h");
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(csv[i]))) {
      cur += csv[i];
    }
  }
  return out;
}

void print_report(const bimdecomp::DecompositionResult& r) {
  for (const auto& v : r.report) {
    if (v.informational)
      std::printf("  [info] %-34s %.6e\n", v.name.c_str(), v.value);
    else
      std::printf("  [%s] %-34s %.6e (threshold %.1e)\n", v.pass ? "pass" : "FAIL",
                  v.name.c_str(), v.value, v.threshold);
  }
}

int run_suites(const std::string& which) {
  std::vector<bimdecomp::SelfTestResult> results;
  const auto append = [&](std::vector<bimdecomp::SelfTestResult> v) {
    results.insert(results.end(), v.begin(), v.end());
  };
  if (which == "mat3" || which == "all") append(bimdecomp::selftest_mat3(2000));
  if (which == "frame" || which == "all") append(bimdecomp::selftest_frame(2000));
  if (which == "geometry" || which == "all") append(bimdecomp::selftest_geometry());
  if (results.empty())
    throw bimdecomp::ConfigError("--suite: expected mat3, frame, geometry or all");

  bool ok = true;
  for (const auto& r : results) {
    std::printf("[%s] %-28s worst %.3e (bound %.1e)\n", r.pass ? "pass" : "FAIL",
                r.name.c_str(), r.worst, r.bound);
    ok = ok && r.pass;
  }
  return ok ? 0 : kExitCheck;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bimdecomp: pointwise 3+1 bimetric decomposition of a BSSN ansatz on a "
      "chart"};
  app.require_subcommand(1);

  std::string config_path, out_dir, engine_path, sectors_csv = "g,f,h";
  std::string at_csv = "0,0,0", suite = "all", plain_dir;

  CLI::App* dec = app.add_subcommand("decompose",
                                     "run the decomposition for a config file");
  dec->add_option("config", config_path, "config file")->required();
  dec->add_option("--out", out_dir, "output directory")->required();

  CLI::App* sum = app.add_subcommand("summarize",
                                     "print the main variables at a grid point");
  sum->add_option("engine-file", engine_path, "engine snapshot")->required();
  sum->add_option("--sectors", sectors_csv, "comma list from g,f,h");
  sum->add_option("--at", at_csv, "interior grid indexes i,j,k");

  CLI::App* chk = app.add_subcommand("check", "run the built-in property suites");
  chk->add_option("--suite", suite, "mat3, frame, geometry or all");

  CLI::App* exp = app.add_subcommand("export",
                                     "re-export an engine snapshot as plain CSV");
  exp->add_option("engine-file", engine_path, "engine snapshot")->required();
  exp->add_option("--plain", plain_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (dec->parsed()) {
      const bimdecomp::AnsatzConfig cfg = bimdecomp::load_config(config_path);
      const bimdecomp::DecompositionResult r = bimdecomp::run_decomposition(cfg);
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec)
        throw bimdecomp::IoError("cannot create output directory '" + out_dir + "'");
      bimdecomp::export_engine(r, out_dir + "/decomposition.bdx");
      const std::string manifest = bimdecomp::export_plain(r, out_dir, "");
      std::printf("decomposition complete: chart %s, grid %dx%dx%d\n",
                  r.grid.chart.name.c_str(), r.grid.points[0], r.grid.points[1],
                  r.grid.points[2]);
      if (!cfg.unused_coordinates.empty()) {
        std::printf("note: coordinates never referenced by the ansatz:");
        for (const auto& c : cfg.unused_coordinates) std::printf(" %s", c.c_str());
        std::printf("\n");
      }
      print_report(r);
      std::printf("manifest: %s\n", manifest.c_str());
      for (const auto& v : r.report)
        if (!v.informational && !v.pass) return kExitCheck;
      return 0;
    }
    if (sum->parsed()) {
      const bimdecomp::DecompositionResult r = bimdecomp::import_engine(engine_path);
      std::array<int, 3> at{0, 0, 0};
      if (std::sscanf(at_csv.c_str(), "%d,%d,%d", &at[0], &at[1], &at[2]) != 3)
        throw bimdecomp::ConfigError("--at: expected three integers i,j,k");
      std::fputs(bimdecomp::summarize(r, parse_sectors(sectors_csv), at).c_str(),
                 stdout);
      return 0;
    }
    if (chk->parsed()) return run_suites(suite);
    if (exp->parsed()) {
      const bimdecomp::DecompositionResult r = bimdecomp::import_engine(engine_path);
      const std::string manifest = bimdecomp::export_plain(r, plain_dir, "");
      std::printf("manifest: %s\n", manifest.c_str());
      return 0;
    }
  } catch (const bimdecomp::CheckFailure& e) {
    std::fprintf(stderr, "check failure: %s\n", e.what());
    return kExitCheck;
  } catch (const bimdecomp::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const bimdecomp::SyntaxError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const bimdecomp::UnknownSymbol& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const bimdecomp::VersionMismatch& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const bimdecomp::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const bimdecomp::PointOffGrid& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const bimdecomp::Error& e) {
    std::fprintf(stderr, "check failure: %s\n", e.what());
    return kExitCheck;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
