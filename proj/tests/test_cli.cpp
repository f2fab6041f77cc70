// End-to-end checks of the command-line interface and its exit codes:
// 0 ok, 2 config error, 3 check failure, 4 I/O error.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "bimdecomp_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = std::string(BIMDECOMP_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::stringstream so, se;
  so << std::ifstream(out).rdbuf();
  se << std::ifstream(err).rdbuf();
  r.out = so.str();
  r.err = se.str();
  return r;
}

std::string flat_config() {
  std::ostringstream os;
  os << "chart.name = cartesian\n";
  os << "chart.coords = x, y, z\n";
  os << "chart.bounds.x = -1.0, 1.0\n";
  os << "chart.bounds.y = -1.0, 1.0\n";
  os << "chart.bounds.z = -1.0, 1.0\n";
  os << "grid.points = 9, 9, 9\n";
  os << "grid.ghosts = 2\n";
  for (const char* side : {"gEBS", "fEBS"}) {
    for (const char* c : {"11", "22", "33"})
      os << "ansatz." << side << "." << c << " = \"1\"\n";
    for (const char* c : {"12", "13", "23"})
      os << "ansatz." << side << "." << c << " = \"0\"\n";
  }
  os << "ansatz.phi_g = \"0\"\nansatz.phi_f = \"0\"\n";
  for (int c = 1; c <= 3; ++c) {
    os << "ansatz.p." << c << " = \"0\"\n";
    os << "ansatz.q." << c << " = \"0\"\n";
    os << "ansatz.gLam." << c << " = \"0\"\n";
    os << "ansatz.fLam." << c << " = \"0\"\n";
  }
  for (const char* side : {"gA", "fA"})
    for (const char* c : {"11", "12", "13", "21", "22", "23", "31", "32", "33"})
      os << "ansatz." << side << "." << c << " = \"0\"\n";
  os << "ansatz.alpha_g = \"1\"\nansatz.alpha_f = \"1\"\n";
  os << "ansatz.Kbar_g = \"0\"\nansatz.Kbar_f = \"0\"\n";
  return os.str();
}

std::string write_config(const std::string& name, const std::string& text) {
  const fs::path p = work_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

} // namespace

TEST_CASE("decompose succeeds on a valid config and writes the outputs") {
  const std::string cfg = write_config("flat.cfg", flat_config());
  const std::string out = (work_dir() / "flat_out").string();
  const RunResult r = run_cli("decompose " + cfg + " --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("decomposition complete") != std::string::npos);
  CHECK(fs::exists(out + "/decomposition.bdx"));
  CHECK(fs::exists(out + "/manifest.txt"));
  CHECK(fs::exists(out + "/g_gamma_dd.csv"));
}

TEST_CASE("summarize prints the requested sectors") {
  const std::string engine = (work_dir() / "flat_out/decomposition.bdx").string();
  if (!fs::exists(engine)) {
    const std::string cfg = write_config("flat.cfg", flat_config());
    run_cli("decompose " + cfg + " --out " + (work_dir() / "flat_out").string());
  }
  const RunResult r = run_cli("summarize " + engine + " --sectors g --at 4,4,4");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[g]") != std::string::npos);
  CHECK(r.out.find("[f]") == std::string::npos);

  const RunResult off = run_cli("summarize " + engine + " --sectors g --at 99,0,0");
  CHECK(off.exit_code == 2);
}

TEST_CASE("config errors exit with code 2 and name the key") {
  std::string broken = flat_config();
  broken += "ansatz.gEBS.21 = \"0\"\n";
  const std::string cfg = write_config("broken.cfg", broken);
  const RunResult r = run_cli("decompose " + cfg + " --out " +
                              (work_dir() / "broken_out").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("gEBS.21") != std::string::npos);
}

TEST_CASE("expression syntax errors exit with code 2") {
  std::string broken = flat_config();
  const std::string needle = "ansatz.phi_g = \"0\"";
  broken.replace(broken.find(needle), needle.size(), "ansatz.phi_g = \"1 +\"");
  const std::string cfg = write_config("syntax.cfg", broken);
  const RunResult r = run_cli("decompose " + cfg + " --out " +
                              (work_dir() / "syntax_out").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("ansatz.phi_g") != std::string::npos);
}

TEST_CASE("failed internal checks exit with code 3") {
  std::string bad = flat_config();
  const std::string needle = "ansatz.gA.12 = \"0\"";
  bad.replace(bad.find(needle), needle.size(), "ansatz.gA.12 = \"1\"");
  const std::string cfg = write_config("abort.cfg", bad);
  const RunResult r = run_cli("decompose " + cfg + " --out " +
                              (work_dir() / "abort_out").string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("asymmetric_A_bar_g") != std::string::npos);
}

TEST_CASE("missing files exit with code 4") {
  const RunResult r = run_cli("summarize " + (work_dir() / "nope.bdx").string() +
                              " --sectors g --at 0,0,0");
  CHECK(r.exit_code == 4);
  const RunResult d = run_cli("decompose " + (work_dir() / "nope.cfg").string() +
                              " --out " + (work_dir() / "x").string());
  CHECK(d.exit_code == 4);
}

TEST_CASE("export re-emits the plain dump from a snapshot") {
  const std::string engine = (work_dir() / "flat_out/decomposition.bdx").string();
  if (!fs::exists(engine)) {
    const std::string cfg = write_config("flat.cfg", flat_config());
    run_cli("decompose " + cfg + " --out " + (work_dir() / "flat_out").string());
  }
  const std::string dir = (work_dir() / "replain").string();
  const RunResult r = run_cli("export " + engine + " --plain " + dir);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir + "/g_gamma_dd.csv"));
  CHECK(fs::exists(dir + "/manifest.txt"));

  // identical bytes to the original decompose output
  std::stringstream a, b;
  a << std::ifstream(work_dir() / "flat_out/g_gamma_dd.csv").rdbuf();
  b << std::ifstream(dir + "/g_gamma_dd.csv").rdbuf();
  CHECK(a.str() == b.str());
}

TEST_CASE("check verb runs the property suites") {
  const RunResult r = run_cli("check --suite mat3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[pass]") != std::string::npos);

  const RunResult bad = run_cli("check --suite nonsense");
  CHECK(bad.exit_code == 2);
}
