#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "lrquench/cli.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path root;
  Sandbox() {
    root = fs::temp_directory_path() / ("lrq_cli_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Sandbox() { fs::remove_all(root); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(LRQ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json summary(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "summary.json")); }

}  // namespace

TEST_CASE("dispersion output") {
  Sandbox box;
  const auto out = box.root / "disp";
  REQUIRE(run("dispersion --n 16 --alpha 0.5 --out " + out.string()) == 0);
  const std::string text = slurp(out / "dispersion.csv");
  CHECK(text.rfind("# config_hash=", 0) == 0);
  CHECK(text.find("\nm,k,omega_sq,degeneracy\n0,0,0,1\n") != std::string::npos);
  CHECK(lrq::test::read_csv(out / "dispersion.csv").size() == 9);
  const auto s = summary(out);
  CHECK(s["artifact_version"] == lrq::kArtifactVersion);
  CHECK(s["subcommand"] == "dispersion");
  CHECK(s["status"] == "ok");
  CHECK(s["exit_code"] == 0);
  CHECK(s["inputs"]["n"] == "16");
  CHECK(text.find(s["config_hash"].get<std::string>()) != std::string::npos);
  CHECK(s.contains("wall_clock_seconds"));
}

TEST_CASE("invalid input exits with 2 and still writes a summary") {
  Sandbox box;
  const auto out = box.root / "bad";
  CHECK(run("dispersion --n 15 --out " + out.string()) == 2);
  const auto s = summary(out);
  CHECK(s["status"] == "error");
  CHECK(s["exit_code"] == 2);
  CHECK(!s["error"].get<std::string>().empty());
  CHECK(run("quench --r-pre 1 --r-post -1 --dt 0 --n 64 --out " + (box.root / "dt").string()) == 2);
  CHECK(summary(box.root / "dt")["exit_code"] == 2);
  CHECK(run("ground-state --r -1 --lambda 1.24 --n 100 --out " + (box.root / "ordered").string()) == 2);
  CHECK(run("dispersion --bogus") == 2);
  CHECK(run("") == 2);
}

TEST_CASE("numerical failure exits with 3 and flushes partial output") {
  Sandbox box;
  const auto out = box.root / "blowup";
  CHECK(run("quench --r-pre 1 --r-post -1 --lambda 1.24 --n 1000 --t-max 50 --dt 3 --out " + out.string()) == 3);
  CHECK(summary(out)["exit_code"] == 3);
  CHECK(slurp(out / "trajectory.csv").find("t,mu,mu_dot") != std::string::npos);
}

TEST_CASE("flags override the config file") {
  Sandbox box;
  const auto cfg = box.root / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# dispersion settings\nn = 32\nalpha = 0.25\n";
  }
  const auto a = box.root / "a", b = box.root / "b";
  REQUIRE(run("dispersion --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run("dispersion --config " + cfg.string() + " --n 16 --out " + b.string()) == 0);
  CHECK(lrq::test::read_csv(a / "dispersion.csv").size() == 17);
  CHECK(lrq::test::read_csv(b / "dispersion.csv").size() == 9);
  CHECK(summary(a)["inputs"]["alpha"] == "0.25");
  CHECK(summary(b)["inputs"]["n"] == "16");
  CHECK(summary(a)["config_hash"] != summary(b)["config_hash"]);

  const auto cfg2 = box.root / "quench.cfg";
  {
    std::ofstream f(cfg2);
    f << "r_pre = 1\nr_post = 1\nlambda = 1\nn = 64\nt_max = 0.5\n";
  }
  REQUIRE(run("quench --config " + cfg2.string() + " --out " + (box.root / "q").string()) == 0);
  CHECK(summary(box.root / "q")["inputs"]["r-post"] == "1");
  CHECK(run("dispersion --config " + (box.root / "missing.cfg").string() + " --out " +
            (box.root / "m").string()) == 2);
}

TEST_CASE("stationary quench and byte-identical reruns") {
  Sandbox box;
  const std::string args = "quench --r-pre 0.5 --r-post 0.5 --lambda 1 --n 256 --t-max 5 --ell 6 --out ";
  const auto a = box.root / "a", b = box.root / "b";
  REQUIRE(run(args + a.string()) == 0);
  REQUIRE(run(args + b.string()) == 0);
  for (const char* name : {"trajectory.csv", "entropy.csv"}) {
    CHECK(slurp(a / name) == slurp(b / name));
    CHECK(slurp(a / name).rfind("# config_hash=", 0) == 0);
  }
  const auto traj = lrq::test::read_csv(a / "trajectory.csv");
  const auto ent = lrq::test::read_csv(a / "entropy.csv");
  REQUIRE(traj.size() == 101);
  REQUIRE(ent.size() == 101);
  for (const auto& row : traj) CHECK(std::abs(row[1] - traj[0][1]) < 1e-8);
  for (const auto& row : ent) CHECK(std::abs(row[1] - ent[0][1]) < 1e-8);
  const auto s = summary(a);
  CHECK(s["resonant_modes"].empty());
  CHECK(s["t_q"].is_null());
}

TEST_CASE("resonant quench summary") {
  Sandbox box;
  const auto out = box.root / "single";
  REQUIRE(run("quench --r-pre 1 --r-post -1 --alpha 0.5 --lambda 1.24 --n 10000 --ell 10 --t-max 20 "
              "--tracked-max-m 8 --out " + out.string()) == 0);
  const auto s = summary(out);
  CHECK(s["floquet_resonant_modes"] == nlohmann::json::array({0}));
  CHECK(s["resonant_modes"] == nlohmann::json::array({0}));
  REQUIRE(s["t_q"].is_number());
  CHECK(s["t_q"].get<double>() > 0.0);
  CHECK(s["diagnostics"]["max_relative_epsilon_drift"].get<double>() < 1e-6);
}

TEST_CASE("floquet and phase-diagram outputs") {
  Sandbox box;
  const auto f = box.root / "floquet";
  REQUIRE(run("floquet --r -1 --epsilon 1.2 --mu0 -0.7 --m-max 5 --out " + f.string()) == 0);
  const std::string text = slurp(f / "floquet.csv");
  CHECK(text.find("\nm,omega_sq,trace_C,class,kappa_or_quasifreq\n0,0,") != std::string::npos);
  CHECK(text.find(",resonant,") != std::string::npos);
  CHECK(fs::exists(f / "orbit.csv"));

  const auto p = box.root / "phase";
  REQUIRE(run("phase-diagram --r -1 --alpha 0.5 --resolution 12 --threads 2 --out " + p.string()) == 0);
  const auto rows = lrq::test::read_csv(p / "phase_diagram.csv");
  CHECK(rows.size() == 144);
  std::set<int> classes;
  for (const auto& r : rows) classes.insert(static_cast<int>(r[2]));
  CHECK(classes.count(1) == 1);
  CHECK(classes.count(2) == 1);
  const auto meta = nlohmann::json::parse(slurp(p / "phase_diagram.json"));
  CHECK(meta["epsilon_points"] == 12);
}

TEST_CASE("entropy series") {
  Sandbox box;
  const auto out = box.root / "series";
  REQUIRE(run("entropy-series --r-pre 1 --r-post -1 --lambda 1.24 --n 10000 --tracked-max-m 8 --t-max 10 "
              "--ells 5,10 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "entropy_ell5.csv"));
  CHECK(fs::exists(out / "entropy_ell10.csv"));
  CHECK(lrq::test::read_csv(out / "entropy_ell5.csv").size() == 201);
}
