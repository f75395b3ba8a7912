#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "szwalk_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  const fs::path log = work_dir() / "out.log";
  const std::string cmd =
      std::string(SZWALK_BIN_PATH) + " " + args + " > " + log.string() +
      " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream ss;
  ss << in.rdbuf();
  int code = -1;
  if (status != -1) code = WEXITSTATUS(status);
  return {code, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("info") {
  const auto r = run("info --graph cycle --size 4 --coin grover");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("vertices: 4") != std::string::npos);
  CHECK(r.output.find("arcs: 8") != std::string::npos);

  const auto torus = run("info --graph torus3d --size 3 --coin lattice3d");
  CHECK(torus.exit_code == 0);
  CHECK(torus.output.find("dim_v (sum p_u): 54") != std::string::npos);

  const auto missing = run("info --graph cycle --size 4");
  CHECK(missing.exit_code == 2);
  CHECK(missing.output.find("--coin") != std::string::npos);
}

TEST_CASE("converge: band check drives the exit status") {
  const fs::path base = work_dir() / "k3";
  const auto ok = run("converge --graph complete --size 3 --coin grover "
                      "--t 1 --n-list 16,32,64,128,256,512,1024 --out " +
                      base.string());
  CHECK(ok.exit_code == 0);
  CHECK(fs::exists(base.string() + ".csv"));
  CHECK(fs::exists(base.string() + ".json"));
  const std::string json = slurp(base.string() + ".json");
  CHECK(json.find("\"slope\":") != std::string::npos);

  // the grover walk on C4 is superconvergent (slope ~ -2), which the band
  // check reports as out of range
  const auto c4 = run("converge --graph cycle --size 4 --coin grover --t 1 "
                      "--n-list 16,64,256");
  CHECK(c4.exit_code == 1);
  CHECK(c4.output.find("outside") != std::string::npos);

  const auto exact = run("converge --graph complete --size 3 --coin grover "
                         "--t 0 --n-list 16,32");
  CHECK(exact.exit_code == 0);
  CHECK(exact.output.find("\"exact\":true") != std::string::npos);

  const auto single = run("converge --graph complete --size 3 --coin grover "
                          "--t 1 --n-list 64");
  CHECK(single.exit_code == 0);
  CHECK(single.output.find("warning") != std::string::npos);

  const auto bad = run("converge --graph complete --size 3 --coin grover "
                       "--t 1 --n-list 64,32");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("converge output is byte-identical across runs") {
  const fs::path a = work_dir() / "runA";
  const fs::path b = work_dir() / "runB";
  const std::string common =
      "converge --graph cycle --size 5 --coin grover --t 1 "
      "--n-list 16,32,64 --seed 24301 --out ";
  REQUIRE(run(common + a.string()).exit_code == 0);
  REQUIRE(run(common + b.string()).exit_code == 0);
  CHECK(slurp(a.string() + ".csv") == slurp(b.string() + ".csv"));
  CHECK(slurp(a.string() + ".json") == slurp(b.string() + ".json"));
  CHECK(!slurp(a.string() + ".csv").empty());
}

TEST_CASE("spectrum") {
  const auto k3 = run("spectrum --graph complete --size 3 --coin grover");
  CHECK(k3.exit_code == 0);
  CHECK(k3.output.find("\"pass\":true") != std::string::npos);

  const auto p2 = run("spectrum --graph path --size 2 --coin grover");
  CHECK(p2.exit_code == 0);
  CHECK(p2.output.find("\"lambda\":-1,\"mult_predicted\":1,\"mult_computed\":1") !=
        std::string::npos);
  CHECK(p2.output.find("\"lambda\":1,\"mult_predicted\":1,\"mult_computed\":1") !=
        std::string::npos);

  const auto torus = run("spectrum --graph torus3d --size 3 --coin lattice3d");
  CHECK(torus.exit_code == 0);
  CHECK(torus.output.find("\"pass\":true") != std::string::npos);

  // deterministic output
  const fs::path s1 = work_dir() / "spec1.json";
  const fs::path s2 = work_dir() / "spec2.json";
  run("spectrum --graph cycle --size 5 --coin grover --out " + s1.string());
  run("spectrum --graph cycle --size 5 --coin grover --out " + s2.string());
  CHECK(slurp(s1) == slurp(s2));
}

TEST_CASE("evolve") {
  const auto both =
      run("evolve --graph cycle --size 4 --coin grover --state vertex:0 "
          "--t 1 --steps 512");
  CHECK(both.exit_code == 0);
  // max_abs_diff is the per-arc gap between the walk and its continuous
  // limit; at N = 512 it is far below the 0.01 scale
  const auto pos = both.output.find("\"max_abs_diff\":");
  REQUIRE(pos != std::string::npos);
  const double diff = std::stod(both.output.substr(pos + 16));
  CHECK(diff < 0.01);

  const auto frozen =
      run("evolve --graph cycle --size 4 --coin grover --state arc:0 "
          "--t 0 --steps 0");
  CHECK(frozen.exit_code == 0);
  const auto dpos = frozen.output.find("\"max_abs_diff\":");
  REQUIRE(dpos != std::string::npos);
  CHECK(std::stod(frozen.output.substr(dpos + 16)) < 1e-14);

  const auto bad_eps =
      run("evolve --graph cycle --size 4 --coin grover --state arc:0 "
          "--steps 4 --eps 1.5");
  CHECK(bad_eps.exit_code == 2);

  const auto bad_state =
      run("evolve --graph cycle --size 4 --coin grover --state arc:99 "
          "--steps 1 --eps 0.5");
  CHECK(bad_state.exit_code == 2);
}

TEST_CASE("state file dimension mismatch") {
  const fs::path state = work_dir() / "state.txt";
  std::ofstream(state) << "1,0\n0,0\n0,0\n";  // 3 amplitudes, graph has 8
  const auto r = run("evolve --graph cycle --size 4 --coin grover "
                     "--state file:" + state.string() + " --steps 1 --eps 0.5");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("8 arcs") != std::string::npos);
}

TEST_CASE("verify accepts file-based graphs and coins") {
  const fs::path edges = work_dir() / "g.edges";
  std::ofstream(edges) << "# triangle\n0 1\n1 2\n2 0\n";
  const fs::path ham = work_dir() / "h.mat";
  std::ofstream(ham) << "3\n0 1 0.5\n1 0 2\n0.5 2 0\n";

  const auto grover = run("verify --graph " + edges.string() + " --coin grover");
  CHECK(grover.exit_code == 0);
  CHECK(grover.output.find("VERIFY PASS") != std::string::npos);

  const auto hamr = run("verify --graph " + edges.string() +
                        " --coin hamiltonian:" + ham.string());
  CHECK(hamr.exit_code == 0);

  const fs::path basis = work_dir() / "b.basis";
  {
    std::ofstream out(basis);
    out.precision(17);
    const double r = 1.0 / std::sqrt(2.0);
    for (int u = 0; u < 3; ++u)
      out << "v " << u << " 1\n" << r << ",0.25 " << r << ",-0.25\n";
  }
  // rows above are not orthonormal (norm != 1): expect a usage error
  const auto bad = run("verify --graph " + edges.string() +
                       " --coin basis:" + basis.string());
  CHECK(bad.exit_code == 2);

  {
    std::ofstream out(basis);
    out.precision(17);
    for (int u = 0; u < 3; ++u)
      out << "v " << u << " 1\n0.6,0 0,0.8\n";
  }
  const auto good = run("verify --graph " + edges.string() +
                        " --coin basis:" + basis.string());
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("VERIFY PASS") != std::string::npos);

  const auto torus = run("verify --graph torus3d --size 3 --coin lattice3d");
  CHECK(torus.exit_code == 0);
}
