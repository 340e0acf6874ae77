// End-to-end checks of the command-line tool; each case invokes the real
// binary (path injected by the build) on files in a scratch directory.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "pinv/matio.hpp"
#include "pinv/oracle.hpp"
#include "pinv/schemes.hpp"
#include "support/bits.hpp"
#include "support/corpus.hpp"
#include "support/golden.hpp"

namespace fs = std::filesystem;
using pinv::AnyMatrix;
using pinv::Matrix;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("pinv_cli_test_" + std::to_string(static_cast<long long>(::getpid())));
    fs::create_directories(dir);
  }
  ~Scratch() { std::error_code ec; fs::remove_all(dir, ec); }
  fs::path file(const std::string& name) const { return dir / name; }
};

RunResult run_cli(const Scratch& scratch, const std::string& args) {
  const fs::path out_file = scratch.file("stdout.txt");
  const std::string cmd = std::string("\"") + PINV_CLI_PATH + "\" " + args + " > " +
                          out_file.string() + " 2> " + scratch.file("stderr.txt").string();
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return RunResult{code, slurp(out_file)};
}

}  // namespace

TEST_CASE("pinv of the identity is the identity") {
  Scratch scratch;
  pinv::save_matrix(scratch.file("id3.mat"), AnyMatrix(Matrix<double>::identity(3)), 17);
  const auto res = run_cli(scratch, "pinv --in=" + scratch.file("id3.mat").string() +
                                        " --b=" + scratch.file("id3.mat").string() +
                                        " --precision=17");
  REQUIRE(res.exit_code == 0);
  const AnyMatrix g = pinv::parse_matrix(res.out);
  CHECK(std::get<Matrix<double>>(g) == Matrix<double>::identity(3));
}

TEST_CASE("demo runs the golden pipeline and reports tiny residuals") {
  Scratch scratch;
  const auto res = run_cli(scratch, "demo");
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.find("rank: 4") != std::string::npos);
  CHECK(res.out.find("rho: (1,3,2,0,4)") != std::string::npos);
  CHECK(res.out.find("gamma: (0,1,2,4)") != std::string::npos);
  CHECK(res.out.find("identical factorizations") != std::string::npos);

  // deterministic across runs
  const auto res2 = run_cli(scratch, "demo");
  CHECK(res2.out == res.out);
}

TEST_CASE("factor writes meta, L and U files") {
  Scratch scratch;
  pinv::save_matrix(scratch.file("a.mat"), AnyMatrix(golden::a()), 17);
  const auto res = run_cli(scratch, "factor --in=" + scratch.file("a.mat").string() +
                                        " --out=" + scratch.file("fac").string() +
                                        " --precision=17");
  REQUIRE(res.exit_code == 0);
  const std::string meta = slurp(scratch.file("fac.meta"));
  CHECK(meta.find("rank 4") != std::string::npos);
  CHECK(meta.find("rho 1 3 2 0 4") != std::string::npos);
  CHECK(meta.find("gamma 0 1 2 4") != std::string::npos);

  const auto f = pinv::factor(golden::a(), pinv::PivotPolicy::simple());
  const AnyMatrix l = pinv::load_matrix(scratch.file("fac.L"));
  const AnyMatrix u = pinv::load_matrix(scratch.file("fac.U"));
  CHECK(testsupport::bits_equal(std::get<Matrix<double>>(l), pinv::extract_l(f)));
  CHECK(testsupport::bits_equal(std::get<Matrix<double>>(u), pinv::extract_u(f)));
}

TEST_CASE("check reports oracle-grade residuals for an oracle pseudoinverse") {
  Scratch scratch;
  testsupport::Rng rng(211);
  const auto a = testsupport::random_rank_matrix<double>(rng, 5, 4, 3, -8, 8);
  const auto x = pinv::oracle_pinv(a);
  pinv::save_matrix(scratch.file("a.mat"), AnyMatrix(a), 17);
  pinv::save_matrix(scratch.file("x.mat"), AnyMatrix(x), 17);
  const auto res = run_cli(scratch, "check --in=" + scratch.file("a.mat").string() +
                                        " --b=" + scratch.file("x.mat").string());
  REQUIRE(res.exit_code == 0);
  // four residual lines, all tiny
  int lines = 0;
  std::istringstream is(res.out);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find("_max") == std::string::npos) continue;
    ++lines;
    const double value = std::strtod(line.substr(line.find('=') + 1).c_str(), nullptr);
    CHECK(value < 1e-11 * (1.0 + pinv::max_abs(a)));
  }
  CHECK(lines == 4);
}

TEST_CASE("full-precision CLI output reproduces library residuals exactly") {
  Scratch scratch;
  testsupport::Rng rng(223);
  const auto a = testsupport::random_rank_matrix<double>(rng, 6, 4, 3, -9, 9);
  pinv::save_matrix(scratch.file("a.mat"), AnyMatrix(a), 17);

  auto f = pinv::factor(a, pinv::PivotPolicy::simple());
  Matrix<double> b = Matrix<double>::identity(6);
  Matrix<double> x_lib(4, 6);
  pinv::pinv_apply(f, b, x_lib);
  const auto rep_lib = pinv::mp_check(a, x_lib);

  const auto res = run_cli(scratch, "pinv --in=" + scratch.file("a.mat").string() +
                                        " --out=" + scratch.file("g.mat").string() +
                                        " --precision=17");
  REQUIRE(res.exit_code == 0);
  const auto x_cli = std::get<Matrix<double>>(pinv::load_matrix(scratch.file("g.mat")));
  CHECK(testsupport::bits_equal(x_cli, x_lib));
  const auto rep_cli = pinv::mp_check(a, x_cli);
  CHECK(rep_cli.residual_axa == rep_lib.residual_axa);
  CHECK(rep_cli.residual_xax == rep_lib.residual_xax);
  CHECK(rep_cli.residual_ax_herm == rep_lib.residual_ax_herm);
  CHECK(rep_cli.residual_xa_herm == rep_lib.residual_xa_herm);
}

TEST_CASE("colproj and rowproj agree with their in-place variants") {
  Scratch scratch;
  testsupport::Rng rng(227);
  const auto a = testsupport::random_rank_matrix<double>(rng, 6, 5, 3, -7, 7);
  const auto data = testsupport::random_integer_matrix<double>(rng, 5, 2, -9, 9);
  pinv::save_matrix(scratch.file("a.mat"), AnyMatrix(a), 17);
  pinv::save_matrix(scratch.file("b.mat"), AnyMatrix(data), 17);

  const auto buffered = run_cli(
      scratch, "colproj --in=" + scratch.file("a.mat").string() +
                   " --b=" + scratch.file("b.mat").string() + " --precision=17");
  const auto inplace = run_cli(
      scratch, "colproj --in=" + scratch.file("a.mat").string() +
                   " --b=" + scratch.file("b.mat").string() +
                   " --precision=17 --inplace-expand");
  REQUIRE(buffered.exit_code == 0);
  REQUIRE(inplace.exit_code == 0);
  CHECK(buffered.out == inplace.out);
}

TEST_CASE("complex matrices round-trip through the CLI") {
  Scratch scratch;
  testsupport::Rng rng(229);
  const auto a = testsupport::random_rank_matrix<pinv::Complex>(rng, 4, 5, 2, -5, 5);
  pinv::save_matrix(scratch.file("a.mat"), AnyMatrix(a), 17);
  const auto res = run_cli(scratch, "pinv --in=" + scratch.file("a.mat").string() +
                                        " --out=" + scratch.file("g.mat").string() +
                                        " --precision=17");
  REQUIRE(res.exit_code == 0);
  const auto x = std::get<Matrix<pinv::Complex>>(pinv::load_matrix(scratch.file("g.mat")));
  CHECK(pinv::mp_check(a, x).max_residual() < 1e-10 * (1.0 + pinv::max_abs(a)));
}

TEST_CASE("exit codes distinguish the error classes") {
  Scratch scratch;
  {  // malformed matrix -> 2
    std::ofstream bad(scratch.file("bad.mat"));
    bad << "2 2 real\n1 junk\n0 1\n";
  }
  CHECK(run_cli(scratch, "factor --in=" + scratch.file("bad.mat").string()).exit_code == 2);

  {  // shape mismatch between A and B -> 2
    pinv::save_matrix(scratch.file("a.mat"), AnyMatrix(golden::a()), 17);
    pinv::save_matrix(scratch.file("b.mat"), AnyMatrix(Matrix<double>::identity(3)), 17);
  }
  CHECK(run_cli(scratch, "pinv --in=" + scratch.file("a.mat").string() +
                             " --b=" + scratch.file("b.mat").string())
            .exit_code == 2);

  // missing file -> 2
  CHECK(run_cli(scratch, "pinv --in=" + scratch.file("nope.mat").string()).exit_code == 2);

  // rank zero is a warning, not an error -> 0
  pinv::save_matrix(scratch.file("zero.mat"), AnyMatrix(Matrix<double>(2, 2)), 17);
  CHECK(run_cli(scratch, "pinv --in=" + scratch.file("zero.mat").string()).exit_code == 0);
}
