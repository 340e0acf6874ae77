// Command-line front end: factorization, pseudoinverse products, projector
// application, Moore-Penrose residual checking, a built-in worked example,
// and a pivot-policy benchmark.
//
// Exit codes: 0 success (including a rank-zero warning), 2 parse/shape
// errors, 3 numeric breakdown, 4 wrong factorization state.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pinv/matio.hpp"
#include "pinv/oracle.hpp"
#include "pinv/schemes.hpp"

namespace {

using pinv::AnyMatrix;
using pinv::Complex;
using pinv::index_t;
using pinv::Matrix;

struct Options {
  std::string pivot = "simple";
  double eps = 1e-12;
  std::string in;
  std::string b;
  std::string out;
  int precision = 5;
  bool inplace_expand = false;
};

pinv::PivotPolicy make_policy(const Options& opt) {
  if (opt.pivot == "simple") return pinv::PivotPolicy::simple(opt.eps);
  if (opt.pivot == "fine") return pinv::PivotPolicy::fine();
  if (opt.pivot == "coarse") return pinv::PivotPolicy::coarse();
  throw CLI::ValidationError("--pivot must be simple, fine or coarse");
}

void warn_rank_zero() {
  std::cerr << "warning: numerical rank is zero; results are zero matrices\n";
}

template <typename T>
Matrix<T> matching_b(const Options& opt, index_t default_dim) {
  if (opt.b.empty()) return Matrix<T>::identity(default_dim);
  AnyMatrix any = pinv::load_matrix(opt.b);
  if (!std::holds_alternative<Matrix<T>>(any))
    throw pinv::ShapeError("--b matrix must have the same field (real/complex) as --in");
  return std::get<Matrix<T>>(std::move(any));
}

void emit(const Options& opt, const AnyMatrix& g) {
  if (opt.out.empty())
    pinv::write_matrix(std::cout, g, opt.precision);
  else
    pinv::save_matrix(opt.out, g, opt.precision);
}

// ---- factor ---------------------------------------------------------------

template <typename T>
void run_factor(Matrix<T> a, const Options& opt) {
  auto f = pinv::factor(std::move(a), make_policy(opt));
  if (f.rank == 0) warn_rank_zero();

  std::ostringstream meta;
  meta << "rank " << f.rank << "\n";
  meta << "rho";
  for (index_t v : f.rho) meta << ' ' << v;
  meta << "\ngamma";
  for (index_t i = 0; i < f.rank; ++i) meta << ' ' << f.gamma[i];
  meta << "\n";

  if (opt.out.empty()) {
    std::cout << meta.str();
    if (f.rank > 0) {
      std::cout << "L\n";
      pinv::write_matrix(std::cout, pinv::extract_l(f), opt.precision);
      std::cout << "U\n";
      pinv::write_matrix(std::cout, pinv::extract_u(f), opt.precision);
    }
    return;
  }
  std::ofstream metafile(opt.out + ".meta");
  if (!metafile) throw pinv::Error("cannot open '" + opt.out + ".meta' for writing");
  metafile << meta.str();
  if (f.rank > 0) {
    pinv::save_matrix(opt.out + ".L", AnyMatrix(pinv::extract_l(f)), opt.precision);
    pinv::save_matrix(opt.out + ".U", AnyMatrix(pinv::extract_u(f)), opt.precision);
  }
}

// ---- pinv / colproj / rowproj ---------------------------------------------

template <typename T>
void run_pinv(Matrix<T> a, const Options& opt) {
  const index_t m = a.rows(), n = a.cols();
  auto f = pinv::factor(std::move(a), make_policy(opt));
  if (f.rank == 0) warn_rank_zero();
  Matrix<T> b = matching_b<T>(opt, m);
  Matrix<T> g(n, b.cols());
  pinv::pinv_apply(f, b, g);
  emit(opt, AnyMatrix(std::move(g)));
}

template <typename T>
void run_colproj(Matrix<T> a, const Options& opt) {
  const index_t n = a.cols();
  auto f = pinv::factor(std::move(a), make_policy(opt));
  if (f.rank == 0) warn_rank_zero();
  auto pp = pinv::prepare_col_projector(std::move(f));
  Matrix<T> b = matching_b<T>(opt, n);
  if (opt.inplace_expand) {
    pinv::apply_col_projector_inplace(pp, b);
    emit(opt, AnyMatrix(std::move(b)));
  } else {
    Matrix<T> g(n, b.cols());
    pinv::apply_col_projector(pp, b, g);
    emit(opt, AnyMatrix(std::move(g)));
  }
}

template <typename T>
void run_rowproj(Matrix<T> a, const Options& opt) {
  const index_t m = a.rows();
  auto f = pinv::factor(std::move(a), make_policy(opt));
  if (f.rank == 0) warn_rank_zero();
  auto pp = pinv::prepare_row_projector(std::move(f));
  Matrix<T> b = matching_b<T>(opt, m);
  if (opt.inplace_expand) {
    pinv::apply_row_projector_inplace(pp, b);
    emit(opt, AnyMatrix(std::move(b)));
  } else {
    Matrix<T> g(m, b.cols());
    pinv::apply_row_projector(pp, b, g);
    emit(opt, AnyMatrix(std::move(g)));
  }
}

// ---- check ----------------------------------------------------------------

template <typename T>
void run_check(const Matrix<T>& a, const Options& opt) {
  if (opt.b.empty()) throw pinv::ShapeError("check requires --b=<candidate pseudoinverse>");
  AnyMatrix any = pinv::load_matrix(opt.b);
  if (!std::holds_alternative<Matrix<T>>(any))
    throw pinv::ShapeError("--b matrix must have the same field (real/complex) as --in");
  const pinv::OracleReport rep = pinv::mp_check(a, std::get<Matrix<T>>(any));
  std::printf("|A X A - A|_max    = %.*e\n", opt.precision, rep.residual_axa);
  std::printf("|X A X - X|_max    = %.*e\n", opt.precision, rep.residual_xax);
  std::printf("|(A X)* - A X|_max = %.*e\n", opt.precision, rep.residual_ax_herm);
  std::printf("|(X A)* - X A|_max = %.*e\n", opt.precision, rep.residual_xa_herm);
}

// ---- demo -----------------------------------------------------------------

Matrix<double> demo_matrix() {
  return Matrix<double>::from_rows({{1, 2, 3, 4, 5, 6, 7},
                                    {7, 6, 5, 4, 3, 2, 1},
                                    {1, 2, 3, 4, 3, 2, 1},
                                    {1, 7, 1, 7, 1, 7, 1},
                                    {7, 1, 7, 1, 7, 1, 7}});
}

void print_fixed(const Matrix<double>& m, int decimals) {
  char buf[64];
  int width = 0;
  for (index_t i = 0; i < m.rows(); ++i)
    for (index_t j = 0; j < m.cols(); ++j) {
      const int len = std::snprintf(buf, sizeof buf, "%.*f", decimals, m(i, j));
      width = std::max(width, len);
    }
  for (index_t i = 0; i < m.rows(); ++i) {
    for (index_t j = 0; j < m.cols(); ++j)
      std::printf("%s%*.*f", j ? "  " : "  ", width, decimals, m(i, j));
    std::printf("\n");
  }
}

bool same_bits(const Matrix<double>& a, const Matrix<double>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

int run_demo(const Options& opt) {
  const Matrix<double> a = demo_matrix();

  const auto f_simple = pinv::factor(a, pinv::PivotPolicy::simple(opt.eps));
  const auto f_fine = pinv::factor(a, pinv::PivotPolicy::fine());
  const auto f_coarse = pinv::factor(a, pinv::PivotPolicy::coarse());
  const bool agree = f_simple.rho == f_fine.rho && f_simple.rho == f_coarse.rho &&
                     f_simple.gamma == f_fine.gamma && f_simple.gamma == f_coarse.gamma &&
                     f_simple.rank == f_fine.rank && f_simple.rank == f_coarse.rank &&
                     same_bits(f_simple.storage, f_fine.storage) &&
                     same_bits(f_simple.storage, f_coarse.storage);

  std::printf("A (%d x %d):\n", a.rows(), a.cols());
  print_fixed(a, 0);
  std::printf("rank: %d\n", f_simple.rank);
  std::printf("rho: (");
  for (index_t i = 0; i < a.rows(); ++i) std::printf("%s%d", i ? "," : "", f_simple.rho[i]);
  std::printf(")\ngamma: (");
  for (index_t i = 0; i < f_simple.rank; ++i)
    std::printf("%s%d", i ? "," : "", f_simple.gamma[i]);
  std::printf(")\nL:\n");
  print_fixed(pinv::extract_l(f_simple), opt.precision);
  std::printf("U:\n");
  print_fixed(pinv::extract_u(f_simple), opt.precision);

  // A+ from the compact pipeline with B = I.
  auto f = pinv::factor(a, pinv::PivotPolicy::simple(opt.eps));
  Matrix<double> b = Matrix<double>::identity(a.rows());
  Matrix<double> aplus(a.cols(), a.rows());
  pinv::pinv_apply(f, b, aplus);
  std::printf("A+ (B = I):\n");
  print_fixed(aplus, opt.precision);

  // A+ A A+ via the column projector, against A+.
  auto pc = pinv::prepare_col_projector(pinv::factor(a, pinv::PivotPolicy::simple(opt.eps)));
  Matrix<double> b1 = aplus;
  Matrix<double> g1(a.cols(), a.rows());
  pinv::apply_col_projector(pc, b1, g1);
  double res_colproj = 0.0;
  for (index_t i = 0; i < g1.rows(); ++i)
    for (index_t j = 0; j < g1.cols(); ++j)
      res_colproj = std::max(res_colproj, std::fabs(g1(i, j) - aplus(i, j)));

  // A A+ A via the row projector, against A.
  auto pr = pinv::prepare_row_projector(pinv::factor(a, pinv::PivotPolicy::simple(opt.eps)));
  Matrix<double> b2 = a;
  Matrix<double> g2(a.rows(), a.cols());
  pinv::apply_row_projector(pr, b2, g2);
  double res_rowproj = 0.0;
  for (index_t i = 0; i < g2.rows(); ++i)
    for (index_t j = 0; j < g2.cols(); ++j)
      res_rowproj = std::max(res_rowproj, std::fabs(g2(i, j) - a(i, j)));

  std::printf("max |A - A A+ A|   = %.3e\n", res_rowproj);
  std::printf("max |A+ - A+ A A+| = %.3e\n", res_colproj);
  std::printf("pivot policies simple(eps=%g), fine, coarse: %s\n", opt.eps,
              agree ? "identical factorizations (bit-exact)" : "DISAGREE");
  return agree ? 0 : 1;
}

// ---- bench ----------------------------------------------------------------

int run_bench(index_t rows, index_t cols, int reps, double eps) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix<double> base(rows, cols);
  for (index_t i = 0; i < rows; ++i)
    for (index_t j = 0; j < cols; ++j) base(i, j) = dist(rng);

  auto time_policy = [&](const pinv::PivotPolicy& pol) {
    (void)pinv::factor(base, pol);  // warm-up
    double total = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      Matrix<double> work = base;
      const auto t0 = std::chrono::steady_clock::now();
      const auto f = pinv::factor(std::move(work), pol);
      const auto t1 = std::chrono::steady_clock::now();
      if (f.rank == 0) warn_rank_zero();
      total += std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    return total / reps;
  };

  std::printf("factoring a %d x %d real matrix, %d repetitions per policy\n", rows, cols, reps);
  const double t_simple = time_policy(pinv::PivotPolicy::simple(eps));
  const double t_fine = time_policy(pinv::PivotPolicy::fine());
  const double t_coarse = time_policy(pinv::PivotPolicy::coarse());
  std::printf("simple: %9.3f ms   (1.00x)\n", t_simple);
  std::printf("fine:   %9.3f ms   (%.2fx)\n", t_fine, t_fine / t_simple);
  std::printf("coarse: %9.3f ms   (%.2fx)\n", t_coarse, t_coarse / t_simple);
  std::printf("(informational timing only; ratios vary with hardware)\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compact in-place schemes for A+B, A+AB and AA+B over a rank-revealing LU"};
  app.require_subcommand(1);

  Options opt;
  index_t bench_rows = 400;
  index_t bench_cols = 320;
  int bench_reps = 5;

  auto add_common = [&](CLI::App* cmd, bool needs_in) {
    cmd->add_option("--pivot", opt.pivot, "pivot acceptance policy: simple|fine|coarse")
        ->check(CLI::IsMember({"simple", "fine", "coarse"}))
        ->capture_default_str();
    cmd->add_option("--eps", opt.eps, "threshold for the simple policy")->capture_default_str();
    cmd->add_option("--precision", opt.precision, "output digits (17 for exact round trip)")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();
    if (needs_in) cmd->add_option("--in", opt.in, "input matrix file")->required();
  };

  CLI::App* c_factor = app.add_subcommand("factor", "rank-revealing LU factorization");
  add_common(c_factor, true);
  c_factor->add_option("--out", opt.out, "output file prefix (.meta/.L/.U)");

  CLI::App* c_pinv = app.add_subcommand("pinv", "g = A+ B (B defaults to the identity)");
  add_common(c_pinv, true);
  c_pinv->add_option("--b", opt.b, "data matrix B");
  c_pinv->add_option("--out", opt.out, "output matrix file (stdout if omitted)");

  CLI::App* c_colproj = app.add_subcommand("colproj", "g = A+A B (B defaults to the identity)");
  add_common(c_colproj, true);
  c_colproj->add_option("--b", opt.b, "data matrix B");
  c_colproj->add_option("--out", opt.out, "output matrix file (stdout if omitted)");
  c_colproj->add_flag("--inplace-expand", opt.inplace_expand,
                      "expand the result into B's own storage");

  CLI::App* c_rowproj = app.add_subcommand("rowproj", "g = AA+ B (B defaults to the identity)");
  add_common(c_rowproj, true);
  c_rowproj->add_option("--b", opt.b, "data matrix B");
  c_rowproj->add_option("--out", opt.out, "output matrix file (stdout if omitted)");
  c_rowproj->add_flag("--inplace-expand", opt.inplace_expand,
                      "expand the result into B's own storage");

  CLI::App* c_check = app.add_subcommand("check", "Moore-Penrose residuals of (A, X)");
  add_common(c_check, true);
  c_check->add_option("--b", opt.b, "candidate pseudoinverse X")->required();

  CLI::App* c_demo = app.add_subcommand("demo", "worked 5x7 rank-4 example, end to end");
  add_common(c_demo, false);

  CLI::App* c_bench = app.add_subcommand("bench", "time the three pivot policies");
  add_common(c_bench, false);
  c_bench->add_option("--rows", bench_rows, "benchmark matrix rows")->capture_default_str();
  c_bench->add_option("--cols", bench_cols, "benchmark matrix cols")->capture_default_str();
  c_bench->add_option("--reps", bench_reps, "repetitions per policy")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_demo->parsed()) return run_demo(opt);
    if (c_bench->parsed()) return run_bench(bench_rows, bench_cols, bench_reps, opt.eps);

    AnyMatrix a = pinv::load_matrix(opt.in);
    auto dispatch = [&](auto&& run) {
      std::visit([&](auto& mat) { run(std::move(mat)); }, a);
    };
    if (c_factor->parsed())
      dispatch([&](auto mat) { run_factor(std::move(mat), opt); });
    else if (c_pinv->parsed())
      dispatch([&](auto mat) { run_pinv(std::move(mat), opt); });
    else if (c_colproj->parsed())
      dispatch([&](auto mat) { run_colproj(std::move(mat), opt); });
    else if (c_rowproj->parsed())
      dispatch([&](auto mat) { run_rowproj(std::move(mat), opt); });
    else if (c_check->parsed())
      dispatch([&](auto mat) { run_check(mat, opt); });
    return 0;
  } catch (const pinv::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pinv::ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pinv::NumericBreakdown& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pinv::WrongStateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
