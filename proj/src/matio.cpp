#include "pinv/matio.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace pinv {

namespace {

struct Token {
  std::string_view text;
  int line;    // 1-based
  int column;  // 1-based
};

// Tokens grouped by source line; blank lines are skipped but counted.
std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<Token>> out;
  std::vector<Token> current;
  int line = 1;
  std::size_t i = 0;
  std::size_t line_start = 0;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      flush();
      ++line;
      ++i;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    current.push_back(Token{text.substr(start, i - start), line,
                            static_cast<int>(start - line_start) + 1});
  }
  flush();
  return out;
}

double parse_real_part(std::string_view s, const Token& tok, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string("malformed ") + what + " '" + std::string(tok.text) + "'",
                     tok.line, tok.column);
  if (!std::isfinite(value))
    throw ParseError(std::string("non-finite ") + what + " '" + std::string(tok.text) + "'",
                     tok.line, tok.column);
  return value;
}

double parse_real_entry(const Token& tok) { return parse_real_part(tok.text, tok, "entry"); }

Complex parse_complex_entry(const Token& tok) {
  const std::string_view s = tok.text;
  if (s.size() < 5 || s.front() != '(' || s.back() != ')')
    throw ParseError("complex entry must look like (re,im), got '" + std::string(s) + "'",
                     tok.line, tok.column);
  const std::size_t comma = s.find(',');
  if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
    throw ParseError("complex entry must contain exactly one comma", tok.line, tok.column);
  const double re = parse_real_part(s.substr(1, comma - 1), tok, "real part");
  const double im =
      parse_real_part(s.substr(comma + 1, s.size() - comma - 2), tok, "imaginary part");
  return Complex(re, im);
}

int parse_dimension(const Token& tok) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
  if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size())
    throw ParseError("malformed dimension '" + std::string(tok.text) + "'", tok.line, tok.column);
  if (value < 1) throw DimensionError("dimensions must be positive", tok.line, tok.column);
  return value;
}

template <typename T, typename ParseEntry>
Matrix<T> parse_entries(const std::vector<std::vector<Token>>& lines, index_t m, index_t n,
                        ParseEntry parse_entry) {
  const Token& header = lines[0][0];
  if (static_cast<index_t>(lines.size()) - 1 < m) {
    throw DimensionError("expected " + std::to_string(m) + " entry rows, got " +
                             std::to_string(lines.size() - 1),
                         header.line, header.column);
  }
  if (static_cast<index_t>(lines.size()) - 1 > m) {
    const Token& extra = lines[m + 1][0];
    throw DimensionError("unexpected extra row", extra.line, extra.column);
  }
  Matrix<T> out(m, n);
  for (index_t i = 0; i < m; ++i) {
    const std::vector<Token>& row = lines[i + 1];
    if (static_cast<index_t>(row.size()) != n)
      throw DimensionError("row " + std::to_string(i + 1) + " has " +
                               std::to_string(row.size()) + " entries, expected " +
                               std::to_string(n),
                           row[0].line, row[0].column);
    for (index_t j = 0; j < n; ++j) out(i, j) = parse_entry(row[j]);
  }
  return out;
}

char* format_scalar(char* buf, std::size_t cap, double v, int digits) {
  std::snprintf(buf, cap, "%.*g", digits, v);
  return buf;
}

}  // namespace

AnyMatrix parse_matrix(std::string_view text) {
  const std::vector<std::vector<Token>> lines = tokenize_lines(text);
  if (lines.empty()) throw ParseError("missing header 'm n real|complex'", 1, 1);
  const std::vector<Token>& header = lines[0];
  if (header.size() != 3) {
    const Token& at = header.size() > 3 ? header[3] : header.back();
    throw ParseError("header must be 'm n real|complex'", at.line, at.column);
  }
  const index_t m = parse_dimension(header[0]);
  const index_t n = parse_dimension(header[1]);
  const Token& field = header[2];
  if (field.text == "real") return parse_entries<double>(lines, m, n, parse_real_entry);
  if (field.text == "complex") return parse_entries<Complex>(lines, m, n, parse_complex_entry);
  throw ParseError("field must be 'real' or 'complex', got '" + std::string(field.text) + "'",
                   field.line, field.column);
}

void write_matrix(std::ostream& os, const Matrix<double>& m, int digits) {
  char buf[64];
  os << m.rows() << ' ' << m.cols() << " real\n";
  for (index_t i = 0; i < m.rows(); ++i) {
    for (index_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_scalar(buf, sizeof buf, m(i, j), digits);
    }
    os << '\n';
  }
}

void write_matrix(std::ostream& os, const Matrix<Complex>& m, int digits) {
  char buf[64];
  os << m.rows() << ' ' << m.cols() << " complex\n";
  for (index_t i = 0; i < m.rows(); ++i) {
    for (index_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << '(' << format_scalar(buf, sizeof buf, m(i, j).real(), digits) << ','
         << format_scalar(buf, sizeof buf, m(i, j).imag(), digits) << ')';
    }
    os << '\n';
  }
}

void write_matrix(std::ostream& os, const AnyMatrix& m, int digits) {
  std::visit([&](const auto& mm) { write_matrix(os, mm, digits); }, m);
}

std::string format_matrix(const AnyMatrix& m, int digits) {
  std::ostringstream os;
  write_matrix(os, m, digits);
  return os.str();
}

AnyMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str());
}

void save_matrix(const std::filesystem::path& path, const AnyMatrix& m, int digits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_matrix(out, m, digits);
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace pinv
