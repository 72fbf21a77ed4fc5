#include "sphsync/matrix_io.hpp"

#include "sphsync/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sphsync {

namespace {

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  // Next non-blank, non-comment line split into tokens; false at EOF.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream ss(line);
      tokens.clear();
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (tokens.empty() || tokens.front().starts_with('#')) continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
  }
};

double parse_double(const LineReader& reader, const std::string& tok) {
  double value = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) reader.error("cannot parse number '" + tok + "'");
  return value;
}

long long parse_int(const LineReader& reader, const std::string& tok) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    reader.error("cannot parse integer '" + tok + "'");
  }
  return value;
}

Index read_header(LineReader& reader, std::vector<std::string>& tokens) {
  if (!reader.next(tokens)) reader.error("missing size header");
  if (tokens.size() != 1) reader.error("size header must be a single integer");
  const long long n = parse_int(reader, tokens[0]);
  if (n <= 0) reader.error("size must be positive");
  return static_cast<Index>(n);
}

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

SymmetricCost read_cost(std::istream& in) {
  LineReader reader{in};
  std::vector<std::string> tokens;
  const Index n = read_header(reader, tokens);

  struct Entry { Index i, j; Complex value; };
  std::vector<Entry> entries;
  std::set<std::pair<Index, Index>> seen;
  int width = 0;
  while (reader.next(tokens)) {
    if (tokens.size() != 3 && tokens.size() != 4) reader.error("expected 'i j value' or 'i j re im'");
    const int w = static_cast<int>(tokens.size());
    if (width == 0) width = w;
    if (w != width) reader.error("mixed real and complex entry lines");
    const long long i = parse_int(reader, tokens[0]);
    const long long j = parse_int(reader, tokens[1]);
    if (i < 1 || j < 1 || i > n || j > n) reader.error("index out of range 1.." + std::to_string(n));
    if (i > j) reader.error("entries must satisfy i <= j");
    if (!seen.emplace(i, j).second) reader.error("duplicate entry");
    Complex value(parse_double(reader, tokens[2]), w == 4 ? parse_double(reader, tokens[3]) : 0.0);
    entries.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), value});
  }

  if (width == 4) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (const auto& e : entries) {
      m(e.i, e.j) = e.value;
      m(e.j, e.i) = std::conj(e.value);
      if (e.i == e.j) m(e.i, e.i) = e.value.real();
    }
    return SymmetricCost::from_complex(std::move(m));
  }
  RealMatrix m = RealMatrix::Zero(n, n);
  for (const auto& e : entries) {
    m(e.i, e.j) = e.value.real();
    m(e.j, e.i) = e.value.real();
  }
  return SymmetricCost::from_real(std::move(m));
}

SymmetricCost read_cost(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_cost(in);
}

void write_cost(std::ostream& out, const SymmetricCost& c) {
  out << c.n() << '\n';
  for (Index i = 0; i < c.n(); ++i) {
    for (Index j = i; j < c.n(); ++j) {
      if (c.is_complex()) {
        const Complex v = c.complex()(i, j);
        if (v == Complex(0.0, 0.0)) continue;
        out << i + 1 << ' ' << j + 1 << ' ' << format_double(v.real()) << ' '
            << format_double(v.imag()) << '\n';
      } else {
        const double v = c.real()(i, j);
        if (v == 0.0) continue;
        out << i + 1 << ' ' << j + 1 << ' ' << format_double(v) << '\n';
      }
    }
  }
  require(out.good(), ErrorCode::kIo, "write failed");
}

void write_cost(const std::filesystem::path& path, const SymmetricCost& c) {
  auto out = open_out(path);
  write_cost(out, c);
}

SignVector read_signs(std::istream& in) {
  LineReader reader{in};
  std::vector<std::string> tokens;
  const Index n = read_header(reader, tokens);
  RealVector real(n);
  ComplexVector cplx(n);
  bool is_complex = false;
  for (Index i = 0; i < n; ++i) {
    if (!reader.next(tokens)) reader.error("expected " + std::to_string(n) + " entries");
    if (tokens.size() == 2) {
      is_complex = true;
      cplx[i] = Complex(parse_double(reader, tokens[0]), parse_double(reader, tokens[1]));
    } else if (tokens.size() == 1) {
      real[i] = parse_double(reader, tokens[0]);
      cplx[i] = real[i];
    } else {
      reader.error("expected a sign or a 're im' pair");
    }
  }
  if (reader.next(tokens)) reader.error("trailing data after " + std::to_string(n) + " entries");
  if (is_complex) return SignVector::from_complex(std::move(cplx));
  return SignVector::from_real(std::move(real));
}

SignVector read_signs(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_signs(in);
}

void write_signs(std::ostream& out, const SignVector& z) {
  out << z.n() << '\n';
  for (Index i = 0; i < z.n(); ++i) {
    if (z.is_complex()) {
      out << format_double(z.complex()[i].real()) << ' ' << format_double(z.complex()[i].imag())
          << '\n';
    } else {
      out << (z.real()[i] > 0 ? "1" : "-1") << '\n';
    }
  }
}

void write_signs(const std::filesystem::path& path, const SignVector& z) {
  auto out = open_out(path);
  write_signs(out, z);
}

SphereConfig read_config(std::istream& in) {
  LineReader reader{in};
  std::vector<std::string> tokens;
  if (!reader.next(tokens) || tokens.size() != 2) reader.error("expected header 'n r'");
  const long long n = parse_int(reader, tokens[0]);
  const long long r = parse_int(reader, tokens[1]);
  if (n <= 0 || r <= 0) reader.error("n and r must be positive");
  RealMatrix real(n, r);
  ComplexMatrix cplx(n, r);
  int width = 0;
  for (Index i = 0; i < n; ++i) {
    if (!reader.next(tokens)) reader.error("expected " + std::to_string(n) + " rows");
    const auto w = static_cast<long long>(tokens.size());
    if (w != r && w != 2 * r) reader.error("row has wrong number of values");
    if (width == 0) width = static_cast<int>(w);
    if (w != width) reader.error("mixed real and complex rows");
    for (Index k = 0; k < r; ++k) {
      if (w == r) {
        real(i, k) = parse_double(reader, tokens[k]);
      } else {
        cplx(i, k) = Complex(parse_double(reader, tokens[2 * k]), parse_double(reader, tokens[2 * k + 1]));
      }
    }
  }
  if (width == 2 * r && r > 0 && width != r) return SphereConfig::normalized(std::move(cplx));
  return SphereConfig::normalized(std::move(real));
}

SphereConfig read_config(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_config(in);
}

void write_config(std::ostream& out, const SphereConfig& y) {
  out << y.n() << ' ' << y.r() << '\n';
  for (Index i = 0; i < y.n(); ++i) {
    for (Index k = 0; k < y.r(); ++k) {
      if (k > 0) out << ' ';
      if (y.is_complex()) {
        out << format_double(y.complex()(i, k).real()) << ' '
            << format_double(y.complex()(i, k).imag());
      } else {
        out << format_double(y.real()(i, k));
      }
    }
    out << '\n';
  }
}

void write_config(const std::filesystem::path& path, const SphereConfig& y) {
  auto out = open_out(path);
  write_config(out, y);
}

}  // namespace sphsync
