#include "abcd/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "abcd/errors.hpp"

namespace abcd {

namespace {

enum class Format { kCoordinate, kArray };
enum class Symmetry { kGeneral, kSymmetric };

struct Header {
  Format format = Format::kCoordinate;
  Symmetry symmetry = Symmetry::kGeneral;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '%') continue;
      return true;
    }
    return false;
  }

  bool raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    return true;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

Header parse_header(LineReader& reader) {
  std::string line;
  if (!reader.raw(line)) throw ParseError("empty input", 0);
  std::istringstream ss(line);
  std::string banner, object, format, field, symmetry;
  ss >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket header", reader.line_no());
  if (lower(object) != "matrix") throw ParseError("unsupported object '" + object + "'", reader.line_no());

  Header h;
  format = lower(format);
  if (format == "coordinate") {
    h.format = Format::kCoordinate;
  } else if (format == "array") {
    h.format = Format::kArray;
  } else {
    throw ParseError("unsupported format '" + format + "'", reader.line_no());
  }

  field = lower(field);
  if (field != "real" && field != "double" && field != "integer") {
    throw ParseError("unsupported field qualifier '" + field + "' (only real is supported)",
                     reader.line_no());
  }

  symmetry = lower(symmetry);
  if (symmetry == "general") {
    h.symmetry = Symmetry::kGeneral;
  } else if (symmetry == "symmetric") {
    h.symmetry = Symmetry::kSymmetric;
  } else {
    throw ParseError("unsupported symmetry qualifier '" + symmetry + "'", reader.line_no());
  }
  return h;
}

template <typename T>
T parse_number(const std::string& tok, std::size_t line) {
  T value{};
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError("cannot parse number '" + tok + "'", line);
  return value;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

struct Parsed {
  Index rows = 0;
  Index cols = 0;
  std::vector<Triplet> entries;
  Format format = Format::kCoordinate;
};

Parsed parse(std::istream& in) {
  LineReader reader(in);
  const Header h = parse_header(reader);

  std::string line;
  if (!reader.next(line)) throw ParseError("missing size line", reader.line_no());
  const auto size = split(line);
  Parsed out;
  out.format = h.format;

  if (h.format == Format::kCoordinate) {
    if (size.size() != 3) throw ParseError("coordinate size line needs 'rows cols nnz'", reader.line_no());
    out.rows = parse_number<Index>(size[0], reader.line_no());
    out.cols = parse_number<Index>(size[1], reader.line_no());
    const auto nnz = parse_number<Index>(size[2], reader.line_no());
    if (out.rows < 0 || out.cols < 0 || nnz < 0) throw ParseError("negative size", reader.line_no());
    out.entries.reserve(static_cast<std::size_t>(nnz));
    for (Index k = 0; k < nnz; ++k) {
      if (!reader.next(line)) throw ParseError("expected " + std::to_string(nnz) + " entries, got " +
                                                   std::to_string(k), reader.line_no());
      const auto tok = split(line);
      if (tok.size() != 3) throw ParseError("entry line needs 'row col value'", reader.line_no());
      const auto i = parse_number<Index>(tok[0], reader.line_no()) - 1;
      const auto j = parse_number<Index>(tok[1], reader.line_no()) - 1;
      const auto v = parse_number<double>(tok[2], reader.line_no());
      if (i < 0 || i >= out.rows || j < 0 || j >= out.cols) {
        throw ParseError("index out of range", reader.line_no());
      }
      out.entries.push_back({i, j, v});
      if (h.symmetry == Symmetry::kSymmetric && i != j) out.entries.push_back({j, i, v});
    }
  } else {
    if (size.size() != 2) throw ParseError("array size line needs 'rows cols'", reader.line_no());
    out.rows = parse_number<Index>(size[0], reader.line_no());
    out.cols = parse_number<Index>(size[1], reader.line_no());
    if (out.rows < 0 || out.cols < 0) throw ParseError("negative size", reader.line_no());
    // Column-major; the symmetric variant stores the lower triangle only.
    for (Index j = 0; j < out.cols; ++j) {
      const Index start = h.symmetry == Symmetry::kSymmetric ? j : 0;
      for (Index i = start; i < out.rows; ++i) {
        if (!reader.next(line)) throw ParseError("array data ended early", reader.line_no());
        const auto tok = split(line);
        if (tok.size() != 1) throw ParseError("array line needs a single value", reader.line_no());
        const auto v = parse_number<double>(tok[0], reader.line_no());
        out.entries.push_back({i, j, v});
        if (h.symmetry == Symmetry::kSymmetric && i != j) out.entries.push_back({j, i, v});
      }
    }
  }
  if (reader.next(line)) throw ParseError("trailing data after last entry", reader.line_no());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "' for reading");
  return f;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  return f;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
  auto p = parse(in);
  return SparseMatrix(p.rows, p.cols, std::move(p.entries));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_matrix_market(f);
}

Vector read_vector_market(std::istream& in) {
  auto p = parse(in);
  if (p.cols != 1) throw ParseError("vector file must have exactly one column", 0);
  Vector v = Vector::Zero(p.rows);
  for (const auto& e : p.entries) v[e.row] += e.value;
  return v;
}

Vector read_vector_market(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_vector_market(f);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonzeros() << '\n';
  for (const auto& e : a.entries()) {
    out << e.row + 1 << ' ' << e.col + 1 << ' ' << format_real(e.value) << '\n';
  }
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a) {
  auto f = open_out(path);
  write_matrix_market(f, a);
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

void write_vector_market(std::ostream& out, const Vector& v) {
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  for (Index i = 0; i < v.size(); ++i) out << format_real(v[i]) << '\n';
}

void write_vector_market(const std::filesystem::path& path, const Vector& v) {
  auto f = open_out(path);
  write_vector_market(f, v);
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace abcd
