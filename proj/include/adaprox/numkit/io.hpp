#pragma once

#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "adaprox/numkit/format.hpp"
#include "adaprox/numkit/types.hpp"

namespace adaprox {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Samples stored row-wise: features is m x n, labels has length m.
struct LabeledDataset {
  SparseMatrix features;
  Vector labels;

  Index samples() const { return features.rows(); }
  Index dims() const { return features.cols(); }
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Reads LIBSVM/SVMlight text: `<label> <idx>:<val> ...` per line, indices
/// 1-based and strictly increasing. Blank lines are skipped. The column
/// count is the largest index seen unless `width` pins it.
inline LabeledDataset parse_libsvm(std::istream& in,
                                   std::optional<Index> width = std::nullopt) {
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> labels;
  Index max_col = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    const auto label = parse_double(toks[0]);
    if (!label || !std::isfinite(*label)) {
      throw ParseError(lineno, "malformed label '" + std::string(toks[0]) + "'");
    }
    const Index row = static_cast<Index>(labels.size());
    labels.push_back(*label);
    long long prev = 0;
    for (std::size_t t = 1; t < toks.size(); ++t) {
      const auto tok = toks[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(lineno, "expected idx:val, got '" + std::string(tok) + "'");
      }
      const auto idx = parse_int<long long>(tok.substr(0, colon));
      const auto val = parse_double(tok.substr(colon + 1));
      if (!idx || !val || !std::isfinite(*val)) {
        throw ParseError(lineno, "malformed token '" + std::string(tok) + "'");
      }
      if (*idx <= 0) throw ParseError(lineno, "index must be positive");
      if (*idx <= prev) throw ParseError(lineno, "indices must be strictly increasing");
      prev = *idx;
      max_col = std::max<Index>(max_col, static_cast<Index>(*idx));
      triplets.emplace_back(row, static_cast<Index>(*idx - 1), *val);
    }
  }
  Index cols = max_col;
  if (width) {
    if (*width < max_col) {
      throw ParseError(lineno, "feature index " + std::to_string(max_col) +
                                   " exceeds pinned width " + std::to_string(*width));
    }
    cols = *width;
  }
  LabeledDataset ds;
  ds.features.resize(static_cast<Index>(labels.size()), cols);
  ds.features.setFromTriplets(triplets.begin(), triplets.end());
  ds.features.makeCompressed();
  ds.labels = Eigen::Map<const Vector>(labels.data(), static_cast<Index>(labels.size()));
  return ds;
}

inline LabeledDataset parse_libsvm(const std::string& text,
                                   std::optional<Index> width = std::nullopt) {
  std::istringstream in(text);
  return parse_libsvm(in, width);
}

/// Writes the dataset in LIBSVM format. Explicit zeros are written too, so
/// parsing the output reproduces the stored pattern.
inline void write_libsvm(std::ostream& out, const LabeledDataset& ds) {
  for (Index i = 0; i < ds.features.rows(); ++i) {
    out << format_double(ds.labels[i]);
    for (SparseMatrix::InnerIterator it(ds.features, i); it; ++it) {
      out << ' ' << (it.col() + 1) << ':' << format_double(it.value());
    }
    out << '\n';
  }
}

inline std::string serialize_libsvm(const LabeledDataset& ds) {
  std::ostringstream out;
  write_libsvm(out, ds);
  return out.str();
}

/// Appends a constant-1 feature column (bias absorption).
inline LabeledDataset with_bias_column(const LabeledDataset& ds) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(ds.features.nonZeros() + ds.samples()));
  for (Index i = 0; i < ds.features.rows(); ++i) {
    for (SparseMatrix::InnerIterator it(ds.features, i); it; ++it) {
      trip.emplace_back(i, it.col(), it.value());
    }
    trip.emplace_back(i, ds.dims(), 1.0);
  }
  LabeledDataset out;
  out.features.resize(ds.samples(), ds.dims() + 1);
  out.features.setFromTriplets(trip.begin(), trip.end());
  out.features.makeCompressed();
  out.labels = ds.labels;
  return out;
}

// Coordinate text format: header `rows cols nnz`, then one `r c v` line per
// stored entry with 0-based indices.

inline void write_coordinate(std::ostream& out, const SparseMatrix& m) {
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Index i = 0; i < m.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
    }
  }
}

inline SparseMatrix read_coordinate(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_tokens = [&]() -> std::vector<std::string_view> {
    while (std::getline(in, line)) {
      ++lineno;
      auto toks = detail::split_ws(line);
      if (!toks.empty()) return toks;
    }
    return {};
  };
  auto head = next_tokens();
  if (head.size() != 3) throw ParseError(lineno, "expected header 'rows cols nnz'");
  const auto rows = parse_int<long long>(head[0]);
  const auto cols = parse_int<long long>(head[1]);
  const auto nnz = parse_int<long long>(head[2]);
  if (!rows || !cols || !nnz || *rows < 0 || *cols < 0 || *nnz < 0) {
    throw ParseError(lineno, "malformed header");
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(*nnz));
  for (long long k = 0; k < *nnz; ++k) {
    auto toks = next_tokens();
    if (toks.size() != 3) throw ParseError(lineno, "expected 'r c v'");
    const auto r = parse_int<long long>(toks[0]);
    const auto c = parse_int<long long>(toks[1]);
    const auto v = parse_double(toks[2]);
    if (!r || !c || !v) throw ParseError(lineno, "malformed entry");
    if (*r < 0 || *r >= *rows || *c < 0 || *c >= *cols) {
      throw ParseError(lineno, "entry out of range");
    }
    trip.emplace_back(static_cast<Index>(*r), static_cast<Index>(*c), *v);
  }
  SparseMatrix m(static_cast<Index>(*rows), static_cast<Index>(*cols));
  m.setFromTriplets(trip.begin(), trip.end(), [lineno](double, double) -> double {
    throw ParseError(lineno, "duplicate entry");
  });
  m.makeCompressed();
  return m;
}

/// Dense vectors: length on the first line, then one value per line.
inline void write_vector(std::ostream& out, const Vector& v) {
  out << v.size() << '\n';
  for (Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
}

inline Vector read_vector(std::istream& in) {
  long long n = -1;
  if (!(in >> n) || n < 0) throw ParseError(1, "expected vector length");
  Vector v(static_cast<Index>(n));
  std::string tok;
  for (long long i = 0; i < n; ++i) {
    if (!(in >> tok)) throw ParseError(static_cast<std::size_t>(i + 2), "vector truncated");
    const auto x = parse_double(tok);
    if (!x) throw ParseError(static_cast<std::size_t>(i + 2), "malformed value '" + tok + "'");
    v[static_cast<Index>(i)] = *x;
  }
  return v;
}

}  // namespace adaprox
