#include "adabb/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#ifdef ADABB_HAVE_ZLIB
#include <zlib.h>
#endif

namespace adabb {

// ---------------------------------------------------------------------------
// SparseMatrix
// ---------------------------------------------------------------------------

Vector SparseMatrix::multiply(const Vector& x) const {
  if (x.size() != cols) throw InvalidState("SparseMatrix::multiply: dim");
  Vector out = Vector::Zero(rows);
  for (int i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (std::int64_t p = offsets[i]; p < offsets[i + 1]; ++p)
      acc += values[p] * x[col_idx[p]];
    out[i] = acc;
  }
  return out;
}

Vector SparseMatrix::multiply_transpose(const Vector& v) const {
  if (v.size() != rows)
    throw InvalidState("SparseMatrix::multiply_transpose: dim");
  Vector out = Vector::Zero(cols);
  for (int i = 0; i < rows; ++i)
    for (std::int64_t p = offsets[i]; p < offsets[i + 1]; ++p)
      out[col_idx[p]] += values[p] * v[i];
  return out;
}

double SparseMatrix::row_dot(int i, const Vector& x) const {
  double acc = 0.0;
  for (std::int64_t p = offsets[i]; p < offsets[i + 1]; ++p)
    acc += values[p] * x[col_idx[p]];
  return acc;
}

Matrix SparseMatrix::to_dense() const {
  Matrix out = Matrix::Zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (std::int64_t p = offsets[i]; p < offsets[i + 1]; ++p)
      out(i, col_idx[p]) = values[p];
  return out;
}

SparseMatrix SparseMatrix::from_dense(const Matrix& A, double drop_tol) {
  SparseMatrix out;
  out.rows = static_cast<int>(A.rows());
  out.cols = static_cast<int>(A.cols());
  out.offsets.assign(1, 0);
  for (int i = 0; i < out.rows; ++i) {
    for (int j = 0; j < out.cols; ++j) {
      if (std::abs(A(i, j)) > drop_tol) {
        out.col_idx.push_back(j);
        out.values.push_back(A(i, j));
      }
    }
    out.offsets.push_back(static_cast<std::int64_t>(out.col_idx.size()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// parse_libsvm
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void parse_fail(std::int64_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

bool parse_double(const std::string& tok, double& out) {
  const char* s = tok.c_str();
  char* end = nullptr;
  out = std::strtod(s, &end);
  return end == s + tok.size() && !tok.empty();
}

bool parse_int(const std::string& tok, long& out) {
  const char* s = tok.c_str();
  char* end = nullptr;
  out = std::strtol(s, &end, 10);
  return end == s + tok.size() && !tok.empty();
}

}  // namespace

Dataset parse_libsvm(std::istream& in, const std::string& name,
                     int cols_override) {
  Dataset ds;
  ds.name = name;
  SparseMatrix& A = ds.features;
  A.offsets.assign(1, 0);
  std::vector<double> raw_labels;
  int max_col = 0;

  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;  // blank
    if (line[start] == '#') continue;          // comment

    std::istringstream ls(line.substr(start));
    std::string tok;
    if (!(ls >> tok)) continue;
    double label;
    if (!parse_double(tok, label))
      parse_fail(line_no, "bad label token '" + tok + "'");
    raw_labels.push_back(label);

    long prev_idx = 0;
    while (ls >> tok) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string::npos)
        parse_fail(line_no, "missing ':' in feature token '" + tok + "'");
      long idx;
      double val;
      if (!parse_int(tok.substr(0, colon), idx))
        parse_fail(line_no, "bad feature index in '" + tok + "'");
      if (!parse_double(tok.substr(colon + 1), val))
        parse_fail(line_no, "bad feature value in '" + tok + "'");
      if (idx < 1) parse_fail(line_no, "feature index must be >= 1");
      if (idx <= prev_idx)
        parse_fail(line_no, "feature indices must be strictly increasing");
      prev_idx = idx;
      A.col_idx.push_back(static_cast<int>(idx - 1));
      A.values.push_back(val);
      max_col = std::max(max_col, static_cast<int>(idx));
    }
    A.offsets.push_back(static_cast<std::int64_t>(A.col_idx.size()));
    ++A.rows;
  }

  if (A.rows == 0) throw ParseError("empty input: zero data rows");
  if (cols_override >= 0) {
    if (cols_override < max_col)
      throw ParseError("cols override " + std::to_string(cols_override) +
                       " below max feature index " + std::to_string(max_col));
    A.cols = cols_override;
  } else {
    A.cols = max_col;
  }

  // Label mapping to {0,1}.
  std::set<double> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() > 2)
    throw LabelError("expected at most two distinct labels, found " +
                     std::to_string(distinct.size()));
  ds.labels.resize(A.rows);
  if (distinct.size() == 2) {
    const double lo = *distinct.begin();
    const double hi = *distinct.rbegin();
    for (int i = 0; i < A.rows; ++i)
      ds.labels[i] = raw_labels[i] == hi ? 1.0 : 0.0;
    ds.meta["label_map"] = std::to_string(lo) + "->0," + std::to_string(hi) +
                           "->1";
  } else {
    const double only = *distinct.begin();
    const double mapped = only > 0.0 ? 1.0 : 0.0;
    ds.labels.setConstant(mapped);
    ds.meta["label_map"] =
        std::to_string(only) + "->" + std::to_string(int(mapped));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// load_libsvm_file
// ---------------------------------------------------------------------------

namespace {

#ifdef ADABB_HAVE_ZLIB
std::string gunzip(const std::string& blob) {
  z_stream zs;
  std::memset(&zs, 0, sizeof(zs));
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
    throw ParseError("gzip: inflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(blob.data()));
  zs.avail_in = static_cast<uInt>(blob.size());
  std::string out;
  char buf[1 << 16];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw ParseError("gzip: corrupt stream");
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
  }
  inflateEnd(&zs);
  return out;
}
#endif

}  // namespace

Dataset load_libsvm_file(const std::string& path, int cols_override) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  std::string blob = buf.str();

  if (blob.size() >= 2 && static_cast<unsigned char>(blob[0]) == 0x1f &&
      static_cast<unsigned char>(blob[1]) == 0x8b) {
#ifdef ADABB_HAVE_ZLIB
    blob = gunzip(blob);
#else
    throw ParseError("gzip input but zlib support not built");
#endif
  }

  std::istringstream in(blob);
  std::string name = path;
  const std::size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  return parse_libsvm(in, name, cols_override);
}

std::string serialize_libsvm(const Dataset& ds) {
  std::ostringstream out;
  char num[64];
  for (int i = 0; i < ds.features.rows; ++i) {
    std::snprintf(num, sizeof(num), "%.17g", ds.labels[i]);
    out << num;
    for (std::int64_t p = ds.features.offsets[i];
         p < ds.features.offsets[i + 1]; ++p) {
      std::snprintf(num, sizeof(num), "%.17g", ds.features.values[p]);
      out << ' ' << (ds.features.col_idx[p] + 1) << ':' << num;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace adabb
