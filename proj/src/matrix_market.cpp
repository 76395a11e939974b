#include "hilucsi/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>
#include <vector>

#include "hilucsi/errors.hpp"

namespace hilucsi {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::pair<SparseMatrix, SymmetryTag> read_matrix_market(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw UnsupportedFormatError("empty file: " + path);

  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix")
    throw UnsupportedFormatError("malformed Matrix Market header: " + line);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate")
    throw UnsupportedFormatError("unsupported format '" + format + "' (coordinate only)");
  if (field != "real" && field != "integer")
    throw UnsupportedFormatError("unsupported field '" + field + "' (real/integer only)");
  if (symmetry != "general" && symmetry != "symmetric")
    throw UnsupportedFormatError("unsupported symmetry '" + symmetry + "'");
  const SymmetryTag tag =
      symmetry == "symmetric" ? SymmetryTag::Symmetric : SymmetryTag::General;

  // skip comments / blank lines up to the size line
  index_t n_rows = -1, n_cols = -1, n_entries = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    if (!(ss >> n_rows >> n_cols >> n_entries))
      throw InputError("malformed size line: " + line);
    break;
  }
  if (n_rows < 0) throw InputError("missing size line in " + path);

  std::vector<std::tuple<index_t, index_t, double>> trips;
  trips.reserve(static_cast<std::size_t>(n_entries) *
                (tag == SymmetryTag::Symmetric ? 2 : 1));
  for (index_t e = 0; e < n_entries; ++e) {
    index_t i, j;
    double v;
    if (!(in >> i >> j >> v)) throw InputError("truncated entry list in " + path);
    if (i < 1 || i > n_rows || j < 1 || j > n_cols)
      throw InputError("entry index out of range in " + path);
    trips.emplace_back(i - 1, j - 1, v);
    if (tag == SymmetryTag::Symmetric && i != j) trips.emplace_back(j - 1, i - 1, v);
  }
  return {build_from_triplets(trips, n_rows, n_cols), tag};
}

void write_matrix_market(const std::string &path, const SparseMatrix &a) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open file for writing: " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.n_rows << ' ' << a.n_cols << ' ' << a.nnz() << '\n';
  out.precision(std::numeric_limits<double>::max_digits10);
  for (index_t i = 0; i < a.n_rows; ++i)
    for (index_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      out << i + 1 << ' ' << a.col_indices[k] + 1 << ' ' << a.values[k] << '\n';
  if (!out) throw InputError("write failed: " + path);
}

}  // namespace hilucsi
