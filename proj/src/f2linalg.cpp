#include "charclass/f2linalg.hpp"

#include <algorithm>
#include <bit>
#include <utility>

#include "charclass/errors.hpp"

namespace charclass {

F2Vector::F2Vector(std::initializer_list<int> bits) : F2Vector(bits.size()) {
  std::size_t i = 0;
  for (int b : bits) set(i++, (b & 1) != 0);
}

F2Vector F2Vector::unit(std::size_t size, std::size_t index) {
  F2Vector v(size);
  v.set(index);
  return v;
}

void F2Vector::set(std::size_t i, bool value) {
  const F2Word mask = F2Word{1} << (i % kF2WordBits);
  if (value) {
    words_[i / kF2WordBits] |= mask;
  } else {
    words_[i / kF2WordBits] &= ~mask;
  }
}

bool F2Vector::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](F2Word w) { return w == 0; });
}

std::size_t F2Vector::weight() const {
  std::size_t total = 0;
  for (F2Word w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::vector<std::size_t> F2Vector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    F2Word w = words_[k];
    while (w != 0) {
      out.push_back(k * kF2WordBits + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

F2Vector& F2Vector::operator+=(const F2Vector& other) {
  if (other.size_ != size_) throw ContractViolation("F2Vector: size mismatch in addition");
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
  return *this;
}

std::string F2Vector::to_string() const {
  std::string s;
  s.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) s.push_back(get(i) ? '1' : '0');
  return s;
}

F2Matrix::F2Matrix(std::initializer_list<std::initializer_list<int>> rows)
    : F2Matrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ContractViolation("F2Matrix: ragged initializer");
    std::size_t c = 0;
    for (int b : row) set(r, c++, (b & 1) != 0);
    ++r;
  }
}

F2Matrix F2Matrix::identity(std::size_t n) {
  F2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

F2Matrix F2Matrix::from_rows(std::size_t cols, const std::vector<F2Vector>& rows) {
  F2Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

F2Matrix F2Matrix::from_columns(std::size_t rows, const std::vector<F2Vector>& cols) {
  F2Matrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) m.set_column(c, cols[c]);
  return m;
}

void F2Matrix::set(std::size_t r, std::size_t c, bool value) {
  F2Word& w = data_[r * stride_ + c / kF2WordBits];
  const F2Word mask = F2Word{1} << (c % kF2WordBits);
  if (value) {
    w |= mask;
  } else {
    w &= ~mask;
  }
}

F2Vector F2Matrix::row(std::size_t r) const {
  F2Vector v(cols_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(r * stride_), stride_, v.words().begin());
  return v;
}

F2Vector F2Matrix::column(std::size_t c) const {
  F2Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (get(r, c)) v.set(r);
  }
  return v;
}

void F2Matrix::set_row(std::size_t r, const F2Vector& v) {
  if (v.size() != cols_) throw ContractViolation("F2Matrix::set_row: length mismatch");
  std::copy(v.words().begin(), v.words().end(), data_.begin() + static_cast<std::ptrdiff_t>(r * stride_));
}

void F2Matrix::set_column(std::size_t c, const F2Vector& v) {
  if (v.size() != rows_) throw ContractViolation("F2Matrix::set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) set(r, c, v.get(r));
}

void F2Matrix::add_row(std::size_t dst, std::size_t src) {
  F2Word* d = data_.data() + dst * stride_;
  const F2Word* s = data_.data() + src * stride_;
  for (std::size_t k = 0; k < stride_; ++k) d[k] ^= s[k];
}

void F2Matrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                   data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                   data_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
}

bool F2Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](F2Word w) { return w == 0; });
}

namespace {

// In-place Gauss-Jordan on the first `pivot_cols` columns of m. Returns the
// pivot columns; rows [0, rank) hold the pivots afterwards.
std::vector<std::size_t> gauss_jordan(F2Matrix& m, std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  std::size_t next = 0;
  for (std::size_t c = 0; c < pivot_cols && next < m.rows(); ++c) {
    std::size_t r = next;
    while (r < m.rows() && !m.get(r, c)) ++r;
    if (r == m.rows()) continue;
    m.swap_rows(next, r);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i != next && m.get(i, c)) m.add_row(i, next);
    }
    pivots.push_back(c);
    ++next;
  }
  return pivots;
}

}  // namespace

F2Vector F2Echelon::reduce(F2Vector v) const {
  if (v.size() != reduced.cols()) throw ContractViolation("F2Echelon::reduce: length mismatch");
  auto vw = v.words();
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (!v.get(pivots[i])) continue;
    auto rw = reduced.row_words(i);
    for (std::size_t k = 0; k < vw.size(); ++k) vw[k] ^= rw[k];
  }
  return v;
}

F2Echelon echelon(const F2Matrix& m) {
  F2Matrix work = m;
  std::vector<std::size_t> pivots = gauss_jordan(work, work.cols());
  F2Matrix reduced(pivots.size(), m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    auto src = work.row_words(i);
    std::copy(src.begin(), src.end(), reduced.row_words(i).begin());
  }
  return F2Echelon{std::move(reduced), std::move(pivots)};
}

std::size_t rank(const F2Matrix& m) {
  F2Matrix work = m;
  return gauss_jordan(work, work.cols()).size();
}

F2Matrix transpose(const F2Matrix& m) {
  F2Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.get(r, c)) t.set(c, r);
    }
  }
  return t;
}

F2Vector multiply(const F2Matrix& m, const F2Vector& v) {
  if (v.size() != m.cols()) throw ContractViolation("multiply: matrix/vector size mismatch");
  F2Vector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto rw = m.row_words(r);
    auto vw = v.words();
    F2Word acc = 0;
    for (std::size_t k = 0; k < rw.size(); ++k) acc ^= rw[k] & vw[k];
    if (std::popcount(acc) & 1) out.set(r);
  }
  return out;
}

F2Matrix multiply(const F2Matrix& a, const F2Matrix& b) {
  if (a.cols() != b.rows()) throw ContractViolation("multiply: inner dimensions differ");
  F2Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row_words(r);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (!a.get(r, k)) continue;
      auto src = b.row_words(k);
      for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
    }
  }
  return out;
}

std::vector<F2Vector> kernel_basis(const F2Matrix& m) {
  const F2Echelon e = echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;

  std::vector<F2Vector> basis;
  basis.reserve(m.cols() - e.rank());
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    F2Vector v(m.cols());
    v.set(f);
    for (std::size_t i = 0; i < e.rank(); ++i) {
      if (e.reduced.get(i, f)) v.set(e.pivots[i]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::optional<F2Vector>> solve_columns(const F2Matrix& m, const std::vector<F2Vector>& rhs) {
  for (const auto& b : rhs) {
    if (b.size() != m.rows()) throw ContractViolation("solve: right-hand side length differs from row count");
  }
  F2Matrix aug(m.rows(), m.cols() + rhs.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.get(r, c)) aug.set(r, c);
    }
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (rhs[j].get(r)) aug.set(r, m.cols() + j);
    }
  }
  const std::vector<std::size_t> pivots = gauss_jordan(aug, m.cols());

  std::vector<std::optional<F2Vector>> out;
  out.reserve(rhs.size());
  for (std::size_t j = 0; j < rhs.size(); ++j) {
    const std::size_t col = m.cols() + j;
    bool consistent = true;
    for (std::size_t r = pivots.size(); r < m.rows(); ++r) {
      if (aug.get(r, col)) {
        consistent = false;
        break;
      }
    }
    if (!consistent) {
      out.emplace_back(std::nullopt);
      continue;
    }
    F2Vector x(m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      if (aug.get(i, col)) x.set(pivots[i]);
    }
    out.emplace_back(std::move(x));
  }
  return out;
}

std::optional<F2Vector> solve(const F2Matrix& m, const F2Vector& b) {
  return std::move(solve_columns(m, {b}).front());
}

std::vector<F2Vector> column_space_basis(const F2Matrix& m) {
  const F2Echelon e = echelon(transpose(m));
  std::vector<F2Vector> out;
  out.reserve(e.rank());
  for (std::size_t i = 0; i < e.rank(); ++i) out.push_back(e.reduced.row(i));
  return out;
}

}  // namespace charclass
