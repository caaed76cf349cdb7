#pragma once

// Dense linear algebra over the two-element field.
//
// Rows are packed 64 columns per word; elimination XORs whole words. All
// types are plain values and every function is pure, so sharing across
// threads needs no synchronisation.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace charclass {

using F2Word = std::uint64_t;
inline constexpr std::size_t kF2WordBits = 64;

inline constexpr std::size_t f2_words_for(std::size_t bits) {
  return (bits + kF2WordBits - 1) / kF2WordBits;
}

class F2Vector {
 public:
  F2Vector() = default;
  explicit F2Vector(std::size_t size) : size_(size), words_(f2_words_for(size), 0) {}
  F2Vector(std::initializer_list<int> bits);

  static F2Vector unit(std::size_t size, std::size_t index);

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return (words_[i / kF2WordBits] >> (i % kF2WordBits)) & 1U; }
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i) { words_[i / kF2WordBits] ^= F2Word{1} << (i % kF2WordBits); }

  bool is_zero() const;
  std::size_t weight() const;
  // Indices of the set bits, ascending.
  std::vector<std::size_t> support() const;

  F2Vector& operator+=(const F2Vector& other);
  friend F2Vector operator+(F2Vector lhs, const F2Vector& rhs) { return lhs += rhs; }
  friend bool operator==(const F2Vector&, const F2Vector&) = default;

  std::span<const F2Word> words() const { return words_; }
  std::span<F2Word> words() { return words_; }

  std::string to_string() const;

 private:
  std::size_t size_ = 0;
  std::vector<F2Word> words_;
};

class F2Matrix {
 public:
  F2Matrix() = default;
  F2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(f2_words_for(cols)), data_(rows * stride_, 0) {}
  F2Matrix(std::initializer_list<std::initializer_list<int>> rows);

  static F2Matrix identity(std::size_t n);
  static F2Matrix from_rows(std::size_t cols, const std::vector<F2Vector>& rows);
  static F2Matrix from_columns(std::size_t rows, const std::vector<F2Vector>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * stride_ + c / kF2WordBits] >> (c % kF2WordBits)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool value = true);

  std::span<const F2Word> row_words(std::size_t r) const { return {data_.data() + r * stride_, stride_}; }
  std::span<F2Word> row_words(std::size_t r) { return {data_.data() + r * stride_, stride_}; }

  F2Vector row(std::size_t r) const;
  F2Vector column(std::size_t c) const;
  void set_row(std::size_t r, const F2Vector& v);
  void set_column(std::size_t c, const F2Vector& v);

  // row[dst] ^= row[src]
  void add_row(std::size_t dst, std::size_t src);
  void swap_rows(std::size_t a, std::size_t b);

  bool is_zero() const;
  friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<F2Word> data_;
};

// Reduced row-echelon form with leftmost-column, topmost-row pivots.
// `reduced` keeps only the rank nonzero rows; `pivots[i]` is the pivot
// column of row i, strictly increasing.
struct F2Echelon {
  F2Matrix reduced;
  std::vector<std::size_t> pivots;

  std::size_t rank() const { return pivots.size(); }
  // Clears the pivot coordinates of v against the reduced rows; the result
  // is the canonical representative of v modulo the row space.
  F2Vector reduce(F2Vector v) const;
  bool in_row_space(const F2Vector& v) const { return reduce(v).is_zero(); }
};

F2Echelon echelon(const F2Matrix& m);
std::size_t rank(const F2Matrix& m);
F2Matrix transpose(const F2Matrix& m);
F2Vector multiply(const F2Matrix& m, const F2Vector& v);
F2Matrix multiply(const F2Matrix& a, const F2Matrix& b);

// Basis of {v : m v = 0}: one vector per non-pivot column f, with f set and
// the pivot variables read off the reduced rows.
std::vector<F2Vector> kernel_basis(const F2Matrix& m);

// Some x with m x = b, free variables zero; nullopt if inconsistent.
std::optional<F2Vector> solve(const F2Matrix& m, const F2Vector& b);

// Same as solve() for many right-hand sides with one elimination.
std::vector<std::optional<F2Vector>> solve_columns(const F2Matrix& m, const std::vector<F2Vector>& rhs);

// Reduced (canonical) basis of the column space of m.
std::vector<F2Vector> column_space_basis(const F2Matrix& m);

}  // namespace charclass
