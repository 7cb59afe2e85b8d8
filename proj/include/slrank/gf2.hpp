#pragma once

// Bit-packed matrices over GF(2): 64 columns per machine word, rows padded to
// a whole number of words. Used wherever n is in the hundreds.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "slrank/matrix.hpp"
#include "slrank/random.hpp"

namespace slrank {

class BitMat {
 public:
  BitMat() = default;
  BitMat(std::size_t rows, std::size_t cols);

  static BitMat identity(std::size_t n);
  static BitMat random(std::size_t rows, std::size_t cols, Rng& rng);
  // Uniform on GL_n(2) = SL_n(2). The first n - tail rows are redrawn as a
  // block until independent; each later row is redrawn while it lies in the
  // span of the rows before it.
  static BitMat sample_gl(std::size_t n, Rng& rng, std::size_t tail = 8);

  // usage_error unless m is over GF(2).
  static BitMat from(const MatF& m);
  MatF to_matf(FieldPtr gf2) const;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t stride() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const {
    return (words_[r * stride_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    auto& w = words_[r * stride_ + c / 64];
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    w = v ? (w | bit) : (w & ~bit);
  }
  void flip(std::size_t r, std::size_t c) {
    words_[r * stride_ + c / 64] ^= std::uint64_t{1} << (c % 64);
  }

  std::span<std::uint64_t> row(std::size_t r) { return {words_.data() + r * stride_, stride_}; }
  std::span<const std::uint64_t> row(std::size_t r) const {
    return {words_.data() + r * stride_, stride_};
  }

  BitMat& operator+=(const BitMat& o);
  friend BitMat operator+(BitMat a, const BitMat& b) { return a += b; }
  friend BitMat operator*(const BitMat& a, const BitMat& b);
  friend bool operator==(const BitMat&, const BitMat&) = default;

  // Column vector of column c.
  std::vector<bool> column(std::size_t c) const;
  bool is_identity() const;

 private:
  std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
  std::vector<std::uint64_t> words_;
};

// Row echelon form in place; returns the rank. The first rank rows are the
// pivot rows in increasing pivot column, each zero left of its pivot and at
// every other pivot of its eight-column strip. Pivot columns are appended to
// `pivot_cols` when given.
std::size_t echelonize(BitMat& m, std::vector<std::size_t>* pivot_cols = nullptr);

// Destroys `m`.
std::size_t rank_inplace(BitMat& m);
inline std::size_t rank(BitMat m) { return rank_inplace(m); }

// rank(a + b) without materializing a copy twice.
std::size_t rank_of_sum(const BitMat& a, const BitMat& b);

Rational rank_distance(const BitMat& g, const BitMat& h);

}  // namespace slrank
