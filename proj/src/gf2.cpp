#include "slrank/gf2.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "slrank/errors.hpp"

namespace slrank {

namespace {

std::uint64_t tail_mask(std::size_t cols) {
  return cols % 64 ? (std::uint64_t{1} << (cols % 64)) - 1 : ~std::uint64_t{0};
}

}  // namespace

BitMat::BitMat(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_((cols + 63) / 64), words_(rows * stride_, 0) {}

BitMat BitMat::identity(std::size_t n) {
  BitMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMat BitMat::random(std::size_t rows, std::size_t cols, Rng& rng) {
  BitMat m(rows, cols);
  const std::uint64_t mask = tail_mask(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = m.row(r);
    for (auto& w : row) w = rng();
    if (!row.empty()) row.back() &= mask;
  }
  return m;
}

BitMat BitMat::sample_gl(std::size_t n, Rng& rng, std::size_t tail) {
  BitMat m(n, n);
  const std::size_t s = m.stride_;
  const std::uint64_t mask = tail_mask(n);
  auto fill = [&](std::span<std::uint64_t> row) {
    for (auto& w : row) w = rng();
    row.back() &= mask;
  };
  // Echelon basis of the rows accepted so far, in pivot order; the pivot of
  // each entry is its lowest set bit and is zero in every later entry.
  std::vector<std::uint64_t> basis(n * s);
  std::vector<std::size_t> pivots;
  pivots.reserve(n);

  // All but the last few rows are drawn together and redrawn together until
  // independent; the rest are drawn one at a time outside the current span.
  const std::size_t head = n > tail ? n - tail : 0;
  if (head) {
    BitMat block(head, n);
    do {
      for (std::size_t i = 0; i < head; ++i) fill(m.row(i));
      std::copy(m.words_.begin(), m.words_.begin() + static_cast<std::ptrdiff_t>(head * s), block.words_.begin());
      pivots.clear();
    } while (echelonize(block, &pivots) < head);
    std::copy(block.words_.begin(), block.words_.end(), basis.begin());
  }

  std::vector<std::uint64_t> tmp(s);
  for (std::size_t i = head; i < n; ++i) {
    auto row = m.row(i);
    while (true) {
      fill(row);
      std::copy(row.begin(), row.end(), tmp.begin());
      for (std::size_t b = 0; b < pivots.size(); ++b) {
        const std::size_t p = pivots[b];
        if ((tmp[p / 64] >> (p % 64)) & 1u) {
          const std::uint64_t* src = basis.data() + b * s;
          for (std::size_t w = p / 64; w < s; ++w) tmp[w] ^= src[w];
        }
      }
      std::size_t w = 0;
      while (w < s && tmp[w] == 0) ++w;
      if (w == s) continue;
      pivots.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(tmp[w])));
      std::copy(tmp.begin(), tmp.end(), basis.begin() + static_cast<std::ptrdiff_t>((pivots.size() - 1) * s));
      break;
    }
  }
  return m;
}

BitMat BitMat::from(const MatF& m) {
  if (m.field().order() != 2) throw usage_error("packed matrices are over GF(2) only");
  BitMat b(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j).v) b.set(i, j, true);
  return b;
}

MatF BitMat::to_matf(FieldPtr gf2) const {
  if (gf2->order() != 2) throw usage_error("packed matrices are over GF(2) only");
  MatF m(std::move(gf2), rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = Fq{get(i, j) ? 1u : 0u};
  return m;
}

BitMat& BitMat::operator+=(const BitMat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw usage_error("shape mismatch in packed sum");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

// Method of four Russians with 8-bit tables of row combinations of b.
BitMat operator*(const BitMat& a, const BitMat& b) {
  if (a.cols_ != b.rows_) throw usage_error("inner dimensions differ in packed product");
  BitMat c(a.rows_, b.cols_);
  const std::size_t s = b.stride_;
  std::vector<std::uint64_t> table(256 * s);
  for (std::size_t k0 = 0; k0 < a.cols_; k0 += 8) {
    const std::size_t width = std::min<std::size_t>(8, a.cols_ - k0);
    const std::size_t entries = std::size_t{1} << width;
    for (std::size_t x = 1; x < entries; ++x) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(x));
      const std::uint64_t* prev = table.data() + (x & (x - 1)) * s;
      const std::uint64_t* src = b.words_.data() + (k0 + low) * s;
      std::uint64_t* dst = table.data() + x * s;
      for (std::size_t w = 0; w < s; ++w) dst[w] = prev[w] ^ src[w];
    }
    const std::size_t word = k0 / 64, shift = k0 % 64;
    for (std::size_t i = 0; i < a.rows_; ++i) {
      const std::size_t idx = (a.words_[i * a.stride_ + word] >> shift) & 0xffu;
      if (idx == 0) continue;
      const std::uint64_t* src = table.data() + idx * s;
      std::uint64_t* dst = c.words_.data() + i * s;
      for (std::size_t w = 0; w < s; ++w) dst[w] ^= src[w];
    }
  }
  return c;
}

std::vector<bool> BitMat::column(std::size_t c) const {
  std::vector<bool> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = get(r, c);
  return v;
}

bool BitMat::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t w = 0; w < stride_; ++w) {
      const std::uint64_t expect = (r / 64 == w) ? (std::uint64_t{1} << (r % 64)) : 0;
      if (words_[r * stride_ + w] != expect) return false;
    }
  return true;
}

namespace {

void xor_from(std::uint64_t* dst, const std::uint64_t* src, std::size_t from, std::size_t to) {
  for (std::size_t k = from; k < to; ++k) dst[k] ^= src[k];
}

}  // namespace

// Strips of eight columns: the strip's pivots are found and reduced against
// each other, then a 256-entry table of their combinations clears the strip
// from every remaining row with one lookup.
std::size_t echelonize(BitMat& m, std::vector<std::size_t>* pivot_cols) {
  const std::size_t rows = m.rows(), cols = m.cols(), s = m.stride();
  std::vector<std::uint64_t> table(256 * s);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; c += 8) {
    const std::size_t k = std::min<std::size_t>(8, cols - c);
    const std::size_t w = c / 64, shift = c % 64;
    auto bit = [&](std::size_t row, std::size_t i) { return (m.row(row)[w] >> (shift + i)) & 1u; };

    std::array<std::size_t, 8> strip_bit{};
    std::size_t p = 0;
    for (std::size_t i = 0; i < k && r + p < rows; ++i) {
      for (std::size_t j = r + p; j < rows; ++j) {
        std::uint64_t* row = m.row(j).data();
        for (std::size_t a = 0; a < p; ++a)
          if (bit(j, strip_bit[a])) xor_from(row, m.row(r + a).data(), w, s);
        if (!bit(j, i)) continue;
        // Rows from r on are zero left of the strip.
        if (j != r + p) {
          std::uint64_t* other = m.row(r + p).data();
          for (std::size_t x = w; x < s; ++x) std::swap(row[x], other[x]);
        }
        const std::uint64_t* prow = m.row(r + p).data();
        for (std::size_t a = 0; a < p; ++a)
          if (bit(r + a, i)) xor_from(m.row(r + a).data(), prow, w, s);
        strip_bit[p++] = i;
        break;
      }
    }
    if (p == 0) continue;

    std::array<int, 8> owner;
    owner.fill(-1);
    for (std::size_t a = 0; a < p; ++a) owner[strip_bit[a]] = static_cast<int>(a);
    std::fill(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(s), 0);
    for (std::size_t x = 1; x < 256; ++x) {
      std::uint64_t* dst = table.data() + x * s;
      const std::uint64_t* prev = table.data() + (x & (x - 1)) * s;
      const int a = owner[static_cast<std::size_t>(std::countr_zero(x))];
      if (a < 0) {
        std::copy(prev + w, prev + s, dst + w);
      } else {
        const std::uint64_t* src = m.row(r + static_cast<std::size_t>(a)).data();
        for (std::size_t y = w; y < s; ++y) dst[y] = prev[y] ^ src[y];
      }
    }
    for (std::size_t j = r + p; j < rows; ++j) {
      std::uint64_t* row = m.row(j).data();
      const std::size_t x = (row[w] >> shift) & 0xffu;
      if (x) xor_from(row, table.data() + x * s, w, s);
    }
    if (pivot_cols)
      for (std::size_t a = 0; a < p; ++a) pivot_cols->push_back(c + strip_bit[a]);
    r += p;
  }
  return r;
}

std::size_t rank_inplace(BitMat& m) { return echelonize(m); }

std::size_t rank_of_sum(const BitMat& a, const BitMat& b) {
  BitMat c = a;
  c += b;
  return rank_inplace(c);
}

Rational rank_distance(const BitMat& g, const BitMat& h) {
  if (g.rows() != g.cols() || g.rows() == 0) throw usage_error("rank distance needs square matrices");
  return Rational(static_cast<std::int64_t>(rank_of_sum(g, h)), static_cast<std::int64_t>(g.rows()));
}

}  // namespace slrank
