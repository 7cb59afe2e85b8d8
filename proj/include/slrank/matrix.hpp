#pragma once

// Dense matrices over a Field, exact elimination, and the normalized rank metric.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slrank/field.hpp"
#include "slrank/random.hpp"
#include "slrank/rational.hpp"

namespace slrank {

class MatF {
 public:
  MatF(FieldPtr field, std::size_t rows, std::size_t cols);

  static MatF identity(FieldPtr field, std::size_t n);
  static MatF scalar(FieldPtr field, std::size_t n, Fq z);
  static MatF random(FieldPtr field, std::size_t rows, std::size_t cols, Rng& rng);
  // Row-major list of element codes.
  static MatF from_rows(FieldPtr field, const std::vector<std::vector<std::uint32_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }

  Fq operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Fq& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const Fq> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Fq> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Fq>& data() const { return data_; }

  bool is_identity() const;
  bool is_zero() const;

  friend bool operator==(const MatF& a, const MatF& b);

 private:
  FieldPtr field_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Fq> data_;
};

// Shape and field checks throw usage_error.
MatF operator+(const MatF& a, const MatF& b);
MatF operator-(const MatF& a, const MatF& b);
MatF operator*(const MatF& a, const MatF& b);
MatF scale(const MatF& a, Fq s);
MatF transpose(const MatF& a);
// [[a, 0], [0, b]]
MatF block_diag(const MatF& a, const MatF& b);
// [[a, b], [c, d]]
MatF block(const MatF& a, const MatF& b, const MatF& c, const MatF& d);
// Same entries viewed over `to`. Every entry must be a valid code of `to`
// (subfield inclusion along a tower keeps codes).
MatF recast(const MatF& a, FieldPtr to);

std::size_t rank(const MatF& m);

namespace detail {
// Plain elimination on the unpacked entries, even over GF(2).
std::size_t rank_unpacked(const MatF& m);
}  // namespace detail

struct DetInv {
  Fq det;
  std::optional<MatF> inverse;  // absent iff det == 0
};
DetInv det_inv(const MatF& m);
Fq det(const MatF& m);

// rank(g - h) / n as an exact fraction.
Rational rank_distance(const MatF& g, const MatF& h);

// Element of SL_n(q): a square matrix of determinant one.
class SLElement {
 public:
  // usage_error unless m is square with det 1.
  explicit SLElement(MatF m);

  static SLElement identity(FieldPtr field, std::size_t n) {
    return SLElement(MatF::identity(std::move(field), n), trusted);
  }

  const MatF& mat() const { return m_; }
  std::size_t n() const { return m_.rows(); }
  const FieldPtr& field() const { return m_.field_ptr(); }

  SLElement operator*(const SLElement& o) const { return SLElement(m_ * o.m_, trusted); }
  SLElement inverse() const;

  friend bool operator==(const SLElement&, const SLElement&) = default;

 private:
  struct Trusted {};
  static constexpr Trusted trusted{};
  SLElement(MatF m, Trusted) : m_(std::move(m)) {}

  friend SLElement sample_sl(std::size_t, const FieldPtr&, Rng&);
  MatF m_;
};

// Uniform on SL_n(q): rejection-sampled GL_n(q), first row scaled by det^-1.
// Over GF(2) the packed row-by-row sampler is used instead.
SLElement sample_sl(std::size_t n, const FieldPtr& field, Rng& rng);

struct CentralDistance {
  Rational delta;
  Fq z;  // smallest code attaining the minimum
};
// min over z in F_q^x of d(g, z id).
CentralDistance central_distance(const MatF& g);

// Text form: header "rows cols q", then one line per row of element tuples.
std::string to_text(const MatF& m);
// The field is GF(q) with the default modulus unless `field` is given.
MatF matrix_from_text(std::string_view text, FieldPtr field = nullptr);

nlohmann::json to_json(const MatF& m);
MatF matrix_from_json(const nlohmann::json& j);

std::ostream& operator<<(std::ostream& os, const MatF& m);

}  // namespace slrank
