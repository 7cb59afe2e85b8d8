#include "slrank/matrix.hpp"

#include <ostream>
#include <sstream>

#include "slrank/errors.hpp"
#include "slrank/gf2.hpp"

namespace slrank {

MatF::MatF(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols) {
  if (!field_) throw usage_error("matrix without a field");
}

MatF MatF::identity(FieldPtr field, std::size_t n) { return scalar(std::move(field), n, Fq{1}); }

MatF MatF::scalar(FieldPtr field, std::size_t n, Fq z) {
  MatF m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = z;
  return m;
}

MatF MatF::random(FieldPtr field, std::size_t rows, std::size_t cols, Rng& rng) {
  MatF m(std::move(field), rows, cols);
  for (auto& x : m.data_) x = m.field_->random(rng);
  return m;
}

MatF MatF::from_rows(FieldPtr field, const std::vector<std::vector<std::uint32_t>>& rows) {
  const std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
  MatF m(std::move(field), r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw usage_error("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) {
      const Fq x{rows[i][j]};
      if (!m.field_->valid(x)) throw usage_error("entry out of range for " + m.field_->descriptor());
      m(i, j) = x;
    }
  }
  return m;
}

bool MatF::is_identity() const {
  if (!square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j).v != (i == j ? 1u : 0u)) return false;
  return true;
}

bool MatF::is_zero() const {
  for (auto x : data_)
    if (x.v != 0) return false;
  return true;
}

bool operator==(const MatF& a, const MatF& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && same_field(*a.field_, *b.field_) &&
         a.data_ == b.data_;
}

namespace {

void require_same_field(const MatF& a, const MatF& b) {
  if (!same_field(a.field(), b.field()))
    throw usage_error("field mismatch: " + a.field().descriptor() + " vs " + b.field().descriptor());
}

void require_same_shape(const MatF& a, const MatF& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw usage_error("shape mismatch: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                      " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

// Arithmetic policies for the elimination kernels.
struct PrimeOps {
  std::uint64_t p;
  const Field* f;
  Fq mul(Fq a, Fq b) const { return Fq{static_cast<std::uint32_t>(a.v * std::uint64_t{b.v} % p)}; }
  Fq neg(Fq a) const { return Fq{a.v == 0 ? 0u : static_cast<std::uint32_t>(p - a.v)}; }
  Fq inv(Fq a) const { return f->inv(a); }
  // x + m y
  Fq axpy(Fq x, Fq m, Fq y) const {
    return Fq{static_cast<std::uint32_t>((x.v + m.v * std::uint64_t{y.v}) % p)};
  }
};

struct GenericOps {
  const Field* f;
  Fq mul(Fq a, Fq b) const { return f->mul(a, b); }
  Fq neg(Fq a) const { return f->neg(a); }
  Fq inv(Fq a) const { return f->inv(a); }
  Fq axpy(Fq x, Fq m, Fq y) const { return f->add(x, f->mul(m, y)); }
};

template <class Fn>
decltype(auto) with_ops(const Field& f, Fn&& fn) {
  if (f.kind() == Field::Kind::prime) return fn(PrimeOps{f.characteristic(), &f});
  return fn(GenericOps{&f});
}

// Row echelon form in place; returns the rank. When det != nullptr and the
// matrix is square, *det receives the determinant.
template <class Ops>
std::size_t echelon(std::vector<Fq>& a, std::size_t rows, std::size_t cols, const Ops& ops,
                    Fq* det) {
  std::size_t r = 0;
  Fq d{1};
  bool negate = false;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv * cols + c].v == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      std::swap_ranges(a.begin() + piv * cols, a.begin() + (piv + 1) * cols, a.begin() + r * cols);
      negate = !negate;
    }
    Fq* prow = a.data() + r * cols;
    d = ops.mul(d, prow[c]);
    const Fq pinv = ops.inv(prow[c]);
    for (std::size_t j = r + 1; j < rows; ++j) {
      Fq* row = a.data() + j * cols;
      if (row[c].v == 0) continue;
      const Fq m = ops.neg(ops.mul(row[c], pinv));
      for (std::size_t k = c; k < cols; ++k) row[k] = ops.axpy(row[k], m, prow[k]);
    }
    ++r;
  }
  if (det) *det = (r < rows || rows != cols) ? Fq{0} : (negate ? ops.neg(d) : d);
  return r;
}

}  // namespace

MatF operator+(const MatF& a, const MatF& b) {
  require_same_shape(a, b);
  MatF c(a.field_ptr(), a.rows(), a.cols());
  const Field& f = a.field();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.add(a(i, j), b(i, j));
  return c;
}

MatF operator-(const MatF& a, const MatF& b) {
  require_same_shape(a, b);
  MatF c(a.field_ptr(), a.rows(), a.cols());
  const Field& f = a.field();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.sub(a(i, j), b(i, j));
  return c;
}

MatF operator*(const MatF& a, const MatF& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) throw usage_error("inner dimensions differ in matrix product");
  MatF c(a.field_ptr(), a.rows(), b.cols());
  with_ops(a.field(), [&](const auto& ops) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      auto out = c.row(i);
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const Fq x = a(i, k);
        if (x.v == 0) continue;
        auto brow = b.row(k);
        for (std::size_t j = 0; j < b.cols(); ++j) out[j] = ops.axpy(out[j], x, brow[j]);
      }
    }
    return 0;
  });
  return c;
}

MatF scale(const MatF& a, Fq s) {
  MatF c(a.field_ptr(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a.field().mul(s, a(i, j));
  return c;
}

MatF transpose(const MatF& a) {
  MatF t(a.field_ptr(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

MatF block(const MatF& a, const MatF& b, const MatF& c, const MatF& d) {
  require_same_field(a, b);
  require_same_field(a, c);
  require_same_field(a, d);
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
    throw usage_error("incompatible block shapes");
  MatF m(a.field_ptr(), a.rows() + c.rows(), a.cols() + b.cols());
  auto put = [&m](const MatF& x, std::size_t r0, std::size_t c0) {
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) m(r0 + i, c0 + j) = x(i, j);
  };
  put(a, 0, 0);
  put(b, 0, a.cols());
  put(c, a.rows(), 0);
  put(d, a.rows(), a.cols());
  return m;
}

MatF block_diag(const MatF& a, const MatF& b) {
  return block(a, MatF(a.field_ptr(), a.rows(), b.cols()), MatF(a.field_ptr(), b.rows(), a.cols()),
               b);
}

MatF recast(const MatF& a, FieldPtr to) {
  if (to->characteristic() != a.field().characteristic())
    throw usage_error("recast across characteristics");
  MatF m(std::move(to), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!m.field().valid(a(i, j))) throw usage_error("entry not representable in target field");
      m(i, j) = a(i, j);
    }
  return m;
}

std::size_t rank(const MatF& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (m.field().order() == 2) return rank(BitMat::from(m));
  return detail::rank_unpacked(m);
}

std::size_t detail::rank_unpacked(const MatF& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  std::vector<Fq> a = m.data();
  return with_ops(m.field(),
                  [&](const auto& ops) { return echelon(a, m.rows(), m.cols(), ops, nullptr); });
}

Fq det(const MatF& m) {
  if (!m.square()) throw usage_error("determinant of a non-square matrix");
  if (m.rows() == 0) return Fq{1};
  std::vector<Fq> a = m.data();
  Fq d{0};
  with_ops(m.field(), [&](const auto& ops) { return echelon(a, m.rows(), m.cols(), ops, &d); });
  return d;
}

DetInv det_inv(const MatF& m) {
  if (!m.square()) throw usage_error("inverse of a non-square matrix");
  const std::size_t n = m.rows(), w = 2 * n;
  std::vector<Fq> a(n * w);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * w + j] = m(i, j);
    a[i * w + n + i] = Fq{1};
  }
  return with_ops(m.field(), [&](const auto& ops) -> DetInv {
    Fq d{1};
    bool negate = false;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && a[piv * w + c].v == 0) ++piv;
      if (piv == n) return DetInv{Fq{0}, std::nullopt};
      if (piv != c) {
        std::swap_ranges(a.begin() + piv * w, a.begin() + (piv + 1) * w, a.begin() + c * w);
        negate = !negate;
      }
      Fq* prow = a.data() + c * w;
      d = ops.mul(d, prow[c]);
      const Fq pinv = ops.inv(prow[c]);
      for (std::size_t k = c; k < w; ++k) prow[k] = ops.mul(prow[k], pinv);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        Fq* row = a.data() + j * w;
        if (row[c].v == 0) continue;
        const Fq f = ops.neg(row[c]);
        for (std::size_t k = c; k < w; ++k) row[k] = ops.axpy(row[k], f, prow[k]);
      }
    }
    MatF inv(m.field_ptr(), n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) inv(i, j) = a[i * w + n + j];
    return DetInv{negate ? ops.neg(d) : d, std::move(inv)};
  });
}

Rational rank_distance(const MatF& g, const MatF& h) {
  require_same_shape(g, h);
  if (!g.square() || g.rows() == 0) throw usage_error("rank distance needs square matrices");
  return Rational(static_cast<std::int64_t>(rank(g - h)), static_cast<std::int64_t>(g.rows()));
}

SLElement::SLElement(MatF m) : m_(std::move(m)) {
  if (!m_.square() || m_.rows() == 0) throw usage_error("SL element must be a non-empty square matrix");
  if (det(m_) != m_.field().one()) throw usage_error("SL element must have determinant 1");
}

SLElement SLElement::inverse() const { return SLElement(*det_inv(m_).inverse, trusted); }

SLElement sample_sl(std::size_t n, const FieldPtr& field, Rng& rng) {
  if (n == 0) throw usage_error("SL_0 is not defined");
  if (field->order() == 2) return SLElement(BitMat::sample_gl(n, rng).to_matf(field), SLElement::trusted);
  const Field& f = *field;
  while (true) {
    MatF m = MatF::random(field, n, n, rng);
    const Fq d = det(m);
    if (d.v == 0) continue;
    const Fq s = f.inv(d);
    for (auto& x : m.row(0)) x = f.mul(s, x);
    return SLElement(std::move(m), SLElement::trusted);
  }
}

CentralDistance central_distance(const MatF& g) {
  if (!g.square() || g.rows() == 0) throw usage_error("central distance needs a square matrix");
  const Field& f = g.field();
  CentralDistance best{Rational(2), Fq{0}};
  for (std::uint64_t z = 1; z < f.order(); ++z) {
    const Fq zz{static_cast<std::uint32_t>(z)};
    const Rational d = rank_distance(g, MatF::scalar(g.field_ptr(), g.rows(), zz));
    if (d < best.delta) best = {d, zz};
    if (best.delta.numerator() == 0) break;
  }
  return best;
}

std::string to_text(const MatF& m) {
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << ' ' << m.field().order() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m.field().format(m(i, j));
    }
    os << '\n';
  }
  return os.str();
}

MatF matrix_from_text(std::string_view text, FieldPtr field) {
  std::istringstream is{std::string(text)};
  std::size_t rows = 0, cols = 0;
  std::uint64_t q = 0;
  if (!(is >> rows >> cols >> q)) throw usage_error("matrix text needs a 'rows cols q' header");
  if (!field) field = Field::make(q);
  if (field->order() != q) throw usage_error("header field order does not match the given field");
  MatF m(field, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      std::string tok;
      if (!(is >> tok)) throw usage_error("matrix text ended early");
      m(i, j) = field->parse(tok);
    }
  std::string extra;
  if (is >> extra) throw usage_error("trailing data after matrix: '" + extra + "'");
  return m;
}

nlohmann::json to_json(const MatF& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m.field().format(m(i, j)));
    rows.push_back(std::move(r));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"field", to_json(m.field())}, {"entries", rows}};
}

MatF matrix_from_json(const nlohmann::json& j) {
  try {
    auto field = field_from_json(j.at("field"));
    const auto rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
    const auto& e = j.at("entries");
    if (e.size() != rows) throw usage_error("entries do not match row count");
    MatF m(field, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      if (e[i].size() != cols) throw usage_error("entries do not match column count");
      for (std::size_t c = 0; c < cols; ++c) m(i, c) = field->parse(e[i][c].get<std::string>());
    }
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw usage_error(std::string("malformed matrix JSON: ") + ex.what());
  }
}

std::ostream& operator<<(std::ostream& os, const MatF& m) { return os << to_text(m); }

}  // namespace slrank
