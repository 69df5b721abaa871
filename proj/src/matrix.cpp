#include "relk/matrix.hpp"

#include <sstream>

namespace relk {

RatMat::RatMat(std::size_t rows, std::size_t cols, std::vector<Rat> entries)
    : rows_(rows), cols_(cols), e_(std::move(entries)) {
  if (e_.size() != rows_ * cols_)
    fail(Err::DimensionMismatch, "matrix entry count " + std::to_string(e_.size()) +
                                     " != " + std::to_string(rows_ * cols_));
}

RatMat RatMat::identity(std::size_t n) {
  RatMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::scalar(std::size_t n, const Rat& c) {
  RatMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = c;
  return m;
}

RatMat RatMat::operator*(const RatMat& o) const {
  if (cols_ != o.rows_)
    fail(Err::DimensionMismatch, "product " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                                     " * " + std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
  RatMat r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rat& a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const Rat& b = o.at(k, j);
        if (b != 0) r.at(i, j) += a * b;
      }
    }
  return r;
}

RatMat RatMat::operator+(const RatMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(Err::DimensionMismatch, "sum of unequal shapes");
  RatMat r(rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

RatMat RatMat::operator-(const RatMat& o) const { return *this + (-o); }

RatMat RatMat::operator-() const {
  RatMat r(rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = -e_[i];
  return r;
}

bool RatMat::is_zero() const {
  for (const auto& x : e_)
    if (x != 0) return false;
  return true;
}

bool RatMat::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (at(i, j) != Rat(i == j ? 1 : 0)) return false;
  return true;
}

bool RatMat::is_integer() const {
  for (const auto& x : e_)
    if (!rat_is_integer(x)) return false;
  return true;
}

RatMat RatMat::mod1() const {
  RatMat r(rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = rat_mod1(e_[i]);
  return r;
}

Rat RatMat::det() const {
  if (rows_ != cols_) fail(Err::DimensionMismatch, "determinant of non-square matrix");
  std::size_t n = rows_;
  if (n == 0) return 1;
  RatMat m = *this;
  Rat d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m.at(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(c, j));
      d = -d;
    }
    d *= m.at(c, c);
    Rat inv = Rat(1) / m.at(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      Rat f = m.at(i, c) * inv;
      if (f == 0) continue;
      for (std::size_t j = c; j < n; ++j) m.at(i, j) -= f * m.at(c, j);
    }
  }
  return d;
}

std::optional<RatMat> RatMat::inverse() const {
  if (rows_ != cols_) fail(Err::DimensionMismatch, "inverse of non-square matrix");
  std::size_t n = rows_;
  RatMat m = *this;
  RatMat inv = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m.at(piv, c) == 0) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m.at(piv, j), m.at(c, j));
        std::swap(inv.at(piv, j), inv.at(c, j));
      }
    Rat f = Rat(1) / m.at(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m.at(c, j) *= f;
      inv.at(c, j) *= f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m.at(i, c) == 0) continue;
      Rat g = m.at(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        m.at(i, j) -= g * m.at(c, j);
        inv.at(i, j) -= g * inv.at(c, j);
      }
    }
  }
  return inv;
}

RatMat RatMat::dsum(const RatMat& o) const {
  RatMat r(rows_ + o.rows_, cols_ + o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
  for (std::size_t i = 0; i < o.rows_; ++i)
    for (std::size_t j = 0; j < o.cols_; ++j) r.at(rows_ + i, cols_ + j) = o.at(i, j);
  return r;
}

RatMat RatMat::hcat(const RatMat& o) const {
  if (rows_ != o.rows_) fail(Err::DimensionMismatch, "hcat of unequal row counts");
  RatMat r(rows_, cols_ + o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
  }
  return r;
}

bool RatMat::is_block_diagonal(std::size_t block, std::size_t k) const {
  if (rows_ != block * k || cols_ != block * k) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i / block != j / block && at(i, j) != 0) return false;
  return true;
}

std::string RatMat::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ", ";
      os << rat_str(at(i, j));
    }
  }
  os << "]";
  return os.str();
}

Rat det_cofactor(const RatMat& m) {
  if (!m.is_square()) fail(Err::DimensionMismatch, "determinant of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m.at(0, 0);
  Rat d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m.at(0, j) == 0) continue;
    RatMat minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor.at(i - 1, cc++) = m.at(i, c);
      }
    }
    Rat term = m.at(0, j) * det_cofactor(minor);
    d += (j % 2 == 0) ? term : -term;
  }
  return d;
}

Rat det_bareiss(const RatMat& m) {
  if (!m.is_square()) fail(Err::DimensionMismatch, "determinant of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  // Clear denominators so the fraction-free recurrence runs over Z.
  Int scale = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Int d = rat_den(m.at(i, j));
      scale = scale / gcd(scale, d) * d;
    }
  std::vector<std::vector<Int>> a(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat v = m.at(i, j) * Rat(scale);
      a[i][j] = rat_num(v);
    }
  Int sign = 1, prev = 1;
  for (std::size_t c = 0; c + 1 < n; ++c) {
    if (a[c][c] == 0) {
      std::size_t piv = c + 1;
      while (piv < n && a[piv][c] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(a[c], a[piv]);
      sign = -sign;
    }
    for (std::size_t i = c + 1; i < n; ++i)
      for (std::size_t j = c + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) / prev;
    prev = a[c][c];
  }
  Rat det(sign * a[n - 1][n - 1]);
  Rat s(scale);
  Rat denom = 1;
  for (std::size_t i = 0; i < n; ++i) denom *= s;
  return det / denom;
}

RatMat mat_from_rows(std::size_t rows, std::size_t cols,
                     const std::vector<std::vector<long>>& data) {
  RatMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = Rat(data[i][j]);
  return m;
}

const char* err_name(Err e) {
  switch (e) {
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::SingularMatrix: return "SingularMatrix";
    case Err::MiddleMismatch: return "MiddleMismatch";
    case Err::UnsupportedOrder: return "UnsupportedOrder";
    case Err::EndpointMismatch: return "EndpointMismatch";
    case Err::ElementShapeMismatch: return "ElementShapeMismatch";
    case Err::NormalFormVsEvalDisagreement: return "NormalFormVsEvalDisagreement";
    case Err::CompositeNotZero: return "CompositeNotZero";
    case Err::TagMismatch: return "TagMismatch";
    case Err::WiringNotIso: return "WiringNotIso";
    case Err::ColumnMismatch: return "ColumnMismatch";
    case Err::YinYangDiffer: return "YinYangDiffer";
    case Err::RowNotExact: return "RowNotExact";
    case Err::ColNotExact: return "ColNotExact";
    case Err::YinDiagramNotCommuting: return "YinDiagramNotCommuting";
    case Err::YangDiagramNotCommuting: return "YangDiagramNotCommuting";
    case Err::NotIso: return "NotIso";
    case Err::NotAutomorphism: return "NotAutomorphism";
    case Err::MissingDecomposition: return "MissingDecomposition";
    case Err::DecompositionInvalid: return "DecompositionInvalid";
    case Err::StepInvalid: return "StepInvalid";
    case Err::LiftProjectionMismatch: return "LiftProjectionMismatch";
    case Err::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace relk
