#pragma once

#include "relk/errors.hpp"
#include "relk/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace relk {

// Dense matrix of exact rationals. Rows or columns may be zero; a 0x0 matrix
// is the identity of the empty space.
class RatMat {
 public:
  RatMat() : rows_(0), cols_(0) {}
  RatMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, Rat(0)) {}
  RatMat(std::size_t rows, std::size_t cols, std::vector<Rat> entries);

  static RatMat identity(std::size_t n);
  static RatMat zero(std::size_t rows, std::size_t cols) { return RatMat(rows, cols); }
  static RatMat scalar(std::size_t n, const Rat& c);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Rat& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
  Rat& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }

  bool operator==(const RatMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }
  bool operator!=(const RatMat& o) const { return !(*this == o); }

  RatMat operator*(const RatMat& o) const;
  RatMat operator+(const RatMat& o) const;
  RatMat operator-(const RatMat& o) const;
  RatMat operator-() const;

  bool is_zero() const;
  bool is_identity() const;
  bool is_integer() const;
  bool is_square() const { return rows_ == cols_; }

  // Entrywise canonical representative mod 1 in [0,1).
  RatMat mod1() const;

  // Exact determinant by rational Gaussian elimination.
  Rat det() const;

  // Exact inverse; nullopt when singular.
  std::optional<RatMat> inverse() const;

  // Block diagonal [this 0; 0 o].
  RatMat dsum(const RatMat& o) const;

  // [this | o] side by side.
  RatMat hcat(const RatMat& o) const;

  // Zero off the k equal diagonal blocks of size block x block?
  bool is_block_diagonal(std::size_t block, std::size_t k) const;

  std::string str() const;

 private:
  std::size_t rows_, cols_;
  std::vector<Rat> e_;
};

// Test-only style independent determinant routes; kept in the library so the
// CLI and the test suites can share them.
Rat det_cofactor(const RatMat& m);        // recursive expansion, small sizes
Rat det_bareiss(const RatMat& m);         // fraction-free elimination over Z-cleared entries

RatMat mat_from_rows(std::size_t rows, std::size_t cols,
                     const std::vector<std::vector<long>>& data);

}  // namespace relk
