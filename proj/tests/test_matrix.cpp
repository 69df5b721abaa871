#include "relk/matrix.hpp"
#include "relk/randgen.hpp"

#include <doctest.h>

#include <random>

using namespace relk;

TEST_SUITE_BEGIN("matrix");

TEST_CASE("mod1 canonical representatives") {
  CHECK(rat_mod1(Rat(3, 2)) == Rat(1, 2));
  CHECK(rat_mod1(Rat(-1, 3)) == Rat(2, 3));
  CHECK(rat_mod1(Rat(7)) == Rat(0));
  CHECK(rat_mod1(Rat(-5, 2)) == Rat(1, 2));
}

TEST_CASE("frozen determinants") {
  // Expected values computed with the cofactor oracle and frozen.
  RatMat a = mat_from_rows(3, 3, {{1, 2, 3}, {4, 5, 6}, {7, 8, 10}});
  CHECK(a.det() == Rat(-3));
  CHECK(det_cofactor(a) == Rat(-3));
  CHECK(det_bareiss(a) == Rat(-3));

  RatMat b(2, 2, {Rat(1, 2), Rat(1, 3), Rat(1, 4), Rat(1, 5)});
  CHECK(b.det() == Rat(1, 60));
  CHECK(det_cofactor(b) == Rat(1, 60));
  CHECK(det_bareiss(b) == Rat(1, 60));
}

TEST_CASE("determinant routes agree on random matrices up to size 4") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<std::size_t> sz(0, 4);
    std::size_t n = sz(rng);
    RatMat m = random_matrix(rng, n, n, 9, 7);
    Rat d = m.det();
    CHECK(d == det_cofactor(m));
    CHECK(d == det_bareiss(m));
  }
}

TEST_CASE("inverse multiplies back to the identity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<std::size_t> sz(1, 4);
    std::size_t n = sz(rng);
    RatMat m = random_invertible(rng, n, 9, 7);
    auto inv = m.inverse();
    REQUIRE(inv.has_value());
    CHECK((m * *inv).is_identity());
    CHECK((*inv * m).is_identity());
  }
  CHECK_FALSE(mat_from_rows(2, 2, {{1, 2}, {2, 4}}).inverse().has_value());
}

TEST_CASE("singular detection is exact") {
  RatMat m(2, 2, {Rat(1, 3), Rat(1, 6), Rat(2, 5), Rat(1, 5)});
  CHECK(m.det() == 0);
  CHECK(det_cofactor(m) == 0);
}

TEST_CASE("block diagonal check") {
  RatMat m = mat_from_rows(4, 4, {{1, 2, 0, 0}, {3, 4, 0, 0}, {0, 0, 5, 6}, {0, 0, 7, 8}});
  CHECK(m.is_block_diagonal(2, 2));
  m.at(0, 2) = 1;
  CHECK_FALSE(m.is_block_diagonal(2, 2));
}

TEST_SUITE_END();
