#pragma once

#include "relk/core.hpp"
#include "relk/sequences.hpp"

#include <random>
#include <utility>

namespace relk {

// Deterministic instance generators shared by the CLI fuzzing mode and the
// test suites. All randomness flows from the seed.

inline Rat random_rat(std::mt19937_64& rng, long max_num = 100, long max_den = 100) {
  std::uniform_int_distribution<long> num(-max_num, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  return Rat(num(rng)) / Rat(den(rng));
}

inline RatMat random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c,
                            long max_num = 100, long max_den = 100) {
  RatMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = random_rat(rng, max_num, max_den);
  return m;
}

inline RatMat random_invertible(std::mt19937_64& rng, std::size_t n, long max_num = 100,
                                long max_den = 100) {
  for (;;) {
    RatMat m = random_matrix(rng, n, n, max_num, max_den);
    if (m.det() != 0) return m;
  }
}

inline RatMat random_integer_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c,
                                    long bound = 5) {
  std::uniform_int_distribution<long> d(-bound, bound);
  RatMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Rat(d(rng));
  return m;
}

inline BassSwanTriple random_triple(std::mt19937_64& rng, int max_rank,
                                    const std::string& p_label = "P",
                                    const std::string& q_label = "Q") {
  std::uniform_int_distribution<int> rk(1, max_rank);
  int r = rk(rng);
  FreeModule P = zmod(r, p_label), Q = zmod(r, q_label);
  return make_triple(P, random_invertible(rng, static_cast<std::size_t>(r)), Q);
}

inline std::pair<BassSwanTriple, BassSwanTriple> random_composable_pair(std::mt19937_64& rng,
                                                                        int max_rank) {
  std::uniform_int_distribution<int> rk(1, max_rank);
  int r = rk(rng);
  FreeModule P = zmod(r, "P"), Q = zmod(r, "Q"), R = zmod(r, "R");
  std::size_t n = static_cast<std::size_t>(r);
  BassSwanTriple t1 = make_triple(P, random_invertible(rng, n), Q);
  BassSwanTriple t2 = make_triple(Q, random_invertible(rng, n), R);
  return {t1, t2};
}

struct SplitInstance {
  SwanMorphism a, b;
  SplitModSeq split_p, split_q;
};

// Split exact data with block upper triangular middle isomorphisms; the
// commuting squares hold by construction and det(alpha) factors.
inline SplitInstance random_split_instance(std::mt19937_64& rng, int max_rank) {
  std::uniform_int_distribution<int> rk(0, max_rank);
  int r1 = rk(rng), r2 = rk(rng);
  if (r1 + r2 == 0) r1 = 1;
  int r = r1 + r2;
  std::size_t n1 = static_cast<std::size_t>(r1), n2 = static_cast<std::size_t>(r2),
              n = static_cast<std::size_t>(r);

  FreeModule Ps = zmod(r1, "P'"), Pm = zmod(r, "P"), Pq = zmod(r2, "P''");
  FreeModule Qs = zmod(r1, "Q'"), Qm = zmod(r, "Q"), Qq = zmod(r2, "Q''");

  RatMat inc(n, n1);
  for (std::size_t i = 0; i < n1; ++i) inc.at(i, i) = 1;
  RatMat sur(n2, n);
  for (std::size_t i = 0; i < n2; ++i) sur.at(i, n1 + i) = 1;
  RatMat section(n, n2);
  for (std::size_t i = 0; i < n2; ++i) section.at(n1 + i, i) = 1;

  RatMat a1 = random_invertible(rng, n1);
  RatMat a2 = random_invertible(rng, n2);
  RatMat mix = random_matrix(rng, n1, n2);
  RatMat alpha(n, n);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) alpha.at(i, j) = a1.at(i, j);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) alpha.at(i, n1 + j) = mix.at(i, j);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j) alpha.at(n1 + i, n1 + j) = a2.at(i, j);

  BassSwanTriple sub = make_triple(Ps, a1, Qs);
  BassSwanTriple midd = make_triple(Pm, alpha, Qm);
  BassSwanTriple quot = make_triple(Pq, a2, Qq);

  SplitInstance out;
  out.a = SwanMorphism{sub, midd, inc, inc};
  out.b = SwanMorphism{midd, quot, sur, sur};
  out.split_p = SplitModSeq{Ps, Pm, Pq, inc, sur, section};
  out.split_q = SplitModSeq{Qs, Qm, Qq, inc, sur, section};
  return out;
}

}  // namespace relk
