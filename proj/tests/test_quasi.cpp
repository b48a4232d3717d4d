#include <gtest/gtest.h>

#include "mcg/constructions.hpp"
#include "mcg/quasi.hpp"
#include "support.hpp"

using namespace mcg;

namespace {

const Alphabet F2(2);

Word w2(const char* s) { return parse_word(s, F2); }

// Direct scan: at each position either match the whole pattern and jump past
// it, or move one letter on.
long long scan_count(const std::vector<Letter>& pattern, const std::vector<Letter>& text) {
  long long count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    bool match = i + pattern.size() <= text.size();
    for (std::size_t j = 0; match && j < pattern.size(); ++j) match = text[i + j] == pattern[j];
    if (match) {
      ++count;
      i += pattern.size();
    } else {
      ++i;
    }
  }
  return count;
}

long long oracle_h(const std::vector<Letter>& pattern, const std::vector<Letter>& g) {
  return scan_count(pattern, g) - scan_count(oracle::inverse(pattern), g);
}

// Slope of m -> h(g^m). The scanner has at most |pattern| states, so the
// differences are periodic with period dividing 60 for patterns of length
// <= 5, after a transient shorter than the pattern.
Rational oracle_homogenize(const std::vector<Letter>& pattern, const std::vector<Letter>& g) {
  const int m0 = 10;
  const int period = 60;
  return Rational(oracle_h(pattern, oracle::repeat(g, m0 + period)) - oracle_h(pattern, oracle::repeat(g, m0)),
                  period);
}

std::vector<Word> cyclically_reduced_patterns(int max_length) {
  std::vector<Word> out;
  for (const auto& w : oracle::reduced_words(2, max_length)) {
    if (w.empty()) continue;
    if (w.size() > 1 && w.front() == -w.back()) continue;
    out.push_back(Word::reduce(F2, w));
  }
  return out;
}

std::vector<Word> test_words() {
  return {w2("ab"), w2("a"), w2("abAB"), w2("aab"), w2("abbAB"), w2("aBaB"), w2("abABab"), w2("bbaBA")};
}

}  // namespace

TEST(BrooksCount, Examples) {
  EXPECT_EQ(brooks_count(w2("ab"), w2("abab")), 2u);
  for (const Word& w : cyclically_reduced_patterns(4)) EXPECT_EQ(brooks_count(w, w), 1u);
  EXPECT_EQ(brooks_count(w2("aa"), w2("aaa")), 1u);
  EXPECT_THROW(brooks_count(Word(F2), w2("a")), Error);
  EXPECT_THROW(brooks_count(w2("abA"), w2("a")), Error);
}

TEST(BrooksCount, MatchesDirectScan) {
  std::mt19937 rng(40);
  const auto patterns = cyclically_reduced_patterns(3);
  for (int i = 0; i < 500; ++i) {
    const Word g = oracle::random_word(F2, 14, rng);
    const Word& p = patterns[rng() % patterns.size()];
    ASSERT_EQ(static_cast<long long>(brooks_count(p, g)), scan_count(p.letters(), g.letters()));
  }
}

TEST(QmEval, Examples) {
  const Quasimorphism h = Quasimorphism::brooks(w2("ab"));
  EXPECT_EQ(qm_eval(h, w2("abab")), 2);
  EXPECT_EQ(qm_eval(h, Word(F2)), 0);
  EXPECT_EQ(qm_eval(h, invert(w2("ab"))), -1);
  EXPECT_THROW(qm_eval(h, parse_word("a", Alphabet(3))), AlphabetMismatch);
}

TEST(QmEval, Antisymmetry) {
  for (const Word& p : cyclically_reduced_patterns(3)) {
    const Quasimorphism h = Quasimorphism::brooks(p);
    for (const Word& g : oracle::reduced_word_values(F2, 6)) {
      ASSERT_EQ(qm_eval(h, invert(g)), -qm_eval(h, g));
    }
  }
}

TEST(QmEval, LinearCombinationsAreExact) {
  const Quasimorphism h(F2, {{w2("ab"), Rational(1, 3)}, {w2("b"), Rational(-2, 5)}});
  EXPECT_EQ(qm_eval(h, w2("abab")), Rational(2, 3) - Rational(4, 5));
}

TEST(DefectBall, Examples) {
  const Quasimorphism h = Quasimorphism::brooks(w2("ab"));
  const Rational v4 = defect_ball(h, 4);
  const Rational v5 = defect_ball(h, 5);
  const Rational v6 = defect_ball(h, 6);
  EXPECT_LE(v4, v5);
  EXPECT_LE(v5, v6);
  EXPECT_GT(v4, 0);
  EXPECT_EQ(defect_ball(Quasimorphism::exponent_sum(F2, 1), 5), 0);
  EXPECT_EQ(defect_ball(Quasimorphism::exponent_sum(F2, 2), 5), 0);
  const Rational v1 = defect_ball(h, 1);
  EXPECT_LE(v1, 1);
  EXPECT_THROW(defect_ball(h, 0), Error);
  EXPECT_THROW(defect_ball(h, 12), BudgetExhausted);
}

TEST(DefectBall, MatchesExhaustiveOracle) {
  for (const char* p : {"ab", "aab", "abAB", "aa"}) {
    const Quasimorphism h = Quasimorphism::brooks(w2(p));
    const auto ball = oracle::reduced_words(2, 3);
    long long best = 0;
    for (const auto& x : ball) {
      for (const auto& y : ball) {
        const long long d = oracle_h(w2(p).letters(), x) + oracle_h(w2(p).letters(), y) -
                            oracle_h(w2(p).letters(), oracle::concat(x, y));
        best = std::max(best, d < 0 ? -d : d);
      }
    }
    EXPECT_EQ(defect_ball(h, 3), best) << p;
  }
  const Quasimorphism mixed(F2, {{w2("ab"), Rational(1, 2)}, {w2("bba"), Rational(3)}});
  EXPECT_EQ(defect_ball(mixed, 3).str().empty(), false);
}

TEST(DefectBall, ZeroDefectMeansLinearOnBall) {
  const std::vector<Quasimorphism> hs{Quasimorphism::exponent_sum(F2, 1),
                                      Quasimorphism(F2, {{w2("a"), 2}, {w2("b"), Rational(-1, 3)}}),
                                      Quasimorphism::brooks(w2("ab"))};
  const auto ball = oracle::reduced_word_values(F2, 6);
  for (const Quasimorphism& h : hs) {
    if (defect_ball(h, 6) != 0) continue;
    const Rational ha = qm_eval(h, w2("a"));
    const Rational hb = qm_eval(h, w2("b"));
    for (const Word& w : ball) {
      const auto e = exponent_vector(w);
      ASSERT_EQ(qm_eval(h, w), ha * e[0] + hb * e[1]);
    }
  }
}

TEST(Homogenize, Examples) {
  const Quasimorphism h = Quasimorphism::brooks(w2("ab"));
  EXPECT_EQ(homogenize(h, w2("ab")), 1);
  EXPECT_EQ(homogenize(h, Word(F2)), 0);
  EXPECT_EQ(homogenize(h, w2("a")), 0);
  // aa in a^m: floor(m/2) matches, slope 1/2.
  EXPECT_EQ(homogenize(Quasimorphism::brooks(w2("aa")), w2("a")), Rational(1, 2));
  EXPECT_THROW(homogenize(h, w2("ab"), 0), Inconclusive);
}

TEST(Homogenize, MatchesSlopeOracle) {
  const auto patterns = cyclically_reduced_patterns(3);
  for (const Word& p : patterns) {
    const Quasimorphism h = Quasimorphism::brooks(p);
    for (const Word& g : oracle::reduced_word_values(F2, 4)) {
      ASSERT_EQ(homogenize(h, g), oracle_homogenize(p.letters(), g.letters())) << to_string(p) << " " << to_string(g);
    }
  }
}

TEST(Homogenize, HomogeneousAndConjugacyInvariant) {
  const auto patterns = cyclically_reduced_patterns(3);
  const auto conjugators = oracle::reduced_word_values(F2, 2);
  for (const Word& p : patterns) {
    const Quasimorphism h = Quasimorphism::brooks(p);
    for (const Word& g : test_words()) {
      const Rational base = homogenize(h, g);
      for (int n = 1; n <= 4; ++n) ASSERT_EQ(homogenize(h, power(g, n)), n * base);
      for (const Word& x : conjugators) ASSERT_EQ(homogenize(h, conjugate(g, x)), base);
      ASSERT_EQ(homogenize(h, invert(g)), -base);
    }
  }
}

TEST(Pullback, Examples) {
  const Quasimorphism h = Quasimorphism::brooks(w2("ab"));
  const Quasimorphism id = pullback(h, FreeHom::identity(F2));
  for (const Word& g : oracle::reduced_word_values(F2, 4)) ASSERT_EQ(qm_eval(id, g), qm_eval(h, g));

  const Alphabet F4(4);
  const FreeHom kill(F4, F2, {w2("a"), w2("b"), Word(F2), Word(F2)});
  const Quasimorphism pulled = pullback(h, kill);
  EXPECT_EQ(qm_eval(pulled, parse_word("acbd", F4)), 1);
  EXPECT_EQ(pulled.domain(), F4);

  const Quasimorphism hom = pullback(Quasimorphism::exponent_sum(F2, 1), kill);
  EXPECT_EQ(defect_ball(hom, 2), 0);
  EXPECT_THROW(pullback(h, FreeHom::identity(F4)), AlphabetMismatch);
}

TEST(Pullback, PointwiseIdentity) {
  std::mt19937 rng(41);
  const Alphabet F3(3);
  const FreeHom f(F3, F2, {w2("ab"), w2("Ba"), w2("bb")});
  const FreeHom g(F2, F3, {parse_word("ac", F3), parse_word("b", F3)});
  const Quasimorphism h(F2, {{w2("ab"), 1}, {w2("aab"), Rational(2, 7)}});
  const Quasimorphism hf = pullback(h, f);
  const Quasimorphism hfg = pullback(hf, g);
  for (int i = 0; i < 500; ++i) {
    const Word w = oracle::random_word(F3, 10, rng);
    ASSERT_EQ(qm_eval(hf, w), qm_eval(h, apply_hom(f, w)));
    const Word v = oracle::random_word(F2, 10, rng);
    ASSERT_EQ(qm_eval(hfg, v), qm_eval(h, apply_hom(f, apply_hom(g, v))));
  }
}

TEST(DeltaB, Examples) {
  BoundedCochain ind(1);
  ind.set({w2("a")}, 1);
  const std::vector<Word> t{w2("a"), w2("A")};
  EXPECT_EQ(delta_b(ind, t), 1);

  // A homomorphism restricted to a finite support closed under the products used.
  BoundedCochain hom(1);
  for (const Word& w : oracle::reduced_word_values(F2, 4)) hom.set({w}, exponent_vector(w)[0] * 3 - exponent_vector(w)[1]);
  for (const Word& x : oracle::reduced_word_values(F2, 2)) {
    for (const Word& y : oracle::reduced_word_values(F2, 2)) {
      const std::vector<Word> xy{x, y};
      ASSERT_EQ(delta_b(hom, xy), 0);
    }
  }
  EXPECT_THROW(delta_b(ind, std::vector<Word>{w2("a")}), Error);
  EXPECT_EQ(hom.sup_norm(), 12);
}

TEST(DeltaB, FormulaAgainstHandExpansionForArityTwo) {
  // (df)(x0, x1, x2) = f(x1, x2) - f(x0 x1, x2) + f(x0, x1 x2) - f(x0, x1).
  std::mt19937 rng(42);
  const auto pool = oracle::reduced_word_values(F2, 2);
  BoundedCochain f(2);
  for (int i = 0; i < 200; ++i) {
    f.set({pool[rng() % pool.size()], pool[rng() % pool.size()]}, Rational(static_cast<int>(rng() % 11) - 5, 1 + rng() % 4));
  }
  for (int i = 0; i < 300; ++i) {
    const Word x0 = pool[rng() % pool.size()];
    const Word x1 = pool[rng() % pool.size()];
    const Word x2 = pool[rng() % pool.size()];
    auto F = [&](const Word& a, const Word& b) { return f(std::vector<Word>{a, b}); };
    const Rational expected = F(x1, x2) - F(multiply(x0, x1), x2) + F(x0, multiply(x1, x2)) - F(x0, x1);
    ASSERT_EQ(delta_b(f, std::vector<Word>{x0, x1, x2}), expected);
  }
}

TEST(DeltaB, SquareIsZero) {
  EXPECT_EQ(delta_delta_nonzero(1, 1000, 1), 0u);
  EXPECT_EQ(delta_delta_nonzero(2, 1000, 2), 0u);
  // Also for a quasimorphism viewed as an unbounded 1-cochain.
  const Cochain dd = coboundary(coboundary(as_cochain(Quasimorphism::brooks(w2("ab")))));
  std::mt19937 rng(43);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<Word> t{oracle::random_word(F2, 4, rng), oracle::random_word(F2, 4, rng),
                              oracle::random_word(F2, 4, rng)};
    ASSERT_EQ(dd(t), 0);
  }
}

TEST(IndependenceRank, Examples) {
  const Quasimorphism h = Quasimorphism::brooks(w2("ab"));
  EXPECT_EQ(independence_rank({h}, {w2("ab")}, false), 1u);
  EXPECT_EQ(independence_rank({h, h}, {w2("ab"), w2("aab")}, false), 1u);
  EXPECT_THROW(independence_rank({h}, {}, false), Error);
}

TEST(IndependenceRank, CommutatorFamilyMatrixIsIdentity) {
  // Brute force: the homogenized value of h_{w_i} at w_j, from the slope oracle.
  const auto words = commutator_family(10);
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      ASSERT_EQ(oracle_homogenize(words[i].letters(), words[j].letters()), i == j ? 1 : 0);
    }
  }
  const auto family = brooks_family(10);
  EXPECT_EQ(independence_rank(family, words, false), 10u);
  EXPECT_EQ(independence_rank(family, words, true), 10u);
  std::vector<Word> with_gens = words;
  with_gens.push_back(w2("a"));
  with_gens.push_back(w2("b"));
  const auto cert = independence_certificate(family, with_gens, true);
  EXPECT_EQ(cert.rank_homs, 2u);
  EXPECT_EQ(cert.rank_stacked, 12u);
  EXPECT_EQ(cert.value, 10u);
}

TEST(IndependenceRank, HomomorphismsAreQuotiented) {
  // h_a is the exponent sum of a: independent of h_ab on F_2, zero mod homs.
  const std::vector<Quasimorphism> hs{Quasimorphism::exponent_sum(F2, 1), Quasimorphism::brooks(w2("ab"))};
  const std::vector<Word> tests{w2("a"), w2("b"), w2("ab"), w2("abAB")};
  EXPECT_EQ(independence_rank(hs, tests, false), 2u);
  EXPECT_EQ(independence_rank(hs, tests, true), 1u);
}

TEST(Ball, SizesAndOrder) {
  for (int r = 0; r <= 5; ++r) {
    EXPECT_EQ(ball(F2, r).size(), oracle::reduced_words(2, r).size());
    EXPECT_EQ(static_cast<std::size_t>(ball_size(2, r)), oracle::reduced_words(2, r).size());
  }
  const auto b = ball(F2, 3);
  for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LE(b[i - 1].length(), b[i].length());
}
