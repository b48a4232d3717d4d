#include <gtest/gtest.h>

#include "mcg/constructions.hpp"
#include "mcg/fpgroup.hpp"
#include "mcg/stallings.hpp"
#include "support.hpp"

using namespace mcg;

namespace {

bool cyclic_of_order(const AbelianStructure& a, int n) {
  return a.free_rank() == 0 && a.torsion().size() == 1 && a.torsion()[0] == n;
}

// Applies the certificate steps directly, without the checker.
Word apply_steps(const Presentation& p, Word w, const RewriteCertificate& cert) {
  for (const RewriteStep& s : cert) {
    std::vector<Letter> next(w.letters().begin(), w.letters().begin() + static_cast<std::ptrdiff_t>(s.position));
    std::vector<Letter> rel = p.relators()[s.relator].letters();
    if (s.exponent < 0) rel = oracle::inverse(rel);
    const auto& c = s.conjugator.letters();
    next.insert(next.end(), c.begin(), c.end());
    next.insert(next.end(), rel.begin(), rel.end());
    const auto ci = oracle::inverse(c);
    next.insert(next.end(), ci.begin(), ci.end());
    next.insert(next.end(), w.letters().begin() + static_cast<std::ptrdiff_t>(s.position), w.letters().end());
    w = Word::reduce(p.alphabet(), oracle::naive_reduce(next));
  }
  return w;
}

}  // namespace

TEST(ParsePresentation, Examples) {
  const Presentation p = parse_presentation("gens: a b\nrels: a^4, a^2 (a b)^-3\n");
  EXPECT_EQ(p.generator_count(), 2);
  EXPECT_EQ(p.relators().size(), 2u);
  EXPECT_EQ(p.relators()[0], parse_word("aaaa", p.alphabet()));

  const Presentation f = parse_presentation("gens: a\nrels:");
  EXPECT_EQ(f.generator_count(), 1);
  EXPECT_TRUE(f.is_free());

  EXPECT_THROW(parse_presentation("gens: a b\nrel: a^x"), ParseError);
}

TEST(ParsePresentation, LineFormatAndErrors) {
  const Presentation p = parse_presentation("# comment\ngens: s t\nrel: s^4  # order four\nrel: (st)^3 S^2\n");
  EXPECT_EQ(p.relators().size(), 2u);
  EXPECT_EQ(to_string(p.relators()[1], p.notation()), "stststSS");
  try {
    parse_presentation("gens: a b\nrel: ab\nrel: ac\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_presentation("rel: a\n"), ParseError);
  EXPECT_THROW(parse_presentation("gens: a\nfoo: a\n"), ParseError);
  EXPECT_THROW(parse_presentation(""), ParseError);
  // Identity relators are dropped.
  EXPECT_TRUE(parse_presentation("gens: a\nrel: aA\n").is_free());
  // The printed form parses back to the same presentation.
  const Presentation m = mod0n_presentation(4);
  const Presentation again = parse_presentation(to_string(m));
  EXPECT_EQ(again.relators(), m.relators());
}

TEST(Abelianization, Examples) {
  const AbelianStructure m = abelianization(mod0n_presentation(4));
  EXPECT_TRUE(cyclic_of_order(m, 6));
  EXPECT_EQ(describe(m), "Z/6");
  EXPECT_TRUE(cyclic_of_order(abelianization(sl2z_presentation()), 12));
  const AbelianStructure f = abelianization(Presentation(Alphabet(2), {}));
  EXPECT_EQ(f.free_rank(), 2u);
  EXPECT_TRUE(f.torsion().empty());
  EXPECT_EQ(describe(f), "Z^2");
}

TEST(Abelianization, ProjectionIsAHomomorphismKillingRelators) {
  const Presentation p = parse_presentation("gens: a b c\nrel: a^4 b^6\nrel: b^2 c^-4 a^2\nrel: abAB\n");
  const AbelianStructure ab = abelianization(p);
  for (const Word& r : p.relators()) EXPECT_TRUE(ab.project(r).is_zero());
  std::mt19937 rng(30);
  for (int i = 0; i < 200; ++i) {
    const Word u = oracle::random_word(p.alphabet(), 8, rng);
    const Word v = oracle::random_word(p.alphabet(), 8, rng);
    ASSERT_EQ(ab.project(multiply(u, v)), ab.add(ab.project(u), ab.project(v)));
  }
  for (std::size_t i = 0; i + 1 < ab.torsion().size(); ++i) {
    EXPECT_EQ(ab.torsion()[i + 1] % ab.torsion()[i], 0);
  }
  for (const BigInt& d : ab.torsion()) EXPECT_GE(d, 2);
}

TEST(AbClass, Examples) {
  const Presentation p = mod0n_presentation(4);
  const AbelianStructure ab = abelianization(p);
  const auto ta = ab_class(ab, parse_word("aa", p.alphabet()));
  const auto tb = ab_class(ab, parse_word("bb", p.alphabet()));
  EXPECT_EQ(ab.order_of(ta), BigInt(3));
  EXPECT_EQ(ab.order_of(tb), BigInt(3));
  const auto tatb = ab_class(ab, parse_word("aabb", p.alphabet()));
  EXPECT_FALSE(tatb == ta);
  // Brute force in Z/6 with [w1] as the unit: t_a = 2, t_a t_b = 4.
  const auto w1 = ab_class(ab, parse_word("a", p.alphabet()));
  AbelianElement acc = ab.zero();
  int k_ta = -1;
  int k_tatb = -1;
  for (int k = 0; k < 6; ++k) {
    if (acc == ta) k_ta = k;
    if (acc == tatb) k_tatb = k;
    acc = ab.add(acc, w1);
  }
  EXPECT_EQ(k_ta, 2);
  EXPECT_EQ(k_tatb, 4);
  EXPECT_TRUE(ab_class(ab, Word(p.alphabet())).is_zero());
}

TEST(ToddCoxeter, Examples) {
  const Presentation m4 = mod0n_presentation(4);
  const CosetTable t = todd_coxeter(m4, {parse_word("aa", m4.alphabet()), parse_word("bb", m4.alphabet())}, 100000);
  EXPECT_EQ(t.size(), 24);
  EXPECT_EQ(t.size(), static_cast<int>(perm_image(m4, puncture_action(4)).order));
  EXPECT_TRUE(t.consistent_with(m4.relators()));

  const Presentation z(Alphabet(1), {});
  EXPECT_EQ(todd_coxeter(z, {parse_word("a", Alphabet(1))}, 10).size(), 1);

  const Presentation m3 = mod0n_presentation(3);
  EXPECT_EQ(todd_coxeter(m3, {}, 1000).size(), 6);
}

TEST(ToddCoxeter, BudgetIsReportedDistinctly) {
  const Presentation m4 = mod0n_presentation(4);
  EXPECT_THROW(todd_coxeter(m4, {}, 10), BudgetExhausted);
  EXPECT_THROW(todd_coxeter(m4, {}, 0), Error);
}

TEST(ToddCoxeter, AgreesWithStallingsIndexOnFreeGroups) {
  std::mt19937 rng(31);
  int tested = 0;
  while (tested < 100) {
    const int n = 1 + tested % 3;
    const int k = 1 + static_cast<int>(rng() % 7);
    const auto rows = oracle::random_action(n, k, rng);
    if (oracle::orbit_size(rows) != k) continue;
    const Alphabet a(n);
    const SubgroupGraph g = from_coset_table(CosetTable(a, rows));
    // Generators: the basis words, scrambled by products and redundant members.
    std::vector<Word> gens = g.basis();
    if (gens.size() >= 2) gens[0] = multiply(gens[0], gens[1]);
    gens.push_back(multiply(gens.front(), gens.back()));
    std::shuffle(gens.begin(), gens.end(), rng);
    const SubgroupGraph h = build(a, gens);
    const CosetTable t = todd_coxeter(Presentation(a, {}), gens, 10000);
    ASSERT_EQ(invariants(h).index, t.size());
    for (const Word& w : gens) ASSERT_EQ(t.act(0, w), 0);
    ++tested;
  }
}

TEST(CosetTableFromAb, Examples) {
  const Presentation s = sl2z_presentation();
  const CosetTable t = coset_table_from_ab(abelianization(s), s);
  EXPECT_EQ(t.size(), 12);
  EXPECT_TRUE(t.consistent_with(s.relators()));
  const Presentation m = mod0n_presentation(4);
  EXPECT_EQ(coset_table_from_ab(abelianization(m), m).size(), 6);
  const Presentation c2 = parse_presentation("gens: a\nrel: a^2\n");
  EXPECT_EQ(coset_table_from_ab(abelianization(c2), c2).size(), 2);
  const Presentation f = Presentation(Alphabet(2), {});
  EXPECT_THROW(coset_table_from_ab(abelianization(f), f), InfiniteIndex);
}

TEST(CosetTable, JsonRoundTrip) {
  const Presentation m = mod0n_presentation(4);
  const CosetTable t = coset_table_from_ab(abelianization(m), m);
  const auto j = to_json(t, m.notation());
  EXPECT_EQ(j["cosets"], 6);
  EXPECT_EQ(j["action"]["a"].size(), 6u);
  // The JSON form carries the action only.
  EXPECT_EQ(coset_table_from_json(j, m.alphabet(), m.notation()).rows(), t.rows());
}

TEST(ReidemeisterSchreier, Examples) {
  const Alphabet f2(2);
  const Notation cd({'c', 'd'});
  const Presentation free(f2, {}, cd);
  const SubgroupGraph f4 = build(f2, twist_chain(4));
  const SubgroupPresentation rs = reidemeister_schreier(free, coset_table(f4));
  EXPECT_EQ(rs.presentation.generator_count(), 4);
  EXPECT_TRUE(rs.presentation.is_free());
  EXPECT_TRUE(same_subgroup(build(f2, rs.generator_words), f4));

  const Presentation s = sl2z_presentation();
  const SubgroupPresentation d = reidemeister_schreier(s, coset_table_from_ab(abelianization(s), s));
  EXPECT_EQ(d.presentation.generator_count(), 12 * (2 - 1) + 1);
  const TietzeResult ts = tietze_simplify(d.presentation, 10000);
  EXPECT_EQ(ts.generator_count, 2);
  EXPECT_TRUE(ts.relators.empty());

  const Presentation m = mod0n_presentation(4);
  const CosetTable t = todd_coxeter(m, {parse_word("aa", m.alphabet()), parse_word("bb", m.alphabet())}, 100000);
  const SubgroupPresentation p = reidemeister_schreier(m, t);
  EXPECT_EQ(p.presentation.generator_count(), 24 * 2 + 1);
  EXPECT_EQ(p.presentation.relators().size(), 24 * m.relators().size());
  const AbelianStructure ab = abelianization(p.presentation);
  EXPECT_EQ(ab.free_rank(), 2u);
  EXPECT_TRUE(ab.torsion().empty());
  const TietzeResult tp = tietze_simplify(p.presentation, 10000);
  EXPECT_EQ(tp.generator_count, 2);
  EXPECT_TRUE(tp.relators.empty());
}

TEST(ReidemeisterSchreier, GeneratorWordsLieInTheSubgroup) {
  const Presentation m = mod0n_presentation(4);
  const CosetTable t = todd_coxeter(m, {parse_word("aa", m.alphabet()), parse_word("bb", m.alphabet())}, 100000);
  const SubgroupPresentation p = reidemeister_schreier(m, t);
  ASSERT_EQ(p.generator_words.size(), static_cast<std::size_t>(p.presentation.generator_count()));
  for (const Word& w : p.generator_words) EXPECT_EQ(t.act(0, w), 0);
}

TEST(Tietze, Examples) {
  const TietzeResult a = tietze_simplify(parse_presentation("gens: a b\nrel: b\n"), 100);
  EXPECT_EQ(a.generator_count, 1);
  EXPECT_TRUE(a.is_free());
  const TietzeResult b = tietze_simplify(parse_presentation("gens: a b c\nrel: caB\n"), 100);
  EXPECT_EQ(b.generator_count, 2);
  EXPECT_TRUE(b.is_free());
  // A non-free group stays non-free; the result is never a false "free".
  const TietzeResult c = tietze_simplify(parse_presentation("gens: a b\nrel: abAB\n"), 100);
  EXPECT_FALSE(c.is_free());
  EXPECT_TRUE(c.fixpoint);
}

TEST(Tietze, PreservesAbelianization) {
  std::mt19937 rng(32);
  for (int i = 0; i < 100; ++i) {
    const Alphabet a(3);
    std::vector<Word> rels;
    for (int j = 0; j < 2; ++j) rels.push_back(oracle::random_word(a, 6, rng));
    const Presentation p(a, rels);
    const TietzeResult t = tietze_simplify(p, 50);
    const Alphabet out(std::max(1, t.generator_count));
    const AbelianStructure before = abelianization(p);
    const AbelianStructure after = t.generator_count == 0 ? abelianization(Presentation(out, {Word::generator(out, 1)}))
                                                           : abelianization(Presentation(out, t.relators));
    ASSERT_EQ(describe(before), describe(after));
  }
}

TEST(Tietze, ZeroBudgetChangesNothing) {
  const Presentation p = parse_presentation("gens: a b\nrel: b\n");
  const TietzeResult t = tietze_simplify(p, 0);
  EXPECT_EQ(t.steps_used, 0u);
  EXPECT_EQ(t.generator_count, 2);
  EXPECT_FALSE(t.fixpoint);
}

TEST(PermImage, Examples) {
  const auto m6 = perm_image(mod0n_presentation(6), puncture_action(6));
  EXPECT_TRUE(m6.valid);
  EXPECT_EQ(m6.order, 720u);
  const auto m4 = perm_image(mod0n_presentation(4), puncture_action(4));
  EXPECT_TRUE(m4.valid);
  EXPECT_EQ(m4.order, 24u);
  const std::vector<Permutation> id(3, Permutation{0, 1, 2, 3});
  const auto trivial = perm_image(mod0n_presentation(4), id);
  EXPECT_TRUE(trivial.valid);
  EXPECT_EQ(trivial.order, 1u);
}

TEST(PermImage, InvalidAssignmentAndCycles) {
  // a -> (1 2 3) breaks the braid relation with b -> (1 2).
  const Presentation m3 = mod0n_presentation(3);
  const auto bad = perm_image(m3, {parse_cycles("(1 2 3)", 3), parse_cycles("(1 2)", 3)});
  EXPECT_FALSE(bad.valid);
  EXPECT_EQ(parse_cycles("(1 3)(2)", 3), (Permutation{2, 1, 0}));
  EXPECT_EQ(parse_cycles("()", 2), (Permutation{0, 1}));
  EXPECT_THROW(parse_cycles("(1 4)", 3), ParseError);
  EXPECT_THROW(parse_cycles("(1 2)(2 3)", 3), ParseError);
  EXPECT_THROW(perm_image(m3, {parse_cycles("(1 2)", 3)}), Error);
  EXPECT_THROW(perm_image(mod0n_presentation(6), puncture_action(6), 100), BudgetExhausted);
}

TEST(RewriteEqual, Examples) {
  const Presentation m = mod0n_presentation(4);
  const Alphabet& a = m.alphabet();
  const Word lhs = conjugate(parse_word("a", a), parse_word("ab", a));
  const Word rhs = parse_word("b", a);
  EXPECT_EQ(m.relators()[0], parse_word("abaBAB", a));
  const RewriteCertificate cert{RewriteStep{0, 0, -1, Word(a)}};
  EXPECT_TRUE(rewrite_equal(m, lhs, rhs, cert));
  EXPECT_TRUE(rewrite_equal(m, lhs, lhs, {}));
  EXPECT_FALSE(rewrite_equal(m, lhs, rhs, {RewriteStep{0, 1, -1, Word(a)}}));
  EXPECT_THROW(rewrite_equal(m, lhs, rhs, {RewriteStep{0, 99, -1, Word(a)}}), Error);
  EXPECT_THROW(rewrite_equal(m, lhs, rhs, {RewriteStep{99, 0, -1, Word(a)}}), Error);
  EXPECT_THROW(rewrite_equal(m, lhs, rhs, {RewriteStep{0, 0, 2, Word(a)}}), Error);
}

TEST(RewriteEqual, SoundOnRandomCertificates) {
  const Presentation m = mod0n_presentation(5);
  const AbelianStructure ab = abelianization(m);
  const auto perm = puncture_action(5);
  std::mt19937 rng(33);
  for (int i = 0; i < 200; ++i) {
    Word w = oracle::random_word(m.alphabet(), 8, rng);
    RewriteCertificate cert;
    Word current = w;
    for (int s = 0; s < 3; ++s) {
      RewriteStep step{rng() % (current.length() + 1), rng() % m.relators().size(), rng() % 2 ? 1 : -1,
                       oracle::random_word(m.alphabet(), 3, rng)};
      cert.push_back(step);
      current = apply_steps(m, current, {step});
    }
    ASSERT_TRUE(rewrite_equal(m, w, current, cert));
    // Two independent quotients agree on start and end.
    ASSERT_EQ(ab.project(w), ab.project(current));
    ASSERT_EQ(permutation_of(perm, w, 5), permutation_of(perm, current, 5));
  }
}
