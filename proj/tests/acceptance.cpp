// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <iostream>
#include <random>
#include <sstream>

#include "mcg/constructions.hpp"
#include "support.hpp"

using namespace mcg;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << detail << "\n";
  if (!ok) ++failures;
}

template <typename F>
void criterion(int n, F&& body) {
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << " exception: " << e.what();
  }
  report(n, ok, detail.str());
}

bool cyclic_of_order(const AbelianStructure& a, long long d) {
  return a.free_rank() == 0 && a.torsion().size() == 1 && a.torsion()[0] == d;
}

}  // namespace

int main() {
  const VerifyConfig cfg;

  criterion(1, [&](std::ostream& d) {
    const Presentation p = mod0n_presentation(4);
    const AbelianStructure ab = abelianization(p);
    const auto o1 = ab.order_of(ab_class(ab, parse_word("aa", p.alphabet())));
    const auto o2 = ab.order_of(ab_class(ab, parse_word("bb", p.alphabet())));
    d << "H_1(Mod(0,4)) = " << describe(ab) << ", |[w1^2]| = " << (o1 ? o1->str() : "inf")
      << ", |[w2^2]| = " << (o2 ? o2->str() : "inf");
    return cyclic_of_order(ab, 6) && o1 == BigInt(3) && o2 == BigInt(3);
  });

  criterion(2, [&](std::ostream& d) {
    const PermImage i6 = perm_image(mod0n_presentation(6), puncture_action(6));
    const PermImage i4 = perm_image(mod0n_presentation(4), puncture_action(4));
    const PermImage i3 = perm_image(mod0n_presentation(3), puncture_action(3));
    const CosetTable whole = todd_coxeter(mod0n_presentation(3), {}, cfg.max_cosets);
    d << "image orders " << i6.order << "/" << i4.order << "/" << i3.order << ", |Mod(0,3)| = " << whole.size();
    return i6.valid && i4.valid && i3.valid && i6.order == 720 && i4.order == 24 && i3.order == 6 &&
           whole.size() == 6;
  });

  criterion(3, [&](std::ostream& d) {
    const Alphabet a = twist_alphabet();
    const Word tc2 = parse_word("cc", a, twist_notation());
    bool ok = true;
    for (int n = 3; n <= 8; ++n) {
      const SubgroupGraph g = build(a, twist_chain(n));
      const auto inv = invariants(g);
      const bool in = member(g, tc2);
      d << "n=" << n << ":" << (inv.index ? std::to_string(*inv.index) : "inf") << "/" << inv.rank << "/"
        << (in ? "in" : "out") << " ";
      ok = ok && inv.index == n - 1 && inv.rank == n && in == (n < 4);
    }
    return ok;
  });

  criterion(4, [&](std::ostream& d) {
    const Presentation p = sl2z_presentation();
    const AbelianStructure ab = abelianization(p);
    const CosetTable t = coset_table_from_ab(ab, p);
    const auto rs = reidemeister_schreier(p, t);
    const TietzeResult r = tietze_simplify(rs.presentation, 10000);
    d << "H_1 = " << describe(ab) << ", Tietze " << r.generator_count << " generators / " << r.relators.size()
      << " relators in " << r.steps_used << " moves";
    return cyclic_of_order(ab, 12) && t.size() == 12 && r.generator_count == 2 && r.relators.empty();
  });

  criterion(5, [&](std::ostream& d) {
    const Presentation p = mod0n_presentation(4);
    const CosetTable t = todd_coxeter(p, pure_generators_mod04(), cfg.max_cosets);
    const auto rs = reidemeister_schreier(p, t);
    const AbelianStructure ab = abelianization(rs.presentation);
    const TietzeResult r = tietze_simplify(rs.presentation, 10000);
    d << "index " << t.size() << ", H_1 = " << describe(ab) << ", Tietze " << r.generator_count << "/"
      << r.relators.size();
    return t.size() == 24 && ab.free_rank() == 2 && ab.torsion().empty() && r.generator_count == 2 &&
           r.relators.empty();
  });

  criterion(6, [&](std::ostream& d) {
    bool ok = true;
    for (const auto& [n, k] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
      const Check c = verify_free_nonextension(n, k);
      d << "(" << n << "," << k << ") rank " << c.witness["rank"] << " " << to_string(c.status) << " ";
      ok = ok && c.status == Status::pass && c.witness["rank"] == k * (n - 1) + 1 &&
           c.witness["sigma_onto"] == true && c.witness["sigma_not_identity"] == true;
    }
    return ok;
  });

  criterion(7, [&](std::ostream& d) {
    const Check c = verify_nonextension_mod04(cfg);
    d << "automorphism " << c.witness["phi_automorphism"] << ", rewrite "
      << c.witness["conjugacy_certificate"]["valid"] << ", classes " << c.witness["class_phi_t_a_in_units_of_w1"]
      << " vs " << c.witness["class_phi_t_b_in_units_of_w1"];
    return c.status == Status::pass && c.witness["class_phi_t_a_in_units_of_w1"] == 2 &&
           c.witness["class_phi_t_b_in_units_of_w1"] == 4;
  });

  criterion(8, [&](std::ostream& d) {
    std::mt19937 rng(2024);
    int schreier = 0;
    while (schreier < 100) {
      const int n = 1 + static_cast<int>(rng() % 3);
      const int k = 1 + static_cast<int>(rng() % 8);
      auto rows = oracle::random_action(n, k, rng);
      if (oracle::orbit_size(rows) != k) continue;
      const auto inv = invariants(from_coset_table(CosetTable(Alphabet(n), rows)));
      if (inv.index != k || inv.rank != 1LL * k * (n - 1) + 1) break;
      ++schreier;
    }
    const Alphabet f2(2);
    int confluent = 0;
    for (int i = 0; i < 100; ++i) {
      std::vector<Word> gens;
      for (int j = 0; j < 4; ++j) gens.push_back(oracle::random_word(f2, 6, rng));
      std::vector<Word> shuffled = gens;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      if (build(f2, gens) == build(f2, shuffled)) ++confluent;
    }
    int smith = 0;
    for (int i = 0; i < 200; ++i) {
      const std::size_t r = 1 + rng() % 5;
      const std::size_t c = 1 + rng() % 5;
      IntMatrix m(r, c);
      for (std::size_t x = 0; x < r; ++x) {
        for (std::size_t y = 0; y < c; ++y) m(x, y) = static_cast<int>(rng() % 19) - 9;
      }
      const SmithForm f = snf(m);
      bool ok = f.u * m * f.v == f.d && abs(determinant(f.u)) == 1 && abs(determinant(f.v)) == 1;
      for (std::size_t x = 0; x < r; ++x) {
        for (std::size_t y = 0; y < c; ++y) ok = ok && (x == y || f.d(x, y) == 0);
      }
      for (std::size_t x = 0; x + 1 < std::min(r, c); ++x) {
        const BigInt& a = f.d(x, x);
        const BigInt& b = f.d(x + 1, x + 1);
        ok = ok && a >= 0 && (a == 0 ? b == 0 : b % a == 0);
      }
      smith += ok;
    }
    const std::size_t dd1 = delta_delta_nonzero(1, 1000, 81);
    const std::size_t dd2 = delta_delta_nonzero(2, 1000, 82);
    d << "Schreier " << schreier << "/100, confluence " << confluent << "/100, SNF " << smith
      << "/200, dd nonzero k=1: " << dd1 << "/1000, k=2: " << dd2 << "/1000";
    return schreier == 100 && confluent == 100 && smith == 200 && dd1 == 0 && dd2 == 0;
  });

  criterion(9, [&](std::ostream& d) {
    const Check c = check_quasi_suite(cfg);
    d << "rank mod homs: F_2 " << c.witness["rank_on_F2_mod_homs"] << ", pullback to Lambda_4 "
      << c.witness["rank_after_pullback_mod_homs"] << ", restriction to Lambda_2 "
      << c.witness["rank_after_restriction_mod_homs"];
    return c.status == Status::pass && c.witness["rank_on_F2_mod_homs"] == 10 &&
           c.witness["rank_after_pullback_mod_homs"] == 10 && c.witness["rank_after_restriction_mod_homs"] == 10;
  });

  criterion(10, [&](std::ostream& d) {
    const auto chain = nested_chain(6);
    const std::vector<long long> expected{2, 3, 5, 9, 17, 33};
    bool ok = chain.size() == 6;
    d << "ranks";
    for (std::size_t i = 0; i < chain.size(); ++i) {
      d << " " << chain[i].invariants.rank;
      ok = ok && chain[i].invariants.rank == expected[i] && chain[i].contained_in_previous &&
           chain[i].projection_surjective;
      if (i > 0) ok = ok && contains_subgroup(chain[i - 1].graph, chain[i].graph);
    }
    d << ", nested and surjective: " << (ok ? "yes" : "no");
    return ok;
  });

  return failures == 0 ? 0 : 1;
}
