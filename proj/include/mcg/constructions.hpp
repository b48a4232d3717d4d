#pragma once

// Concrete groups, subgroups and homomorphisms behind the cofinite-subgroup
// constructions, and the checks that certify each claim about them.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcg/fpgroup.hpp"
#include "mcg/quasi.hpp"
#include "mcg/stallings.hpp"
#include "mcg/words.hpp"

namespace mcg {

inline constexpr const char* kToolkitVersion = "0.3.0";

// ---------------------------------------------------------------------------
// Presentations.

// Sphere with n punctures, generated by the half twists w_1..w_{n-1} (named
// a, b, c, ...): braid relations, far commutation, the sphere relation
// w_1 .. w_{n-1} w_{n-1} .. w_1 and (w_1 .. w_{n-1})^n.
inline Presentation mod0n_presentation(int n) {
  if (n < 3) throw Error("mod0n_presentation needs n >= 3");
  if (n > 27) throw Error("mod0n_presentation supports n <= 27");
  const Alphabet a(n - 1);
  std::vector<Word> rels;
  for (Letter i = 1; i + 1 <= n - 1; ++i) {
    rels.push_back(Word::reduce(a, {i, i + 1, i, -(i + 1), -i, -(i + 1)}));
  }
  for (Letter i = 1; i <= n - 1; ++i) {
    for (Letter j = i + 2; j <= n - 1; ++j) rels.push_back(Word::reduce(a, {i, j, -i, -j}));
  }
  std::vector<Letter> sphere;
  for (Letter i = 1; i <= n - 1; ++i) sphere.push_back(i);
  for (Letter i = n - 1; i >= 1; --i) sphere.push_back(i);
  rels.push_back(Word::reduce(a, sphere));
  std::vector<Letter> chain;
  for (Letter i = 1; i <= n - 1; ++i) chain.push_back(i);
  rels.push_back(power(Word::reduce(a, chain), n));
  return Presentation(a, std::move(rels));
}

// Index of the braid relator between w_i and w_{i+1} in mod0n_presentation.
inline std::size_t braid_relator_index(int i) { return static_cast<std::size_t>(i - 1); }

// SL(2, Z) = < s, t | s^4, (s t)^3 s^-2 >.
inline Presentation sl2z_presentation() {
  const Alphabet a(2);
  return Presentation(a, {Word::reduce(a, {1, 1, 1, 1}), Word::reduce(a, {1, 2, 1, 2, 1, 2, -1, -1})},
                      Notation({'s', 't'}));
}

// Transposition (i, i+1) for each half twist w_i, on n points.
inline std::vector<Permutation> puncture_action(int n) {
  std::vector<Permutation> out;
  for (int i = 0; i + 1 < n; ++i) {
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(i + 1)]);
    out.push_back(std::move(p));
  }
  return out;
}

inline std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

// ---------------------------------------------------------------------------
// Free-group constructions.

// The free group on the twists t_c, t_d.
inline Alphabet twist_alphabet() { return Alphabet(2); }
inline Notation twist_notation() { return Notation({'c', 'd'}); }

// t_d, t_c t_d t_c^-1, ..., t_c^{n-2} t_d t_c^{-(n-2)}, t_c^{n-1}.
inline std::vector<Word> twist_chain(int n) {
  if (n < 3) throw Error("twist_chain needs n >= 3");
  const Alphabet a = twist_alphabet();
  const Word c = Word::generator(a, 1);
  const Word d = Word::generator(a, 2);
  std::vector<Word> gens;
  for (int j = 0; j <= n - 2; ++j) gens.push_back(conjugate(d, power(c, j)));
  gens.push_back(power(c, n - 1));
  return gens;
}

struct ChainLevel {
  SubgroupGraph graph;
  GraphInvariants invariants;
  FreeHom projection;  // basis alphabet -> free group of rank `level`
  bool contained_in_previous = true;
  bool projection_surjective = false;
};

// Lambda_1 = F_2 and Lambda_{k+1} = kernel of Lambda_k -> Z/2 reading the
// exponent of the first basis letter. Lambda_k projects onto the free group
// of rank k by keeping its first k basis letters.
inline std::vector<ChainLevel> nested_chain(int depth) {
  if (depth < 1 || depth > 8) throw Error("nested_chain depth must be in 1..8");
  const Alphabet f2(2);
  std::vector<ChainLevel> out;
  SubgroupGraph current = build(f2, {Word::generator(f2, 1), Word::generator(f2, 2)});
  for (int level = 1; level <= depth; ++level) {
    const auto& basis_words = current.basis();
    const int r = static_cast<int>(basis_words.size());
    const Alphabet domain(r);
    const Alphabet target(level);
    std::vector<Word> images;
    for (int i = 1; i <= r; ++i) {
      images.push_back(i <= level ? Word::generator(target, i) : Word(target));
    }
    FreeHom projection(domain, target, images);
    const SubgroupGraph image_graph = build(target, images);
    const bool surjective = invariants(image_graph).index == 1;
    ChainLevel entry{current, invariants(current), projection, true, surjective};
    if (!out.empty()) entry.contained_in_previous = contains_subgroup(out.back().graph, current);
    out.push_back(std::move(entry));
    if (level == depth) break;

    // Generators of the kernel, written in Lambda_k's basis, then expanded.
    const FreeHom incl = inclusion(current);
    std::vector<Word> kernel;
    const Word x1 = Word::generator(domain, 1);
    kernel.push_back(power(x1, 2));
    for (int j = 2; j <= r; ++j) {
      const Word xj = Word::generator(domain, j);
      kernel.push_back(xj);
      kernel.push_back(conjugate(xj, x1));
    }
    std::vector<Word> expanded;
    for (const Word& w : kernel) expanded.push_back(apply_hom(incl, w));
    current = build(f2, expanded);
  }
  return out;
}

// Free group <y, x_1, .., x_{n-1}> and the index-k subgroup H generated by
// y^j x_i y^-j (0 <= j < k) and y^k. These generators are a free basis of H;
// sigma sends y x_1 y^-1 to y x_1 y^-1 x_1 and fixes the others. sigma and
// `embedding` are written over the alphabet of the listed generators.
struct FreeNonExtensionInstance {
  int n = 0;
  int k = 0;
  Alphabet ambient{1};
  Notation notation{std::vector<char>{}};
  std::vector<Word> listed_generators;
  SubgroupGraph subgroup;
  FreeHom embedding;  // listed alphabet -> ambient
  FreeHom sigma;      // listed alphabet -> listed alphabet
  int sigma_moved_index = 0;  // 1-based listed symbol of y x_1 y^-1
};

inline Notation free_nonextension_notation(int n) {
  static const std::vector<char> names{'y', 'x', 'z', 'w', 'v', 'u', 't', 's'};
  if (n > static_cast<int>(names.size())) throw Error("free non-extension instance too large to name");
  return Notation(std::vector<char>(names.begin(), names.begin() + n));
}

inline FreeNonExtensionInstance free_nonextension_instance(int n, int k) {
  if (n < 2 || k < 2) throw Error("free_nonextension_instance needs n >= 2 and k >= 2");
  const Alphabet a(n);
  const Word y = Word::generator(a, 1);
  std::vector<Word> listed;
  for (int i = 1; i <= n - 1; ++i) {
    const Word xi = Word::generator(a, i + 1);
    for (int j = 0; j < k; ++j) listed.push_back(conjugate(xi, power(y, j)));
  }
  listed.push_back(power(y, k));
  SubgroupGraph h = build(a, listed);

  const Alphabet symbols(static_cast<int>(listed.size()));
  FreeHom embedding(symbols, a, listed);
  // y x_1 y^-1 is listed second (i = 1, j = 1); x_1 is listed first.
  const int moved = 2;
  std::vector<Word> images;
  for (int s = 1; s <= symbols.rank(); ++s) {
    images.push_back(s == moved ? Word::reduce(symbols, {moved, 1}) : Word::generator(symbols, s));
  }
  FreeHom sigma(symbols, symbols, images);
  return FreeNonExtensionInstance{n, k, a, free_nonextension_notation(n), std::move(listed), std::move(h),
                           std::move(embedding), std::move(sigma), moved};
}

// ---------------------------------------------------------------------------
// Checks and reports.

enum class Status { pass, fail, inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Check {
  std::string id;
  std::string claim;      // what is certified
  std::string statement;  // the exact mathematical assertion checked
  Status status = Status::fail;
  nlohmann::json witness = nlohmann::json::object();
};

struct VerifyConfig {
  std::vector<std::string> only;  // check ids or id prefixes; empty = all
  bool quasi = true;
  std::size_t tietze_budget = 10'000;
  std::size_t homog_cap = kDefaultHomogenizationCap;
  std::size_t max_cosets = 200'000;
};

namespace detail {

inline std::string word_string(const Word& w, const Notation& n) { return to_string(w, n); }

inline nlohmann::json rational_json(const Rational& r) { return to_string(r); }

inline nlohmann::json abelian_json(const AbelianStructure& a) {
  std::vector<std::string> torsion;
  for (const BigInt& d : a.torsion()) torsion.push_back(d.str());
  return {{"group", describe(a)}, {"free_rank", a.free_rank()}, {"torsion", torsion}};
}

// Smallest m >= 0 with m * unit == x, searching up to `order`.
inline std::optional<int> multiple_of(const AbelianStructure& a, const AbelianElement& unit,
                                      const AbelianElement& x, int order) {
  AbelianElement acc = a.zero();
  for (int m = 0; m < order; ++m) {
    if (acc == x) return m;
    acc = a.add(acc, unit);
  }
  return std::nullopt;
}

// Status of a Tietze run that is supposed to end in a free presentation of
// the given rank. Anything else is inconclusive, never a refutation.
inline Status freeness_status(const TietzeResult& t, int expected_rank) {
  return t.is_free() && t.generator_count == expected_rank ? Status::pass : Status::inconclusive;
}

inline nlohmann::json tietze_json(const TietzeResult& t, std::size_t budget) {
  nlohmann::json rels = nlohmann::json::array();
  for (const Word& r : t.relators) rels.push_back(to_string(r));
  return {{"generators", t.generator_count}, {"relators", rels.size()}, {"remaining_relators", rels},
          {"steps_used", t.steps_used}, {"budget", budget},
          {"budget_exhausted", !t.fixpoint}};
}

}  // namespace detail

// Guard on an adopted sphere presentation: the puncture action is a valid
// permutation image of order n!, and the abelianization is cyclic of order
// gcd(2(n-1), n(n-1)).
struct PresentationGuard {
  bool ok = false;
  nlohmann::json witness;
};

inline PresentationGuard guard_mod0n(int n) {
  const Presentation p = mod0n_presentation(n);
  const PermImage img = perm_image(p, puncture_action(n));
  const AbelianStructure ab = abelianization(p);
  const long long expected = std::gcd(2LL * (n - 1), 1LL * n * (n - 1));
  const bool cyclic_ok = ab.free_rank() == 0 &&
                         ((expected == 1 && ab.torsion().empty()) ||
                          (ab.torsion().size() == 1 && ab.torsion()[0] == expected));
  PresentationGuard g;
  g.ok = img.valid && img.order == factorial(n) && cyclic_ok;
  g.witness = {{"n", n},
               {"relators", p.relators().size()},
               {"perm_image_valid", img.valid},
               {"perm_image_order", img.order},
               {"expected_order", factorial(n)},
               {"abelianization", describe(ab)},
               {"expected_abelianization_order", expected}};
  return g;
}

inline Check poisoned(Check c, const std::string& guard) {
  c.status = Status::inconclusive;
  c.witness = {{"reason", "guard failed: " + guard}};
  return c;
}

inline Check check_presentation_guards() {
  Check c{"mod0n.presentation_guards", "Adopted sphere presentations are guarded",
          "For n = 3..6 the puncture action w_i -> (i i+1) is a homomorphism onto S_n and "
          "H_1 is cyclic of order gcd(2(n-1), n(n-1))",
          Status::pass, nlohmann::json::array()};
  for (int n = 3; n <= 6; ++n) {
    const PresentationGuard g = guard_mod0n(n);
    c.witness.push_back(g.witness);
    if (!g.ok) c.status = Status::fail;
  }
  return c;
}

inline Check check_mod04_h1() {
  Check c{"mod04.h1", "First homology of the four-punctured sphere group",
          "H_1(Mod(0,4)) = Z/6 and the classes of w_1^2, w_2^2 have order 3", Status::fail, {}};
  const Presentation p = mod0n_presentation(4);
  const AbelianStructure ab = abelianization(p);
  const Alphabet a = p.alphabet();
  const auto ta = ab_class(ab, parse_word("aa", a));
  const auto tb = ab_class(ab, parse_word("bb", a));
  const auto oa = ab.order_of(ta);
  const auto ob = ab.order_of(tb);
  const bool cyclic6 = ab.free_rank() == 0 && ab.torsion().size() == 1 && ab.torsion()[0] == 6;
  c.witness = detail::abelian_json(ab);
  c.witness["order_w1_squared"] = oa ? oa->str() : "infinite";
  c.witness["order_w2_squared"] = ob ? ob->str() : "infinite";
  c.status = cyclic6 && oa == BigInt(3) && ob == BigInt(3) ? Status::pass : Status::fail;
  return c;
}

inline Check check_mod03_pure_trivial(const VerifyConfig& cfg) {
  Check c{"mod03.pure_trivial", "Pure subgroup of the three-punctured sphere group is trivial",
          "|Mod(0,3)| = 6 = |S_3|, so the kernel of the puncture action is trivial", Status::fail, {}};
  const Presentation p = mod0n_presentation(3);
  try {
    const CosetTable t = todd_coxeter(p, {}, cfg.max_cosets);
    const PermImage img = perm_image(p, puncture_action(3));
    c.witness = {{"group_order", t.size()}, {"perm_image_order", img.order}, {"pure_subgroup_order", t.size() / static_cast<int>(img.order)}};
    c.status = t.size() == 6 && img.valid && img.order == 6 ? Status::pass : Status::fail;
  } catch (const BudgetExhausted& e) {
    c.status = Status::inconclusive;
    c.witness = {{"reason", e.what()}};
  }
  return c;
}

inline std::vector<Word> pure_generators_mod04() {
  const Alphabet a(3);
  return {parse_word("aa", a), parse_word("bb", a)};
}

inline Check check_pmod04_index(const VerifyConfig& cfg) {
  Check c{"pmod04.index", "Index of the twist subgroup in Mod(0,4)",
          "[Mod(0,4) : <w_1^2, w_2^2>] = 24 = |S_4|", Status::fail, {}};
  const Presentation p = mod0n_presentation(4);
  try {
    const CosetTable t = todd_coxeter(p, pure_generators_mod04(), cfg.max_cosets);
    const PermImage img = perm_image(p, puncture_action(4));
    c.witness = {{"todd_coxeter_index", t.size()}, {"perm_image_order", img.order}};
    c.status = t.size() == 24 && img.order == 24 ? Status::pass : Status::fail;
  } catch (const BudgetExhausted& e) {
    c.status = Status::inconclusive;
    c.witness = {{"reason", e.what()}};
  }
  return c;
}

inline Check check_pmod04_free(const VerifyConfig& cfg) {
  Check c{"pmod04.free", "Twist subgroup of Mod(0,4) is free of rank 2",
          "<w_1^2, w_2^2> has a presentation Tietze-equivalent to <x, y | >, and H_1 = Z^2",
          Status::fail, {}};
  const Presentation p = mod0n_presentation(4);
  try {
    const CosetTable t = todd_coxeter(p, pure_generators_mod04(), cfg.max_cosets);
    const SubgroupPresentation rs = reidemeister_schreier(p, t);
    const AbelianStructure ab = abelianization(rs.presentation);
    const TietzeResult simplified = tietze_simplify(rs.presentation, cfg.tietze_budget);
    c.witness = {{"index", t.size()},
                 {"schreier_generators", rs.presentation.generator_count()},
                 {"rewritten_relators", rs.presentation.relators().size()},
                 {"abelianization", describe(ab)},
                 {"tietze", detail::tietze_json(simplified, cfg.tietze_budget)}};
    const bool ab_ok = ab.free_rank() == 2 && ab.torsion().empty();
    if (!ab_ok) {
      c.status = Status::fail;
    } else {
      c.status = detail::freeness_status(simplified, 2);
    }
  } catch (const BudgetExhausted& e) {
    c.status = Status::inconclusive;
    c.witness = {{"reason", e.what()}};
  }
  return c;
}

inline Check check_sl2z_h1() {
  Check c{"sl2z.h1", "Abelianization of SL(2,Z) and the derived-subgroup cosets",
          "H_1(SL(2,Z)) = Z/12, so the commutator subgroup has index 12", Status::fail, {}};
  const Presentation p = sl2z_presentation();
  const AbelianStructure ab = abelianization(p);
  c.witness = detail::abelian_json(ab);
  if (!(ab.free_rank() == 0 && ab.torsion().size() == 1 && ab.torsion()[0] == 12)) return c;
  const CosetTable t = coset_table_from_ab(ab, p);
  c.witness["coset_table_size"] = t.size();
  c.witness["table_consistent"] = t.consistent_with(p.relators());
  c.status = t.size() == 12 && t.consistent_with(p.relators()) ? Status::pass : Status::fail;
  return c;
}

inline Check check_sl2z_derived_free(const VerifyConfig& cfg) {
  Check c{"sl2z.derived_free", "Commutator subgroup of SL(2,Z) is free of rank 2",
          "[SL(2,Z), SL(2,Z)] has a presentation Tietze-equivalent to <x, y | >", Status::fail, {}};
  const Presentation p = sl2z_presentation();
  const AbelianStructure ab = abelianization(p);
  const CosetTable t = coset_table_from_ab(ab, p);
  const SubgroupPresentation rs = reidemeister_schreier(p, t);
  const TietzeResult simplified = tietze_simplify(rs.presentation, cfg.tietze_budget);
  c.witness = {{"index", t.size()},
               {"schreier_generators", rs.presentation.generator_count()},
               {"rewritten_relators", rs.presentation.relators().size()},
               {"tietze", detail::tietze_json(simplified, cfg.tietze_budget)}};
  c.status = detail::freeness_status(simplified, 2);
  return c;
}

inline nlohmann::json twist_chain_entry(int n) {
  const Alphabet a = twist_alphabet();
  const SubgroupGraph g = build(a, twist_chain(n));
  const GraphInvariants inv = invariants(g);
  const bool has_tc2 = member(g, parse_word("aa", a));
  return {{"n", n},
          {"index", inv.index ? nlohmann::json(*inv.index) : nlohmann::json("infinite")},
          {"rank", inv.rank},
          {"schreier_rank", inv.index ? *inv.index * (a.rank() - 1) + 1 : -1},
          {"tc_squared_member", has_tc2}};
}

inline Check check_twist_chain() {
  Check c{"twist_chain", "Twist-chain subgroups of the free group <t_c, t_d>",
          "For n = 3..8 the subgroup F_n has index n-1 and rank n; t_c^2 lies in F_n iff n = 3",
          Status::pass, nlohmann::json::array()};
  for (int n = 3; n <= 8; ++n) {
    nlohmann::json e = twist_chain_entry(n);
    const bool ok = e["index"] == n - 1 && e["rank"] == n && e["tc_squared_member"] == (n == 3);
    if (!ok) c.status = Status::fail;
    c.witness.push_back(std::move(e));
  }
  return c;
}

inline Check check_genus2_pipeline() {
  Check c{"genus2.pipeline", "Genus-two subgroups avoiding the Torelli twist t_a",
          "[Mod(0,6) : PMod(0,6)] = 720; for n = 4..8, t_c^2 is not in F_n, so the separating "
          "twist t_a (sent to t_c^2) lies outside Gamma_n",
          Status::fail, {}};
  const Presentation p = mod0n_presentation(6);
  const PermImage img = perm_image(p, puncture_action(6));
  nlohmann::json chain = nlohmann::json::array();
  bool chain_ok = true;
  nlohmann::json indices = nlohmann::json::object();
  for (int n = 4; n <= 8; ++n) {
    nlohmann::json e = twist_chain_entry(n);
    chain_ok = chain_ok && e["index"] == n - 1 && e["rank"] == n && e["tc_squared_member"] == false;
    indices[std::to_string(n)] = img.order * static_cast<std::size_t>(n - 1);
    chain.push_back(std::move(e));
  }
  const nlohmann::json f3 = twist_chain_entry(3);
  c.witness = {
      {"perm_image_order_mod06", img.order},
      {"perm_image_valid", img.valid},
      {"gamma2_index_in_mod2", img.order},
      {"index_note", "preimages under the epimorphisms Mod(2) -> Mod(0,6) and forgetting two punctures preserve index"},
      {"torelli_avoiding_index_in_mod2", indices},
      {"twist_chain", chain},
      {"tc_squared_in_F3", f3["tc_squared_member"]},
      {"given_inputs", {"pi_*(t_a) = t_{pi(a)}^2", "phi(t_{pi(a)}) = t_c", "t_a lies in the Torelli group"}},
  };
  c.status = img.valid && img.order == 720 && chain_ok && f3["tc_squared_member"] == true
                 ? Status::pass
                 : Status::fail;
  return c;
}

inline Check check_nested_chain(int depth = 6) {
  Check c{"chain.nested", "Nested chain of finite-index subgroups surjecting onto free groups",
          "Lambda_1 > Lambda_2 > ... with rank(Lambda_k) = 2^(k-1)+1 and Lambda_k onto F_k",
          Status::pass, {}};
  const auto chain = nested_chain(depth);
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const ChainLevel& l = chain[i];
    const long long expected_rank = (1LL << i) + 1;
    const long long expected_index = 1LL << i;
    const bool ok = l.contained_in_previous && l.projection_surjective &&
                    l.invariants.rank == expected_rank && l.invariants.index == expected_index;
    if (!ok) c.status = Status::fail;
    levels.push_back({{"level", i + 1},
                      {"rank", l.invariants.rank},
                      {"index_in_F2", l.invariants.index ? nlohmann::json(*l.invariants.index) : nlohmann::json("infinite")},
                      {"contained_in_previous", l.contained_in_previous},
                      {"projection_onto_free_rank", i + 1},
                      {"projection_surjective", l.projection_surjective}});
  }
  // The twist-chain subgroups of index n-1 cannot be nested for consecutive n.
  const Alphabet a = twist_alphabet();
  const bool f3_contains_f4 = contains_subgroup(build(a, twist_chain(3)), build(a, twist_chain(4)));
  c.witness = {{"levels", levels},
               {"index_discrepancy",
                {{"note", "a subgroup inside an index-(n-1) subgroup has index divisible by n-1, so "
                          "index-(n-1) subgroups F_n cannot form a chain for consecutive n; this chain "
                          "uses iterated index-2 kernels instead"},
                 {"F3_contains_F4", f3_contains_f4}}}};
  if (f3_contains_f4) c.status = Status::fail;
  return c;
}

inline Check check_free_nonextension(const FreeNonExtensionInstance& inst) {
  Check c{"free.nonextending.n" + std::to_string(inst.n) + "k" + std::to_string(inst.k),
          "Automorphism of a finite-index subgroup of F_n with no extension to F_n",
          "sigma is an automorphism of H = <y^j x_i y^-j, y^k>, sigma != id, and every "
          "endomorphism of F_n extending sigma fixes y and all x_i",
          Status::fail, {}};
  const GraphInvariants inv = invariants(inst.subgroup);
  const long long expected_rank = 1LL * inst.k * (inst.n - 1) + 1;
  const Notation& nt = inst.notation;
  const Alphabet& symbols = inst.sigma.domain();

  // A generating set of a free group of rank r with r elements is a basis.
  const bool generates = same_subgroup(inst.subgroup, build(inst.ambient, inst.listed_generators));
  const bool listed_is_basis = generates && symbols.rank() == inv.rank;

  // (i) sigma is onto, hence an automorphism (finitely generated free groups are Hopfian).
  const bool onto = invariants(build(symbols, inst.sigma.images())).index == 1;

  // (ii) an extension fixes y^k, whose unique k-th root is y, and each x_i.
  const Word y = Word::generator(inst.ambient, 1);
  const auto root = kth_root(power(y, inst.k), inst.k);
  const bool root_ok = root && *root == y;
  bool fixes = true;
  nlohmann::json fixed = nlohmann::json::array();
  for (int s = 1; s <= symbols.rank(); ++s) {
    const Word& b = inst.listed_generators[static_cast<std::size_t>(s - 1)];
    if (!(b.length() == 1 || b == power(y, inst.k))) continue;
    const bool same = apply_hom(inst.embedding, inst.sigma.image(s)) == b;
    fixes = fixes && same;
    fixed.push_back({{"element", detail::word_string(b, nt)}, {"fixed_by_sigma", same}});
  }

  // (iii) sigma is not the identity.
  bool differs = false;
  std::string moved;
  for (int s = 1; s <= symbols.rank(); ++s) {
    if (inst.sigma.image(s) == Word::generator(symbols, s)) continue;
    differs = true;
    moved = detail::word_string(inst.listed_generators[static_cast<std::size_t>(s - 1)], nt) + " -> " +
            detail::word_string(apply_hom(inst.embedding, inst.sigma.image(s)), nt);
  }

  nlohmann::json gens = nlohmann::json::array();
  for (const Word& w : inst.listed_generators) gens.push_back(detail::word_string(w, nt));
  c.witness = {{"n", inst.n},
               {"k", inst.k},
               {"index", inv.index ? nlohmann::json(*inv.index) : nlohmann::json("infinite")},
               {"rank", inv.rank},
               {"expected_rank", expected_rank},
               {"generators", gens},
               {"generators_form_basis", listed_is_basis},
               {"sigma_onto", onto},
               {"hopf_property_assumed", true},
               {"unique_root_of_y^k", root ? detail::word_string(*root, nt) : "none"},
               {"extension_fixes", fixed},
               {"sigma_not_identity", differs},
               {"sigma_moves", moved}};
  const bool structure = inv.index == inst.k && inv.rank == expected_rank && listed_is_basis;
  c.status = structure && onto && root_ok && fixes && differs ? Status::pass : Status::fail;
  return c;
}

inline Check verify_free_nonextension(int n, int k) { return check_free_nonextension(free_nonextension_instance(n, k)); }

// Non-extension certificate for an automorphism phi of PMod(0,4) = <t_a, t_b>
// (t_a = w_1^2, t_b = w_2^2). An extension to Mod(0,4) would send the
// conjugate half twists w_1, w_2 to elements whose squares phi(t_a), phi(t_b)
// are conjugate, forcing equal classes in H_1(Mod(0,4)).
inline Check check_nonextension_mod04(const FreeHom& phi, const VerifyConfig& cfg) {
  Check c{"mod04.nonextending", "Automorphism of PMod(0,4) with no extension to Mod(0,4)",
          "phi(t_a) = t_a, phi(t_b) = t_a t_b is an automorphism of F_2 = PMod(0,4) and "
          "[phi(t_a)] != [phi(t_b)] in H_1(Mod(0,4)) = Z/6 although w_1, w_2 are conjugate",
          Status::fail, {}};
  const Alphabet f2(2);
  const Notation tn({'a', 'b'});
  const Presentation p = mod0n_presentation(4);
  const Alphabet m = p.alphabet();

  // (i) phi is onto F_2, hence an automorphism.
  const bool automorphism = invariants(build(f2, phi.images())).index == 1;

  // (ii) H_1 = Z/6, [t_a] has order 3.
  const AbelianStructure ab = abelianization(p);
  const bool cyclic6 = ab.free_rank() == 0 && ab.torsion().size() == 1 && ab.torsion()[0] == 6;
  const FreeHom into_mod04(f2, m, pure_generators_mod04());
  const AbelianElement w1 = ab_class(ab, parse_word("a", m));
  const AbelianElement ta = ab_class(ab, apply_hom(into_mod04, Word::generator(f2, 1)));
  const auto order_ta = ab.order_of(ta);

  // (iii) (w_1 w_2) w_1 (w_1 w_2)^-1 = w_2, from one braid relator.
  const Word lhs = conjugate(parse_word("a", m), parse_word("ab", m));
  const Word rhs = parse_word("b", m);
  const RewriteCertificate cert{RewriteStep{0, braid_relator_index(1), -1, Word(m)}};
  const bool conjugacy = rewrite_equal(p, lhs, rhs, cert);

  // (iv) classes of phi(t_a) and phi(t_b), as multiples of [w_1].
  const AbelianElement img_a = ab_class(ab, apply_hom(into_mod04, phi.image(1)));
  const AbelianElement img_b = ab_class(ab, apply_hom(into_mod04, phi.image(2)));
  const auto ma = detail::multiple_of(ab, w1, img_a, 6);
  const auto mb = detail::multiple_of(ab, w1, img_b, 6);
  const bool obstruction = !(img_a == img_b);

  // (v) <t_a, t_b> has index 24 = |S_4|.
  nlohmann::json index = "inconclusive";
  bool index_ok = false;
  try {
    const auto t = todd_coxeter(p, pure_generators_mod04(), cfg.max_cosets);
    const auto img = perm_image(p, puncture_action(4));
    index = t.size();
    index_ok = t.size() == 24 && img.order == 24;
  } catch (const BudgetExhausted&) {
  }

  c.witness = {{"phi", {{"t_a", to_string(phi.image(1), tn)}, {"t_b", to_string(phi.image(2), tn)}}},
               {"phi_automorphism", automorphism},
               {"h1", describe(ab)},
               {"order_of_t_a_class", order_ta ? order_ta->str() : "infinite"},
               {"conjugacy_certificate", {{"from", to_string(lhs, p.notation())},
                                          {"to", to_string(rhs, p.notation())},
                                          {"steps", {{{"position", 0}, {"relator", braid_relator_index(1)}, {"exponent", -1}, {"conjugator", "1"}}}},
                                          {"valid", conjugacy}}},
               {"class_phi_t_a_in_units_of_w1", ma ? nlohmann::json(*ma) : nlohmann::json("?")},
               {"class_phi_t_b_in_units_of_w1", mb ? nlohmann::json(*mb) : nlohmann::json("?")},
               {"obstruction", obstruction},
               {"pure_subgroup_index", index}};
  if (!cyclic6) return c;
  c.status = automorphism && order_ta == BigInt(3) && conjugacy && obstruction && index_ok
                 ? Status::pass
                 : Status::fail;
  return c;
}

inline FreeHom nonextending_automorphism() {
  const Alphabet f2(2);
  return FreeHom(f2, f2, {parse_word("a", f2), parse_word("ab", f2)});
}

inline Check verify_nonextension_mod04(const VerifyConfig& cfg = {}) {
  return check_nonextension_mod04(nonextending_automorphism(), cfg);
}

// a b^i a^-1 b^-i for i = 1..count.
inline std::vector<Word> commutator_family(int count) {
  const Alphabet f2(2);
  std::vector<Word> out;
  for (int i = 1; i <= count; ++i) {
    out.push_back(multiply({parse_word("a", f2), power(parse_word("b", f2), i), parse_word("A", f2),
                            power(parse_word("b", f2), -i)}));
  }
  return out;
}

inline std::vector<Quasimorphism> brooks_family(int count) {
  std::vector<Quasimorphism> out;
  for (const Word& w : commutator_family(count)) out.push_back(Quasimorphism::brooks(w));
  return out;
}

// Sample delta(delta f) for random finitely supported f; returns the number of
// nonzero values seen (expected 0).
inline std::size_t delta_delta_nonzero(int arity, std::size_t samples, std::uint32_t seed) {
  const Alphabet f2(2);
  const std::vector<Word> pool = ball(f2, 2);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> value(-5, 5);
  BoundedCochain f(arity);
  for (int i = 0; i < 200; ++i) {
    std::vector<Word> args;
    for (int j = 0; j < arity; ++j) args.push_back(pool[pick(rng)]);
    f.set(std::move(args), Rational(value(rng), 1 + std::abs(value(rng))));
  }
  const Cochain dd = coboundary(coboundary(f.as_cochain()));
  std::size_t nonzero = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Word> tuple;
    for (int j = 0; j < arity + 2; ++j) tuple.push_back(pool[pick(rng)]);
    if (dd(tuple) != 0) ++nonzero;
  }
  return nonzero;
}

inline nlohmann::json matrix_json(const std::vector<std::vector<Rational>>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : m) {
    nlohmann::json r = nlohmann::json::array();
    for (const Rational& x : row) r.push_back(to_string(x));
    out.push_back(std::move(r));
  }
  return out;
}

inline Check check_quasi_suite(const VerifyConfig& cfg) {
  Check c{"quasi.suite", "Finite-rank certificates for homogeneous quasimorphisms",
          "The ten Brooks functions of a b^i a^-1 b^-i are independent modulo homomorphisms on F_2, "
          "after pullback along Lambda_4 -> F_2, and after restriction to Lambda_2; delta delta = 0",
          Status::fail, {}};
  try {
    const Alphabet f2(2);
    const std::vector<Word> family_words = commutator_family(10);
    const std::vector<Quasimorphism> family = brooks_family(10);

    // (i) on F_2; tests are the family words plus the generators.
    std::vector<Word> tests = family_words;
    tests.push_back(Word::generator(f2, 1));
    tests.push_back(Word::generator(f2, 2));
    const auto base = independence_certificate(family, tests, true, cfg.homog_cap);

    // (ii) pullback along the projection Lambda_4 -> F_2 of the nested chain.
    const auto chain = nested_chain(4);
    const SubgroupGraph& lambda4 = chain[3].graph;
    const Alphabet l4(static_cast<int>(lambda4.basis().size()));
    std::vector<Word> keep;
    for (int i = 1; i <= l4.rank(); ++i) keep.push_back(i <= 2 ? Word::generator(f2, i) : Word(f2));
    const FreeHom onto_f2(l4, f2, keep);
    const FreeHom lift(f2, l4, {Word::generator(l4, 1), Word::generator(l4, 2)});
    std::vector<Quasimorphism> pulled;
    for (const Quasimorphism& h : family) pulled.push_back(pullback(h, onto_f2));
    std::vector<Word> lifted_tests;
    bool lifts_ok = true;
    for (const Word& w : family_words) {
      lifted_tests.push_back(apply_hom(lift, w));
      lifts_ok = lifts_ok && apply_hom(onto_f2, lifted_tests.back()) == w;
    }
    for (int i = 1; i <= l4.rank(); ++i) lifted_tests.push_back(Word::generator(l4, i));
    const auto pulled_cert = independence_certificate(pulled, lifted_tests, true, cfg.homog_cap);

    // (iii) restriction to Lambda_2 = pullback along its inclusion into F_2.
    const SubgroupGraph& lambda2 = chain[1].graph;
    const FreeHom incl = inclusion(lambda2);
    std::vector<Quasimorphism> restricted;
    for (const Quasimorphism& h : family) restricted.push_back(pullback(h, incl));
    std::vector<Word> sub_tests;
    bool members_ok = true;
    for (const Word& w : family_words) {
      const auto e = express(lambda2, w);
      members_ok = members_ok && e.has_value();
      if (e) sub_tests.push_back(*e);
    }
    for (int i = 1; i <= incl.domain().rank(); ++i) sub_tests.push_back(Word::generator(incl.domain(), i));
    const auto restricted_cert = independence_certificate(restricted, sub_tests, true, cfg.homog_cap);

    // (iv) delta delta = 0.
    const std::size_t dd1 = delta_delta_nonzero(1, 1000, 11);
    const std::size_t dd2 = delta_delta_nonzero(2, 1000, 12);

    c.witness = {{"family", "h_w for w = a b^i a^-1 b^-i, i = 1..10"},
                 {"counting_convention", kCountingConvention},
                 {"homogenization_cap", cfg.homog_cap},
                 {"rank_on_F2_mod_homs", base.value},
                 {"matrix_on_F2", matrix_json(base.matrix)},
                 {"pullback_domain_rank", l4.rank()},
                 {"pullback_tests_lift", lifts_ok},
                 {"rank_after_pullback_mod_homs", pulled_cert.value},
                 {"restriction_tests_in_subgroup", members_ok},
                 {"restriction_subgroup_rank", incl.domain().rank()},
                 {"rank_after_restriction_mod_homs", restricted_cert.value},
                 {"delta_delta_nonzero_k1", dd1},
                 {"delta_delta_nonzero_k2", dd2}};
    c.status = base.value == 10 && pulled_cert.value == 10 && restricted_cert.value == 10 && lifts_ok &&
                       members_ok && dd1 == 0 && dd2 == 0
                   ? Status::pass
                   : Status::fail;
  } catch (const Inconclusive& e) {
    c.status = Status::inconclusive;
    c.witness = {{"reason", e.what()}};
  }
  return c;
}

// ---------------------------------------------------------------------------

struct Report {
  nlohmann::json toolkit;
  std::vector<Check> checks;

  bool any_failed() const {
    return std::any_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::fail; });
  }
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::pass; });
  }
  const Check* find(const std::string& id) const {
    for (const Check& c : checks) {
      if (c.id == id) return &c;
    }
    return nullptr;
  }
};

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : r.checks) {
    checks.push_back({{"id", c.id}, {"claim", c.claim}, {"quote", c.statement},
                      {"status", to_string(c.status)}, {"witness", c.witness}});
  }
  return {{"toolkit", r.toolkit}, {"checks", checks}};
}

inline std::vector<std::string> all_check_ids() {
  return {"chain.nested",          "free.nonextending.n2k2", "free.nonextending.n2k3",
          "free.nonextending.n3k2", "genus2.pipeline",       "mod03.pure_trivial",
          "mod04.h1",              "mod04.nonextending",     "mod0n.presentation_guards",
          "pmod04.free",           "pmod04.index",           "quasi.suite",
          "sl2z.derived_free",     "sl2z.h1",                "twist_chain"};
}

inline bool selected(const VerifyConfig& cfg, const std::string& id) {
  if (!cfg.quasi && id.rfind("quasi", 0) == 0) return false;
  if (cfg.only.empty()) return true;
  return std::any_of(cfg.only.begin(), cfg.only.end(), [&](const std::string& s) {
    return id == s || (id.rfind(s, 0) == 0 && id.size() > s.size() && id[s.size()] == '.');
  });
}

// Runs the selected checks in id order. Guards on the adopted presentations
// run first; a failed guard turns its dependents inconclusive.
inline Report verify_all(const VerifyConfig& cfg = {}) {
  Report report;
  report.toolkit = {
      {"version", kToolkitVersion},
      {"counting_convention", kCountingConvention},
      {"homogenization", "exact slope from recurrence of the greedy scanner state"},
      {"homogenization_cap", cfg.homog_cap},
      {"tietze_budget", cfg.tietze_budget},
      {"max_cosets", cfg.max_cosets},
      {"presentations",
       {{"mod0n", "half twists w_1..w_{n-1}; braid, far commutation, w_1..w_{n-1}w_{n-1}..w_1, (w_1..w_{n-1})^n"},
        {"sl2z", "<s, t | s^4, (s t)^3 s^-2>"}}},
      {"assumptions", {"finitely generated free groups are Hopfian"}},
  };

  const PresentationGuard g3 = guard_mod0n(3);
  const PresentationGuard g4 = guard_mod0n(4);
  const PresentationGuard g6 = guard_mod0n(6);
  const Presentation sl2z = sl2z_presentation();
  const AbelianStructure sl2z_ab = abelianization(sl2z);
  const bool sl2z_guard = sl2z_ab.free_rank() == 0 && sl2z_ab.torsion().size() == 1 && sl2z_ab.torsion()[0] == 12;

  using Runner = std::function<Check()>;
  struct Entry {
    std::string id;
    const bool* guard;
    std::string guard_name;
    Runner run;
  };
  const std::vector<Entry> entries{
      {"chain.nested", nullptr, "", [] { return check_nested_chain(6); }},
      {"free.nonextending.n2k2", nullptr, "", [] { return verify_free_nonextension(2, 2); }},
      {"free.nonextending.n2k3", nullptr, "", [] { return verify_free_nonextension(2, 3); }},
      {"free.nonextending.n3k2", nullptr, "", [] { return verify_free_nonextension(3, 2); }},
      {"genus2.pipeline", &g6.ok, "mod0n(6)", [] { return check_genus2_pipeline(); }},
      {"mod03.pure_trivial", &g3.ok, "mod0n(3)", [&] { return check_mod03_pure_trivial(cfg); }},
      {"mod04.h1", &g4.ok, "mod0n(4)", [] { return check_mod04_h1(); }},
      {"mod04.nonextending", &g4.ok, "mod0n(4)", [&] { return verify_nonextension_mod04(cfg); }},
      {"mod0n.presentation_guards", nullptr, "", [] { return check_presentation_guards(); }},
      {"pmod04.free", &g4.ok, "mod0n(4)", [&] { return check_pmod04_free(cfg); }},
      {"pmod04.index", &g4.ok, "mod0n(4)", [&] { return check_pmod04_index(cfg); }},
      {"quasi.suite", nullptr, "", [&] { return check_quasi_suite(cfg); }},
      {"sl2z.derived_free", &sl2z_guard, "sl2z H_1 = Z/12", [&] { return check_sl2z_derived_free(cfg); }},
      {"sl2z.h1", nullptr, "", [] { return check_sl2z_h1(); }},
      {"twist_chain", nullptr, "", [] { return check_twist_chain(); }},
  };
  for (const Entry& e : entries) {
    if (!selected(cfg, e.id)) continue;
    if (e.guard && !*e.guard) {
      Check c{e.id, "", "", Status::inconclusive, {}};
      report.checks.push_back(poisoned(std::move(c), e.guard_name));
      continue;
    }
    Check c = e.run();
    c.id = e.id;
    report.checks.push_back(std::move(c));
  }
  return report;
}

}  // namespace mcg
