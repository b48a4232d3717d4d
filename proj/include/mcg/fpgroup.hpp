#pragma once

// Finitely presented groups: presentations and their text format,
// abelianization, Todd-Coxeter coset enumeration, Reidemeister-Schreier,
// Tietze simplification, permutation images and certificate-checked word
// equality.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcg/coset_table.hpp"
#include "mcg/error.hpp"
#include "mcg/snf.hpp"
#include "mcg/words.hpp"

namespace mcg {

class Presentation {
 public:
  Presentation(Alphabet alphabet, std::vector<Word> relators)
      : Presentation(alphabet, std::move(relators), Notation::standard(alphabet.rank())) {}

  // Identity relators are dropped.
  Presentation(Alphabet alphabet, std::vector<Word> relators, Notation notation)
      : alphabet_(alphabet), notation_(std::move(notation)) {
    for (Word& r : relators) {
      require_same_alphabet(alphabet_, r.alphabet());
      if (!r.empty()) relators_.push_back(std::move(r));
    }
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int generator_count() const noexcept { return alphabet_.rank(); }
  const std::vector<Word>& relators() const noexcept { return relators_; }
  const Notation& notation() const noexcept { return notation_; }

  bool is_free() const noexcept { return relators_.empty(); }

 private:
  Alphabet alphabet_;
  std::vector<Word> relators_;
  Notation notation_;
};

// ---------------------------------------------------------------------------
// Text format:
//
//   # comment
//   gens: a b c
//   rel: a b a B A B
//   rels: a^4, a^2 (a b)^-3
//
// The generator line comes first. Relators are given one per "rel:" line or
// comma-separated on "rels:" lines.

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Strips a trailing "# ..." comment.
inline std::string_view strip_comment(std::string_view line) {
  if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
  return line;
}

inline Notation parse_generator_names(std::string_view body, std::size_t line, std::size_t column0) {
  std::vector<char> names;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') continue;
    if (c < 'a' || c > 'z') {
      throw ParseError(std::string("generator names are single lowercase letters, got '") + c + "'",
                       line, column0 + i + 1);
    }
    if (i + 1 < body.size() && std::isalnum(static_cast<unsigned char>(body[i + 1]))) {
      throw ParseError("generator names are single lowercase letters", line, column0 + i + 2);
    }
    if (std::find(names.begin(), names.end(), c) != names.end()) {
      throw ParseError(std::string("duplicate generator '") + c + "'", line, column0 + i + 1);
    }
    names.push_back(c);
  }
  if (names.empty()) throw ParseError("no generators declared", line, column0 + 1);
  return Notation(std::move(names));
}

}  // namespace detail

inline Presentation parse_presentation(std::string_view text) {
  std::optional<Notation> notation;
  std::optional<Alphabet> alphabet;
  std::vector<Word> relators;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    std::string_view line = detail::strip_comment(raw);
    if (detail::trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("expected 'gens:', 'rel:' or 'rels:'", line_no, 1);
    }
    const std::string_view key = detail::trim(line.substr(0, colon));
    const std::string_view body = line.substr(colon + 1);
    const std::size_t body_col = colon + 1;
    if (key == "gens") {
      if (notation) throw ParseError("generators declared twice", line_no, 1);
      notation = detail::parse_generator_names(body, line_no, body_col);
      alphabet = Alphabet(notation->rank());
    } else if (key == "rel" || key == "rels") {
      if (!notation) throw ParseError("relators before 'gens:' line", line_no, 1);
      std::size_t piece_start = 0;
      for (;;) {
        std::size_t comma = key == "rels" ? body.find(',', piece_start) : std::string_view::npos;
        const std::size_t piece_end = comma == std::string_view::npos ? body.size() : comma;
        const std::string_view piece = body.substr(piece_start, piece_end - piece_start);
        if (!detail::trim(piece).empty() || key == "rel") {
          relators.push_back(parse_word(piece, *alphabet, *notation, line_no, body_col + piece_start));
        }
        if (comma == std::string_view::npos) break;
        piece_start = comma + 1;
      }
    } else {
      throw ParseError("unknown directive '" + std::string(key) + "'", line_no, 1);
    }
    if (end == text.size()) break;
  }
  if (!notation) throw ParseError("missing 'gens:' line", line_no == 0 ? 1 : line_no, 1);
  return Presentation(*alphabet, std::move(relators), *notation);
}

inline std::string to_string(const Presentation& p) {
  std::ostringstream out;
  if (p.generator_count() <= p.notation().rank()) {
    out << "gens:";
    for (char c : p.notation().names()) out << ' ' << c;
  } else {
    out << "gens: x1..x" << p.generator_count();
  }
  out << '\n';
  for (const Word& r : p.relators()) out << "rel: " << to_string(r, p.notation()) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Abelianization.

struct AbelianElement {
  std::vector<BigInt> free;     // coordinates in Z^free_rank
  std::vector<BigInt> torsion;  // residues mod torsion[i], in [0, d_i)

  bool is_zero() const {
    return std::all_of(free.begin(), free.end(), [](const BigInt& x) { return x == 0; }) &&
           std::all_of(torsion.begin(), torsion.end(), [](const BigInt& x) { return x == 0; });
  }
  friend bool operator==(const AbelianElement&, const AbelianElement&) = default;
};

class AbelianStructure {
 public:
  AbelianStructure(Alphabet alphabet, SmithForm form) : alphabet_(alphabet), form_(std::move(form)) {
    const std::size_t diag = std::min(form_.d.rows(), form_.d.cols());
    for (std::size_t i = 0; i < form_.d.cols(); ++i) {
      const BigInt d = i < diag ? form_.d(i, i) : BigInt(0);
      if (d == 0) {
        free_coords_.push_back(i);
      } else if (d != 1) {
        torsion_coords_.push_back(i);
        torsion_.push_back(d);
      }
    }
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t free_rank() const noexcept { return free_coords_.size(); }
  const std::vector<BigInt>& torsion() const noexcept { return torsion_; }
  const SmithForm& smith_form() const noexcept { return form_; }
  bool is_finite() const noexcept { return free_coords_.empty(); }

  BigInt order() const {
    if (!is_finite()) throw Error("abelianization is infinite");
    BigInt n = 1;
    for (const BigInt& d : torsion_) n *= d;
    return n;
  }

  AbelianElement project(const Word& w) const {
    require_same_alphabet(alphabet_, w.alphabet());
    const auto e = exponent_vector(w);
    return project(std::vector<BigInt>(e.begin(), e.end()));
  }

  // Image of an exponent vector under the change of basis v.
  AbelianElement project(const std::vector<BigInt>& e) const {
    const IntMatrix& v = form_.v;
    std::vector<BigInt> y(v.cols(), BigInt(0));
    for (std::size_t j = 0; j < v.cols(); ++j) {
      for (std::size_t i = 0; i < v.rows(); ++i) y[j] += e[i] * v(i, j);
    }
    AbelianElement out;
    for (std::size_t i : free_coords_) out.free.push_back(y[i]);
    for (std::size_t k = 0; k < torsion_coords_.size(); ++k) {
      BigInt r = y[torsion_coords_[k]] % torsion_[k];
      if (r < 0) r += torsion_[k];
      out.torsion.push_back(r);
    }
    return out;
  }

  AbelianElement add(const AbelianElement& a, const AbelianElement& b) const {
    AbelianElement out;
    for (std::size_t i = 0; i < a.free.size(); ++i) out.free.push_back(a.free[i] + b.free[i]);
    for (std::size_t k = 0; k < a.torsion.size(); ++k) {
      out.torsion.push_back((a.torsion[k] + b.torsion[k]) % torsion_[k]);
    }
    return out;
  }

  AbelianElement zero() const {
    return AbelianElement{std::vector<BigInt>(free_rank(), BigInt(0)),
                          std::vector<BigInt>(torsion_.size(), BigInt(0))};
  }

  // nullopt for elements of infinite order.
  std::optional<BigInt> order_of(const AbelianElement& a) const {
    for (const BigInt& x : a.free) {
      if (x != 0) return std::nullopt;
    }
    BigInt n = 1;
    for (std::size_t k = 0; k < torsion_.size(); ++k) {
      const BigInt g = boost::multiprecision::gcd(a.torsion[k], torsion_[k]);
      const BigInt ok = torsion_[k] / g;
      n = n / boost::multiprecision::gcd(n, ok) * ok;
    }
    return n;
  }

 private:
  Alphabet alphabet_;
  SmithForm form_;
  std::vector<std::size_t> free_coords_;
  std::vector<std::size_t> torsion_coords_;
  std::vector<BigInt> torsion_;
};

inline IntMatrix relator_matrix(const Presentation& p) {
  IntMatrix m(p.relators().size(), static_cast<std::size_t>(p.generator_count()));
  for (std::size_t i = 0; i < p.relators().size(); ++i) {
    const auto e = exponent_vector(p.relators()[i]);
    for (std::size_t j = 0; j < e.size(); ++j) m(i, j) = e[j];
  }
  return m;
}

inline AbelianStructure abelianization(const Presentation& p) {
  return AbelianStructure(p.alphabet(), snf(relator_matrix(p)));
}

inline AbelianElement ab_class(const AbelianStructure& a, const Word& w) { return a.project(w); }

// "Z^2 x Z/2 x Z/6"; the trivial group prints as "0".
inline std::string describe(const AbelianStructure& a) {
  std::vector<std::string> parts;
  if (a.free_rank() == 1) parts.emplace_back("Z");
  if (a.free_rank() > 1) parts.push_back("Z^" + std::to_string(a.free_rank()));
  for (const BigInt& d : a.torsion()) parts.push_back("Z/" + d.str());
  if (parts.empty()) return "0";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += " x " + parts[i];
  return out;
}

inline std::string to_string(const AbelianElement& e) {
  std::string out = "(";
  bool first = true;
  for (const auto* part : {&e.free, &e.torsion}) {
    for (const BigInt& x : *part) {
      if (!first) out += ", ";
      out += x.str();
      first = false;
    }
  }
  return out + ")";
}

// Cosets of the derived subgroup are the elements of the (finite)
// abelianization; each generator acts by translation by its class.
inline CosetTable coset_table_from_ab(const AbelianStructure& a, const Presentation& p) {
  require_same_alphabet(a.alphabet(), p.alphabet());
  if (!a.is_finite()) throw InfiniteIndex("abelianization is infinite");
  if (a.order() > 1'000'000) throw BudgetExhausted("abelianization too large for a coset table");
  const auto& moduli = a.torsion();
  const std::size_t n = static_cast<std::size_t>(a.order());

  auto encode = [&](const AbelianElement& e) {
    std::size_t code = 0;
    for (std::size_t k = 0; k < moduli.size(); ++k) {
      code = code * static_cast<std::size_t>(moduli[k]) + static_cast<std::size_t>(e.torsion[k]);
    }
    return code;
  };
  auto decode = [&](std::size_t code) {
    AbelianElement e{{}, std::vector<BigInt>(moduli.size())};
    for (std::size_t k = moduli.size(); k-- > 0;) {
      const auto m = static_cast<std::size_t>(moduli[k]);
      e.torsion[k] = code % m;
      code /= m;
    }
    return e;
  };

  const Alphabet alphabet = p.alphabet();
  std::vector<std::vector<int>> rows(n, std::vector<int>(2 * static_cast<std::size_t>(alphabet.rank())));
  for (Letter g = 1; g <= alphabet.rank(); ++g) {
    const AbelianElement fwd = a.project(Word::generator(alphabet, g));
    const AbelianElement back = a.project(Word::generator(alphabet, -g));
    for (std::size_t c = 0; c < n; ++c) {
      const AbelianElement e = decode(c);
      rows[c][CosetTable::column(g)] = static_cast<int>(encode(a.add(e, fwd)));
      rows[c][CosetTable::column(-g)] = static_cast<int>(encode(a.add(e, back)));
    }
  }
  std::vector<Word> commutators;
  for (Letter i = 1; i <= alphabet.rank(); ++i) {
    for (Letter j = i + 1; j <= alphabet.rank(); ++j) {
      commutators.push_back(Word::reduce(alphabet, {i, j, -i, -j}));
    }
  }
  return standardize(CosetTable(alphabet, std::move(rows), std::move(commutators)));
}

// ---------------------------------------------------------------------------
// Todd-Coxeter, HLT strategy: scan each relator at each live coset in order,
// defining new cosets as needed, then fill the rest of the row. Coincidences
// are processed with a union-find and a queue.

namespace detail {

class CosetEnumerator {
 public:
  CosetEnumerator(const Presentation& p, std::size_t max_cosets)
      : p_(p), width_(2 * static_cast<std::size_t>(p.generator_count())), max_cosets_(max_cosets) {
    define_new();
  }

  CosetTable run(const std::vector<Word>& subgens) {
    for (const Word& w : subgens) scan_and_fill(0, w.letters());
    for (int alpha = 0; alpha < count(); ++alpha) {
      for (const Word& r : p_.relators()) {
        if (!alive(alpha)) break;
        scan_and_fill(alpha, r.letters());
      }
      if (!alive(alpha)) continue;
      for (std::size_t col = 0; col < width_; ++col) {
        if (entry(alpha, col) < 0) define(alpha, CosetTable::letter_of_column(col));
      }
    }
    return extract(subgens);
  }

 private:
  static std::size_t column(Letter x) { return CosetTable::column(x); }

  int count() const { return static_cast<int>(parent_.size()); }
  bool alive(int c) const { return parent_[static_cast<std::size_t>(c)] == c; }
  int& entry(int c, std::size_t col) { return table_[static_cast<std::size_t>(c) * width_ + col]; }
  int& entry(int c, Letter x) { return entry(c, column(x)); }

  int define_new() {
    if (parent_.size() >= max_cosets_) {
      throw BudgetExhausted("coset enumeration exceeded " + std::to_string(max_cosets_) + " cosets");
    }
    parent_.push_back(count());
    table_.resize(table_.size() + width_, -1);
    return count() - 1;
  }

  void define(int alpha, Letter x) {
    const int beta = define_new();
    entry(alpha, x) = beta;
    entry(beta, -x) = alpha;
  }

  int rep(int c) {
    int r = c;
    while (parent_[static_cast<std::size_t>(r)] != r) r = parent_[static_cast<std::size_t>(r)];
    while (parent_[static_cast<std::size_t>(c)] != r) {
      const int next = parent_[static_cast<std::size_t>(c)];
      parent_[static_cast<std::size_t>(c)] = r;
      c = next;
    }
    return r;
  }

  void merge(int k, int l, std::deque<int>& queue) {
    const int phi = rep(k);
    const int psi = rep(l);
    if (phi == psi) return;
    const int mu = std::min(phi, psi);
    const int nu = std::max(phi, psi);
    parent_[static_cast<std::size_t>(nu)] = mu;
    queue.push_back(nu);
  }

  void coincidence(int alpha, int beta) {
    std::deque<int> queue;
    merge(alpha, beta, queue);
    while (!queue.empty()) {
      const int gamma = queue.front();
      queue.pop_front();
      for (std::size_t col = 0; col < width_; ++col) {
        const int delta = entry(gamma, col);
        if (delta < 0) continue;
        const Letter x = CosetTable::letter_of_column(col);
        entry(delta, -x) = -1;
        const int mu = rep(gamma);
        const int nu = rep(delta);
        if (entry(mu, x) >= 0) {
          merge(nu, entry(mu, x), queue);
        } else if (entry(nu, -x) >= 0) {
          merge(mu, entry(nu, -x), queue);
        } else {
          entry(mu, x) = nu;
          entry(nu, -x) = mu;
        }
      }
    }
  }

  void scan_and_fill(int alpha, const std::vector<Letter>& w) {
    if (w.empty()) return;
    int f = alpha;
    int b = alpha;
    std::ptrdiff_t i = 0;
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    for (;;) {
      while (i <= j && entry(f, w[static_cast<std::size_t>(i)]) >= 0) {
        f = entry(f, w[static_cast<std::size_t>(i)]);
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && entry(b, -w[static_cast<std::size_t>(j)]) >= 0) {
        b = entry(b, -w[static_cast<std::size_t>(j)]);
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        entry(f, w[static_cast<std::size_t>(i)]) = b;
        entry(b, -w[static_cast<std::size_t>(i)]) = f;
        return;
      }
      define(f, w[static_cast<std::size_t>(i)]);
    }
  }

  CosetTable extract(const std::vector<Word>& subgens) {
    std::vector<int> renumber(parent_.size(), -1);
    int live = 0;
    for (int c = 0; c < count(); ++c) {
      if (alive(c)) renumber[static_cast<std::size_t>(c)] = live++;
    }
    std::vector<std::vector<int>> rows;
    for (int c = 0; c < count(); ++c) {
      if (!alive(c)) continue;
      std::vector<int> row(width_);
      for (std::size_t col = 0; col < width_; ++col) {
        const int t = entry(c, col);
        if (t < 0) throw Error("internal error: coset enumeration left a gap");
        row[col] = renumber[static_cast<std::size_t>(rep(t))];
      }
      rows.push_back(std::move(row));
    }
    CosetTable table = standardize(CosetTable(p_.alphabet(), std::move(rows), subgens));
    if (!table.consistent_with(p_.relators())) {
      throw Error("internal error: coset enumeration produced an inconsistent table");
    }
    return table;
  }

  const Presentation& p_;
  std::size_t width_;
  std::size_t max_cosets_;
  std::vector<int> parent_;
  std::vector<int> table_;
};

}  // namespace detail

// Right cosets of <subgens>; coset 0 is the subgroup. Throws BudgetExhausted
// when more than max_cosets cosets would be defined.
inline CosetTable todd_coxeter(const Presentation& p, const std::vector<Word>& subgens,
                               std::size_t max_cosets) {
  if (max_cosets < 1) throw Error("max_cosets must be at least 1");
  for (const Word& w : subgens) require_same_alphabet(p.alphabet(), w.alphabet());
  return detail::CosetEnumerator(p, max_cosets).run(subgens);
}

// ---------------------------------------------------------------------------
// Reidemeister-Schreier.

struct SubgroupPresentation {
  Presentation presentation;
  // Schreier generator i+1 as a word in the parent group's generators.
  std::vector<Word> generator_words;
};

inline SubgroupPresentation reidemeister_schreier(const Presentation& p, const CosetTable& t) {
  require_same_alphabet(p.alphabet(), t.alphabet());
  if (!t.consistent_with(p.relators())) {
    throw Error("coset table is not consistent with the presentation");
  }
  const Alphabet alphabet = p.alphabet();
  const int n = t.size();
  const int rank = alphabet.rank();
  const std::size_t width = 2 * static_cast<std::size_t>(rank);

  // Breadth-first Schreier transversal.
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<Letter> parent_letter(static_cast<std::size_t>(n), 0);
  std::vector<Word> reps(static_cast<std::size_t>(n), Word(alphabet));
  std::vector<int> order{0};
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int c = order[i];
    for (std::size_t col = 0; col < width; ++col) {
      const Letter x = CosetTable::letter_of_column(col);
      const int d = t.act(c, x);
      if (seen[static_cast<std::size_t>(d)]) continue;
      seen[static_cast<std::size_t>(d)] = true;
      parent[static_cast<std::size_t>(d)] = c;
      parent_letter[static_cast<std::size_t>(d)] = x;
      reps[static_cast<std::size_t>(d)] = multiply(reps[static_cast<std::size_t>(c)], Word::generator(alphabet, x));
      order.push_back(d);
    }
  }

  std::vector<std::vector<int>> symbol(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(rank), 0));
  std::vector<Word> generator_words;
  for (int c = 0; c < n; ++c) {
    for (Letter g = 1; g <= rank; ++g) {
      const int d = t.act(c, g);
      const bool tree = (parent[static_cast<std::size_t>(d)] == c && parent_letter[static_cast<std::size_t>(d)] == g) ||
                        (parent[static_cast<std::size_t>(c)] == d && parent_letter[static_cast<std::size_t>(c)] == -g);
      if (tree) continue;
      generator_words.push_back(multiply({reps[static_cast<std::size_t>(c)], Word::generator(alphabet, g),
                                          invert(reps[static_cast<std::size_t>(d)])}));
      symbol[static_cast<std::size_t>(c)][static_cast<std::size_t>(g - 1)] = static_cast<int>(generator_words.size());
    }
  }

  const Alphabet sub(static_cast<int>(generator_words.size()));
  auto rewrite = [&](int c, const Word& w) {
    std::vector<Letter> out;
    for (Letter x : w.letters()) {
      const int d = t.act(c, x);
      const int s = x > 0 ? symbol[static_cast<std::size_t>(c)][static_cast<std::size_t>(x - 1)]
                          : -symbol[static_cast<std::size_t>(d)][static_cast<std::size_t>(-x - 1)];
      if (s != 0) out.push_back(s);
      c = d;
    }
    return Word::reduce(sub, out);
  };

  std::vector<Word> relators;
  for (int c = 0; c < n; ++c) {
    for (const Word& r : p.relators()) relators.push_back(rewrite(c, r));
  }
  Notation notation = Notation::standard(sub.rank());
  return {Presentation(sub, std::move(relators), std::move(notation)), std::move(generator_words)};
}

// ---------------------------------------------------------------------------
// Tietze simplification. Greedy and bounded: every move costs one unit of
// budget, and the loop stops at a fixpoint or when the budget runs out.

namespace detail {

inline std::vector<Letter> cyclic_core(std::vector<Letter> w) {
  std::size_t lo = 0;
  std::size_t hi = w.size();
  while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
    ++lo;
    --hi;
  }
  return std::vector<Letter>(w.begin() + static_cast<std::ptrdiff_t>(lo),
                             w.begin() + static_cast<std::ptrdiff_t>(hi));
}

inline std::vector<Letter> reduced(const std::vector<Letter>& w) {
  std::vector<Letter> out;
  for (Letter x : w) {
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

inline std::vector<Letter> inverse(const std::vector<Letter>& w) {
  std::vector<Letter> out(w.rbegin(), w.rend());
  for (Letter& x : out) x = -x;
  return out;
}

inline std::vector<Letter> rotate_left(const std::vector<Letter>& w, std::size_t k) {
  std::vector<Letter> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[(i + k) % w.size()];
  return out;
}

// Least cyclic conjugate of w or w^-1; relators that agree here generate the
// same normal subgroup.
inline std::vector<Letter> canonical_relator(const std::vector<Letter>& w) {
  std::vector<Letter> best = w;
  for (const auto& v : {w, inverse(w)}) {
    for (std::size_t k = 0; k < v.size(); ++k) best = std::min(best, rotate_left(v, k));
  }
  return best;
}

class TietzeState {
 public:
  TietzeState(int rank, const std::vector<Word>& relators) : rank_(rank) {
    for (const Word& r : relators) relators_.push_back(r.letters());
    normalize();
  }

  int rank() const { return rank_; }
  const std::vector<std::vector<Letter>>& relators() const { return relators_; }

  // Cyclically reduce, drop identities and duplicates, sort by length.
  void normalize() {
    std::set<std::vector<Letter>> seen;
    std::vector<std::vector<Letter>> out;
    for (auto& r : relators_) {
      auto c = canonical_relator(cyclic_core(reduced(r)));
      if (c.empty() || !seen.insert(c).second) continue;
      out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    relators_ = std::move(out);
  }

  // Removes a generator that occurs exactly once in some relator, using the
  // shortest such relator.
  bool eliminate_generator() {
    for (std::size_t ri = 0; ri < relators_.size(); ++ri) {
      const auto& r = relators_[ri];
      for (Letter g = 1; g <= rank_; ++g) {
        std::size_t hits = 0;
        std::size_t where = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (std::abs(r[i]) == g) {
            ++hits;
            where = i;
          }
        }
        if (hits != 1) continue;
        // Rotate so that g^e is last: u g^e = 1.
        auto rot = rotate_left(r, (where + 1) % r.size());
        const Letter e = rot.back();
        rot.pop_back();
        const std::vector<Letter> value = e > 0 ? inverse(rot) : rot;
        substitute(ri, g, value);
        return true;
      }
    }
    return false;
  }

  // Replaces a cyclic subword of some relator s by a shorter equivalent read
  // off a relator r (|r| <= |s|) whose cyclic conjugate is P Q with |P| > |Q|.
  bool shorten_relator() {
    for (std::size_t ri = 0; ri < relators_.size(); ++ri) {
      const auto r = relators_[ri];
      for (std::size_t si = 0; si < relators_.size(); ++si) {
        if (si == ri || relators_[si].size() < r.size()) continue;
        if (try_shorten(r, si)) return true;
      }
    }
    return false;
  }

 private:
  bool try_shorten(const std::vector<Letter>& r, std::size_t si) {
    const std::size_t len = r.size();
    auto& s = relators_[si];
    for (std::size_t m = len; 2 * m > len; --m) {
      for (const auto& base : {r, inverse(r)}) {
        for (std::size_t k = 0; k < len; ++k) {
          const auto rc = rotate_left(base, k);
          for (std::size_t start = 0; start < s.size(); ++start) {
            bool match = true;
            for (std::size_t j = 0; j < m && match; ++j) {
              match = s[(start + j) % s.size()] == rc[j];
            }
            if (!match) continue;
            // P = rc[0, m), Q = rc[m, len), P = Q^-1.
            std::vector<Letter> q(rc.begin() + static_cast<std::ptrdiff_t>(m), rc.end());
            std::vector<Letter> replacement = inverse(q);
            const auto rest_start = (start + m) % s.size();
            std::vector<Letter> next = replacement;
            for (std::size_t j = 0; j + m < s.size(); ++j) next.push_back(s[(rest_start + j) % s.size()]);
            s = next;
            normalize();
            return true;
          }
        }
      }
    }
    return false;
  }

  void substitute(std::size_t defining, Letter g, const std::vector<Letter>& value) {
    std::vector<std::vector<Letter>> out;
    for (std::size_t i = 0; i < relators_.size(); ++i) {
      if (i == defining) continue;
      std::vector<Letter> w;
      for (Letter x : relators_[i]) {
        if (x == g) {
          w.insert(w.end(), value.begin(), value.end());
        } else if (x == -g) {
          const auto inv = inverse(value);
          w.insert(w.end(), inv.begin(), inv.end());
        } else {
          w.push_back(x);
        }
      }
      for (Letter& x : w) {
        if (std::abs(x) > g) x += x > 0 ? -1 : 1;
      }
      out.push_back(std::move(w));
    }
    relators_ = std::move(out);
    --rank_;
    normalize();
  }

  int rank_;
  std::vector<std::vector<Letter>> relators_;
};

}  // namespace detail

struct TietzeResult {
  // Generator count may reach 0 (trivial group); relators are then empty.
  int generator_count = 0;
  std::vector<Word> relators;
  std::size_t steps_used = 0;
  bool fixpoint = false;  // stopped because no move applied, not for budget

  bool is_free() const { return relators.empty(); }
};

inline TietzeResult tietze_simplify(const Presentation& p, std::size_t budget) {
  detail::TietzeState state(p.generator_count(), p.relators());
  TietzeResult out;
  while (out.steps_used < budget) {
    if (state.rank() > 0 && state.eliminate_generator()) {
      ++out.steps_used;
      continue;
    }
    if (state.shorten_relator()) {
      ++out.steps_used;
      continue;
    }
    out.fixpoint = true;
    break;
  }
  if (out.steps_used >= budget && !out.fixpoint) {
    // Check whether we happen to be at a fixpoint anyway.
    detail::TietzeState probe = state;
    out.fixpoint = !(probe.rank() > 0 && probe.eliminate_generator()) && !probe.shorten_relator();
  }
  out.generator_count = state.rank();
  if (state.rank() > 0) {
    const Alphabet a(state.rank());
    for (const auto& r : state.relators()) out.relators.push_back(Word::reduce(a, r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Permutation images.

using Permutation = std::vector<int>;  // image of point i, 0-based

struct PermImage {
  bool valid = false;  // every relator acts trivially
  std::size_t order = 0;
};

// Right action: the word x y acts as x first, then y.
inline Permutation permutation_of(const std::vector<Permutation>& assignment, const Word& w,
                                  std::size_t points) {
  Permutation p(points);
  std::iota(p.begin(), p.end(), 0);
  for (Letter x : w.letters()) {
    const Permutation& g = assignment[static_cast<std::size_t>(std::abs(x) - 1)];
    if (x > 0) {
      for (int& i : p) i = g[static_cast<std::size_t>(i)];
    } else {
      Permutation inv(points);
      for (std::size_t i = 0; i < points; ++i) inv[static_cast<std::size_t>(g[i])] = static_cast<int>(i);
      for (int& i : p) i = inv[static_cast<std::size_t>(i)];
    }
  }
  return p;
}

inline PermImage perm_image(const Presentation& p, const std::vector<Permutation>& assignment,
                            std::size_t max_order = 100'000) {
  if (assignment.size() != static_cast<std::size_t>(p.generator_count())) {
    throw Error("permutation assignment needs one permutation per generator");
  }
  const std::size_t points = assignment.empty() ? 0 : assignment.front().size();
  for (const Permutation& g : assignment) {
    if (g.size() != points) throw Error("permutations act on different numbers of points");
    std::vector<bool> hit(points, false);
    for (int i : g) {
      if (i < 0 || static_cast<std::size_t>(i) >= points || hit[static_cast<std::size_t>(i)]) {
        throw Error("assignment entry is not a permutation");
      }
      hit[static_cast<std::size_t>(i)] = true;
    }
  }
  PermImage out;
  Permutation id(points);
  std::iota(id.begin(), id.end(), 0);
  out.valid = std::all_of(p.relators().begin(), p.relators().end(), [&](const Word& r) {
    return permutation_of(assignment, r, points) == id;
  });

  std::set<Permutation> seen{id};
  std::vector<Permutation> frontier{id};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const Permutation& q : frontier) {
      for (const Permutation& g : assignment) {
        Permutation r(points);
        for (std::size_t i = 0; i < points; ++i) r[i] = g[static_cast<std::size_t>(q[i])];
        if (seen.insert(r).second) {
          if (seen.size() > max_order) throw BudgetExhausted("permutation group closure exceeded bound");
          next.push_back(std::move(r));
        }
      }
    }
    frontier = std::move(next);
  }
  out.order = seen.size();
  return out;
}

// Cycle notation on 1-based points, e.g. "(1 2)(3 4)" or "()".
inline Permutation parse_cycles(std::string_view text, std::size_t points) {
  Permutation p(points);
  std::iota(p.begin(), p.end(), 0);
  std::size_t i = 0;
  auto fail = [&](const std::string& what) -> void { throw ParseError(what, 1, i + 1); };
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '(') fail("expected '('");
    ++i;
    std::vector<int> cycle;
    for (;;) {
      while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
      if (i >= text.size()) fail("unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail("expected a point number");
      int v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) v = v * 10 + (text[i++] - '0');
      if (v < 1 || static_cast<std::size_t>(v) > points) fail("point out of range");
      cycle.push_back(v - 1);
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const int from = cycle[k];
      const int to = cycle[(k + 1) % cycle.size()];
      if (p[static_cast<std::size_t>(from)] != from) fail("point repeated across cycles");
      p[static_cast<std::size_t>(from)] = to;
    }
  }
  std::vector<bool> hit(points, false);
  for (int v : p) {
    if (hit[static_cast<std::size_t>(v)]) throw ParseError("cycles overlap", 1, 1);
    hit[static_cast<std::size_t>(v)] = true;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Certificate-checked equality in a presented group.

struct RewriteStep {
  std::size_t position = 0;  // insertion point in the current word
  std::size_t relator = 0;   // index into the presentation's relators
  int exponent = 1;          // +1 or -1
  Word conjugator;
};

using RewriteCertificate = std::vector<RewriteStep>;

// Applies each step (insert conjugator * relator^exponent * conjugator^-1 at
// the given position, then reduce) to w1 and compares the result with w2.
// Each step multiplies by a conjugate of a relator, so true implies w1 = w2 in
// the presented group.
inline bool rewrite_equal(const Presentation& p, const Word& w1, const Word& w2,
                          const RewriteCertificate& cert) {
  require_same_alphabet(p.alphabet(), w1.alphabet());
  require_same_alphabet(p.alphabet(), w2.alphabet());
  Word current = w1;
  for (const RewriteStep& step : cert) {
    if (step.relator >= p.relators().size()) throw Error("certificate step names a missing relator");
    if (step.exponent != 1 && step.exponent != -1) throw Error("certificate exponent must be +1 or -1");
    if (step.position > current.length()) throw Error("certificate step position out of range");
    require_same_alphabet(p.alphabet(), step.conjugator.alphabet());
    const Word inserted = conjugate(power(p.relators()[step.relator], step.exponent), step.conjugator);
    const auto& c = current.letters();
    std::vector<Letter> next(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(step.position));
    next.insert(next.end(), inserted.letters().begin(), inserted.letters().end());
    next.insert(next.end(), c.begin() + static_cast<std::ptrdiff_t>(step.position), c.end());
    current = Word::reduce(p.alphabet(), next);
  }
  return current == w2;
}

}  // namespace mcg
