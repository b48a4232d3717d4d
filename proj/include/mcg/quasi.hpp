#pragma once

// Brooks counting quasimorphisms on free groups, in exact rational
// arithmetic: evaluation, defect over balls, homogenization, pullback, the
// bounded coboundary operator and rank certificates.
//
// Counting convention: occurrences of a pattern are counted greedily from
// left to right without overlap.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mcg/error.hpp"
#include "mcg/snf.hpp"
#include "mcg/words.hpp"

namespace mcg {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr const char* kCountingConvention = "non-overlapping, greedy left-to-right";

namespace detail {

inline std::size_t count_occurrences(std::span<const Letter> pattern, std::span<const Letter> text) {
  const std::size_t len = pattern.size();
  std::size_t count = 0;
  std::size_t i = 0;
  while (i + len <= text.size()) {
    if (std::equal(pattern.begin(), pattern.end(), text.begin() + static_cast<std::ptrdiff_t>(i))) {
      ++count;
      i += len;
    } else {
      ++i;
    }
  }
  return count;
}

// KMP automaton for the greedy scanner: state = length of the longest prefix
// of the pattern that is a suffix of the text read since the last match.
class GreedyScanner {
 public:
  explicit GreedyScanner(std::vector<Letter> pattern) : pattern_(std::move(pattern)), fail_(pattern_.size() + 1, 0) {
    for (std::size_t i = 1, k = 0; i < pattern_.size(); ++i) {
      while (k > 0 && pattern_[i] != pattern_[k]) k = fail_[k];
      if (pattern_[i] == pattern_[k]) ++k;
      fail_[i + 1] = k;
    }
  }

  // Advances the state by one letter; returns true on a completed match.
  bool step(std::size_t& state, Letter x) const {
    while (state > 0 && pattern_[state] != x) state = fail_[state];
    if (pattern_[state] == x) ++state;
    if (state == pattern_.size()) {
      state = 0;
      return true;
    }
    return false;
  }

  std::size_t pattern_length() const { return pattern_.size(); }

 private:
  std::vector<Letter> pattern_;
  std::vector<std::size_t> fail_;
};

}  // namespace detail

// Number of non-overlapping occurrences of `pattern` in the reduced spelling
// of g, scanning left to right.
inline std::size_t brooks_count(const Word& pattern, const Word& g) {
  require_same_alphabet(pattern.alphabet(), g.alphabet());
  if (pattern.empty()) throw Error("Brooks pattern must be nonempty");
  if (!is_cyclically_reduced(pattern)) throw Error("Brooks pattern must be cyclically reduced");
  return detail::count_occurrences(pattern.letters(), g.letters());
}

struct BrooksTerm {
  Word pattern;
  Rational coefficient;
};

// Finite linear combination of Brooks functions h_w(g) = #w(g) - #w^-1(g),
// optionally precomposed with a homomorphism into the patterns' free group.
class Quasimorphism {
 public:
  Quasimorphism(Alphabet alphabet, std::vector<BrooksTerm> terms)
      : alphabet_(alphabet), terms_(std::move(terms)) {
    for (const BrooksTerm& t : terms_) {
      require_same_alphabet(alphabet_, t.pattern.alphabet());
      if (t.pattern.empty() || !is_cyclically_reduced(t.pattern)) {
        throw Error("Brooks pattern must be nonempty and cyclically reduced");
      }
    }
  }

  static Quasimorphism brooks(const Word& pattern, Rational coefficient = 1) {
    return Quasimorphism(pattern.alphabet(), {BrooksTerm{pattern, std::move(coefficient)}});
  }

  // The exponent-sum functional of generator g, as the Brooks function of the
  // one-letter pattern.
  static Quasimorphism exponent_sum(Alphabet alphabet, Letter g) {
    return brooks(Word::generator(alphabet, g));
  }

  // Alphabet the patterns live in.
  const Alphabet& pattern_alphabet() const noexcept { return alphabet_; }
  // Alphabet the function is evaluated on.
  const Alphabet& domain() const noexcept {
    return precompose_ ? precompose_->domain() : alphabet_;
  }
  const std::vector<BrooksTerm>& terms() const noexcept { return terms_; }
  const std::optional<FreeHom>& precompose() const noexcept { return precompose_; }

  // Image of g in the patterns' free group.
  Word push_forward(const Word& g) const {
    require_same_alphabet(domain(), g.alphabet());
    return precompose_ ? apply_hom(*precompose_, g) : g;
  }

  friend Quasimorphism pullback(const Quasimorphism& h, const FreeHom& f);

 private:
  Alphabet alphabet_;
  std::vector<BrooksTerm> terms_;
  std::optional<FreeHom> precompose_;
};

// h o f. Stored lazily: evaluation applies f first.
inline Quasimorphism pullback(const Quasimorphism& h, const FreeHom& f) {
  require_same_alphabet(h.domain(), f.codomain());
  Quasimorphism out = h;
  out.precompose_ = h.precompose_ ? compose(*h.precompose_, f) : f;
  return out;
}

inline Rational qm_eval(const Quasimorphism& h, const Word& g) {
  const Word image = h.push_forward(g);
  Rational total = 0;
  for (const BrooksTerm& t : h.terms()) {
    const auto plus = detail::count_occurrences(t.pattern.letters(), image.letters());
    const auto minus = detail::count_occurrences(invert(t.pattern).letters(), image.letters());
    total += t.coefficient * (static_cast<long long>(plus) - static_cast<long long>(minus));
  }
  return total;
}

// All reduced words of length <= radius, shortest first, then lexicographic in
// the letter order 1, -1, 2, -2, ...
inline std::vector<Word> ball(Alphabet alphabet, int radius) {
  std::vector<Letter> letters;
  for (Letter g = 1; g <= alphabet.rank(); ++g) {
    letters.push_back(g);
    letters.push_back(-g);
  }
  std::vector<Word> out{Word(alphabet)};
  std::size_t layer_start = 0;
  for (int r = 1; r <= radius; ++r) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_start; i < layer_end; ++i) {
      for (Letter x : letters) {
        if (!out[i].empty() && out[i].letters().back() == -x) continue;
        std::vector<Letter> next = out[i].letters();
        next.push_back(x);
        out.push_back(Word::reduce(alphabet, next));
      }
    }
    layer_start = layer_end;
  }
  return out;
}

inline long double ball_size(int rank, int radius) {
  long double size = 1;
  long double layer = 2.0L * rank;
  for (int r = 1; r <= radius; ++r) {
    size += layer;
    layer *= 2.0L * rank - 1;
  }
  return size;
}

// max |h(x) + h(y) - h(xy)| over reduced x, y of length <= radius. A statement
// about the ball only.
inline Rational defect_ball(const Quasimorphism& h, int radius, long double max_pairs = 2.0e8L) {
  if (radius < 1) throw Error("defect radius must be at least 1");
  const long double size = ball_size(h.domain().rank(), radius);
  if (size * size > max_pairs) {
    throw BudgetExhausted("ball of radius " + std::to_string(radius) + " too large for defect budget");
  }

  // Clear denominators so the inner loop runs on machine integers.
  BigInt scale = 1;
  for (const BrooksTerm& t : h.terms()) {
    const BigInt d = denominator(t.coefficient);
    scale = scale / boost::multiprecision::gcd(scale, d) * d;
  }
  std::vector<std::int64_t> coef;
  std::vector<std::vector<Letter>> pos;
  std::vector<std::vector<Letter>> neg;
  for (const BrooksTerm& t : h.terms()) {
    const BigInt c = numerator(Rational(t.coefficient * scale));
    if (abs(c) > BigInt(1) << 40) throw Error("defect: coefficients too large for the ball scan");
    coef.push_back(static_cast<std::int64_t>(c));
    pos.push_back(t.pattern.letters());
    neg.push_back(invert(t.pattern).letters());
  }
  auto value = [&](std::span<const Letter> w) {
    std::int64_t v = 0;
    for (std::size_t j = 0; j < coef.size(); ++j) {
      v += coef[j] * (static_cast<std::int64_t>(detail::count_occurrences(pos[j], w)) -
                      static_cast<std::int64_t>(detail::count_occurrences(neg[j], w)));
    }
    return v;
  };

  const std::vector<Word> words = ball(h.domain(), radius);
  std::vector<std::vector<Letter>> images;
  std::vector<std::int64_t> values;
  for (const Word& w : words) {
    images.push_back(h.push_forward(w).letters());
    values.push_back(value(images.back()));
  }

  std::int64_t best = 0;
  std::vector<Letter> buffer;
  const Alphabet target = h.pattern_alphabet();
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      buffer.clear();
      if (h.precompose()) {
        buffer = multiply(Word::reduce(target, images[i]), Word::reduce(target, images[j])).letters();
      } else {
        const auto& x = images[i];
        const auto& y = images[j];
        std::size_t k = 0;
        while (k < x.size() && k < y.size() && x[x.size() - 1 - k] == -y[k]) ++k;
        buffer.insert(buffer.end(), x.begin(), x.end() - static_cast<std::ptrdiff_t>(k));
        buffer.insert(buffer.end(), y.begin() + static_cast<std::ptrdiff_t>(k), y.end());
      }
      const std::int64_t d = values[i] + values[j] - value(buffer);
      best = std::max(best, d < 0 ? -d : d);
    }
  }
  return Rational(BigInt(best), scale);
}

namespace detail {

// Slope of m -> #pattern(u c^m u^-1) for g = u c u^-1, c cyclically reduced.
// The scanner state at the boundaries between copies of c is eventually
// periodic; the count gained over one period divided by its length is the
// exact slope. Gives up (Inconclusive) if no state repeats within `cap` copies.
inline Rational count_slope(const Word& pattern, const Word& g, std::size_t cap) {
  const auto [conj, core] = cyclic_reduce(g);
  if (core.empty()) return 0;
  const GreedyScanner scanner(pattern.letters());
  std::size_t state = 0;
  long long count = 0;
  for (Letter x : conj.letters()) count += scanner.step(state, x);
  std::map<std::size_t, std::pair<std::size_t, long long>> seen;  // state -> (copy, count)
  for (std::size_t m = 0; m <= cap; ++m) {
    if (auto it = seen.find(state); it != seen.end()) {
      const auto [m0, count0] = it->second;
      return Rational(count - count0, static_cast<long long>(m - m0));
    }
    seen.emplace(state, std::make_pair(m, count));
    for (Letter x : core.letters()) count += scanner.step(state, x);
  }
  throw Inconclusive("homogenization did not stabilize within " + std::to_string(cap) + " powers");
}

}  // namespace detail

inline constexpr std::size_t kDefaultHomogenizationCap = 64;

// lim h(g^m) / m, exactly.
inline Rational homogenize(const Quasimorphism& h, const Word& g,
                           std::size_t cap = kDefaultHomogenizationCap) {
  const Word image = h.push_forward(g);
  Rational total = 0;
  for (const BrooksTerm& t : h.terms()) {
    total += t.coefficient * (detail::count_slope(t.pattern, image, cap) -
                              detail::count_slope(invert(t.pattern), image, cap));
  }
  return total;
}

// Rank over Q, by Gaussian elimination.
inline std::size_t rational_rank(std::vector<std::vector<Rational>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

struct IndependenceCertificate {
  std::vector<std::vector<Rational>> matrix;      // homogenized values [h][test]
  std::vector<std::vector<Rational>> hom_rows;    // exponent sums [generator][test]
  std::size_t rank_family = 0;
  std::size_t rank_stacked = 0;
  std::size_t rank_homs = 0;
  // Lower bound for dim span(hs) (include_homomorphisms = false) or for
  // dim (span(hs) + X) / X where X is the space of homomorphisms to Q.
  std::size_t value = 0;
};

// With include_homomorphisms the exponent-sum rows of the domain are stacked
// under the family and the certificate is rank(stacked) - rank(hom rows): the
// family's image in Q^tests modulo the image of the homomorphisms.
inline IndependenceCertificate independence_certificate(const std::vector<Quasimorphism>& hs,
                                                        const std::vector<Word>& tests,
                                                        bool include_homomorphisms,
                                                        std::size_t cap = kDefaultHomogenizationCap) {
  if (tests.empty()) throw Error("independence rank needs at least one test word");
  if (hs.empty()) return {};
  const Alphabet domain = hs.front().domain();
  for (const Quasimorphism& h : hs) require_same_alphabet(domain, h.domain());
  for (const Word& t : tests) require_same_alphabet(domain, t.alphabet());

  IndependenceCertificate cert;
  for (const Quasimorphism& h : hs) {
    std::vector<Rational> row;
    for (const Word& t : tests) row.push_back(homogenize(h, t, cap));
    cert.matrix.push_back(std::move(row));
  }
  cert.rank_family = rational_rank(cert.matrix);
  if (!include_homomorphisms) {
    cert.rank_stacked = cert.rank_family;
    cert.value = cert.rank_family;
    return cert;
  }
  for (Letter g = 1; g <= domain.rank(); ++g) {
    std::vector<Rational> row;
    for (const Word& t : tests) row.push_back(exponent_vector(t)[static_cast<std::size_t>(g - 1)]);
    cert.hom_rows.push_back(std::move(row));
  }
  auto stacked = cert.matrix;
  stacked.insert(stacked.end(), cert.hom_rows.begin(), cert.hom_rows.end());
  cert.rank_stacked = rational_rank(stacked);
  cert.rank_homs = rational_rank(cert.hom_rows);
  cert.value = cert.rank_stacked - cert.rank_homs;
  return cert;
}

inline std::size_t independence_rank(const std::vector<Quasimorphism>& hs, const std::vector<Word>& tests,
                                     bool include_homomorphisms,
                                     std::size_t cap = kDefaultHomogenizationCap) {
  return independence_certificate(hs, tests, include_homomorphisms, cap).value;
}

// ---------------------------------------------------------------------------
// Bounded cochains and the coboundary operator.

// A k-cochain: any rational function of k group elements.
class Cochain {
 public:
  using Function = std::function<Rational(std::span<const Word>)>;

  Cochain(int arity, Function f) : arity_(arity), f_(std::move(f)) {
    if (arity < 0) throw Error("cochain arity must be nonnegative");
  }

  int arity() const noexcept { return arity_; }

  Rational operator()(std::span<const Word> args) const {
    if (static_cast<int>(args.size()) != arity_) {
      throw Error("cochain of arity " + std::to_string(arity_) + " applied to " +
                  std::to_string(args.size()) + " arguments");
    }
    return f_(args);
  }

 private:
  int arity_;
  Function f_;
};

// Finitely supported test cochain; zero off its support.
class BoundedCochain {
 public:
  explicit BoundedCochain(int arity) : arity_(arity) {
    if (arity < 0) throw Error("cochain arity must be nonnegative");
  }

  int arity() const noexcept { return arity_; }
  const std::map<std::vector<Word>, Rational>& support() const noexcept { return values_; }

  void set(std::vector<Word> args, Rational value) {
    if (static_cast<int>(args.size()) != arity_) throw Error("cochain support tuple has wrong arity");
    if (value == 0) {
      values_.erase(args);
    } else {
      values_[std::move(args)] = std::move(value);
    }
  }

  Rational operator()(std::span<const Word> args) const {
    if (static_cast<int>(args.size()) != arity_) throw Error("cochain applied to wrong number of arguments");
    auto it = values_.find(std::vector<Word>(args.begin(), args.end()));
    return it == values_.end() ? Rational(0) : it->second;
  }

  Rational sup_norm() const {
    Rational best = 0;
    for (const auto& [args, v] : values_) best = std::max(best, v < 0 ? Rational(-v) : v);
    return best;
  }

  Cochain as_cochain() const {
    return Cochain(arity_, [self = *this](std::span<const Word> args) { return self(args); });
  }

 private:
  int arity_;
  std::map<std::vector<Word>, Rational> values_;
};

// (delta f)(x_0..x_k) = f(x_1..x_k)
//                      + sum_{i=1..k} (-1)^i f(x_0, .., x_{i-1} x_i, .., x_k)
//                      + (-1)^{k+1} f(x_0..x_{k-1})
inline Cochain coboundary(const Cochain& f) {
  const int k = f.arity();
  return Cochain(k + 1, [f, k](std::span<const Word> x) {
    Rational total = f(x.subspan(1));
    for (int i = 1; i <= k; ++i) {
      std::vector<Word> args;
      for (int j = 0; j <= k; ++j) {
        if (j == i) continue;
        if (j == i - 1) {
          args.push_back(multiply(x[static_cast<std::size_t>(i - 1)], x[static_cast<std::size_t>(i)]));
        } else {
          args.push_back(x[static_cast<std::size_t>(j)]);
        }
      }
      total += (i % 2 == 0 ? 1 : -1) * f(args);
    }
    total += ((k + 1) % 2 == 0 ? 1 : -1) * f(x.first(static_cast<std::size_t>(k)));
    return total;
  });
}

inline Rational delta_b(const Cochain& f, std::span<const Word> tuple) {
  if (static_cast<int>(tuple.size()) != f.arity() + 1) {
    throw Error("coboundary of a " + std::to_string(f.arity()) + "-cochain needs " +
                std::to_string(f.arity() + 1) + " arguments");
  }
  return coboundary(f)(tuple);
}

inline Rational delta_b(const BoundedCochain& f, std::span<const Word> tuple) {
  return delta_b(f.as_cochain(), tuple);
}

// The quasimorphism as a 1-cochain.
inline Cochain as_cochain(const Quasimorphism& h) {
  return Cochain(1, [h](std::span<const Word> x) { return qm_eval(h, x[0]); });
}

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace mcg
