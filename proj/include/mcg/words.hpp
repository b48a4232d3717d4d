#pragma once

// Reduced words in free groups of finite rank.
//
// A letter is a nonzero signed integer: +i is the i-th free generator and -i
// its inverse. Generator names ("a", "B", ...) only exist in the parser and
// printer at the bottom of this header.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcg/error.hpp"

namespace mcg {

using Letter = int;

class Alphabet {
 public:
  explicit Alphabet(int rank) : rank_(rank) {
    if (rank < 1) throw Error("alphabet rank must be at least 1");
  }

  int rank() const noexcept { return rank_; }
  bool contains(Letter x) const noexcept {
    return x != 0 && x >= -rank_ && x <= rank_;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  int rank_;
};

// Freely reduced word. Immutable once constructed; every way of making one
// goes through reduction.
class Word {
 public:
  explicit Word(Alphabet alphabet) : alphabet_(alphabet) {}

  // Free reduction of an arbitrary letter sequence.
  static Word reduce(Alphabet alphabet, std::span<const Letter> letters) {
    std::vector<Letter> out;
    out.reserve(letters.size());
    for (Letter x : letters) {
      if (!alphabet.contains(x)) {
        throw Error("letter " + std::to_string(x) +
                    " outside alphabet of rank " +
                    std::to_string(alphabet.rank()));
      }
      if (!out.empty() && out.back() == -x) {
        out.pop_back();
      } else {
        out.push_back(x);
      }
    }
    return Word(alphabet, std::move(out));
  }

  static Word reduce(Alphabet alphabet, std::initializer_list<Letter> letters) {
    return reduce(alphabet, std::span<const Letter>(letters.begin(), letters.size()));
  }

  static Word generator(Alphabet alphabet, Letter x) {
    return reduce(alphabet, {x});
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    if (auto c = a.alphabet_.rank() <=> b.alphabet_.rank(); c != 0) return c;
    if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
    return a.letters_ <=> b.letters_;
  }

 private:
  Word(Alphabet alphabet, std::vector<Letter> letters)
      : alphabet_(alphabet), letters_(std::move(letters)) {}

  Alphabet alphabet_;
  std::vector<Letter> letters_;
};

inline void require_same_alphabet(const Alphabet& a, const Alphabet& b) {
  if (!(a == b)) {
    throw AlphabetMismatch("alphabet mismatch: rank " +
                           std::to_string(a.rank()) + " vs rank " +
                           std::to_string(b.rank()));
  }
}

inline Word multiply(const Word& u, const Word& v) {
  require_same_alphabet(u.alphabet(), v.alphabet());
  const auto& a = u.letters();
  const auto& b = v.letters();
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[a.size() - 1 - k] == -b[k]) ++k;
  std::vector<Letter> out(a.begin(), a.end() - static_cast<std::ptrdiff_t>(k));
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(k), b.end());
  return Word::reduce(u.alphabet(), out);
}

inline Word multiply(std::initializer_list<Word> factors) {
  if (factors.size() == 0) throw Error("multiply of an empty product");
  Word out(factors.begin()->alphabet());
  for (const Word& f : factors) out = multiply(out, f);
  return out;
}

inline Word invert(const Word& w) {
  std::vector<Letter> out(w.letters().rbegin(), w.letters().rend());
  for (Letter& x : out) x = -x;
  return Word::reduce(w.alphabet(), out);
}

inline Word power(const Word& w, long long n) {
  Word base = n < 0 ? invert(w) : w;
  Word out(w.alphabet());
  for (long long i = 0; i < (n < 0 ? -n : n); ++i) out = multiply(out, base);
  return out;
}

inline Word conjugate(const Word& g, const Word& by) {
  return multiply({by, g, invert(by)});
}

struct CyclicDecomposition {
  Word conjugator;
  Word core;
};

// w = conjugator * core * conjugator^-1 with core cyclically reduced and the
// conjugator as short as possible.
inline CyclicDecomposition cyclic_reduce(const Word& w) {
  const auto& x = w.letters();
  std::size_t k = 0;
  while (2 * k + 1 < x.size() && x[k] == -x[x.size() - 1 - k]) ++k;
  std::vector<Letter> conj(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<Letter> core(x.begin() + static_cast<std::ptrdiff_t>(k),
                           x.end() - static_cast<std::ptrdiff_t>(k));
  return {Word::reduce(w.alphabet(), conj), Word::reduce(w.alphabet(), core)};
}

inline bool is_cyclically_reduced(const Word& w) {
  return w.length() < 2 || w.letters().front() != -w.letters().back();
}

// The unique v with v^k = w, if any. Roots are unique in free groups, which is
// what makes this a function.
inline std::optional<Word> kth_root(const Word& w, int k) {
  if (k < 1) throw Error("kth_root needs k >= 1");
  if (w.empty()) return w;
  auto [conj, core] = cyclic_reduce(w);
  const auto& c = core.letters();
  if (c.size() % static_cast<std::size_t>(k) != 0) return std::nullopt;
  const std::size_t period = c.size() / static_cast<std::size_t>(k);
  for (std::size_t i = period; i < c.size(); ++i) {
    if (c[i] != c[i - period]) return std::nullopt;
  }
  Word root = Word::reduce(w.alphabet(), std::span<const Letter>(c.data(), period));
  return conjugate(root, conj);
}

// Exponent-sum vector; the abelianization map F_n -> Z^n.
inline std::vector<std::int64_t> exponent_vector(const Word& w) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(w.alphabet().rank()), 0);
  for (Letter x : w.letters()) v[static_cast<std::size_t>(std::abs(x) - 1)] += x > 0 ? 1 : -1;
  return v;
}

// Homomorphism between free groups, given by the images of the generators.
class FreeHom {
 public:
  FreeHom(Alphabet domain, Alphabet codomain, std::vector<Word> images)
      : domain_(domain), codomain_(codomain), images_(std::move(images)) {
    if (images_.size() != static_cast<std::size_t>(domain.rank())) {
      throw Error("homomorphism needs one image per domain generator");
    }
    for (const Word& w : images_) require_same_alphabet(w.alphabet(), codomain);
  }

  static FreeHom identity(Alphabet a) {
    std::vector<Word> images;
    for (int i = 1; i <= a.rank(); ++i) images.push_back(Word::generator(a, i));
    return FreeHom(a, a, std::move(images));
  }

  const Alphabet& domain() const noexcept { return domain_; }
  const Alphabet& codomain() const noexcept { return codomain_; }
  const std::vector<Word>& images() const noexcept { return images_; }
  const Word& image(int generator) const {
    return images_.at(static_cast<std::size_t>(generator - 1));
  }

  friend bool operator==(const FreeHom&, const FreeHom&) = default;

 private:
  Alphabet domain_;
  Alphabet codomain_;
  std::vector<Word> images_;
};

inline Word apply_hom(const FreeHom& h, const Word& w) {
  require_same_alphabet(h.domain(), w.alphabet());
  std::vector<Letter> out;
  for (Letter x : w.letters()) {
    const auto& img = h.image(std::abs(x)).letters();
    if (x > 0) {
      out.insert(out.end(), img.begin(), img.end());
    } else {
      for (auto it = img.rbegin(); it != img.rend(); ++it) out.push_back(-*it);
    }
  }
  return Word::reduce(h.codomain(), out);
}

inline FreeHom compose(const FreeHom& outer, const FreeHom& inner) {
  std::vector<Word> images;
  for (const Word& w : inner.images()) images.push_back(apply_hom(outer, w));
  return FreeHom(inner.domain(), outer.codomain(), std::move(images));
}

// ---------------------------------------------------------------------------
// Text syntax.
//
//   word  := item*
//   item  := atom ('^' integer)?
//   atom  := name | '(' word ')' | '1'
//
// A lowercase name is a generator, the matching uppercase letter its inverse.
// Whitespace is ignored; "1" and "" are the identity. Printing is canonical:
// no exponents, no parentheses.

class Notation {
 public:
  // Generator i is named by names[i - 1].
  explicit Notation(std::vector<char> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      const char c = names_[i];
      if (c < 'a' || c > 'z') throw Error(std::string("generator name must be a lowercase letter: ") + c);
      for (std::size_t j = 0; j < i; ++j) {
        if (names_[j] == c) throw Error(std::string("duplicate generator name: ") + c);
      }
    }
  }

  // a, b, c, ... for the first `rank` generators (at most 26).
  static Notation standard(int rank) {
    std::vector<char> names;
    for (int i = 0; i < std::min(rank, 26); ++i) names.push_back(static_cast<char>('a' + i));
    return Notation(std::move(names));
  }

  int rank() const noexcept { return static_cast<int>(names_.size()); }
  const std::vector<char>& names() const noexcept { return names_; }

  std::optional<Letter> letter(char c) const {
    const bool inverse = std::isupper(static_cast<unsigned char>(c)) != 0;
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == lower) {
        const Letter x = static_cast<Letter>(i + 1);
        return inverse ? -x : x;
      }
    }
    return std::nullopt;
  }

  char name(Letter x) const {
    const char c = names_.at(static_cast<std::size_t>(std::abs(x) - 1));
    return x > 0 ? c : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }

 private:
  std::vector<char> names_;
};

namespace detail {

class WordParser {
 public:
  WordParser(std::string_view text, const Notation& notation, std::size_t line,
             std::size_t column0)
      : text_(text), notation_(notation), line_(line), column0_(column0) {}

  std::vector<Letter> parse() {
    auto out = sequence();
    skip_space();
    if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return out;
  }

 private:
  static constexpr long long kMaxExponent = 1'000'000;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, column0_ + pos_ + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::vector<Letter> sequence() {
    std::vector<Letter> out;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] == ')') return out;
      auto atom_letters = atom();
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '^') {
        ++pos_;
        const long long e = exponent();
        atom_letters = repeat(atom_letters, e);
      }
      out.insert(out.end(), atom_letters.begin(), atom_letters.end());
    }
  }

  std::vector<Letter> atom() {
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = sequence();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("missing ')'");
      ++pos_;
      return inner;
    }
    if (c == '1') {
      ++pos_;
      return {};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      auto x = notation_.letter(c);
      if (!x) fail(std::string("unknown generator '") + c + "'");
      ++pos_;
      return {*x};
    }
    fail(std::string("unexpected '") + c + "'");
  }

  long long exponent() {
    skip_space();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    const std::size_t start = pos_;
    long long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > kMaxExponent) fail("exponent too large");
      ++pos_;
    }
    if (pos_ == start) fail("malformed exponent");
    return negative ? -value : value;
  }

  static std::vector<Letter> repeat(const std::vector<Letter>& base, long long e) {
    std::vector<Letter> unit = base;
    if (e < 0) {
      std::reverse(unit.begin(), unit.end());
      for (Letter& x : unit) x = -x;
      e = -e;
    }
    std::vector<Letter> out;
    for (long long i = 0; i < e; ++i) out.insert(out.end(), unit.begin(), unit.end());
    return out;
  }

  std::string_view text_;
  const Notation& notation_;
  std::size_t line_;
  std::size_t column0_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Word parse_word(std::string_view text, Alphabet alphabet,
                       const Notation& notation, std::size_t line = 1,
                       std::size_t column0 = 0) {
  auto letters = detail::WordParser(text, notation, line, column0).parse();
  for (Letter x : letters) {
    if (!alphabet.contains(x)) {
      throw ParseError("generator outside alphabet of rank " + std::to_string(alphabet.rank()),
                       line, column0 + 1);
    }
  }
  return Word::reduce(alphabet, letters);
}

inline Word parse_word(std::string_view text, Alphabet alphabet) {
  return parse_word(text, alphabet, Notation::standard(alphabet.rank()));
}

// Words over alphabets of rank > 26 have no letter names; they print as
// space-separated "x<i>" / "X<i>" tokens, which the parser does not accept.
inline std::string to_string(const Word& w, const Notation& notation) {
  if (w.empty()) return "1";
  std::string out;
  if (w.alphabet().rank() <= notation.rank()) {
    for (Letter x : w.letters()) out.push_back(notation.name(x));
    return out;
  }
  for (Letter x : w.letters()) {
    if (!out.empty()) out.push_back(' ');
    out += (x > 0 ? "x" : "X") + std::to_string(std::abs(x));
  }
  return out;
}

inline std::string to_string(const Word& w) {
  return to_string(w, Notation::standard(w.alphabet().rank() <= 26 ? w.alphabet().rank() : 0));
}

}  // namespace mcg
