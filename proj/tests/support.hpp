#pragma once

// Independent oracles and generators shared by the test binaries. Nothing here
// calls into the algorithms under test except Word construction.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "mcg/words.hpp"

namespace oracle {

using mcg::Alphabet;
using mcg::Letter;
using mcg::Word;

// Removes one adjacent cancelling pair at a time until none is left.
inline std::vector<Letter> naive_reduce(std::vector<Letter> w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == -w[i + 1]) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + 2));
        changed = true;
        break;
      }
    }
  }
  return w;
}

inline std::vector<Letter> concat(const std::vector<Letter>& u, const std::vector<Letter>& v) {
  std::vector<Letter> out = u;
  out.insert(out.end(), v.begin(), v.end());
  return naive_reduce(out);
}

inline std::vector<Letter> inverse(const std::vector<Letter>& w) {
  std::vector<Letter> out(w.rbegin(), w.rend());
  for (Letter& x : out) x = -x;
  return out;
}

inline std::vector<Letter> repeat(const std::vector<Letter>& w, int k) {
  std::vector<Letter> out;
  for (int i = 0; i < k; ++i) out = concat(out, w);
  return out;
}

// All freely reduced letter sequences of length <= n over the given rank.
inline std::vector<std::vector<Letter>> reduced_words(int rank, int n) {
  std::vector<std::vector<Letter>> out{{}};
  std::vector<Letter> current;
  std::function<void()> rec = [&] {
    if (static_cast<int>(current.size()) == n) return;
    for (Letter g = 1; g <= rank; ++g) {
      for (Letter x : {g, -g}) {
        if (!current.empty() && current.back() == -x) continue;
        current.push_back(x);
        out.push_back(current);
        rec();
        current.pop_back();
      }
    }
  };
  rec();
  return out;
}

inline std::vector<Word> reduced_word_values(const Alphabet& a, int n) {
  std::vector<Word> out;
  for (const auto& w : reduced_words(a.rank(), n)) out.push_back(Word::reduce(a, w));
  return out;
}

inline std::vector<Letter> random_letters(int rank, std::size_t length, std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(1, rank);
  std::bernoulli_distribution sign(0.5);
  std::vector<Letter> out;
  for (std::size_t i = 0; i < length; ++i) out.push_back(sign(rng) ? pick(rng) : -pick(rng));
  return out;
}

inline Word random_word(const Alphabet& a, std::size_t max_length, std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> len(0, max_length);
  return Word::reduce(a, naive_reduce(random_letters(a.rank(), len(rng), rng)));
}

// Elements reachable as products of at most `depth` generators or inverses.
inline std::set<std::vector<Letter>> products(const std::vector<std::vector<Letter>>& gens, int depth) {
  std::vector<std::vector<Letter>> steps;
  for (const auto& g : gens) {
    steps.push_back(naive_reduce(g));
    steps.push_back(inverse(naive_reduce(g)));
  }
  std::set<std::vector<Letter>> seen{{}};
  std::vector<std::vector<Letter>> frontier{{}};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : frontier) {
      for (const auto& s : steps) {
        auto v = concat(w, s);
        if (seen.insert(v).second) next.push_back(std::move(v));
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

// Random permutation action of each generator on `n` points, as coset-table
// rows indexed by column(x) = 2(|x|-1) + (x < 0). Transitivity is not forced.
inline std::vector<std::vector<int>> random_action(int rank, int n, std::mt19937& rng) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(2 * static_cast<std::size_t>(rank)));
  for (int g = 0; g < rank; ++g) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    for (int c = 0; c < n; ++c) {
      rows[static_cast<std::size_t>(c)][2 * static_cast<std::size_t>(g)] = p[static_cast<std::size_t>(c)];
      rows[static_cast<std::size_t>(p[static_cast<std::size_t>(c)])][2 * static_cast<std::size_t>(g) + 1] = c;
    }
  }
  return rows;
}

// Points reachable from 0 under the action.
inline int orbit_size(const std::vector<std::vector<int>>& rows) {
  std::vector<bool> seen(rows.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    for (int d : rows[static_cast<std::size_t>(c)]) {
      if (!seen[static_cast<std::size_t>(d)]) {
        seen[static_cast<std::size_t>(d)] = true;
        ++count;
        stack.push_back(d);
      }
    }
  }
  return count;
}

// Follows w from coset 0 through the rows.
inline int trace(const std::vector<std::vector<int>>& rows, const std::vector<Letter>& w) {
  int c = 0;
  for (Letter x : w) {
    const std::size_t col = x > 0 ? 2 * static_cast<std::size_t>(x - 1) : 2 * static_cast<std::size_t>(-x - 1) + 1;
    c = rows[static_cast<std::size_t>(c)][col];
  }
  return c;
}

}  // namespace oracle
