#pragma once

#include <cstdlib>
#include <deque>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcg/error.hpp"
#include "mcg/words.hpp"

namespace mcg {

// Right action of the generators on the cosets of a finite-index subgroup.
// Cosets are numbered from 0 internally; coset 0 is the subgroup itself.
class CosetTable {
 public:
  // rows[c][column(x)] is the coset c*x.
  CosetTable(Alphabet alphabet, std::vector<std::vector<int>> rows,
             std::vector<Word> subgroup_generators = {})
      : alphabet_(alphabet),
        rows_(std::move(rows)),
        subgroup_generators_(std::move(subgroup_generators)) {
    check_complete();
  }

  static std::size_t column(Letter x) {
    return x > 0 ? 2 * static_cast<std::size_t>(x - 1)
                 : 2 * static_cast<std::size_t>(-x - 1) + 1;
  }

  static Letter letter_of_column(std::size_t col) {
    const Letter g = static_cast<Letter>(col / 2) + 1;
    return col % 2 == 0 ? g : -g;
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int size() const noexcept { return static_cast<int>(rows_.size()); }
  const std::vector<std::vector<int>>& rows() const noexcept { return rows_; }
  const std::vector<Word>& subgroup_generators() const noexcept { return subgroup_generators_; }

  int act(int coset, Letter x) const {
    return rows_[static_cast<std::size_t>(coset)][column(x)];
  }

  int act(int coset, const Word& w) const {
    require_same_alphabet(alphabet_, w.alphabet());
    for (Letter x : w.letters()) coset = act(coset, x);
    return coset;
  }

  // Every relator fixes every coset and every subgroup generator fixes coset 0.
  bool consistent_with(const std::vector<Word>& relators) const {
    for (int c = 0; c < size(); ++c) {
      for (const Word& r : relators) {
        if (act(c, r) != c) return false;
      }
    }
    for (const Word& h : subgroup_generators_) {
      if (act(0, h) != 0) return false;
    }
    return true;
  }

  friend bool operator==(const CosetTable&, const CosetTable&) = default;

 private:
  void check_complete() const {
    if (rows_.empty()) throw Error("coset table needs at least one coset");
    const std::size_t width = 2 * static_cast<std::size_t>(alphabet_.rank());
    const int n = size();
    for (const auto& row : rows_) {
      if (row.size() != width) throw Error("coset table row has wrong width");
      for (int target : row) {
        if (target < 0 || target >= n) throw Error("coset table is incomplete");
      }
    }
    for (int c = 0; c < n; ++c) {
      for (Letter g = 1; g <= alphabet_.rank(); ++g) {
        if (act(act(c, g), -g) != c) {
          throw Error("coset table: generator and inverse columns are not inverse permutations");
        }
      }
    }
  }

  Alphabet alphabet_;
  std::vector<std::vector<int>> rows_;
  std::vector<Word> subgroup_generators_;
};

// Renumbers cosets in breadth-first order from coset 0, scanning letters in
// the order 1, -1, 2, -2, ...
inline CosetTable standardize(const CosetTable& t) {
  const int n = t.size();
  const std::size_t width = 2 * static_cast<std::size_t>(t.alphabet().rank());
  std::vector<int> renumber(static_cast<std::size_t>(n), -1);
  std::vector<int> order;
  renumber[0] = 0;
  order.push_back(0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t col = 0; col < width; ++col) {
      const int target = t.rows()[static_cast<std::size_t>(order[i])][col];
      if (renumber[static_cast<std::size_t>(target)] < 0) {
        renumber[static_cast<std::size_t>(target)] = static_cast<int>(order.size());
        order.push_back(target);
      }
    }
  }
  if (static_cast<int>(order.size()) != n) throw Error("coset table is not transitive");
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(width));
  for (int old = 0; old < n; ++old) {
    for (std::size_t col = 0; col < width; ++col) {
      rows[static_cast<std::size_t>(renumber[static_cast<std::size_t>(old)])][col] =
          renumber[static_cast<std::size_t>(t.rows()[static_cast<std::size_t>(old)][col])];
    }
  }
  return CosetTable(t.alphabet(), std::move(rows), t.subgroup_generators());
}

// {"cosets": k, "action": {"a": [...], "A": [...], ...}} with 1-based cosets.
inline nlohmann::json to_json(const CosetTable& t, const Notation& notation) {
  nlohmann::json action = nlohmann::json::object();
  for (Letter g = 1; g <= t.alphabet().rank(); ++g) {
    for (Letter x : {g, -g}) {
      std::vector<int> images;
      for (int c = 0; c < t.size(); ++c) images.push_back(t.act(c, x) + 1);
      action[std::string(1, notation.name(x))] = images;
    }
  }
  return {{"cosets", t.size()}, {"action", action}};
}

inline CosetTable coset_table_from_json(const nlohmann::json& j, Alphabet alphabet,
                                        const Notation& notation) {
  if (!j.contains("cosets") || !j.contains("action")) {
    throw Error("coset table JSON needs \"cosets\" and \"action\"");
  }
  const int n = j.at("cosets").get<int>();
  if (n < 1) throw Error("coset table JSON: cosets must be positive");
  const std::size_t width = 2 * static_cast<std::size_t>(alphabet.rank());
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(width, -1));
  const auto& action = j.at("action");
  for (Letter g = 1; g <= alphabet.rank(); ++g) {
    const std::string fwd(1, notation.name(g));
    const std::string inv(1, notation.name(-g));
    if (!action.contains(fwd)) throw Error("coset table JSON: missing column " + fwd);
    const auto images = action.at(fwd).get<std::vector<int>>();
    if (static_cast<int>(images.size()) != n) throw Error("coset table JSON: column " + fwd + " has wrong length");
    for (int c = 0; c < n; ++c) {
      const int target = images[static_cast<std::size_t>(c)] - 1;
      if (target < 0 || target >= n) throw Error("coset table JSON: coset out of range in column " + fwd);
      rows[static_cast<std::size_t>(c)][CosetTable::column(g)] = target;
      rows[static_cast<std::size_t>(target)][CosetTable::column(-g)] = c;
    }
    if (action.contains(inv)) {
      const auto back = action.at(inv).get<std::vector<int>>();
      for (int c = 0; c < n && c < static_cast<int>(back.size()); ++c) {
        if (back[static_cast<std::size_t>(c)] - 1 != rows[static_cast<std::size_t>(c)][CosetTable::column(-g)]) {
          throw Error("coset table JSON: column " + inv + " is not the inverse of " + fwd);
        }
      }
    }
  }
  return CosetTable(alphabet, std::move(rows));
}

}  // namespace mcg
