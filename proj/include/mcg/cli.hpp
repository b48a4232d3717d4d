#pragma once

// Command-line front end: `stallings`, `fpg`, `qm` and `verify` subcommands.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mcg/constructions.hpp"
#include "mcg/fpgroup.hpp"
#include "mcg/quasi.hpp"
#include "mcg/stallings.hpp"
#include "mcg/words.hpp"

namespace mcg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Bad invocation or unreadable input.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kFormats = R"txt(File formats:
  word          letters a-z are generators, A-Z their inverses; x^n and (...)^n
                take integer exponents; "1" or an empty line is the identity.
  generators    optional first line "gens: c d" naming the generators, then
                one word per line. Without the header the generators are
                a, b, ... up to the largest letter used.
  presentation  first line "gens: a b c", then "rel: <word>" lines (or
                "rels: w1, w2, ..."). '#' starts a comment.
  coset table   JSON {"cosets": k, "action": {"a": [...], "A": [...]}} with
                1-based cosets; coset 1 is the subgroup.
  assignment    first line "points: m", then "<gen>: <cycles>" lines, e.g.
                "a: (1 2)(3 4)", points 1-based.
  family        one "<coefficient> <pattern>" pair per line; coefficients are
                integers or fractions p/q.
  tests         one word per line.

Exit status: 0 success (or inconclusive), 1 failed check or computation,
2 usage or input error. With --strict, inconclusive checks exit 1.
)txt";

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string trim(std::string_view s) {
  const auto* b = s.begin();
  const auto* e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    out.push_back(line);
  }
  return out;
}

// Largest standard generator index (a = 1) appearing in the text, outside
// '#' comments.
inline int max_letter(std::string_view text) {
  int r = 0;
  bool comment = false;
  for (char ch : text) {
    if (ch == '#') comment = true;
    if (ch == '\n') comment = false;
    if (!comment && std::isalpha(static_cast<unsigned char>(ch))) {
      r = std::max(r, std::tolower(static_cast<unsigned char>(ch)) - 'a' + 1);
    }
  }
  return r;
}

struct GeneratorList {
  Alphabet alphabet{1};
  Notation notation{std::vector<char>{'a'}};
  bool named = false;
  std::vector<Word> words;
};

inline std::optional<Notation> header_notation(const std::vector<std::string>& lines, std::size_t& first) {
  for (first = 0; first < lines.size(); ++first) {
    const std::string t = trim(lines[first]);
    if (t.empty()) continue;
    if (t.rfind("gens:", 0) != 0) return std::nullopt;
    std::vector<char> names;
    for (char ch : t.substr(5)) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      if (!std::islower(static_cast<unsigned char>(ch))) {
        throw ParseError("generator names must be lowercase letters", first + 1, 1);
      }
      names.push_back(ch);
    }
    if (names.empty()) throw ParseError("'gens:' names no generators", first + 1, 1);
    ++first;
    return Notation(names);
  }
  first = 0;
  return std::nullopt;
}

// Parses a generator file. `min_rank` widens the standard alphabet when the
// file has no header.
inline GeneratorList parse_generators(const std::string& text, int min_rank = 1) {
  const auto lines = lines_of(text);
  std::size_t first = 0;
  GeneratorList g;
  if (auto n = header_notation(lines, first)) {
    g.notation = *n;
    g.alphabet = Alphabet(static_cast<int>(n->names().size()));
    g.named = true;
  } else {
    const int r = std::max({1, min_rank, max_letter(text)});
    g.alphabet = Alphabet(r);
    g.notation = Notation::standard(r);
  }
  for (std::size_t i = first; i < lines.size(); ++i) {
    const std::string t = trim(lines[i]);
    if (t.empty()) continue;
    g.words.push_back(parse_word(t, g.alphabet, g.notation, i + 1, 0));
  }
  return g;
}

inline Presentation load_presentation(const std::string& path) { return parse_presentation(read_file(path)); }

inline std::vector<Word> parse_word_lines(const std::string& text, const Alphabet& a, const Notation& n) {
  std::vector<Word> out;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string t = trim(lines[i]);
    if (t.empty()) continue;
    out.push_back(parse_word(t, a, n, i + 1, 0));
  }
  return out;
}

inline std::vector<Permutation> parse_assignment(const std::string& text, const Presentation& p) {
  const auto lines = lines_of(text);
  std::optional<std::size_t> points;
  std::vector<std::optional<Permutation>> perms(static_cast<std::size_t>(p.generator_count()));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string t = trim(lines[i]);
    if (t.empty()) continue;
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw ParseError("expected '<name>: ...'", i + 1, 1);
    const std::string key = trim(std::string_view(t).substr(0, colon));
    const std::string body = trim(std::string_view(t).substr(colon + 1));
    if (key == "points") {
      try {
        const long v = std::stol(body);
        if (v < 1 || v > 1000) throw ParseError("points must be in 1..1000", i + 1, colon + 2);
        points = static_cast<std::size_t>(v);
      } catch (const std::logic_error&) {
        throw ParseError("malformed point count", i + 1, colon + 2);
      }
      continue;
    }
    if (!points) throw ParseError("'points:' must come first", i + 1, 1);
    const auto letter = key.size() == 1 ? p.notation().letter(key[0]) : std::nullopt;
    if (!letter || *letter < 0) throw ParseError("unknown generator '" + key + "'", i + 1, 1);
    try {
      perms[static_cast<std::size_t>(*letter - 1)] = parse_cycles(body, *points);
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()) + " (in assignment)", i + 1, colon + 2);
    }
  }
  std::vector<Permutation> out;
  for (std::size_t g = 0; g < perms.size(); ++g) {
    if (perms[g]) {
      out.push_back(*perms[g]);
    } else if (points) {
      Permutation id(*points);
      std::iota(id.begin(), id.end(), 0);
      out.push_back(std::move(id));
    } else {
      throw ParseError("assignment has no 'points:' line", 1, 1);
    }
  }
  return out;
}

inline Rational parse_rational(const std::string& s, std::size_t line) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    const BigInt den(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator", line, 1);
    return Rational(BigInt(s.substr(0, slash)), den);
  } catch (const std::runtime_error&) {
    throw ParseError("malformed coefficient '" + s + "'", line, 1);
  }
}

inline std::string index_string(const GraphInvariants& inv) {
  return inv.index ? std::to_string(*inv.index) : "infinite";
}

inline void print_invariants(std::ostream& out, const GraphInvariants& inv) {
  out << "index: " << index_string(inv) << "\n"
      << "rank: " << inv.rank << "\n"
      << "generators: " << inv.generator_count << "\n";
}

inline void print_words(std::ostream& out, const std::vector<Word>& ws, const Notation& n) {
  for (const Word& w : ws) out << to_string(w, n) << "\n";
}

inline nlohmann::json graph_json(const SubgroupGraph& g, const Notation& n) {
  nlohmann::json edges = nlohmann::json::array();
  for (int v = 0; v < g.vertex_count(); ++v) {
    for (Letter x = 1; x <= g.alphabet().rank(); ++x) {
      const int t = g.target(v, x);
      if (t != SubgroupGraph::kNone) edges.push_back({v, std::string(1, n.name(x)), t});
    }
  }
  return {{"vertices", g.vertex_count()}, {"base", g.base()}, {"edges", edges}};
}

struct Options {
  std::string gens;
  std::string gens2;
  std::string word;
  std::string file;
  std::string sub;
  std::string table;
  std::string assign;
  std::size_t max_cosets = 200'000;
  std::size_t tietze = 0;
  bool json = false;
  std::string pattern;
  std::string qm_word;
  int radius = 4;
  std::string family;
  std::string tests;
  bool mod_homs = false;
  bool homogenized = false;
  std::size_t homog_cap = kDefaultHomogenizationCap;
  std::vector<std::string> checks;
  std::string json_path;
  std::size_t tietze_budget = 10'000;
  bool strict = false;
  bool no_quasi = false;
};

inline int run_stallings(const std::string& action, const Options& o, std::ostream& out) {
  const std::string text = read_file(o.gens);
  const int word_rank = max_letter(o.word);
  GeneratorList g = parse_generators(text, action == "member" ? word_rank : 1);
  if (action == "intersect") {
    const std::string text2 = read_file(o.gens2);
    GeneratorList h = parse_generators(text2, g.alphabet.rank());
    if (!g.named && !h.named && h.alphabet.rank() > g.alphabet.rank()) g = parse_generators(text, h.alphabet.rank());
    if (!(g.alphabet == h.alphabet) || g.named != h.named ||
        (g.named && g.notation.names() != h.notation.names())) {
      throw UsageError("generator files use different alphabets");
    }
    const SubgroupGraph k = intersect(build(g.alphabet, g.words), build(h.alphabet, h.words));
    const GraphInvariants inv = invariants(k);
    out << "index: " << index_string(inv) << "\n" << "rank: " << inv.rank << "\n";
    out << "basis:\n";
    print_words(out, k.basis(), g.notation);
    return kExitOk;
  }
  const SubgroupGraph graph = build(g.alphabet, g.words);
  if (action == "build") {
    if (o.json) {
      out << graph_json(graph, g.notation).dump(2) << "\n";
    } else {
      out << "vertices: " << graph.vertex_count() << "\n" << "edges: " << graph.edge_count() << "\n";
      print_invariants(out, invariants(graph));
    }
  } else if (action == "member") {
    const Word w = parse_word(o.word, g.alphabet, g.notation);
    out << (member(graph, w) ? "true" : "false") << "\n";
  } else if (action == "invariants") {
    print_invariants(out, invariants(graph));
  } else if (action == "basis") {
    print_words(out, graph.basis(), g.notation);
  }
  return kExitOk;
}

inline int run_fpg(const std::string& action, const Options& o, std::ostream& out) {
  const Presentation p = load_presentation(o.file);
  if (action == "abelianize") {
    out << describe(abelianization(p)) << "\n";
  } else if (action == "coset") {
    std::vector<Word> subgens;
    if (!o.sub.empty()) subgens = parse_word_lines(read_file(o.sub), p.alphabet(), p.notation());
    const CosetTable t = todd_coxeter(p, subgens, o.max_cosets);
    out << to_json(t, p.notation()).dump() << "\n";
  } else if (action == "rs") {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(o.table));
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("coset table: ") + e.what());
    }
    const CosetTable t = coset_table_from_json(j, p.alphabet(), p.notation());
    if (!t.consistent_with(p.relators())) throw UsageError("coset table is not consistent with the relators");
    const SubgroupPresentation rs = reidemeister_schreier(p, t);
    out << to_string(rs.presentation);
    if (o.tietze > 0) {
      const TietzeResult r = tietze_simplify(rs.presentation, o.tietze);
      out << "# simplified: " << r.generator_count << " generators, " << r.relators.size() << " relators, "
          << r.steps_used << " moves" << (r.fixpoint ? "" : " (budget exhausted)") << "\n";
    }
  } else if (action == "perm") {
    const PermImage img = perm_image(p, parse_assignment(read_file(o.assign), p));
    out << "valid: " << (img.valid ? "true" : "false") << "\n" << "order: " << img.order << "\n";
    return img.valid ? kExitOk : kExitFailure;
  }
  return kExitOk;
}

inline int run_qm(const std::string& action, const Options& o, std::ostream& out) {
  if (action == "eval" || action == "defect") {
    const int r = std::max({2, max_letter(o.pattern), max_letter(o.qm_word)});
    const Alphabet a(r);
    const Quasimorphism h = Quasimorphism::brooks(parse_word(o.pattern, a));
    if (action == "eval") {
      const Word g = parse_word(o.qm_word, a);
      out << to_string(o.homogenized ? homogenize(h, g, o.homog_cap) : qm_eval(h, g)) << "\n";
    } else {
      if (o.radius < 1) throw UsageError("--radius must be positive");
      out << to_string(defect_ball(h, o.radius)) << "\n";
    }
    return kExitOk;
  }
  // rank
  const std::string family_text = read_file(o.family);
  const std::string tests_text = read_file(o.tests);
  const Alphabet a(std::max({2, max_letter(family_text), max_letter(tests_text)}));
  std::vector<Quasimorphism> hs;
  const auto lines = lines_of(family_text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::istringstream in(lines[i]);
    std::string coef;
    std::string pattern;
    if (!(in >> coef)) continue;
    if (!(in >> pattern)) throw ParseError("expected '<coefficient> <pattern>'", i + 1, 1);
    hs.push_back(Quasimorphism::brooks(parse_word(pattern, a, Notation::standard(a.rank()), i + 1, 0),
                                       parse_rational(coef, i + 1)));
  }
  if (hs.empty()) throw UsageError("family file is empty");
  const auto tests = parse_word_lines(tests_text, a, Notation::standard(a.rank()));
  out << independence_rank(hs, tests, o.mod_homs, o.homog_cap) << "\n";
  return kExitOk;
}

inline int run_verify(const Options& o, std::ostream& out) {
  VerifyConfig cfg;
  cfg.only = o.checks;
  cfg.quasi = !o.no_quasi;
  cfg.tietze_budget = o.tietze_budget;
  cfg.homog_cap = o.homog_cap;
  cfg.max_cosets = o.max_cosets;
  const auto known = all_check_ids();
  for (const std::string& id : o.checks) {
    const bool hit = std::any_of(known.begin(), known.end(), [&](const std::string& k) {
      return k == id || (k.rfind(id, 0) == 0 && k.size() > id.size() && k[id.size()] == '.');
    });
    if (!hit) throw UsageError("unknown check '" + id + "'");
  }
  const Report report = verify_all(cfg);
  for (const Check& c : report.checks) out << to_string(c.status) << "  " << c.id << "\n";
  if (!o.json_path.empty()) {
    std::ofstream f(o.json_path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + o.json_path);
    f << to_json(report).dump(2) << "\n";
  }
  if (report.any_failed()) return kExitFailure;
  if (o.strict && !report.all_passed()) return kExitFailure;
  return kExitOk;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  detail::Options o;
  CLI::App app("Certificates for finite-index subgroups, automorphisms and quasimorphisms", "mcgcert");
  app.footer(kFormats);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolkitVersion));

  auto* st = app.add_subcommand("stallings", "Subgroups of free groups via Stallings graphs");
  st->require_subcommand(1);
  for (const char* name : {"build", "member", "invariants", "basis", "intersect"}) {
    auto* s = st->add_subcommand(name);
    s->add_option("--gens", o.gens, "generator file")->required()->check(CLI::ExistingFile);
    if (std::string(name) == "member") s->add_option("--word", o.word, "word to test")->required();
    if (std::string(name) == "intersect") {
      s->add_option("--gens2", o.gens2, "second generator file")->required()->check(CLI::ExistingFile);
    }
    if (std::string(name) == "build") s->add_flag("--json", o.json, "print the core graph as JSON");
  }
  st->get_subcommand("build")->description("Fold generators into the core graph");
  st->get_subcommand("member")->description("Decide membership of --word");
  st->get_subcommand("invariants")->description("Index, rank and generator count");
  st->get_subcommand("basis")->description("Free basis read off a spanning tree");
  st->get_subcommand("intersect")->description("Intersection of two subgroups");

  auto* fpg = app.add_subcommand("fpg", "Finitely presented groups");
  fpg->require_subcommand(1);
  auto* ab = fpg->add_subcommand("abelianize", "Abelianization via Smith normal form");
  ab->add_option("FILE", o.file, "presentation file")->required()->check(CLI::ExistingFile);
  auto* co = fpg->add_subcommand("coset", "Todd-Coxeter coset table as JSON");
  co->add_option("FILE", o.file, "presentation file")->required()->check(CLI::ExistingFile);
  co->add_option("--sub", o.sub, "subgroup generators, one word per line")->check(CLI::ExistingFile);
  co->add_option("--max", o.max_cosets, "coset budget")->check(CLI::PositiveNumber);
  auto* rs = fpg->add_subcommand("rs", "Reidemeister-Schreier subgroup presentation");
  rs->add_option("FILE", o.file, "presentation file")->required()->check(CLI::ExistingFile);
  rs->add_option("--table", o.table, "coset table JSON")->required()->check(CLI::ExistingFile);
  rs->add_option("--tietze", o.tietze, "also report Tietze simplification with this budget");
  auto* pm = fpg->add_subcommand("perm", "Check a permutation assignment and its image order");
  pm->add_option("FILE", o.file, "presentation file")->required()->check(CLI::ExistingFile);
  pm->add_option("--assign", o.assign, "assignment file")->required()->check(CLI::ExistingFile);

  auto* qm = app.add_subcommand("qm", "Brooks counting quasimorphisms");
  qm->require_subcommand(1);
  auto* ev = qm->add_subcommand("eval", "Evaluate h_W at G");
  ev->add_option("--pattern", o.pattern, "pattern W")->required();
  ev->add_option("--word", o.qm_word, "argument G")->required();
  ev->add_flag("--homogenized", o.homogenized, "evaluate the homogenization instead");
  ev->add_option("--homog-cap", o.homog_cap, "homogenization cap")->check(CLI::PositiveNumber);
  auto* de = qm->add_subcommand("defect", "Defect of h_W over a ball");
  de->add_option("--pattern", o.pattern, "pattern W")->required();
  de->add_option("--radius", o.radius, "ball radius")->required();
  auto* rk = qm->add_subcommand("rank", "Certified independence rank of a family");
  rk->add_option("--family", o.family, "family file")->required()->check(CLI::ExistingFile);
  rk->add_option("--tests", o.tests, "test words file")->required()->check(CLI::ExistingFile);
  rk->add_flag("--mod-homs", o.mod_homs, "quotient by homomorphisms");
  rk->add_option("--homog-cap", o.homog_cap, "homogenization cap")->check(CLI::PositiveNumber);

  auto* ve = app.add_subcommand("verify", "Run the certificate checks");
  ve->add_option("--check", o.checks, "run only this check id or id prefix (repeatable)");
  ve->add_option("--json", o.json_path, "write the JSON report here");
  ve->add_option("--tietze-budget", o.tietze_budget, "Tietze move budget");
  ve->add_option("--homog-cap", o.homog_cap, "homogenization cap")->check(CLI::PositiveNumber);
  ve->add_option("--max-cosets", o.max_cosets, "Todd-Coxeter budget")->check(CLI::PositiveNumber);
  ve->add_flag("--no-quasi", o.no_quasi, "skip the quasimorphism suite");
  ve->add_flag("--strict", o.strict, "treat inconclusive checks as failures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    for (auto* group : {st, fpg, qm}) {
      if (!group->parsed()) continue;
      for (auto* sub : group->get_subcommands()) {
        if (!sub->parsed()) continue;
        if (group == st) return detail::run_stallings(sub->get_name(), o, out);
        if (group == fpg) return detail::run_fpg(sub->get_name(), o, out);
        return detail::run_qm(sub->get_name(), o, out);
      }
    }
    if (ve->parsed()) return detail::run_verify(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AlphabetMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace mcg::cli
