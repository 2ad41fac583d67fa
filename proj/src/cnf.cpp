#include "lrc/cnf.hpp"

#include <algorithm>
#include <sstream>

#include "lrc/errors.hpp"

namespace lrc::cnf {

int CnfDocument::variable_of(std::uint64_t speed) const {
  auto it = std::lower_bound(var_map.begin(), var_map.end(), speed);
  if (it == var_map.end() || *it != speed) return 0;
  return static_cast<int>(it - var_map.begin()) + 1;
}

std::uint64_t CnfDocument::speed_of(int var) const {
  if (var < 1 || var > num_vars) throw UsageError("variable out of range");
  return var_map[static_cast<std::size_t>(var - 1)];
}

CnfDocument encode_instance(const InstanceParams& params, const ConditionProfile& profile) {
  if (params.c != 1) throw UsageError("CNF encoding supports c = 1 only");
  if (params.divisor.a != 1) throw UsageError("CNF encoding supports prime d only");

  CnfDocument doc;
  doc.params = params;
  doc.mode = profile.mode();
  std::vector<Candidate> cands = admissible_candidates(params, profile);
  for (const auto& cand : cands) doc.var_map.push_back(cand.v);
  doc.num_vars = static_cast<int>(doc.var_map.size());

  for (std::uint64_t j = 1; j <= params.half; ++j) {
    Clause clause;
    for (int var = 1; var <= doc.num_vars; ++var)
      if (covers(doc.var_map[static_cast<std::size_t>(var - 1)], j, params)) clause.push_back(var);
    doc.clauses.push_back(std::move(clause));
  }

  auto constrain = [&](auto&& pred, unsigned bound, std::string label) {
    CardinalityConstraint cc{{}, bound, std::move(label)};
    for (int var = 1; var <= doc.num_vars; ++var)
      if (pred(cands[static_cast<std::size_t>(var - 1)])) cc.literals.push_back(var);
    if (cc.literals.size() > bound) doc.cardinality.push_back(std::move(cc));
  };
  constrain([](const Candidate&) { return true; }, params.k, "at most k speeds");
  auto caps = profile.prime_caps();
  for (std::size_t i = 0; i < caps.size(); ++i)
    constrain([i](const Candidate& c) { return (c.shares >> i & 1) != 0; }, caps[i],
              "divisible by " + std::to_string(profile.primes()[i]));
  if (profile.three_cap()) constrain([](const Candidate& c) { return c.div3; }, *profile.three_cap(), "divisible by 3 (nine-runner)");
  if (profile.nine_cap()) constrain([](const Candidate& c) { return c.div9; }, *profile.nine_cap(), "divisible by 9 (nine-runner)");
  return doc;
}

std::vector<Clause> lower_cardinality(std::span<const int> literals, unsigned bound, VarAllocator& fresh) {
  const std::size_t n = literals.size();
  std::vector<Clause> out;
  if (bound >= n) return out;
  if (bound == 0) {
    for (int lit : literals) out.push_back({-lit});
    return out;
  }
  // s[i][j] (i < n-1, j < bound): at least j+1 of literals[0..i] are true.
  const std::size_t b = bound;
  std::vector<int> s((n - 1) * b);
  for (auto& v : s) v = fresh.fresh();
  auto reg = [&](std::size_t i, std::size_t j) { return s[i * b + j]; };

  out.push_back({-literals[0], reg(0, 0)});
  for (std::size_t j = 1; j < b; ++j) out.push_back({-reg(0, j)});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.push_back({-literals[i], reg(i, 0)});
    out.push_back({-reg(i - 1, 0), reg(i, 0)});
    for (std::size_t j = 1; j < b; ++j) {
      out.push_back({-literals[i], -reg(i - 1, j - 1), reg(i, j)});
      out.push_back({-reg(i - 1, j), reg(i, j)});
    }
    out.push_back({-literals[i], -reg(i - 1, b - 1)});
  }
  out.push_back({-literals[n - 1], -reg(n - 2, b - 1)});
  return out;
}

namespace {

void write_header_comments(std::ostream& out, const CnfDocument& doc) {
  const auto& p = doc.params;
  out << "c lonely-runner bad-cover instance k=" << p.k << " d=" << p.d << " c=" << p.c << " M=" << p.modulus
      << " half=" << p.half << " profile=" << to_string(doc.mode) << "\n";
  out << "c satisfiable iff a bad cover exists\n";
  for (int var = 1; var <= doc.num_vars; ++var) out << "c var " << var << " = speed " << doc.speed_of(var) << "\n";
  for (const auto& cc : doc.cardinality)
    out << "c at most " << cc.bound << " of " << cc.literals.size() << ": " << cc.label << "\n";
}

void write_clause(std::ostream& out, const Clause& clause) {
  for (int lit : clause) out << lit << " ";
  out << "0\n";
}

}  // namespace

std::string to_dimacs(const CnfDocument& doc) {
  VarAllocator fresh(doc.num_vars);
  std::vector<Clause> lowered;
  for (const auto& cc : doc.cardinality) {
    auto part = lower_cardinality(cc.literals, cc.bound, fresh);
    lowered.insert(lowered.end(), part.begin(), part.end());
  }
  std::ostringstream out;
  write_header_comments(out, doc);
  out << "p cnf " << fresh.last() << " " << doc.clauses.size() + lowered.size() << "\n";
  for (const auto& clause : doc.clauses) write_clause(out, clause);
  for (const auto& clause : lowered) write_clause(out, clause);
  return out.str();
}

std::string to_knf(const CnfDocument& doc) {
  std::ostringstream out;
  write_header_comments(out, doc);
  out << "p knf " << doc.num_vars << " " << doc.clauses.size() + doc.cardinality.size() << "\n";
  for (const auto& clause : doc.clauses) write_clause(out, clause);
  for (const auto& cc : doc.cardinality) {
    out << "k " << cc.bound << " ";
    write_clause(out, cc.literals);
  }
  return out.str();
}

std::vector<std::uint64_t> decode_model(const CnfDocument& doc, const std::vector<bool>& model) {
  std::vector<std::uint64_t> out;
  for (int var = 1; var <= doc.num_vars && static_cast<std::size_t>(var) <= model.size(); ++var)
    if (model[static_cast<std::size_t>(var - 1)]) out.push_back(doc.speed_of(var));
  return out;
}

std::map<int, std::uint64_t> parse_var_map(const std::string& text) {
  std::map<int, std::uint64_t> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("c var ", 0) != 0) continue;
    std::istringstream ls(line.substr(6));
    int var = 0;
    std::string eq, word;
    std::uint64_t speed = 0;
    if (ls >> var >> eq >> word >> speed && eq == "=" && word == "speed") out[var] = speed;
  }
  return out;
}

}  // namespace lrc::cnf
