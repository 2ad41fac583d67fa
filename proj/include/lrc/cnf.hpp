#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lrc/conditions.hpp"
#include "lrc/covertab.hpp"

namespace lrc::cnf {

using Clause = std::vector<int>;

/// At most `bound` of `literals` are true.
struct CardinalityConstraint {
  std::vector<int> literals;
  unsigned bound = 0;
  std::string label;
};

/// SAT encoding of the bad-cover question: satisfiable iff a bad cover
/// exists. Variable i (1-based) means "speed var_map[i-1] is in the tuple".
struct CnfDocument {
  InstanceParams params;
  ProfileMode mode = ProfileMode::Generic;
  int num_vars = 0;
  std::vector<Clause> clauses;  // one per target, over the speeds covering it
  std::vector<CardinalityConstraint> cardinality;
  std::vector<std::uint64_t> var_map;

  int variable_of(std::uint64_t speed) const;  // 0 when the speed has no variable
  std::uint64_t speed_of(int var) const;
};

/// Hands out fresh variable indices above the ones already in use.
class VarAllocator {
 public:
  explicit VarAllocator(int used) : last_(used) {}
  int fresh() { return ++last_; }
  int last() const { return last_; }

 private:
  int last_;
};

/// Requires c = 1 and d prime (the product condition then just removes
/// p-divisible speeds); throws UsageError otherwise.
CnfDocument encode_instance(const InstanceParams& params, const ConditionProfile& profile);

/// Sequential-counter clauses forcing at most `bound` of `literals` true,
/// with auxiliary variables from `fresh`. bound = 0 gives unit negations;
/// bound >= n gives nothing.
std::vector<Clause> lower_cardinality(std::span<const int> literals, unsigned bound, VarAllocator& fresh);

/// Plain DIMACS with every cardinality constraint lowered. Byte-for-byte
/// deterministic.
std::string to_dimacs(const CnfDocument& doc);

/// Cardinality-extended form: header "p knf <vars> <lines>", the clauses,
/// then one "k <bound> <lits...> 0" line per constraint.
std::string to_knf(const CnfDocument& doc);

/// Speeds whose variables are true in the model; model[i] is variable i+1.
std::vector<std::uint64_t> decode_model(const CnfDocument& doc, const std::vector<bool>& model);

/// Reads the "c var <idx> = speed <v>" comments back.
std::map<int, std::uint64_t> parse_var_map(const std::string& text);

}  // namespace lrc::cnf
