#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "infosample/grid.hpp"

namespace infosample {

/// Range predicate on one variable.
struct QueryLeaf {
  std::string variable;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_inclusive = false;
  bool hi_inclusive = false;

  bool matches(double v) const noexcept {
    return (lo_inclusive ? v >= lo : v > lo) && (hi_inclusive ? v <= hi : v < hi);
  }
  friend bool operator==(const QueryLeaf&, const QueryLeaf&) = default;
};

struct QueryExpr {
  enum class Kind { Leaf, And, Or };
  Kind kind = Kind::Leaf;
  QueryLeaf leaf;
  std::vector<QueryExpr> children;

  static QueryExpr make_leaf(QueryLeaf leaf);
  static QueryExpr make_and(std::vector<QueryExpr> children);
  static QueryExpr make_or(std::vector<QueryExpr> children);

  /// Canonical text form, parseable by parse_query.
  std::string to_string() const;
  /// Variables referenced, in first-use order without duplicates.
  std::vector<std::string> variables() const;

  friend bool operator==(const QueryExpr&, const QueryExpr&) = default;
};

// Grammar (AND binds tighter than OR; keywords are case-insensitive):
//   expr       := and_expr { ("OR" | "||") and_expr }
//   and_expr   := primary { ("AND" | "&&") primary }
//   primary    := "(" expr ")" | comparison
//   comparison := name op number | number op name | number op name op number
//   op         := "<" | "<=" | ">" | ">="
// A chained comparison whose bounds are given in descending order is
// canonicalized by swapping them; each bound keeps its own inclusivity.
// Throws SyntaxError (with character position) or UnknownOperator.
QueryExpr parse_query(const std::string& text, std::vector<std::string>* warnings = nullptr);

struct QueryResult {
  enum class Source { Raw, Sampled };
  GridDims dims;
  std::vector<std::uint64_t> indices;  // ascending, distinct
  Source source = Source::Raw;
};

/// Full scan over every grid point. Throws UnknownVariable.
QueryResult query_raw(const MultiField& mf, const QueryExpr& q);
/// Scan over the stored values of a point set. Throws UnknownVariable.
QueryResult query_sampled(const SampledPointSet& ps, const QueryExpr& q);

/// |a ∩ b| / |a ∪ b|; 1 when both are empty (adds a warning).
/// Throws GridMismatch when the results come from different grids.
double jaccard(const QueryResult& a, const QueryResult& b,
               std::vector<std::string>* warnings = nullptr);

}  // namespace infosample
