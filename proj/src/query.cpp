#include "infosample/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>

#include "infosample/error.hpp"
#include "infosample/kernels.hpp"
#include "infosample/parallel.hpp"

namespace infosample {
namespace {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

enum class Tok { Number, Name, Op, And, Or, LParen, RParen, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;
};

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    const bool starts_number =
        std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        ((c == '-' || c == '+') && i + 1 < s.size() &&
         (std::isdigit(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '.' ||
          upper(s.substr(i + 1, 3)) == "INF"));
    if (starts_number) {
      const char* first = s.data() + i + (c == '+' ? 1 : 0);
      auto res = std::from_chars(first, s.data() + s.size(), t.number);
      if (res.ec == std::errc::result_out_of_range) res.ec = std::errc();
      if (res.ec != std::errc()) throw SyntaxError(i, "malformed number");
      t.type = Tok::Number;
      i = static_cast<std::size_t>(res.ptr - s.data());
      t.text = s.substr(t.pos, i - t.pos);
      if (i < s.size() && name_start(s[i])) throw SyntaxError(i, "malformed number");
    } else if (name_start(c)) {
      std::size_t j = i;
      while (j < s.size() && name_char(s[j])) ++j;
      t.text = s.substr(i, j - i);
      const std::string up = upper(t.text);
      t.type = up == "AND" ? Tok::And : up == "OR" ? Tok::Or : Tok::Name;
      if (up == "INF") {
        t.type = Tok::Number;
        t.number = std::numeric_limits<double>::infinity();
      }
      i = j;
    } else if (c == '(' || c == ')') {
      t.type = c == '(' ? Tok::LParen : Tok::RParen;
      t.text = std::string(1, c);
      ++i;
    } else if (s.compare(i, 2, "&&") == 0 || s.compare(i, 2, "||") == 0) {
      t.type = c == '&' ? Tok::And : Tok::Or;
      t.text = s.substr(i, 2);
      i += 2;
    } else if (std::string("<>=!").find(c) != std::string::npos) {
      std::size_t j = i;
      while (j < s.size() && std::string("<>=!").find(s[j]) != std::string::npos) ++j;
      t.text = s.substr(i, j - i);
      if (t.text != "<" && t.text != "<=" && t.text != ">" && t.text != ">=") {
        throw Error(ErrorKind::UnknownOperator,
                    "unknown operator '" + t.text + "' at position " + std::to_string(i));
      }
      t.type = Tok::Op;
      i = j;
    } else {
      throw SyntaxError(i, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = s.size();
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, std::vector<std::string>* warnings)
      : toks_(tokenize(text)), warnings_(warnings) {}

  QueryExpr parse() {
    QueryExpr e = parse_or();
    if (peek().type != Tok::End) throw SyntaxError(peek().pos, "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  QueryExpr parse_or() {
    std::vector<QueryExpr> parts{parse_and()};
    while (peek().type == Tok::Or) {
      next();
      parts.push_back(parse_and());
    }
    return parts.size() == 1 ? std::move(parts[0]) : QueryExpr::make_or(std::move(parts));
  }

  QueryExpr parse_and() {
    std::vector<QueryExpr> parts{parse_primary()};
    while (peek().type == Tok::And) {
      next();
      parts.push_back(parse_primary());
    }
    return parts.size() == 1 ? std::move(parts[0]) : QueryExpr::make_and(std::move(parts));
  }

  QueryExpr parse_primary() {
    if (peek().type == Tok::LParen) {
      next();
      QueryExpr e = parse_or();
      if (peek().type != Tok::RParen) throw SyntaxError(peek().pos, "expected ')'");
      next();
      return e;
    }
    return parse_comparison();
  }

  const Token& expect_op() {
    if (peek().type != Tok::Op) throw SyntaxError(peek().pos, "expected comparison operator");
    return next();
  }

  // Applies "bound op V" (bound_on_left) or "V op bound" to the leaf.
  static void apply(QueryLeaf& leaf, const std::string& op, double bound, bool bound_on_left) {
    const bool incl = op.size() == 2;
    // Normalize to "V < bound" (upper) or "V > bound" (lower).
    bool upper = op[0] == '<';
    if (bound_on_left) upper = !upper;
    if (upper) {
      leaf.hi = bound;
      leaf.hi_inclusive = incl;
    } else {
      leaf.lo = bound;
      leaf.lo_inclusive = incl;
    }
  }

  QueryExpr parse_comparison() {
    const Token& first = peek();
    QueryLeaf leaf;
    if (first.type == Tok::Name) {
      next();
      leaf.variable = first.text;
      const Token& op = expect_op();
      if (peek().type != Tok::Number) throw SyntaxError(peek().pos, "expected number");
      apply(leaf, op.text, next().number, false);
      return QueryExpr::make_leaf(std::move(leaf));
    }
    if (first.type != Tok::Number) {
      throw SyntaxError(first.pos, first.type == Tok::End ? "unexpected end of query"
                                                          : "expected variable name or number");
    }
    next();
    const Token& op1 = expect_op();
    if (peek().type != Tok::Name) throw SyntaxError(peek().pos, "expected variable name");
    leaf.variable = next().text;
    apply(leaf, op1.text, first.number, true);
    if (peek().type != Tok::Op) return QueryExpr::make_leaf(std::move(leaf));

    const Token& op2 = next();
    if ((op1.text[0] == '<') != (op2.text[0] == '<')) {
      throw SyntaxError(op2.pos, "chained comparison mixes '<' and '>'");
    }
    if (peek().type != Tok::Number) throw SyntaxError(peek().pos, "expected number");
    const double second = next().number;
    // Matching directions put the two bounds on opposite sides; a chain
    // written in descending order leaves them reversed.
    QueryLeaf chained = leaf;
    apply(chained, op2.text, second, false);
    if (chained.lo > chained.hi) {
      std::swap(chained.lo, chained.hi);
      std::swap(chained.lo_inclusive, chained.hi_inclusive);
      if (warnings_) {
        warnings_->push_back("bounds for " + chained.variable +
                             " were given in descending order and have been swapped");
      }
    }
    return QueryExpr::make_leaf(std::move(chained));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string>* warnings_;
};

using Mask = std::vector<std::uint8_t>;

// Evaluates q over n rows whose value columns are supplied by column(name).
Mask evaluate(const QueryExpr& q, std::size_t n,
              const std::function<const std::vector<double>&(const std::string&)>& column) {
  if (q.kind == QueryExpr::Kind::Leaf) {
    const auto& v = column(q.leaf.variable);
    Mask m(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      kernels::range_mask(std::span(v).subspan(begin, end - begin), q.leaf.lo, q.leaf.hi,
                          q.leaf.lo_inclusive, q.leaf.hi_inclusive,
                          std::span(m).subspan(begin, end - begin));
    });
    return m;
  }
  Mask acc = evaluate(q.children.front(), n, column);
  for (std::size_t c = 1; c < q.children.size(); ++c) {
    const Mask m = evaluate(q.children[c], n, column);
    if (q.kind == QueryExpr::Kind::And) {
      for (std::size_t i = 0; i < n; ++i) acc[i] &= m[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) acc[i] |= m[i];
    }
  }
  return acc;
}

void check_variables(const QueryExpr& q, const std::vector<std::string>& names) {
  for (const auto& v : q.variables()) {
    if (std::find(names.begin(), names.end(), v) == names.end()) {
      throw Error(ErrorKind::UnknownVariable, "unknown variable '" + v + "'");
    }
  }
}

}  // namespace

QueryExpr QueryExpr::make_leaf(QueryLeaf leaf) {
  QueryExpr e;
  e.kind = Kind::Leaf;
  e.leaf = std::move(leaf);
  return e;
}

QueryExpr QueryExpr::make_and(std::vector<QueryExpr> children) {
  if (children.empty()) throw Error(ErrorKind::InvalidArgument, "AND needs at least one operand");
  QueryExpr e;
  e.kind = Kind::And;
  e.children = std::move(children);
  return e;
}

QueryExpr QueryExpr::make_or(std::vector<QueryExpr> children) {
  if (children.empty()) throw Error(ErrorKind::InvalidArgument, "OR needs at least one operand");
  QueryExpr e;
  e.kind = Kind::Or;
  e.children = std::move(children);
  return e;
}

std::string QueryExpr::to_string() const {
  if (kind == Kind::Leaf) {
    const auto& l = leaf;
    const bool has_lo = std::isfinite(l.lo), has_hi = std::isfinite(l.hi);
    const std::string lo_op = l.lo_inclusive ? " <= " : " < ";
    const std::string hi_op = l.hi_inclusive ? " <= " : " < ";
    if (has_lo && has_hi) return format_number(l.lo) + lo_op + l.variable + hi_op + format_number(l.hi);
    if (has_lo) return l.variable + (l.lo_inclusive ? " >= " : " > ") + format_number(l.lo);
    if (has_hi) return l.variable + hi_op + format_number(l.hi);
    return "-inf < " + l.variable + " < inf";
  }
  std::string out;
  for (std::size_t c = 0; c < children.size(); ++c) {
    if (c) out += kind == Kind::And ? " AND " : " OR ";
    const bool wrap = children[c].kind != Kind::Leaf;
    out += wrap ? "(" + children[c].to_string() + ")" : children[c].to_string();
  }
  return out;
}

std::vector<std::string> QueryExpr::variables() const {
  std::vector<std::string> out;
  std::function<void(const QueryExpr&)> walk = [&](const QueryExpr& e) {
    if (e.kind == Kind::Leaf) {
      if (std::find(out.begin(), out.end(), e.leaf.variable) == out.end()) {
        out.push_back(e.leaf.variable);
      }
      return;
    }
    for (const auto& c : e.children) walk(c);
  };
  walk(*this);
  return out;
}

QueryExpr parse_query(const std::string& text, std::vector<std::string>* warnings) {
  return Parser(text, warnings).parse();
}

QueryResult query_raw(const MultiField& mf, const QueryExpr& q) {
  check_variables(q, mf.names());
  const std::size_t n = mf.dims().count();
  const Mask m = evaluate(q, n, [&](const std::string& name) -> const std::vector<double>& {
    return mf.variable(name).values;
  });
  QueryResult r;
  r.dims = mf.dims();
  r.source = QueryResult::Source::Raw;
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i]) r.indices.push_back(i);
  }
  return r;
}

QueryResult query_sampled(const SampledPointSet& ps, const QueryExpr& q) {
  check_variables(q, ps.variable_names());
  const Mask m = evaluate(q, ps.size(), [&](const std::string& name) -> const std::vector<double>& {
    return ps.column(ps.index_of(name));
  });
  QueryResult r;
  r.dims = ps.dims();
  r.source = QueryResult::Source::Sampled;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (m[i]) r.indices.push_back(ps.indices()[i]);
  }
  return r;
}

double jaccard(const QueryResult& a, const QueryResult& b, std::vector<std::string>* warnings) {
  if (!(a.dims == b.dims)) throw Error(ErrorKind::GridMismatch, "query results come from different grids");
  if (a.indices.empty() && b.indices.empty()) {
    if (warnings) warnings->push_back("empty ground truth: both result sets are empty, J defined as 1");
    return 1.0;
  }
  std::size_t i = 0, j = 0, inter = 0;
  while (i < a.indices.size() && j < b.indices.size()) {
    if (a.indices[i] < b.indices[j]) {
      ++i;
    } else if (b.indices[j] < a.indices[i]) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.indices.size() + b.indices.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace infosample
