#include "grc/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "grc/entropy.hpp"
#include "grc/errors.hpp"

namespace grc {

namespace {

// Renormalizing only clearly-off sums keeps canonical output a parse
// fixpoint: once printed values re-sum this close to one, a reparse leaves
// them untouched.
constexpr double kNormalizeThreshold = 5e-10;

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_6g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

struct Token {
  std::string text;
  std::size_t col = 0;  // 1-based byte column
};

struct StatementError {
  std::size_t col;
  std::string message;
  std::string code;
};

[[noreturn]] void fail(std::size_t col, std::string message,
                       std::string code) {
  throw StatementError{col, std::move(message), std::move(code)};
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         c == '.' || c == '/';
}

// Tokenizes one line.  Symbols are single characters plus the arrow, which
// is accepted as "->" or as the UTF-8 arrow and normalized to "->".
std::vector<Token> lex_line(std::string_view line) {
  static const std::string kSymbols = "(){}[]|,:=";
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    const std::size_t col = i + 1;
    if (line.substr(i, 2) == "->") {
      out.push_back({"->", col});
      i += 2;
      continue;
    }
    if (line.substr(i, 3) == "\xe2\x86\x92") {  // UTF-8 rightwards arrow
      out.push_back({"->", col});
      i += 3;
      continue;
    }
    if (kSymbols.find(c) != std::string::npos) {
      out.push_back({std::string(1, c), col});
      ++i;
      continue;
    }
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < line.size()) {
        if (ident_char(line[j])) {
          ++j;
          continue;
        }
        // Exponent sign inside a number: "1e-05".
        if ((line[j] == '+' || line[j] == '-') && j > i &&
            (line[j - 1] == 'e' || line[j - 1] == 'E') &&
            std::isdigit(static_cast<unsigned char>(line[i])) &&
            j + 1 < line.size() &&
            std::isdigit(static_cast<unsigned char>(line[j + 1]))) {
          ++j;
          continue;
        }
        break;
      }
      out.push_back({std::string(line.substr(i, j - i)), col});
      i = j;
      continue;
    }
    fail(col, "unexpected character", "syntax");
  }
  return out;
}

// A cursor over one line's tokens.
class Cur {
 public:
  explicit Cur(const std::vector<Token>& tokens) : tokens_(tokens) {}

  bool done() const { return i_ >= tokens_.size(); }
  const std::string& text() const { return at().text; }
  std::size_t col() const {
    return done() ? end_col() : tokens_[i_].col;
  }
  bool is(std::string_view s) const { return !done() && text() == s; }

  std::string take(std::string_view what) {
    if (done()) fail(end_col(), "expected " + std::string(what), "syntax");
    std::string s = text();
    ++i_;
    return s;
  }

  void expect(std::string_view symbol) {
    if (!is(symbol)) {
      fail(col(), "expected '" + std::string(symbol) + "'", "syntax");
    }
    ++i_;
  }

  std::string take_name(std::string_view what) {
    const std::size_t c = col();
    std::string s = take(what);
    if (!valid_name(s)) {
      fail(c, "invalid name '" + s + "'", "syntax");
    }
    return s;
  }

  void expect_end() {
    if (!done()) fail(col(), "unexpected trailing '" + text() + "'", "syntax");
  }

 private:
  const Token& at() const { return tokens_[i_]; }
  std::size_t end_col() const {
    return tokens_.empty() ? 1 : tokens_.back().col + tokens_.back().text.size();
  }

  const std::vector<Token>& tokens_;
  std::size_t i_ = 0;
};

unsigned long long parse_uint(const std::string& s, std::size_t col,
                              std::string_view what) {
  unsigned long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail(col, "expected " + std::string(what) + ", got '" + s + "'", "syntax");
  }
  return v;
}

double parse_probability(const std::string& s, std::size_t col) {
  const std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (num.empty() || den.empty() ||
        den.find('/') != std::string::npos ||
        !std::all_of(num.begin(), num.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        !std::all_of(den.begin(), den.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      fail(col, "malformed fraction '" + s + "'", "syntax");
    }
    const double q = static_cast<double>(parse_uint(den, col, "denominator"));
    if (q == 0.0) fail(col, "fraction denominator is zero", "out-of-range");
    return static_cast<double>(parse_uint(num, col, "numerator")) / q;
  }
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail(col, "malformed probability '" + s + "'", "syntax");
  }
  if (!std::isfinite(v) || v < 0.0) {
    fail(col, "probability '" + s + "' is out of range", "out-of-range");
  }
  return v;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

const std::map<std::string, GateKind, std::less<>>& kind_table() {
  static const std::map<std::string, GateKind, std::less<>> table = {
      {"rSET", GateKind::RSET},       {"rCLR", GateKind::RCLR},
      {"rSETi", GateKind::RSETI},     {"rCOPY", GateKind::RCOPY},
      {"rUnCOPY", GateKind::RUNCOPY}, {"rFUNC", GateKind::RFUNC},
      {"rUnFUNC", GateKind::RUNFUNC}, {"cNOT", GateKind::CNOT},
      {"ccNOT", GateKind::CCNOT},
  };
  return table;
}

struct TableLiteral {
  struct Row {
    std::string key;
    unsigned value = 0;
    std::size_t col = 0;
  };
  std::vector<Row> rows;
  std::size_t col = 0;
};

struct ArgGroup {
  std::optional<std::string> name;
  std::optional<unsigned long long> value;
  std::optional<TableLiteral> table;
  std::size_t col = 0;
};

struct PrecondClause {
  std::string var;
  bool rhs_is_value = false;
  unsigned long long rhs_value = 0;
  std::string rhs_ident;
  std::size_t col = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t nl = text.find('\n', start);
      if (nl == std::string_view::npos) {
        lines_.emplace_back(text.substr(start));
        break;
      }
      lines_.emplace_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }

  ParseResult run() {
    std::size_t i = 0;
    while (i < lines_.size()) {
      i = parse_line(i);
    }
    if (!frozen_) freeze_space(lines_.size());
    ParseResult result;
    if (diags_.empty()) {
      result.model = std::move(model_);
    }
    result.diagnostics = std::move(diags_);
    return result;
  }

 private:
  void diag(std::size_t line, std::size_t col, std::string message,
            std::string code) {
    diags_.push_back(Diagnostic{Diagnostic::Severity::Error, line, col,
                                std::move(message), std::move(code)});
  }

  // Returns the index of the next line to parse.
  std::size_t parse_line(std::size_t i) {
    std::vector<Token> tokens;
    try {
      tokens = lex_line(lines_[i]);
    } catch (const StatementError& e) {
      diag(i + 1, e.col, e.message, e.code);
      return i + 1;
    }
    if (tokens.empty()) return i + 1;
    const std::string& head = tokens[0].text;
    try {
      Cur cur(tokens);
      if (head == "var") {
        parse_var(cur, i);
        return i + 1;
      }
      if (head == "dist") {
        freeze_space(i);
        parse_dist(cur, i);
        return i + 1;
      }
      if (head == "gate") {
        freeze_space(i);
        parse_gate(cur, i);
        return i + 1;
      }
      if (head == "circuit") {
        freeze_space(i);
        parse_circuit(cur, i);
        return i + 1;
      }
      if (head == "net") {
        freeze_space(i);
        return parse_net(cur, i);
      }
      fail(tokens[0].col, "unknown statement '" + head + "'", "syntax");
    } catch (const StatementError& e) {
      diag(i + 1, e.col, e.message, e.code);
    }
    return i + 1;
  }

  void freeze_space(std::size_t line) {
    if (frozen_) return;
    frozen_ = true;
    if (model_.variables.empty()) return;
    try {
      model_.space.emplace(model_.variables);
    } catch (const Error& e) {
      diag(line + 1, 1, e.what(), "out-of-range");
    }
  }

  const FactorizedSpace& space_or_fail(std::size_t col) {
    if (!model_.space) {
      fail(col, "no variables declared", "unresolved-ref");
    }
    return *model_.space;
  }

  const VariableDecl& resolve_var(const std::string& name, std::size_t col) {
    const auto& sp = space_or_fail(col);
    const auto idx = sp.variable_index(name);
    if (!idx) fail(col, "unknown variable '" + name + "'", "unresolved-ref");
    return sp.variable(*idx);
  }

  void parse_var(Cur& cur, std::size_t line) {
    cur.expect("var");
    if (frozen_) {
      fail(cur.col(), "variable declarations must precede other statements",
           "syntax");
    }
    const std::size_t name_col = cur.col();
    const std::string name = cur.take_name("variable name");
    if (!cur.is("arity")) fail(cur.col(), "expected 'arity'", "syntax");
    cur.take("arity");
    const std::size_t arity_col = cur.col();
    const unsigned long long arity =
        parse_uint(cur.take("arity value"), arity_col, "arity value");
    cur.expect_end();
    if (arity < 2) {
      fail(arity_col, "arity must be at least 2", "out-of-range");
    }
    if (arity > (1ull << 20)) {
      fail(arity_col, "arity exceeds the joint state cap", "out-of-range");
    }
    for (const auto& v : model_.variables) {
      if (v.name == name) {
        fail(name_col, "variable '" + name + "' already declared",
             "duplicate-name");
      }
    }
    (void)line;
    model_.variables.push_back({name, static_cast<unsigned>(arity)});
  }

  void parse_dist(Cur& cur, std::size_t line) {
    cur.expect("dist");
    const std::size_t name_col = cur.col();
    const std::string name = cur.take_name("distribution name");
    if (model_.find_dist(name)) {
      fail(name_col, "distribution '" + name + "' already declared",
           "duplicate-name");
    }
    const auto& sp = space_or_fail(name_col);
    cur.expect("{");
    std::vector<std::pair<std::size_t, double>> entries;
    std::set<std::size_t> seen;
    double sum = 0.0;
    while (!cur.is("}")) {
      const std::size_t entry_col = cur.col();
      std::vector<unsigned> values(sp.variable_count(), 0);
      std::vector<bool> assigned(sp.variable_count(), false);
      while (!cur.is(":")) {
        const std::size_t var_col = cur.col();
        const std::string var = cur.take_name("variable name");
        const auto idx = sp.variable_index(var);
        if (!idx) {
          fail(var_col, "unknown variable '" + var + "'", "unresolved-ref");
        }
        if (assigned[*idx]) {
          fail(var_col, "variable '" + var + "' assigned twice in one entry",
               "duplicate-name");
        }
        cur.expect("=");
        const std::size_t val_col = cur.col();
        const unsigned long long v =
            parse_uint(cur.take("value"), val_col, "value");
        if (v >= sp.variable(*idx).arity) {
          fail(val_col,
               "value " + std::to_string(v) + " is out of range for '" + var +
                   "'",
               "out-of-range");
        }
        values[*idx] = static_cast<unsigned>(v);
        assigned[*idx] = true;
      }
      for (std::size_t k = 0; k < assigned.size(); ++k) {
        if (!assigned[k]) {
          fail(entry_col,
               "entry must assign every variable; missing '" +
                   sp.variable(k).name + "'",
               "arity-mismatch");
        }
      }
      cur.expect(":");
      const std::size_t prob_col = cur.col();
      const double p =
          parse_probability(cur.take("probability"), prob_col);
      const std::size_t state = sp.index_of(Assignment{values});
      if (!seen.insert(state).second) {
        fail(entry_col, "state '" + sp.label_of(state) + "' assigned twice",
             "duplicate-name");
      }
      entries.emplace_back(state, p);
      sum += p;
      if (cur.is(",")) {
        cur.expect(",");
        continue;
      }
      if (!cur.is("}")) {
        fail(cur.col(), "expected ',' or '}'", "syntax");
      }
    }
    cur.expect("}");
    cur.expect_end();
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
      fail(name_col, "probabilities sum to " + format_6g(sum), "prob-sum");
    }
    if (std::abs(sum - 1.0) > kNormalizeThreshold) {
      for (auto& e : entries) e.second /= sum;
    }
    (void)line;
    model_.dists.push_back(
        {name, Distribution::from_sparse(sp.joint_state_space(),
                                         std::move(entries))});
  }

  TableLiteral parse_table(Cur& cur) {
    TableLiteral table;
    table.col = cur.col();
    cur.expect("[");
    while (!cur.is("]")) {
      TableLiteral::Row row;
      row.col = cur.col();
      row.key = cur.take("table row key");
      if (!all_digits(row.key)) {
        fail(row.col, "table key '" + row.key + "' must be digits", "table");
      }
      cur.expect("->");
      const std::size_t val_col = cur.col();
      const unsigned long long v =
          parse_uint(cur.take("table value"), val_col, "table value");
      if (v > 0xffffffffull) {
        fail(val_col, "table value out of range", "table");
      }
      row.value = static_cast<unsigned>(v);
      table.rows.push_back(std::move(row));
    }
    cur.expect("]");
    if (table.rows.empty()) {
      fail(table.col, "table must have at least one row", "table");
    }
    return table;
  }

  // Builds a TruthTable over the named input variables from a literal.
  TruthTable build_table(const TableLiteral& lit,
                         const std::vector<std::string>& input_names,
                         unsigned output_arity) {
    const auto& sp = *model_.space;
    std::vector<unsigned> arities;
    for (const auto& name : input_names) {
      const auto idx = sp.variable_index(name);
      arities.push_back(sp.variable(*idx).arity);
      if (arities.back() > 10) {
        fail(lit.col,
             "table keys support input arities up to 10; '" + name +
                 "' is larger",
             "table");
      }
    }
    std::size_t domain = 1;
    for (unsigned a : arities) {
      if (domain > (std::size_t{1} << 20) / a) {
        fail(lit.col, "table domain exceeds the state cap", "table");
      }
      domain *= a;
    }
    std::vector<unsigned> values(domain, 0);
    std::vector<bool> present(domain, false);
    for (const auto& row : lit.rows) {
      if (row.key.size() != arities.size()) {
        fail(row.col,
             "table key '" + row.key + "' must have one digit per input",
             "table");
      }
      std::size_t index = 0;
      for (std::size_t k = 0; k < arities.size(); ++k) {
        const unsigned digit = static_cast<unsigned>(row.key[k] - '0');
        if (digit >= arities[k]) {
          fail(row.col,
               "table key '" + row.key + "' has a digit out of range",
               "table");
        }
        index = index * arities[k] + digit;
      }
      if (present[index]) {
        fail(row.col, "table key '" + row.key + "' listed twice", "table");
      }
      if (row.value >= output_arity) {
        fail(row.col, "table value out of range for the output variable",
             "table");
      }
      present[index] = true;
      values[index] = row.value;
    }
    for (std::size_t i = 0; i < domain; ++i) {
      if (!present[i]) {
        fail(lit.col, "table must cover every input combination", "table");
      }
    }
    return TruthTable(std::move(arities), output_arity, std::move(values));
  }

  void parse_gate(Cur& cur, std::size_t line) {
    cur.expect("gate");
    const std::size_t name_col = cur.col();
    const std::string name = cur.take_name("gate name");
    if (model_.find_gate(name)) {
      fail(name_col, "gate '" + name + "' already declared", "duplicate-name");
    }
    cur.expect("=");
    const std::size_t kind_col = cur.col();
    const std::string kind_text = cur.take("gate kind");
    const auto kind_it = kind_table().find(kind_text);
    if (kind_it == kind_table().end()) {
      fail(kind_col, "unknown gate kind '" + kind_text + "'", "unknown-kind");
    }
    const GateKind kind = kind_it->second;
    space_or_fail(kind_col);
    cur.expect("(");

    std::vector<ArgGroup> groups;
    std::optional<PrecondClause> clause;
    while (true) {
      ArgGroup g;
      g.col = cur.col();
      const std::string first = cur.take("gate argument");
      if (all_digits(first)) {
        g.value = parse_uint(first, g.col, "value");
      } else if (valid_name(first)) {
        g.name = first;
        if (cur.is("[")) g.table = parse_table(cur);
      } else {
        fail(g.col, "unexpected gate argument '" + first + "'", "syntax");
      }
      groups.push_back(std::move(g));
      if (cur.is(",")) {
        cur.expect(",");
        continue;
      }
      break;
    }
    if (cur.is("|")) {
      cur.expect("|");
      PrecondClause c;
      c.col = cur.col();
      c.var = cur.take_name("assumption variable");
      cur.expect("=");
      const std::size_t rhs_col = cur.col();
      const std::string rhs = cur.take("assumed value");
      if (all_digits(rhs)) {
        c.rhs_is_value = true;
        c.rhs_value = parse_uint(rhs, rhs_col, "assumed value");
      } else {
        c.rhs_ident = rhs;
      }
      clause = std::move(c);
    }
    cur.expect(")");
    cur.expect_end();

    GateSpec spec;
    spec.kind = kind;
    assemble_gate(spec, kind_text, groups, clause, kind_col);
    try {
      ConditionedOperation op = build_gate(spec, *model_.space);
      (void)line;
      model_.gates.push_back({name, std::move(spec), std::move(op)});
    } catch (const SpaceCapError& e) {
      fail(kind_col, e.what(), "out-of-range");
    } catch (const Error& e) {
      fail(kind_col, e.what(), "precondition");
    }
  }

  // Checks the argument shape for one gate kind and fills the GateSpec.
  void assemble_gate(GateSpec& spec, const std::string& kind_text,
                     const std::vector<ArgGroup>& groups,
                     const std::optional<PrecondClause>& clause,
                     std::size_t kind_col) {
    const auto need_names = [&](std::size_t count) {
      if (groups.size() != count) {
        fail(kind_col,
             kind_text + " takes " + std::to_string(count) + " variables",
             "arity-mismatch");
      }
      for (const auto& g : groups) {
        if (!g.name || g.table) {
          fail(g.col, kind_text + " arguments must be variable names",
               "arity-mismatch");
        }
      }
    };
    const auto require_clause = [&]() -> const PrecondClause& {
      if (!clause) {
        fail(kind_col, kind_text + " needs an assumption clause",
             "precondition");
      }
      return *clause;
    };
    const auto clause_value = [&](const std::string& var,
                                  unsigned arity) -> unsigned {
      const PrecondClause& c = require_clause();
      if (c.var != var) {
        fail(c.col, kind_text + " must assume a value of '" + var + "'",
             "precondition");
      }
      if (!c.rhs_is_value) {
        fail(c.col, kind_text + " assumes a fixed value of '" + var + "'",
             "precondition");
      }
      if (c.rhs_value >= arity) {
        fail(c.col, "assumed value out of range for '" + var + "'",
             "out-of-range");
      }
      return static_cast<unsigned>(c.rhs_value);
    };
    const auto arity_of = [&](const ArgGroup& g) -> unsigned {
      return resolve_var(*g.name, g.col).arity;
    };
    const auto check_distinct = [&]() {
      for (std::size_t a = 0; a < groups.size(); ++a) {
        for (std::size_t b = a + 1; b < groups.size(); ++b) {
          if (groups[a].name && groups[b].name &&
              *groups[a].name == *groups[b].name) {
            fail(groups[b].col, "operands must be distinct variables",
                 "arity-mismatch");
          }
        }
      }
    };

    switch (spec.kind) {
      case GateKind::RSET:
      case GateKind::RCLR: {
        need_names(1);
        const unsigned arity = arity_of(groups[0]);
        spec.operands = {*groups[0].name};
        const unsigned expected = spec.kind == GateKind::RSET ? 0u : 1u;
        if (clause_value(*groups[0].name, arity) != expected) {
          fail(require_clause().col,
               kind_text + " assumes the value " + std::to_string(expected),
               "precondition");
        }
        break;
      }
      case GateKind::RSETI: {
        if (groups.size() != 2 || !groups[0].name || !groups[1].value) {
          fail(kind_col, "rSETi takes a variable and a target value",
               "arity-mismatch");
        }
        const unsigned arity = arity_of(groups[0]);
        if (*groups[1].value >= arity) {
          fail(groups[1].col, "target value out of range", "out-of-range");
        }
        spec.operands = {*groups[0].name};
        spec.set_to = static_cast<unsigned>(*groups[1].value);
        spec.assumed_from = clause_value(*groups[0].name, arity);
        if (spec.set_to == spec.assumed_from) {
          fail(require_clause().col,
               "rSETi must write a value different from the one it assumes",
               "precondition");
        }
        break;
      }
      case GateKind::RCOPY: {
        need_names(2);
        check_distinct();
        const unsigned src = arity_of(groups[0]);
        const unsigned dst = arity_of(groups[1]);
        if (src != dst) {
          fail(groups[1].col, "rCOPY variables must share one arity",
               "arity-mismatch");
        }
        spec.operands = {*groups[0].name, *groups[1].name};
        spec.known_value = clause_value(*groups[1].name, dst);
        break;
      }
      case GateKind::RUNCOPY: {
        if (groups.size() != 3 || !groups[0].name || !groups[1].name ||
            !groups[2].value) {
          fail(kind_col, "rUnCOPY takes two variables and a reset value",
               "arity-mismatch");
        }
        check_distinct();
        const unsigned src = arity_of(groups[0]);
        const unsigned dst = arity_of(groups[1]);
        if (src != dst) {
          fail(groups[1].col, "rUnCOPY variables must share one arity",
               "arity-mismatch");
        }
        if (*groups[2].value >= dst) {
          fail(groups[2].col, "reset value out of range", "out-of-range");
        }
        spec.operands = {*groups[0].name, *groups[1].name};
        spec.known_value = static_cast<unsigned>(*groups[2].value);
        const PrecondClause& c = require_clause();
        if (c.var != *groups[1].name || c.rhs_is_value ||
            c.rhs_ident != *groups[0].name) {
          fail(c.col,
               "rUnCOPY assumes the destination already equals the source",
               "precondition");
        }
        break;
      }
      case GateKind::RFUNC:
      case GateKind::RUNFUNC: {
        std::vector<ArgGroup> vars(groups.begin(), groups.end());
        std::optional<unsigned long long> reset;
        std::size_t reset_col = kind_col;
        if (spec.kind == GateKind::RUNFUNC) {
          if (vars.empty() || !vars.back().value) {
            fail(kind_col, "rUnFUNC ends with a reset value",
                 "arity-mismatch");
          }
          reset = *vars.back().value;
          reset_col = vars.back().col;
          vars.pop_back();
        }
        if (vars.size() < 2) {
          fail(kind_col, kind_text + " needs inputs and an output variable",
               "arity-mismatch");
        }
        for (std::size_t k = 0; k < vars.size(); ++k) {
          if (!vars[k].name) {
            fail(vars[k].col, kind_text + " arguments must be variable names",
                 "arity-mismatch");
          }
          if (vars[k].table && k + 1 != vars.size()) {
            fail(vars[k].col, "the table belongs after the output variable",
                 "table");
          }
        }
        if (!vars.back().table) {
          fail(vars.back().col, kind_text + " needs an inline table",
               "table");
        }
        for (std::size_t a = 0; a < vars.size(); ++a) {
          for (std::size_t b = a + 1; b < vars.size(); ++b) {
            if (*vars[a].name == *vars[b].name) {
              fail(vars[b].col, "operands must be distinct variables",
                   "arity-mismatch");
            }
          }
        }
        std::vector<std::string> input_names;
        for (std::size_t k = 0; k + 1 < vars.size(); ++k) {
          resolve_var(*vars[k].name, vars[k].col);
          input_names.push_back(*vars[k].name);
        }
        const unsigned out_arity = arity_of(vars.back());
        spec.table = build_table(*vars.back().table, input_names, out_arity);
        spec.operands = input_names;
        spec.operands.push_back(*vars.back().name);
        if (spec.kind == GateKind::RFUNC) {
          spec.known_value = clause_value(*vars.back().name, out_arity);
        } else {
          if (*reset >= out_arity) {
            fail(reset_col, "reset value out of range", "out-of-range");
          }
          spec.known_value = static_cast<unsigned>(*reset);
          const PrecondClause& c = require_clause();
          if (c.var != *vars.back().name || c.rhs_is_value ||
              c.rhs_ident != "F") {
            fail(c.col,
                 "rUnFUNC assumes the output holds the computed value; "
                 "write '" +
                     *vars.back().name + "=F'",
                 "precondition");
          }
        }
        break;
      }
      case GateKind::CNOT:
      case GateKind::CCNOT: {
        const std::size_t count = spec.kind == GateKind::CNOT ? 2 : 3;
        need_names(count);
        check_distinct();
        if (clause) {
          fail(clause->col, kind_text + " takes no assumption clause",
               "precondition");
        }
        for (const auto& g : groups) {
          if (arity_of(g) != 2) {
            fail(g.col, kind_text + " works on binary variables",
                 "arity-mismatch");
          }
          spec.operands.push_back(*g.name);
        }
        break;
      }
    }
  }

  void parse_circuit(Cur& cur, std::size_t line) {
    cur.expect("circuit");
    const std::size_t name_col = cur.col();
    const std::string name = cur.take_name("circuit name");
    if (model_.find_circuit(name)) {
      fail(name_col, "circuit '" + name + "' already declared",
           "duplicate-name");
    }
    space_or_fail(name_col);
    cur.expect("{");
    std::vector<std::string> gate_names;
    while (!cur.is("}")) {
      const std::size_t col = cur.col();
      const std::string g = cur.take_name("gate reference");
      if (!model_.find_gate(g)) {
        fail(col, "unknown gate '" + g + "'", "unresolved-ref");
      }
      gate_names.push_back(g);
    }
    cur.expect("}");
    cur.expect_end();
    (void)line;
    model_.circuits.push_back({name, std::move(gate_names)});
  }

  NetLevel parse_level(Cur& cur) {
    const std::size_t col = cur.col();
    const std::string t = cur.take("level");
    if (t == "0") return {NetLevel::Kind::Zero};
    if (t == "1") return {NetLevel::Kind::One};
    if (t == "input") return {NetLevel::Kind::Input};
    fail(col, "level must be 0, 1, or input", "net");
  }

  // Parses the whole block, recovering internally so later lines never leak
  // into top-level parsing.  Returns the index after the closing brace (or
  // the end of input when the block never closes).
  std::size_t parse_net(Cur& cur, std::size_t start) {
    NetDecl decl;
    std::size_t name_col = 1;
    bool header_ok = true;
    try {
      cur.expect("net");
      name_col = cur.col();
      decl.name = cur.take_name("net name");
      if (model_.find_net(decl.name)) {
        fail(name_col, "net '" + decl.name + "' already declared",
             "duplicate-name");
      }
      cur.expect("{");
      cur.expect_end();
    } catch (const StatementError& e) {
      diag(start + 1, e.col, e.message, e.code);
      header_ok = false;
    }

    bool closed = false;
    std::size_t i = start + 1;
    for (; i < lines_.size(); ++i) {
      std::vector<Token> tokens;
      try {
        tokens = lex_line(lines_[i]);
      } catch (const StatementError& e) {
        diag(i + 1, e.col, e.message, e.code);
        continue;
      }
      if (tokens.empty()) continue;
      if (tokens[0].text == "}") {
        Cur close(tokens);
        try {
          close.expect("}");
          close.expect_end();
        } catch (const StatementError& e) {
          diag(i + 1, e.col, e.message, e.code);
        }
        closed = true;
        ++i;
        break;
      }
      try {
        Cur inner(tokens);
        parse_net_statement(inner, decl);
      } catch (const StatementError& e) {
        diag(i + 1, e.col, e.message, e.code);
      }
    }
    if (!closed) {
      diag(start + 1, name_col, "unterminated net block", "net");
      return i;
    }
    if (!header_ok) return i;
    try {
      build_net(decl);
    } catch (const Error& e) {
      diag(start + 1, name_col, e.what(), "net");
      return i;
    }
    model_.nets.push_back(std::move(decl));
    return i;
  }

  const NetSignalDecl* find_signal(const NetDecl& decl,
                                   std::string_view name) const {
    for (const auto& s : decl.signals) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  std::string parse_node_ref(Cur& cur, const NetDecl& decl) {
    const std::size_t col = cur.col();
    const std::string t = cur.take("node");
    const std::size_t dot = t.rfind('.');
    if (dot == std::string::npos ||
        (t.substr(dot) != ".p" && t.substr(dot) != ".n")) {
      fail(col, "node must be '<signal>.p' or '<signal>.n'", "net");
    }
    if (!find_signal(decl, t.substr(0, dot))) {
      fail(col, "unknown signal '" + t.substr(0, dot) + "'", "net");
    }
    return t;
  }

  std::string parse_signal_ref(Cur& cur, const NetDecl& decl) {
    const std::size_t col = cur.col();
    const std::string t = cur.take_name("signal name");
    if (!find_signal(decl, t)) {
      fail(col, "unknown signal '" + t + "'", "net");
    }
    return t;
  }

  void expect_key(Cur& cur, std::string_view key) {
    const std::size_t col = cur.col();
    if (!cur.is(key)) {
      fail(col, "expected '" + std::string(key) + "='", "syntax");
    }
    cur.take(key);
    cur.expect("=");
  }

  void parse_net_statement(Cur& cur, NetDecl& decl) {
    const std::string head = cur.take("net statement");
    if (head == "signal") {
      const std::size_t col = cur.col();
      const std::string name = cur.take_name("signal name");
      if (find_signal(decl, name)) {
        fail(col, "signal '" + name + "' already declared", "duplicate-name");
      }
      const std::size_t kind_col = cur.col();
      const std::string kind = cur.take("signal kind");
      cur.expect_end();
      if (kind != "driven" && kind != "storage") {
        fail(kind_col, "signal kind must be 'driven' or 'storage'", "net");
      }
      decl.signals.push_back({name, kind == "driven"});
      return;
    }
    if (head == "tgate") {
      NetGateDecl g;
      expect_key(cur, "control");
      g.control = parse_signal_ref(cur, decl);
      expect_key(cur, "a");
      g.term_a = parse_node_ref(cur, decl);
      expect_key(cur, "b");
      const std::size_t b_col = cur.col();
      g.term_b = parse_node_ref(cur, decl);
      cur.expect_end();
      if (g.term_a == g.term_b) {
        fail(b_col, "gate terminals must be distinct nodes", "net");
      }
      decl.tgates.push_back(std::move(g));
      return;
    }
    if (head == "init") {
      const std::size_t col = cur.col();
      if (!decl.ramps.empty()) {
        fail(col, "initial settings must precede ramps", "net");
      }
      NetInitDecl init;
      init.signal = parse_signal_ref(cur, decl);
      for (const auto& other : decl.inits) {
        if (other.signal == init.signal) {
          fail(col, "signal '" + init.signal + "' initialized twice",
               "duplicate-name");
        }
      }
      init.value = parse_level(cur);
      cur.expect_end();
      decl.inits.push_back(std::move(init));
      return;
    }
    if (head == "ramp") {
      NetRampDecl ramp;
      ramp.signal = parse_signal_ref(cur, decl);
      ramp.from = parse_level(cur);
      ramp.to = parse_level(cur);
      cur.expect_end();
      decl.ramps.push_back(std::move(ramp));
      return;
    }
    if (head == "inputs" || head == "outputs") {
      auto& list = head == "inputs" ? decl.inputs : decl.outputs;
      const std::size_t col = cur.col();
      if (!list.empty()) {
        fail(col, "'" + head + "' already declared", "net");
      }
      while (!cur.done()) {
        const std::size_t item_col = cur.col();
        const std::string s = parse_signal_ref(cur, decl);
        if (std::find(list.begin(), list.end(), s) != list.end()) {
          fail(item_col, "signal '" + s + "' listed twice", "duplicate-name");
        }
        list.push_back(s);
      }
      if (list.empty()) {
        fail(col, "'" + head + "' needs at least one signal", "net");
      }
      return;
    }
    fail(1, "unknown net statement '" + head + "'", "syntax");
  }

  static LevelExpr to_level_expr(const NetLevel& level,
                                 const std::string& signal) {
    switch (level.kind) {
      case NetLevel::Kind::Zero:
        return LevelExpr::constant(false);
      case NetLevel::Kind::One:
        return LevelExpr::constant(true);
      case NetLevel::Kind::Input:
        return LevelExpr::input(signal);
    }
    return LevelExpr::constant(false);
  }

  static void build_net(NetDecl& decl) {
    for (const auto& s : decl.signals) {
      decl.net.add_signal(s.name,
                          s.driven ? NodeKind::DrivenRail : NodeKind::Storage);
    }
    for (const auto& g : decl.tgates) {
      decl.net.add_gate(g.control, g.term_a, g.term_b);
    }
    for (const auto& init : decl.inits) {
      decl.schedule.set_initial(init.signal,
                                to_level_expr(init.value, init.signal));
    }
    for (const auto& ramp : decl.ramps) {
      decl.schedule.ramp(ramp.signal, to_level_expr(ramp.from, ramp.signal),
                         to_level_expr(ramp.to, ramp.signal));
    }
  }

  std::vector<std::string> lines_;
  Model model_;
  std::vector<Diagnostic> diags_;
  bool frozen_ = false;
};

}  // namespace

std::string to_string(const Diagnostic& d) {
  const char* severity =
      d.severity == Diagnostic::Severity::Error ? "error" : "warning";
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
         severity + ": " + d.message + " [" + d.code + "]";
}

const DistDecl* Model::find_dist(std::string_view name) const {
  for (const auto& d : dists) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const GateDecl* Model::find_gate(std::string_view name) const {
  for (const auto& g : gates) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

const CircuitDecl* Model::find_circuit(std::string_view name) const {
  for (const auto& c : circuits) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const NetDecl* Model::find_net(std::string_view name) const {
  for (const auto& n : nets) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

Circuit Model::build_circuit(const CircuitDecl& decl) const {
  std::vector<ConditionedOperation> ops;
  for (const auto& name : decl.gate_names) {
    const GateDecl* g = find_gate(name);
    if (!g) throw InvariantError("unknown gate '" + name + "'");
    ops.push_back(g->op);
  }
  if (!space) throw InvariantError("model declares no variables");
  return Circuit(*space, std::move(ops));
}

ParseResult parse_model(std::string_view text) {
  try {
    return Parser(text).run();
  } catch (const StatementError& e) {
    // Lexing the very first line can throw before the loop owns it.
    ParseResult r;
    r.diagnostics.push_back(Diagnostic{Diagnostic::Severity::Error, 1, e.col,
                                       e.message, e.code});
    return r;
  } catch (const std::exception& e) {
    ParseResult r;
    r.diagnostics.push_back(Diagnostic{Diagnostic::Severity::Error, 1, 1,
                                       e.what(), "syntax"});
    return r;
  }
}

namespace {

std::string print_table(const TruthTable& table) {
  std::string out = "[";
  const auto& arities = table.input_arities();
  for (std::size_t i = 0; i < table.domain_size(); ++i) {
    if (i) out += ' ';
    // Mixed-radix digits of the row index, first input most significant.
    std::string key(arities.size(), '0');
    std::size_t rest = i;
    for (std::size_t k = arities.size(); k-- > 0;) {
      key[k] = static_cast<char>('0' + rest % arities[k]);
      rest /= arities[k];
    }
    out += key;
    out += "->";
    out += std::to_string(table.values()[i]);
  }
  out += ']';
  return out;
}

std::string print_gate(const GateDecl& g) {
  const GateSpec& s = g.spec;
  std::string out = "gate " + g.name + " = ";
  out += gate_kind_name(s.kind);
  out += '(';
  switch (s.kind) {
    case GateKind::RSET:
      out += s.operands[0] + " | " + s.operands[0] + "=0";
      break;
    case GateKind::RCLR:
      out += s.operands[0] + " | " + s.operands[0] + "=1";
      break;
    case GateKind::RSETI:
      out += s.operands[0] + ", " + std::to_string(s.set_to) + " | " +
             s.operands[0] + "=" + std::to_string(s.assumed_from);
      break;
    case GateKind::RCOPY:
      out += s.operands[0] + ", " + s.operands[1] + " | " + s.operands[1] +
             "=" + std::to_string(s.known_value);
      break;
    case GateKind::RUNCOPY:
      out += s.operands[0] + ", " + s.operands[1] + ", " +
             std::to_string(s.known_value) + " | " + s.operands[1] + "=" +
             s.operands[0];
      break;
    case GateKind::RFUNC:
    case GateKind::RUNFUNC: {
      for (std::size_t k = 0; k + 1 < s.operands.size(); ++k) {
        out += s.operands[k] + ", ";
      }
      out += s.operands.back() + " " + print_table(*s.table);
      if (s.kind == GateKind::RFUNC) {
        out += " | " + s.operands.back() + "=" + std::to_string(s.known_value);
      } else {
        out += ", " + std::to_string(s.known_value) + " | " +
               s.operands.back() + "=F";
      }
      break;
    }
    case GateKind::CNOT:
    case GateKind::CCNOT: {
      for (std::size_t k = 0; k < s.operands.size(); ++k) {
        if (k) out += ", ";
        out += s.operands[k];
      }
      break;
    }
  }
  out += ')';
  return out;
}

const char* level_text(const NetLevel& level) {
  switch (level.kind) {
    case NetLevel::Kind::Zero:
      return "0";
    case NetLevel::Kind::One:
      return "1";
    case NetLevel::Kind::Input:
      return "input";
  }
  return "0";
}

}  // namespace

std::string print_model(const Model& m) {
  std::string out;
  for (const auto& v : m.variables) {
    out += "var " + v.name + " arity " + std::to_string(v.arity) + "\n";
  }
  for (const auto& d : m.dists) {
    out += "dist " + d.name + " {";
    const auto support = d.dist.support();
    for (std::size_t k = 0; k < support.size(); ++k) {
      out += k ? ", " : " ";
      out += m.space->label_of(support[k]) + ": " +
             format_shortest(d.dist.prob(support[k]));
    }
    out += " }\n";
  }
  for (const auto& g : m.gates) {
    out += print_gate(g) + "\n";
  }
  for (const auto& c : m.circuits) {
    out += "circuit " + c.name + " {";
    for (const auto& g : c.gate_names) out += " " + g;
    out += " }\n";
  }
  for (const auto& n : m.nets) {
    out += "net " + n.name + " {\n";
    for (const auto& s : n.signals) {
      out += "  signal " + s.name + (s.driven ? " driven\n" : " storage\n");
    }
    for (const auto& g : n.tgates) {
      out += "  tgate control=" + g.control + " a=" + g.term_a +
             " b=" + g.term_b + "\n";
    }
    for (const auto& init : n.inits) {
      out += "  init " + init.signal + " " + level_text(init.value) + "\n";
    }
    for (const auto& r : n.ramps) {
      out += "  ramp " + r.signal + " " + level_text(r.from) + " " +
             level_text(r.to) + "\n";
    }
    if (!n.inputs.empty()) {
      out += "  inputs";
      for (const auto& s : n.inputs) out += " " + s;
      out += "\n";
    }
    if (!n.outputs.empty()) {
      out += "  outputs";
      for (const auto& s : n.outputs) out += " " + s;
      out += "\n";
    }
    out += "}\n";
  }
  return out;
}

}  // namespace grc
