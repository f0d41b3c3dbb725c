#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "histq/indexing.hpp"
#include "histq/scenario.hpp"
#include "text_util.hpp"

namespace histq {

namespace {

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words{
      "times",   "factor",      "state",       "initial",   "interval",
      "context", "family",      "query",       "prob",      "condprob",
      "consistency", "amplitude", "rest",      "on",        "at",
      "expect",  "dim",         "basis",       "sqrt",      "i",
      "x",       "consistent",  "inconsistent"};
  return words;
}

struct Token {
  enum class Type { Ident, Number, Punct, End };
  Type type = Type::End;
  std::string text;
  double number = 0.0;
  int line = 0;
  int col = 0;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokens() {
    std::vector<Token> out;
    while (true) {
      skip_ws_and_comments();
      if (pos_ >= src_.size()) break;
      out.push_back(next_token());
    }
    Token end;
    end.type = Token::Type::End;
    end.line = line_;
    end.col = col_;
    out.push_back(end);
    return out;
  }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  Token next_token() {
    Token t;
    t.line = line_;
    t.col = col_;
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.type = Token::Type::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        t.text += src_[pos_];
        advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.type = Token::Type::Number;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '.')) {
        t.text += src_[pos_];
        advance();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t save = pos_;
        std::string suffix;
        suffix += src_[pos_];
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
          suffix += src_[pos_];
          advance();
        }
        if (pos_ < src_.size() &&
            std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          while (pos_ < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            suffix += src_[pos_];
            advance();
          }
          t.text += suffix;
        } else {
          // not an exponent after all; rewind
          while (pos_ > save) {
            --pos_;
            --col_;
          }
        }
      }
      t.number = std::strtod(t.text.c_str(), nullptr);
      return t;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      t.type = Token::Type::Punct;
      t.text = "->";
      advance();
      advance();
      return t;
    }
    static const std::string punct = "()[]{}<>|,;:@&+-/*=";
    if (punct.find(c) != std::string::npos) {
      t.type = Token::Type::Punct;
      t.text = std::string(1, c);
      advance();
      return t;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", line_,
                      col_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
public:
  Parser(std::string_view text, std::string name) {
    tokens_ = Lexer(text).tokens();
    model_.name = std::move(name);
  }

  ScenarioModel parse() {
    while (peek().type != Token::Type::End) {
      const Token& t = peek();
      if (t.type != Token::Type::Ident)
        throw SyntaxError("expected a declaration keyword", t.line, t.col);
      if (t.text == "times")
        parse_times();
      else if (t.text == "factor")
        parse_factor();
      else if (t.text == "state")
        parse_state();
      else if (t.text == "initial")
        parse_initial();
      else if (t.text == "interval")
        parse_interval();
      else if (t.text == "context")
        parse_context();
      else if (t.text == "family")
        parse_family();
      else if (t.text == "query")
        parse_query();
      else
        throw SyntaxError("unknown declaration '" + t.text + "'", t.line,
                          t.col);
    }
    finalize();
    return std::move(model_);
  }

private:
  // --- token plumbing -----------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

  bool at_punct(const std::string& p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == Token::Type::Punct && t.text == p;
  }

  const Token& expect_punct(const std::string& p) {
    if (!at_punct(p))
      throw SyntaxError("expected '" + p + "'", peek().line, peek().col);
    return take();
  }

  bool at_ident(const std::string& word) const {
    const Token& t = peek();
    return t.type == Token::Type::Ident && t.text == word;
  }

  const Token& expect_keyword(const std::string& word) {
    if (!at_ident(word))
      throw SyntaxError("expected '" + word + "'", peek().line, peek().col);
    return take();
  }

  std::string expect_ident() {
    const Token& t = peek();
    if (t.type != Token::Type::Ident)
      throw SyntaxError("expected an identifier", t.line, t.col);
    return take().text;
  }

  std::string expect_fresh_ident() {
    const Token& t = peek();
    std::string name = expect_ident();
    if (reserved_words().count(name))
      throw SyntaxError("'" + name + "' is a reserved word", t.line, t.col);
    return name;
  }

  [[noreturn]] void fail_invariant(const Token& at, const std::string& msg) {
    throw InvariantViolation("line " + std::to_string(at.line) + ", col " +
                             std::to_string(at.col) + ": " + msg);
  }

  [[noreturn]] void fail_reference(const Token& at, const std::string& msg) {
    throw UnknownReference(msg, at.line, at.col);
  }

  // --- builder state ------------------------------------------------------

  void require_space(const Token& at) {
    if (model_.space) return;
    if (factors_.empty()) fail_invariant(at, "no factors declared yet");
    model_.space = std::make_shared<CompositeSpace>(factors_);
  }

  void require_grid(const Token& at) {
    if (!grid_) fail_invariant(at, "no time grid declared yet (use 'times')");
  }

  void require_schedule(const Token& at) {
    require_space(at);
    require_grid(at);
    if (!model_.schedule)
      model_.schedule = std::make_shared<UnitarySchedule>(model_.space, *grid_);
  }

  // --- statements ---------------------------------------------------------

  void parse_times() {
    const Token& kw = take();
    if (grid_) fail_invariant(kw, "duplicate 'times' declaration");
    std::vector<std::string> labels;
    labels.push_back(expect_fresh_ident());
    while (at_punct(",")) {
      take();
      labels.push_back(expect_fresh_ident());
    }
    try {
      grid_ = TimeGrid(labels);
    } catch (const InvariantViolation& e) {
      fail_invariant(kw, e.what());
    }
  }

  void parse_factor() {
    const Token& kw = take();
    if (model_.space)
      fail_invariant(kw, "factors must be declared before states and dynamics");
    Factor f;
    f.name = expect_fresh_ident();
    expect_keyword("dim");
    expect_punct("=");
    const Token& n = peek();
    if (n.type != Token::Type::Number)
      throw SyntaxError("expected factor dimension", n.line, n.col);
    f.dim = static_cast<Eigen::Index>(take().number);
    expect_keyword("basis");
    expect_punct("=");
    expect_punct("[");
    f.basis_labels.push_back(expect_fresh_ident());
    while (at_punct(",")) {
      take();
      f.basis_labels.push_back(expect_fresh_ident());
    }
    expect_punct("]");
    if (static_cast<Eigen::Index>(f.basis_labels.size()) != f.dim)
      fail_invariant(kw, "factor " + f.name + ": expected " +
                             std::to_string(f.dim) + " basis labels, got " +
                             std::to_string(f.basis_labels.size()));
    for (const Factor& other : factors_)
      if (other.name == f.name)
        fail_invariant(kw, "duplicate factor name " + f.name);
    factors_.push_back(std::move(f));
  }

  void parse_state() {
    const Token& kw = take();
    require_space(kw);
    std::string name = expect_fresh_ident();
    if (model_.find_state(name))
      fail_invariant(kw, "duplicate state name " + name);
    expect_punct("=");
    ExprResult e = parse_expr();
    model_.states.push_back(StateDecl{std::move(name), std::move(e.state)});
  }

  void parse_initial() {
    const Token& kw = take();
    require_space(kw);
    if (model_.initial.size() != 0)
      fail_invariant(kw, "duplicate 'initial' declaration");
    expect_punct("=");
    ExprResult e = parse_expr();
    if (e.state.positions.size() != model_.space->factor_count())
      fail_invariant(kw, "initial state must cover all factors exactly once");
    if (std::abs(e.state.vec.norm() - 1.0) > tol_norm)
      fail_invariant(kw, "initial state is not normalized");
    model_.initial = std::move(e.state.vec);
  }

  void parse_interval() {
    const Token& kw = take();
    require_schedule(kw);
    IntervalDecl decl;
    decl.from = expect_ident();
    decl.to = expect_ident_after_arrow_or(decl.from);
    expect_keyword("on");
    std::vector<std::size_t> positions;
    while (true) {
      const Token& ft = peek();
      const std::string fname = expect_ident();
      std::size_t p = 0;
      try {
        p = model_.space->factor_position(fname);
      } catch (const UnknownFactor&) {
        fail_reference(ft, "unknown factor " + fname);
      }
      positions.push_back(p);
      if (!at_punct(",")) break;
      take();
    }
    std::sort(positions.begin(), positions.end());
    if (std::adjacent_find(positions.begin(), positions.end()) !=
        positions.end())
      fail_invariant(kw, "factor listed twice in interval subset");
    for (std::size_t p : positions)
      decl.factors.push_back(model_.space->factor(p).name);

    expect_punct("{");
    while (!at_punct("}")) {
      const Token& entry = peek();
      ExprResult lhs = parse_expr();
      expect_punct("->");
      ExprResult rhs = parse_expr();
      if (lhs.state.positions != positions || rhs.state.positions != positions)
        fail_invariant(entry,
                       "mapping does not live on the declared factor subset");
      decl.local_pairs.push_back(
          IsometryPair{std::move(lhs.state.vec), std::move(rhs.state.vec)});
      if (at_punct(";"))
        take();
      else
        break;
    }
    expect_punct("}");

    try {
      model_.schedule->add_step(decl.from, decl.to, decl.factors,
                                decl.local_pairs);
    } catch (const NonIsometricPairs& e) {
      throw NonUnitaryStep("line " + std::to_string(kw.line) + ", col " +
                           std::to_string(kw.col) + ": " + e.what());
    } catch (const DimensionMismatch& e) {
      throw NonUnitaryStep("line " + std::to_string(kw.line) + ", col " +
                           std::to_string(kw.col) + ": " + e.what());
    } catch (const UnknownTime& e) {
      fail_reference(kw, e.what());
    } catch (const InvariantViolation& e) {
      fail_invariant(kw, e.what());
    }
    model_.intervals.push_back(std::move(decl));
  }

  std::string expect_ident_after_arrow_or(const std::string&) {
    expect_punct("->");
    return expect_ident();
  }

  void parse_context() {
    const Token& kw = take();
    require_space(kw);
    require_grid(kw);
    ContextDecl decl;
    decl.name = expect_fresh_ident();
    if (model_.contexts.count(decl.name))
      fail_invariant(kw, "duplicate context name " + decl.name);
    expect_keyword("at");
    const Token& tt = peek();
    decl.time = expect_ident();
    if (!grid_->contains(decl.time))
      fail_reference(tt, "unknown time " + decl.time);
    expect_punct("{");
    std::set<std::string> proj_names;
    while (!at_punct("}")) {
      if (at_ident("rest")) {
        const Token& rt = take();
        if (decl.rest_name)
          fail_invariant(rt, "duplicate 'rest' projector");
        decl.rest_name = expect_fresh_ident();
        if (!proj_names.insert(*decl.rest_name).second)
          fail_invariant(rt, "duplicate projector name " + *decl.rest_name);
      } else {
        Context::PointerEntry e;
        const Token& et = peek();
        e.projector_name = expect_fresh_ident();
        if (!proj_names.insert(e.projector_name).second)
          fail_invariant(et, "duplicate projector name " + e.projector_name);
        expect_punct("=");
        expect_punct("|");
        e.label = expect_ident();
        expect_punct(">");
        expect_punct("<");
        const Token& lt = peek();
        const std::string ket = expect_ident();
        if (ket != e.label)
          throw SyntaxError("projector must be |l><l| with matching labels",
                            lt.line, lt.col);
        expect_punct("|");
        expect_keyword("on");
        const Token& ft = peek();
        e.factor = expect_ident();
        try {
          model_.space->factor_position(e.factor);
          model_.space->label_index(model_.space->factor_position(e.factor),
                                    e.label);
        } catch (const UnknownFactor&) {
          fail_reference(ft, "unknown factor " + e.factor);
        } catch (const UnknownLabel& ex) {
          fail_reference(ft, ex.what());
        }
        decl.entries.push_back(std::move(e));
      }
      if (at_punct(";"))
        take();
      else
        break;
    }
    expect_punct("}");

    try {
      auto ctx = std::make_shared<Context>(Context::from_pointer_labels(
          model_.space, decl.name, decl.time, decl.entries, decl.rest_name));
      model_.contexts.emplace(decl.name, std::move(ctx));
    } catch (const InvariantViolation& e) {
      fail_invariant(kw, e.what());
    }
    model_.context_decls.push_back(std::move(decl));
  }

  void parse_family() {
    const Token& kw = take();
    require_grid(kw);
    FamilyDecl decl;
    decl.name = expect_fresh_ident();
    if (model_.families.count(decl.name))
      fail_invariant(kw, "duplicate family name " + decl.name);
    expect_punct("=");
    expect_punct("[");
    std::vector<ContextPtr> contexts;
    while (true) {
      const Token& ct = peek();
      const std::string cname = expect_ident();
      auto it = model_.contexts.find(cname);
      if (it == model_.contexts.end())
        fail_reference(ct, "unknown context " + cname);
      contexts.push_back(it->second);
      decl.contexts.push_back(cname);
      if (!at_punct(",")) break;
      take();
    }
    expect_punct("]");
    try {
      model_.families.emplace(decl.name,
                              Family::create(decl.name, contexts, *grid_));
    } catch (const InvariantViolation& e) {
      fail_invariant(kw, e.what());
    }
    model_.family_decls.push_back(std::move(decl));
  }

  void parse_query() {
    const Token& kw = take();
    Query q;
    if (at_ident("prob")) {
      take();
      q.kind = Query::Kind::Prob;
      q.family = expect_family_name();
      expect_punct(":");
      q.events = parse_events(q.family);
      q.text = "prob " + q.family + " : " + events_text(q.events);
    } else if (at_ident("condprob")) {
      take();
      q.kind = Query::Kind::CondProb;
      q.family = expect_family_name();
      expect_punct(":");
      q.events = parse_events(q.family);
      expect_punct("|");
      q.given = parse_events(q.family);
      q.text = "condprob " + q.family + " : " + events_text(q.events) + " | " +
               events_text(q.given);
    } else if (at_ident("consistency")) {
      take();
      q.kind = Query::Kind::Consistency;
      q.family = expect_family_name();
      q.text = "consistency " + q.family;
    } else if (at_ident("amplitude")) {
      take();
      q.kind = Query::Kind::Amplitude;
      require_schedule(kw);
      ExprResult e = parse_expr();
      if (e.state.positions.size() != model_.space->factor_count())
        fail_invariant(kw, "amplitude pattern must cover all factors");
      q.amplitude_state = std::move(e.state.vec);
      q.amplitude_text = e.text;
      expect_keyword("at");
      const Token& tt = peek();
      q.at_time = expect_ident();
      if (!grid_->contains(q.at_time))
        fail_reference(tt, "unknown time " + q.at_time);
      q.text = "amplitude " + q.amplitude_text + " at " + q.at_time;
    } else {
      throw SyntaxError("expected prob, condprob, consistency or amplitude",
                        peek().line, peek().col);
    }

    if (at_ident("expect")) {
      take();
      if (q.kind == Query::Kind::Consistency) {
        const Token& vt = peek();
        const std::string v = expect_ident();
        if (v == "consistent")
          q.expect_consistent = true;
        else if (v == "inconsistent")
          q.expect_consistent = false;
        else
          throw SyntaxError("expected 'consistent' or 'inconsistent'", vt.line,
                            vt.col);
      } else {
        const Token& vt = peek();
        const Complex c = parse_coeff();
        if (q.kind != Query::Kind::Amplitude) {
          if (std::abs(c.imag()) > 0.0 || c.real() < 0.0 || c.real() > 1.0)
            fail_invariant(vt,
                           "expected probability must be a real in [0, 1]");
        }
        q.expected = c;
      }
    }
    model_.queries.push_back(std::move(q));
  }

  std::string expect_family_name() {
    const Token& ft = peek();
    const std::string name = expect_ident();
    if (!model_.families.count(name))
      fail_reference(ft, "unknown family " + name);
    return name;
  }

  std::vector<Event> parse_events(const std::string& family) {
    std::vector<Event> events;
    while (true) {
      const Token& et = peek();
      Event e;
      e.projector = expect_ident();
      expect_punct("@");
      e.time = expect_ident();
      // Resolve the event inside the family now so reports never fail late.
      const Family& fam = *model_.families.at(family);
      bool found = false;
      for (std::size_t i = 0; i < fam.context_count() && !found; ++i) {
        if (fam.context(i).time() != e.time) continue;
        for (std::size_t k = 0; k < fam.context(i).size(); ++k)
          if (fam.context(i).projector_name(k) == e.projector) found = true;
        if (!found)
          fail_reference(et, "family " + family + " has no projector " +
                                 e.projector + " at " + e.time);
      }
      if (!found)
        fail_reference(et, "family " + family + " has no context at " + e.time);
      events.push_back(std::move(e));
      if (!at_punct("&")) break;
      take();
    }
    return events;
  }

  static std::string events_text(const std::vector<Event>& events) {
    std::string out;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (i) out += " & ";
      out += events[i].projector + "@" + events[i].time;
    }
    return out;
  }

  // --- state expressions --------------------------------------------------

  struct ExprResult {
    LocalState state;
    std::string text;
  };

  Complex parse_coeff() {
    const Token& t = peek();
    if (at_punct("-")) {
      take();
      return -parse_coeff();
    }
    if (at_punct("(")) {
      take();
      const Complex inner = parse_coeff();
      expect_punct(")");
      expect_punct("*");
      expect_keyword("i");
      return inner * Complex(0, 1);
    }
    if (at_ident("sqrt")) {
      take();
      expect_punct("(");
      const double r = parse_ratio();
      expect_punct(")");
      if (r < 0.0)
        throw SyntaxError("sqrt of a negative value", t.line, t.col);
      return Complex(std::sqrt(r), 0);
    }
    if (t.type == Token::Type::Number) return Complex(parse_ratio(), 0);
    throw SyntaxError("expected a coefficient", t.line, t.col);
  }

  double parse_ratio() {
    const Token& t = peek();
    if (t.type != Token::Type::Number)
      throw SyntaxError("expected a number", t.line, t.col);
    double v = take().number;
    if (at_punct("/")) {
      take();
      const Token& d = peek();
      if (d.type != Token::Type::Number)
        throw SyntaxError("expected a denominator", d.line, d.col);
      if (d.number == 0.0)
        throw SyntaxError("division by zero", d.line, d.col);
      v /= take().number;
    }
    return v;
  }

  LocalState parse_ket() {
    const Token& open = expect_punct("|");
    std::vector<std::pair<std::size_t, Eigen::Index>> hits;
    while (true) {
      const Token& lt = peek();
      const std::string label = expect_ident();
      std::optional<CompositeSpace::LabelHit> hit;
      try {
        hit = model_.space->find_label(label);
      } catch (const InvariantViolation& e) {
        fail_invariant(lt, e.what());
      }
      if (!hit) fail_reference(lt, "unknown basis label " + label);
      for (const auto& [p, _] : hits)
        if (p == hit->position)
          fail_invariant(lt, "two labels of factor " +
                                 model_.space->factor(hit->position).name +
                                 " in one ket");
      hits.emplace_back(hit->position, hit->index);
      if (!at_punct(",")) break;
      take();
    }
    expect_punct(">");
    std::sort(hits.begin(), hits.end());
    LocalState s;
    std::vector<Eigen::Index> dims, digits;
    for (const auto& [p, idx] : hits) {
      s.positions.push_back(p);
      dims.push_back(model_.space->factor(p).dim);
      digits.push_back(idx);
    }
    s.vec = Vector::Zero(indexing::total(dims));
    s.vec(indexing::compose(dims, digits)) = Complex(1, 0);
    (void)open;
    return s;
  }

  std::string ket_text(const LocalState& s) const {
    // Canonical spelling: labels in factor order.
    std::vector<Eigen::Index> dims;
    for (std::size_t p : s.positions) dims.push_back(model_.space->factor(p).dim);
    Eigen::Index nz = -1;
    for (Eigen::Index k = 0; k < s.vec.size(); ++k)
      if (s.vec(k) != Complex(0, 0)) nz = k;
    const std::vector<Eigen::Index> digits = indexing::decompose(nz, dims);
    std::string out = "|";
    for (std::size_t k = 0; k < s.positions.size(); ++k) {
      if (k) out += ",";
      out += model_.space->factor(s.positions[k])
                 .basis_labels[static_cast<std::size_t>(digits[k])];
    }
    return out + ">";
  }

  ExprResult parse_atom() {
    const Token& t = peek();
    if (at_punct("|")) {
      LocalState s = parse_ket();
      std::string text = ket_text(s);
      return ExprResult{std::move(s), std::move(text)};
    }
    if (t.type == Token::Type::Ident) {
      if (reserved_words().count(t.text))
        throw SyntaxError("expected a ket or state name", t.line, t.col);
      const std::string name = take().text;
      const LocalState* s = model_.find_state(name);
      if (!s) fail_reference(t, "unknown state " + name);
      return ExprResult{*s, name};
    }
    throw SyntaxError("expected a ket or state name", t.line, t.col);
  }

  LocalState tensor_merge(const Token& at, const LocalState& a,
                          const LocalState& b) {
    std::vector<std::size_t> all = a.positions;
    for (std::size_t p : b.positions) {
      if (std::find(a.positions.begin(), a.positions.end(), p) !=
          a.positions.end())
        fail_invariant(at, "factor " + model_.space->factor(p).name +
                               " covered twice in tensor product");
      all.push_back(p);
    }
    std::sort(all.begin(), all.end());

    std::vector<Eigen::Index> dims_u, strides_u(all.size(), 1);
    for (std::size_t p : all) dims_u.push_back(model_.space->factor(p).dim);
    for (std::size_t k = all.size(); k-- > 1;)
      strides_u[k - 1] = strides_u[k] * dims_u[k];

    auto table = [&](const LocalState& s) {
      std::vector<Eigen::Index> dims, strides;
      for (std::size_t p : s.positions) {
        const std::size_t at_u = static_cast<std::size_t>(
            std::find(all.begin(), all.end(), p) - all.begin());
        dims.push_back(model_.space->factor(p).dim);
        strides.push_back(strides_u[at_u]);
      }
      return indexing::contribution_table(dims, strides);
    };
    const std::vector<Eigen::Index> ca = table(a), cb = table(b);

    LocalState out;
    out.positions = std::move(all);
    out.vec = Vector::Zero(indexing::total(dims_u));
    for (Eigen::Index ia = 0; ia < a.vec.size(); ++ia) {
      if (a.vec(ia) == Complex(0, 0)) continue;
      for (Eigen::Index ib = 0; ib < b.vec.size(); ++ib)
        out.vec(ca[static_cast<std::size_t>(ia)] +
                cb[static_cast<std::size_t>(ib)]) = a.vec(ia) * b.vec(ib);
    }
    return out;
  }

  ExprResult parse_product() {
    const Token& at = peek();
    ExprResult r = parse_atom();
    while (at_punct("(")) {
      // the only '(' in product position is the (x) tensor marker
      take();
      expect_keyword("x");
      expect_punct(")");
      ExprResult next = parse_atom();
      r.state = tensor_merge(at, r.state, next.state);
      r.text += " (x) " + next.text;
    }
    return r;
  }

  ExprResult parse_term() {
    const Token& t = peek();
    Complex c(1, 0);
    bool has_coeff = false;
    if (t.type == Token::Type::Number || at_ident("sqrt") || at_punct("(") ||
        at_punct("-")) {
      c = parse_coeff();
      has_coeff = true;
    }
    ExprResult r = parse_product();
    r.state.vec *= c;
    if (has_coeff) r.text = detail::coeff_literal(c) + " " + r.text;
    return r;
  }

  ExprResult parse_expr() {
    const Token& start = peek();
    ExprResult r = parse_term();
    while (at_punct("+") || at_punct("-")) {
      const bool minus = take().text == "-";
      ExprResult next = parse_term();
      if (next.state.positions != r.state.positions)
        fail_invariant(start, "terms live on different factor subsets");
      if (minus) {
        r.state.vec -= next.state.vec;
        r.text += " - " + next.text;
      } else {
        r.state.vec += next.state.vec;
        r.text += " + " + next.text;
      }
    }
    return r;
  }

  void finalize() {
    if (!model_.queries.empty()) {
      const Token& end = tokens_.back();
      if (model_.initial.size() == 0)
        fail_invariant(end, "queries need an 'initial' declaration");
      if (!model_.schedule) require_schedule(end);
    }
    if (!model_.schedule && model_.space && grid_)
      model_.schedule = std::make_shared<UnitarySchedule>(model_.space, *grid_);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ScenarioModel model_;
  std::vector<Factor> factors_;
  std::optional<TimeGrid> grid_;
};

}  // namespace

const LocalState* ScenarioModel::find_state(const std::string& name) const {
  for (const StateDecl& s : states)
    if (s.name == name) return &s.value;
  return nullptr;
}

ScenarioModel parse_scenario(std::string_view text, std::string name) {
  return Parser(text, std::move(name)).parse();
}

}  // namespace histq
