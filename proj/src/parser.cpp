#include "bcheck/parser.hpp"

#include <map>

namespace bcheck {

// Binding strengths.  Comparisons sit at 60; function/relation arrows bind
// between comparisons and the relational operators so that
// "ff : SS +-> TT \/ UU" reads as ff : ((SS +-> TT) \/ UU) only via the
// relational level, never across the colon.
namespace prec {
constexpr int kEquiv = 10;
constexpr int kImplies = 20;
constexpr int kOr = 30;
constexpr int kAnd = 40;
constexpr int kCmp = 60;
constexpr int kArrow = 65;
constexpr int kRel = 70;
constexpr int kMaplet = 80;
constexpr int kInterval = 90;
constexpr int kAdd = 100;
constexpr int kMul = 110;
constexpr int kPowOp = 120;
constexpr int kUMinus = 130;
constexpr int kPostfix = 140;
constexpr int kAtom = 1000;
}  // namespace prec

namespace {

const std::map<Nk, OpInfo>& infix_table() {
  static const std::map<Nk, OpInfo> t = {
      {Nk::PEquiv, {"<=>", prec::kEquiv, Assoc::None}},
      {Nk::PImplies, {"=>", prec::kImplies, Assoc::None}},
      {Nk::POr, {"or", prec::kOr, Assoc::Left}},
      {Nk::PAnd, {"&", prec::kAnd, Assoc::Left}},
      {Nk::PEq, {"=", prec::kCmp, Assoc::None}},
      {Nk::PNeq, {"/=", prec::kCmp, Assoc::None}},
      {Nk::PMember, {":", prec::kCmp, Assoc::None}},
      {Nk::PNotMember, {"/:", prec::kCmp, Assoc::None}},
      {Nk::PSubset, {"<:", prec::kCmp, Assoc::None}},
      {Nk::PNotSubset, {"/<:", prec::kCmp, Assoc::None}},
      {Nk::PStrictSubset, {"<<:", prec::kCmp, Assoc::None}},
      {Nk::PNotStrictSubset, {"/<<:", prec::kCmp, Assoc::None}},
      {Nk::PLt, {"<", prec::kCmp, Assoc::None}},
      {Nk::PLe, {"<=", prec::kCmp, Assoc::None}},
      {Nk::PGt, {">", prec::kCmp, Assoc::None}},
      {Nk::PGe, {">=", prec::kCmp, Assoc::None}},
      {Nk::ERelSpace, {"<->", prec::kArrow, Assoc::Left}},
      {Nk::EPartialFn, {"+->", prec::kArrow, Assoc::Left}},
      {Nk::ETotalFn, {"-->", prec::kArrow, Assoc::Left}},
      {Nk::EPartialInj, {">+>", prec::kArrow, Assoc::Left}},
      {Nk::ETotalInj, {">->", prec::kArrow, Assoc::Left}},
      {Nk::EPartialSurj, {"+->>", prec::kArrow, Assoc::Left}},
      {Nk::ETotalSurj, {"-->>", prec::kArrow, Assoc::Left}},
      {Nk::EBijection, {">->>", prec::kArrow, Assoc::Left}},
      {Nk::EUnion, {"\\/", prec::kRel, Assoc::Left}},
      {Nk::EInter, {"/\\", prec::kRel, Assoc::Left}},
      {Nk::EDiff, {"\\", prec::kRel, Assoc::Left}},
      {Nk::EOverride, {"<+", prec::kRel, Assoc::Left}},
      {Nk::EDomRestr, {"<|", prec::kRel, Assoc::Left}},
      {Nk::ERanRestr, {"|>", prec::kRel, Assoc::Left}},
      {Nk::EDomSub, {"<<|", prec::kRel, Assoc::Left}},
      {Nk::ERanSub, {"|>>", prec::kRel, Assoc::Left}},
      {Nk::ECompose, {";", prec::kRel, Assoc::Left}},
      {Nk::EConcat, {"^", prec::kRel, Assoc::Left}},
      {Nk::EMaplet, {"|->", prec::kMaplet, Assoc::Left}},
      {Nk::EInterval, {"..", prec::kInterval, Assoc::None}},
      {Nk::EPlus, {"+", prec::kAdd, Assoc::Left}},
      {Nk::EMinus, {"-", prec::kAdd, Assoc::Left}},
      {Nk::EMul, {"*", prec::kMul, Assoc::Left}},
      {Nk::EDiv, {"/", prec::kMul, Assoc::Left}},
      {Nk::EMod, {"mod", prec::kMul, Assoc::Left}},
      {Nk::EPowOp, {"**", prec::kPowOp, Assoc::Right}},
  };
  return t;
}

const std::map<std::string, Nk>& expr_binop_tokens() {
  static const std::map<std::string, Nk> t = [] {
    std::map<std::string, Nk> m;
    for (const auto& [k, info] : infix_table())
      if (!is_pred_kind(k)) m[info.symbol] = k;
    return m;
  }();
  return t;
}

const std::map<std::string, Nk>& comparison_tokens() {
  static const std::map<std::string, Nk> t = [] {
    std::map<std::string, Nk> m;
    for (const auto& [k, info] : infix_table())
      if (is_comparison(k)) m[info.symbol] = k;
    return m;
  }();
  return t;
}

const std::map<std::string, Nk> kPrefixCalls = {
    {"POW", Nk::EPow},     {"POW1", Nk::EPow1},   {"FIN", Nk::EFin},
    {"FIN1", Nk::EFin1},   {"dom", Nk::EDom},     {"ran", Nk::ERan},
    {"card", Nk::ECard},   {"union", Nk::EGenUnion}, {"inter", Nk::EGenInter},
    {"min", Nk::EMin},     {"max", Nk::EMax},     {"id", Nk::EIdFn},
    {"seq", Nk::ESeqSpace}, {"size", Nk::ESize},  {"first", Nk::EFirst},
    {"last", Nk::ELast},   {"front", Nk::EFront}, {"tail", Nk::ETail},
    {"rev", Nk::ERev},
};

const std::map<std::string, Nk> kConstSets = {
    {"INTEGER", Nk::EIntegerSet}, {"INT", Nk::EIntSet},
    {"NATURAL", Nk::ENaturalSet}, {"NAT", Nk::ENatSet},
    {"NATURAL1", Nk::ENatural1Set}, {"NAT1", Nk::ENat1Set},
    {"BOOL", Nk::EBoolSet},
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  Ast pred_toplevel() {
    Ast p = pred(prec::kEquiv);
    expect_end();
    return p;
  }

  Ast expr_toplevel() {
    bare_compose_ok_ = true;
    Ast e = expr(prec::kArrow);
    expect_end();
    return e;
  }

  Machine machine() {
    Machine m;
    expect_kw("MACHINE");
    m.name = expect_ident();
    if (at_kw("SETS")) {
      next();
      while (true) {
        std::string carrier = expect_ident();
        expect_sym("=");
        expect_sym("{");
        std::vector<std::string> elems;
        elems.push_back(expect_ident());
        while (at_sym(",")) {
          next();
          elems.push_back(expect_ident());
        }
        expect_sym("}");
        m.sets.emplace_back(std::move(carrier), std::move(elems));
        if (at_sym(";")) {
          next();
          continue;
        }
        break;
      }
    }
    if (at_kw("CONSTANTS")) {
      next();
      m.constants.push_back(expect_ident());
      while (at_sym(",")) {
        next();
        m.constants.push_back(expect_ident());
      }
    }
    expect_kw("PROPERTIES");
    m.properties = pred(prec::kEquiv);
    m.has_properties = true;
    if (at_kw("ASSERTIONS")) {
      next();
      m.assertions.push_back(pred(prec::kEquiv));
      while (at_sym(";")) {
        next();
        m.assertions.push_back(pred(prec::kEquiv));
      }
    }
    expect_kw("END");
    expect_end();
    return m;
  }

 private:
  std::vector<Token> toks_;
  size_t i_ = 0;
  // Bare ';' is forward composition only inside brackets or at the top level
  // of a standalone expression; elsewhere it separates assertions, so a
  // composition in a predicate needs parentheses.
  bool bare_compose_ok_ = false;
  int depth_ = 0;
  struct Depth {
    Parser* p;
    explicit Depth(Parser* p) : p(p) { ++p->depth_; }
    ~Depth() { --p->depth_; }
  };

  static bool pos_lt(Pos a, Pos b) {
    return a.line != b.line ? a.line < b.line : a.col < b.col;
  }

  const Token& cur() const { return toks_[i_]; }
  void next() { if (i_ + 1 < toks_.size()) ++i_; }
  bool at_sym(const std::string& s) const {
    return cur().kind == TokKind::Symbol && cur().text == s;
  }
  bool at_kw(const std::string& s) const {
    return cur().kind == TokKind::Keyword && cur().text == s;
  }
  void expect_sym(const std::string& s) {
    if (!at_sym(s)) throw ParseError(cur().pos, "expected '" + s + "'");
    next();
  }
  void expect_kw(const std::string& s) {
    if (!at_kw(s)) throw ParseError(cur().pos, "expected " + s);
    next();
  }
  std::string expect_ident() {
    if (cur().kind != TokKind::Ident)
      throw ParseError(cur().pos, "expected identifier");
    std::string s = cur().text;
    next();
    return s;
  }
  void expect_end() {
    if (cur().kind != TokKind::End)
      throw ParseError(cur().pos, "unexpected trailing input '" + cur().text + "'");
  }

  // ---- predicates -------------------------------------------------------

  Ast pred(int min_prec) {
    Ast lhs = pred_unary();
    while (true) {
      Nk k;
      if (!pred_connective(k)) break;
      const OpInfo& info = *infix_info(k);
      if (info.prec < min_prec) break;
      Pos pos = cur().pos;
      next();
      int submin = info.assoc == Assoc::Left ? info.prec + 1 : info.prec + 1;
      Ast rhs = pred(submin);
      Ast node(k, pos);
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(std::move(rhs));
      lhs = std::move(node);
      if (info.assoc == Assoc::None) {
        Nk k2;
        if (pred_connective(k2) && infix_info(k2)->prec == info.prec)
          throw ParseError(cur().pos,
                           std::string("'") + info.symbol + "' is non-associative");
      }
    }
    return lhs;
  }

  bool pred_connective(Nk& out) const {
    if (at_sym("&")) { out = Nk::PAnd; return true; }
    if (at_kw("or")) { out = Nk::POr; return true; }
    if (at_sym("=>")) { out = Nk::PImplies; return true; }
    if (at_sym("<=>")) { out = Nk::PEquiv; return true; }
    return false;
  }

  std::vector<std::string> binder_list() {
    std::vector<std::string> vars;
    if (at_sym("(")) {
      next();
      vars.push_back(expect_ident());
      while (at_sym(",")) {
        next();
        vars.push_back(expect_ident());
      }
      expect_sym(")");
    } else {
      vars.push_back(expect_ident());
    }
    return vars;
  }

  Ast pred_unary() {
    Pos pos = cur().pos;
    if (at_kw("not")) {
      next();
      expect_sym("(");
      Ast body;
      {
        Depth d(this);
        body = pred(prec::kEquiv);
      }
      expect_sym(")");
      Ast node(Nk::PNot, pos);
      node.kids.push_back(std::move(body));
      return node;
    }
    if (at_sym("!") || at_sym("#")) {
      Nk k = at_sym("!") ? Nk::PForall : Nk::PExists;
      next();
      Ast node(k, pos);
      node.binders = binder_list();
      expect_sym(".");
      expect_sym("(");
      {
        Depth d(this);
        node.kids.push_back(pred(prec::kEquiv));
      }
      expect_sym(")");
      return node;
    }
    // Atomic: either an expression comparison, or a parenthesized predicate.
    size_t save = i_;
    try {
      Ast lhs = expr(prec::kArrow);
      Nk cmp;
      if (!comparison_for(cur().text, cmp) || cur().kind != TokKind::Symbol)
        throw ParseError(cur().pos, "expected comparison operator");
      Pos cpos = cur().pos;
      next();
      Ast rhs = expr(prec::kArrow);
      Nk cmp2;
      if (cur().kind == TokKind::Symbol && comparison_for(cur().text, cmp2))
        throw ParseError(cur().pos, "comparison operators are non-associative");
      Ast node(cmp, cpos);
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(std::move(rhs));
      return node;
    } catch (const ParseError& e1) {
      i_ = save;
      if (at_sym("(")) {
        try {
          next();
          Ast body;
          {
            Depth d(this);
            body = pred(prec::kEquiv);
          }
          expect_sym(")");
          return body;
        } catch (const ParseError& e2) {
          i_ = save;
          throw pos_lt(e1.pos, e2.pos) ? e2 : e1;
        }
      }
      // report whichever interpretation got further
      if (pos_lt(cur().pos, e1.pos)) throw;
      throw ParseError(cur().pos, "expected predicate");
    }
  }

  // ---- expressions ------------------------------------------------------

  Ast expr(int min_prec) {
    Ast lhs = expr_unary();
    while (true) {
      Nk k;
      if (cur().kind != TokKind::Symbol && cur().kind != TokKind::Keyword) break;
      if (!expr_binop_for(cur().text, k)) break;
      if (k == Nk::ECompose && !bare_compose_ok_ && depth_ == 0) break;
      const OpInfo& info = *infix_info(k);
      if (info.prec < min_prec) break;
      Pos pos = cur().pos;
      next();
      int submin = info.assoc == Assoc::Right ? info.prec : info.prec + 1;
      Ast rhs = expr(submin);
      Ast node(k, pos);
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(std::move(rhs));
      lhs = std::move(node);
      if (info.assoc == Assoc::None) {
        Nk k2;
        if ((cur().kind == TokKind::Symbol || cur().kind == TokKind::Keyword) &&
            expr_binop_for(cur().text, k2) && infix_info(k2)->prec == info.prec)
          throw ParseError(cur().pos,
                           std::string("'") + info.symbol + "' is non-associative");
      }
    }
    return lhs;
  }

  Ast expr_unary() {
    if (at_sym("-")) {
      Pos pos = cur().pos;
      next();
      Ast node(Nk::EUMinus, pos);
      node.kids.push_back(expr(prec::kUMinus));
      return node;
    }
    return expr_postfix();
  }

  Ast expr_postfix() {
    Ast e = expr_primary();
    while (true) {
      Pos pos = cur().pos;
      if (at_sym("~")) {
        next();
        Ast node(Nk::EInverse, pos);
        node.kids.push_back(std::move(e));
        e = std::move(node);
      } else if (at_sym("(")) {
        next();
        Ast arg;
        {
          Depth d(this);
          arg = tuple_expr();
        }
        expect_sym(")");
        Ast node(Nk::EApply, pos);
        node.kids.push_back(std::move(e));
        node.kids.push_back(std::move(arg));
        e = std::move(node);
      } else if (at_sym("[")) {
        next();
        Ast arg;
        {
          Depth d(this);
          arg = tuple_expr();
        }
        expect_sym("]");
        Ast node(Nk::EImage, pos);
        node.kids.push_back(std::move(e));
        node.kids.push_back(std::move(arg));
        e = std::move(node);
      } else {
        break;
      }
    }
    return e;
  }

  // expr (',' expr)*  folded into left-nested maplets: (a,b,c) = a|->b|->c
  Ast tuple_expr() {
    Ast e = expr(prec::kArrow);
    while (at_sym(",")) {
      Pos pos = cur().pos;
      next();
      Ast node(Nk::EMaplet, pos);
      node.kids.push_back(std::move(e));
      node.kids.push_back(expr(prec::kArrow));
      e = std::move(node);
    }
    return e;
  }

  Ast expr_primary() {
    Pos pos = cur().pos;
    if (cur().kind == TokKind::Int) {
      Ast node(Nk::EInt, pos);
      node.num = std::stoll(cur().text);
      next();
      return node;
    }
    if (cur().kind == TokKind::Keyword) {
      const std::string& w = cur().text;
      if (w == "TRUE" || w == "FALSE") {
        Ast node(Nk::EBool, pos);
        node.bval = (w == "TRUE");
        next();
        return node;
      }
      if (auto it = kConstSets.find(w); it != kConstSets.end()) {
        next();
        return Ast(it->second, pos);
      }
      if (auto it = kPrefixCalls.find(w); it != kPrefixCalls.end()) {
        next();
        expect_sym("(");
        Ast node(it->second, pos);
        {
          Depth d(this);
          node.kids.push_back(expr(prec::kArrow));
        }
        expect_sym(")");
        return node;
      }
      throw ParseError(pos, "unexpected keyword '" + w + "'");
    }
    if (cur().kind == TokKind::Ident) {
      Ast node(Nk::EIdent, pos);
      node.name = cur().text;
      next();
      return node;
    }
    if (at_sym("%")) {
      next();
      Ast node(Nk::ELambda, pos);
      node.binders = binder_list();
      expect_sym(".");
      expect_sym("(");
      {
        Depth d(this);
        node.kids.push_back(pred(prec::kEquiv));
        expect_sym("|");
        node.kids.push_back(expr(prec::kArrow));
      }
      expect_sym(")");
      return node;
    }
    if (at_sym("{")) {
      next();
      if (at_sym("}")) {
        next();
        return Ast(Nk::ESetLit, pos);
      }
      if (comprehension_ahead()) {
        Ast node(Nk::EComprehension, pos);
        node.binders.push_back(expect_ident());
        while (at_sym(",")) {
          next();
          node.binders.push_back(expect_ident());
        }
        expect_sym("|");
        {
          Depth d(this);
          node.kids.push_back(pred(prec::kEquiv));
        }
        expect_sym("}");
        return node;
      }
      Ast node(Nk::ESetLit, pos);
      {
        Depth d(this);
        node.kids.push_back(expr(prec::kArrow));
        while (at_sym(",")) {
          next();
          node.kids.push_back(expr(prec::kArrow));
        }
      }
      expect_sym("}");
      return node;
    }
    if (at_sym("(")) {
      next();
      Ast e;
      {
        Depth d(this);
        e = tuple_expr();
      }
      expect_sym(")");
      return e;
    }
    throw ParseError(pos, "expected expression");
  }

  // After '{': Ident (',' Ident)* '|' means a comprehension.
  bool comprehension_ahead() const {
    size_t j = i_;
    if (toks_[j].kind != TokKind::Ident) return false;
    ++j;
    while (toks_[j].kind == TokKind::Symbol && toks_[j].text == ",") {
      ++j;
      if (toks_[j].kind != TokKind::Ident) return false;
      ++j;
    }
    return toks_[j].kind == TokKind::Symbol && toks_[j].text == "|";
  }
};

}  // namespace

const OpInfo* infix_info(Nk k) {
  auto it = infix_table().find(k);
  return it == infix_table().end() ? nullptr : &it->second;
}

bool expr_binop_for(const std::string& tok, Nk& out) {
  auto it = expr_binop_tokens().find(tok);
  if (it == expr_binop_tokens().end()) return false;
  out = it->second;
  return true;
}

bool comparison_for(const std::string& tok, Nk& out) {
  auto it = comparison_tokens().find(tok);
  if (it == comparison_tokens().end()) return false;
  out = it->second;
  return true;
}

Ast parse_pred(const std::string& text) { return Parser(text).pred_toplevel(); }
Ast parse_expr(const std::string& text) { return Parser(text).expr_toplevel(); }
Machine parse_machine(const std::string& text) { return Parser(text).machine(); }

}  // namespace bcheck
