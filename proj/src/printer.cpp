#include "bcheck/printer.hpp"

#include <cctype>
#include <map>

#include "bcheck/parser.hpp"

namespace bcheck {

namespace {

constexpr int kAtomPrec = 1000;
constexpr int kUMinusPrec = 130;
constexpr int kPostfixPrec = 140;
constexpr int kSpacedMax = 70;  // levels up to the relational group get spaces

const char* prefix_call_name(Nk k) {
  switch (k) {
    case Nk::EPow: return "POW";
    case Nk::EPow1: return "POW1";
    case Nk::EFin: return "FIN";
    case Nk::EFin1: return "FIN1";
    case Nk::EDom: return "dom";
    case Nk::ERan: return "ran";
    case Nk::ECard: return "card";
    case Nk::EGenUnion: return "union";
    case Nk::EGenInter: return "inter";
    case Nk::EMin: return "min";
    case Nk::EMax: return "max";
    case Nk::EIdFn: return "id";
    case Nk::ESeqSpace: return "seq";
    case Nk::ESize: return "size";
    case Nk::EFirst: return "first";
    case Nk::ELast: return "last";
    case Nk::EFront: return "front";
    case Nk::ETail: return "tail";
    case Nk::ERev: return "rev";
    default: return nullptr;
  }
}

const char* const_set_name(Nk k) {
  switch (k) {
    case Nk::EIntegerSet: return "INTEGER";
    case Nk::EIntSet: return "INT";
    case Nk::ENaturalSet: return "NATURAL";
    case Nk::ENatSet: return "NAT";
    case Nk::ENatural1Set: return "NATURAL1";
    case Nk::ENat1Set: return "NAT1";
    case Nk::EBoolSet: return "BOOL";
    default: return nullptr;
  }
}

struct Printed {
  std::string text;
  int prec;
};

std::string binder_text(const std::vector<std::string>& vars) {
  if (vars.size() == 1) return vars[0];
  std::string s = "(";
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) s += ",";
    s += vars[i];
  }
  return s + ")";
}

Printed print_node(const Ast& a);

std::string child(const Ast& c, int required) {
  Printed p = print_node(c);
  if (p.prec < required) return "(" + p.text + ")";
  return p.text;
}

Printed print_infix(const Ast& a, const OpInfo& info) {
  int lreq = info.assoc == Assoc::Left ? info.prec : info.prec + 1;
  int rreq = info.assoc == Assoc::Right ? info.prec : info.prec + 1;
  bool spaced = info.prec <= kSpacedMax ||
                std::isalpha((unsigned char)info.symbol[0]);
  std::string op = spaced ? std::string(" ") + info.symbol + " "
                          : std::string(info.symbol);
  // Bare ';' only parses inside brackets, so composition always reports the
  // weakest strength and gets parenthesized as a child.
  int out = a.kind == Nk::ECompose ? 1 : info.prec;
  return {child(a.kids[0], lreq) + op + child(a.kids[1], rreq), out};
}

Printed print_node(const Ast& a) {
  if (const OpInfo* info = infix_info(a.kind)) return print_infix(a, *info);
  switch (a.kind) {
    case Nk::PNot:
      return {"not(" + print_node(a.kids[0]).text + ")", kAtomPrec};
    case Nk::PForall:
    case Nk::PExists: {
      std::string q = a.kind == Nk::PForall ? "!" : "#";
      return {q + binder_text(a.binders) + ".(" + print_node(a.kids[0]).text + ")",
              kAtomPrec};
    }
    case Nk::EInt:
      return {std::to_string(a.num), kAtomPrec};
    case Nk::EBool:
      return {a.bval ? "TRUE" : "FALSE", kAtomPrec};
    case Nk::EIdent:
      return {a.name, kAtomPrec};
    case Nk::ESetLit: {
      std::string s = "{";
      for (size_t i = 0; i < a.kids.size(); ++i) {
        if (i) s += ",";
        s += print_node(a.kids[i]).text;
      }
      return {s + "}", kAtomPrec};
    }
    case Nk::EComprehension: {
      std::string s = "{";
      for (size_t i = 0; i < a.binders.size(); ++i) {
        if (i) s += ",";
        s += a.binders[i];
      }
      return {s + "|" + print_node(a.kids[0]).text + "}", kAtomPrec};
    }
    case Nk::ELambda:
      return {"%" + binder_text(a.binders) + ".(" + print_node(a.kids[0]).text +
                  "|" + print_node(a.kids[1]).text + ")",
              kAtomPrec};
    case Nk::EUMinus:
      return {"-" + child(a.kids[0], kUMinusPrec), kUMinusPrec};
    case Nk::EInverse:
      return {child(a.kids[0], kPostfixPrec) + "~", kPostfixPrec};
    case Nk::EApply:
      return {child(a.kids[0], kPostfixPrec) + "(" + print_node(a.kids[1]).text +
                  ")",
              kPostfixPrec};
    case Nk::EImage:
      return {child(a.kids[0], kPostfixPrec) + "[" + print_node(a.kids[1]).text +
                  "]",
              kPostfixPrec};
    default:
      break;
  }
  if (const char* name = prefix_call_name(a.kind))
    return {std::string(name) + "(" + print_node(a.kids[0]).text + ")", kAtomPrec};
  if (const char* name = const_set_name(a.kind))
    return {name, kAtomPrec};
  return {"<?>", kAtomPrec};
}

}  // namespace

std::string pretty_print(const Ast& ast) { return print_node(ast).text; }

std::string pretty_print(const Machine& m) {
  std::string s = "MACHINE " + m.name + "\n";
  if (!m.sets.empty()) {
    s += "SETS ";
    for (size_t i = 0; i < m.sets.size(); ++i) {
      if (i) s += "; ";
      s += m.sets[i].first + "={";
      for (size_t j = 0; j < m.sets[i].second.size(); ++j) {
        if (j) s += ",";
        s += m.sets[i].second[j];
      }
      s += "}";
    }
    s += "\n";
  }
  if (!m.constants.empty()) {
    s += "CONSTANTS ";
    for (size_t i = 0; i < m.constants.size(); ++i) {
      if (i) s += ", ";
      s += m.constants[i];
    }
    s += "\n";
  }
  s += "PROPERTIES " + pretty_print(m.properties) + "\n";
  if (!m.assertions.empty()) {
    s += "ASSERTIONS ";
    for (size_t i = 0; i < m.assertions.size(); ++i) {
      if (i) s += "; ";
      s += pretty_print(m.assertions[i]);
    }
    s += "\n";
  }
  s += "END\n";
  return s;
}

bool machine_eq(const Machine& a, const Machine& b) {
  if (a.name != b.name || a.sets != b.sets || a.constants != b.constants ||
      a.assertions.size() != b.assertions.size())
    return false;
  if (!ast_eq(a.properties, b.properties)) return false;
  for (size_t i = 0; i < a.assertions.size(); ++i)
    if (!ast_eq(a.assertions[i], b.assertions[i])) return false;
  return true;
}

RoundtripReport roundtrip_check(const std::string& text) {
  RoundtripReport r;
  Ast a1 = parse_pred(text);
  r.printed = pretty_print(a1);
  Ast a2 = parse_pred(r.printed);
  r.reprinted = pretty_print(a2);
  if (r.printed != r.reprinted) {
    r.divergence = "printer is not idempotent";
    return r;
  }
  if (!ast_eq(a1, a2)) {
    r.divergence = "re-parse differs structurally";
    return r;
  }
  r.pass = true;
  return r;
}

RoundtripReport roundtrip_check_machine(const std::string& text) {
  RoundtripReport r;
  Machine m1 = parse_machine(text);
  r.printed = pretty_print(m1);
  Machine m2 = parse_machine(r.printed);
  r.reprinted = pretty_print(m2);
  if (r.printed != r.reprinted) {
    r.divergence = "printer is not idempotent";
    return r;
  }
  if (!machine_eq(m1, m2)) {
    r.divergence = "re-parse differs structurally";
    return r;
  }
  r.pass = true;
  return r;
}

}  // namespace bcheck
