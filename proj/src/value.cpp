#include "bcheck/value.hpp"

#include <algorithm>
#include <sstream>

namespace bcheck {

Value Value::boolean(bool v) {
  Value r;
  r.kind = ValueKind::Bool;
  r.b = v;
  return r;
}

Value Value::integer(long long v) {
  Value r;
  r.kind = ValueKind::Int;
  r.n = v;
  return r;
}

Value Value::elem(std::string carrier, int index, std::string name) {
  Value r;
  r.kind = ValueKind::Elem;
  r.carrier = std::move(carrier);
  r.index = index;
  r.name = name.empty() ? r.carrier + std::to_string(index + 1) : std::move(name);
  return r;
}

Value Value::pair(Value left, Value right) {
  Value r;
  r.kind = ValueKind::Pair;
  r.items.push_back(std::move(left));
  r.items.push_back(std::move(right));
  return r;
}

namespace {

int kind_rank(ValueKind k) {
  switch (k) {
    case ValueKind::Bool: return 0;
    case ValueKind::Int: return 1;
    case ValueKind::Elem: return 2;
    case ValueKind::Pair: return 3;
    case ValueKind::Set: return 4;
  }
  return 5;
}

// Shallow "same type" check used to reject heterogeneous set literals.
// Empty sets are compatible with any set type.
bool same_type(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ValueKind::Bool:
    case ValueKind::Int:
      return true;
    case ValueKind::Elem:
      return a.carrier == b.carrier;
    case ValueKind::Pair:
      return same_type(a.left(), b.left()) && same_type(a.right(), b.right());
    case ValueKind::Set:
      if (a.items.empty() || b.items.empty()) return true;
      return same_type(a.items.front(), b.items.front());
  }
  return false;
}

}  // namespace

Ordering compare(const Value& a, const Value& b) {
  int ra = kind_rank(a.kind), rb = kind_rank(b.kind);
  if (ra != rb) return ra < rb ? Ordering::LT : Ordering::GT;
  switch (a.kind) {
    case ValueKind::Bool:
      if (a.b == b.b) return Ordering::EQ;
      return !a.b ? Ordering::LT : Ordering::GT;
    case ValueKind::Int:
      if (a.n == b.n) return Ordering::EQ;
      return a.n < b.n ? Ordering::LT : Ordering::GT;
    case ValueKind::Elem: {
      if (a.carrier != b.carrier)
        return a.carrier < b.carrier ? Ordering::LT : Ordering::GT;
      if (a.index == b.index) return Ordering::EQ;
      return a.index < b.index ? Ordering::LT : Ordering::GT;
    }
    case ValueKind::Pair: {
      Ordering l = compare(a.left(), b.left());
      if (l != Ordering::EQ) return l;
      return compare(a.right(), b.right());
    }
    case ValueKind::Set: {
      if (a.items.size() != b.items.size())
        return a.items.size() < b.items.size() ? Ordering::LT : Ordering::GT;
      for (size_t i = 0; i < a.items.size(); ++i) {
        Ordering o = compare(a.items[i], b.items[i]);
        if (o != Ordering::EQ) return o;
      }
      return Ordering::EQ;
    }
  }
  return Ordering::EQ;
}

bool value_eq(const Value& a, const Value& b) { return compare(a, b) == Ordering::EQ; }
bool value_lt(const Value& a, const Value& b) { return compare(a, b) == Ordering::LT; }

Value Value::set(std::vector<Value> elems) {
  Value r;
  r.kind = ValueKind::Set;
  for (auto& e : elems) r.items.push_back(canonical(e));
  std::sort(r.items.begin(), r.items.end(), value_lt);
  r.items.erase(std::unique(r.items.begin(), r.items.end(), value_eq), r.items.end());
  for (size_t i = 1; i < r.items.size(); ++i) {
    if (!same_type(r.items[0], r.items[i]))
      throw HeterogeneousSet("set members have different types: " +
                             to_string(r.items[0]) + " vs " + to_string(r.items[i]));
  }
  return r;
}

Value canonical(const Value& v) {
  switch (v.kind) {
    case ValueKind::Bool:
    case ValueKind::Int:
    case ValueKind::Elem:
      return v;
    case ValueKind::Pair:
      return Value::pair(canonical(v.left()), canonical(v.right()));
    case ValueKind::Set:
      return Value::set(v.items);
  }
  return v;
}

std::string to_string(const Value& v) {
  switch (v.kind) {
    case ValueKind::Bool:
      return v.b ? "TRUE" : "FALSE";
    case ValueKind::Int:
      return std::to_string(v.n);
    case ValueKind::Elem:
      return v.name;
    case ValueKind::Pair:
      return "(" + to_string(v.left()) + "|->" + to_string(v.right()) + ")";
    case ValueKind::Set: {
      std::string s = "{";
      for (size_t i = 0; i < v.items.size(); ++i) {
        if (i) s += ",";
        s += to_string(v.items[i]);
      }
      return s + "}";
    }
  }
  return "?";
}

BType BType::prod(BType l, BType r) {
  BType t;
  t.kind = TypeKind::Prod;
  t.args.push_back(std::move(l));
  t.args.push_back(std::move(r));
  return t;
}

BType BType::pow(BType inner) {
  BType t;
  t.kind = TypeKind::Pow;
  t.args.push_back(std::move(inner));
  return t;
}

bool operator==(const BType& a, const BType& b) {
  if (a.kind != b.kind || a.carrier != b.carrier) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!(a.args[i] == b.args[i])) return false;
  return true;
}

std::string to_string(const BType& t) {
  switch (t.kind) {
    case TypeKind::Bool: return "BOOL";
    case TypeKind::Int: return "INTEGER";
    case TypeKind::Enum: return t.carrier;
    case TypeKind::Prod: {
      auto paren = [](const BType& c) {
        std::string s = to_string(c);
        return c.kind == TypeKind::Prod ? "(" + s + ")" : s;
      };
      return paren(t.left()) + "*" + to_string(t.right());
    }
    case TypeKind::Pow: return "POW(" + to_string(t.inner()) + ")";
  }
  return "?";
}

Scope Scope::defaults() {
  Scope s;
  s.carriers["ID"] = 2;
  return s;
}

int Scope::carrier_size(const std::string& c) const {
  auto it = carriers.find(c);
  if (it == carriers.end())
    throw std::runtime_error("unknown carrier set: " + c);
  return it->second;
}

std::string Scope::elem_name(const std::string& c, int i) const {
  auto it = elem_names.find(c);
  if (it != elem_names.end() && i < (int)it->second.size()) return it->second[i];
  return c + std::to_string(i + 1);
}

Value Scope::elem_value(const std::string& c, int i) const {
  return Value::elem(c, i, elem_name(c, i));
}

namespace {

long long checked_mul(long long a, long long b, long long limit) {
  if (a > 0 && b > 0 && a > limit / b) throw ScopeOverflow("enumeration too large");
  return a * b;
}

long long subset_count(long long n, int max_card, long long limit) {
  long long total = 0;
  long long binom = 1;  // C(n, k)
  for (int k = 0; k <= n && k <= max_card; ++k) {
    total += binom;
    if (total > limit) throw ScopeOverflow("enumeration too large");
    if (k < n) {
      // C(n,k+1) = C(n,k)*(n-k)/(k+1); overflow-guarded by the limit check
      if (binom > limit) throw ScopeOverflow("enumeration too large");
      binom = binom * (n - k) / (k + 1);
    }
  }
  return total;
}

}  // namespace

long long enumeration_size(const BType& t, const Scope& s) {
  long long limit = s.enum_hard_limit;
  switch (t.kind) {
    case TypeKind::Bool:
      return 2;
    case TypeKind::Int:
      return s.int_hi - s.int_lo + 1;
    case TypeKind::Enum:
      return s.carrier_size(t.carrier);
    case TypeKind::Prod:
      return checked_mul(enumeration_size(t.left(), s),
                         enumeration_size(t.right(), s), limit);
    case TypeKind::Pow:
      return subset_count(enumeration_size(t.inner(), s), s.max_set_card, limit);
  }
  return 0;
}

namespace {

// Subsets of `universe` with cardinality <= max_card, in canonical set order
// (by size, then lexicographically; universe is already sorted).
void emit_subsets(const std::vector<Value>& universe, int max_card,
                  std::vector<Value>& out) {
  int n = (int)universe.size();
  std::vector<int> idx;
  for (int k = 0; k <= n && k <= max_card; ++k) {
    idx.assign(k, 0);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<Value> members;
      members.reserve(k);
      for (int i : idx) members.push_back(universe[i]);
      out.push_back(Value::set(std::move(members)));
      // next k-combination in lexicographic order
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

}  // namespace

std::vector<Value> enumerate_type(const BType& t, const Scope& s) {
  enumeration_size(t, s);  // hard-limit check
  std::vector<Value> out;
  switch (t.kind) {
    case TypeKind::Bool:
      out.push_back(Value::boolean(false));
      out.push_back(Value::boolean(true));
      break;
    case TypeKind::Int:
      for (long long v = s.int_lo; v <= s.int_hi; ++v)
        out.push_back(Value::integer(v));
      break;
    case TypeKind::Enum: {
      int n = s.carrier_size(t.carrier);
      for (int i = 0; i < n; ++i) out.push_back(s.elem_value(t.carrier, i));
      break;
    }
    case TypeKind::Prod: {
      auto ls = enumerate_type(t.left(), s);
      auto rs = enumerate_type(t.right(), s);
      for (const auto& l : ls)
        for (const auto& r : rs) out.push_back(Value::pair(l, r));
      break;
    }
    case TypeKind::Pow: {
      auto inner = enumerate_type(t.inner(), s);
      emit_subsets(inner, s.max_set_card, out);
      break;
    }
  }
  return out;
}

}  // namespace bcheck
