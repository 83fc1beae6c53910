// Copyright 2026 The ldm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldm/typing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "ldm/syntax.hpp"

namespace ldm {

QTypePtr QType::qubits(unsigned n) {
  auto t = std::make_shared<QType>();
  t->kind = Kind::Qubits;
  t->n = n;
  return t;
}

QTypePtr QType::meas_result(unsigned m, unsigned n) {
  if (m > n) throw Error("measurement type (" + std::to_string(m) + "," + std::to_string(n) + ") needs m <= n");
  auto t = std::make_shared<QType>();
  t->kind = Kind::MeasResult;
  t->m = m;
  t->n = n;
  return t;
}

QTypePtr QType::arrow(QTypePtr dom, QTypePtr cod) {
  auto t = std::make_shared<QType>();
  t->kind = Kind::Arrow;
  t->dom = std::move(dom);
  t->cod = std::move(cod);
  return t;
}

bool operator==(const QType& a, const QType& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case QType::Kind::Qubits: return a.n == b.n;
    case QType::Kind::MeasResult: return a.m == b.m && a.n == b.n;
    case QType::Kind::Arrow: return *a.dom == *b.dom && *a.cod == *b.cod;
  }
  return false;
}

std::string to_string(const QType& t) {
  switch (t.kind) {
    case QType::Kind::Qubits: return std::to_string(t.n);
    case QType::Kind::MeasResult: return "(" + std::to_string(t.m) + "," + std::to_string(t.n) + ")";
    case QType::Kind::Arrow: {
      std::string d = to_string(*t.dom);
      if (t.dom->kind == QType::Kind::Arrow) d = "(" + d + ")";
      return d + " -o " + to_string(*t.cod);
    }
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Internal types: qubit counts are linear expressions over size variables.

struct Lin {
  long c = 0;
  std::map<int, long> v;  // size variable -> coefficient, never zero

  static Lin constant(long k) { return {k, {}}; }
  static Lin var(int s) { return {0, {{s, 1}}}; }
  bool is_const() const { return v.empty(); }
};

Lin operator+(Lin a, const Lin& b) {
  a.c += b.c;
  for (const auto& [s, k] : b.v) {
    if ((a.v[s] += k) == 0) a.v.erase(s);
  }
  return a;
}

Lin scale(Lin a, long f) {
  a.c *= f;
  for (auto& [s, k] : a.v) k *= f;
  if (f == 0) a.v.clear();
  return a;
}

struct Ty;
using TyP = std::shared_ptr<const Ty>;

struct Ty {
  enum class K { Var, Qubits, Meas, Arrow };
  K k;
  int var = -1;
  Lin n;
  unsigned m = 0;
  TyP dom, cod;
};

TyP ty_var(int v) { return std::make_shared<Ty>(Ty{Ty::K::Var, v, {}, 0, nullptr, nullptr}); }
TyP ty_qubits(Lin n) { return std::make_shared<Ty>(Ty{Ty::K::Qubits, -1, std::move(n), 0, nullptr, nullptr}); }
TyP ty_meas(unsigned m, Lin n) { return std::make_shared<Ty>(Ty{Ty::K::Meas, -1, std::move(n), m, nullptr, nullptr}); }
TyP ty_arrow(TyP a, TyP b) { return std::make_shared<Ty>(Ty{Ty::K::Arrow, -1, {}, 0, std::move(a), std::move(b)}); }

TyP from_qtype(const QType& q) {
  switch (q.kind) {
    case QType::Kind::Qubits: return ty_qubits(Lin::constant(q.n));
    case QType::Kind::MeasResult: return ty_meas(q.m, Lin::constant(q.n));
    case QType::Kind::Arrow: return ty_arrow(from_qtype(*q.dom), from_qtype(*q.cod));
  }
  return nullptr;
}

using Usage = std::map<std::string, SourceSpan>;

struct Ineq {
  long m;
  Lin n;
  SourceSpan span;
  std::string what;
};

class Solver {
 public:
  int new_tvar() {
    tvars_.push_back(nullptr);
    return static_cast<int>(tvars_.size()) - 1;
  }
  int new_svar() {
    svars_.emplace_back();
    return static_cast<int>(svars_.size()) - 1;
  }
  Lin fresh_size() { return Lin::var(new_svar()); }

  Lin norm(const Lin& a) const {
    Lin out = Lin::constant(a.c);
    for (const auto& [s, k] : a.v) {
      if (svars_[s]) {
        out = out + scale(norm(*svars_[s]), k);
      } else {
        out = out + scale(Lin::var(s), k);
      }
    }
    return out;
  }

  TyP resolve(TyP t) const {
    while (t->k == Ty::K::Var && tvars_[t->var]) t = tvars_[t->var];
    return t;
  }

  TyP zonk(const TyP& t0) const {
    TyP t = resolve(t0);
    switch (t->k) {
      case Ty::K::Var: return t;
      case Ty::K::Qubits: return ty_qubits(norm(t->n));
      case Ty::K::Meas: return ty_meas(t->m, norm(t->n));
      case Ty::K::Arrow: return ty_arrow(zonk(t->dom), zonk(t->cod));
    }
    return t;
  }

  std::string show_lin(const Lin& a0) const {
    Lin a = norm(a0);
    std::string out;
    for (const auto& [s, k] : a.v) {
      if (!out.empty()) out += k < 0 ? "-" : "+";
      else if (k < 0) out += "-";
      if (std::abs(k) != 1) out += std::to_string(std::abs(k));
      out += "n" + std::to_string(s);
    }
    if (a.c != 0 || out.empty()) {
      if (!out.empty()) out += a.c < 0 ? "-" : "+";
      out += std::to_string(out.empty() ? a.c : std::abs(a.c));
    }
    return out;
  }

  std::string show(const TyP& t0) const {
    TyP t = resolve(t0);
    switch (t->k) {
      case Ty::K::Var: return "'a" + std::to_string(t->var);
      case Ty::K::Qubits: return show_lin(t->n);
      case Ty::K::Meas: return "(" + std::to_string(t->m) + "," + show_lin(t->n) + ")";
      case Ty::K::Arrow: {
        std::string d = show(t->dom);
        if (resolve(t->dom)->k == Ty::K::Arrow) d = "(" + d + ")";
        return d + " -o " + show(t->cod);
      }
    }
    return "?";
  }

  [[noreturn]] void mismatch(const TyP& expected, const TyP& actual, SourceSpan span, const std::string& what) const {
    const std::string e = show(expected), a = show(actual);
    throw TypeError(TypeErrorCode::TypeMismatch, span, what + ": expected " + e + ", found " + a, e, a);
  }

  void unify(const TyP& expected, const TyP& actual, SourceSpan span, const std::string& what) {
    TyP a = resolve(expected), b = resolve(actual);
    if (a == b) return;
    if (a->k == Ty::K::Var) return bind(a->var, b, expected, actual, span, what);
    if (b->k == Ty::K::Var) return bind(b->var, a, expected, actual, span, what);
    if (a->k != b->k) mismatch(expected, actual, span, what);
    switch (a->k) {
      case Ty::K::Qubits:
        if (!unify_size(a->n, b->n, span)) mismatch(expected, actual, span, what);
        return;
      case Ty::K::Meas:
        if (a->m != b->m || !unify_size(a->n, b->n, span)) mismatch(expected, actual, span, what);
        return;
      case Ty::K::Arrow:
        unify(a->dom, b->dom, span, what);
        unify(a->cod, b->cod, span, what);
        return;
      case Ty::K::Var:
        return;
    }
  }

  // False when the two sizes are certainly different.
  bool unify_size(const Lin& a, const Lin& b, SourceSpan span) {
    Lin d = norm(a + scale(b, -1));
    if (d.is_const()) return d.c == 0;
    for (const auto& [s, k] : d.v) {
      if (k == 1 || k == -1) {
        Lin rest = d;
        rest.v.erase(s);
        // k*s + rest = 0  =>  s = -rest/k
        svars_[s] = scale(rest, -k);
        check_constant_ineqs();
        return true;
      }
    }
    residual_.emplace_back(d, span);
    return true;
  }

  void require_at_least(long m, const Lin& n, SourceSpan span, const std::string& what) {
    ineqs_.push_back({m, n, span, what});
    check_constant_ineqs();
  }

  void check_constant_ineqs() const {
    for (const auto& q : ineqs_) {
      Lin n = norm(q.n);
      if (n.is_const() && n.c < q.m) arity_error(q, n.c);
    }
  }

  [[noreturn]] static void arity_error(const Ineq& q, long n) {
    throw TypeError(TypeErrorCode::ArityMismatch, q.span,
                    q.what + " acts on " + std::to_string(q.m) + " qubit(s) but its argument has " + std::to_string(n),
                    ">= " + std::to_string(q.m), std::to_string(n));
  }

  /// Free size variables of the normalized constraints and of `roots`.
  std::vector<int> free_svars(const std::vector<TyP>& roots) const {
    std::set<int> out;
    auto add_lin = [&](const Lin& l) {
      for (const auto& [s, k] : norm(l).v) out.insert(s);
    };
    std::function<void(const TyP&)> add_ty = [&](const TyP& t0) {
      TyP t = resolve(t0);
      if (t->k == Ty::K::Qubits || t->k == Ty::K::Meas) add_lin(t->n);
      if (t->k == Ty::K::Arrow) {
        add_ty(t->dom);
        add_ty(t->cod);
      }
    };
    for (const auto& r : roots) add_ty(r);
    for (const auto& q : ineqs_) add_lin(q.n);
    for (const auto& [l, sp] : residual_) add_lin(l);
    for (const auto& s : svars_)
      if (s) add_lin(*s);
    return {out.begin(), out.end()};
  }

  /// Least assignment (values tried in order 1..24, then 0) satisfying every
  /// constraint and keeping all qubit counts non-negative.
  std::optional<std::map<int, long>> solve_sizes(const std::vector<TyP>& roots) const {
    struct Check {
      Lin lin;
      long lower;  // lin >= lower, or lin == 0 when equality
      bool equality;
    };
    std::vector<Check> checks;
    for (const auto& q : ineqs_) checks.push_back({norm(q.n), q.m, false});
    for (const auto& [l, sp] : residual_) checks.push_back({norm(l), 0, true});
    for (const auto& s : svars_)
      if (s) checks.push_back({norm(*s), 0, false});
    std::vector<int> vars = free_svars(roots);
    std::map<int, long> assign;
    std::vector<long> order;
    for (long k = 1; k <= 24; ++k) order.push_back(k);
    order.push_back(0);
    long budget = 200000;

    auto eval = [&](const Lin& l, long& out) {
      out = l.c;
      for (const auto& [s, k] : l.v) {
        auto it = assign.find(s);
        if (it == assign.end()) return false;
        out += k * it->second;
      }
      return true;
    };
    auto ok = [&] {
      for (const auto& c : checks) {
        long v;
        if (!eval(c.lin, v)) continue;
        if (c.equality ? v != 0 : v < c.lower) return false;
      }
      return true;
    };
    std::function<bool(std::size_t)> go = [&](std::size_t i) {
      if (--budget < 0) return false;
      if (!ok()) return false;
      if (i == vars.size()) return true;
      for (long val : order) {
        assign[vars[i]] = val;
        if (go(i + 1)) return true;
      }
      assign.erase(vars[i]);
      return false;
    };
    if (!go(0)) return std::nullopt;
    return assign;
  }

  [[noreturn]] void unsatisfiable(const std::vector<TyP>& roots) const {
    if (!ineqs_.empty()) {
      const Ineq& q = ineqs_.front();
      throw TypeError(TypeErrorCode::ArityMismatch, q.span,
                      "no qubit counts satisfy the arity constraints (first: " + q.what + " on " +
                          std::to_string(q.m) + " qubit(s))");
    }
    SourceSpan span = residual_.empty() ? SourceSpan{} : residual_.front().second;
    throw TypeError(TypeErrorCode::TypeMismatch, span,
                    "no qubit counts satisfy the constraints of " + (roots.empty() ? "?" : show(roots.front())));
  }

  QTypePtr instantiate(const TyP& t0, const std::map<int, long>& sizes) const {
    TyP t = resolve(t0);
    auto value = [&](const Lin& l) {
      Lin n = norm(l);
      long out = n.c;
      for (const auto& [s, k] : n.v) {
        auto it = sizes.find(s);
        out += k * (it == sizes.end() ? 1 : it->second);
      }
      return static_cast<unsigned>(std::max(0L, out));
    };
    switch (t->k) {
      case Ty::K::Var: return QType::qubits(1);
      case Ty::K::Qubits: return QType::qubits(value(t->n));
      case Ty::K::Meas: return QType::meas_result(t->m, value(t->n));
      case Ty::K::Arrow: return QType::arrow(instantiate(t->dom, sizes), instantiate(t->cod, sizes));
    }
    return nullptr;
  }

  std::string constraint_text() const {
    std::vector<std::string> parts;
    for (const auto& q : ineqs_) {
      Lin n = norm(q.n);
      if (!n.is_const()) parts.push_back(std::to_string(q.m) + " <= " + show_lin(n));
    }
    for (const auto& [l, sp] : residual_) {
      Lin n = norm(l);
      if (!n.is_const()) parts.push_back(show_lin(n) + " = 0");
    }
    std::sort(parts.begin(), parts.end());
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
    return out;
  }

 private:
  bool occurs(int v, const TyP& t0) const {
    TyP t = resolve(t0);
    if (t->k == Ty::K::Var) return t->var == v;
    if (t->k == Ty::K::Arrow) return occurs(v, t->dom) || occurs(v, t->cod);
    return false;
  }

  void bind(int v, const TyP& t, const TyP& expected, const TyP& actual, SourceSpan span, const std::string& what) {
    if (occurs(v, t)) mismatch(expected, actual, span, what + " (infinite type)");
    tvars_[v] = t;
  }

  std::vector<TyP> tvars_;
  std::vector<std::optional<Lin>> svars_;
  std::vector<Ineq> ineqs_;
  std::vector<std::pair<Lin, SourceSpan>> residual_;
};

// ---------------------------------------------------------------------------
// The syntax-directed pass: computes a type and the set of variables used.

class Checker {
 public:
  Checker(Solver& s, const TypingOptions& opts) : s_(s), opts_(opts) {}

  std::vector<std::pair<std::string, TyP>> env;

  TyP go(const TermPtr& t, Usage& use) {
    switch (t->kind) {
      case TermKind::Var: {
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
          if (it->first == t->name) {
            use[t->name] = t->span;
            return it->second;
          }
        }
        throw TypeError(TypeErrorCode::UnboundVariable, t->span, "unbound variable '" + t->name + "'");
      }
      case TermKind::Lam: {
        TyP a = ty_var(s_.new_tvar());
        env.emplace_back(t->name, a);
        TyP b = go(t->body(), use);
        env.pop_back();
        use.erase(t->name);
        return ty_arrow(a, b);
      }
      case TermKind::App: {
        Usage uf, ua;
        TyP f = go(t->fun(), uf);
        TyP a = go(t->arg(), ua);
        merge_disjoint(use, uf, ua);
        TyP fr = s_.resolve(f);
        if (fr->k == Ty::K::Arrow) {
          s_.unify(fr->dom, a, t->arg()->span, "argument");
          return fr->cod;
        }
        if (fr->k == Ty::K::Var) {
          TyP r = ty_var(s_.new_tvar());
          s_.unify(f, ty_arrow(a, r), t->fun()->span, "function");
          return r;
        }
        throw TypeError(TypeErrorCode::TypeMismatch, t->fun()->span,
                        "applied term is not a function: found " + s_.show(f), "a function type", s_.show(f));
      }
      case TermKind::Rho:
        return ty_qubits(Lin::constant(t->rho->qubits()));
      case TermKind::Pair:
        return ty_meas(t->m, Lin::constant(t->rho->qubits()));
      case TermKind::Unitary: {
        Lin n = expect_qubits(go(t->arg(), use), t->arg()->span, "unitary argument");
        s_.require_at_least(t->gate->arity(), n, t->span, "unitary " + print_gate(t->gate));
        return ty_qubits(n);
      }
      case TermKind::Meas: {
        Lin n = expect_qubits(go(t->arg(), use), t->arg()->span, "measurement argument");
        s_.require_at_least(t->m, n, t->span, "measurement meas[" + std::to_string(t->m) + "]");
        return ty_meas(t->m, n);
      }
      case TermKind::Tensor: {
        Usage ul, ur;
        Lin a = expect_qubits(go(t->left(), ul), t->left()->span, "tensor operand");
        Lin b = expect_qubits(go(t->right(), ur), t->right()->span, "tensor operand");
        merge_disjoint(use, ul, ur);
        return ty_qubits(a + b);
      }
      case TermKind::LetCase:
        return letcase(t, use);
      case TermKind::Sum: {
        double total = 0.0;
        for (double w : t->weights) total += w;
        if (std::abs(total - 1.0) > 10 * tolerance()) {
          throw TypeError(TypeErrorCode::TypeMismatch, t->span, "sum weights total " + format_number(total), "1",
                          format_number(total));
        }
        TyP first;
        for (const auto& k : t->kids) {
          Usage u;
          TyP a = go(k, u);
          for (const auto& [x, sp] : u) use.emplace(x, sp);
          if (!first) {
            first = a;
          } else {
            s_.unify(first, a, k->span, "sum addend");
          }
        }
        return first;
      }
    }
    throw Error("unknown term kind");
  }

 private:
  Lin expect_qubits(const TyP& t, SourceSpan span, const std::string& what) {
    TyP r = s_.resolve(t);
    if (r->k == Ty::K::Qubits) return r->n;
    if (r->k == Ty::K::Var) {
      Lin n = s_.fresh_size();
      s_.unify(t, ty_qubits(n), span, what);
      return n;
    }
    throw TypeError(TypeErrorCode::TypeMismatch, span, what + ": expected qubits, found " + s_.show(t), "n",
                    s_.show(t));
  }

  static void merge_disjoint(Usage& out, const Usage& a, const Usage& b) {
    for (const auto& [x, sp] : b) {
      auto it = a.find(x);
      if (it != a.end()) {
        throw TypeError(TypeErrorCode::AffineViolation, sp,
                        "variable '" + x + "' is used more than once (also at " + it->second.str() + ")", {}, {},
                        it->second);
      }
    }
    out.insert(a.begin(), a.end());
    out.insert(b.begin(), b.end());
  }

  TyP letcase(const TermPtr& t, Usage& use) {
    const std::size_t k = t->branch_count();
    unsigned m = 0;
    while ((std::size_t{1} << m) < k) ++m;
    Usage us;
    TyP s = s_.resolve(go(t->scrutinee(), us));
    Lin n;
    if (s->k == Ty::K::Meas) {
      if (s->m != m) {
        throw TypeError(TypeErrorCode::BranchCountMismatch, t->span,
                        "scrutinee has type " + s_.show(s) + " so " + std::to_string(1UL << s->m) +
                            " branches are needed, found " + std::to_string(k),
                        std::to_string(1UL << s->m), std::to_string(k));
      }
      n = s->n;
    } else if (s->k == Ty::K::Var) {
      n = s_.fresh_size();
      s_.unify(s, ty_meas(m, n), t->scrutinee()->span, "letcase scrutinee");
      s_.require_at_least(m, n, t->scrutinee()->span, "measurement result");
    } else {
      throw TypeError(TypeErrorCode::TypeMismatch, t->scrutinee()->span,
                      "letcase scrutinee must be a measurement result, found " + s_.show(s),
                      "(" + std::to_string(m) + ",n)", s_.show(s));
    }
    Usage ub;
    TyP result;
    env.emplace_back(t->name, ty_qubits(n));
    for (std::size_t i = 0; i < k; ++i) {
      const TermPtr& br = t->branch(i);
      if (opts_.closed_branches) {
        for (const auto& x : free_vars(br)) {
          if (x != t->name) {
            throw TypeError(TypeErrorCode::BranchNotClosed, br->span,
                            "branch " + std::to_string(i) + " mentions '" + x + "'; only '" + t->name +
                                "' may occur free");
          }
        }
      }
      Usage u;
      TyP a = go(br, u);
      for (const auto& [x, sp] : u) ub.emplace(x, sp);
      if (!result) {
        result = a;
      } else {
        s_.unify(result, a, br->span, "letcase branch " + std::to_string(i));
      }
    }
    env.pop_back();
    ub.erase(t->name);
    merge_disjoint(use, us, ub);
    return result;
  }

  Solver& s_;
  const TypingOptions& opts_;
};

void require_well_formed(const TermPtr& t, Calculus calculus) {
  if (const Term* f = foreign_construct(t, calculus)) {
    throw TypeError(TypeErrorCode::TypeMismatch, f->span,
                    "construct does not belong to the " + std::string(to_string(calculus)) + " calculus");
  }
}

struct Inferred {
  Solver solver;
  TyP type;
};

std::unique_ptr<Inferred> run(const TypingContext& ctx, const TermPtr& t, Calculus calculus,
                              const TypingOptions& opts) {
  require_well_formed(t, calculus);
  auto out = std::make_unique<Inferred>();
  Checker c(out->solver, opts);
  for (const auto& [x, a] : ctx) c.env.emplace_back(x, from_qtype(*a));
  Usage use;
  out->type = c.go(t, use);
  return out;
}

}  // namespace

QTypePtr infer(const TypingContext& ctx, const TermPtr& t, Calculus calculus, const TypingOptions& opts) {
  auto r = run(ctx, t, calculus, opts);
  auto sizes = r->solver.solve_sizes({r->type});
  if (!sizes) r->solver.unsatisfiable({r->type});
  return r->solver.instantiate(r->type, *sizes);
}

bool check(const TypingContext& ctx, const TermPtr& t, const QTypePtr& a, Calculus calculus,
           const TypingOptions& opts) {
  try {
    auto r = run(ctx, t, calculus, opts);
    r->solver.unify(from_qtype(*a), r->type, t->span, "expected type");
    return r->solver.solve_sizes({r->type}).has_value();
  } catch (const TypeError&) {
    return false;
  }
}

std::string principal_type(const TypingContext& ctx, const TermPtr& t, Calculus calculus,
                           const TypingOptions& opts) {
  auto r = run(ctx, t, calculus, opts);
  if (!r->solver.solve_sizes({r->type})) r->solver.unsatisfiable({r->type});
  std::string out = r->solver.show(r->type);
  const std::string where = r->solver.constraint_text();
  return where.empty() ? out : out + " where " + where;
}

bool check_metatheory_step(const TypingContext& ctx, const TermPtr& t, const TermPtr& t2, Calculus calculus,
                           const TypingOptions& opts) {
  QTypePtr a;
  try {
    a = infer(ctx, t, calculus, opts);
  } catch (const TypeError&) {
    return false;
  }
  return check(ctx, t2, a, calculus, opts);
}

}  // namespace ldm
