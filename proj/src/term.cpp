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

#include "ldm/term.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace ldm {

std::string_view to_string(Calculus c) { return c == Calculus::Prob ? "prob" : "mixed"; }

// ---------------------------------------------------------------------------
// Gate expressions

GatePtr GateExpr::named(std::string_view name) {
  auto g = std::shared_ptr<GateExpr>(new GateExpr(Kind::Named, gates::named(name)));
  g->name = std::string(name);
  return g;
}

GatePtr GateExpr::identity(unsigned n) {
  auto g = std::shared_ptr<GateExpr>(new GateExpr(Kind::Identity, gates::identity(n)));
  g->width = n;
  return g;
}

GatePtr GateExpr::literal(const ComplexMatrix& mat) {
  return std::shared_ptr<GateExpr>(new GateExpr(Kind::Literal, UnitaryOp::from_matrix(mat)));
}

GatePtr GateExpr::tensor(GatePtr a, GatePtr b) {
  auto g = std::shared_ptr<GateExpr>(new GateExpr(Kind::Tensor, ldm::tensor(a->op, b->op)));
  g->left = std::move(a);
  g->right = std::move(b);
  return g;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

std::shared_ptr<Term> node(TermKind k, SourceSpan span) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->span = span;
  return t;
}

}  // namespace

TermPtr var(std::string name, SourceSpan span) {
  auto t = node(TermKind::Var, span);
  t->name = std::move(name);
  return t;
}

TermPtr lam(std::string binder, TermPtr body, SourceSpan span) {
  auto t = node(TermKind::Lam, span);
  t->name = std::move(binder);
  t->kids = {std::move(body)};
  return t;
}

TermPtr app(TermPtr fun, TermPtr arg, SourceSpan span) {
  auto t = node(TermKind::App, span);
  t->kids = {std::move(fun), std::move(arg)};
  return t;
}

TermPtr rho(DensityMatrix d, SourceSpan span) {
  auto t = node(TermKind::Rho, span);
  t->rho = std::move(d);
  return t;
}

TermPtr unitary(GatePtr gate, TermPtr arg, SourceSpan span) {
  auto t = node(TermKind::Unitary, span);
  t->gate = std::move(gate);
  t->kids = {std::move(arg)};
  return t;
}

TermPtr meas(unsigned m, TermPtr arg, SourceSpan span) {
  auto t = node(TermKind::Meas, span);
  t->m = m;
  t->kids = {std::move(arg)};
  return t;
}

TermPtr tensor(TermPtr l, TermPtr r, SourceSpan span) {
  auto t = node(TermKind::Tensor, span);
  t->kids = {std::move(l), std::move(r)};
  return t;
}

TermPtr pair(unsigned b, unsigned m, DensityMatrix d, SourceSpan span) {
  if (m >= 32 || b >= (1U << m)) {
    throw Error("pair outcome " + std::to_string(b) + " out of range for " + std::to_string(m) + " measured qubit(s)");
  }
  if (m > d.qubits()) throw ArityError(m, d.qubits());
  auto t = node(TermKind::Pair, span);
  t->b = b;
  t->m = m;
  t->rho = std::move(d);
  return t;
}

TermPtr letcase(std::string binder, TermPtr scrutinee, std::vector<TermPtr> branches, bool star, SourceSpan span) {
  const std::size_t k = branches.size();
  if (k == 0 || (k & (k - 1)) != 0) {
    throw Error("letcase needs a power-of-two number of branches, got " + std::to_string(k));
  }
  auto t = node(TermKind::LetCase, span);
  t->name = std::move(binder);
  t->star = star;
  t->kids.reserve(k + 1);
  t->kids.push_back(std::move(scrutinee));
  for (auto& br : branches) t->kids.push_back(std::move(br));
  return t;
}

TermPtr sum(std::vector<double> weights, std::vector<TermPtr> addends, SourceSpan span) {
  if (addends.empty() || weights.size() != addends.size()) throw Error("sum needs at least one weighted addend");
  const double eps = tolerance();
  double total = 0.0;
  for (double w : weights) {
    if (!(w > eps) || w > 1.0 + 10 * eps) throw Error("sum weight " + format_number(w) + " not in (0,1]");
    total += w;
  }
  if (std::abs(total - 1.0) > 10 * eps) throw Error("sum weights total " + format_number(total) + ", expected 1");
  auto t = node(TermKind::Sum, span);
  t->weights = std::move(weights);
  t->kids = std::move(addends);
  return t;
}

TermPtr with_kids(const Term& t, std::vector<TermPtr> kids) {
  auto out = std::make_shared<Term>(t);
  out->kids = std::move(kids);
  return out;
}

// ---------------------------------------------------------------------------
// Free variables and substitution

namespace {

void collect_free(const Term& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind) {
    case TermKind::Var:
      if (std::find(bound.begin(), bound.end(), t.name) == bound.end()) out.insert(t.name);
      return;
    case TermKind::Lam:
      bound.push_back(t.name);
      collect_free(*t.body(), bound, out);
      bound.pop_back();
      return;
    case TermKind::LetCase:
      collect_free(*t.scrutinee(), bound, out);
      bound.push_back(t.name);
      for (std::size_t i = 0; i < t.branch_count(); ++i) collect_free(*t.branch(i), bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& k : t.kids) collect_free(*k, bound, out);
  }
}

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(*t, bound, out);
  return out;
}

bool is_closed(const TermPtr& t) { return free_vars(t).empty(); }

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string name = base + "'";
  while (avoid.count(name)) name += "'";
  return name;
}

namespace {

TermPtr subst_rec(const TermPtr& t, const std::string& x, const TermPtr& r, const std::set<std::string>& fv_r);

// Substitutes under a binder y; renames y when it would capture a free
// variable of r. Returns the (possibly renamed) binder and rewritten bodies.
std::pair<std::string, std::vector<TermPtr>> subst_under(const std::string& y, std::vector<TermPtr> bodies,
                                                         const std::string& x, const TermPtr& r,
                                                         const std::set<std::string>& fv_r) {
  if (y == x) return {y, std::move(bodies)};
  bool x_free = false;
  std::set<std::string> avoid = fv_r;
  for (const auto& b : bodies) {
    auto fv = free_vars(b);
    x_free = x_free || fv.count(x) > 0;
    avoid.insert(fv.begin(), fv.end());
  }
  if (!x_free) return {y, std::move(bodies)};
  std::string binder = y;
  if (fv_r.count(y)) {
    avoid.insert(x);
    binder = fresh_name(y, avoid);
    const TermPtr renamed = var(binder);
    for (auto& b : bodies) b = subst_rec(b, y, renamed, {binder});
  }
  for (auto& b : bodies) b = subst_rec(b, x, r, fv_r);
  return {binder, std::move(bodies)};
}

TermPtr subst_rec(const TermPtr& t, const std::string& x, const TermPtr& r, const std::set<std::string>& fv_r) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == x ? r : t;
    case TermKind::Rho:
    case TermKind::Pair:
      return t;
    case TermKind::Lam: {
      auto [binder, bodies] = subst_under(t->name, {t->body()}, x, r, fv_r);
      if (binder == t->name && bodies[0] == t->body()) return t;
      return lam(binder, bodies[0], t->span);
    }
    case TermKind::LetCase: {
      TermPtr scrut = subst_rec(t->scrutinee(), x, r, fv_r);
      std::vector<TermPtr> branches(t->kids.begin() + 1, t->kids.end());
      auto [binder, bodies] = subst_under(t->name, std::move(branches), x, r, fv_r);
      std::vector<TermPtr> kids;
      kids.push_back(std::move(scrut));
      kids.insert(kids.end(), bodies.begin(), bodies.end());
      if (binder == t->name && kids == t->kids) return t;
      auto out = std::make_shared<Term>(*t);
      out->name = binder;
      out->kids = std::move(kids);
      return out;
    }
    default: {
      std::vector<TermPtr> kids;
      kids.reserve(t->kids.size());
      bool changed = false;
      for (const auto& k : t->kids) {
        kids.push_back(subst_rec(k, x, r, fv_r));
        changed = changed || kids.back() != k;
      }
      return changed ? with_kids(*t, std::move(kids)) : t;
    }
  }
}

}  // namespace

TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& r) {
  return subst_rec(t, x, r, free_vars(r));
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

using Env = std::vector<std::string>;

// Index of the innermost binding of `name`, or -1 if free.
long lookup(const Env& env, const std::string& name) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == name) return static_cast<long>(i);
  return -1;
}

bool same_density(const DensityMatrix& a, const DensityMatrix& b) {
  return a.qubits() == b.qubits() && approx_eq(a.matrix(), b.matrix(), tolerance());
}

bool eq(const TermPtr& a, const TermPtr& b, Env& ea, Env& eb);

bool eq_sum(const TermPtr& a, const TermPtr& b, Env& ea, Env& eb) {
  TermPtr ca = canonical_sum(a), cb = canonical_sum(b);
  if (ca->kids.size() != cb->kids.size()) return false;
  std::vector<bool> used(cb->kids.size(), false);
  const double wtol = 10 * tolerance();
  for (std::size_t i = 0; i < ca->kids.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < cb->kids.size() && !found; ++j) {
      if (used[j] || std::abs(ca->weights[i] - cb->weights[j]) > wtol) continue;
      if (eq(ca->kids[i], cb->kids[j], ea, eb)) used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

bool eq(const TermPtr& a, const TermPtr& b, Env& ea, Env& eb) {
  if (a == b && ea == eb) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var: {
      const long ia = lookup(ea, a->name), ib = lookup(eb, b->name);
      if (ia < 0 && ib < 0) return a->name == b->name;
      return ia == ib;
    }
    case TermKind::Lam: {
      ea.push_back(a->name);
      eb.push_back(b->name);
      const bool r = eq(a->body(), b->body(), ea, eb);
      ea.pop_back();
      eb.pop_back();
      return r;
    }
    case TermKind::Rho:
      return same_density(*a->rho, *b->rho);
    case TermKind::Pair:
      return a->b == b->b && a->m == b->m && same_density(*a->rho, *b->rho);
    case TermKind::Unitary:
      if (a->gate->arity() != b->gate->arity() ||
          !approx_eq(a->gate->op.matrix(), b->gate->op.matrix(), tolerance()))
        return false;
      return eq(a->arg(), b->arg(), ea, eb);
    case TermKind::Meas:
      return a->m == b->m && eq(a->arg(), b->arg(), ea, eb);
    case TermKind::App:
    case TermKind::Tensor:
      return eq(a->kids[0], b->kids[0], ea, eb) && eq(a->kids[1], b->kids[1], ea, eb);
    case TermKind::LetCase: {
      if (a->star != b->star || a->branch_count() != b->branch_count()) return false;
      if (!eq(a->scrutinee(), b->scrutinee(), ea, eb)) return false;
      ea.push_back(a->name);
      eb.push_back(b->name);
      bool r = true;
      for (std::size_t i = 0; i < a->branch_count() && r; ++i) r = eq(a->branch(i), b->branch(i), ea, eb);
      ea.pop_back();
      eb.pop_back();
      return r;
    }
    case TermKind::Sum:
      return eq_sum(a, b, ea, eb);
  }
  return false;
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  Env ea, eb;
  return eq(a, b, ea, eb);
}

// ---------------------------------------------------------------------------
// Canonical keys and sums

namespace {

std::string key_number(double x) {
  if (std::abs(x) < 1e-10) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8g", x);
  return buf;
}

std::string key_matrix(const ComplexMatrix& m) {
  std::string out = "[";
  for (const auto& z : m.entries()) out += key_number(z.real()) + "," + key_number(z.imag()) + ";";
  return out + "]";
}

void write_key(const Term& t, Env& env, std::string& out) {
  switch (t.kind) {
    case TermKind::Var: {
      const long i = lookup(env, t.name);
      out += i < 0 ? "v:" + t.name : "#" + std::to_string(i);
      return;
    }
    case TermKind::Lam:
      out += "(\\";
      env.push_back(t.name);
      write_key(*t.body(), env, out);
      env.pop_back();
      out += ")";
      return;
    case TermKind::Rho:
      out += "r" + key_matrix(t.rho->matrix());
      return;
    case TermKind::Pair:
      out += "p" + std::to_string(t.b) + "/" + std::to_string(t.m) + key_matrix(t.rho->matrix());
      return;
    case TermKind::Unitary:
      out += "(U" + key_matrix(t.gate->op.matrix()) + " ";
      write_key(*t.arg(), env, out);
      out += ")";
      return;
    case TermKind::Meas:
      out += "(M" + std::to_string(t.m) + " ";
      write_key(*t.arg(), env, out);
      out += ")";
      return;
    case TermKind::App:
    case TermKind::Tensor:
      out += t.kind == TermKind::App ? "(@ " : "(>< ";
      write_key(*t.kids[0], env, out);
      out += " ";
      write_key(*t.kids[1], env, out);
      out += ")";
      return;
    case TermKind::LetCase:
      out += t.star ? "(L* " : "(L ";
      write_key(*t.scrutinee(), env, out);
      env.push_back(t.name);
      for (std::size_t i = 0; i < t.branch_count(); ++i) {
        out += " | ";
        write_key(*t.branch(i), env, out);
      }
      env.pop_back();
      out += ")";
      return;
    case TermKind::Sum: {
      TermPtr c = canonical_sum(std::make_shared<Term>(t));
      out += "(S";
      for (std::size_t i = 0; i < c->kids.size(); ++i) {
        out += " " + key_number(c->weights[i]) + ":";
        write_key(*c->kids[i], env, out);
      }
      out += ")";
      return;
    }
  }
}

void flatten(const TermPtr& t, double scale, std::vector<std::pair<double, TermPtr>>& out) {
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    const double w = scale * t->weights[i];
    if (t->kids[i]->kind == TermKind::Sum) {
      flatten(t->kids[i], w, out);
    } else {
      out.emplace_back(w, t->kids[i]);
    }
  }
}

}  // namespace

std::string canonical_key(const TermPtr& t) {
  std::string out;
  Env env;
  write_key(*t, env, out);
  return out;
}

TermPtr canonical_sum(const TermPtr& t) {
  if (t->kind != TermKind::Sum) return t;
  std::vector<std::pair<double, TermPtr>> flat;
  flatten(t, 1.0, flat);
  std::vector<std::pair<double, TermPtr>> merged;
  for (auto& [w, term] : flat) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& e) { return alpha_eq(e.second, term); });
    if (it != merged.end()) {
      it->first += w;
    } else {
      merged.emplace_back(w, term);
    }
  }
  std::vector<std::pair<std::string, std::size_t>> order;
  for (std::size_t i = 0; i < merged.size(); ++i) order.emplace_back(canonical_key(merged[i].second), i);
  std::stable_sort(order.begin(), order.end());
  std::vector<double> weights;
  std::vector<TermPtr> addends;
  for (const auto& [key, i] : order) {
    weights.push_back(std::min(merged[i].first, 1.0));
    addends.push_back(merged[i].second);
  }
  auto out = std::make_shared<Term>(*t);
  out->weights = std::move(weights);
  out->kids = std::move(addends);
  return out;
}

// ---------------------------------------------------------------------------
// Values and well-formedness

namespace {

bool is_w_prob(const TermPtr& t);

bool is_v_prob(const TermPtr& t) {
  return t->kind == TermKind::Rho || t->kind == TermKind::Pair || is_w_prob(t);
}

bool is_w_prob(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: return true;
    case TermKind::Lam: return is_v_prob(t->body());
    case TermKind::Tensor: return is_w_prob(t->left()) && is_w_prob(t->right());
    default: return false;
  }
}

bool is_w_mixed(const TermPtr& t);

bool is_v_mixed(const TermPtr& t) { return t->kind == TermKind::Rho || is_w_mixed(t); }

bool is_w_mixed(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: return true;
    case TermKind::Lam: return is_v_mixed(t->body());
    case TermKind::Tensor: return is_w_mixed(t->left()) && is_w_mixed(t->right());
    case TermKind::Sum:
      // Singleton and nested sums still step (collapse, merge).
      if (t->kids.size() < 2) return false;
      for (std::size_t i = 0; i < t->kids.size(); ++i) {
        if (t->kids[i]->kind == TermKind::Sum || !is_w_mixed(t->kids[i])) return false;
        for (std::size_t j = 0; j < i; ++j)
          if (alpha_eq(t->kids[i], t->kids[j])) return false;
      }
      return true;
    default: return false;
  }
}

}  // namespace

bool is_value_prob(const TermPtr& t) { return is_v_prob(t); }

bool is_value_mixed(const TermPtr& t) { return is_v_mixed(t); }

bool is_value(const TermPtr& t, Calculus c) { return c == Calculus::Prob ? is_value_prob(t) : is_value_mixed(t); }

const Term* foreign_construct(const TermPtr& t, Calculus c) {
  const bool foreign = c == Calculus::Prob
                           ? t->kind == TermKind::Sum || (t->kind == TermKind::LetCase && t->star)
                           : t->kind == TermKind::Pair || (t->kind == TermKind::LetCase && !t->star);
  if (foreign) return t.get();
  for (const auto& k : t->kids)
    if (const Term* f = foreign_construct(k, c)) return f;
  return nullptr;
}

std::size_t term_size(const TermPtr& t) {
  std::size_t n = 1;
  for (const auto& k : t->kids) n += term_size(k);
  return n;
}

}  // namespace ldm
