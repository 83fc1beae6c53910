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


#include "ldm/denotation.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "ldm/syntax.hpp"

namespace ldm {

std::string tag_string(const Tag& b) { return b ? std::to_string(*b) : "eps"; }

namespace {

[[noreturn]] void fail(DenotationErrorCode code, const std::string& msg) { throw DenotationError(code, msg); }

const DensityMatrix& as_mat(const DenElement& e, const TermPtr& where) {
  if (auto* m = std::get_if<DensityMatrix>(&e)) return *m;
  fail(DenotationErrorCode::ShapeMismatch, "expected a density matrix in " + print(where));
}

TripletSet den(const TermPtr& t, const Valuation& theta, bool merged);

TripletSet apply_impl(const DenElement& f, const Tag& b, const DenElement& arg, bool merged) {
  auto* c = std::get_if<ClosurePtr>(&f);
  if (!c) fail(DenotationErrorCode::UnapplicableElement, "a density matrix cannot be applied");
  Valuation env = (*c)->env;
  env.insert_or_assign((*c)->binder, std::make_pair(b, arg));
  return den((*c)->body, env, merged);
}

TripletSet den(const TermPtr& t, const Valuation& theta, bool merged) {
  TripletSet out;
  switch (t->kind) {
    case TermKind::Var: {
      auto it = theta.find(t->name);
      if (it == theta.end()) fail(DenotationErrorCode::ValuationMismatch, "no value for " + t->name);
      out.push_back({1.0, it->second.first, it->second.second});
      break;
    }
    case TermKind::Lam:
      out.push_back({1.0, std::nullopt, std::make_shared<const Closure>(Closure{t->name, t->body(), theta})});
      break;
    case TermKind::App: {
      TripletSet fs = den(t->fun(), theta, merged);
      TripletSet as = den(t->arg(), theta, merged);
      for (const auto& f : fs) {
        if (!std::holds_alternative<ClosurePtr>(f.e))
          fail(DenotationErrorCode::UnapplicableElement, "function position yields a matrix in " + print(t));
        for (const auto& a : as)
          for (auto& r : apply_impl(f.e, a.b, a.e, merged)) out.push_back({f.p * a.p * r.p, r.b, r.e});
      }
      break;
    }
    case TermKind::Rho:
      out.push_back({1.0, std::nullopt, *t->rho});
      break;
    case TermKind::Pair:
      out.push_back({1.0, t->b, *t->rho});
      break;
    case TermKind::Unitary:
      for (const auto& s : den(t->arg(), theta, merged)) {
        const DensityMatrix& m = as_mat(s.e, t);
        if (t->gate->arity() > m.qubits()) fail(DenotationErrorCode::ShapeMismatch, "gate wider than argument in " + print(t));
        out.push_back({s.p, std::nullopt, evolve(m, t->gate->op)});
      }
      break;
    case TermKind::Meas:
      for (const auto& s : den(t->arg(), theta, merged)) {
        const DensityMatrix& m = as_mat(s.e, t);
        if (t->m > m.qubits()) fail(DenotationErrorCode::ShapeMismatch, "measurement wider than argument in " + print(t));
        for (auto& o : measure_comp(m, t->m)) out.push_back({s.p * o.prob, o.index, o.state});
      }
      break;
    case TermKind::Tensor: {
      TripletSet ls = den(t->left(), theta, merged);
      TripletSet rs = den(t->right(), theta, merged);
      for (const auto& l : ls)
        for (const auto& r : rs)
          out.push_back({l.p * r.p, std::nullopt,
                         trusted_density(tensor(as_mat(l.e, t).matrix(), as_mat(r.e, t).matrix()))});
      break;
    }
    case TermKind::LetCase:
      for (const auto& s : den(t->scrutinee(), theta, merged)) {
        if (!s.b || *s.b >= t->branch_count())
          fail(DenotationErrorCode::ShapeMismatch, "scrutinee tag " + tag_string(s.b) + " selects no branch in " + print(t));
        Valuation env = theta;
        env.insert_or_assign(t->name, std::make_pair(Tag{}, DenElement(as_mat(s.e, t))));
        for (auto& r : den(t->branch(*s.b), env, merged)) out.push_back({s.p * r.p, r.b, r.e});
      }
      break;
    case TermKind::Sum:
      for (std::size_t i = 0; i < t->kids.size(); ++i)
        for (auto& r : den(t->kids[i], theta, merged)) out.push_back({t->weights[i] * r.p, r.b, r.e});
      break;
  }
  return merged ? merge(out) : out;
}

bool same_element(const DenElement& a, const DenElement& b) {
  auto* ma = std::get_if<DensityMatrix>(&a);
  auto* mb = std::get_if<DensityMatrix>(&b);
  if (!ma || !mb) return false;
  return ma->qubits() == mb->qubits() && approx_eq(ma->matrix(), mb->matrix(), tolerance());
}

SemValue from_set(const TripletSet& s) {
  if (s.empty()) fail(DenotationErrorCode::ShapeMismatch, "empty interpretation");
  const bool mats = std::holds_alternative<DensityMatrix>(s.front().e);
  for (const auto& x : s)
    if (std::holds_alternative<DensityMatrix>(x.e) != mats)
      fail(DenotationErrorCode::ShapeMismatch, "interpretation mixes matrices and functions");
  if (mats) return SemValue(set_density(s));
  return SemValue(s);
}

TermPtr term_probe(const QType& a) {
  switch (a.kind) {
    case QType::Kind::Qubits: return rho(DensityMatrix::ground(a.n));
    case QType::Kind::MeasResult: return pair(0, a.m, DensityMatrix::ground(a.n));
    case QType::Kind::Arrow: return lam("_", term_probe(*a.cod));
  }
  return nullptr;
}

DensityMatrix coin_state() {
  const double s = std::sqrt(3.0) / 4;
  return validate_density(ComplexMatrix(2, 2, {0.75, s, s, 0.25}));
}

}  // namespace

TripletSet interp(const TermPtr& t, const Valuation& theta) { return den(t, theta, true); }

TripletSet interp_raw(const TermPtr& t, const Valuation& theta) { return den(t, theta, false); }

TripletSet apply(const DenElement& f, const Tag& b, const DenElement& arg) { return apply_impl(f, b, arg, true); }

TripletSet merge(const TripletSet& s) {
  TripletSet out;
  for (const auto& x : s) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Triplet& y) { return y.b == x.b && same_element(y.e, x.e); });
    if (it != out.end()) {
      it->p += x.p;
    } else {
      out.push_back(x);
    }
  }
  std::vector<std::pair<std::pair<long, std::string>, std::size_t>> keys;
  for (std::size_t i = 0; i < out.size(); ++i)
    keys.push_back({{out[i].b ? long(*out[i].b) : -1L, element_string(out[i].e)}, i});
  std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  TripletSet sorted;
  for (const auto& k : keys) sorted.push_back(out[k.second]);
  return sorted;
}

bool same_set(const TripletSet& a0, const TripletSet& b0) {
  TripletSet a = merge(a0), b = merge(b0);
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (used[j] || x.b != b[j].b || std::abs(x.p - b[j].p) > 10 * tolerance()) continue;
      if (same_element(x.e, b[j].e)) used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

double weight(const TripletSet& s) {
  double w = 0;
  for (const auto& x : s) w += x.p;
  return w;
}

bool check_P(const Tag& b, const QType& a) { return a.kind != QType::Kind::MeasResult || b.has_value(); }

const DensityMatrix& SemValue::matrix() const {
  if (!mat_) fail(DenotationErrorCode::ShapeMismatch, "interpretation is a function");
  return *mat_;
}

SemValue SemValue::operator()(const Tag& b, const DenElement& arg) const {
  if (mat_) fail(DenotationErrorCode::UnapplicableElement, "a density matrix cannot be applied");
  TripletSet all;
  for (const auto& f : funs_)
    for (auto& r : apply(f.e, b, arg)) all.push_back({f.p * r.p, r.b, r.e});
  return from_set(all);
}

SemValue fsem(const TermPtr& t, const Valuation& theta) { return from_set(interp(t, theta)); }

DensityMatrix set_density(const TripletSet& s) {
  std::vector<std::pair<double, DensityMatrix>> parts;
  for (const auto& x : s) {
    auto* m = std::get_if<DensityMatrix>(&x.e);
    if (!m) fail(DenotationErrorCode::ShapeMismatch, "function element in a matrix sum");
    if (!parts.empty() && parts.front().second.qubits() != m->qubits())
      fail(DenotationErrorCode::ShapeMismatch, "elements of different sizes");
    parts.emplace_back(x.p, *m);
  }
  if (parts.empty()) fail(DenotationErrorCode::ShapeMismatch, "empty interpretation");
  return mix(parts);
}

std::vector<std::pair<Tag, DenElement>> standard_probes(const QType& dom) {
  std::vector<std::pair<Tag, DenElement>> out;
  switch (dom.kind) {
    case QType::Kind::Qubits: {
      const unsigned n = dom.n;
      if (n == 0) {
        out.emplace_back(Tag{}, DensityMatrix::ground(0));
        break;
      }
      ComplexMatrix plus = DensityMatrix::plus().matrix();
      ComplexMatrix pluses = plus;
      for (unsigned i = 1; i < n; ++i) pluses = tensor(pluses, plus);
      ComplexMatrix coin = coin_state().matrix();
      if (n > 1) coin = tensor(coin, DensityMatrix::ground(n - 1).matrix());
      out.emplace_back(Tag{}, DensityMatrix::ground(n));
      out.emplace_back(Tag{}, DensityMatrix::basis(std::string(n, '1')));
      out.emplace_back(Tag{}, trusted_density(pluses));
      out.emplace_back(Tag{}, trusted_density(coin));
      break;
    }
    case QType::Kind::MeasResult: {
      const unsigned count = dom.m >= 2 ? 4u : (1u << dom.m);
      for (unsigned b = 0; b < count; ++b) {
        std::string bits(dom.n, '0');
        for (unsigned k = 0; k < dom.m && k < 32; ++k)
          if (b >> k & 1u) bits[k] = '1';
        out.emplace_back(Tag{b}, DensityMatrix::basis(bits));
      }
      break;
    }
    case QType::Kind::Arrow:
      out.emplace_back(Tag{}, std::make_shared<const Closure>(Closure{"_", term_probe(*dom.cod), {}}));
      break;
  }
  return out;
}

bool check_tsem_membership(const DenElement& e, const QType& a,
                           const std::vector<std::pair<Tag, DenElement>>& probes) {
  if (auto* m = std::get_if<DensityMatrix>(&e)) {
    if (a.kind == QType::Kind::Arrow || m->qubits() != a.n) return false;
    try {
      validate_density(m->matrix());
    } catch (const DensityError&) {
      return false;
    }
    return true;
  }
  if (a.kind != QType::Kind::Arrow) return false;
  for (const auto& [b, arg] : probes) {
    if (!check_P(b, *a.dom)) fail(DenotationErrorCode::ShapeMismatch, "probe with empty tag at a measurement type");
    TripletSet out;
    try {
      out = apply(e, b, arg);
    } catch (const DenotationError&) {
      return false;
    }
    if (std::abs(weight(out) - 1.0) > 10 * tolerance()) return false;
    for (const auto& x : out)
      if (!check_P(x.b, *a.cod) || !check_tsem_membership(x.e, *a.cod)) return false;
  }
  return true;
}

bool check_tsem_membership(const DenElement& e, const QType& a) {
  return check_tsem_membership(e, a, a.kind == QType::Kind::Arrow ? standard_probes(*a.dom)
                                                                  : std::vector<std::pair<Tag, DenElement>>{});
}

void check_valuation(const Valuation& theta, const TypingContext& ctx) {
  for (const auto& [x, a] : ctx) {
    auto it = theta.find(x);
    if (it == theta.end()) fail(DenotationErrorCode::ValuationMismatch, "no value for " + x);
    if (!check_P(it->second.first, *a))
      fail(DenotationErrorCode::ValuationMismatch, x + " has an empty tag at type " + to_string(*a));
    if (!check_tsem_membership(it->second.second, *a))
      fail(DenotationErrorCode::ValuationMismatch, x + " is not an element of " + to_string(*a));
  }
}

std::string element_string(const DenElement& e) {
  if (auto* m = std::get_if<DensityMatrix>(&e)) return print_density(*m);
  const Closure& c = *std::get<ClosurePtr>(e);
  return print(lam(c.binder, c.body));
}

std::string to_string(const TripletSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += "(" + print_real(s[i].p) + ", " + tag_string(s[i].b) + ", " + element_string(s[i].e) + ")";
  }
  return out + "}";
}

std::string to_json(const TripletSet& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : s) {
    nlohmann::json j;
    j["p"] = x.p;
    j["b"] = x.b ? nlohmann::json(*x.b) : nlohmann::json(nullptr);
    if (auto* m = std::get_if<DensityMatrix>(&x.e)) {
      nlohmann::json entries = nlohmann::json::array();
      for (const Complex& z : m->matrix().entries()) entries.push_back({z.real(), z.imag()});
      j["e"] = {{"kind", "mat"}, {"n", m->qubits()}, {"entries", entries}};
    } else {
      j["e"] = {{"kind", "fun"}, {"term", element_string(x.e)}};
    }
    arr.push_back(j);
  }
  return arr.dump();
}

}  // namespace ldm
