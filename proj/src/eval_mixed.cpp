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


#include "ldm/eval_mixed.hpp"

#include <algorithm>
#include <optional>

#include "json.hpp"
#include "ldm/syntax.hpp"

namespace ldm {

namespace {

struct Reduct {
  std::string rule;
  TermPtr term;
};

[[noreturn]] void ill_formed(const TermPtr& t, const std::string& why) {
  throw EvalError(EvalErrorCode::IllFormedRedex, why + ": " + print(t));
}

std::optional<Reduct> step(const TermPtr& t);

std::optional<Reduct> step_in(const TermPtr& t, std::size_t i) {
  auto r = step(t->kids[i]);
  if (!r) return std::nullopt;
  std::vector<TermPtr> kids = t->kids;
  kids[i] = r->term;
  r->term = with_kids(*t, std::move(kids));
  return r;
}

std::optional<Reduct> step_sum(const TermPtr& t) {
  const auto& kids = t->kids;
  if (std::all_of(kids.begin() + 1, kids.end(), [&](const TermPtr& k) { return alpha_eq(k, kids[0]); }))
    return Reduct{"sum-collapse", kids[0]};

  TermPtr c = canonical_sum(t);
  const bool nested = std::any_of(kids.begin(), kids.end(), [](const TermPtr& k) { return k->kind == TermKind::Sum; });
  if (nested || c->kids.size() != kids.size()) return Reduct{"sum-merge", c};

  if (std::all_of(kids.begin(), kids.end(), [](const TermPtr& k) { return k->kind == TermKind::Rho; })) {
    std::vector<std::pair<double, DensityMatrix>> parts;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (kids[i]->rho->qubits() != kids[0]->rho->qubits()) ill_formed(t, "sum of densities of different sizes");
      parts.emplace_back(t->weights[i], *kids[i]->rho);
    }
    return Reduct{"sum-density", rho(mix(parts))};
  }

  std::vector<std::pair<std::string, std::size_t>> order;
  for (std::size_t i = 0; i < kids.size(); ++i) order.emplace_back(canonical_key(kids[i]), i);
  std::stable_sort(order.begin(), order.end());
  for (const auto& [key, i] : order)
    if (auto r = step_in(t, i)) return r;
  return std::nullopt;
}

std::optional<Reduct> step(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Rho:
      return std::nullopt;
    case TermKind::Lam:
      return step_in(t, 0);
    case TermKind::App: {
      if (auto r = step_in(t, 1)) return r;
      const TermPtr& f = t->fun();
      if (f->kind == TermKind::Lam) return Reduct{"beta", subst(f->body(), f->name, t->arg())};
      if (auto r = step_in(t, 0)) return r;
      if (f->kind == TermKind::Sum) {
        std::vector<TermPtr> apps;
        for (const auto& k : f->kids) apps.push_back(app(k, t->arg()));
        return Reduct{"sum-app", sum(f->weights, std::move(apps))};
      }
      if (f->kind != TermKind::Var && is_closed(f)) ill_formed(t, "applied term is not a function");
      return std::nullopt;
    }
    case TermKind::Unitary: {
      const TermPtr& a = t->arg();
      if (a->kind == TermKind::Rho) {
        if (t->gate->arity() > a->rho->qubits()) ill_formed(t, "unitary wider than its argument");
        return Reduct{"unitary", rho(evolve(*a->rho, t->gate->op))};
      }
      if (auto r = step_in(t, 0)) return r;
      if (is_closed(a)) ill_formed(t, "unitary applied to a non-density");
      return std::nullopt;
    }
    case TermKind::Meas: {
      const TermPtr& a = t->arg();
      // A measurement only reduces as the scrutinee of letcase*.
      if (a->kind == TermKind::Rho) {
        if (t->m > a->rho->qubits()) ill_formed(t, "measurement wider than its argument");
        return std::nullopt;
      }
      if (auto r = step_in(t, 0)) return r;
      if (is_closed(a)) ill_formed(t, "measurement of a non-density");
      return std::nullopt;
    }
    case TermKind::Tensor: {
      const TermPtr &l = t->left(), &r = t->right();
      if (l->kind == TermKind::Rho && r->kind == TermKind::Rho)
        return Reduct{"tensor", rho(trusted_density(ldm::tensor(l->rho->matrix(), r->rho->matrix())))};
      if (auto s = step_in(t, 0)) return s;
      if (auto s = step_in(t, 1)) return s;
      if ((l->kind != TermKind::Rho && is_closed(l)) || (r->kind != TermKind::Rho && is_closed(r)))
        ill_formed(t, "tensor of a non-density");
      return std::nullopt;
    }
    case TermKind::LetCase: {
      if (!t->star) ill_formed(t, "letcase is not part of the mixed calculus");
      const TermPtr& s = t->scrutinee();
      if (s->kind == TermKind::Meas && s->arg()->kind == TermKind::Rho) {
        const DensityMatrix& d = *s->arg()->rho;
        if (s->m > d.qubits()) ill_formed(t, "measurement wider than its argument");
        std::vector<double> weights;
        std::vector<TermPtr> addends;
        for (auto& o : measure_comp(d, s->m)) {
          if (o.index >= t->branch_count()) ill_formed(t, "outcome has no branch");
          weights.push_back(o.prob);
          addends.push_back(subst(t->branch(o.index), t->name, rho(o.state)));
        }
        return Reduct{"letcase-meas", sum(std::move(weights), std::move(addends))};
      }
      if (auto r = step_in(t, 0)) return r;
      if (s->kind == TermKind::Sum) {
        std::vector<TermPtr> cases;
        std::vector<TermPtr> branches(t->kids.begin() + 1, t->kids.end());
        for (const auto& k : s->kids) cases.push_back(letcase(t->name, k, branches, true));
        return Reduct{"letcase-sum", sum(s->weights, std::move(cases))};
      }
      if (s->kind != TermKind::Meas && is_closed(s)) ill_formed(t, "letcase* on a non-measurement");
      return std::nullopt;
    }
    case TermKind::Sum:
      return step_sum(t);
    case TermKind::Pair:
      ill_formed(t, "pairs are not part of the mixed calculus");
  }
  return std::nullopt;
}

}  // namespace

MixedStepResult step_mixed(const TermPtr& t) {
  if (auto r = step(t)) return {MixedStepResult::Kind::Stepped, r->term, r->rule};
  if (is_value_mixed(t)) return {MixedStepResult::Kind::Value, t, ""};
  return {MixedStepResult::Kind::Stuck, t, "", stuck_reason(t, Calculus::Mixed)};
}

MixedRun run_mixed(const TermPtr& t, long fuel) {
  MixedRun run{t, MixedStepResult::Kind::Stepped, StuckReason::BlockedOnVariable, {}};
  for (long i = 0; i < fuel; ++i) {
    MixedStepResult s = step_mixed(run.result);
    if (s.kind != MixedStepResult::Kind::Stepped) {
      run.status = s.kind;
      run.reason = s.reason;
      return run;
    }
    run.result = s.term;
    run.log.push_back({s.rule, s.term});
  }
  MixedStepResult s = step_mixed(run.result);
  if (s.kind != MixedStepResult::Kind::Stepped) {
    run.status = s.kind;
    run.reason = s.reason;
  }
  return run;
}

TermPtr normalize_mixed(const TermPtr& t, long fuel) {
  MixedRun run = run_mixed(t, fuel);
  if (run.status == MixedStepResult::Kind::Stepped)
    throw EvalError(EvalErrorCode::FuelExhausted, "no normal form within " + std::to_string(fuel) + " steps");
  return run.result;
}

std::string log_to_jsonl(const std::vector<MixedLogEntry>& log) {
  std::string out;
  for (std::size_t i = 0; i < log.size(); ++i) {
    nlohmann::json j = {{"step", i + 1}, {"rule", log[i].rule}, {"term", print(log[i].term)}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace ldm
