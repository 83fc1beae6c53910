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

#include "ldm/eval_prob.hpp"

#include <algorithm>
#include <random>

#include "json.hpp"
#include "ldm/syntax.hpp"

namespace ldm {

std::string_view to_string(StuckReason r) {
  switch (r) {
    case StuckReason::BlockedOnVariable: return "BlockedOnVariable";
    case StuckReason::MeasurementNotObservable: return "MeasurementNotObservable";
  }
  return "?";
}

namespace {

bool has_unobserved_measurement(const Term& t) {
  if (t.kind == TermKind::Meas && t.arg()->kind == TermKind::Rho) return true;
  for (std::size_t i = 0; i < t.kids.size(); ++i) {
    const Term& k = *t.kids[i];
    // The scrutinee of letcase* consumes its measurement.
    if (t.kind == TermKind::LetCase && t.star && i == 0 && k.kind == TermKind::Meas) {
      if (has_unobserved_measurement(*k.arg())) return true;
      continue;
    }
    if (has_unobserved_measurement(k)) return true;
  }
  return false;
}

[[noreturn]] void ill_formed(const TermPtr& t, const std::string& why) {
  throw EvalError(EvalErrorCode::IllFormedRedex, why + ": " + print(t));
}

TermPtr replace_kid(const TermPtr& t, std::size_t i, TermPtr k) {
  std::vector<TermPtr> kids = t->kids;
  kids[i] = std::move(k);
  return with_kids(*t, std::move(kids));
}

// Steps kid i and rebuilds t around each reduct.
std::optional<ProbStep> step_in(const TermPtr& t, std::size_t i) {
  auto s = step_prob(t->kids[i]);
  if (!s) return std::nullopt;
  for (auto& [p, r] : s->reducts) r = replace_kid(t, i, r);
  return s;
}

ProbStep single(std::string rule, TermPtr r) { return {std::move(rule), {{1.0, std::move(r)}}}; }

}  // namespace

StuckReason stuck_reason(const TermPtr& t, Calculus calculus) {
  if (calculus == Calculus::Mixed && has_unobserved_measurement(*t)) return StuckReason::MeasurementNotObservable;
  return StuckReason::BlockedOnVariable;
}

std::optional<ProbStep> step_prob(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Rho:
    case TermKind::Pair:
      return std::nullopt;
    case TermKind::Lam:
      return step_in(t, 0);
    case TermKind::App: {
      if (auto s = step_in(t, 1)) return s;
      if (t->fun()->kind == TermKind::Lam) return single("beta", subst(t->fun()->body(), t->fun()->name, t->arg()));
      if (auto s = step_in(t, 0)) return s;
      if (t->fun()->kind != TermKind::Var && is_closed(t->fun())) ill_formed(t, "applied term is not a function");
      return std::nullopt;
    }
    case TermKind::Unitary: {
      const TermPtr& a = t->arg();
      if (a->kind == TermKind::Rho) {
        if (t->gate->arity() > a->rho->qubits()) ill_formed(t, "unitary wider than its argument");
        return single("unitary", rho(evolve(*a->rho, t->gate->op)));
      }
      if (auto s = step_in(t, 0)) return s;
      if (is_closed(a)) ill_formed(t, "unitary applied to a non-density");
      return std::nullopt;
    }
    case TermKind::Meas: {
      const TermPtr& a = t->arg();
      if (a->kind == TermKind::Rho) {
        if (t->m > a->rho->qubits()) ill_formed(t, "measurement wider than its argument");
        ProbStep out{"measure", {}};
        for (auto& o : measure_comp(*a->rho, t->m)) out.reducts.emplace_back(o.prob, pair(o.index, t->m, o.state));
        return out;
      }
      if (auto s = step_in(t, 0)) return s;
      if (is_closed(a)) ill_formed(t, "measurement of a non-density");
      return std::nullopt;
    }
    case TermKind::Tensor: {
      const TermPtr &l = t->left(), &r = t->right();
      if (l->kind == TermKind::Rho && r->kind == TermKind::Rho) {
        return single("tensor", rho(trusted_density(ldm::tensor(l->rho->matrix(), r->rho->matrix()))));
      }
      if (auto s = step_in(t, 0)) return s;
      if (auto s = step_in(t, 1)) return s;
      if ((l->kind != TermKind::Rho && is_closed(l)) || (r->kind != TermKind::Rho && is_closed(r)))
        ill_formed(t, "tensor of a non-density");
      return std::nullopt;
    }
    case TermKind::LetCase: {
      const TermPtr& s = t->scrutinee();
      if (s->kind == TermKind::Pair) {
        if (s->b >= t->branch_count()) ill_formed(t, "outcome has no branch");
        return single("letcase-pair", subst(t->branch(s->b), t->name, rho(*s->rho)));
      }
      if (auto r = step_in(t, 0)) return r;
      if (is_closed(s)) ill_formed(t, "letcase on a non-outcome");
      return std::nullopt;
    }
    case TermKind::Sum:
      ill_formed(t, "sums are not part of the prob calculus");
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Trace trees

namespace {

QTypePtr type_of_child(const TermPtr& t, const QTypePtr& parent) {
  if (parent && check({}, t, parent, Calculus::Prob)) return parent;
  try {
    return infer({}, t, Calculus::Prob);
  } catch (const TypeError&) {
    return nullptr;
  }
}

TraceNodePtr build(const TermPtr& t, QTypePtr type, long fuel, const TraceOptions& opts) {
  auto node = std::make_shared<TraceNode>();
  node->term = t;
  node->type = type;
  auto s = step_prob(t);
  if (!s) {
    node->status = is_value_prob(t) ? TraceNode::Status::Value : TraceNode::Status::Stuck;
    return node;
  }
  if (fuel <= 0) {
    node->status = TraceNode::Status::Exhausted;
    return node;
  }
  node->rule = s->rule;
  for (auto& [p, r] : s->reducts) {
    QTypePtr rt = opts.with_types ? type_of_child(r, type) : nullptr;
    node->children.emplace_back(p, build(r, rt, fuel - 1, opts));
  }
  return node;
}

void collect_leaves(const TraceNodePtr& n, double p, Distribution& out, bool& exhausted) {
  if (n->children.empty()) {
    exhausted = exhausted || n->status == TraceNode::Status::Exhausted;
    out.emplace_back(p, n->term);
    return;
  }
  for (const auto& [q, c] : n->children) collect_leaves(c, p * q, out, exhausted);
}

}  // namespace

TraceNodePtr build_trace(const TermPtr& t, long fuel, const TraceOptions& opts) {
  QTypePtr type = opts.with_types ? infer({}, t, Calculus::Prob) : nullptr;
  return build(t, type, fuel, opts);
}

TraceStats trace_stats(const TraceNodePtr& tree) {
  TraceStats st;
  std::vector<std::pair<const TraceNode*, std::size_t>> stack = {{tree.get(), 0}};
  while (!stack.empty()) {
    auto [n, d] = stack.back();
    stack.pop_back();
    ++st.nodes;
    st.depth = std::max(st.depth, d);
    if (n->children.empty()) {
      ++st.leaves;
      if (n->status == TraceNode::Status::Exhausted) ++st.exhausted;
    }
    st.edges += n->children.size();
    for (const auto& [p, c] : n->children) stack.emplace_back(c.get(), d + 1);
  }
  return st;
}

Distribution trace_leaves(const TraceNodePtr& tree) {
  Distribution out;
  bool exhausted = false;
  collect_leaves(tree, 1.0, out, exhausted);
  return out;
}

Distribution final_distribution(const TraceNodePtr& tree) {
  Distribution leaves;
  bool exhausted = false;
  collect_leaves(tree, 1.0, leaves, exhausted);
  if (exhausted) throw EvalError(EvalErrorCode::IncompleteTrace, "a path of the trace ran out of fuel");
  Distribution out;
  for (auto& [p, t] : leaves) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return alpha_eq(e.second, t); });
    if (it != out.end()) {
      it->first += p;
    } else {
      out.emplace_back(p, t);
    }
  }
  return out;
}

DensityMatrix distribution_density(const Distribution& d) {
  std::vector<std::pair<double, DensityMatrix>> parts;
  for (const auto& [p, t] : d) {
    if (t->kind != TermKind::Rho) throw EvalError(EvalErrorCode::NonDensityLeaf, "leaf is not a density: " + print(t));
    if (!parts.empty() && parts.front().second.qubits() != t->rho->qubits()) {
      throw EvalError(EvalErrorCode::MixedDimensions, "leaves have " + std::to_string(parts.front().second.qubits()) +
                                                          " and " + std::to_string(t->rho->qubits()) + " qubits");
    }
    parts.emplace_back(p, *t->rho);
  }
  if (parts.empty()) throw EvalError(EvalErrorCode::NonDensityLeaf, "empty distribution");
  return mix(parts);
}

TermPtr sample_run(const TermPtr& t0, std::uint64_t seed, long fuel) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TermPtr t = t0;
  for (long i = 0;; ++i) {
    auto s = step_prob(t);
    if (!s) return t;
    if (i >= fuel) throw EvalError(EvalErrorCode::FuelExhausted, "no normal form within " + std::to_string(fuel) + " steps");
    double u = unit(rng);
    t = s->reducts.back().second;
    for (const auto& [p, r] : s->reducts) {
      if (u < p) {
        t = r;
        break;
      }
      u -= p;
    }
  }
}

// ---------------------------------------------------------------------------
// Export

namespace {

const char* status_name(TraceNode::Status s) {
  switch (s) {
    case TraceNode::Status::Internal: return "internal";
    case TraceNode::Status::Value: return "value";
    case TraceNode::Status::Stuck: return "stuck";
    case TraceNode::Status::Exhausted: return "exhausted";
  }
  return "?";
}

nlohmann::json to_json(const TraceNode& n) {
  nlohmann::json j;
  j["term"] = print(n.term);
  j["type"] = n.type ? nlohmann::json(to_string(*n.type)) : nlohmann::json(nullptr);
  j["value"] = n.status == TraceNode::Status::Value;
  j["status"] = status_name(n.status);
  if (n.status == TraceNode::Status::Exhausted) j["exhausted"] = true;
  if (!n.rule.empty()) j["rule"] = n.rule;
  j["children"] = nlohmann::json::array();
  for (const auto& [p, c] : n.children) j["children"].push_back({{"prob", p}, {"node", to_json(*c)}});
  return j;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

void dot_rec(const TraceNode& n, int& next, std::string& out) {
  const int id = next++;
  std::string label = print(n.term);
  if (n.type) label += " : " + to_string(*n.type);
  std::string attrs;
  if (n.status == TraceNode::Status::Value) attrs = ", peripheries=2";
  if (n.status == TraceNode::Status::Stuck) attrs = ", style=dashed";
  if (n.status == TraceNode::Status::Exhausted) attrs = ", style=dotted";
  out += "  n" + std::to_string(id) + " [label=\"" + dot_escape(label) + "\"" + attrs + "];\n";
  for (const auto& [p, c] : n.children) {
    const int child = next;
    dot_rec(*c, next, out);
    out += "  n" + std::to_string(id) + " -> n" + std::to_string(child) + " [label=\"" + print_real(p) + "\"];\n";
  }
}

void text_rec(const TraceNode& n, const std::string& indent, std::string& out) {
  for (const auto& [p, c] : n.children) {
    out += indent + "-- " + print_real(p) + " [" + n.rule + "] --> " + print(c->term);
    if (c->type) out += " : " + to_string(*c->type);
    if (c->status == TraceNode::Status::Value) out += "  (value)";
    if (c->status == TraceNode::Status::Stuck) out += "  (stuck)";
    if (c->status == TraceNode::Status::Exhausted) out += "  (out of fuel)";
    out += "\n";
    text_rec(*c, indent + "   ", out);
  }
}

}  // namespace

std::string trace_to_json(const TraceNodePtr& tree) { return to_json(*tree).dump(2); }

std::string trace_to_dot(const TraceNodePtr& tree) {
  std::string out = "digraph trace {\n  node [shape=box, fontname=\"monospace\"];\n";
  int next = 0;
  dot_rec(*tree, next, out);
  return out + "}\n";
}

std::string trace_to_text(const TraceNodePtr& tree) {
  std::string out = print(tree->term);
  if (tree->type) out += " : " + to_string(*tree->type);
  if (tree->status == TraceNode::Status::Value) out += "  (value)";
  if (tree->status == TraceNode::Status::Stuck) out += "  (stuck)";
  if (tree->status == TraceNode::Status::Exhausted) out += "  (out of fuel)";
  out += "\n";
  text_rec(*tree, "", out);
  return out;
}

}  // namespace ldm
