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


#include "ldm/report.hpp"

#include <functional>

#include "json.hpp"
#include "ldm/denotation.hpp"
#include "ldm/eval_mixed.hpp"
#include "ldm/syntax.hpp"
#include "ldm/typing.hpp"

namespace ldm {

namespace {

using nlohmann::json;

struct Loaded {
  TermPtr term;
  Calculus calculus;
  QTypePtr type;
};

bool is_json(const RunConfig& cfg) { return cfg.output == OutputFormat::Json; }

json span_json(const SourceSpan& s) {
  if (!s.valid()) return nullptr;
  return {{"line", s.line}, {"col", s.col}, {"end_line", s.end_line}, {"end_col", s.end_col}};
}

json mat_json(const DensityMatrix& d) {
  json entries = json::array();
  for (const Complex& z : d.matrix().entries()) entries.push_back({z.real(), z.imag()});
  return {{"n", d.qubits()}, {"entries", entries}};
}

// One indented row per line.
std::string rows(const ComplexMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += "  [";
    for (std::size_t c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + format_complex(m(r, c));
    out += "]\n";
  }
  return out;
}

void fail(const RunConfig& cfg, Report& r, Status status, json error, const std::string& text) {
  r.status = status;
  r.err += text;
  if (r.err.empty() || r.err.back() != '\n') r.err += '\n';
  if (is_json(cfg)) r.out = json{{"error", error}}.dump(2) + "\n";
}

std::string where(std::string_view name, const SourceSpan& s) {
  std::string out(name);
  if (s.valid()) out += ":" + std::to_string(s.line) + ":" + std::to_string(s.col);
  return out;
}

std::optional<Loaded> load(const RunConfig& cfg, std::string_view name, std::string_view source, Report& r) {
  Loaded l;
  l.calculus = detect_calculus(source).value_or(cfg.calculus);
  try {
    l.term = parse(source, l.calculus);
  } catch (const ParseError& e) {
    std::string msg = where(name, e.span) + ": parse error: " + e.detail;
    if (e.wrong_calculus) msg += " (not part of the " + std::string(to_string(l.calculus)) + " calculus)";
    fail(cfg, r, Status::ParseError,
         {{"kind", "ParseError"}, {"file", name}, {"message", e.detail}, {"span", span_json(e.span)},
          {"wrong_calculus", e.wrong_calculus}},
         msg);
    return std::nullopt;
  }
  try {
    TypingOptions opts;
    opts.closed_branches = cfg.strict_letcase;
    l.type = infer({}, l.term, l.calculus, opts);
  } catch (const TypeError& e) {
    std::string msg = where(name, e.span) + ": type error [" + std::string(to_string(e.code)) + "]: " + e.detail;
    if (!e.expected.empty()) msg += "\n  expected: " + e.expected;
    if (!e.actual.empty()) msg += "\n  actual:   " + e.actual;
    if (e.other.valid()) msg += "\n  other use at " + where(name, e.other);
    fail(cfg, r, Status::Mismatch,
         {{"kind", "TypeError"}, {"code", to_string(e.code)}, {"file", name}, {"message", e.detail},
          {"span", span_json(e.span)}, {"other", span_json(e.other)}, {"expected", e.expected}, {"actual", e.actual}},
         msg);
    return std::nullopt;
  }
  return l;
}

// Runs a command body, mapping evaluation and semantic failures to statuses.
Report guarded(const RunConfig& cfg, std::string_view name, const std::function<void(Report&)>& body) {
  Report r;
  set_tolerance(cfg.tolerance);
  try {
    body(r);
  } catch (const EvalError& e) {
    const bool fuel = e.code == EvalErrorCode::FuelExhausted || e.code == EvalErrorCode::IncompleteTrace;
    fail(cfg, r, fuel ? Status::FuelExhausted : Status::RuntimeError,
         {{"kind", "EvalError"}, {"code", to_string(e.code)}, {"file", name}, {"message", e.detail}},
         std::string(name) + ": " + std::string(to_string(e.code)) + ": " + e.detail);
  } catch (const DenotationError& e) {
    fail(cfg, r, Status::RuntimeError,
         {{"kind", "DenotationError"}, {"code", to_string(e.code)}, {"file", name}, {"message", e.detail}},
         std::string(name) + ": " + std::string(to_string(e.code)) + ": " + e.detail);
  } catch (const Error& e) {
    fail(cfg, r, Status::RuntimeError, {{"kind", "Error"}, {"file", name}, {"message", e.what()}},
         std::string(name) + ": error: " + e.what());
  }
  return r;
}

std::string status_word(MixedStepResult::Kind k) {
  switch (k) {
    case MixedStepResult::Kind::Value: return "value";
    case MixedStepResult::Kind::Stuck: return "stuck";
    case MixedStepResult::Kind::Stepped: return "exhausted";
  }
  return "?";
}

void run_prob(const RunConfig& cfg, const Loaded& l, Report& r) {
  if (cfg.seed) {
    TermPtr t = sample_run(l.term, *cfg.seed, cfg.fuel);
    const bool value = is_value_prob(t);
    if (is_json(cfg)) {
      json j = {{"calculus", "prob"}, {"type", to_string(*l.type)}, {"seed", *cfg.seed}, {"result", print(t)},
                {"status", value ? "value" : "stuck"}};
      j["density"] = t->kind == TermKind::Rho ? mat_json(*t->rho) : json(nullptr);
      r.out = j.dump(2) + "\n";
    } else {
      r.out = "type: " + to_string(*l.type) + "\nsample (seed " + std::to_string(*cfg.seed) + "): " + print(t) + "\n";
      if (!value) r.out += "normal form, not a value: " + std::string(to_string(stuck_reason(t, Calculus::Prob))) + "\n";
      if (t->kind == TermKind::Rho) r.out += "density:\n" + rows((t->rho->matrix()));
    }
    return;
  }
  TraceOptions opts;
  opts.with_types = false;
  Distribution dist = final_distribution(build_trace(l.term, cfg.fuel, opts));
  std::optional<DensityMatrix> density;
  try {
    density = distribution_density(dist);
  } catch (const EvalError&) {
  }
  std::vector<std::string> notes;
  for (const auto& [p, t] : dist)
    if (!is_value_prob(t)) notes.push_back(print(t) + ": " + std::string(to_string(stuck_reason(t, Calculus::Prob))));
  if (is_json(cfg)) {
    json d = json::array();
    for (const auto& [p, t] : dist) d.push_back({{"p", p}, {"term", print(t)}, {"value", is_value_prob(t)}});
    json j = {{"calculus", "prob"}, {"type", to_string(*l.type)}, {"distribution", d}};
    j["density"] = density ? mat_json(*density) : json(nullptr);
    r.out = j.dump(2) + "\n";
  } else {
    r.out = "type: " + to_string(*l.type) + "\ndistribution:\n";
    for (const auto& [p, t] : dist) r.out += "  " + format_number(p) + "  " + print(t) + "\n";
    for (const auto& n : notes) r.out += "normal form, not a value: " + n + "\n";
    if (density) r.out += "density:\n" + rows((density->matrix()));
  }
}

void run_mixed_cmd(const RunConfig& cfg, const Loaded& l, Report& r) {
  MixedRun run = run_mixed(l.term, cfg.fuel);
  const TermPtr& t = run.result;
  if (is_json(cfg)) {
    json j = {{"calculus", "mixed"}, {"type", to_string(*l.type)}, {"result", print(t)},
              {"steps", run.log.size()}, {"status", status_word(run.status)}};
    j["stuck_reason"] = run.status == MixedStepResult::Kind::Stuck ? json(to_string(run.reason)) : json(nullptr);
    j["density"] = t->kind == TermKind::Rho ? mat_json(*t->rho) : json(nullptr);
    r.out = j.dump(2) + "\n";
  } else {
    r.out = "type: " + to_string(*l.type) + "\nresult: " + print(t) + "\nsteps: " + std::to_string(run.log.size()) + "\n";
    if (run.status == MixedStepResult::Kind::Stuck)
      r.out += "normal form, not a value: " + std::string(to_string(run.reason)) + "\n";
    if (t->kind == TermKind::Rho) r.out += "density:\n" + rows((t->rho->matrix()));
  }
  if (run.status == MixedStepResult::Kind::Stepped) {
    r.status = Status::FuelExhausted;
    r.err += "fuel exhausted after " + std::to_string(cfg.fuel) + " steps\n";
  } else if (run.status == MixedStepResult::Kind::Stuck && run.reason == StuckReason::MeasurementNotObservable) {
    r.status = Status::Stuck;
    r.err += "stuck: MeasurementNotObservable (a measurement result is never consumed by letcase*)\n";
  }
}

std::string mixed_log_dot(const TermPtr& start, const std::vector<MixedLogEntry>& log) {
  auto esc = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '"' || c == '\\') o += '\\';
      o += c;
    }
    return o;
  };
  std::string out = "digraph trace {\n  node [shape=box, fontname=\"monospace\"];\n";
  out += "  n0 [label=\"" + esc(print(start)) + "\"];\n";
  for (std::size_t i = 0; i < log.size(); ++i) {
    out += "  n" + std::to_string(i + 1) + " [label=\"" + esc(print(log[i].term)) + "\"];\n";
    out += "  n" + std::to_string(i) + " -> n" + std::to_string(i + 1) + " [label=\"" + log[i].rule + "\"];\n";
  }
  return out + "}\n";
}

}  // namespace

Report cmd_typecheck(const RunConfig& cfg, std::string_view name, std::string_view source) {
  return guarded(cfg, name, [&](Report& r) {
    auto l = load(cfg, name, source, r);
    if (!l) return;
    TypingOptions opts;
    opts.closed_branches = cfg.strict_letcase;
    if (is_json(cfg)) {
      r.out = json{{"calculus", to_string(l->calculus)}, {"type", to_string(*l->type)},
                   {"principal", principal_type({}, l->term, l->calculus, opts)}}
                  .dump(2) +
              "\n";
    } else {
      r.out = to_string(*l->type) + "\n";
    }
  });
}

Report cmd_run(const RunConfig& cfg, std::string_view name, std::string_view source) {
  return guarded(cfg, name, [&](Report& r) {
    auto l = load(cfg, name, source, r);
    if (!l) return;
    if (l->calculus == Calculus::Prob) {
      run_prob(cfg, *l, r);
    } else {
      run_mixed_cmd(cfg, *l, r);
    }
  });
}

Report cmd_trace(const RunConfig& cfg, std::string_view name, std::string_view source) {
  return guarded(cfg, name, [&](Report& r) {
    auto l = load(cfg, name, source, r);
    if (!l) return;
    if (l->calculus == Calculus::Prob) {
      TraceNodePtr tree = build_trace(l->term, cfg.fuel);
      switch (cfg.output) {
        case OutputFormat::Text: r.out = trace_to_text(tree); break;
        case OutputFormat::Json: r.out = trace_to_json(tree) + "\n"; break;
        case OutputFormat::Dot: r.out = trace_to_dot(tree); break;
      }
      const TraceStats st = trace_stats(tree);
      if (st.exhausted) {
        r.status = Status::FuelExhausted;
        r.err += std::to_string(st.exhausted) + " path(s) ran out of fuel\n";
      }
      return;
    }
    MixedRun run = run_mixed(l->term, cfg.fuel);
    switch (cfg.output) {
      case OutputFormat::Text:
        r.out = "0  " + print(l->term) + "\n";
        for (std::size_t i = 0; i < run.log.size(); ++i)
          r.out += std::to_string(i + 1) + "  [" + run.log[i].rule + "] " + print(run.log[i].term) + "\n";
        r.out += "(" + status_word(run.status) +
                 (run.status == MixedStepResult::Kind::Stuck ? ": " + std::string(to_string(run.reason)) : "") + ")\n";
        break;
      case OutputFormat::Json: r.out = log_to_jsonl(run.log); break;
      case OutputFormat::Dot: r.out = mixed_log_dot(l->term, run.log); break;
    }
    if (run.status == MixedStepResult::Kind::Stepped) {
      r.status = Status::FuelExhausted;
      r.err += "fuel exhausted after " + std::to_string(cfg.fuel) + " steps\n";
    } else if (run.status == MixedStepResult::Kind::Stuck && run.reason == StuckReason::MeasurementNotObservable) {
      r.status = Status::Stuck;
      r.err += "stuck: MeasurementNotObservable\n";
    }
  });
}

Report cmd_denote(const RunConfig& cfg, std::string_view name, std::string_view source) {
  return guarded(cfg, name, [&](Report& r) {
    auto l = load(cfg, name, source, r);
    if (!l) return;
    TripletSet raw = interp_raw(l->term);
    TripletSet merged = merge(raw);
    SemValue sem = fsem(l->term);
    if (is_json(cfg)) {
      json j = {{"type", to_string(*l->type)},
                {"raw", json::parse(to_json(raw))},
                {"triplets", json::parse(to_json(merged))},
                {"weight", weight(merged)}};
      j["matrix"] = sem.is_matrix() ? mat_json(sem.matrix()) : json(nullptr);
      r.out = j.dump(2) + "\n";
    } else {
      r.out = "type: " + to_string(*l->type) + "\n";
      r.out += "triplets (" + std::to_string(raw.size()) + "): " + to_string(raw) + "\n";
      r.out += "merged (" + std::to_string(merged.size()) + "): " + to_string(merged) + "\n";
      r.out += "weight: " + format_number(weight(merged)) + "\n";
      if (sem.is_matrix()) {
        r.out += "matrix:\n" + rows((sem.matrix().matrix()));
      } else {
        r.out += "matrix: none, the interpretation is a function\n";
      }
    }
  });
}

Report cmd_equiv(const RunConfig& cfg, std::string_view name_a, std::string_view source_a, std::string_view name_b,
                 std::string_view source_b) {
  return guarded(cfg, name_a, [&](Report& r) {
    auto a = load(cfg, name_a, source_a, r);
    if (!a) return;
    auto b = load(cfg, name_b, source_b, r);
    if (!b) return;
    if (!same_type(a->type, b->type) || !a->type->is_base()) {
      const std::string msg = "programs must share a base type, got " + to_string(*a->type) + " and " +
                              to_string(*b->type);
      fail(cfg, r, Status::Mismatch, {{"kind", "TypeError"}, {"code", "TypeMismatch"}, {"message", msg}},
           std::string(name_a) + ": type error [TypeMismatch]: " + msg);
      return;
    }
    const DensityMatrix da = fsem(a->term).matrix();
    const DensityMatrix db = fsem(b->term).matrix();
    const double dev = (da.matrix() - db.matrix()).max_abs();
    const bool eq = dev <= cfg.tolerance;
    if (is_json(cfg)) {
      r.out = json{{"verdict", eq ? "EQUIVALENT" : "DISTINCT"}, {"deviation", dev}, {"type", to_string(*a->type)},
                   {"a", mat_json(da)}, {"b", mat_json(db)}}
                  .dump(2) +
              "\n";
    } else {
      r.out = std::string(eq ? "EQUIVALENT" : "DISTINCT") + " (max deviation " + format_number(dev) + ")\n";
    }
    if (!eq) r.status = Status::Mismatch;
  });
}

}  // namespace ldm
