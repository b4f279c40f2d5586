#include "nsrag/evalfuncs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

constexpr double kFloatDefaultTolerance = 1e-6;

std::string strip_copy(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower_copy(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string strip_fences(const std::string& text) {
  std::string t = strip_copy(text);
  if (t.rfind("```", 0) != 0) return text;
  size_t line_end = t.find('\n');
  if (line_end == std::string::npos) return text;
  size_t close = t.rfind("```");
  if (close <= line_end) return text;
  return t.substr(line_end + 1, close - line_end - 1);
}

// ---------------------------------------------------------------------------
// kwargs plumbing
// ---------------------------------------------------------------------------

const Value* find_kwarg(const Value::Map& kwargs, const std::string& name) {
  auto it = kwargs.find(name);
  return it == kwargs.end() ? nullptr : &it->second;
}

const Value& required_kwarg(const Value::Map& kwargs, const std::string& func,
                            const std::string& name) {
  const Value* v = find_kwarg(kwargs, name);
  if (!v) raise(ErrorKind::KwargsMismatch, func + " requires the kwarg '" + name + "'");
  return *v;
}

bool bool_kwarg(const Value::Map& kwargs, const std::string& name, bool fallback) {
  const Value* v = find_kwarg(kwargs, name);
  if (!v) return fallback;
  if (v->is_bool()) return v->as_bool();
  if (v->is_string()) return lower_copy(v->as_string()) == "true";
  return fallback;
}

// ---------------------------------------------------------------------------
// Coercions and loose equality
// ---------------------------------------------------------------------------

std::optional<bool> to_bool(const Value& v) {
  if (v.is_bool()) return v.as_bool();
  if (v.is_string()) {
    std::string s = lower_copy(strip_copy(v.as_string()));
    if (s == "true" || s == "yes") return true;
    if (s == "false" || s == "no") return false;
  }
  return std::nullopt;
}

std::optional<std::int64_t> to_int(const Value& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_float() && v.as_float() == std::floor(v.as_float())) {
    return static_cast<std::int64_t>(v.as_float());
  }
  if (v.is_string()) {
    auto lit = parse_python_literal(strip_copy(v.as_string()));
    if (lit && lit->is_int()) return lit->as_int();
    if (lit && lit->is_float() && lit->as_float() == std::floor(lit->as_float())) {
      return static_cast<std::int64_t>(lit->as_float());
    }
  }
  return std::nullopt;
}

std::optional<double> to_number(const Value& v) {
  if (v.is_number()) return v.as_double();
  if (v.is_string()) {
    auto lit = parse_python_literal(strip_copy(v.as_string()));
    if (lit && lit->is_number()) return lit->as_double();
  }
  return std::nullopt;
}

std::string to_text_rep(const Value& v) {
  return v.is_string() ? v.as_string() : v.to_text();
}

/// String normalization shared by the matchers.
std::string normalize_string(const std::string& s, bool lowercase, bool strip) {
  std::string out = strip ? strip_copy(s) : s;
  if (lowercase) out = lower_copy(out);
  return out;
}

Value normalize_value(const Value& v, bool lowercase) {
  if (v.is_string()) return Value(normalize_string(v.as_string(), lowercase, true));
  if (v.is_list()) {
    Value::List list;
    for (const auto& e : v.as_list()) list.push_back(normalize_value(e, lowercase));
    return Value(std::move(list));
  }
  if (v.is_map()) {
    Value::Map map;
    for (const auto& [k, e] : v.as_map()) {
      map[normalize_string(k, lowercase, true)] = normalize_value(e, lowercase);
    }
    return Value(std::move(map));
  }
  return v;
}

bool loose_equal(const Value& a, const Value& b, bool ignore_order);

bool list_equal(const Value::List& a, const Value::List& b, bool ignore_order) {
  if (a.size() != b.size()) return false;
  if (!ignore_order) {
    for (size_t i = 0; i < a.size(); i++) {
      if (!loose_equal(a[i], b[i], ignore_order)) return false;
    }
    return true;
  }
  std::vector<bool> used(b.size(), false);
  for (const auto& ea : a) {
    bool matched = false;
    for (size_t j = 0; j < b.size() && !matched; j++) {
      if (!used[j] && loose_equal(ea, b[j], ignore_order)) {
        used[j] = true;
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

bool loose_equal(const Value& a, const Value& b, bool ignore_order) {
  if (a.is_null() || b.is_null()) return a.is_null() && b.is_null();
  if (a.is_bool() || b.is_bool()) {
    auto ba = to_bool(a), bb = to_bool(b);
    return ba && bb && *ba == *bb;
  }
  if (a.is_number() || b.is_number()) {
    auto na = to_number(a), nb = to_number(b);
    if (na && nb) return std::fabs(*na - *nb) <= kFloatDefaultTolerance;
    return false;
  }
  if (a.is_list() && b.is_list()) return list_equal(a.as_list(), b.as_list(), ignore_order);
  if (a.is_map() && b.is_map()) {
    const auto& ma = a.as_map();
    const auto& mb = b.as_map();
    if (ma.size() != mb.size()) return false;
    for (const auto& [k, v] : ma) {
      auto it = mb.find(k);
      if (it == mb.end() || !loose_equal(v, it->second, ignore_order)) return false;
    }
    return true;
  }
  if (a.is_string() && b.is_string()) return a.as_string() == b.as_string();
  return false;
}

/// Strings that hold a structured literal are reparsed first, per the
/// "parsing them both as Python-style lists or dictionaries" contract.
Value reparse(const Value& v) {
  if (!v.is_string()) return v;
  auto lit = parse_python_literal(strip_copy(strip_fences(v.as_string())));
  if (lit && (lit->is_list() || lit->is_map())) return *lit;
  return v;
}

EvalResult result_of(bool passed, const std::string& detail) {
  EvalResult r;
  r.score = passed ? 1.0 : 0.0;
  r.detail = detail;
  return r;
}

EvaluatorSpec spec_from_value(const Value& v, const char* who) {
  if (!v.is_map() || !v.as_map().count("eval_func") ||
      !v.as_map().at("eval_func").is_string()) {
    raise(ErrorKind::KwargsMismatch,
          std::string(who) + " sub-evaluators must be maps with an 'eval_func' string");
  }
  EvaluatorSpec spec;
  spec.eval_func = v.as_map().at("eval_func").as_string();
  auto it = v.as_map().find("eval_kwargs");
  if (it != v.as_map().end()) {
    if (!it->second.is_map()) {
      raise(ErrorKind::KwargsMismatch, std::string(who) + ": eval_kwargs must be a map");
    }
    spec.eval_kwargs = it->second.as_map();
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Judge plumbing
// ---------------------------------------------------------------------------

std::string judge_call(Gateway* judge, const std::string& func, const std::string& prompt,
                       EvalResult* result, const std::string& model_override = "") {
  if (!judge) {
    raise(ErrorKind::JudgeUnavailable, func + " needs an LLM judge, none is configured");
  }
  GenParams params = judge->config().params;
  params.model = model_override.empty() ? judge->config().model : model_override;
  params.temperature = 0.0;
  std::string reply = judge->chat(
      {ChatMessage::system("You are a strict and careful grader for a question answering "
                           "benchmark over research papers."),
       ChatMessage::user(prompt)},
      params);
  result->judge_transcript.push_back(prompt);
  result->judge_transcript.push_back(reply);
  return reply;
}

std::optional<bool> parse_verdict(const std::string& reply) {
  std::string lower = lower_copy(reply);
  size_t pos = lower.rfind("verdict:");
  if (pos == std::string::npos) return std::nullopt;
  std::string rest = strip_copy(lower.substr(pos + 8));
  if (rest.rfind("yes", 0) == 0) return true;
  if (rest.rfind("no", 0) == 0) return false;
  return std::nullopt;
}

std::optional<double> parse_score_fraction(const std::string& reply) {
  std::string lower = lower_copy(reply);
  size_t pos = lower.rfind("score:");
  if (pos == std::string::npos) return std::nullopt;
  const char* p = lower.c_str() + pos + 6;
  char* end = nullptr;
  double k = std::strtod(p, &end);
  if (end == p) return std::nullopt;
  while (*end == ' ') end++;
  if (*end != '/') return std::nullopt;
  const char* q = end + 1;
  double n = std::strtod(q, &end);
  if (end == q || n <= 0) return std::nullopt;
  return std::clamp(k / n, 0.0, 1.0);
}

EvalResult verdict_result(Gateway* judge, const std::string& func, const std::string& prompt,
                          const std::string& model_override = "") {
  EvalResult result;
  std::string reply = judge_call(judge, func, prompt, &result, model_override);
  auto verdict = parse_verdict(reply);
  if (!verdict) {
    result.score = 0.0;
    result.detail = "judge reply carries no VERDICT line";
    return result;
  }
  result.score = *verdict ? 1.0 : 0.0;
  result.detail = *verdict ? "judge verdict: yes" : "judge verdict: no";
  return result;
}

std::string numbered_points(const Value& points) {
  std::string out;
  if (points.is_list()) {
    int n = 0;
    for (const auto& p : points.as_list()) {
      out += std::to_string(++n) + ". " + to_text_rep(p) + "\n";
    }
  } else {
    out = to_text_rep(points) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// The dispatch context
// ---------------------------------------------------------------------------

struct EvalContext {
  Gateway* judge;
  std::string question;
};

using EvalFn = std::function<EvalResult(const Value&, const Value::Map&, const EvalContext&)>;

EvalResult evaluate_impl(const Value& pred, const EvaluatorSpec& spec, const EvalContext& ctx);

const std::map<std::string, EvalFn>& registry() {
  static const std::map<std::string, EvalFn> funcs = {
      {"eval_bool_exact_match",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext&) {
         const Value& gold = required_kwarg(kwargs, "eval_bool_exact_match", "gold");
         auto pb = to_bool(pred);
         auto gb = to_bool(gold);
         if (!pb) return result_of(false, "prediction is not a boolean: " + pred.to_literal_text());
         if (!gb) raise(ErrorKind::KwargsMismatch, "gold is not a boolean");
         return result_of(*pb == *gb, *pb == *gb ? "exact boolean match" : "boolean mismatch");
       }},
      {"eval_int_exact_match",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext&) {
         const Value& gold = required_kwarg(kwargs, "eval_int_exact_match", "gold");
         auto pi = to_int(pred);
         auto gi = to_int(gold);
         if (!gi) raise(ErrorKind::KwargsMismatch, "gold is not an integer");
         if (!pi) return result_of(false, "prediction is not an integer: " + pred.to_literal_text());
         return result_of(*pi == *gi, *pi == *gi ? "exact integer match" : "integer mismatch");
       }},
      {"eval_float_exact_match",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext&) {
         const Value& gold = required_kwarg(kwargs, "eval_float_exact_match", "gold");
         auto pf = to_number(pred);
         auto gf = to_number(gold);
         if (!gf) raise(ErrorKind::KwargsMismatch, "gold is not a number");
         if (!pf) return result_of(false, "prediction is not a number: " + pred.to_literal_text());
         if (const Value* precision = find_kwarg(kwargs, "precision")) {
           auto digits = to_int(*precision);
           if (!digits) raise(ErrorKind::KwargsMismatch, "precision must be an integer");
           double scale = std::pow(10.0, static_cast<double>(*digits));
           bool ok = std::llround(*pf * scale) == std::llround(*gf * scale);
           return result_of(ok, "compared at " + std::to_string(*digits) + " decimal places");
         }
         double tolerance = kFloatDefaultTolerance;
         if (const Value* tol = find_kwarg(kwargs, "tolerance")) {
           auto t = to_number(*tol);
           if (!t) raise(ErrorKind::KwargsMismatch, "tolerance must be a number");
           tolerance = *t;
         }
         bool ok = std::fabs(*pf - *gf) <= tolerance;
         return result_of(ok, "|pred - gold| = " + format_double(std::fabs(*pf - *gf)) +
                                  ", tolerance " + format_double(tolerance));
       }},
      {"eval_string_exact_match",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext&) {
         const Value& gold = required_kwarg(kwargs, "eval_string_exact_match", "gold");
         bool lowercase = bool_kwarg(kwargs, "lowercase", true);
         bool strip = bool_kwarg(kwargs, "strip", true);
         std::string p = normalize_string(to_text_rep(pred), lowercase, strip);
         std::string g = normalize_string(to_text_rep(gold), lowercase, strip);
         return result_of(p == g, p == g ? "exact string match"
                                         : "string mismatch: '" + p + "' vs '" + g + "'");
       }},
      {"eval_structured_object_exact_match",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext&) {
         const Value& gold = required_kwarg(kwargs, "eval_structured_object_exact_match", "gold");
         bool ignore_order = bool_kwarg(kwargs, "ignore_order", false);
         bool lowercase = bool_kwarg(kwargs, "lowercase", true);
         Value p = normalize_value(reparse(pred), lowercase);
         Value g = normalize_value(reparse(gold), lowercase);
         bool ok = loose_equal(p, g, ignore_order);
         return result_of(ok, ok ? "structured objects match"
                                 : "structured mismatch: " + p.to_literal_text() + " vs " +
                                       g.to_literal_text());
       }},
      {"eval_element_included",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext&) {
         const Value& gold = required_kwarg(kwargs, "eval_element_included", "gold");
         bool lowercase = bool_kwarg(kwargs, "lowercase", true);
         if (!gold.is_list()) raise(ErrorKind::KwargsMismatch, "gold must be a list");
         Value p = normalize_value(reparse(pred), lowercase);
         for (const auto& e : gold.as_list()) {
           if (loose_equal(p, normalize_value(e, lowercase), false)) {
             return result_of(true, "prediction appears in the answer list");
           }
         }
         return result_of(false, "prediction is not in the answer list");
       }},
      {"eval_element_list_included",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext&) {
         const Value& gold = required_kwarg(kwargs, "eval_element_list_included", "gold");
         bool lowercase = bool_kwarg(kwargs, "lowercase", true);
         if (!gold.is_list()) raise(ErrorKind::KwargsMismatch, "gold must be a list");
         Value p = normalize_value(reparse(pred), lowercase);
         if (!p.is_list()) return result_of(false, "prediction is not a list");
         Value g = normalize_value(gold, lowercase);
         for (const auto& e : p.as_list()) {
           bool found = false;
           for (const auto& target : g.as_list()) {
             if (loose_equal(e, target, false)) {
               found = true;
               break;
             }
           }
           if (!found) {
             return result_of(false,
                              "element " + e.to_literal_text() + " is not in the answer list");
           }
         }
         return result_of(true, "every prediction element appears in the answer list");
       }},
      {"eval_element_list_overlap",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext&) {
         const Value& gold = required_kwarg(kwargs, "eval_element_list_overlap", "gold");
         bool lowercase = bool_kwarg(kwargs, "lowercase", true);
         std::int64_t min_overlap = 1;
         if (const Value* m = find_kwarg(kwargs, "min_overlap")) {
           auto mi = to_int(*m);
           if (!mi || *mi < 1) raise(ErrorKind::KwargsMismatch, "min_overlap must be >= 1");
           min_overlap = *mi;
         }
         if (!gold.is_list()) raise(ErrorKind::KwargsMismatch, "gold must be a list");
         Value p = normalize_value(reparse(pred), lowercase);
         if (!p.is_list()) {
           p = Value(Value::List{p});  // a scalar counts as a one-element list
         }
         Value g = normalize_value(gold, lowercase);
         std::int64_t overlap = 0;
         std::vector<bool> used(g.as_list().size(), false);
         for (const auto& e : p.as_list()) {
           for (size_t j = 0; j < g.as_list().size(); j++) {
             if (!used[j] && loose_equal(e, g.as_list()[j], false)) {
               used[j] = true;
               overlap++;
               break;
             }
           }
         }
         return result_of(overlap >= min_overlap,
                          "overlap " + std::to_string(overlap) + ", required " +
                              std::to_string(min_overlap));
       }},
      {"eval_paper_relevance_with_reference_answer",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext&) {
         const Value& reference = required_kwarg(
             kwargs, "eval_paper_relevance_with_reference_answer", "reference_answer");
         auto normalize_title = [](const std::string& s) {
           std::string out;
           bool in_space = false;
           for (char c : strip_copy(s)) {
             if (std::isspace(static_cast<unsigned char>(c))) {
               in_space = true;
               continue;
             }
             if (in_space && !out.empty()) out += ' ';
             in_space = false;
             out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
           }
           while (!out.empty() && (out.back() == '.' || out.back() == '!' || out.back() == '?')) {
             out.pop_back();
           }
           return out;
         };
         std::string p = normalize_title(to_text_rep(pred));
         std::string g = normalize_title(to_text_rep(reference));
         return result_of(p == g, p == g ? "retrieved paper matches the reference"
                                         : "retrieved '" + p + "', expected '" + g + "'");
       }},
      {"eval_reference_answer_with_llm",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext& ctx) {
         const Value& reference =
             required_kwarg(kwargs, "eval_reference_answer_with_llm", "reference_answer");
         std::string prompt =
             "Decide whether the candidate answer is semantically equivalent to the reference "
             "answer for the question.\n\n[Question]: " + ctx.question +
             "\n[Reference Answer]: " + to_text_rep(reference) +
             "\n[Candidate Answer]: " + to_text_rep(pred) +
             "\n\nReply with exactly one line: VERDICT: yes or VERDICT: no.";
         return verdict_result(ctx.judge, "eval_reference_answer_with_llm", prompt);
       }},
      {"eval_scoring_points_with_llm",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext& ctx) {
         const Value& points =
             required_kwarg(kwargs, "eval_scoring_points_with_llm", "scoring_points");
         std::string prompt =
             "Check whether EVERY scoring point below is mentioned or entailed by the candidate "
             "answer.\n\n[Question]: " + ctx.question + "\n[Scoring Points]:\n" +
             numbered_points(points) + "[Candidate Answer]: " + to_text_rep(pred) +
             "\n\nReply with exactly one line: VERDICT: yes if all points are covered, "
             "otherwise VERDICT: no.";
         return verdict_result(ctx.judge, "eval_scoring_points_with_llm", prompt);
       }},
      {"eval_partial_scoring_points_with_llm",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext& ctx) {
         const Value& points =
             required_kwarg(kwargs, "eval_partial_scoring_points_with_llm", "scoring_points");
         size_t n = points.is_list() ? points.as_list().size() : 1;
         std::string prompt =
             "Count how many of the scoring points below are mentioned or entailed by the "
             "candidate answer.\n\n[Question]: " + ctx.question + "\n[Scoring Points]:\n" +
             numbered_points(points) + "[Candidate Answer]: " + to_text_rep(pred) +
             "\n\nReply with exactly one line: SCORE: k/" + std::to_string(n) +
             " where k is the number of covered points.";
         EvalResult result;
         std::string reply =
             judge_call(ctx.judge, "eval_partial_scoring_points_with_llm", prompt, &result);
         auto fraction = parse_score_fraction(reply);
         if (!fraction) {
           result.score = 0.0;
           result.detail = "judge reply carries no SCORE: k/n line";
           return result;
         }
         result.score = *fraction;
         result.detail = "judge scored " + format_double(*fraction);
         return result;
       }},
      {"eval_complex_math_formula_with_llm",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext& ctx) {
         const Value& gold = required_kwarg(kwargs, "eval_complex_math_formula_with_llm", "gold");
         std::string prompt =
             "Decide whether the two LaTeX formulas below are mathematically equivalent "
             "(ignoring formatting, variable naming consistency preserved).\n\n[Reference "
             "Formula]: " + to_text_rep(gold) + "\n[Candidate Formula]: " + to_text_rep(pred) +
             "\n\nReply with exactly one line: VERDICT: yes or VERDICT: no.";
         return verdict_result(ctx.judge, "eval_complex_math_formula_with_llm", prompt);
       }},
      {"eval_conjunction",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext& ctx) {
         const Value& evals = required_kwarg(kwargs, "eval_conjunction", "evaluators");
         if (!evals.is_list()) raise(ErrorKind::KwargsMismatch, "evaluators must be a list");
         Value p = reparse(pred);
         if (!p.is_list() || p.as_list().size() != evals.as_list().size()) {
           return result_of(false, "prediction must be a list with one element per "
                                   "sub-evaluator");
         }
         for (size_t i = 0; i < evals.as_list().size(); i++) {
           EvaluatorSpec sub = spec_from_value(evals.as_list()[i], "eval_conjunction");
           EvalResult r = evaluate_impl(p.as_list()[i], sub, ctx);
           if (!r.passed()) {
             return result_of(false, "element " + std::to_string(i) + " failed: " + r.detail);
           }
         }
         return result_of(true, "all sub-evaluations passed");
       }},
      {"eval_disjunction",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext& ctx) {
         const Value& evals = required_kwarg(kwargs, "eval_disjunction", "evaluators");
         if (!evals.is_list()) raise(ErrorKind::KwargsMismatch, "evaluators must be a list");
         Value p = reparse(pred);
         if (!p.is_list() || p.as_list().size() != evals.as_list().size()) {
           return result_of(false, "prediction must be a list with one element per "
                                   "sub-evaluator");
         }
         for (size_t i = 0; i < evals.as_list().size(); i++) {
           EvaluatorSpec sub = spec_from_value(evals.as_list()[i], "eval_disjunction");
           EvalResult r = evaluate_impl(p.as_list()[i], sub, ctx);
           if (r.passed()) {
             return result_of(true, "element " + std::to_string(i) + " passed");
           }
         }
         return result_of(false, "no element passed its sub-evaluation");
       }},
      {"eval_negation",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext& ctx) {
         const Value& inner = required_kwarg(kwargs, "eval_negation", "evaluator");
         EvaluatorSpec sub = spec_from_value(inner, "eval_negation");
         EvalResult r = evaluate_impl(pred, sub, ctx);
         return result_of(!r.passed(), "negation of: " + r.detail);
       }},
      {"eval_m3sciqa",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext& ctx) {
         const Value& gold = required_kwarg(kwargs, "eval_m3sciqa", "gold");
         std::string prompt =
             "You are evaluating a long-form answer to a multi-document scientific question.\n\n"
             "[Question]: " + ctx.question + "\n[Gold Answer]: " + to_text_rep(gold) +
             "\n[Predicted Answer]: " + to_text_rep(pred) +
             "\n\nDoes the predicted answer convey the same final result as the gold answer? "
             "Reply with exactly one line: VERDICT: yes or VERDICT: no.";
         return verdict_result(ctx.judge, "eval_m3sciqa", prompt, "gpt-4-0125-preview");
       }},
      {"eval_scidqa",
       [](const Value& pred, const Value::Map& kwargs, const EvalContext& ctx) {
         const Value& gold = required_kwarg(kwargs, "eval_scidqa", "gold");
         std::string prompt =
             "You are evaluating a long-form answer to a deep question about a scientific "
             "paper.\n\n[Question]: " + ctx.question + "\n[Gold Answer]: " + to_text_rep(gold) +
             "\n[Predicted Answer]: " + to_text_rep(pred) +
             "\n\nDoes the predicted answer match the gold answer in substance? Reply with "
             "exactly one line: VERDICT: yes or VERDICT: no.";
         return verdict_result(ctx.judge, "eval_scidqa", prompt, "gpt-4o-mini");
       }},
  };
  return funcs;
}

EvalResult evaluate_impl(const Value& pred, const EvaluatorSpec& spec, const EvalContext& ctx) {
  auto it = registry().find(spec.eval_func);
  if (it == registry().end()) {
    raise(ErrorKind::UnknownEvalFunc, "'" + spec.eval_func + "' is not a registered function");
  }
  return it->second(pred, spec.eval_kwargs, ctx);
}

}  // namespace

Value parse_literal(const std::string& text) {
  std::string body = strip_fences(text);
  if (auto v = parse_python_literal(strip_copy(body))) return *v;
  return Value(strip_copy(body));
}

bool eval_func_registered(const std::string& name) { return registry().count(name) > 0; }

std::vector<std::string> registered_eval_funcs() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

EvalResult evaluate(const Value& prediction, const EvaluatorSpec& spec, Gateway* judge,
                    const std::string& question) {
  return evaluate_impl(prediction, spec, EvalContext{judge, question});
}

}  // namespace nsrag
