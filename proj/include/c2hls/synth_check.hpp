#pragma once

#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "c2hls/c_frontend.hpp"
#include "c2hls/c_lexer.hpp"
#include "c2hls/util.hpp"

namespace c2hls {

enum class LintCategory {
  DynamicMemory,
  Recursion,
  InterfacePointer,
  UnsupportedStdlib,
  UnboundedStructure,
  MultiProcess,
  FloatingPoint,
  UnboundedLoop,
};

inline const char* to_string(LintCategory c) {
  switch (c) {
    case LintCategory::DynamicMemory: return "DynamicMemory";
    case LintCategory::Recursion: return "Recursion";
    case LintCategory::InterfacePointer: return "InterfacePointer";
    case LintCategory::UnsupportedStdlib: return "UnsupportedStdlib";
    case LintCategory::UnboundedStructure: return "UnboundedStructure";
    case LintCategory::MultiProcess: return "MultiProcess";
    case LintCategory::FloatingPoint: return "FloatingPoint";
    case LintCategory::UnboundedLoop: return "UnboundedLoop";
  }
  return "?";
}

inline std::optional<LintCategory> lint_category_from_string(const std::string& s) {
  static const std::map<std::string, LintCategory> m = {
      {"DynamicMemory", LintCategory::DynamicMemory},
      {"Recursion", LintCategory::Recursion},
      {"InterfacePointer", LintCategory::InterfacePointer},
      {"UnsupportedStdlib", LintCategory::UnsupportedStdlib},
      {"UnboundedStructure", LintCategory::UnboundedStructure},
      {"MultiProcess", LintCategory::MultiProcess},
      {"FloatingPoint", LintCategory::FloatingPoint},
      {"UnboundedLoop", LintCategory::UnboundedLoop}};
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

// Repair-strategy asset key for each category. The streaming asset doubles as
// the loop-structure repair guide.
inline std::string icl_key_for(LintCategory c) {
  switch (c) {
    case LintCategory::DynamicMemory: return "dynamic_memory";
    case LintCategory::Recursion: return "recursion";
    case LintCategory::InterfacePointer: return "interface_pointer";
    case LintCategory::UnsupportedStdlib: return "unsupported_stdlib";
    case LintCategory::UnboundedStructure: return "unbounded_structure";
    case LintCategory::MultiProcess: return "multi_process";
    case LintCategory::FloatingPoint: return "floating_point";
    case LintCategory::UnboundedLoop: return "streaming";
  }
  return "";
}

struct LintDiagnostic {
  LintCategory category;
  int line = 0;
  int col = 0;
  std::string message;
  std::string icl_key;
};

struct SynthResult {
  bool ok = false;
  std::vector<LintDiagnostic> diagnostics;
  std::string tool_log;
  std::string adapter;  // "lint" or "command"
};

struct LintOptions {
  std::set<std::string> alloc_fns = {"malloc", "calloc", "realloc", "free",
                                     "aligned_alloc", "posix_memalign", "strdup"};
  std::set<std::string> stdio_fns = {
      "printf", "fprintf", "puts",  "putchar", "getchar", "gets",   "fgets",
      "fputs",  "scanf",   "fscanf", "sscanf",  "fopen",   "fclose", "fread",
      "fwrite", "fseek",   "ftell",  "rewind",  "perror",  "fflush"};
  std::set<std::string> format_fns = {"sprintf", "snprintf", "vsprintf", "vsnprintf"};
  std::set<std::string> process_fns = {"exit", "_Exit", "abort", "system",
                                       "atexit", "signal", "raise", "longjmp", "setjmp"};
  std::set<std::string> thread_fns = {"fork",         "vfork",       "clone",
                                      "pthread_create", "pthread_join", "thrd_create",
                                      "thrd_join",     "wait",        "waitpid"};
};

namespace detail {

struct LoopInfo {
  std::string keyword;         // for / while / do
  int line = 0;
  int col = 0;
  size_t body_begin = 0;       // token indices
  size_t body_end = 0;
  bool bounded = false;
};

// Canonical bounded loop: `for (ident = CONST; ident relop CONST; ident step)`
// with the step a ++/--/+=/-= of a constant. do { } while (0) is also
// accepted as the common macro idiom. Everything else has no static bound.
inline std::vector<LoopInfo> analyze_loops(const std::vector<Token>& toks, size_t begin,
                                           size_t end,
                                           const std::map<std::string, std::string>& defines) {
  std::vector<LoopInfo> loops;
  static const std::set<std::string> relops = {"<", ">", "<=", ">=", "!=", "=="};

  auto is_const = [&](size_t b, size_t e) {
    return eval_const_expr(toks, b, e, defines).has_value();
  };

  for (size_t i = begin; i < end; ++i) {
    if (toks[i].kind != TokKind::Keyword) continue;
    const std::string& kw = toks[i].text;
    if (kw != "for" && kw != "while" && kw != "do") continue;

    LoopInfo info;
    info.keyword = kw;
    info.line = toks[i].line;
    info.col = toks[i].col;

    if (kw == "do") {
      // do <stmt> while (cond); bounded only when cond is the constant 0
      size_t j = i + 1;
      size_t body_b = j, body_e = j;
      if (j < end && toks[j].text == "{") {
        body_e = match_forward(toks, j, "{", "}");
        body_b = j + 1;
        j = body_e + 1;
      } else {
        while (j < end && toks[j].text != ";") ++j;
        body_e = j;
        ++j;
      }
      info.body_begin = body_b;
      info.body_end = body_e;
      if (j < end && toks[j].text == "while" && j + 1 < end && toks[j + 1].text == "(") {
        size_t close = match_forward(toks, j + 1, "(", ")");
        auto v = eval_const_expr(toks, j + 2, close, defines);
        info.bounded = v.has_value() && *v == 0;
      }
      loops.push_back(info);
      continue;
    }

    if (i + 1 >= end || toks[i + 1].text != "(") continue;
    size_t close = match_forward(toks, i + 1, "(", ")");
    if (close >= end) continue;

    // loop body extent
    size_t after = close + 1;
    if (after < end && toks[after].text == "{") {
      info.body_begin = after + 1;
      info.body_end = match_forward(toks, after, "{", "}");
    } else {
      info.body_begin = after;
      size_t j = after;
      int depth = 0;
      while (j < end) {
        if (toks[j].text == "(" || toks[j].text == "[" || toks[j].text == "{") ++depth;
        if (toks[j].text == ")" || toks[j].text == "]" || toks[j].text == "}") --depth;
        if (toks[j].text == ";" && depth == 0) break;
        ++j;
      }
      info.body_end = j;
    }

    auto cond_bounded = [&](size_t cb, size_t ce) {
      if (cb >= ce) return false;
      // find top-level relational operator
      int depth = 0;
      for (size_t k = cb; k < ce; ++k) {
        if (toks[k].text == "(" || toks[k].text == "[") ++depth;
        else if (toks[k].text == ")" || toks[k].text == "]") --depth;
        else if (depth == 0 && relops.count(toks[k].text)) {
          bool left_ident = (k == cb + 1) && toks[cb].kind == TokKind::Identifier;
          bool right_ident = (k + 2 == ce) && toks[k + 1].kind == TokKind::Identifier;
          if (left_ident && is_const(k + 1, ce)) return true;
          if (right_ident && is_const(cb, k)) return true;
          return false;
        }
      }
      return false;
    };

    if (kw == "while") {
      // a while loop has no static trip bound unless its condition is the
      // constant 0 (dead loop)
      auto v = eval_const_expr(toks, i + 2, close, defines);
      info.bounded = v.has_value() && *v == 0;
      loops.push_back(info);
      continue;
    }

    // for (init; cond; step)
    size_t semi1 = 0, semi2 = 0;
    int depth = 0;
    for (size_t k = i + 2; k < close; ++k) {
      if (toks[k].text == "(" || toks[k].text == "[") ++depth;
      else if (toks[k].text == ")" || toks[k].text == "]") --depth;
      else if (toks[k].text == ";" && depth == 0) {
        if (!semi1) semi1 = k;
        else if (!semi2) { semi2 = k; break; }
      }
    }
    if (!semi1 || !semi2) {
      loops.push_back(info);  // non-canonical for: unbounded
      continue;
    }
    bool init_ok = false;
    {
      size_t b = i + 2, e = semi1;
      // strip a leading type keyword run (for (int i = 0; ...))
      while (b < e && toks[b].kind == TokKind::Keyword && is_type_keyword(toks[b].text)) ++b;
      if (b + 1 < e && toks[b].kind == TokKind::Identifier && toks[b + 1].text == "=")
        init_ok = is_const(b + 2, e);
    }
    bool cond_ok = cond_bounded(semi1 + 1, semi2);
    bool step_ok = false;
    {
      size_t b = semi2 + 1, e = close;
      if (b < e && toks[b].kind == TokKind::Identifier) {
        if (b + 1 < e && (toks[b + 1].text == "++" || toks[b + 1].text == "--"))
          step_ok = true;
        else if (b + 1 < e && (toks[b + 1].text == "+=" || toks[b + 1].text == "-="))
          step_ok = is_const(b + 2, e);
      } else if (b + 1 < e && (toks[b].text == "++" || toks[b].text == "--") &&
                 toks[b + 1].kind == TokKind::Identifier) {
        step_ok = true;
      }
    }
    info.bounded = init_ok && cond_ok && step_ok;
    loops.push_back(info);
  }
  return loops;
}

// token index range [first, last) covering a byte span
inline std::pair<size_t, size_t> body_token_range(const std::vector<Token>& toks,
                                                  size_t body_begin, size_t body_end) {
  size_t b = toks.size(), e = 0;
  for (size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].offset >= body_begin && toks[i].offset < body_end) {
      if (b == toks.size()) b = i;
      e = i + 1;
    }
  }
  if (b == toks.size()) return {0, 0};
  return {b, e};
}

// call sites with token positions, lexically
inline std::vector<size_t> call_site_tokens(const std::vector<Token>& toks, size_t begin,
                                            size_t end) {
  std::vector<size_t> sites;
  for (size_t k = begin; k < end; ++k) {
    if (toks[k].kind != TokKind::Identifier) continue;
    if (k + 1 >= end || toks[k + 1].text != "(") continue;
    if (k == 0) { sites.push_back(k); continue; }
    const Token& prev = toks[k - 1];
    bool decl_like = prev.kind == TokKind::Keyword ? is_type_keyword(prev.text)
                                                   : prev.kind == TokKind::Identifier;
    if (!decl_like) sites.push_back(k);
  }
  return sites;
}

}  // namespace detail

// Deterministic static lint for the HLS incompatibility taxonomy. Diagnostics
// are ordered by source location.
inline SynthResult lint(const std::string& source, const std::string& target_fn,
                        const CallGraph& graph, const LintOptions& opts = LintOptions{}) {
  (void)target_fn;
  LexResult lr = lex(source);
  const auto& toks = lr.tokens;
  std::vector<FunctionInfo> fns = parse_source(source);

  std::vector<LintDiagnostic> diags;
  auto add = [&](LintCategory cat, int line, int col, const std::string& msg) {
    diags.push_back({cat, line, col, msg, icl_key_for(cat)});
  };

  std::map<std::string, const FunctionInfo*> defined;
  for (const auto& f : fns)
    if (f.is_defined_here) defined[f.name] = &f;

  auto token_range_of = [&](const FunctionInfo& f) {
    return detail::body_token_range(toks, f.body_begin, f.body_end);
  };

  // recursion: cycles in the provided graph plus direct self-calls
  std::set<std::string> cyclic = recursive_functions(graph);
  for (const auto& [name, f] : defined) {
    bool self_call = f->call_counts.count(name) > 0;
    if (cyclic.count(name) || self_call) {
      add(LintCategory::Recursion, f->line, 1,
          "function '" + name + "' is recursive; hardware modules cannot contain themselves");
    }
  }

  for (const auto& [name, f] : defined) {
    // interface pointers
    for (const auto& p : f->params) {
      if ((p.is_pointer && !p.is_array) || p.is_fn_pointer) {
        add(LintCategory::InterfacePointer, f->line, 1,
            "parameter '" + p.name + "' of '" + name +
                "' is a pointer without array notation");
      }
      for (const auto& ext : p.extents) {
        if (!ext.has_value()) {
          add(LintCategory::UnboundedStructure, f->line, 1,
              "array parameter '" + p.name + "' of '" + name +
                  "' has no compile-time size");
        }
      }
      if (p.is_float) {
        add(LintCategory::FloatingPoint, f->line, 1,
            "parameter '" + p.name + "' of '" + name + "' uses a floating point type");
      }
    }
    if (contains(" " + f->return_type + " ", " float ") ||
        contains(" " + f->return_type + " ", " double ")) {
      add(LintCategory::FloatingPoint, f->line, 1,
          "function '" + name + "' returns a floating point type");
    }

    auto [tb, te] = token_range_of(*f);

    // denylisted calls
    for (size_t site : detail::call_site_tokens(toks, tb, te)) {
      const std::string& callee = toks[site].text;
      const Token& t = toks[site];
      if (opts.alloc_fns.count(callee)) {
        add(LintCategory::DynamicMemory, t.line, t.col,
            "call to '" + callee + "' requires dynamic memory allocation");
      } else if (opts.thread_fns.count(callee)) {
        add(LintCategory::MultiProcess, t.line, t.col,
            "call to '" + callee + "' spawns or manages a process or thread");
      } else if (opts.stdio_fns.count(callee) || opts.format_fns.count(callee) ||
                 opts.process_fns.count(callee)) {
        add(LintCategory::UnsupportedStdlib, t.line, t.col,
            "call to unsupported standard library function '" + callee + "'");
      }
    }

    // floating point locals, casts, literals inside the body
    std::set<int> float_lines;
    for (size_t k = tb; k < te; ++k) {
      if (toks[k].kind == TokKind::Keyword &&
          (toks[k].text == "float" || toks[k].text == "double") &&
          !float_lines.count(toks[k].line)) {
        float_lines.insert(toks[k].line);
        add(LintCategory::FloatingPoint, toks[k].line, toks[k].col,
            "floating point type used inside '" + name + "'");
      }
    }

    // variable-length arrays in local declarations
    for (size_t k = tb; k + 1 < te; ++k) {
      if (toks[k].kind != TokKind::Identifier || toks[k + 1].text != "[") continue;
      if (k == 0) continue;
      // declaration context: walk back over '*' to the type specifier; a bare
      // '*' after an expression is multiplication, not a declarator
      size_t q = k;
      while (q > tb && toks[q - 1].text == "*") --q;
      if (q == 0 || q == tb) continue;
      const Token& prev = toks[q - 1];
      bool decl_like = prev.kind == TokKind::Keyword && is_type_keyword(prev.text);
      if (!decl_like && prev.kind == TokKind::Identifier && q >= 2) {
        const Token& before = toks[q - 2];
        decl_like = before.text == ";" || before.text == "{" || before.text == "}" ||
                    (before.kind == TokKind::Keyword &&
                     (is_type_keyword(before.text) || before.text == "static" ||
                      before.text == "extern" || before.text == "register"));
      }
      if (!decl_like) continue;
      size_t close = detail::match_forward(toks, k + 1, "[", "]");
      if (close >= te || close == k + 2) continue;  // unsized handled via params
      if (!eval_const_expr(toks, k + 2, close, lr.defines).has_value()) {
        add(LintCategory::UnboundedStructure, toks[k].line, toks[k].col,
            "array '" + toks[k].text + "' has a size that is not a compile-time constant");
      }
    }

    // loops without a static bound
    for (const auto& loop : detail::analyze_loops(toks, tb, te, lr.defines)) {
      if (!loop.bounded) {
        add(LintCategory::UnboundedLoop, loop.line, loop.col,
            "'" + loop.keyword + "' loop has no compile-time bound");
      }
    }
  }

  // flexible array members anywhere in the source
  for (size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i].kind == TokKind::Keyword &&
        (toks[i].text == "struct" || toks[i].text == "union")) {
      size_t j = i + 1;
      if (j < toks.size() && toks[j].kind == TokKind::Identifier) ++j;
      if (j < toks.size() && toks[j].text == "{") {
        size_t close = detail::match_forward(toks, j, "{", "}");
        for (size_t k = j; k + 2 < close; ++k) {
          if (toks[k].kind == TokKind::Identifier && toks[k + 1].text == "[" &&
              toks[k + 2].text == "]") {
            add(LintCategory::UnboundedStructure, toks[k].line, toks[k].col,
                "flexible array member '" + toks[k].text + "'");
          }
        }
      }
    }
  }

  std::stable_sort(diags.begin(), diags.end(), [](const LintDiagnostic& a, const LintDiagnostic& b) {
    return a.line != b.line ? a.line < b.line : a.col < b.col;
  });

  SynthResult res;
  res.adapter = "lint";
  res.diagnostics = std::move(diags);
  res.ok = res.diagnostics.empty();
  std::string log;
  for (const auto& d : res.diagnostics) {
    log += std::to_string(d.line) + ":" + std::to_string(d.col) + ": " +
           to_string(d.category) + ": " + d.message + "\n";
  }
  res.tool_log = log;
  return res;
}

// Convenience: lint a standalone source with a graph built from it.
inline SynthResult lint_standalone(const std::string& source, const std::string& target_fn,
                                   const LintOptions& opts = LintOptions{}) {
  auto fns = parse_source(source);
  CallGraph g;
  try {
    g = build_call_graph(fns, target_fn);
  } catch (const UnknownTop&) {
    // lint still runs on whatever is defined
  }
  return lint(source, target_fn, g, opts);
}

// ---------------------------------------------------------------------------
// streaming-interface classifier

struct StreamingVerdict {
  bool is_streaming = false;
  std::vector<std::string> reasons;  // one per failed criterion
};

inline StreamingVerdict detect_streaming_interface(const std::string& source,
                                                   const std::string& fn_name) {
  StreamingVerdict v;
  LexResult lr = lex(source);
  const auto& toks = lr.tokens;
  auto fns = parse_source(source);
  const FunctionInfo* f = nullptr;
  for (const auto& fn : fns)
    if (fn.name == fn_name && fn.is_defined_here) f = &fn;
  if (!f) {
    v.reasons.push_back("function '" + fn_name + "' is not defined in the source");
    return v;
  }

  bool has_scalar_param = false;
  std::set<std::string> sequence_params;  // array/pointer parameters
  for (const auto& p : f->params) {
    if (!p.is_pointer && !p.is_array && !p.is_fn_pointer && !p.name.empty())
      has_scalar_param = true;
    if ((p.is_pointer || p.is_array) && !p.name.empty()) sequence_params.insert(p.name);
  }
  if (!has_scalar_param)
    v.reasons.push_back("no per-element input parameter (scalar value parameter)");

  auto [tb, te] = detail::body_token_range(toks, f->body_begin, f->body_end);

  bool has_static = false;
  for (size_t k = tb; k < te; ++k)
    if (toks[k].kind == TokKind::Keyword && toks[k].text == "static") has_static = true;
  if (!has_static)
    v.reasons.push_back("no persistent static state declared in the function body");

  // global arrays: `ident [` at top level outside any braces
  std::set<std::string> global_arrays;
  {
    int depth = 0;
    for (size_t i = 0; i + 1 < toks.size(); ++i) {
      if (toks[i].text == "{" || toks[i].text == "(") ++depth;
      else if (toks[i].text == "}" || toks[i].text == ")") --depth;
      else if (depth == 0 && toks[i].kind == TokKind::Identifier && toks[i + 1].text == "[")
        global_arrays.insert(toks[i].text);
    }
  }

  // static-local arrays do not count as sequence storage
  std::set<std::string> static_locals;
  for (size_t k = tb; k + 2 < te; ++k) {
    if (toks[k].kind == TokKind::Keyword && toks[k].text == "static") {
      for (size_t j = k + 1; j < te && toks[j].text != ";"; ++j) {
        if (toks[j].kind == TokKind::Identifier &&
            (toks[j + 1].text == "[" || toks[j + 1].text == "=" || toks[j + 1].text == ";" ||
             toks[j + 1].text == ","))
          static_locals.insert(toks[j].text);
      }
    }
  }

  auto is_sequence_storage = [&](const std::string& name) {
    if (static_locals.count(name)) return false;
    return global_arrays.count(name) > 0 || sequence_params.count(name) > 0;
  };

  std::set<std::pair<int, std::string>> flagged;
  for (const auto& loop : detail::analyze_loops(toks, tb, te, lr.defines)) {
    for (size_t k = loop.body_begin; k + 1 < loop.body_end; ++k) {
      if (toks[k].kind != TokKind::Identifier || toks[k + 1].text != "[") continue;
      if (!is_sequence_storage(toks[k].text)) continue;
      size_t close = detail::match_forward(toks, k + 1, "[", "]");
      bool has_var = false;
      for (size_t j = k + 2; j < close && j < loop.body_end; ++j)
        if (toks[j].kind == TokKind::Identifier && !lr.defines.count(toks[j].text))
          has_var = true;
      if (has_var) flagged.insert({loop.line, toks[k].text});
    }
  }
  for (const auto& [line, name] : flagged) {
    v.reasons.push_back("loop at line " + std::to_string(line) +
                        " iterates over input sequence '" + name + "'");
  }

  v.is_streaming = v.reasons.empty();
  return v;
}

inline StreamingVerdict detect_streaming_interface(const FunctionInfo& f,
                                                   const std::string& source) {
  return detect_streaming_interface(source, f.name);
}

// ---------------------------------------------------------------------------
// pragma verification

enum class PragmaKind { Unroll, PipelineInitInterval, ArrayPartition, Other };

inline const char* to_string(PragmaKind k) {
  switch (k) {
    case PragmaKind::Unroll: return "Unroll";
    case PragmaKind::PipelineInitInterval: return "PipelineInitInterval";
    case PragmaKind::ArrayPartition: return "ArrayPartition";
    case PragmaKind::Other: return "Other";
  }
  return "?";
}

struct PragmaDirective {
  PragmaKind kind = PragmaKind::Other;
  std::string argument;
  int line = 0;       // pragma line
  int loop_line = 0;  // line of the loop it binds to, when recognized
  bool recognized = false;
  std::string text;   // directive text after "#pragma"
};

inline std::vector<PragmaDirective> verify_pragmas(const std::string& source) {
  LexResult lr = lex(source);
  std::vector<PragmaDirective> out;
  for (const auto& p : lr.pragmas) {
    PragmaDirective d;
    d.line = p.line;
    d.loop_line = p.line;
    d.text = p.text;
    std::string head = p.text;
    std::string arg;
    size_t sp = head.find_first_of(" \t");
    if (sp != std::string::npos) {
      arg = trim(head.substr(sp));
      head = head.substr(0, sp);
    }
    d.argument = arg;

    // next token after the directive
    const Token* next = nullptr;
    for (const auto& t : lr.tokens) {
      if (t.offset > p.offset) {
        next = &t;
        break;
      }
    }
    bool precedes_loop =
        next && next->kind == TokKind::Keyword &&
        (next->text == "for" || next->text == "while" || next->text == "do");

    if (head == "hls_unroll") {
      d.kind = PragmaKind::Unroll;
      d.recognized = precedes_loop;
      if (precedes_loop) d.loop_line = next->line;
    } else if (head == "hls_pipeline_init_interval") {
      d.kind = PragmaKind::PipelineInitInterval;
      d.recognized = precedes_loop;
      if (precedes_loop) d.loop_line = next->line;
    } else if (head == "hls_array_partition") {
      // identified but unscored: it binds to arrays, not loops
      d.kind = PragmaKind::ArrayPartition;
      d.recognized = true;
    } else {
      d.kind = PragmaKind::Other;
      d.recognized = false;
    }
    out.push_back(std::move(d));
  }
  return out;
}

// Source with all #pragma lines removed; pragmas must never be load-bearing.
inline std::string strip_pragma_lines(const std::string& source) {
  std::vector<std::string> kept;
  for (const auto& line : split_lines(source)) {
    if (trim(line).rfind("#pragma", 0) == 0) continue;
    kept.push_back(line);
  }
  std::string out = join(kept, "\n");
  if (!source.empty() && source.back() == '\n') out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// synthesizability adapter

struct AdapterFailure : std::runtime_error {
  int exit_code;
  AdapterFailure(int code, const std::string& msg)
      : std::runtime_error("synthesis adapter failure (exit " + std::to_string(code) +
                           "): " + msg),
        exit_code(code) {}
};

struct AdapterConfig {
  std::string kind = "lint";  // "lint" | "command"
  std::string command;        // external tool; candidate file path is appended
  int ok_exit = 0;
  // (regex, category name) pairs applied to tool output, first match wins
  std::vector<std::pair<std::string, std::string>> error_regexes;
  double timeout_seconds = 120.0;
  LintOptions lint_options;
};

inline SynthResult hls_synthesize_source(const std::string& source,
                                         const std::string& target_fn, const CallGraph& graph,
                                         const AdapterConfig& cfg,
                                         const std::filesystem::path& workdir) {
  if (cfg.kind == "lint") return lint(source, target_fn, graph, cfg.lint_options);

  std::filesystem::create_directories(workdir);
  auto input = workdir / "synth_input.c";
  spew(input, source);
  CommandResult res = run_command(cfg.command, {input.string()}, cfg.timeout_seconds);
  if (res.spawn_failed) throw AdapterFailure(res.exit_code, "tool could not be started");
  if (res.timed_out || res.exit_code >= 128)
    throw AdapterFailure(res.exit_code, "tool crashed or timed out");

  SynthResult out;
  out.adapter = "command";
  out.tool_log = res.out + res.err;
  out.ok = res.exit_code == cfg.ok_exit;
  if (!out.ok) {
    for (const auto& line : split_lines(out.tool_log)) {
      bool matched = false;
      for (const auto& [pattern, category] : cfg.error_regexes) {
        if (std::regex_search(line, std::regex(pattern))) {
          LintDiagnostic d;
          if (auto cat = lint_category_from_string(category)) {
            d.category = *cat;
            d.icl_key = icl_key_for(*cat);
          } else {
            d.category = LintCategory::UnsupportedStdlib;
            d.icl_key = "";
          }
          d.line = 0;
          d.col = 0;
          d.message = line;
          out.diagnostics.push_back(std::move(d));
          matched = true;
          break;
        }
      }
      if (matched) break;  // first error line only
    }
  }
  return out;
}

}  // namespace c2hls
