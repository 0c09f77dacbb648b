#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "c2hls/c_lexer.hpp"
#include "c2hls/util.hpp"

namespace c2hls {

struct PreprocessFailure : std::runtime_error {
  int exit_code;
  std::string stderr_text;
  PreprocessFailure(int code, std::string err)
      : std::runtime_error("preprocessor failed (exit " + std::to_string(code) + "): " + err),
        exit_code(code),
        stderr_text(std::move(err)) {}
};

struct UnknownTop : std::runtime_error {
  explicit UnknownTop(const std::string& name)
      : std::runtime_error("top function '" + name + "' is not defined in the unit") {}
};

struct SourceNote {
  std::string kind;      // e.g. "MacroDensity"
  std::string function;  // affected function, when applicable
  std::string message;
};

struct SourceUnit {
  std::string path;
  std::string raw_text;
  std::string preprocessed_text;
  std::vector<std::string> include_directives;
  std::vector<SourceNote> notes;
};

struct Param {
  std::string name;       // "" when unnamed
  std::string type_text;  // declarator text with the name removed
  std::string decl_text;  // verbatim parameter text
  bool is_pointer = false;        // '*' at the top level of the declarator
  bool is_fn_pointer = false;
  bool is_array = false;          // array notation present
  bool is_float = false;
  std::vector<std::optional<long long>> extents;  // per array dimension
};

struct FunctionInfo {
  std::string name;
  std::string return_type;
  std::vector<Param> params;
  size_t body_begin = 0;  // [begin, end) byte span into the parsed text
  size_t body_end = 0;
  std::set<std::string> callee_names;  // resolvable within the unit
  bool is_defined_here = false;

  size_t decl_begin = 0;  // start of the whole definition (return type token)
  int line = 0;
  int def_order = 0;
  bool variadic = false;
  std::map<std::string, int> call_counts;     // per resolvable callee, call sites
  std::set<std::string> unresolved_calls;     // called but not declared in unit

  bool has_body() const { return is_defined_here && body_end > body_begin; }
};

struct CallGraph {
  std::string top;
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;
  std::map<std::pair<std::string, std::string>, int> edge_multiplicity;
  std::vector<std::string> warnings;  // DanglingCall records, non-fatal
  std::map<std::string, int> def_order;
  std::map<std::string, std::set<std::string>> children;

  int total_multiplicity() const {
    int n = 0;
    for (const auto& [edge, count] : edge_multiplicity) n += count;
    return n;
  }
};

namespace detail {

// Rebuilds source text from a token run. Spacing is canonical, which is fine
// for type strings and signatures.
inline std::string tokens_to_text(const std::vector<Token>& toks, size_t begin, size_t end,
                                  std::optional<size_t> skip = std::nullopt) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (skip && i == *skip) continue;
    const std::string& t = toks[i].text;
    if (!out.empty()) {
      char last = out.back();
      bool no_space = t == "[" || t == "]" || t == ")" || t == "," || t == ";" ||
                      last == '[' || last == '(' ||
                      (t == "(" && (last == '*' || last == ')'));
      if (t == "*" && (last == '*')) no_space = true;
      if (!no_space) out += ' ';
    }
    out += t;
  }
  return out;
}

inline size_t match_forward(const std::vector<Token>& toks, size_t open_idx,
                            const std::string& open, const std::string& close) {
  int depth = 0;
  for (size_t i = open_idx; i < toks.size(); ++i) {
    if (toks[i].text == open) ++depth;
    else if (toks[i].text == close) {
      --depth;
      if (depth == 0) return i;
    }
  }
  return toks.size();
}

inline const std::set<std::string>& storage_keywords() {
  static const std::set<std::string> s = {"static", "extern", "inline", "register", "auto"};
  return s;
}

}  // namespace detail

// Parses one parameter declarator token run.
inline Param parse_param_tokens(const std::vector<Token>& toks, size_t begin, size_t end,
                                const std::map<std::string, std::string>& defines) {
  Param p;
  p.decl_text = detail::tokens_to_text(toks, begin, end);
  int paren_depth = 0, bracket_depth = 0;
  std::optional<size_t> name_idx;
  for (size_t i = begin; i < end; ++i) {
    const Token& t = toks[i];
    if (t.text == "(") ++paren_depth;
    else if (t.text == ")") --paren_depth;
    else if (t.text == "[") {
      ++bracket_depth;
      if (paren_depth == 0 && bracket_depth == 1) {
        p.is_array = true;
        size_t close = i;
        int d = 0;
        for (size_t j = i; j < end; ++j) {
          if (toks[j].text == "[") ++d;
          if (toks[j].text == "]") {
            --d;
            if (d == 0) { close = j; break; }
          }
        }
        if (close == i + 1)
          p.extents.push_back(std::nullopt);  // unsized []
        else
          p.extents.push_back(eval_const_expr(toks, i + 1, close, defines));
      }
    } else if (t.text == "]") {
      --bracket_depth;
    } else if (t.text == "*") {
      if (paren_depth == 0 && bracket_depth == 0) p.is_pointer = true;
      else if (paren_depth > 0) p.is_fn_pointer = true;
    } else if (t.kind == TokKind::Identifier && bracket_depth == 0) {
      bool is_tag = i > begin && (toks[i - 1].text == "struct" || toks[i - 1].text == "union" ||
                                  toks[i - 1].text == "enum");
      if (!is_tag) name_idx = i;
    } else if (t.kind == TokKind::Keyword && (t.text == "float" || t.text == "double")) {
      p.is_float = true;
    }
  }
  if (name_idx) {
    p.name = toks[*name_idx].text;
    p.type_text = detail::tokens_to_text(toks, begin, end, name_idx);
  } else {
    p.type_text = p.decl_text;
  }
  return p;
}

// Parses C source text (preprocessed units or raw candidates) into per-function
// records. Throws ParseError on invalid input.
inline std::vector<FunctionInfo> parse_source(const std::string& text) {
  LexResult lr = lex(text);
  const std::vector<Token>& toks = lr.tokens;
  std::vector<FunctionInfo> fns;
  std::map<std::string, size_t> by_name;  // name -> index in fns

  auto add_fn = [&](FunctionInfo&& f) {
    auto it = by_name.find(f.name);
    if (it == by_name.end()) {
      by_name[f.name] = fns.size();
      fns.push_back(std::move(f));
      return;
    }
    FunctionInfo& existing = fns[it->second];
    if (f.is_defined_here && !existing.is_defined_here) existing = std::move(f);
  };

  int defined_count = 0;
  size_t chunk_start = 0;
  size_t i = 0;
  while (i < toks.size()) {
    const Token& t = toks[i];
    if (t.text == ";") {
      // declaration chunk: collect prototype names
      for (size_t j = chunk_start; j + 1 < toks.size() && j < i; ++j) {
        if (toks[j].kind == TokKind::Identifier && toks[j + 1].text == "(") {
          bool plausible =
              j == chunk_start ||
              toks[j - 1].kind == TokKind::Keyword || toks[j - 1].kind == TokKind::Identifier ||
              toks[j - 1].text == "*";
          if (!plausible) continue;
          if (j > chunk_start && (toks[j - 1].text == "struct" || toks[j - 1].text == "union" ||
                                  toks[j - 1].text == "enum"))
            continue;
          FunctionInfo f;
          f.name = toks[j].text;
          f.line = toks[j].line;
          f.is_defined_here = false;
          size_t close = detail::match_forward(toks, j + 1, "(", ")");
          if (close < toks.size()) {
            // params: best effort for prototypes
            size_t p_begin = j + 2;
            if (close > p_begin) {
              size_t item = p_begin;
              int depth = 0;
              for (size_t k = p_begin; k <= close; ++k) {
                if (toks[k].text == "(" || toks[k].text == "[") ++depth;
                else if (toks[k].text == "]" ) --depth;
                else if (toks[k].text == ")") {
                  if (depth == 0 && k == close) {
                    if (k > item) {
                      if (toks[item].text == "...") f.variadic = true;
                      else if (!(k == item + 1 && toks[item].text == "void"))
                        f.params.push_back(parse_param_tokens(toks, item, k, lr.defines));
                    }
                    break;
                  }
                  --depth;
                } else if (toks[k].text == "," && depth == 0) {
                  if (toks[item].text == "...") f.variadic = true;
                  else f.params.push_back(parse_param_tokens(toks, item, k, lr.defines));
                  item = k + 1;
                }
              }
            }
            size_t rt_begin = chunk_start;
            while (rt_begin < j && detail::storage_keywords().count(toks[rt_begin].text))
              ++rt_begin;
            f.return_type = rt_begin < j ? detail::tokens_to_text(toks, rt_begin, j)
                                         : std::string("int");
            f.decl_begin = toks[chunk_start].offset;
            add_fn(std::move(f));
            j = close;  // skip past this declarator's params
          }
        }
      }
      chunk_start = i + 1;
      ++i;
      continue;
    }
    if (t.text == "{") {
      bool is_fn = i > chunk_start && toks[i - 1].text == ")";
      size_t name_idx = 0;
      size_t open_paren = 0;
      if (is_fn) {
        int depth = 0;
        size_t j = i - 1;
        for (;; --j) {
          if (toks[j].text == ")") ++depth;
          if (toks[j].text == "(") {
            --depth;
            if (depth == 0) { open_paren = j; break; }
          }
          if (j == chunk_start) break;
        }
        if (open_paren > chunk_start && toks[open_paren - 1].kind == TokKind::Identifier) {
          name_idx = open_paren - 1;
        } else {
          is_fn = false;
        }
      }
      if (!is_fn) {
        // struct/union/enum body or initializer braces: skip balanced
        size_t close = detail::match_forward(toks, i, "{", "}");
        i = close + 1;
        continue;
      }
      size_t body_close = detail::match_forward(toks, i, "{", "}");
      if (body_close >= toks.size())
        throw ParseError(t.line, t.col, "unbalanced braces in function body");

      FunctionInfo f;
      f.name = toks[name_idx].text;
      f.line = toks[name_idx].line;
      f.is_defined_here = true;
      f.def_order = defined_count++;
      f.decl_begin = toks[chunk_start].offset;
      f.body_begin = toks[i].offset;
      f.body_end = toks[body_close].offset + 1;

      // return type: storage classes stripped
      size_t rt_begin = chunk_start;
      while (rt_begin < name_idx && detail::storage_keywords().count(toks[rt_begin].text))
        ++rt_begin;
      f.return_type = rt_begin < name_idx
                          ? detail::tokens_to_text(toks, rt_begin, name_idx)
                          : std::string("int");

      // params
      size_t close_paren = i - 1;
      size_t item = open_paren + 1;
      int depth = 0;
      for (size_t k = open_paren + 1; k <= close_paren; ++k) {
        if (toks[k].text == "(" || toks[k].text == "[") ++depth;
        else if (toks[k].text == "]") --depth;
        else if (toks[k].text == ")") {
          if (depth == 0 && k == close_paren) {
            if (k > item) {
              if (toks[item].text == "...") f.variadic = true;
              else if (!(k == item + 1 && toks[item].text == "void"))
                f.params.push_back(parse_param_tokens(toks, item, k, lr.defines));
            }
            break;
          }
          --depth;
        } else if (toks[k].text == "," && depth == 0) {
          if (toks[item].text == "...") f.variadic = true;
          else f.params.push_back(parse_param_tokens(toks, item, k, lr.defines));
          item = k + 1;
        }
      }

      // call sites inside the body
      for (size_t k = i + 1; k < body_close; ++k) {
        if (toks[k].kind != TokKind::Identifier) continue;
        if (k + 1 >= body_close || toks[k + 1].text != "(") continue;
        const Token& prev = toks[k - 1];
        bool decl_like = prev.kind == TokKind::Keyword ? is_type_keyword(prev.text)
                                                       : prev.kind == TokKind::Identifier;
        if (decl_like) continue;
        f.call_counts[toks[k].text] += 1;
      }

      add_fn(std::move(f));
      i = body_close + 1;
      chunk_start = i;
      continue;
    }
    ++i;
  }

  // resolve callee names against everything declared or defined in the unit
  std::set<std::string> known;
  for (const auto& f : fns) known.insert(f.name);
  for (auto& f : fns) {
    std::map<std::string, int> resolved;
    for (const auto& [callee, count] : f.call_counts) {
      if (known.count(callee)) {
        resolved[callee] = count;
        f.callee_names.insert(callee);
      } else {
        f.unresolved_calls.insert(callee);
      }
    }
    f.call_counts = std::move(resolved);
  }
  return fns;
}

inline std::vector<FunctionInfo> parse_unit(const SourceUnit& unit) {
  return parse_source(unit.preprocessed_text);
}

// A compilable prototype for the function, parameter names preserved.
inline std::string get_signature(const FunctionInfo& f) {
  std::string params;
  if (f.params.empty() && !f.variadic) {
    params = "void";
  } else {
    std::vector<std::string> parts;
    for (const auto& p : f.params) parts.push_back(p.decl_text);
    if (f.variadic) parts.push_back("...");
    params = join(parts, ", ");
  }
  return f.return_type + " " + f.name + "(" + params + ");";
}

inline CallGraph build_call_graph(const std::vector<FunctionInfo>& functions,
                                  const std::string& top) {
  std::map<std::string, const FunctionInfo*> defined;
  std::set<std::string> declared;
  for (const auto& f : functions) {
    declared.insert(f.name);
    if (f.is_defined_here) defined[f.name] = &f;
  }
  if (!defined.count(top)) throw UnknownTop(top);

  CallGraph g;
  g.top = top;
  std::vector<std::string> queue = {top};
  std::set<std::string> visited = {top};
  while (!queue.empty()) {
    std::string cur = queue.back();
    queue.pop_back();
    const FunctionInfo* f = defined[cur];
    g.nodes.insert(cur);
    g.def_order[cur] = f->def_order;
    for (const auto& [callee, count] : f->call_counts) {
      if (defined.count(callee)) {
        g.edges.insert({cur, callee});
        g.edge_multiplicity[{cur, callee}] += count;
        g.children[cur].insert(callee);
        if (!visited.count(callee)) {
          visited.insert(callee);
          queue.push_back(callee);
        }
      } else {
        g.warnings.push_back("DanglingCall: " + cur + " -> " + callee +
                             " (declared but not defined in unit)");
      }
    }
    for (const auto& callee : f->unresolved_calls) {
      g.warnings.push_back("DanglingCall: " + cur + " -> " + callee +
                           " (no definition or declaration in unit)");
    }
  }
  return g;
}

// Tarjan strongly-connected components over the graph adjacency; components
// are returned in reverse topological order (callees before callers) with
// members sorted by definition order.
inline std::vector<std::vector<std::string>> strongly_connected_components(const CallGraph& g) {
  struct State {
    int index = -1;
    int lowlink = -1;
    bool on_stack = false;
  };
  std::map<std::string, State> st;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> sccs;
  int next_index = 0;

  // iterative Tarjan to avoid deep recursion on long call chains
  struct Frame {
    std::string node;
    std::vector<std::string> children;
    size_t child_pos = 0;
  };

  std::vector<std::string> roots(g.nodes.begin(), g.nodes.end());
  std::sort(roots.begin(), roots.end(), [&](const std::string& a, const std::string& b) {
    return g.def_order.at(a) < g.def_order.at(b);
  });

  for (const auto& root : roots) {
    if (st[root].index != -1) continue;
    std::vector<Frame> frames;
    auto push_node = [&](const std::string& n) {
      st[n].index = st[n].lowlink = next_index++;
      st[n].on_stack = true;
      stack.push_back(n);
      Frame f;
      f.node = n;
      auto it = g.children.find(n);
      if (it != g.children.end()) f.children.assign(it->second.begin(), it->second.end());
      frames.push_back(std::move(f));
    };
    push_node(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child_pos < f.children.size()) {
        const std::string& child = f.children[f.child_pos++];
        if (st[child].index == -1) {
          push_node(child);
        } else if (st[child].on_stack) {
          st[f.node].lowlink = std::min(st[f.node].lowlink, st[child].index);
        }
      } else {
        if (st[f.node].lowlink == st[f.node].index) {
          std::vector<std::string> scc;
          while (true) {
            std::string n = stack.back();
            stack.pop_back();
            st[n].on_stack = false;
            scc.push_back(n);
            if (n == f.node) break;
          }
          std::sort(scc.begin(), scc.end(), [&](const std::string& a, const std::string& b) {
            return g.def_order.at(a) < g.def_order.at(b);
          });
          sccs.push_back(std::move(scc));
        }
        std::string done = f.node;
        frames.pop_back();
        if (!frames.empty())
          st[frames.back().node].lowlink =
              std::min(st[frames.back().node].lowlink, st[done].lowlink);
      }
    }
  }
  return sccs;
}

// Names involved in recursion: members of multi-node components plus direct
// self-calls.
inline std::set<std::string> recursive_functions(const CallGraph& g) {
  std::set<std::string> out;
  for (const auto& scc : strongly_connected_components(g)) {
    if (scc.size() > 1)
      for (const auto& n : scc) out.insert(n);
  }
  for (const auto& [edge, count] : g.edge_multiplicity) {
    if (edge.first == edge.second && count > 0) out.insert(edge.first);
  }
  return out;
}

// ---------------------------------------------------------------------------
// preprocessing

namespace detail {

inline std::vector<std::string> collect_includes(const std::string& raw) {
  std::vector<std::string> out;
  for (const auto& line : split_lines(raw)) {
    std::string t = trim(line);
    if (t.rfind("#include", 0) == 0) out.push_back(t);
  }
  return out;
}

// Best-effort body length of `name` in raw (pre-expansion) text; used only for
// the macro-density note.
inline std::optional<size_t> raw_body_length(const std::string& raw, const std::string& name) {
  size_t search = 0;
  while ((search = raw.find(name, search)) != std::string::npos) {
    size_t after = search + name.size();
    bool left_ok = search == 0 || !(std::isalnum(static_cast<unsigned char>(raw[search - 1])) ||
                                    raw[search - 1] == '_');
    if (!left_ok) { search = after; continue; }
    size_t p = after;
    while (p < raw.size() && std::isspace(static_cast<unsigned char>(raw[p]))) ++p;
    if (p >= raw.size() || raw[p] != '(') { search = after; continue; }
    int depth = 0;
    for (; p < raw.size(); ++p) {
      if (raw[p] == '(') ++depth;
      else if (raw[p] == ')') { --depth; if (depth == 0) { ++p; break; } }
    }
    while (p < raw.size() && std::isspace(static_cast<unsigned char>(raw[p]))) ++p;
    if (p >= raw.size() || raw[p] != '{') { search = after; continue; }
    size_t body_start = p;
    depth = 0;
    for (; p < raw.size(); ++p) {
      if (raw[p] == '{') ++depth;
      else if (raw[p] == '}') { --depth; if (depth == 0) return p + 1 - body_start; }
    }
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

constexpr double kMacroDensityFactor = 5.0;

inline SourceUnit run_preprocessor(const SourceUnit& unit,
                                   const std::vector<std::string>& include_paths,
                                   const std::string& cpp_cmd = "cc -E") {
  if (unit.raw_text.empty()) throw PreprocessFailure(-1, "empty input: " + unit.path);

  std::vector<std::string> args;
  for (const auto& p : include_paths) {
    args.push_back("-I");
    args.push_back(p);
  }
  args.push_back(unit.path);
  CommandResult res = run_command(cpp_cmd, args, 60.0);
  if (res.spawn_failed || res.exit_code != 0)
    throw PreprocessFailure(res.exit_code, res.err);

  SourceUnit out = unit;
  out.preprocessed_text = res.out;
  out.include_directives = detail::collect_includes(unit.raw_text);
  out.notes.clear();

  // macro-density note: expansion growing a body past the threshold
  try {
    for (const auto& f : parse_unit(out)) {
      if (!f.has_body()) continue;
      size_t expanded = f.body_end - f.body_begin;
      auto raw_len = detail::raw_body_length(unit.raw_text, f.name);
      if (raw_len && *raw_len > 0 &&
          static_cast<double>(expanded) > kMacroDensityFactor * static_cast<double>(*raw_len)) {
        out.notes.push_back(
            {"MacroDensity", f.name,
             "macro expansion grew '" + f.name + "' from " + std::to_string(*raw_len) + " to " +
                 std::to_string(expanded) + " bytes (more than 5x)"});
      }
    }
  } catch (const ParseError&) {
    // density notes are advisory; parse errors surface later via parse_unit
  }
  return out;
}

inline SourceUnit load_source(const std::string& path) {
  SourceUnit u;
  u.path = path;
  u.raw_text = slurp(path);
  return u;
}

}  // namespace c2hls
