#include "c2hls/synth_check.hpp"

#include <map>

#include "doctest.h"
#include "support/paths.hpp"

using namespace c2hls;
namespace fs = std::filesystem;

namespace {

bool has_category(const SynthResult& r, LintCategory cat) {
  for (const auto& d : r.diagnostics)
    if (d.category == cat) return true;
  return false;
}

std::string first_defined(const std::string& source) {
  for (const auto& f : parse_source(source))
    if (f.is_defined_here) return f.name;
  return "";
}

SynthResult lint_file(const fs::path& path) {
  std::string src = slurp(path);
  return lint_standalone(src, first_defined(src));
}

// Independent oracle for the mutual-recursion case: enumerates all simple
// cycles by DFS over raw (caller, callee) pairs, no shared code with the SCC
// machinery under test.
std::set<std::string> brute_force_cycle_members(
    const std::set<std::pair<std::string, std::string>>& edges) {
  std::set<std::string> nodes, members;
  for (const auto& [a, b] : edges) {
    nodes.insert(a);
    nodes.insert(b);
  }
  for (const auto& start : nodes) {
    std::vector<std::pair<std::string, std::vector<std::string>>> stack{{start, {start}}};
    while (!stack.empty()) {
      auto [cur, path] = stack.back();
      stack.pop_back();
      for (const auto& [a, b] : edges) {
        if (a != cur) continue;
        if (b == start) {
          for (const auto& n : path) members.insert(n);
          continue;
        }
        if (std::find(path.begin(), path.end(), b) == path.end()) {
          auto next = path;
          next.push_back(b);
          stack.push_back({b, next});
        }
      }
    }
  }
  return members;
}

}  // namespace

TEST_CASE("lint: the malloc listing yields one DynamicMemory diagnostic") {
  auto r = lint_file(testsupport::fixture("lint/forbidden/dynamic_memory_1.c"));
  CHECK_FALSE(r.ok);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].category == LintCategory::DynamicMemory);
  CHECK(r.diagnostics[0].icl_key == "dynamic_memory");
}

TEST_CASE("lint: the factorial listing yields one Recursion diagnostic") {
  auto r = lint_file(testsupport::fixture("lint/forbidden/recursion_1.c"));
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].category == LintCategory::Recursion);
  CHECK(r.diagnostics[0].icl_key == "recursion");
}

TEST_CASE("lint: a pure fixed-bound integer function is clean") {
  auto r = lint_file(testsupport::fixture("lint/clean/fixed_sum.c"));
  CHECK(r.ok);
  CHECK(r.diagnostics.empty());
}

TEST_CASE("lint: mutual recursion flags both functions, matching the cycle oracle") {
  std::string src = slurp(testsupport::fixture("lint/forbidden/recursion_2.c"));
  auto fns = parse_source(src);
  auto g = build_call_graph(fns, "is_even");
  auto r = lint(src, "is_even", g);

  auto oracle = brute_force_cycle_members(g.edges);
  CHECK(oracle == std::set<std::string>{"is_even", "is_odd"});

  std::set<std::string> flagged;
  for (const auto& d : r.diagnostics) {
    REQUIRE(d.category == LintCategory::Recursion);
    for (const auto& name : oracle)
      if (d.message.find("'" + name + "'") != std::string::npos) flagged.insert(name);
  }
  CHECK(flagged == oracle);
}

TEST_CASE("lint: full corpus — forbidden files flag their category, clean files flag none") {
  const std::map<std::string, LintCategory> expected = {
      {"dynamic_memory", LintCategory::DynamicMemory},
      {"recursion", LintCategory::Recursion},
      {"interface_pointer", LintCategory::InterfacePointer},
      {"unsupported_stdlib", LintCategory::UnsupportedStdlib},
      {"unbounded_structure", LintCategory::UnboundedStructure},
      {"multi_process", LintCategory::MultiProcess},
      {"floating_point", LintCategory::FloatingPoint},
      {"unbounded_loop", LintCategory::UnboundedLoop},
  };

  int forbidden_count = 0;
  for (const auto& entry : fs::directory_iterator(testsupport::fixture("lint/forbidden"))) {
    ++forbidden_count;
    std::string stem = entry.path().stem().string();
    std::string key = stem.substr(0, stem.rfind('_'));
    REQUIRE(expected.count(key));
    auto r = lint_file(entry.path());
    INFO("fixture: ", stem);
    CHECK_FALSE(r.ok);
    CHECK(has_category(r, expected.at(key)));
  }
  CHECK(forbidden_count >= 16);

  int clean_count = 0;
  for (const auto& entry : fs::directory_iterator(testsupport::fixture("lint/clean"))) {
    ++clean_count;
    auto r = lint_file(entry.path());
    INFO("fixture: ", entry.path().stem().string());
    CHECK(r.ok);
  }
  CHECK(clean_count >= 6);
}

TEST_CASE("lint: idempotent and ordered by location") {
  std::string src = slurp(testsupport::fixture("lint/forbidden/unbounded_loop_2.c"));
  auto a = lint_standalone(src, "collatz_steps");
  auto b = lint_standalone(src, "collatz_steps");
  REQUIRE(a.diagnostics.size() == b.diagnostics.size());
  for (size_t i = 0; i < a.diagnostics.size(); ++i) {
    CHECK(a.diagnostics[i].line == b.diagnostics[i].line);
    CHECK(a.diagnostics[i].message == b.diagnostics[i].message);
  }
  for (size_t i = 1; i < a.diagnostics.size(); ++i) {
    CHECK(a.diagnostics[i - 1].line <= a.diagnostics[i].line);
  }
  CHECK(a.tool_log == b.tool_log);
}

TEST_CASE("streaming classifier matches hand labels on the six fixtures") {
  struct Case {
    const char* file;
    const char* fn;
    bool streaming;
  };
  const Case cases[] = {
      {"streaming/fir_batch.c", "fir", false},
      {"streaming/fir_stream.c", "fir", true},
      {"streaming/blockfreq_batch.c", "BlockFrequency", false},
      {"streaming/blockfreq_stream.c", "BlockFrequency", true},
      {"streaming/cusums_gpt.c", "CumulativeSums", true},
      {"streaming/cusums_sonnet.c", "CumulativeSums", false},
  };
  for (const auto& c : cases) {
    auto verdict = detect_streaming_interface(slurp(testsupport::fixture(c.file)), c.fn);
    INFO("fixture: ", c.file);
    CHECK(verdict.is_streaming == c.streaming);
    if (!c.streaming) CHECK_FALSE(verdict.reasons.empty());
  }
}

TEST_CASE("streaming classifier: batch reasons name the full-sequence loop") {
  auto verdict =
      detect_streaming_interface(slurp(testsupport::fixture("streaming/fir_batch.c")), "fir");
  bool loop_reason = false;
  for (const auto& r : verdict.reasons)
    if (r.find("iterates over input sequence 'x'") != std::string::npos) loop_reason = true;
  CHECK(loop_reason);
}

TEST_CASE("streaming classifier: zero parameters is not streaming") {
  auto verdict = detect_streaming_interface("int tick(void) { static int t = 0; return t++; }\n",
                                            "tick");
  CHECK_FALSE(verdict.is_streaming);
}

TEST_CASE("verify_pragmas: recognized directives") {
  const char* src =
      "void f(int a[4]) {\n"
      "  int i;\n"
      "  #pragma hls_unroll yes\n"
      "  for (i = 0; i < 4; i++) {\n"
      "    a[i] = i;\n"
      "  }\n"
      "}\n";
  auto ds = verify_pragmas(src);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].kind == PragmaKind::Unroll);
  CHECK(ds[0].argument == "yes");
  CHECK(ds[0].recognized);
  CHECK(ds[0].loop_line == 4);
}

TEST_CASE("verify_pragmas: pipeline initiation interval before a loop") {
  const char* src =
      "void f(int a[4]) {\n"
      "  #pragma hls_pipeline_init_interval 1\n"
      "  for (int i = 0; i < 4; i++) a[i] = i;\n"
      "}\n";
  auto ds = verify_pragmas(src);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].kind == PragmaKind::PipelineInitInterval);
  CHECK(ds[0].argument == "1");
  CHECK(ds[0].recognized);
}

TEST_CASE("verify_pragmas: misspelled and misplaced directives are not recognized") {
  const char* src =
      "void f(int a[4]) {\n"
      "  #pragma unroll_hls 4\n"
      "  for (int i = 0; i < 4; i++) a[i] = i;\n"
      "  #pragma hls_unroll yes\n"
      "  a[0] = 1;\n"
      "}\n";
  auto ds = verify_pragmas(src);
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].kind == PragmaKind::Other);
  CHECK_FALSE(ds[0].recognized);
  CHECK(ds[1].kind == PragmaKind::Unroll);
  CHECK_FALSE(ds[1].recognized);  // precedes a plain statement, not a loop
}

TEST_CASE("verify_pragmas: sonnet cusums fixture — pipeline recognized, inner unroll not") {
  auto ds = verify_pragmas(slurp(testsupport::fixture("streaming/cusums_sonnet.c")));
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].kind == PragmaKind::PipelineInitInterval);
  CHECK(ds[0].recognized);
  CHECK(ds[1].kind == PragmaKind::Unroll);
  CHECK_FALSE(ds[1].recognized);
}

TEST_CASE("verify_pragmas: array partition is identified but unscored") {
  auto ds = verify_pragmas("#pragma hls_array_partition variable=a\nint a[4];\n");
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].kind == PragmaKind::ArrayPartition);
  CHECK(ds[0].recognized);
}

TEST_CASE("strip_pragma_lines removes directives without touching code") {
  std::string src = slurp(testsupport::fixture("streaming/cusums_sonnet.c"));
  std::string stripped = strip_pragma_lines(src);
  CHECK(stripped.find("#pragma") == std::string::npos);
  CHECK(stripped.find("for (int i = 0; i < N; i++)") != std::string::npos);
}

TEST_CASE("pragma stripping preserves runtime behavior") {
  const char* src =
      "static int acc4(int a[4]) {\n"
      "  int s = 0;\n"
      "  #pragma hls_unroll yes\n"
      "  for (int i = 0; i < 4; i++) s += a[i];\n"
      "  return s;\n"
      "}\n"
      "extern int printf(const char *, ...);\n"
      "int main(void) {\n"
      "  int a[4] = {1, 2, 3, 4};\n"
      "  printf(\"%d\\n\", acc4(a));\n"
      "  return 0;\n"
      "}\n";
  auto dir = testsupport::make_temp_dir("pragma_strip");
  spew(dir / "with.c", src);
  spew(dir / "without.c", strip_pragma_lines(src));

  auto c1 = run_command("cc", {"-o", (dir / "with").string(), (dir / "with.c").string()});
  auto c2 = run_command("cc", {"-o", (dir / "without").string(), (dir / "without.c").string()});
  REQUIRE(c1.ok());
  REQUIRE(c2.ok());
  auto r1 = run_command((dir / "with").string(), {}, 10.0);
  auto r2 = run_command((dir / "without").string(), {}, 10.0);
  CHECK(r1.exit_code == 0);
  CHECK(r1.out == r2.out);
}

TEST_CASE("hls_synthesize: lint adapter verdicts") {
  AdapterConfig cfg;
  cfg.kind = "lint";
  auto dir = testsupport::make_temp_dir("synth_lint");

  std::string clean = slurp(testsupport::fixture("lint/clean/fixed_sum.c"));
  auto g1 = build_call_graph(parse_source(clean), "sum16");
  auto ok = hls_synthesize_source(clean, "sum16", g1, cfg, dir);
  CHECK(ok.ok);
  CHECK(ok.adapter == "lint");

  std::string rec = slurp(testsupport::fixture("lint/forbidden/recursion_1.c"));
  auto g2 = build_call_graph(parse_source(rec), "factorial");
  auto bad = hls_synthesize_source(rec, "factorial", g2, cfg, dir);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.diagnostics.size() == 1);
  CHECK(bad.diagnostics[0].icl_key == "recursion");
}

TEST_CASE("hls_synthesize: command adapter parses the first error line") {
  auto dir = testsupport::make_temp_dir("synth_cmd");
  auto tool = dir / "fake_hls.sh";
  spew(tool,
       "#!/bin/sh\n"
       "if grep -q malloc \"$1\"; then\n"
       "  echo \"Error: dynamic memory allocation is not supported\" >&2\n"
       "  exit 1\n"
       "fi\n"
       "echo \"synthesis ok\"\n"
       "exit 0\n");
  fs::permissions(tool, fs::perms::owner_all);

  AdapterConfig cfg;
  cfg.kind = "command";
  cfg.command = tool.string();
  cfg.error_regexes = {{"dynamic memory", "DynamicMemory"}, {"recursio", "Recursion"}};

  CallGraph g;
  auto ok = hls_synthesize_source("int f(void) { return 1; }\n", "f", g, cfg, dir);
  CHECK(ok.ok);
  CHECK(contains(ok.tool_log, "synthesis ok"));

  auto bad = hls_synthesize_source(
      "void g(int x) { int *p = (int *)malloc(x); }\n", "g", g, cfg, dir);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.diagnostics.size() == 1);
  CHECK(bad.diagnostics[0].category == LintCategory::DynamicMemory);
  CHECK(contains(bad.tool_log, "dynamic memory allocation"));
}

TEST_CASE("hls_synthesize: missing executable raises AdapterFailure") {
  AdapterConfig cfg;
  cfg.kind = "command";
  cfg.command = "/no/such/tool_binary_anywhere";
  CallGraph g;
  auto dir = testsupport::make_temp_dir("synth_missing");
  CHECK_THROWS_AS(hls_synthesize_source("int f(void) { return 0; }\n", "f", g, cfg, dir),
                  AdapterFailure);
}
