#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>

#include "carmc/emit.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace carmc;
using carmc::testing::derive_hospital;
using carmc::testing::read_text;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("carmc_emit_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Emit, JsonRoundTrip) {
  const auto r = derive_hospital();
  const std::string json = model_to_json(r.om);
  EXPECT_EQ(model_from_json(json), r.om);
  EXPECT_EQ(json.back(), '\n');
}

TEST(Emit, JsonMatchesGolden) {
  const auto r = derive_hospital();
  EXPECT_EQ(model_to_json(r.om),
            read_text(carmc::testing::data_path("golden/hospital_model.json")));
}

TEST(Emit, MalformedJsonIsReported) {
  try {
    model_from_json("{\"classes\": 3}");
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_EQ(e.code(), codes::kIo);
  }
}

TEST(Emit, EmptyModel) {
  const fs::path dir = scratch_dir("empty");
  EmitConfig cfg;
  cfg.out_dir = dir;
  const auto written = emit_model({}, {}, {}, cfg);
  EXPECT_EQ(read_text(dir / "model.json"),
            "{\n  \"classes\": [],\n  \"relationships\": [],\n  \"transactions\": []\n}\n");
  for (const auto& entry : fs::directory_iterator(dir)) {
    EXPECT_NE(entry.path().extension(), ".dot") << entry.path();
  }
  for (const auto& p : written) EXPECT_TRUE(fs::exists(p)) << p;
  fs::remove_all(dir);
}

TEST(Emit, ClassDiagramContents) {
  const auto r = derive_hospital();
  const std::string dot = class_diagram_dot(r.om);
  const auto node = dot.find("\"MEDICAL_TREATMENT\" [label=");
  ASSERT_NE(node, std::string::npos);
  const std::string line = dot.substr(node, dot.find('\n', node) - node);
  std::size_t at = 0;
  for (const char* attr : {"treatment_number", "initial_date", "final_date", "comments",
                           "delivery_date"}) {
    const auto pos = line.find(attr, at);
    ASSERT_NE(pos, std::string::npos) << attr;
    at = pos;
  }
  EXPECT_NE(line.find("\\<\\<new\\>\\> new_medical_treatment"), std::string::npos);
  EXPECT_NE(line.find("\\<\\<shared\\>\\> ins_dispensary"), std::string::npos);
  EXPECT_NE(dot.find("\"MEDICAL_TREATMENT\" -- \"DISPENSARY\" [label=\"0:M --- 0:1\"]"),
            std::string::npos);
}

TEST(Emit, StdDot) {
  StateTransitionDiagram d;
  d.class_name = "K";
  d.states = {{"Pre_creation", StateKind::pre_creation},
              {"A1ed", StateKind::intermediate},
              {"A+Bed", StateKind::auxiliary}};
  d.transitions = {{"Pre_creation", "A1ed", "new_k", std::string("p_x > \"3\""), {}, ""}};
  const std::string dot = std_to_dot(d);
  EXPECT_NE(dot.find("digraph \"std:K\""), std::string::npos);
  EXPECT_NE(dot.find("style=filled, fillcolor=black"), std::string::npos);
  EXPECT_NE(dot.find("\"A+Bed\" [shape=ellipse, style=dashed]"), std::string::npos);
  EXPECT_NE(dot.find("[label=\"new_k when p_x > \\\"3\\\"\"]"), std::string::npos);
}

TEST(Emit, TraceReportRows) {
  const auto r = derive_hospital();
  const std::string tsv = trace_to_tsv(r.trace);
  EXPECT_NE(tsv.find("OM6\tTREAT 1/MEDICAL TREATMENT/Treatment number\t"
                     "MEDICAL_TREATMENT.treatment_number\n"),
            std::string::npos);
  std::vector<std::string> rows;
  std::size_t start = 0;
  while (start < tsv.size()) {
    const auto end = tsv.find('\n', start);
    rows.push_back(tsv.substr(start, end - start));
    start = end + 1;
  }
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
  EXPECT_EQ(std::adjacent_find(rows.begin(), rows.end()), rows.end());
}

TEST(Emit, WritesEveryFormatDeterministically) {
  const auto r = derive_hospital();
  const fs::path a = scratch_dir("a"), b = scratch_dir("b");
  EmitConfig cfg;
  cfg.out_dir = a;
  const auto written = emit_model(r.om, r.stds, r.trace, cfg);
  cfg.out_dir = b;
  emit_model(r.om, r.stds, r.trace, cfg);
  EXPECT_EQ(written.size(), 3u + r.stds.size());
  for (const auto& p : written) {
    EXPECT_EQ(read_text(p), read_text(b / p.filename())) << p;
    EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
  }
  EXPECT_TRUE(fs::exists(a / "std_MEDICAL_TREATMENT.dot"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Emit, FormatSelection) {
  EXPECT_EQ(parse_formats("json"), (std::set<Format>{Format::model_json}));
  EXPECT_EQ(parse_formats("dot,trace"),
            (std::set<Format>{Format::class_dot, Format::std_dot, Format::trace_report}));
  EXPECT_FALSE(parse_formats("").has_value());
  EXPECT_FALSE(parse_formats("yaml").has_value());

  const auto r = derive_hospital();
  const fs::path dir = scratch_dir("sel");
  EmitConfig cfg;
  cfg.out_dir = dir;
  cfg.formats = {Format::trace_report};
  const auto written = emit_model(r.om, r.stds, r.trace, cfg);
  ASSERT_EQ(written.size(), 1u);
  EXPECT_EQ(written[0].filename(), "trace.tsv");
  fs::remove_all(dir);
}

TEST(Emit, UnwritableDirectory) {
  const fs::path blocker = scratch_dir("blocker");
  { std::ofstream(blocker) << "x"; }
  EmitConfig cfg;
  cfg.out_dir = blocker / "sub";
  try {
    emit_model({}, {}, {}, cfg);
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_EQ(e.code(), codes::kIo);
  }
  fs::remove(blocker);
}
