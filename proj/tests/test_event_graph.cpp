#include <gtest/gtest.h>

#include <random>

#include "carmc/event_graph.hpp"
#include "fixtures.hpp"
#include "support/generator.hpp"
#include "support/oracles.hpp"

using namespace carmc;
using carmc::testing::Edge;
using carmc::testing::load_fixture;

namespace {

std::vector<Edge> order_edges(const EventGraph& g) {
  std::vector<Edge> out;
  for (const auto& e : g.edges) {
    if (!e.loopback && e.from != kStartNode) out.emplace_back(e.from, e.to);
  }
  return out;
}

std::vector<std::string> lexicographically_first(const EventGraph& g) {
  auto all = carmc::testing::all_linear_extensions({g.events.begin(), g.events.end()},
                                                   order_edges(g));
  EXPECT_FALSE(all.empty());
  return all.empty() ? std::vector<std::string>{} : all.front();
}

bool has_edge(const EventGraph& g, const std::string& from, const std::string& to) {
  for (const auto& e : g.edges) {
    if (e.from == from && e.to == to) return true;
  }
  return false;
}

void add_creation(TraceMap& trace, const std::string& cls, const std::string& event,
                  TraceKind kind = TraceKind::class_created) {
  trace.add(TraceLink{"OM6", event + "/X", cls, kind, event, cls, cls});
}

}  // namespace

TEST(EventGraph, ExtensionPullsInForeignPrecedents) {
  const RequirementsModel m = load_fixture("figure4.carm");
  const EventGraph g = extend_diagram(m, "A");
  const std::set<std::string> expected = {"A1", "A2", "A3", "A4", "B4", "B9"};
  EXPECT_EQ(g.events, expected);
  for (const char* out : {"C2", "B2", "B6"}) EXPECT_FALSE(g.contains(out)) << out;
  EXPECT_TRUE(has_edge(g, "B9", "B4"));
  EXPECT_TRUE(has_edge(g, "B4", "A1"));
  EXPECT_TRUE(has_edge(g, std::string(kStartNode), "B9"));
  EXPECT_FALSE(has_edge(g, "B9", "B6"));
}

TEST(EventGraph, ClosedProcessExtendsToItself) {
  const RequirementsModel m = load_fixture("figure4.carm");
  const EventGraph g = extend_diagram(m, "B");
  const std::set<std::string> expected = {"B2", "B4", "B6", "B9"};
  EXPECT_EQ(g.events, expected);
}

TEST(EventGraph, UnknownProcessIsRejected) {
  const RequirementsModel m = load_fixture("figure4.carm");
  try {
    extend_diagram(m, "Z");
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_EQ(e.code(), "OM1");
  }
}

TEST(EventGraph, HospitalTreatmentDiagram) {
  const RequirementsModel m = load_fixture("hospital.carm", "hospital.ann");
  const EventGraph g = extend_diagram(m, "TREAT");
  const std::set<std::string> expected = {"APP 1", "DIS 1", "MED 1", "NUR 1",
                                          "PAT 1", "TREAT 1", "TREAT 2"};
  EXPECT_EQ(g.events, expected);
  EXPECT_EQ(g.precedents("TREAT 1"), (std::vector<std::string>{"APP 1", "MED 1", "NUR 1"}));
  for (const auto& e : g.incoming("TREAT 1")) EXPECT_EQ(e.merge, MergeKind::and_join);
}

TEST(EventGraph, OrderIsTheLexicographicallySmallestLinearExtension) {
  const RequirementsModel m = load_fixture("figure4.carm");
  const EventGraph g = extend_diagram(m, "A");
  const auto order = sort_events(g);
  EXPECT_EQ(order, (std::vector<std::string>{"B9", "B4", "A1", "A2", "A3", "A4"}));
  EXPECT_EQ(order, lexicographically_first(g));
}

TEST(EventGraph, HospitalOrderRespectsPrecedence) {
  const RequirementsModel m = load_fixture("hospital.carm", "hospital.ann");
  const EventGraph g = full_diagram(m);
  const auto order = sort_events(g);
  EXPECT_TRUE(carmc::testing::respects(order, order_edges(g)));
  EXPECT_EQ(order, lexicographically_first(g));
}

TEST(EventGraph, SortMatchesBruteForceOnSmallRandomGraphs) {
  for (std::uint32_t seed = 1; seed <= 150; ++seed) {
    const RequirementsModel m = carmc::testing::random_model(seed, {6, 2});
    const EventGraph g = full_diagram(m);
    ASSERT_LE(g.events.size(), 6u);
    const auto order = sort_events(g);
    EXPECT_EQ(order, lexicographically_first(g)) << "seed " << seed;
  }
}

TEST(EventGraph, SortIsDeterministicAndStable) {
  const RequirementsModel m = load_fixture("figure4.carm");
  const EventGraph g = full_diagram(m);
  const auto first = sort_events(g);
  EXPECT_EQ(sort_events(g), first);
  EventGraph copy;
  copy.events = g.events;
  for (auto it = g.edges.rbegin(); it != g.edges.rend(); ++it) copy.edges.insert(*it);
  EXPECT_EQ(sort_events(copy), first);
}

TEST(EventGraph, CycleIsReported) {
  EventGraph g;
  g.events = {"X1", "X2", "X3"};
  g.edges = {{"X1", "X2"}, {"X2", "X3"}, {"X3", "X2"}};
  try {
    sort_events(g);
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_EQ(e.code(), "OM3");
    EXPECT_NE(e.diagnostics().front().message.find("X2"), std::string::npos);
    EXPECT_NE(e.diagnostics().front().message.find("X3"), std::string::npos);
  }
}

TEST(EventGraph, LoopbacksDoNotConstrainTheOrder) {
  EventGraph g;
  g.events = {"X1", "X2"};
  g.edges = {{"X1", "X2"}, {"X2", "X1", MergeKind::plain, true}};
  EXPECT_EQ(sort_events(g), (std::vector<std::string>{"X1", "X2"}));
}

TEST(EventGraph, SubDiagramBridgesRemovedEvents) {
  const RequirementsModel m = load_fixture("figure4.carm");
  const EventGraph g = extend_diagram(m, "A");
  TraceMap trace;
  add_creation(trace, "THING", "B9");
  add_creation(trace, "THING", "A1", TraceKind::class_extended);
  add_creation(trace, "THING", "A4", TraceKind::class_extended);
  const EventGraph sub = sub_diagram_for_class(g, trace, "THING");
  EXPECT_EQ(sub.events, (std::set<std::string>{"A1", "A4", "B9"}));
  EXPECT_TRUE(has_edge(sub, std::string(kStartNode), "B9"));
  EXPECT_TRUE(has_edge(sub, "B9", "A1"));
  EXPECT_TRUE(has_edge(sub, "A1", "A4"));
  EXPECT_TRUE(has_edge(sub, "B9", "A4"));
  for (const auto& e : sub.edges) EXPECT_FALSE(e.loopback);
  EXPECT_EQ(sub.edges.size(), 4u);
}

TEST(EventGraph, SubDiagramOfHospitalTreatment) {
  const auto r = carmc::testing::derive_hospital();
  const EventGraph sub = sub_diagram_for_class(r.graph, r.trace, "MEDICAL_TREATMENT");
  EXPECT_EQ(sub.events, (std::set<std::string>{"TREAT 1", "TREAT 2"}));
  EXPECT_TRUE(has_edge(sub, std::string(kStartNode), "TREAT 1"));
  EXPECT_TRUE(has_edge(sub, "TREAT 1", "TREAT 2"));
  EXPECT_EQ(sub.edges.size(), 2u);
}

TEST(EventGraph, SubDiagramOfUnknownClass) {
  const auto r = carmc::testing::derive_hospital();
  try {
    sub_diagram_for_class(r.graph, r.trace, "NOPE");
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_EQ(e.code(), "DM1");
  }
}
