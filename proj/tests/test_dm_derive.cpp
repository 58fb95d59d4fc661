#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "carmc/carm_io.hpp"
#include "carmc/dynamic_model.hpp"
#include "carmc/emit.hpp"
#include "fixtures.hpp"
#include "support/oracles.hpp"

using namespace carmc;
using carmc::testing::derive_fixture;

namespace {

using Arc = std::tuple<std::string, std::string, std::string>;  // from, service, to

std::set<Arc> arcs(const StateTransitionDiagram& d) {
  std::set<Arc> out;
  for (const auto& t : d.transitions) out.emplace(t.from, t.label(), t.to);
  return out;
}

std::set<std::string> state_names(const StateTransitionDiagram& d) {
  std::set<std::string> out;
  for (const auto& s : d.states) out.insert(s.name);
  return out;
}

const StateTransitionDiagram& std_of(const PipelineResult& r, const std::string& cls) {
  for (const auto& d : r.stds) {
    if (d.class_name == cls) return d;
  }
  throw std::runtime_error("no STD for " + cls);
}

EventReaction svc(const std::string& name) { return {name, {"CLERK"}}; }

}  // namespace

TEST(StdBuilder, StartsInPreCreation) {
  TraceMap trace;
  StdBuilder b("K", trace);
  ASSERT_EQ(b.diagram().states.size(), 1u);
  EXPECT_EQ(b.diagram().states[0].name, kPreCreation);
  EXPECT_EQ(b.diagram().states[0].kind, StateKind::pre_creation);
  EXPECT_TRUE(b.diagram().transitions.empty());
  ASSERT_EQ(trace.links().size(), 2u);
  for (const auto& l : trace.links()) {
    EXPECT_EQ(l.rule, "DM2");
    EXPECT_EQ(l.source, kStartNode);
  }
  EXPECT_TRUE(trace.has_derived("std:K"));
  EXPECT_TRUE(trace.has_derived("std:K/Pre_creation"));
}

TEST(StdBuilder, InitialAndSequentialEvents) {
  TraceMap trace;
  StdBuilder b("K", trace);
  b.transform_event("A", {}, svc("new_k"));
  b.transform_event("B", {"A"}, svc("b_k"));
  EXPECT_EQ(state_names(b.diagram()), (std::set<std::string>{"Pre_creation", "Aed", "Bed"}));
  EXPECT_EQ(arcs(b.diagram()),
            (std::set<Arc>{{"Pre_creation", "new_k", "Aed"}, {"Aed", "b_k", "Bed"}}));
  EXPECT_EQ(b.trace_states("B"), std::vector<std::string>{"Bed"});
  for (const auto& t : b.diagram().transitions) {
    EXPECT_EQ(t.agents, std::vector<std::string>{"CLERK"});
  }
}

TEST(StdBuilder, OrMergeGetsOneTransitionPerPrecedent) {
  TraceMap trace;
  StdBuilder b("K", trace);
  b.transform_event("A", {}, svc("new_k"));
  b.transform_event("B", {"A"}, svc("b"));
  b.transform_event("C", {"A"}, svc("c"));
  b.transform_event("D", {"B", "C"}, svc("d"));
  const auto a = arcs(b.diagram());
  EXPECT_TRUE(a.count({"Bed", "d", "Ded"}));
  EXPECT_TRUE(a.count({"Ced", "d", "Ded"}));
  EXPECT_EQ(a.size(), 5u);
  EXPECT_EQ(b.diagram().states.size(), 5u);
}

TEST(StdBuilder, SpecializedEventBranchesPerVariant) {
  TraceMap trace;
  StdBuilder b("K", trace);
  b.transform_event("A", {}, svc("new_k"));
  b.transform_specialized("B", {"A"}, svc("b"), {{"B1", "p_x > 3"}, {"B2", "p_x <= 3"}});
  const auto a = arcs(b.diagram());
  EXPECT_TRUE(a.count({"Aed", "b when p_x > 3", "B1ed"}));
  EXPECT_TRUE(a.count({"Aed", "b when p_x <= 3", "B2ed"}));
  EXPECT_EQ(b.trace_states("B"), (std::vector<std::string>{"B1ed", "B2ed"}));
  for (const auto& t : b.diagram().transitions) {
    if (t.service == "b") EXPECT_EQ(t.message, kDefaultTransitionMessage);
  }
}

TEST(StdBuilder, LatticeStateNames) {
  EXPECT_EQ(lattice_state_name({"C", "A"}), "A+Ced");
  EXPECT_EQ(lattice_state_name({"CASE 3", "CASE 2"}), "CASE 2+CASE 3ed");
}

class AndJoinAgainstOracle : public ::testing::TestWithParam<int> {};

TEST_P(AndJoinAgainstOracle, LatticeMatchesTheInterleavingMatrix) {
  const int k = GetParam();
  std::vector<std::string> events;
  std::map<std::string, EventReaction> reactions;
  TraceMap trace;
  StdBuilder b("K", trace);
  b.transform_event("R", {}, svc("new_k"));
  for (int i = 0; i < k; ++i) {
    const std::string id = "P" + std::to_string(i);
    events.push_back(id);
    reactions[id] = svc("s" + std::to_string(i));
    b.transform_event(id, {"R"}, reactions[id]);
  }
  b.transform_and_join("J", events, svc("j"), reactions);

  const auto oracle = carmc::testing::enumerate_join_network(events);
  auto name_of = [](const std::set<std::string>& cell) -> std::string {
    if (cell.empty()) return "Red";
    if (cell.size() == 1) return *cell.begin() + "ed";
    return lattice_state_name({cell.begin(), cell.end()});
  };
  std::set<std::string> expected_states = {"Pre_creation", "Jed"};
  for (const auto& cell : oracle.cells) expected_states.insert(name_of(cell));
  std::set<Arc> expected_arcs = {{"Pre_creation", "new_k", "Red"}};
  for (const auto& [from, ev, to] : oracle.links) {
    expected_arcs.emplace(name_of(from), reactions[ev].service, name_of(to));
  }
  std::set<std::string> all(events.begin(), events.end());
  expected_arcs.emplace(name_of(all), "j", "Jed");

  EXPECT_EQ(state_names(b.diagram()), expected_states);
  EXPECT_EQ(arcs(b.diagram()), expected_arcs);
  EXPECT_EQ(b.diagram().transitions.size(), expected_arcs.size());
  EXPECT_EQ(oracle.cells.size(), std::size_t{1} << k);
  EXPECT_EQ(oracle.links.size(), static_cast<std::size_t>(k) << (k - 1));
}

INSTANTIATE_TEST_SUITE_P(Sizes, AndJoinAgainstOracle, ::testing::Values(2, 3, 4));

TEST(StdBuilder, AndJoinNeedsACommonRoot) {
  TraceMap trace;
  StdBuilder b("K", trace);
  b.transform_event("A", {}, svc("new_k"));
  b.transform_event("B", {"A"}, svc("b"));
  b.transform_event("C", {"B"}, svc("c"));
  try {
    b.transform_and_join("J", {"B", "C"}, svc("j"), {{"B", svc("b")}, {"C", svc("c")}});
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_EQ(e.code(), "DM4");
  }
}

TEST(DynamicModel, HospitalMedicalTreatment) {
  const auto r = carmc::testing::derive_hospital();
  const auto& d = std_of(r, "MEDICAL_TREATMENT");
  EXPECT_EQ(state_names(d), (std::set<std::string>{"Pre_creation", "TREAT 1ed", "TREAT 2ed"}));
  EXPECT_EQ(arcs(d), (std::set<Arc>{
                         {"Pre_creation", "Treat1_prescribe_medication", "TREAT 1ed"},
                         {"TREAT 1ed", "Treat2_a_nurse_assigns_the_dispensary", "TREAT 2ed"},
                     }));
  for (const auto& t : d.transitions) {
    if (t.from == "Pre_creation") EXPECT_EQ(t.agents, std::vector<std::string>{"DOCTOR"});
    if (t.from == "TREAT 1ed") EXPECT_EQ(t.agents, std::vector<std::string>{"NURSE"});
  }
}

TEST(DynamicModel, HospitalDotMatchesGolden) {
  const auto r = carmc::testing::derive_hospital();
  EXPECT_EQ(std_to_dot(std_of(r, "MEDICAL_TREATMENT")),
            carmc::testing::read_text(
                carmc::testing::data_path("golden/std_MEDICAL_TREATMENT.dot")));
}

TEST(DynamicModel, OneStdPerClass) {
  const auto r = carmc::testing::derive_hospital();
  ASSERT_EQ(r.stds.size(), r.om.classes.size());
  for (std::size_t i = 0; i < r.stds.size(); ++i) {
    EXPECT_EQ(r.stds[i].class_name, r.om.classes[i].name);
    EXPECT_EQ(r.stds[i].states.front().name, kPreCreation);
  }
}

TEST(DynamicModel, SpecializedCreation) {
  const auto r = derive_fixture("specialized.carm");
  const auto& d = std_of(r, r.om.classes.front().name);
  EXPECT_EQ(arcs(d),
            (std::set<Arc>{
                {"Pre_creation", "new_leave_request when p_atrfinal_date > p_atrinitial_date",
                 "A1ed"},
                {"Pre_creation", "new_leave_request when p_atrfinal_date = p_atrinitial_date",
                 "A2ed"},
            }));
}

TEST(DynamicModel, AndJoinFixture) {
  const auto r = derive_fixture("and_join.carm");
  const auto& d = std_of(r, "CASE");
  EXPECT_EQ(arcs(d), (std::set<Arc>{
                         {"Pre_creation", "new_case", "CASE 1ed"},
                         {"CASE 1ed", "set_review_notes", "CASE 2ed"},
                         {"CASE 1ed", "set_assessment", "CASE 3ed"},
                         {"CASE 2ed", "set_assessment", "CASE 2+CASE 3ed"},
                         {"CASE 3ed", "set_review_notes", "CASE 2+CASE 3ed"},
                         {"CASE 2+CASE 3ed", "set_closing_date", "CASE 4ed"},
                     }));
  EXPECT_EQ(d.find_state("CASE 2+CASE 3ed")->kind, StateKind::auxiliary);
}

TEST(DynamicModel, SelfLoopsForEditAndSharedServices) {
  PipelineOptions options;
  options.derive.self_loops = true;
  const auto r = derive_fixture("hospital.carm", "hospital.ann", options);
  const auto& d = std_of(r, "MEDICAL_TREATMENT");
  const auto a = arcs(d);
  for (const char* s : {"set_delivery_date", "ins_dispensary", "del_dispensary"}) {
    EXPECT_TRUE(a.count({"TREAT 2ed", s, "TREAT 2ed"})) << s;
  }
  EXPECT_EQ(a.size(), 5u);
}

TEST(DynamicModel, ClassTouchedByDistantEvents) {
  // The class is created by X 1 and extended by X 3; X 2 in between does
  // not affect it and is bridged in the class sub-diagram.
  const RequirementsModel m = parse_model(R"(objects: Thing
process X: x
  start -> X 1
  X 1 -> X 2
  X 2 -> X 3
  X 3 -> X 1 [loopback]
  event X 1: made
    interface actor: Clerk
    message:
      THING =
      < Code | i | text | x
      >
    end message
  end event
  event X 2: noted
    interface actor: Clerk
    message:
      NOTE =
      < Text | i | text | x
      >
    end message
  end event
  event X 3: changed
    interface actor: Clerk
    message:
      CHANGE =
      < Which + | i | Thing | x | yes
        State | i | text  | y
      >
    end message
  end event
end process
)");
  DiagnosticSink sink;
  const auto r = run_pipeline(m, {}, sink);
  const auto& d = std_of(r, "THING");
  EXPECT_EQ(arcs(d), (std::set<Arc>{{"Pre_creation", "new_thing", "X 1ed"},
                                    {"X 1ed", "set_state", "X 3ed"}}));
}

TEST(DynamicModel, TraceCoversEveryStateAndTransition) {
  const auto r = carmc::testing::derive_hospital();
  for (const auto& d : r.stds) {
    for (const auto& s : d.states) {
      EXPECT_TRUE(r.trace.has_derived(paths::state(d.class_name, s.name))) << s.name;
    }
    for (const auto& t : d.transitions) {
      EXPECT_TRUE(
          r.trace.has_derived(paths::transition(d.class_name, t.from, t.to, t.service)))
          << t.label();
    }
  }
}
