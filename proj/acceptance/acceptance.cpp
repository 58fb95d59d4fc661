// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "carmc/emit.hpp"
#include "carmc/pipeline.hpp"
#include "carmc/validate.hpp"
#include "fixtures.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace carmc;
using namespace carmc::testing;

namespace {

struct Outcome {
  std::vector<std::string> problems;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  bool passed() const { return problems.empty(); }
};

std::string describe(const Attribute& a) {
  std::ostringstream out;
  out << a.name << " " << (a.id ? "yes" : "no") << " " << to_string(a.attr_type) << " "
      << to_string(a.data_type) << " " << (a.size ? std::to_string(*a.size) : "-") << " "
      << (a.requested ? "yes" : "no") << " " << (a.null_allowed ? "yes" : "no");
  return out.str();
}

std::string describe(const Argument& a) {
  std::ostringstream out;
  out << a.name << " " << (a.data_type ? to_string(*a.data_type) : a.class_ref) << " "
      << (a.size ? std::to_string(*a.size) : "-") << " " << (a.null_allowed ? "yes" : "no");
  return out.str();
}

const StructuralRelationship* relationship(const ObjectModel& om, const std::string& a,
                                           const std::string& b) {
  for (const auto& r : om.relationships) {
    if (r.class_a == a && r.class_b == b) return &r;
  }
  return nullptr;
}

Outcome hospital_golden_run() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const PipelineResult r = derive_hospital();
  const std::string json = model_to_json(r.om);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.note = std::to_string(static_cast<int>(seconds * 1000)) + " ms";
  o.require(seconds < 1.0, "derivation took " + o.note);
  o.require(json == read_text(data_path("golden/hospital_model.json")),
            "model.json differs from the golden file");

  const Class* mt = r.om.find_class("MEDICAL_TREATMENT");
  if (!mt) {
    o.require(false, "no class MEDICAL_TREATMENT");
    return o;
  }
  const std::vector<std::string> attributes = {
      "treatment_number yes constant Autonumeric - yes no",
      "initial_date no variable Date - yes no",
      "final_date no variable Date - yes no",
      "comments no variable String 200 yes yes",
      "delivery_date no variable Date - no yes",
  };
  std::vector<std::string> got;
  for (const auto& a : mt->attributes) got.push_back(describe(a));
  o.require(got == attributes, "MEDICAL_TREATMENT attribute table");

  const Service* creation = mt->find_service("new_medical_treatment");
  const std::vector<std::string> arguments = {
      "p_atrtreatment_number Autonumeric - no", "p_atrinitial_date Date - no",
      "p_atrfinal_date Date - no", "p_atrcomments String 200 yes", "p_agrPatient PATIENT - no"};
  got.clear();
  if (creation) {
    for (const auto& a : creation->arguments) got.push_back(describe(a));
  }
  o.require(got == arguments, "new_medical_treatment arguments");

  const auto* medication = relationship(r.om, "MEDICAL_TREATMENT", "MEDICATION");
  o.require(medication && medication->card_b.many && medication->card_a == Cardinality::one_one(),
            "MEDICAL_TREATMENT--MEDICATION cardinalities");
  const auto* patient = relationship(r.om, "MEDICAL_TREATMENT", "PATIENT");
  o.require(patient && patient->card_b == Cardinality::one_one(),
            "MEDICAL_TREATMENT--PATIENT cardinalities");
  const auto* dispensary = relationship(r.om, "MEDICAL_TREATMENT", "DISPENSARY");
  o.require(dispensary && dispensary->card_a == Cardinality::zero_many() &&
                dispensary->card_b == Cardinality::zero_one(),
            "MEDICAL_TREATMENT--DISPENSARY cardinalities");
  for (const char* cls : {"MEDICAL_TREATMENT", "DISPENSARY"}) {
    const Class* c = r.om.find_class(cls);
    for (const char* svc : {"ins_dispensary", "del_dispensary"}) {
      o.require(c && c->find_service(svc), std::string(cls) + "." + svc);
    }
  }
  o.require(mt->find_service("Treat1_prescribe_medication") != nullptr,
            "Treat1_prescribe_medication");
  o.require(mt->find_service("set_delivery_date") != nullptr, "set_delivery_date");
  return o;
}

std::vector<Edge> order_edges(const EventGraph& g) {
  std::vector<Edge> out;
  for (const auto& e : g.edges) {
    if (!e.loopback && e.from != kStartNode) out.emplace_back(e.from, e.to);
  }
  return out;
}

Outcome event_ordering() {
  Outcome o;
  const RequirementsModel fig = load_fixture("figure4.carm");
  const EventGraph g = extend_diagram(fig, "A");
  const auto order = sort_events(g);
  const auto all = all_linear_extensions({g.events.begin(), g.events.end()}, order_edges(g));
  bool member = false;
  for (const auto& ext : all) member |= ext == order;
  o.require(g.events.size() <= 6, "poset has more than 6 events");
  o.require(member, "order is not a linear extension of the poset");

  const RequirementsModel hospital = load_fixture("hospital.carm", "hospital.ann");
  const EventGraph h = full_diagram(hospital);
  const auto horder = sort_events(h);
  o.require(respects(horder, order_edges(h)), "hospital order breaks a precedence");
  const std::vector<Edge> stated = {{"NUR 1", "TREAT 1"}, {"MED 1", "TREAT 1"},
                                    {"APP 1", "TREAT 1"}, {"TREAT 1", "TREAT 2"},
                                    {"DIS 1", "TREAT 2"}, {"PAT 1", "APP 1"}};
  o.require(respects(horder, stated), "hospital order breaks the stated constraints");
  o.note = std::to_string(all.size()) + " linear extensions checked";
  return o;
}

Outcome and_join_lattice() {
  Outcome o;
  using Arc = std::tuple<std::string, std::string, std::string>;
  for (int k = 2; k <= 4; ++k) {
    std::vector<std::string> events;
    std::map<std::string, EventReaction> reactions;
    TraceMap trace;
    StdBuilder b("K", trace);
    b.transform_event("R", {}, {"new_k", {}});
    for (int i = 0; i < k; ++i) {
      const std::string id = "P" + std::to_string(i);
      events.push_back(id);
      reactions[id] = {"s" + std::to_string(i), {}};
      b.transform_event(id, {"R"}, reactions[id]);
    }
    b.transform_and_join("J", events, {"j", {}}, reactions);

    const JoinNetwork net = enumerate_join_network(events);
    auto name_of = [](const std::set<std::string>& cell) -> std::string {
      if (cell.empty()) return "Red";
      if (cell.size() == 1) return *cell.begin() + "ed";
      return lattice_state_name({cell.begin(), cell.end()});
    };
    std::set<std::string> want_states = {"Pre_creation", "Jed"};
    for (const auto& c : net.cells) want_states.insert(name_of(c));
    std::set<Arc> want_arcs = {{"Pre_creation", "new_k", "Red"},
                               {name_of({events.begin(), events.end()}), "j", "Jed"}};
    for (const auto& [from, ev, to] : net.links) {
      want_arcs.emplace(name_of(from), reactions[ev].service, name_of(to));
    }
    std::set<std::string> got_states;
    for (const auto& s : b.diagram().states) got_states.insert(s.name);
    std::set<Arc> got_arcs;
    for (const auto& t : b.diagram().transitions) got_arcs.emplace(t.from, t.service, t.to);

    const std::string tag = "k=" + std::to_string(k) + ": ";
    o.require(got_states == want_states, tag + "state sets differ");
    o.require(got_arcs == want_arcs, tag + "transition sets differ");
    o.require(b.diagram().transitions.size() == got_arcs.size(), tag + "duplicate transitions");
    o.require(net.cells.size() == (std::size_t{1} << k), tag + "oracle cell count");
    o.require(net.links.size() == static_cast<std::size_t>(k) << (k - 1), tag + "oracle link count");
  }
  return o;
}

Outcome medical_treatment_std() {
  Outcome o;
  const PipelineResult r = derive_hospital();
  const StateTransitionDiagram* d = nullptr;
  for (const auto& s : r.stds) {
    if (s.class_name == "MEDICAL_TREATMENT") d = &s;
  }
  if (!d) {
    o.require(false, "no STD for MEDICAL_TREATMENT");
    return o;
  }
  std::set<std::string> states;
  for (const auto& s : d->states) states.insert(s.name);
  o.require(states == std::set<std::string>{"Pre_creation", "TREAT 1ed", "TREAT 2ed"},
            "state set");
  o.require(d->transitions.size() == 2, "transition count");
  const Transaction* txn = r.om.find_transaction("MEDICAL_TREATMENT",
                                                 "Treat2_a_nurse_assigns_the_dispensary");
  o.require(txn != nullptr, "TREAT 2 transaction");
  if (d->transitions.size() == 2 && txn) {
    o.require(d->transitions[1].from == "TREAT 1ed" && d->transitions[1].to == "TREAT 2ed" &&
                  d->transitions[1].service == txn->name,
              "second transition");
  }
  o.require(std_to_dot(*d) == read_text(data_path("golden/std_MEDICAL_TREATMENT.dot")),
            "dot differs from the hand-derived golden file");
  return o;
}

Outcome property_suites() {
  Outcome o;
  constexpr std::uint32_t kSeeds = 250;
  const std::vector<std::string> required = {
      "print_parse_round_trip", "derivation_determinism", "trace_totality",
      "requested_dichotomy",    "referenced_side_single_valued", "shared_service_pairing",
      "self_argument_first"};
  std::size_t max_events = 0;
  for (std::uint32_t seed = 1; seed <= kSeeds; ++seed) {
    const Sample s = make_sample(seed);
    max_events = std::max(max_events, s.model.all_events().size());
    for (const auto& name : required) {
      const auto v = property(name).check(s);
      if (!v.empty()) o.problems.push_back(name + " seed " + std::to_string(seed) + ": " + v[0]);
    }
  }
  o.require(max_events <= 12, "a model exceeds 12 events");
  o.note = std::to_string(kSeeds) + " models, " + std::to_string(required.size()) + " properties";
  return o;
}

Outcome validation_cases() {
  Outcome o;
  const std::pair<const char*, const char*> cases[] = {
      {"two_marks.carm", "OM2"}, {"dangling.carm", "OM1"}, {"cycle.carm", "OM3"}};
  for (const auto& [file, code] : cases) {
    const auto diags = validate_model(load_fixture(file));
    int errors = 0;
    for (const auto& d : diags) errors += d.severity == Severity::error;
    o.require(diags.size() == 1 && errors == 1 && diags[0].code == code,
              std::string(file) + " should give exactly one " + code);
  }
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"hospital golden run", hospital_golden_run},
      {"event ordering", event_ordering},
      {"and-join lattice", and_join_lattice},
      {"MEDICAL_TREATMENT state transition diagram", medical_treatment_std},
      {"property suites", property_suites},
      {"validation diagnostics", validation_cases},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [title, run] : criteria) {
    ++n;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.problems.push_back(std::string("threw: ") + e.what());
    }
    std::cout << "criterion " << n << " " << (o.passed() ? "PASS" : "FAIL") << "  " << title;
    if (!o.note.empty()) std::cout << " (" << o.note << ")";
    std::cout << "\n";
    for (std::size_t i = 0; i < o.problems.size() && i < 5; ++i) {
      std::cout << "    " << o.problems[i] << "\n";
    }
    failed += !o.passed();
  }
  return failed == 0 ? 0 : 1;
}
