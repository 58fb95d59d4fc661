#include <gtest/gtest.h>

#include "carmc/carm_io.hpp"
#include "fixtures.hpp"

using namespace carmc;
using carmc::testing::load_fixture;

namespace {

const char* kTable1 = R"(objects: Patient, Nurse, Medicament
process TREAT: Medical treatment
  event TREAT 1: A doctor prescribes a medical treatment
    message:
      FIELD                  | OP | DOMAIN     | EXAMPLE VALUE
      MEDICAL TREATMENT =
      < Treatment number +   | g  | number     | 26411
        Initial date +       | i  | date       | 01-08-2004
        Final date +         | i  | date       | 01-08-2005
        Patient +            | i  | Patient    | 842133-W, Richard Pain
        Nurse +              | i  | Nurse      | APCB
        Comments +           |    | Text       |
        MEDICATIONS =
        { MEDICATION =
          < Medicament +     |    | Medicament | Folic Acid, Tab 1Mg
            Dosage +         | i  | text       | 1 tab 1Mg
            Frequency +      | i  | text       | Every morning
            Pain scale +     | i  | text       | No pain
            Sedation scale   | i  | text       | Wide awake
          >
        }
      >
    end message
  end event
end process
)";

std::size_t count_fields(const Substructure& s) {
  std::size_t n = 0;
  for (const auto& m : s.members) n += m.substructure() ? 0 : 1;
  return n;
}

}  // namespace

TEST(Parser, MessageStructureOfTreat1) {
  const RequirementsModel m = parse_model(kTable1, "t1.carm");
  const CommunicativeEvent* ev = m.find_event("TREAT 1");
  ASSERT_NE(ev, nullptr);
  EXPECT_EQ(ev->name, "A doctor prescribes a medical treatment");
  const Substructure& root = ev->message;
  EXPECT_TRUE(root.is_aggregation());
  EXPECT_EQ(root.name, "MEDICAL TREATMENT");
  EXPECT_EQ(count_fields(root), 6u);
  const Substructure* iteration = root.members.back().substructure();
  ASSERT_NE(iteration, nullptr);
  EXPECT_EQ(iteration->kind, Substructure::Kind::iteration);
  EXPECT_EQ(iteration->name, "MEDICATIONS");
  ASSERT_EQ(iteration->members.size(), 1u);
  const Substructure* medication = iteration->members.front().substructure();
  ASSERT_NE(medication, nullptr);
  EXPECT_EQ(medication->name, "MEDICATION");
  EXPECT_EQ(count_fields(*medication), 5u);

  const DataField* number = root.members[0].data_field();
  ASSERT_NE(number, nullptr);
  EXPECT_EQ(number->op, "g");
  EXPECT_EQ(number->domain, BasicDomain::number);
  EXPECT_EQ(number->example, "26411");
  const ReferenceField* patient = root.members[3].reference_field();
  ASSERT_NE(patient, nullptr);
  EXPECT_EQ(patient->domain, "Patient");
  EXPECT_EQ(patient->example, "842133-W, Richard Pain");
  EXPECT_FALSE(patient->extends_business_object);
  const DataField* comments = root.members[5].data_field();
  ASSERT_NE(comments, nullptr);
  EXPECT_EQ(comments->domain, BasicDomain::text);
  EXPECT_EQ(comments->op, "");
}

TEST(Parser, EmptyProcessHasNoEventsAndNoDiagnostics) {
  DiagnosticSink sink;
  const RequirementsModel m = parse_model("process EMPTY: Nothing yet\nend process\n", "e", sink);
  ASSERT_EQ(m.processes.size(), 1u);
  EXPECT_TRUE(m.processes[0].events.empty());
  EXPECT_TRUE(m.processes[0].precedences.empty());
  EXPECT_TRUE(sink.all().empty());
}

TEST(Parser, MarkedReferenceField) {
  const RequirementsModel m = load_fixture("hospital.carm");
  const CommunicativeEvent* ev = m.find_event("TREAT 2");
  ASSERT_NE(ev, nullptr);
  const ReferenceField* treatment = ev->message.members[0].reference_field();
  ASSERT_NE(treatment, nullptr);
  EXPECT_EQ(treatment->name, "Treatment");
  EXPECT_EQ(treatment->domain, "Medical treatment");
  EXPECT_TRUE(treatment->extends_business_object);
  EXPECT_FALSE(ev->message.members[2].reference_field()->extends_business_object);
}

TEST(Parser, PrecedenceListsExpandAndCarryFlags) {
  const RequirementsModel m = load_fixture("figure4.carm");
  const BusinessProcess* a = m.find_process("A");
  ASSERT_NE(a, nullptr);
  int into_a4 = 0;
  bool loopback = false;
  for (const auto& p : a->precedences) {
    if (p.to == "A4") {
      ++into_a4;
      EXPECT_EQ(p.merge, MergeKind::and_join);
    }
    loopback |= p.loopback && p.from == "A4" && p.to == "A1";
  }
  EXPECT_EQ(into_a4, 2);
  EXPECT_TRUE(loopback);
  EXPECT_FALSE(a->has_start_node);
  EXPECT_TRUE(m.find_process("B")->has_start_node);
}

TEST(Parser, SyntaxErrorCitesLineAndColumn) {
  try {
    parse_model("process P: x\n  event P 1: y\n    message:\n      A =\n      < F | i | text |\n    end message\n  end event\nend process\n",
                "bad.carm");
    FAIL() << "expected a syntax error";
  } catch (const CompileError& e) {
    ASSERT_EQ(e.diagnostics().size(), 1u);
    const Diagnostic& d = e.diagnostics().front();
    EXPECT_EQ(d.code, codes::kSyntax);
    EXPECT_EQ(d.loc.file, "bad.carm");
    EXPECT_GT(d.loc.line, 0);
    EXPECT_GT(d.loc.col, 0);
  }
}

TEST(Parser, RejectsDuplicateEventIds) {
  const char* text = R"(process P: p
  event P 1: a
    message:
      A =
      < F | i | text | x
      >
    end message
  end event
  event P 1: b
    message:
      B =
      < G | i | text | y
      >
    end message
  end event
end process
)";
  try {
    parse_model(text, "dup.carm");
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_EQ(e.code(), codes::kDuplicateEvent);
    EXPECT_EQ(e.diagnostics().front().loc.line, 9);
  }
}

TEST(Parser, RejectsUndeclaredBusinessObject) {
  const char* text = R"(objects: Customer
process P: p
  event P 1: a
    message:
      A =
      < F +   | i | text     | x
        Who   | i | Supplier | s
      >
    end message
  end event
end process
)";
  try {
    parse_model(text, "obj.carm");
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_EQ(e.code(), codes::kUnknownObject);
  }
}

TEST(Parser, RejectsMixedMergeKinds) {
  const char* text = R"(process P: p
  start -> P 1
  start -> P 2
  P 1 -> P 3 [and]
  P 2 -> P 3 [or]
  event P 1: a
    message:
      A =
      < F | i | text | x
      >
    end message
  end event
  event P 2: b
    message:
      B =
      < F | i | text | x
      >
    end message
  end event
  event P 3: c
    message:
      C =
      < F | i | text | x
      >
    end message
  end event
end process
)";
  try {
    parse_model(text, "merge.carm");
    FAIL();
  } catch (const CompileError& e) {
    EXPECT_EQ(e.code(), codes::kMergeKind);
  }
}

TEST(Parser, UnknownOpCodeIsKeptWithAWarning) {
  DiagnosticSink sink;
  const RequirementsModel m = parse_model(R"(process P: p
  event P 1: a
    message:
      A =
      < F | q | text | x
      >
    end message
  end event
end process
)",
                                          "op.carm", sink);
  EXPECT_EQ(m.find_event("P 1")->message.members[0].data_field()->op, "q");
  ASSERT_EQ(sink.all().size(), 1u);
  EXPECT_EQ(sink.all()[0].severity, Severity::warning);
  EXPECT_EQ(sink.all()[0].code, codes::kOpCode);
}

TEST(Parser, ElementsCarrySourceLocations) {
  const RequirementsModel m = load_fixture("hospital.carm");
  for (const auto* ev : m.all_events()) {
    EXPECT_GT(ev->loc.line, 0) << ev->id;
    for (const auto& v : walk_message(*ev)) {
      if (!v.member) continue;
      const SourceLoc loc = std::visit([](const auto& n) { return n.loc; }, v.member->node);
      EXPECT_GT(loc.line, 0) << v.path;
      EXPECT_FALSE(loc.file.empty()) << v.path;
    }
    for (const auto& r : ev->restrictions) EXPECT_GT(r.loc.line, 0);
  }
  for (const auto* p : m.all_precedences()) EXPECT_GT(p->loc.line, 0);
}

TEST(Parser, PrintThenParseRoundTrips) {
  const RequirementsModel m = load_fixture("hospital.carm", "hospital.ann");
  const std::string printed = print_model(m);
  const RequirementsModel again = parse_model(printed, "printed.carm");
  EXPECT_EQ(again, m);
  EXPECT_EQ(print_model(again), printed);
}

TEST(Parser, AnnotationsFile) {
  const AnnotationSet set = parse_annotations(
      "# note\n[TREAT 1/MEDICAL TREATMENT/Comments]\nsize = 200\n", "a.ann");
  const AnnotationValue* v = set.find("TREAT 1/MEDICAL TREATMENT/Comments", "size");
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->value, "200");
  EXPECT_EQ(v->loc.line, 3);
}
