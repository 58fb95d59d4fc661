#include <gtest/gtest.h>

#include "carmc/names.hpp"

using namespace carmc::names;

TEST(Names, ClassNamesAreUpperWithUnderscores) {
  EXPECT_EQ(class_name("Medical treatment"), "MEDICAL_TREATMENT");
  EXPECT_EQ(class_name("  MEDICAL   TREATMENT "), "MEDICAL_TREATMENT");
  EXPECT_EQ(class_name("MEDICATION"), "MEDICATION");
}

TEST(Names, AttributeNamesAreLowerWithUnderscores) {
  EXPECT_EQ(attribute_name("Treatment number"), "treatment_number");
  EXPECT_EQ(attribute_name("Id dispensary"), "id_dispensary");
  EXPECT_EQ(attribute_name("Delivery date"), "delivery_date");
}

TEST(Names, CamelAndEventTokens) {
  EXPECT_EQ(camel("MEDICAL_TREATMENT"), "MedicalTreatment");
  EXPECT_EQ(camel("Patient"), "Patient");
  EXPECT_EQ(event_token("TREAT 1"), "Treat1");
  EXPECT_EQ(snake("A nurse assigns the dispensary"), "a_nurse_assigns_the_dispensary");
}

TEST(Names, SqueezeAndCase) {
  EXPECT_EQ(squeeze("  a \t b  "), "a b");
  EXPECT_TRUE(iequals("Patient", "PATIENT"));
  EXPECT_FALSE(iequals("Patient", "Patients"));
  EXPECT_EQ(business_object_key("Medical treatment"), business_object_key("MEDICAL TREATMENT"));
}
