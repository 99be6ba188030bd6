#include <gtest/gtest.h>

#include "properties.hpp"

namespace {

class PropertyTest : public ::testing::TestWithParam<dbd::oracle::Property> {};

TEST_P(PropertyTest, HoldsForAllCases) {
    const auto outcome = dbd::oracle::run_property(GetParam());
    EXPECT_EQ(outcome.cases, dbd::oracle::kPropertyCases);
    EXPECT_TRUE(outcome.passed()) << outcome.failures << " failing cases; first is case " << outcome.first_failing_case
                                  << ": " << outcome.first_failure;
}

INSTANTIATE_TEST_SUITE_P(AllModules, PropertyTest, ::testing::ValuesIn(dbd::oracle::all_properties()),
                         [](const auto& info) { return info.param.module + "_" + info.param.name; });

}  // namespace
