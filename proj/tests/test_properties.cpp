#include <cctype>
#include <string>

#include <gtest/gtest.h>

#include "ldplab/properties.hpp"

using namespace ldplab;

namespace {

const std::vector<properties::PropertyResult>& results() {
  static const auto r = properties::run_all(400, 31337);
  return r;
}

}  // namespace

class Property : public ::testing::TestWithParam<std::size_t> {};

TEST_P(Property, Holds) {
  const auto& r = results().at(GetParam());
  SCOPED_TRACE(r.name);
  EXPECT_GT(r.cases, 0u);
  EXPECT_EQ(r.failures, 0u) << r.first_failure << " (worst violation " << r.worst << ")";
}

INSTANTIATE_TEST_SUITE_P(AllProperties, Property, ::testing::Range<std::size_t>(0, 22),
                         [](const auto& info) {
                           // test names must be alphanumeric
                           std::string out = "p" + std::to_string(info.param);
                           bool gap = true;
                           for (char c : results().at(info.param).name) {
                             if (std::isalnum(static_cast<unsigned char>(c))) {
                               if (gap) out += '_';
                               out += c;
                               gap = false;
                             } else {
                               gap = true;
                             }
                           }
                           return out;
                         });

TEST(PropertyDraws, Deterministic) {
  properties::Draws a(5, 1), b(5, 1);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.uniform(), b.uniform());
  EXPECT_EQ(a.invertible(3).matrix(), b.invertible(3).matrix());
}
