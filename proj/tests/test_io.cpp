#include <cmath>
#include <filesystem>
#include <optional>
#include <string>

#include <gtest/gtest.h>

#include "ldplab/benchmarks.hpp"
#include "ldplab/io.hpp"

using namespace ldplab;

namespace {

std::string one_atom(const std::string& weight, const std::string& matrix = "[[1,0],[0,1]]") {
  return R"({"dim": 2, "atoms": [{"label": "a", "weight": )" + weight + R"(, "matrix": )" + matrix + "}]}";
}

std::optional<ErrorKind> kind_of(const std::string& text) {
  try {
    io::parse_measure(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

std::string message_of(const std::string& text) {
  try {
    io::parse_measure(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ParseMeasure, ShippedFiles) {
  const std::filesystem::path data = LDPLAB_DATA_DIR;
  const auto pair = io::load_measure(data / "diagonal_pair.json");
  EXPECT_EQ(pair.dim(), 2u);
  ASSERT_EQ(pair.atoms().size(), 2u);
  EXPECT_EQ(pair.atom(1).label, "B");
  EXPECT_NEAR(std::log(pair.atom(1).matrix(0, 0)), 3.5, 1e-14);
  EXPECT_EQ(io::load_measure(data / "identity.json").dim(), 3u);
  EXPECT_EQ(io::load_measure(data / "boundary_k1.json").atoms().size(), 3u);
  EXPECT_EQ(io::load_measure(data / "schottky_pair.json").atoms().size(), 2u);
}

TEST(ParseMeasure, WeightValidation) {
  EXPECT_EQ(kind_of(one_atom("0.9")), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of(one_atom("-1")), ErrorKind::ValidationError);
  // within 1e-9 of one: renormalized
  const auto m = io::parse_measure(one_atom("1.0000000005"));
  EXPECT_EQ(m.atom(0).weight, 1.0);
  const std::string two = R"({"dim": 1, "atoms": [
      {"label": "a", "weight": 0.3333333333, "matrix": [[2]]},
      {"label": "b", "weight": 0.6666666666, "matrix": [[3]]}]})";
  const auto t = io::parse_measure(two);
  EXPECT_NEAR(t.atom(0).weight + t.atom(1).weight, 1.0, 1e-15);
}

TEST(ParseMeasure, StructuralErrors) {
  const std::string dup = R"({"dim": 1, "atoms": [
      {"label": "a", "weight": 0.5, "matrix": [[2]]},
      {"label": "a", "weight": 0.5, "matrix": [[3]]}]})";
  EXPECT_EQ(kind_of(dup), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of(one_atom("1", "[[1,0],[0,0]]")), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of(one_atom("1", "[[1,0]]")), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of(one_atom("1", "[[1,0],[0]]")), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of(R"({"dim": 2, "atoms": []})"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(R"({"dim": 0, "atoms": []})"), ErrorKind::ParseError);
}

TEST(ParseMeasure, ErrorsNameLineAndField) {
  const std::string broken = "{\n  \"dim\": 2,\n  \"atoms\": [\n    oops\n  ]\n}";
  EXPECT_EQ(kind_of(broken), ErrorKind::ParseError);
  EXPECT_NE(message_of(broken).find("line 4"), std::string::npos);

  const std::string bad_weight = one_atom("\"half\"");
  EXPECT_EQ(kind_of(bad_weight), ErrorKind::ParseError);
  EXPECT_NE(message_of(bad_weight).find("$.atoms[0].weight"), std::string::npos);

  const std::string no_label = R"({"dim": 1, "atoms": [{"weight": 1, "matrix": [[2]]}]})";
  EXPECT_NE(message_of(no_label).find("$.atoms[0].label"), std::string::npos);
}

TEST(ParseMeasure, MissingFile) {
  try {
    io::load_measure("/nonexistent/measure.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}

TEST(WriteMeasure, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "ldplab_test_io";
  std::filesystem::remove_all(dir);
  const auto mu = benchmarks::boundary_example(3);
  io::write_measure(dir / "mu.json", mu);
  EXPECT_FALSE(std::filesystem::exists(dir / "mu.json.tmp"));
  const auto back = io::load_measure(dir / "mu.json");
  ASSERT_EQ(back.atoms().size(), mu.atoms().size());
  for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
    EXPECT_EQ(back.atom(i).label, mu.atom(i).label);
    EXPECT_EQ(back.atom(i).weight, mu.atom(i).weight);
    EXPECT_EQ(back.atom(i).matrix.matrix(), mu.atom(i).matrix.matrix());
  }
  std::filesystem::remove_all(dir);
}

TEST(Csv, FormatAndWidth) {
  io::CsvTable t({"x", "value"});
  t.add_row({io::format_number(0.1), io::format_number(INFINITY)});
  t.add_row({io::format_number(-2.0), io::format_number(NAN)});
  EXPECT_EQ(t.str(), "x,value\n0.1,inf\n-2.0,nan\n");
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_THROW(t.add_row({"1"}), Error);
}
