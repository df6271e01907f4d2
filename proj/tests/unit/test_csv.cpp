#include <doctest.h>

#include "szcov/csv.hpp"
#include "unit/test_util.hpp"

#include <fstream>
#include <sstream>

using namespace szcov;

namespace {

csv::Table table_of(const std::string& text) {
  std::istringstream in(text);
  return csv::parse_table(in, "mem");
}

}  // namespace

TEST_CASE("table parsing") {
  const auto t = table_of("a, b\r\n1,2\n\n 3 ,4\n");
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][0] == "3");
  CHECK(t.find("b") == 1);
  CHECK(t.find("c") == -1);
}

TEST_CASE("row length mismatch names the line") {
  try {
    table_of("a,b\n1,2\n3\n");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()) == "mem:3: expected 2 fields, found 1");
  }
  CHECK_THROWS_AS(table_of(""), InputError);
}

TEST_CASE("numeric fields") {
  CHECK(csv::parse_double("+1.5", "x") == 1.5);
  CHECK(csv::parse_double("-2e-3", "x") == -2e-3);
  CHECK_THROWS_AS(csv::parse_double("abc", "x"), InputError);
  CHECK_THROWS_AS(csv::parse_double("1.5x", "x"), InputError);
  CHECK_THROWS_AS(csv::parse_double("inf", "x"), InputError);
  CHECK_THROWS_AS(csv::parse_double("nan", "x"), InputError);
  CHECK(csv::parse_integer("42", "x") == 42);
  CHECK_THROWS_AS(csv::parse_integer("4.2", "x"), InputError);
}

TEST_CASE("doubles survive a text round trip exactly") {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int t = 0; t < 10000; ++t) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(csv::parse_double(csv::format_double(v), "x") == v);
  }
}

TEST_CASE("dataset round trip keeps values and mask") {
  Rng rng(6);
  const auto data = testing::random_dataset(15, 4, 0.6, rng);
  const auto text = csv::format_dataset(data);
  CHECK(text.find("NA") != std::string::npos);
  const auto back = csv::parse_dataset(table_of(text));
  CHECK(back.mask() == data.mask());
  for (Index i = 0; i < data.rows(); ++i)
    for (Index j = 0; j < data.cols(); ++j)
      if (data.observed(i, j)) CHECK(back.values()(i, j) == data.values()(i, j));
  CHECK(back.names() == data.names());
}

TEST_CASE("dataset rejects non-numeric cells and empty rows") {
  CHECK_THROWS_AS(csv::parse_dataset(table_of("a,b\n1,x\n")), InputError);
  CHECK_THROWS_AS(csv::parse_dataset(table_of("a,b\n1,2\nNA,NA\n")), InputError);
}

TEST_CASE("matrix round trip") {
  Rng rng(7);
  const MatrixXd m = testing::random_spd(4, 0.1, 2.0, rng);
  const auto back = csv::parse_matrix(table_of(csv::format_matrix(m, {"a", "b", "c", "d"})));
  CHECK(back == m);
}

TEST_CASE("atomic write replaces the file") {
  const auto dir = std::filesystem::temp_directory_path() / "szcov_test_csv";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  csv::write_atomic(path, "one\n");
  csv::write_atomic(path, "two\n");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "two\n");
  CHECK_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
  std::filesystem::remove_all(dir);
}
