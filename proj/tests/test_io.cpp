#include "tzlab/io.hpp"
#include "tzlab/surface.hpp"

#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <locale>
#include <random>
#include <sstream>
#include <string>

using namespace tzlab;
using io::CsvTable;

TEST(FormatNumber, ShortestRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int k = 0; k < 2000; ++k) {
    const double v = std::ldexp(mant(rng), expo(rng));
    const std::string s = io::format_number(v);
    double back = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
    ASSERT_EQ(res.ec, std::errc());
    EXPECT_EQ(back, v) << s;
  }
}

TEST(FormatNumber, Examples) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(1.0), "1");
  EXPECT_EQ(io::format_number(-2.5), "-2.5");
  EXPECT_EQ(io::format_number(1e-10), "1e-10");
  EXPECT_EQ(io::format_number(std::int64_t{-42}), "-42");
  EXPECT_EQ(io::format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(io::format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(FormatNumber, IgnoresGlobalLocale) {
  std::locale comma;
  try {
    comma = std::locale("de_DE.UTF-8");
  } catch (const std::runtime_error&) {
    GTEST_SKIP() << "de_DE.UTF-8 locale not installed";
  }
  const std::locale old = std::locale::global(comma);
  const std::string s = io::format_number(1234567.5);
  std::locale::global(old);
  EXPECT_EQ(s, "1234567.5");
}

TEST(Csv, Escaping) {
  EXPECT_EQ(io::csv_escape("plain"), "plain");
  EXPECT_EQ(io::csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(io::csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(io::csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, HeaderAndRows) {
  CsvTable t({"name", "value", "ok"});
  t.row() << "a" << 0.5 << true;
  t.row() << std::string("b,c") << 3 << false;
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.str(), "name,value,ok\na,0.5,true\n\"b,c\",3,false\n");
}

TEST(Csv, EmptyTableIsHeaderOnly) {
  CsvTable t({"x"});
  EXPECT_EQ(t.str(), "x\n");
}

TEST(Csv, RowWidthMismatchRejected) {
  CsvTable t({"a", "b"});
  t.row() << 1.0;
  EXPECT_THROW((void)t.str(), PreconditionError);
}

TEST(Json, NonFiniteBecomesNull) {
  EXPECT_TRUE(io::json_number(std::nan("")).is_null());
  EXPECT_TRUE(io::json_number(std::numeric_limits<double>::infinity()).is_null());
  EXPECT_EQ(io::json_number(1.5).get<double>(), 1.5);
}

TEST(FieldTable, RowMajorXFastest) {
  const auto g = build_grid(8);
  const auto f = ScalarField::from_function(g, [](double x, double y) { return x + 10.0 * y; });
  const std::string s = io::field_table(f).str();
  std::istringstream in(s);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "i,j,x,y,u");
  int rows = 0;
  while (std::getline(in, line)) {
    const int i = rows % 8, j = rows / 8;
    const std::string prefix = std::to_string(i) + "," + std::to_string(j) + ",";
    EXPECT_EQ(line.rfind(prefix, 0), 0u) << line;
    const double u = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_DOUBLE_EQ(u, f.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    ++rows;
  }
  EXPECT_EQ(rows, 64);
}

TEST(WriteFile, CreatesDirectoriesAndWritesBytes) {
  const auto dir = std::filesystem::temp_directory_path() / "tzlab_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  CsvTable t({"a"});
  t.row() << 1;
  io::write_csv(dir / "t.csv", t);
  std::ifstream in(dir / "t.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "a\n1\n");
  std::filesystem::remove_all(dir.parent_path());
}
