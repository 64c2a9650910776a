#include "doctest.h"

#include "mcgl/io.hpp"
#include "mcgl/rng.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

using namespace mcgl;
using mcgl::io::ParseError;

TEST_CASE("format_double round-trips")
{
  CHECK(io::format_double(0.25) == "0.25");
  CHECK(io::format_double(-3.0) == "-3");
  CHECK(io::format_double(1e-300) == "1e-300");
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal() * std::pow(10.0, rng.uniform(-20.0, 20.0));
    CHECK(std::stod(io::format_double(x)) == x);
  }
}

TEST_CASE("edge list writing")
{
  WeightVector w(4);
  w[edge_offset(0, 1, 4)] = 1.5;
  w[edge_offset(2, 3, 4)] = 0.123456789;
  std::ostringstream out;
  io::write_edge_list(out, w);
  CHECK(out.str() == "# nodes 4\n1 2 1.5\n3 4 0.123457\n");
}

TEST_CASE("edge list reading")
{
  SUBCASE("basic file with comments, blank lines and reversed pairs")
  {
    std::istringstream in("# nodes 3\n\n2 1 0.5\n# comment\n2 3 2\n");
    const WeightVector w = io::read_edge_list(in);
    CHECK(w.nodes() == 3);
    CHECK(w.weight(0, 1) == 0.5);
    CHECK(w.weight(1, 2) == 2.0);
    CHECK(w.weight(0, 2) == 0.0);
  }
  SUBCASE("round trip at six significant digits")
  {
    Rng rng(5);
    WeightVector w(7);
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      w[k] = rng.bernoulli(0.5) ? rng.uniform(0.1, 3.0) : 0.0;
    }
    std::stringstream io_buf;
    io::write_edge_list(io_buf, w);
    const WeightVector back = io::read_edge_list(io_buf);
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      CHECK(back[k] == doctest::Approx(w[k]).epsilon(5e-6));
      CHECK((back[k] == 0.0) == (w[k] == 0.0));
    }
  }
  SUBCASE("errors")
  {
    for (const char* text : {"", "1 2 0.5\n", "# nodes 1\n", "# nodes 3\n1 2\n", "# nodes 3\n1 4 1\n",
                             "# nodes 3\n0 1 1\n", "# nodes 3\n2 2 1\n", "# nodes 3\n1 2 -1\n", "# nodes 3\n1 2 x\n",
                             "# nodes 3\n1.5 2 1\n", "# nodes 3\n-1 2 1\n", "# nodes 3\n1 2 nan\n"}) {
      std::istringstream in(text);
      CHECK_THROWS_AS(io::read_edge_list(in), ParseError);
    }
  }
}

TEST_CASE("matrix round trip is exact")
{
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto r = static_cast<Eigen::Index>(1 + t % 6);
    const auto c = static_cast<Eigen::Index>(1 + (t * 5) % 7);
    Matrix M(r, c);
    for (auto& x : M.reshaped()) {
      x = rng.normal() * std::pow(10.0, rng.uniform(-8.0, 8.0));
    }
    std::stringstream buf;
    io::write_matrix(buf, M);
    CHECK(io::read_matrix(buf) == M);
  }
}

TEST_CASE("matrix reading")
{
  std::istringstream in("# header\n1 2;3\n4,5,\t6\n");
  Matrix expected(2, 3);
  expected << 1, 2, 3, 4, 5, 6;
  CHECK(io::read_matrix(in) == expected);

  for (const char* text : {"", "# only a comment\n", "1,2\n3\n", "1,abc\n"}) {
    std::istringstream bad(text);
    CHECK_THROWS_AS(io::read_matrix(bad), ParseError);
  }
}

TEST_CASE("file helpers")
{
  const auto dir = std::filesystem::temp_directory_path() / "mcgl_test_io";
  std::filesystem::create_directories(dir);
  WeightVector w(3);
  w[0] = 1.0;
  io::save_edge_list(dir / "g.edges", w);
  CHECK(io::load_edge_list(dir / "g.edges").values() == w.values());
  io::save_matrix(dir / "m.csv", Matrix::Identity(2, 2));
  CHECK(io::load_matrix(dir / "m.csv") == Matrix::Identity(2, 2));
  CHECK_THROWS(io::load_matrix(dir / "missing.csv"));
  std::filesystem::remove_all(dir);
}
