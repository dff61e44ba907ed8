#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "psdrank/error.hpp"
#include "psdrank/pencil_io.hpp"
#include "psdrank/polar.hpp"

using namespace psdrank;

TEST(PencilIo, LoadsDataFiles) {
  const Pencil disk = load_pencil(fixtures::data_path("disk.json"));
  EXPECT_EQ(disk.m, 2);
  EXPECT_EQ(disk.n, 2);
  EXPECT_EQ(disk.coefficient(1)(0, 1), 1.0);
  EXPECT_FALSE(disk.projection.has_value());
}

TEST(PencilIo, RoundTripWithProjection) {
  const Pencil p = pentagon_fixture();
  const Pencil q = parse_pencil_json(pencil_to_json(p));
  ASSERT_EQ(q.mats.size(), p.mats.size());
  for (std::size_t k = 0; k < p.mats.size(); ++k) EXPECT_EQ(q.mats[k].matrix(), p.mats[k].matrix());
  ASSERT_TRUE(q.projection.has_value());
  EXPECT_EQ(*q.projection, *p.projection);
}

TEST(PencilIo, SaveAndLoad) {
  const auto path = std::filesystem::temp_directory_path() / "psdrank_pencil_io_test.json";
  save_pencil(fixtures::disk(), path);
  const Pencil back = load_pencil(path);
  EXPECT_EQ(back.coefficient(0).matrix(), fixtures::disk().coefficient(0).matrix());
  std::filesystem::remove(path);
}

TEST(PencilIo, RejectsAsymmetry) {
  EXPECT_THROW(parse_pencil_json(R"({"m":2,"n":0,"mats":[[1,0.5,0.4,1]]})"), Error);
  const Pencil ok = parse_pencil_json(R"({"m":2,"n":0,"mats":[[1,0.5,0.5000000000000001,1]]})");
  EXPECT_EQ(ok.constant()(0, 1), ok.constant()(1, 0));
}

TEST(PencilIo, RejectsMalformed) {
  EXPECT_THROW(parse_pencil_json("{"), Error);
  EXPECT_THROW(parse_pencil_json(R"({"m":2,"n":1,"mats":[[1,0,0,1]]})"), Error);
  EXPECT_THROW(parse_pencil_json(R"({"m":2,"n":0,"mats":[[1,0,0]]})"), Error);
  EXPECT_THROW(parse_pencil_json(R"({"m":2,"n":1,"mats":[[1,0,0,1],[1,0,0,1]],"projection":[[1,2]]})"), Error);
  EXPECT_THROW(load_pencil("/nonexistent/pencil.json"), Error);
}

TEST(PencilIo, PentagonDataFileMatchesFixture) {
  const Pencil file = load_pencil(fixtures::data_path("pentagon.json"));
  const Pencil fixture = pentagon_fixture();
  for (std::size_t k = 0; k < fixture.mats.size(); ++k) EXPECT_EQ(file.mats[k].matrix(), fixture.mats[k].matrix());
  EXPECT_EQ(*file.projection, *fixture.projection);
}
