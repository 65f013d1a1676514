#include <gtest/gtest.h>

#include <string>

#include "dttgf/io.hpp"

using namespace dttgf;

namespace {

template <typename Fn>
const Error* last_error(Fn&& fn) {
  static thread_local std::optional<Error> err;
  err.reset();
  try {
    fn();
  } catch (const Error& e) {
    err.emplace(e);
  }
  return err ? &*err : nullptr;
}

}  // namespace

TEST(Tsplib, MinimalThreeNodeFile) {
  const std::string text =
      "NAME : tiny\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\n"
      "NODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\nEOF\n";
  const auto inst = parse_tsplib(text);
  EXPECT_EQ(inst.size(), 3u);
  EXPECT_EQ(inst.name(), "tiny");
  EXPECT_EQ(inst.point(2), (Point{0, 1}));
  EXPECT_TRUE(inst.normalization().is_identity());
}

TEST(Tsplib, LargeCoordinatesAreNormalized) {
  const std::string text =
      "NAME: big\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n"
      "1 1000 2000\n2 4000 2000\n3 1000 6000\nEOF\n";
  const auto inst = parse_tsplib(text);
  EXPECT_DOUBLE_EQ(inst.normalization().scale, 4000.0);
  EXPECT_DOUBLE_EQ(inst.point(1).x, 0.75);
  EXPECT_DOUBLE_EQ(inst.point(2).y, 1.0);
  EXPECT_NEAR(tour_length(Tour{{0, 1, 2}}, inst) * inst.normalization().scale, 12000.0, 1e-9);
}

TEST(Tsplib, RoundTripHundredPoints) {
  const auto inst = gen_uniform(100, 9);
  const auto back = parse_tsplib(write_tsplib(inst));
  ASSERT_EQ(back.size(), 100u);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_NEAR(back.points()[i].x, inst.points()[i].x, 1e-9);
    EXPECT_NEAR(back.points()[i].y, inst.points()[i].y, 1e-9);
  }
}

TEST(Tsplib, RoundTripKeepsOriginalFrame) {
  const std::string text =
      "NAME: f\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n"
      "1 -5 3\n2 17.5 3\n3 2 40\n4 9 9\nEOF\n";
  const auto a = parse_tsplib(text);
  const auto b = parse_tsplib(write_tsplib(a));
  EXPECT_EQ(a.points(), b.points());
  EXPECT_DOUBLE_EQ(a.normalization().scale, b.normalization().scale);
}

TEST(Tsplib, UnsupportedWeightType) {
  const auto* e = last_error([] {
    parse_tsplib("NAME: x\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n");
  });
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->kind(), ErrorKind::unsupported_format);
}

TEST(Tsplib, MalformedCoordinateReportsLine) {
  const auto* e = last_error([] {
    parse_tsplib("NAME: x\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 abc\n");
  });
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->kind(), ErrorKind::parse);
  EXPECT_NE(std::string(e->what()).find("line 6"), std::string::npos) << e->what();
}

TEST(Tsplib, DimensionMismatch) {
  const auto* e = last_error([] {
    parse_tsplib("DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n");
  });
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->kind(), ErrorKind::parse);
}

TEST(TourFile, RoundTrip) {
  const Tour t{{3, 0, 2, 1}};
  EXPECT_EQ(write_tour(t), "3\n0\n2\n1\n");
  EXPECT_EQ(parse_tour(write_tour(t), 4).order, t.order);
}

TEST(TourFile, RejectsBadTours) {
  const auto* e = last_error([] { parse_tour("0\n1\n1\n", 3); });
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->kind(), ErrorKind::malformed_tour);
  e = last_error([] { parse_tour("0\nx\n", 2); });
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->kind(), ErrorKind::parse);
}

TEST(HeatmapFile, SortedCanonicalRoundTrip) {
  Heatmap P(6);
  P.set(4, 1, 0.25);
  P.set(0, 5, 1.0);
  P.set(2, 3, 1.0 / 3.0);
  P.set(0, 2, 0.5);
  const std::string text = write_heatmap(P);
  EXPECT_EQ(text.substr(0, 8), "0 2 0.5\n");
  EXPECT_EQ(parse_heatmap(text, 6), P);
}

TEST(HeatmapFile, RejectsBadEntries) {
  EXPECT_NE(last_error([] { parse_heatmap("0 0 0.5\n", 3); }), nullptr);
  EXPECT_NE(last_error([] { parse_heatmap("0 1 1.5\n", 3); }), nullptr);
  EXPECT_NE(last_error([] { parse_heatmap("0 7 0.5\n", 3); }), nullptr);
}

TEST(InstanceJson, RoundTrip) {
  const auto inst = gen_uniform(20, 1);
  const auto back = parse_instance_json(write_instance_json(inst));
  EXPECT_EQ(back.points(), inst.points());
  EXPECT_EQ(back.name(), inst.name());
}

TEST(InstanceJson, Malformed) {
  EXPECT_EQ(last_error([] { parse_instance_json("{\"points\": [[0, 0], [1]]}"); })->kind(),
            ErrorKind::parse);
  EXPECT_EQ(last_error([] { parse_instance_json("not json"); })->kind(), ErrorKind::parse);
}
