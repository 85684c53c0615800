#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "prnu_mixed/catalog.hpp"

using namespace prnu;

#ifndef PRNU_MIXED_DATA_DIR
#define PRNU_MIXED_DATA_DIR "data"
#endif

namespace {

const std::filesystem::path kCatalog = std::filesystem::path(PRNU_MIXED_DATA_DIR) / "camera_catalog.txt";

CameraCatalog shipped() { return CameraCatalog::load(kCatalog); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Catalog, ShippedLookupsHit) {
  const auto cat = shipped();
  auto e = cat.lookup("Redmi Note 3", {4160, 3120}, {1920, 1080});
  ASSERT_TRUE(e);
  EXPECT_EQ(e->match, (Resolution{1898, 1424}));
  EXPECT_DOUBLE_EQ(e->rf, 0.4563);
  e = cat.lookup("Nexus 5", {3264, 2448}, {1280, 720});
  ASSERT_TRUE(e);
  EXPECT_EQ(e->match, (Resolution{1280, 960}));
  EXPECT_DOUBLE_EQ(e->rf, 0.3922);
  e = cat.lookup("Nexus 5", {3200, 2368}, {1920, 1080});
  ASSERT_TRUE(e);
  EXPECT_EQ(e->match, (Resolution{1883, 1394}));
  EXPECT_DOUBLE_EQ(e->rf, 0.5884);
  EXPECT_EQ(cat.entries().size(), 5u);
}

TEST(Catalog, SensorAnnotations) {
  const auto cat = shipped();
  const auto s = cat.sensor("Redmi Note 3");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->boundary, BoundaryUse::all);
  EXPECT_EQ(s->match, MatchMode::resizing_only);
  ASSERT_TRUE(s->dims);
  EXPECT_EQ(*s->dims, (Resolution{4160, 3120}));
  ASSERT_TRUE(s->crop);
  EXPECT_DOUBLE_EQ(s->crop->first, 0.987);
  EXPECT_EQ(cat.sensor("Nexus 5")->match, MatchMode::both);
  EXPECT_FALSE(cat.sensor("Pixel"));
}

TEST(Catalog, ShippedFileRoundTripsByteIdentically) {
  const std::string text = slurp(kCatalog);
  EXPECT_EQ(CameraCatalog::parse(text).serialize(), text);
}

TEST(Catalog, RoundTripKeepsIrregularSpacingAndMissingFinalNewline) {
  const std::string text = "# hi\n\nA ,  10x20,5x5 , 4x4,0.5\n  # sensor: A, dims=-, boundary=some, match=unknown, crop=NA";
  const auto cat = CameraCatalog::parse(text);
  EXPECT_EQ(cat.serialize(), text);
  EXPECT_EQ(cat.entries().size(), 1u);
  EXPECT_TRUE(cat.sensor("A"));
}

TEST(Catalog, AddThenSerializeIsCanonicalAndReparses) {
  auto cat = shipped();
  const std::string before = cat.serialize();
  cat.add(CatalogEntry{"Pixel 7", {4080, 3072}, {1920, 1080}, {1920, 1446}, 0.4706});
  cat.add(SensorInfo{"Pixel 7", Resolution{4080, 3072}, BoundaryUse::none, MatchMode::exhaustive, std::nullopt});
  const std::string after = cat.serialize();
  EXPECT_EQ(after, before + "Pixel 7, 4080x3072, 1920x1080, 1920x1446, 0.4706\n" +
                       "# sensor: Pixel 7, dims=4080x3072, boundary=none, match=exhaustive, crop=NA\n");
  const auto again = CameraCatalog::parse(after);
  EXPECT_EQ(again.serialize(), after);
  EXPECT_TRUE(again.lookup("Pixel 7", {4080, 3072}, {1920, 1080}));
}

TEST(Catalog, RejectsCorruptLines) {
  EXPECT_THROW(CameraCatalog::parse("A, 10x20, 5x5, 4x4\n"), FormatError);
  EXPECT_THROW(CameraCatalog::parse("A, 10y20, 5x5, 4x4, 0.5\n"), FormatError);
  EXPECT_THROW(CameraCatalog::parse("A, 10x20, 5x5, 4x4, zero\n"), FormatError);
  EXPECT_THROW(CameraCatalog::parse("# sensor: A, dims=-, boundary=most, match=both, crop=NA\n"), FormatError);
  EXPECT_THROW(CameraCatalog::parse("# sensor: A, dims=-, boundary=all, match=both, crop=0.9-0.8\n"), FormatError);
  try {
    CameraCatalog::parse("# ok\nbad line\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(CameraCatalog::load("/nonexistent/catalog.txt"), FormatError);
}

TEST(Catalog, AddRejectsCommaInModel) {
  CameraCatalog cat;
  EXPECT_THROW(cat.add(CatalogEntry{"A,B", {1, 1}, {1, 1}, {1, 1}, 1.0}), ValidationError);
}

TEST(LookupOrSearch, HitReturnsEntry) {
  const auto r = lookup_or_search(shipped(), "Nexus 5", MediaDims(2448, 3264), MediaDims(720, 1280));
  ASSERT_TRUE(std::holds_alternative<CatalogEntry>(r));
  EXPECT_EQ(std::get<CatalogEntry>(r).match, (Resolution{1280, 960}));
}

TEST(LookupOrSearch, UnknownModelFallsBackToSearchRange) {
  const auto r = lookup_or_search(shipped(), "Unknown", MediaDims(3000, 4000), MediaDims(1080, 1920));
  ASSERT_TRUE(std::holds_alternative<SearchRange>(r));
  const auto& sr = std::get<SearchRange>(r);
  const auto oracle = search_range(MediaDims(1080, 1920), MediaDims(3000, 4000));
  EXPECT_EQ(sr.lo, oracle.lo);
  EXPECT_EQ(sr.hi, oracle.hi);
}

TEST(LookupOrSearch, SensorDimsSupplyMinimumR1AndAspect) {
  // Known model, unlisted low-resolution image with the sensor aspect.
  const auto r = lookup_or_search(shipped(), "Nexus 5", MediaDims(1224, 1632), MediaDims(1080, 1920));
  ASSERT_TRUE(std::holds_alternative<SearchRange>(r));
  const auto& sr = std::get<SearchRange>(r);
  EXPECT_EQ(sr.hi, Rational(2));
  EXPECT_EQ(sr.kind, AspectCase::same_aspect);
  // A square crop of the same sensor is a different aspect: case (ii).
  const auto sq = lookup_or_search(shipped(), "Nexus 5", MediaDims(2448, 2448), MediaDims(1080, 1920));
  EXPECT_EQ(std::get<SearchRange>(sq).kind, AspectCase::diff_aspect);
}
