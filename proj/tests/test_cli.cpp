#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "prnu_mixed/catalog.hpp"
#include "prnu_mixed/search.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = PRNU_MIXED_CLI;
const fs::path kCatalog = fs::path(PRNU_MIXED_DATA_DIR) / "camera_catalog.txt";

struct CliRun {
  int code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path p = fs::temp_directory_path() / "prnu_cli_tests" / info->name();
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Runs the CLI through the shell; `env` is prepended as assignments.
CliRun run(const std::string& args, const std::string& env = "") {
  const fs::path out = fs::temp_directory_path() / "prnu_cli_tests" / "stdout.txt";
  fs::create_directories(out.parent_path());
  const std::string cmd = env + " '" + kCli + "' " + args + " > '" + out.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

std::string line_starting(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(prefix, 0) == 0) return line;
  return {};
}

bool has_field(const std::string& line, const std::string& kv) {
  return (" " + line + " ").find(" " + kv + " ") != std::string::npos;
}

}  // namespace

TEST(CliRoa, HalfSizeBinningAgainstBilinear) {
  const CliRun r = run("roa bin bscale");
  ASSERT_EQ(r.code, 0);
  const std::string l = line_starting(r.out, "roa ");
  EXPECT_TRUE(has_field(l, "combined=13/32")) << l;
  EXPECT_TRUE(has_field(l, "analytic=0.46")) << l;
}

TEST(CliRoa, IdenticalLineSkipIsOne) {
  const CliRun r = run("roa lskip lskip");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(has_field(line_starting(r.out, "roa "), "combined=1"));
  EXPECT_TRUE(has_field(line_starting(r.out, "roa "), "analytic=1.00"));
}

TEST(CliRoa, ThreeByThreeBinningAgainstThirdScale) {
  const CliRun r = run("roa bin:3 bscale:3 --rows 96 --cols 96");
  ASSERT_EQ(r.code, 0);
  const std::string l = line_starting(r.out, "roa ");
  EXPECT_TRUE(has_field(l, "rounded=0.22")) << l;
  EXPECT_TRUE(has_field(l, "analytic=0.22")) << l;
}

TEST(CliRoa, CsvAndTable) {
  const CliRun r = run("roa --table --csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("a,b,rows,cols,red,green,blue,combined,value,analytic\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 13);
}

TEST(CliRoa, InvalidSpecIsAnError) {
  EXPECT_EQ(run("roa bin nearest").code, 2);
  EXPECT_EQ(run("roa 'scale factor=1/2; demosaic' bin").code, 2);
}

TEST(CliCatalog, LookupHit) {
  const CliRun r = run("catalog --catalog '" + kCatalog.string() + "' lookup 'Nexus 5' 3200x2368 1920x1080");
  ASSERT_EQ(r.code, 0);
  const std::string l = line_starting(r.out, "hit ");
  EXPECT_TRUE(has_field(l, "match=1883x1394")) << l;
  EXPECT_TRUE(has_field(l, "rf=0.5884")) << l;
}

TEST(CliCatalog, LookupMissPrintsSearchRange) {
  const CliRun r = run("catalog --catalog '" + kCatalog.string() + "' lookup Unknown 4000x3000 1280x720");
  ASSERT_EQ(r.code, 1);
  const auto oracle = prnu::search_range(prnu::MediaDims(720, 1280), prnu::MediaDims(3000, 4000));
  const std::string l = line_starting(r.out, "miss ");
  EXPECT_TRUE(has_field(l, "lo=" + prnu::to_string(oracle.lo))) << l;
  EXPECT_TRUE(has_field(l, "hi=" + prnu::to_string(oracle.hi))) << l;
  EXPECT_TRUE(has_field(l, "case=same-aspect")) << l;
}

TEST(CliCatalog, AddThenShowRoundTrips) {
  const fs::path dir = scratch();
  const fs::path cat = dir / "catalog.txt";
  fs::copy_file(kCatalog, cat);
  const std::string before = slurp(cat);
  ASSERT_EQ(run("catalog --catalog '" + cat.string() + "' add 'Pixel 7' 4080x3072 1920x1080 1920x1446 0.4706").code, 0);
  const std::string after = slurp(cat);
  EXPECT_EQ(after, before + "Pixel 7, 4080x3072, 1920x1080, 1920x1446, 0.4706\n");
  const CliRun show = run("catalog --catalog '" + cat.string() + "' show");
  EXPECT_EQ(show.code, 0);
  EXPECT_EQ(show.out, after);
  EXPECT_EQ(prnu::CameraCatalog::parse(after).serialize(), after);
  EXPECT_EQ(run("catalog --catalog '" + cat.string() + "' lookup 'Pixel 7' 4080x3072 1920x1080").code, 0);
}

TEST(CliCatalog, CorruptCatalogIsAnError) {
  const fs::path dir = scratch();
  std::ofstream(dir / "bad.txt") << "not, a, catalog\n";
  EXPECT_EQ(run("catalog --catalog '" + (dir / "bad.txt").string() + "' show").code, 2);
}

TEST(CliMatch, SyntheticPairs) {
  const fs::path dir = scratch();
  const std::string cam = " --rows 192 --cols 256 --image-stills 12 --video-frames 16 --sigma-x 0.03";
  ASSERT_EQ(run("simulate pair --out-dir '" + (dir / "same").string() + "'" + cam).code, 0);
  ASSERT_EQ(run("simulate pair --different-camera --out-dir '" + (dir / "diff").string() + "'" + cam).code, 0);

  const CliRun hit = run("match '" + (dir / "same/image.fe").string() + "' '" + (dir / "same/video.fe").string() +
                      "' --boundary-rows 6");
  EXPECT_EQ(hit.code, 0);
  const std::string l = line_starting(hit.out, "result ");
  EXPECT_TRUE(has_field(l, "decision=match")) << l;
  EXPECT_TRUE(has_field(l, "factor=1/2")) << l;

  const CliRun miss = run("match '" + (dir / "diff/image.fe").string() + "' '" + (dir / "diff/video.fe").string() +
                       "' --boundary-rows 6");
  EXPECT_EQ(miss.code, 1);
  EXPECT_TRUE(has_field(line_starting(miss.out, "result "), "decision=no_match"));

  // Raising tau above the observed PCE flips the decision.
  EXPECT_EQ(run("match '" + (dir / "same/image.fe").string() + "' '" + (dir / "same/video.fe").string() +
                "' --boundary-rows 6 --tau 1e9")
                .code,
            1);
}

TEST(CliMatch, TruncatedFingerprintIsAnError) {
  const fs::path dir = scratch();
  ASSERT_EQ(run("simulate pair --rows 64 --cols 96 --image-stills 2 --video-frames 2 --out-dir '" + dir.string() + "'")
                .code,
            0);
  const std::string bytes = slurp(dir / "video.fe");
  std::ofstream(dir / "cut.fe", std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  EXPECT_EQ(run("match '" + (dir / "image.fe").string() + "' '" + (dir / "cut.fe").string() + "'").code, 2);
  EXPECT_EQ(run("match '" + (dir / "image.fe").string() + "' '" + (dir / "missing.fe").string() + "'").code, 2);
  EXPECT_EQ(run("match '" + (dir / "image.fe").string() + "' '" + (dir / "video.fe").string() + "' --techniques nearest")
                .code,
            2);
}

TEST(CliSimulate, SeedDefaultsToZeroAndIsDeterministic) {
  const fs::path dir = scratch();
  const std::string cam = " --rows 64 --cols 96 --image-stills 2 --video-frames 2";
  ASSERT_EQ(run("simulate pair --out-dir '" + (dir / "a").string() + "'" + cam).code, 0);
  ASSERT_EQ(run("simulate pair --seed 0 --out-dir '" + (dir / "b").string() + "'" + cam).code, 0);
  ASSERT_EQ(run("simulate pair --seed 1 --out-dir '" + (dir / "c").string() + "'" + cam).code, 0);
  EXPECT_EQ(slurp(dir / "a/video.fe"), slurp(dir / "b/video.fe"));
  EXPECT_NE(slurp(dir / "a/video.fe"), slurp(dir / "c/video.fe"));
}

TEST(CliFingerprint, GroupsByCameraRoleAndResolution) {
  const fs::path dir = scratch();
  const std::string out = " --out-dir '" + (dir / "st").string() + "' --rows 64 --cols 96";
  ASSERT_EQ(run("simulate stills --count 3" + out).code, 0);
  ASSERT_EQ(run("simulate stills --count 2 --seed 1 --pipeline bscale" + out).code, 0);
  ASSERT_EQ(run("simulate stills --count 2 --seed 2 --pipeline bscale --role video-frames" + out).code, 0);
  const CliRun r = run("fingerprint '" + (dir / "st/manifest.txt").string() + "'",
                    "PRNU_MIXED_CACHE='" + (dir / "cache").string() + "'");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir / "cache/cam0_train-image_96x64.fe"));
  EXPECT_TRUE(fs::exists(dir / "cache/cam0_train-image_48x32.fe"));
  EXPECT_TRUE(fs::exists(dir / "cache/cam0_video-frames_48x32.fe"));
  EXPECT_TRUE(has_field(line_starting(r.out, "fingerprint group=cam0/train-image/96x64"), "count=3"));
  EXPECT_TRUE(has_field(line_starting(r.out, "fingerprint group=cam0/video-frames/48x32"), "count=2"));
}

TEST(CliFingerprint, DeclaredDimsMustMatch) {
  const fs::path dir = scratch();
  ASSERT_EQ(run("simulate stills --count 2 --rows 64 --cols 96 --out-dir '" + dir.string() + "'").code, 0);
  std::string m = slurp(dir / "manifest.txt");
  m.replace(m.rfind("96x64"), 5, "96x66");
  std::ofstream(dir / "bad.txt") << m;
  EXPECT_EQ(run("fingerprint '" + (dir / "bad.txt").string() + "' --out-dir '" + dir.string() + "'").code, 2);
  std::ofstream(dir / "empty.txt") << "# nothing\n";
  EXPECT_EQ(run("fingerprint '" + (dir / "empty.txt").string() + "' --out-dir '" + dir.string() + "'").code, 2);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("match onlyone.fe").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}
