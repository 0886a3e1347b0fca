#include <gtest/gtest.h>

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "dctfuse/bench.hpp"
#include "dctfuse/pgm.hpp"
#include "oracles.hpp"

namespace dctfuse {
namespace {

using nlohmann::json;
using testing::read_bytes;
using testing::Rng;
using testing::TempDir;
using testing::textured_image;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json load_json(const std::string& path) {
  std::ifstream f(path);
  return json::parse(f);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(91);
    const GrayImage ref = textured_image(rng, 72, 56);
    BenchSpec spec;
    spec.seed = 4;
    const auto pair = generate_pair(ref, spec);
    a_ = dir_.file("a.pgm");
    b_ = dir_.file("b.pgm");
    ref_ = dir_.file("ref.pgm");
    write_pgm(a_, pair.a);
    write_pgm(b_, pair.b);
    write_pgm(ref_, ref);
  }

  TempDir dir_;
  std::string a_, b_, ref_;
};

TEST_F(CliTest, FuseWritesImageMapAndCounts) {
  const auto r = run({"fuse", a_, b_, "-o", dir_.file("f.pgm"), "--map", dir_.file("m.pgm"),
                      "--counts", dir_.file("c.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const GrayImage fused = read_pgm(dir_.file("f.pgm"));
  EXPECT_EQ(fused.width(), 72);
  const GrayImage map = read_pgm(dir_.file("m.pgm"));
  EXPECT_EQ(map.width(), 9);
  EXPECT_EQ(map.height(), 7);
  for (auto p : map.pixels()) EXPECT_TRUE(p == 0 || p == 255);

  const json c = load_json(dir_.file("c.json"));
  EXPECT_EQ(c["measure"], "ampmax");
  EXPECT_EQ(c["blocks"], 63);
  EXPECT_EQ(c["additions"], 2 * 63 * 63);
  EXPECT_EQ(c["multiplications"], 0);
  EXPECT_EQ(c["comparisons"], 63);
  EXPECT_EQ(c["per_block"]["additions_per_source"], 63.0);
  EXPECT_EQ(c["per_block"]["multiplications_per_source"], 0.0);
  EXPECT_EQ(c["per_block"]["comparisons"], 1.0);
}

TEST_F(CliTest, FuseMeasuresAndCoefficientStreams) {
  for (const std::string m : {"variance", "sf", "acmax"}) {
    const auto r = run({"fuse", a_, b_, "-o", dir_.file(m + ".pgm"), "--measure", m, "--cv",
                        "--counts", dir_.file(m + ".json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(load_json(dir_.file(m + ".json"))["consistency_verification"].get<bool>());
  }
  ASSERT_EQ(run({"fuse", a_, b_, "-o", dir_.file("x.pgm"), "--arithmetic", "fixed", "--coeffs",
                 dir_.file("x.txt")})
                .code,
            0);
  std::ifstream f(dir_.file("x.txt"));
  std::string comment, header, line;
  std::getline(f, comment);
  std::getline(f, header);
  EXPECT_EQ(comment[0], '#');
  EXPECT_EQ(header, "format=fixed blocks_x=9 blocks_y=7 scale_log2=-20");
  int lines = 0;
  while (std::getline(f, line)) {
    std::istringstream s(line);
    long long v;
    int fields = 0;
    while (s >> v) ++fields;
    EXPECT_EQ(fields, 66);
    ++lines;
  }
  EXPECT_EQ(lines, 63);
}

TEST_F(CliTest, FixedFuseAndHwsimAreByteIdentical) {
  for (bool cv : {false, true}) {
    std::vector<std::string> fuse_args{"fuse", a_, b_, "-o", dir_.file("sw.pgm"), "--arithmetic", "fixed"};
    std::vector<std::string> hw_args{"hwsim", a_, b_, "--clock", "200e6", "-o", dir_.file("hw.pgm"),
                                     "--stats", dir_.file("s.json"), "--trace", dir_.file("t.txt")};
    if (cv) {
      fuse_args.push_back("--cv");
      hw_args.push_back("--cv");
    }
    ASSERT_EQ(run(fuse_args).code, 0);
    const auto r = run(hw_args);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_bytes(dir_.file("sw.pgm")), read_bytes(dir_.file("hw.pgm")));
    const json s = load_json(dir_.file("s.json"));
    EXPECT_EQ(s["blocks_processed"], 63);
    EXPECT_EQ(s["clock_hz"], 200e6);
    EXPECT_GT(s["total_cycles"].get<int>(), 63 * 16);
  }
  std::ifstream t(dir_.file("t.txt"));
  std::string first;
  std::getline(t, first);
  EXPECT_EQ(first, "cycle=0 stage=memory block=(0,0) action=enqueue");
}

TEST_F(CliTest, EvalWritesOneCsvRow) {
  ASSERT_EQ(run({"fuse", a_, b_, "-o", dir_.file("f.pgm")}).code, 0);
  const auto r = run({"eval", "--fused", dir_.file("f.pgm"), "--ref", ref_, "--a", a_, "--b", b_,
                      "-o", dir_.file("m.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(dir_.file("m.csv"));
  std::string header, row;
  std::getline(f, header);
  std::getline(f, row);
  EXPECT_EQ(header, "ssim,psnr,mse,mi,uiqi,qabf,sf,fmi");
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 7);

  const auto no_ref = run({"eval", "--fused", dir_.file("f.pgm"), "--a", a_, "--b", b_});
  ASSERT_EQ(no_ref.code, 0);
  EXPECT_NE(no_ref.out.find("\n,,,,,"), std::string::npos);
}

TEST_F(CliTest, BenchAndGenpair) {
  const auto g = run({"genpair", ref_, "-a", dir_.file("ga.pgm"), "-b", dir_.file("gb.pgm"),
                      "--split", "horizontal", "--seed", "12", "--index", "2"});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(read_pgm(dir_.file("ga.pgm")).height(), 56);

  std::filesystem::create_directory(dir_.path() / "refs");
  write_pgm(dir_.path() / "refs" / "r.pgm", read_pgm(ref_));
  const std::vector<std::string> args{"bench", "--refs", (dir_.path() / "refs").string(), "--pairs",
                                      "3", "--kernel", "5", "--split", "quadrant", "--seed", "8",
                                      "--methods", "ampmax,sf", "-o", dir_.file("t1.csv")};
  ASSERT_EQ(run(args).code, 0);
  auto again = args;
  again.back() = dir_.file("t2.csv");
  ASSERT_EQ(run(again).code, 0);
  EXPECT_EQ(read_bytes(dir_.file("t1.csv")), read_bytes(dir_.file("t2.csv")));
}

TEST(Cli, ThroughputReport) {
  TempDir dir;
  const auto r = run({"throughput", "--width", "3840", "--height", "2160", "--fps", "60",
                      "--streams", "2", "--clock", "200e6", "--json", dir.file("t.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("feasible: yes"), std::string::npos);
  EXPECT_NE(r.out.find("required: 995328000 px/s"), std::string::npos);
  EXPECT_NE(r.out.find("min_clock: 124.4 MHz"), std::string::npos);
  const json j = load_json(dir.file("t.json"));
  EXPECT_TRUE(j["feasible"].get<bool>());
  EXPECT_EQ(j["required_pixels_per_second"], 995328000.0);

  const auto slow = run({"throughput", "--clock", "100e6"});
  EXPECT_NE(slow.out.find("feasible: no"), std::string::npos);
}

TEST(Cli, ErrorsReturnNonZero) {
  EXPECT_NE(run({}).code, 0);
  EXPECT_NE(run({"frobnicate"}).code, 0);
  EXPECT_NE(run({"fuse", "/nonexistent/a.pgm", "/nonexistent/b.pgm", "-o", "/tmp/x.pgm"}).code, 0);
  const auto bad = run({"fuse", "a", "b", "-o", "c", "--measure", "blur"});
  EXPECT_NE(bad.code, 0);
  EXPECT_NE(bad.err.find("unknown measure"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, 0);
}

}  // namespace
}  // namespace dctfuse
