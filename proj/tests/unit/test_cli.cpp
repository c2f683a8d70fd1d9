#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "farf/image_io.hpp"
#include "fixtures.hpp"

namespace farf {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    testing::write_scenes(*dir_ / "train", 3, 48, 48, 100);
    testing::write_scenes(*dir_ / "test", 2, 36, 30, 200);
    fs::create_directories(*dir_ / "empty");
    write_image(*dir_ / "lr.png", testing::scene_color(16, 16, 300));
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static fs::path at(const std::string& name) { return *dir_ / name; }

  // Runs the CLI, capturing stdout and stderr; returns the exit status.
  static int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " \"" + FARF_CLI_PATH + "\" " + args + " >\"" +
                            at("stdout.txt").string() + "\" 2>\"" + at("stderr.txt").string() +
                            "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  static std::string out() { return slurp(at("stdout.txt")); }
  static std::string err() { return slurp(at("stderr.txt")); }

  static std::string tiny() {
    return "--n-trees 2 --max-depth 4 --min-leaf 24 --projection-dim 8 --ibp-iterations 2";
  }
  static int train(const std::string& model, const std::string& extra = "",
                   const std::string& env = "") {
    return run("train --hr-dir " + at("train").string() + " --out-model " + at(model).string() +
                   " " + tiny() + " " + extra,
               env);
  }

  static inline testing::TempDir* dir_ = nullptr;
};

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_NE(out().find("train"), std::string::npos);
  EXPECT_EQ(run("train --help"), 0);
  EXPECT_NE(out().find("--n-trees"), std::string::npos);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("train --out-model x.farf"), 2);
  EXPECT_EQ(run("sr --model m.farf --in a.png"), 2);
  EXPECT_EQ(run("train --hr-dir a --out-model b --n-trees zero"), 2);
  EXPECT_EQ(run("train --hr-dir a --out-model b --preset nope"), 2);
  EXPECT_EQ(run("eval --dataset " + at("test").string() + " --report r.csv"), 2);
}

TEST_F(Cli, TrainIsDeterministicAndSrProducesUpscaledImage) {
  ASSERT_EQ(train("a.farf"), 0) << err();
  EXPECT_NE(err().find("[time]"), std::string::npos);
  ASSERT_EQ(train("b.farf"), 0) << err();
  EXPECT_EQ(slurp(at("a.farf")), slurp(at("b.farf")));
  ASSERT_EQ(train("c.farf", "--seed 9"), 0) << err();
  EXPECT_NE(slurp(at("a.farf")), slurp(at("c.farf")));

  ASSERT_EQ(run("sr --model " + at("a.farf").string() + " --in " + at("lr.png").string() +
                " --out " + at("hr1.png").string()),
            0)
      << err();
  const ColorImage hr = read_image(at("hr1.png"));
  EXPECT_EQ(hr.width(), 48);
  EXPECT_EQ(hr.height(), 48);
  ASSERT_EQ(run("sr --model " + at("b.farf").string() + " --in " + at("lr.png").string() +
                " --out " + at("hr2.png").string() + " --scale 3"),
            0);
  EXPECT_EQ(slurp(at("hr1.png")), slurp(at("hr2.png")));
  EXPECT_EQ(run("sr --model " + at("a.farf").string() + " --in " + at("lr.png").string() +
                " --out " + at("hr3.png").string() + " --scale 2"),
            1);
}

TEST_F(Cli, ThreadCountDoesNotChangeTheModel) {
  ASSERT_EQ(train("t1.farf", "", "FARF_THREADS=1"), 0) << err();
  ASSERT_EQ(train("t3.farf", "", "FARF_THREADS=3"), 0) << err();
  EXPECT_EQ(slurp(at("t1.farf")), slurp(at("t3.farf")));
  ASSERT_EQ(run("sr --model " + at("t1.farf").string() + " --in " + at("lr.png").string() +
                    " --out " + at("s1.png").string(),
                "FARF_THREADS=1"),
            0);
  ASSERT_EQ(run("sr --model " + at("t1.farf").string() + " --in " + at("lr.png").string() +
                    " --out " + at("s3.png").string(),
                "FARF_THREADS=3"),
            0);
  EXPECT_EQ(slurp(at("s1.png")), slurp(at("s3.png")));
}

TEST_F(Cli, CorruptModelFailsCleanly) {
  ASSERT_EQ(train("good.farf"), 0) << err();
  std::string bytes = slurp(at("good.farf"));
  bytes[bytes.size() / 2] ^= 0x40;
  std::ofstream(at("bad.farf"), std::ios::binary) << bytes;
  EXPECT_EQ(run("sr --model " + at("bad.farf").string() + " --in " + at("lr.png").string() +
                " --out " + at("x.png").string()),
            1);
  EXPECT_NE(err().find("checksum"), std::string::npos);
  EXPECT_FALSE(fs::exists(at("x.png")));
  EXPECT_EQ(run("sr --model " + at("missing.farf").string() + " --in " + at("lr.png").string() +
                " --out " + at("x.png").string()),
            1);
}

TEST_F(Cli, EvalReports) {
  ASSERT_EQ(train("e.farf"), 0) << err();
  const std::string base = "eval --model " + at("e.farf").string() + " --dataset ";
  ASSERT_EQ(run(base + at("test").string() + " --report " + at("r1.csv").string()), 0) << err();
  EXPECT_NE(out().find("average"), std::string::npos);
  ASSERT_EQ(run(base + at("test").string() + " --report " + at("r2.csv").string()), 0);
  EXPECT_EQ(slurp(at("r1.csv")), slurp(at("r2.csv")));
  EXPECT_TRUE(fs::exists(at("r1.csv.meta")));
  EXPECT_EQ(run(base + at("empty").string() + " --report " + at("r3.csv").string()), 1);
  ASSERT_EQ(run("eval --baseline-only --dataset " + at("test").string() + " --report " +
                at("b.csv").string()),
            0);
  EXPECT_EQ(slurp(at("b.csv")).find("FARF"), std::string::npos);
}

TEST_F(Cli, AblateGrid) {
  const std::string base = "ablate --hr-dir " + at("train").string() + " --dataset " +
                           at("test").string() + " " + tiny();
  EXPECT_EQ(run(base + " --grid bogus --report " + at("g.csv").string()), 2);
  EXPECT_NE(err().find("RF+"), std::string::npos);
  ASSERT_EQ(run(base + " --grid RF,RF+ --report " + at("g.csv").string()), 0) << err();
  const std::string csv = slurp(at("g.csv"));
  for (const char* m : {"bicubic,", "RF,", "RF+,"}) {
    EXPECT_NE(csv.find(std::string("average,") + m), std::string::npos) << m;
  }
  ASSERT_EQ(run(base + " --grid trees=1,2 --report " + at("t.csv").string()), 0) << err();
  EXPECT_NE(slurp(at("t.csv")).find("FARF:T1"), std::string::npos);
}

}  // namespace
}  // namespace farf
