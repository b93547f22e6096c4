#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>

#include <gtest/gtest.h>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " CIRCUITRAND_CLI " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(CIRCUITRAND_DATA) + "/" + name; }

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string last_line(const std::string& s) {
  auto end = s.find_last_not_of('\n');
  auto start = s.rfind('\n', end);
  return s.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

}  // namespace

TEST(Catalog, FactorialMatchesDataFile) {
  const auto r = run("catalog factorial --k 3");
  ASSERT_EQ(r.status, 0);
  std::ifstream f(data("factorial3.mat"));
  const std::string expected((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(r.out, expected);
}

TEST(Catalog, OtherFamilies) {
  EXPECT_EQ(run("catalog choice --k 2").out.substr(0, 4), "6 4\n");
  EXPECT_EQ(run("catalog anova2 --I 2 --J 2").out, "4 4\n1 0 1 0\n1 0 0 1\n0 1 1 0\n0 1 0 1\n");
  EXPECT_EQ(run("catalog digraph").out.substr(0, 5), "15 6\n");
  EXPECT_EQ(run("catalog digraph --edges " + data("digraph.edges")).out, run("catalog digraph").out);
}

TEST(Catalog, BadParameters) {
  EXPECT_EQ(run("catalog factorial").status, 2);
  EXPECT_EQ(run("catalog factorial --k 40").status, 2);
  EXPECT_EQ(run("catalog nosuch --k 2").status, 2);
  EXPECT_EQ(run("catalog anova2 --I 1 --J 3").status, 2);
  EXPECT_EQ(run("").status, 2);
}

TEST(Circuits, SummaryLines) {
  EXPECT_EQ(last_line(run("circuits " + data("factorial3_contrasts.mat")).out),
            "circuits=20 nonnegative=6 binary=6");
  EXPECT_EQ(last_line(run("circuits " + data("factorial4_contrasts.mat")).out),
            "circuits=456 nonnegative=48 binary=32");
  EXPECT_EQ(last_line(run("circuits --design " + data("digraph.mat")).out),
            "circuits=198 nonnegative=33 binary=33");
  EXPECT_EQ(last_line(run("circuits " + data("digraph_incidence.mat")).out),
            "circuits=198 nonnegative=33 binary=33");
}

TEST(Circuits, NonnegativeListing) {
  const auto r = run("circuits --nonnegative " + data("factorial3_contrasts.mat"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out,
            "6 8\n"
            "0 0 0 1 1 0 0 0\n"
            "0 0 1 0 0 1 0 0\n"
            "0 1 0 0 0 0 1 0\n"
            "0 1 1 0 1 0 0 1\n"
            "1 0 0 0 0 0 0 1\n"
            "1 0 0 1 0 1 1 0\n"
            "circuits=20 nonnegative=6 binary=6\n");
}

TEST(Circuits, TransposeAndErrors) {
  // With the intercept row included no circuit can be nonnegative.
  EXPECT_TRUE(contains(run("circuits --transpose " + data("factorial3.mat")).out, " nonnegative=0 binary=0\n"));
  EXPECT_EQ(run("circuits /nonexistent.mat").status, 2);
  EXPECT_EQ(run("circuits " + data("latin_a.blocks")).status, 2);
}

TEST(Randomise, FactorialThree) {
  const auto r = run("randomise " + data("factorial3.mat"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out,
            "runs=8 contrasts=3 randomisation_vectors=6\n"
            "system 1 shape=4+4\n1 4 6 7\n2 3 5 8\n"
            "system 2 shape=2+2+2+2\n1 8\n2 7\n3 6\n4 5\n"
            "systems=2\n");
}

TEST(Randomise, DigraphShapes) {
  const auto r = run("randomise --shapes " + data("digraph.mat"));
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "shape count\n"));
  for (const char* row : {"5+5+5 1\n", "5+5+3+2 5\n", "5+3+3+2+2 5\n", "5+2+2+2+2+2 1\n", "4+4+3+2+2 10\n",
                          "4+3+2+2+2+2 5\n", "3+3+3+2+2+2 5\n"})
    EXPECT_TRUE(contains(r.out, row)) << row;
}

TEST(Randomise, Lattice) {
  const auto r = run("randomise --include-full --lattice " + data("factorial3.mat"));
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "systems=3\n"));
  EXPECT_TRUE(contains(r.out, "refines 2 1\nrefines 3 1\nlattice_edges=2\n"));
}

TEST(Randomise, CheckLatinSquares) {
  for (const char* f : {"latin_a.blocks", "latin_b.blocks"}) {
    const auto r = run("randomise " + data("anova33.mat") + " --check " + data(f));
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "valid\n");
  }
}

TEST(Randomise, CheckReportsViolation) {
  const auto r = run("randomise " + data("factorial3.mat") + " --check " + data("halves.blocks"));
  EXPECT_EQ(r.status, 4);
  EXPECT_EQ(r.out, "invalid: block {1,2,3,4} has inner products (4, 0, 0) with the contrasts\n");
  const auto o = run("randomise " + data("factorial3.mat") + " --check " + data("overlap.blocks"));
  EXPECT_EQ(o.status, 4);
  EXPECT_TRUE(contains(o.out, "not a partition"));
}

TEST(Randomise, ModelPrecondition) {
  EXPECT_EQ(run("randomise " + data("no_intercept.mat")).status, 3);
}

TEST(Tu, Verdicts) {
  EXPECT_EQ(run("tu " + data("digraph_incidence.mat")).out, "totally unimodular: yes\n");
  EXPECT_EQ(run("tu " + data("factorial3_contrasts.mat")).out, "totally unimodular: no\n");
  EXPECT_EQ(run("tu " + data("identity3.mat")).out, "totally unimodular: yes\n");
  const auto r = run("tu --cap 10 " + data("identity3.mat"));
  EXPECT_EQ(r.status, 5);
  EXPECT_EQ(r.out, "refused: 19 square submatrices exceed cap 10\n");
}

TEST(Analyse, BiasOfNonOrthogonalBlock) {
  const auto r = run("analyse " + data("factorial3.mat") + " --blocks " + data("first_half.blocks"));
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "bias: (1/2, 0, 0)\n"));
  EXPECT_TRUE(contains(r.out, "covariance: proper_dominates\n"));
  EXPECT_TRUE(contains(r.out, "valid system: no\n"));
}

TEST(Analyse, ValidSystemIsInvariant) {
  const auto r = run("analyse " + data("factorial3.mat") + " --blocks " + data("half_fractions.blocks") +
                     " --y " + data("theta0123.y"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out,
            "contrast estimates: (1, 2, 3)\n"
            "bias: (0, 0, 0)\n"
            "invariance: exact\n"
            "covariance: equal\n"
            "valid system: yes\n");
}

TEST(Analyse, SimulateWithoutConfounder) {
  const auto r = run("analyse --simulate --n1 4 --n2 6 --theta1 3 --theta2 1 --sd 0 --reps 20 --seed 5");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "replications=20 seed=5\nmean=2 se=0\nmin=2 max=2\n");
}

TEST(Analyse, Errors) {
  EXPECT_EQ(run("analyse").status, 2);
  EXPECT_EQ(run("analyse " + data("no_intercept.mat")).status, 3);
  EXPECT_EQ(run("analyse " + data("factorial3.mat") + " --y " + data("latin_a.blocks")).status, 2);
}

TEST(Records, SameNumbersAsText) {
  const auto text = run("circuits " + data("factorial4_contrasts.mat"));
  EXPECT_EQ(last_line(text.out), "circuits=456 nonnegative=48 binary=32");
  const auto rec = run("--format records circuits " + data("factorial4_contrasts.mat"));
  ASSERT_EQ(rec.status, 0);
  EXPECT_TRUE(contains(rec.out, "\"circuits\":456"));
  EXPECT_TRUE(contains(rec.out, "\"nonnegative\":48"));
  EXPECT_TRUE(contains(rec.out, "\"binary\":32"));
  const auto an = run("--format records analyse " + data("factorial3.mat") + " --blocks " + data("first_half.blocks"));
  EXPECT_TRUE(contains(an.out, "\"bias\":[\"1/2\",\"0\",\"0\"]"));
  const auto ran = run("--format records randomise " + data("factorial3.mat"));
  EXPECT_TRUE(contains(ran.out, "\"blocks\":[[1,4,6,7],[2,3,5,8]]"));
  EXPECT_TRUE(contains(ran.out, "\"count\":2"));
}

TEST(Determinism, ThreadCountsGiveIdenticalOutput) {
  for (const std::string& args : {"randomise --shapes --lattice " + data("factorial4.mat"),
                                 "circuits " + data("digraph_incidence.mat"),
                                 std::string("analyse --simulate --reps 2000 --seed 11")}) {
    const auto one = run(args, "CIRCUITRAND_THREADS=1");
    const auto many = run(args, "CIRCUITRAND_THREADS=16");
    const auto again = run(args, "CIRCUITRAND_THREADS=16");
    EXPECT_EQ(one.status, 0);
    EXPECT_EQ(one.out, many.out) << args;
    EXPECT_EQ(many.out, again.out) << args;
  }
}
