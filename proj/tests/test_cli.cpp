#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks on the installed command-line surface: every subcommand
// is exercised through a real process, and reproducibility means bytes.

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
    const char* env = std::getenv("BRDIM_CLI");
    return env ? env : "";
}

struct RunResult {
    int status;
    std::string out_file;
};

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

long count_lines(const std::string& text) {
    long n = 0;
    for (char ch : text) n += ch == '\n' ? 1 : 0;
    return n;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        ASSERT_FALSE(cli_path().empty()) << "BRDIM_CLI not set";
        dir_ = fs::temp_directory_path() / ("brdim_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SimulateRowCountContract) {
    const fs::path out = dir_ / "path.csv";
    ASSERT_EQ(run("simulate --model sv2d --rho 0.5 --T 10 --h 1e-3 --n 1000 --seed 42 --out " +
                  out.string()),
              0);
    const std::string text = slurp(out);
    EXPECT_EQ(count_lines(text), 1002);  // header + 1001 observations
    EXPECT_EQ(text.substr(0, 10), "time,x1,x2");
}

TEST_F(CliTest, EstimateSchemaContract) {
    const fs::path path_csv = dir_ / "path.csv";
    const fs::path panel_csv = dir_ / "panel.csv";
    ASSERT_EQ(run("simulate --model sv2d --rho 0.5 --T 10 --h 1e-2 --n 1000 --seed 1 --out " +
                  path_csv.string()),
              0);
    ASSERT_EQ(run("estimate --in " + path_csv.string() + " --t 10 --rmax 2 --out " +
                  panel_csv.string()),
              0);
    const std::string text = slurp(panel_csv);
    EXPECT_EQ(text.substr(0, text.find('\n')), "t,r,lbar,xi");
    EXPECT_EQ(count_lines(text), 3);  // header + r = 1, 2
}

TEST_F(CliTest, DecideMatchesInProcessPipeline) {
    const fs::path path_csv = dir_ / "path.csv";
    ASSERT_EQ(run("simulate --model energy3d --T 10 --h 1e-3 --n 1000 --seed 7 --out " +
                  path_csv.string()),
              0);
    const fs::path report = dir_ / "report.csv";
    ASSERT_EQ(run("decide --in " + path_csv.string() + " --rule relative --rho 0.01 --t 10 --out " +
                  report.string()),
              0);
    const std::string text = slurp(report);
    // r_hat is the fifth CSV column of every comparison row.
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);  // header
    ASSERT_TRUE(static_cast<bool>(std::getline(lines, line)));
    EXPECT_NE(line.find("relative,"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run("simulate --model sv2d --frobnicate 1 --out x.csv"), 1);
    EXPECT_EQ(run("simulate --model nosuch --out " + (dir_ / "x.csv").string()), 1);
    // Unreadable input is a runtime failure.
    EXPECT_EQ(run("estimate --in " + (dir_ / "missing.csv").string() + " --out " +
                  (dir_ / "y.csv").string()),
              2);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(CliTest, ByteIdenticalReruns) {
    const fs::path a = dir_ / "a.csv";
    const fs::path b = dir_ / "b.csv";
    const std::string flags = "simulate --model energy3d --T 2 --h 1e-3 --n 500 --seed 9 --out ";
    ASSERT_EQ(run(flags + a.string()), 0);
    ASSERT_EQ(run(flags + b.string()), 0);
    EXPECT_EQ(slurp(a), slurp(b));

    const fs::path qa = dir_ / "qa.csv";
    const fs::path qb = dir_ / "qb.csv";
    const std::string exp =
        "experiment --kind quantiles --model sv2d --rho 0.9 --T 2 --h 1e-2 --n 100 --reps 10 "
        "--seed 5 --out ";
    ASSERT_EQ(run(exp + qa.string() + " --workers 1"), 0);
    ASSERT_EQ(run(exp + qb.string() + " --workers 4"), 0);
    EXPECT_EQ(slurp(qa), slurp(qb));
}

TEST_F(CliTest, ConfigFileReplacesFlags) {
    const fs::path cfg = dir_ / "sim.cfg";
    {
        std::ofstream out(cfg);
        out << "model=sv2d\nrho=0.5\nT=2\nh=1e-2\nn=100\nseed=3\n";
    }
    const fs::path a = dir_ / "a.csv";
    const fs::path b = dir_ / "b.csv";
    ASSERT_EQ(run("simulate --config " + cfg.string() + " --out " + a.string()), 0);
    ASSERT_EQ(run("simulate --model sv2d --rho 0.5 --T 2 --h 1e-2 --n 100 --seed 3 --out " +
                  b.string()),
              0);
    EXPECT_EQ(slurp(a), slurp(b));
    // Command line wins over the file.
    const fs::path c = dir_ / "c.csv";
    ASSERT_EQ(run("simulate --config " + cfg.string() + " --seed 4 --out " + c.string()), 0);
    EXPECT_NE(slurp(a), slurp(c));
}

TEST_F(CliTest, OracleSubcommand) {
    const fs::path path_csv = dir_ / "p.csv";
    const fs::path coeff_csv = dir_ / "c.csv";
    const fs::path orc = dir_ / "orc.csv";
    ASSERT_EQ(run("simulate --model osc2d --T 2 --h 1e-2 --n 100 --seed 2 --out " +
                  path_csv.string() + " --coeff-out " + coeff_csv.string()),
              0);
    ASSERT_EQ(run("oracle --in " + coeff_csv.string() + " --t 1,2 --out " + orc.string()), 0);
    const std::string text = slurp(orc);
    EXPECT_EQ(text.substr(0, text.find('\n')), "t,r,lbar_true,l_true,rank_true");
    EXPECT_EQ(count_lines(text), 5);  // header + 2 times x 2 orders
}
