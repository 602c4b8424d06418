#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return SKTK_CLI_PATH; }

int run_cli(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "sktk_cli_tests";
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kBalancedModel =
    R"("model": {"D": [0.5, 0.1], "Dij": [[2.0, 1.0], [1.0, 2.0]],
                 "pi": [0.3333333333333333, 0.6666666666666666]})";

} // namespace

TEST_CASE("validate: balanced accepted, unbalanced rejected with a named violation") {
    const fs::path dir = scratch_dir();
    write_file(dir / "good.json", std::string("{") + kBalancedModel + "}");
    CHECK(run_cli("validate --config " + (dir / "good.json").string() + " --out " +
                  (dir / "good_out").string()) == 0);

    write_file(dir / "bad.json",
               R"({"model": {"D": [1.0, 1.0], "A": [[1.0, 2.0], [3.0, 1.0]], "pi": [1.0, 1.0]}})");
    CHECK(run_cli("validate --config " + (dir / "bad.json").string() + " --out " +
                  (dir / "bad_out").string()) == 2);
    const std::string summary = read_file(dir / "bad_out" / "summary.json");
    CHECK(summary.find("detailed balance") != std::string::npos);
}

TEST_CASE("config parse errors exit with the validation code") {
    const fs::path dir = scratch_dir();
    write_file(dir / "broken.json", "{ not json ");
    CHECK(run_cli("solve --config " + (dir / "broken.json").string() + " --out " +
                  (dir / "broken_out").string()) == 2);
    CHECK(run_cli("solve --config " + (dir / "missing.json").string() + " --out " +
                  (dir / "missing_out").string()) == 2);
}

TEST_CASE("solve with constant initial data: every snapshot equals the first") {
    const fs::path dir = scratch_dir();
    write_file(dir / "const.json", std::string("{") + kBalancedModel + R"(,
        "grid": {"M": 8}, "T": 0.1, "samples": 5,
        "initial": {"type": "constant", "values": [1.5, 0.75]}})");
    const fs::path out = dir / "const_out";
    REQUIRE(run_cli("solve --config " + (dir / "const.json").string() + " --out " +
                    out.string()) == 0);

    std::ifstream csv(out / "snapshots.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,k,x,u_1,u_2");
    std::vector<std::string> first_block;
    std::string line;
    int row = 0;
    while (std::getline(csv, line)) {
        std::ostringstream suffix;
        // strip the leading time column; site rows must repeat across samples
        const auto pos = line.find(',');
        if (row < 8) {
            first_block.push_back(line.substr(pos));
        } else {
            CHECK(line.substr(pos) == first_block[row % 8]);
        }
        ++row;
    }
    CHECK(row == 5 * 8);
}

TEST_CASE("entropy-report emits a non-increasing entropy column") {
    const fs::path dir = scratch_dir();
    write_file(dir / "solve.json", std::string("{") + kBalancedModel + R"(,
        "grid": {"M": 32}, "T": 0.05, "samples": 21, "seed": 7,
        "initial": {"type": "fourier", "base": [1.0, 1.2],
                    "amplitude": [[0.5], [0.4]], "mode": [[1], [2]]}})");
    const fs::path out = dir / "entropy_out";
    REQUIRE(run_cli("entropy-report --config " + (dir / "solve.json").string() + " --out " +
                    out.string()) == 0);

    std::ifstream csv(out / "entropy.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,H,dissipation,sqrt_lower_bound,mass_1,mass_2");
    std::string line;
    double prev_h = 0.0;
    bool first = true;
    int rows = 0;
    while (std::getline(csv, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(std::stod(cell));
        }
        REQUIRE(cells.size() == 6);
        if (!first) {
            CHECK(cells[1] <= prev_h + 1e-10);
        }
        CHECK(cells[2] <= 0.0);                       // dissipation
        CHECK(cells[2] + cells[3] <= 1e-10);          // <= -sqrt lower bound
        prev_h = cells[1];
        first = false;
        ++rows;
    }
    CHECK(rows == 21);
}

TEST_CASE("identical config and seed give byte-identical output") {
    const fs::path dir = scratch_dir();
    write_file(dir / "sim.json", std::string("{") + kBalancedModel + R"(,
        "grid": {"M": 6}, "T": 0.5, "samples": 6, "seed": 99, "trials": 8, "N": 24,
        "initial": {"type": "constant", "values": [1.0, 1.0]}})");
    const fs::path out_a = dir / "sim_a";
    const fs::path out_b = dir / "sim_b";
    REQUIRE(run_cli("simulate --config " + (dir / "sim.json").string() + " --out " +
                    out_a.string()) == 0);
    REQUIRE(run_cli("simulate --config " + (dir / "sim.json").string() + " --out " +
                    out_b.string()) == 0);
    CHECK(read_file(out_a / "trajectory.csv") == read_file(out_b / "trajectory.csv"));
    CHECK(read_file(out_a / "summary.json") == read_file(out_b / "summary.json"));
    CHECK(read_file(out_a / "trajectory.csv").size() > 0);
}

TEST_CASE("bbgky-check passes on a small instance") {
    const fs::path dir = scratch_dir();
    write_file(dir / "bbgky.json", std::string("{") + kBalancedModel + R"(,
        "grid": {"M": 3}, "N": 3, "seed": 5, "random_laws": 3,
        "p_list": [[1, 0], [0, 1], [1, 1]]})");
    const fs::path out = dir / "bbgky_out";
    CHECK(run_cli("bbgky-check --config " + (dir / "bbgky.json").string() + " --out " +
                  out.string()) == 0);
    const std::string csv = read_file(out / "bbgky.csv");
    CHECK(csv.find("p_1,p_2,law,residual") == 0);
}

TEST_CASE("meanfield-study writes chaos and covariance tables") {
    const fs::path dir = scratch_dir();
    write_file(dir / "mf.json", std::string("{") + kBalancedModel + R"(,
        "grid": {"M": 3}, "T": 0.4, "samples": 5, "seed": 11, "trials": 6,
        "N_list": [3, 6],
        "initial": {"type": "fourier", "base": [1.0, 1.0],
                    "amplitude": [[0.3], [0.2]], "mode": [[1], [1]]}})");
    const fs::path out = dir / "mf_out";
    REQUIRE(run_cli("meanfield-study --config " + (dir / "mf.json").string() + " --out " +
                    out.string()) == 0);
    CHECK(read_file(out / "chaos.csv").find("N,dist_1,dist_2,dist_max") == 0);
    CHECK(read_file(out / "covariance.csv").find("N,defect") == 0);
}

TEST_CASE("study field mismatch is rejected") {
    const fs::path dir = scratch_dir();
    write_file(dir / "mismatch.json",
               std::string("{") + kBalancedModel + R"(, "study": "solve"})");
    CHECK(run_cli("validate --config " + (dir / "mismatch.json").string() + " --out " +
                  (dir / "mm_out").string()) == 2);
}
