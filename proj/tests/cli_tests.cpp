// End-to-end tests that drive the installed command-line binary through a
// shell, checking stdout text, exit codes, and written artifacts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr, merged
};

CommandResult run_cli(const std::string& args) {
    const std::string command = std::string(HLSUM_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult result;
    char buffer[4096];
    while (std::size_t got = std::fread(buffer, 1, sizeof buffer, pipe)) {
        result.output.append(buffer, got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "hlsum_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path path = scratch_dir() / name;
    std::ofstream out(path);
    out << text;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path identity_form(int n) {
    std::ostringstream json;
    json << "{\"m\":2,\"n\":" << n << ",\"storage\":\"dense\",\"coefficients\":[";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != 0 || j != 0) json << ",";
            json << (i == j ? 1 : 0);
        }
    }
    json << "]}";
    return write_file("identity" + std::to_string(n) + ".json", json.str());
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("predict prints the exponent report") {
    const CommandResult r = run_cli("predict --m 2 --k 2 --p inf --r 1");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "lambda = 1/2 (0.5)"));
    CHECK(contains(r.output, "critical_rho = 4/3"));

    const CommandResult finite = run_cli("predict --m 2 --k 1 --p 3 --r 1");
    CHECK(finite.exit_code == 0);
    CHECK(contains(finite.output, "lambda = 2/3"));
}

TEST_CASE("predict reports both formulas on the boundary") {
    const CommandResult r = run_cli("predict --m 2 --k 2 --p 4 --r 1");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "lambda = 1 (1)"));
    CHECK(contains(r.output, "lambda_alt = 1/2"));
    CHECK(contains(r.output, "warning:"));
}

TEST_CASE("critical prints the summability threshold and rejects p <= m") {
    CHECK(contains(run_cli("critical --m 2 --k 2 --p inf").output, "critical_rho = 4/3"));
    CHECK(contains(run_cli("critical --m 2 --k 2 --p 8").output, "critical_rho = 8/5"));
    const CommandResult bad = run_cli("critical --m 2 --k 2 --p 2");
    CHECK(bad.exit_code == 2);
    CHECK(contains(bad.output, "requires p > m"));
}

TEST_CASE("classical lists the catalogue for the requested setting") {
    const CommandResult r = run_cli("classical --m 2 --p 8");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "Praciano-Pereira"));
    CHECK(contains(r.output, "8/5"));
    CHECK(contains(r.output, "Zalduendo"));
    CHECK(contains(r.output, "4/3"));
    const CommandResult at_inf = run_cli("classical --m 3 --p inf");
    CHECK(contains(at_inf.output, "Bohnenblust-Hille"));
    CHECK(contains(at_inf.output, "3/2"));
}

TEST_CASE("norm evaluates forms from JSON files") {
    const fs::path form = identity_form(4);
    const CommandResult exact = run_cli("norm --form " + form.string() + " --p inf --exact");
    CHECK(exact.exit_code == 0);
    CHECK(contains(exact.output, "norm = 4 (exact)"));

    const CommandResult ascent =
        run_cli("norm --form " + form.string() + " --p 2 --restarts 8 --seed 5");
    CHECK(ascent.exit_code == 0);
    CHECK(contains(ascent.output, "norm = "));
    CHECK(contains(ascent.output, "(lower_bound)"));
}

TEST_CASE("norm rejects malformed form files with a named field") {
    const fs::path broken = write_file("broken.json", "{\"m\":2,\"n\":2,\"storage\":\"dense\"}");
    const CommandResult r = run_cli("norm --form " + broken.string() + " --p inf --exact");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.output, "\"coefficients\""));

    const CommandResult missing = run_cli("norm --form /does/not/exist.json --p inf --exact");
    CHECK(missing.exit_code == 2);
    CHECK(contains(missing.output, "cannot open form file"));
}

TEST_CASE("norm reports resource exhaustion distinctly") {
    const fs::path form = identity_form(25);
    const CommandResult r = run_cli("norm --form " + form.string() + " --p inf --exact");
    CHECK(r.exit_code == 3);
    CHECK(contains(r.output, "error:"));
}

TEST_CASE("lower reproduces the documented diagonal verdict") {
    const CommandResult r =
        run_cli("lower --family diagonal --pattern 1,1 --p 3 --r 1 --n-grid 4:128:x2");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "verdict:"));
    CHECK(contains(r.output, "slope 0.666667 vs predicted 2/3"));
}

TEST_CASE("upper runs complete and print a verdict") {
    const CommandResult r = run_cli(
        "upper --family gaussian --pattern 1,1 --p inf --r 1 --n-grid 4:16:x2 --samples 2");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "verdict:"));
}

TEST_CASE("artifacts are byte-identical across reruns and worker counts") {
    const std::string base =
        "lower --family ksz --pattern 1,1 --p inf --r 1 --n-grid 4:16:x2 --samples 3 --seed 9";
    const fs::path csv1 = scratch_dir() / "run1.csv";
    const fs::path json1 = scratch_dir() / "run1.json";
    const fs::path csv2 = scratch_dir() / "run2.csv";
    const fs::path json2 = scratch_dir() / "run2.json";

    const CommandResult one = run_cli(base + " --threads 1 --out " + csv1.string() +
                                      " --json " + json1.string());
    REQUIRE(one.exit_code == 0);
    const CommandResult eight = run_cli(base + " --threads 8 --out " + csv2.string() +
                                        " --json " + json2.string());
    REQUIRE(eight.exit_code == 0);

    CHECK(slurp(csv1) == slurp(csv2));
    CHECK(slurp(json1) == slurp(json2));
    CHECK(slurp(csv1).rfind("n,sample,lhs,norm,norm_kind,ratio\n", 0) == 0);
    CHECK(contains(slurp(json1), "\"base_seed\": 9"));
}

TEST_CASE("usage errors exit with the documented status") {
    CHECK(run_cli("predict --m 2 --k 2 --r 1").exit_code == 2);       // missing --p
    CHECK(run_cli("predict --m 2 --k 3 --p inf --r 1").exit_code == 2);  // k > m
    CHECK(run_cli("bogus-subcommand").exit_code == 2);
    CHECK(run_cli("lower --family nope --p 3").exit_code == 2);
    CHECK(run_cli("lower --family diagonal --p 3 --n-grid 4:beef").exit_code == 2);
    CHECK(run_cli("predict --m 2 --k 2 --p 0.5 --r 1").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("predict --help").exit_code == 0);
}
