// End-to-end exercises of the qtensorflow binary and its exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

fs::path workdir() {
    static const fs::path p = [] {
        fs::path d = fs::temp_directory_path() / "qtf_cli_test";
        fs::remove_all(d);  // stale artifacts would mask failures
        fs::create_directories(d);
        return d;
    }();
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(QTF_CLI_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    os << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

const char* kSmoke =
    "nx = 16\nny = 16\nh = 0.0625\n"
    "a = -1\nb = 0\nc = 1\nepsilon = 0.1\nnu = 1\ngamma = 1\n"
    "dt = 0.01\nsplitting = convex_split\nseed = 11\n";

}  // namespace

TEST_CASE("argument and config errors exit 1") {
    CHECK(run_cli("") != 0);
    CHECK(run_cli("run --config /nonexistent/config.txt") == 1);
    const fs::path bad = workdir() / "bad.cfg";
    write_file(bad, "nx = 16\nbogus_key = 3\n");
    CHECK(run_cli("run --config " + bad.string()) == 1);
}

TEST_CASE("t_end = 0 produces a header-only ledger and exit 0") {
    const fs::path cfg = workdir() / "empty.cfg";
    const fs::path out = workdir() / "empty_out";
    write_file(cfg, std::string(kSmoke) + "t_end = 0\nout = " + out.string() + "\n");
    CHECK(run_cli("run --config " + cfg.string()) == 0);
    CHECK(slurp(out / "energy.csv") ==
          "t,kinetic,elastic,bulk,total,dissipation,law_residual,monotone\n");
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "snapshots.csv"));
}

TEST_CASE("identical config and seed reproduce energy.csv byte for byte") {
    const fs::path cfg = workdir() / "repro.cfg";
    write_file(cfg, std::string(kSmoke) + "t_end = 0.2\n");
    const fs::path o1 = workdir() / "r1", o2 = workdir() / "r2";
    CHECK(run_cli("run --config " + cfg.string() + " --out " + o1.string()) == 0);
    CHECK(run_cli("run --config " + cfg.string() + " --out " + o2.string()) == 0);
    const std::string e1 = slurp(o1 / "energy.csv");
    CHECK(!e1.empty());
    CHECK(e1 == slurp(o2 / "energy.csv"));

    // the total column of the smoke ledger decreases strictly
    {
        std::istringstream is(e1);
        std::string line;
        std::getline(is, line);  // header
        double prev = 1e300;
        int rows = 0;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            size_t pos = 0;
            for (int col = 0; col < 4; ++col) pos = line.find(',', pos) + 1;
            const double total = std::stod(line.substr(pos));
            CHECK(total < prev);
            prev = total;
            ++rows;
        }
        CHECK(rows == 20);
    }

    // a different seed changes the trajectory
    const fs::path o3 = workdir() / "r3";
    CHECK(run_cli("run --config " + cfg.string() + " --out " + o3.string() +
                  " --seed 12") == 0);
    CHECK(e1 != slurp(o3 / "energy.csv"));

    // QTF_THREADS caps workers without perturbing the ledger
    const fs::path o4 = workdir() / "r4";
    const std::string cmd = "QTF_THREADS=4 " + std::string(QTF_CLI_BIN) +
                            " run --config " + cfg.string() + " --out " +
                            o4.string() + " >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(e1 == slurp(o4 / "energy.csv"));
}

TEST_CASE("oversized dt aborts with exit 2 naming dt") {
    const fs::path cfg = workdir() / "unstable.cfg";
    const fs::path out = workdir() / "unstable_out";
    write_file(cfg, "nx = 16\nny = 16\nh = 0.0625\na = -1\nc = 1\n"
                    "dt = 1.0\nt_end = 50\nsplitting = semi_implicit\n"
                    "q_amplitude = 2.5\nseed = 3\nout = " +
                        out.string() + "\n");
    CHECK(run_cli("run --config " + cfg.string()) == 2);
    const std::string report = slurp(out / "report.json");
    CHECK(report.find("aborted_instability") != std::string::npos);
    CHECK(report.find("dt") != std::string::npos);
}

TEST_CASE("relax converges (exit 0) or flags a short horizon (exit 4)") {
    const fs::path cfg = workdir() / "relax.cfg";
    const fs::path out = workdir() / "relax_out";
    write_file(cfg, "nx = 12\nny = 12\nh = 0.0833333\na = 1\nb = 0\nc = 1\n"
                    "dt = 0.01\nt_end = 25\nsnapshots = 40\nseed = 5\nout = " +
                        out.string() + "\n");
    CHECK(run_cli("relax --config " + cfg.string()) == 0);

    const fs::path cfg2 = workdir() / "relax_short.cfg";
    write_file(cfg2, "nx = 12\nny = 12\nh = 0.0833333\na = 1\nb = 0\nc = 1\n"
                     "dt = 0.01\nt_end = 0.3\nseed = 5\nout = " +
                         (workdir() / "relax_short_out").string() + "\n");
    CHECK(run_cli("relax --config " + cfg2.string()) == 4);
}

TEST_CASE("analyze: converged run exits 0, short run 5, missing artifacts 1") {
    const fs::path out = workdir() / "relax_out";  // from the previous case
    if (!fs::exists(out / "energy.csv")) return;   // ordering guard
    CHECK(run_cli("analyze " + out.string()) == 0);
    CHECK(fs::exists(out / "equilibrium.json"));
    CHECK(fs::exists(out / "decay.csv"));
    const std::string eq = slurp(out / "equilibrium.json");
    CHECK(eq.find("\"converged\": true") != std::string::npos);

    std::ifstream decay(out / "decay.csv");
    std::string line;
    std::getline(decay, line);
    CHECK(line == "t,excess");

    const fs::path shortout = workdir() / "short_out";
    const fs::path cfg = workdir() / "short.cfg";
    write_file(cfg, "nx = 12\nny = 12\nh = 0.0833333\na = -1\nc = 1\ndt = 0.01\n"
                    "t_end = 0.5\nsnapshots = 20\nseed = 6\nout = " +
                        shortout.string() + "\n");
    CHECK(run_cli("relax --config " + cfg.string()) == 4);
    CHECK(run_cli("analyze " + shortout.string()) == 5);

    CHECK(run_cli("analyze " + (workdir() / "nowhere").string()) == 1);
}

TEST_CASE("verify is deterministic for a fixed seed") {
    const std::string cmd1 = std::string(QTF_CLI_BIN) + " verify --seed 5 > " +
                             (workdir() / "v1.txt").string() + " 2>&1";
    const std::string cmd2 = std::string(QTF_CLI_BIN) + " verify --seed 5 > " +
                             (workdir() / "v2.txt").string() + " 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd1.c_str())) == 0);
    CHECK(WEXITSTATUS(std::system(cmd2.c_str())) == 0);
    CHECK(slurp(workdir() / "v1.txt") == slurp(workdir() / "v2.txt"));
    CHECK(slurp(workdir() / "v1.txt").find("summation-by-parts") != std::string::npos);
    CHECK(slurp(workdir() / "v1.txt").find("algebraic-cancellation") != std::string::npos);
    CHECK(slurp(workdir() / "v1.txt").find("coercivity") != std::string::npos);
}
