#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef DCA_CLI_PATH
#error "DCA_CLI_PATH must point at the dca binary"
#endif

namespace {

struct RunResult {
    int code = -1;
    std::string out, err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

// Runs the binary with a shell-quoted argument string, capturing both
// streams. Capture files live in the working directory; names are unique to
// this binary so parallel ctest runs do not collide.
RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_stdout.txt", err_path = "cli_stderr.txt";
    std::string cmd =
        std::string(DCA_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = (raw == -1) ? -1 : WEXITSTATUS(raw);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

} // namespace

TEST_CASE("help and usage basics") {
    RunResult help = run_cli("--help");
    REQUIRE(help.code == 0);
    REQUIRE(help.out.find("build") != std::string::npos);
    REQUIRE(help.out.find("solve") != std::string::npos);

    REQUIRE(run_cli("solve --help").code == 0);
    REQUIRE(run_cli("").code == 2);             // a subcommand is required
    REQUIRE(run_cli("frobnicate").code == 2);   // unknown subcommand
    REQUIRE(run_cli("build --nope").code == 2); // unknown flag
    REQUIRE(run_cli("solve -g x").code == 2);   // missing required lattice
}

TEST_CASE("build, solve, check pipeline") {
    RunResult build = run_cli("build --kind square --domain disk:0,0,1 --step 0.1 -o L.json");
    REQUIRE(build.code == 0);
    REQUIRE(file_exists("L.json"));

    RunResult val = run_cli("validate -l L.json");
    REQUIRE(val.code == 0);
    REQUIRE(val.out.find("ok") != std::string::npos);

    RunResult solve = run_cli("solve -l L.json -g \"re(z^2)\" -o u.csv --report r.json");
    REQUIRE(solve.code == 0);
    std::string csv = slurp("u.csv");
    REQUIRE(csv.rfind("index,x,y,value", 0) == 0);
    std::string report = slurp("r.json");
    REQUIRE(report.find("\"residual\"") != std::string::npos);
    REQUIRE(report.find("\"iterations\"") != std::string::npos);
    REQUIRE(report.find("\"energy\"") != std::string::npos);

    RunResult check = run_cli("check --all -l L.json");
    REQUIRE(check.code == 0);
    REQUIRE(check.out.find("pass") != std::string::npos);
    REQUIRE(check.out.find("fail") == std::string::npos);

    // Byte-identical reruns.
    RunResult again = run_cli("solve -l L.json -g \"re(z^2)\" -o u2.csv --report r2.json");
    REQUIRE(again.code == 0);
    REQUIRE(slurp("u2.csv") == csv);
    REQUIRE(slurp("r2.json") == report);

    run_cli("build --kind square --domain disk:0,0,1 --step 0.1 -o L2.json");
    REQUIRE(slurp("L2.json") == slurp("L.json"));
}

TEST_CASE("conjugate and svg emission run off a solve") {
    REQUIRE(run_cli("build --kind square --domain rect:0,0,1,1 --step 0.25 -o R.json").code == 0);
    REQUIRE(run_cli("solve -l R.json -g \"x^2-y^2\" -o ru.csv --svg ru.svg").code == 0);
    std::string svg = slurp("ru.svg");
    REQUIRE(svg.rfind("<svg", 0) == 0);
    RunResult conj = run_cli("conjugate -l R.json -u ru.csv -o rv.csv");
    REQUIRE(conj.code == 0);
    REQUIRE(slurp("rv.csv").rfind("index,x,y,value", 0) == 0);
}

TEST_CASE("measure and walk agree and are reproducible") {
    REQUIRE(run_cli("build --kind square --domain rect:-1,-1,1,1 --step 0.25 -o M.json").code == 0);
    RunResult m = run_cli("measure -l M.json --arc-from 0 --arc-to 2 -o omega.csv");
    REQUIRE(m.code == 0);
    REQUIRE(slurp("omega.csv").rfind("index,x,y,value", 0) == 0);

    RunResult w1 = run_cli("walk -l M.json --arc-from 0 --arc-to 2 --start 40 --walks 2000 --seed 9");
    REQUIRE(w1.code == 0);
    REQUIRE(w1.out.find("\"p_hat\"") != std::string::npos);
    REQUIRE(w1.out.find("\"stderr\"") != std::string::npos);
    REQUIRE(w1.out.find("\"n_absorbed\"") != std::string::npos);
    RunResult w2 = run_cli("walk -l M.json --arc-from 0 --arc-to 2 --start 40 --walks 2000 --seed 9");
    REQUIRE(w2.out == w1.out);

    // Boundary start is a domain error, not a usage error.
    REQUIRE(run_cli("walk -l M.json --arc-from 0 --arc-to 2 --start 0 --walks 10 --seed 1").code == 1);
    // Mutually exclusive arc selectors are a usage error.
    REQUIRE(run_cli("measure -l M.json --arc 0,1 --arc-from 0 --arc-to 2 -o x.csv").code == 2);
}

TEST_CASE("study emits the CSV on stdout deterministically") {
    RunResult s1 = run_cli(
        "study --type energy --domain rect:-1,-1,1,1 -g \"x^2-y^2\" --steps 0.25,0.125");
    REQUIRE(s1.code == 0);
    REQUIRE(s1.out.rfind("level,h,eccentricity,max_error,energy,solve_seconds", 0) == 0);
    size_t lines = 0;
    for (char c : s1.out)
        if (c == '\n') ++lines;
    REQUIRE(lines == 3);
    RunResult s2 = run_cli(
        "study --type energy --domain rect:-1,-1,1,1 -g \"x^2-y^2\" --steps 0.25,0.125");
    // Timing columns may differ; compare everything before them, line by line.
    std::istringstream a(s1.out), b(s2.out);
    std::string la, lb;
    while (std::getline(a, la) && std::getline(b, lb)) {
        REQUIRE(la.substr(0, la.rfind(',')) == lb.substr(0, lb.rfind(',')));
    }
}

TEST_CASE("fem and kite subcommands") {
    RunResult fem = run_cli("fem --make-disk 5 --seed 3 -o T.json --report fr.json");
    REQUIRE(fem.code == 0);
    std::string rep = slurp("fr.json");
    REQUIRE(rep.find("\"is_delaunay\"") != std::string::npos);
    REQUIRE(rep.find("true") != std::string::npos);

    RunResult kite = run_cli("kite --mesh T.json -o K.json --equivalence \"x^2-y^2\"");
    REQUIRE(kite.code == 0);
    REQUIRE(file_exists("K.json"));
    REQUIRE(run_cli("validate -l K.json").code == 0);

    // Domain errors exit 1.
    REQUIRE(run_cli("kite --mesh no_such_mesh.json -o K2.json").code == 1);
    REQUIRE(run_cli("solve -l no_such_lattice.json -g x").code == 1);
    RunResult bad = run_cli("build --kind square --domain bananas --step 0.1 -o B.json");
    REQUIRE(bad.code == 2); // malformed domain string is a usage error
    REQUIRE(run_cli("build --kind square --domain disk:0,0,1 --step 0 -o B.json").code == 1);
}
