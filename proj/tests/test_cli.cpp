#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path tmp_root = fs::path(GOALSPOT_TEST_TMP) / "cli";

int run(const std::string& args)
{
    const std::string cmd = std::string(GOALSPOT_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string without_timings(const std::string& manifest)
{
    std::istringstream in(manifest);
    std::string out;
    for (std::string line; std::getline(in, line);)
        if (line.rfind("timing.", 0) != 0 && line.rfind("config.out", 0) != 0 &&
            line.rfind("config.workers", 0) != 0)
            out += line + '\n';
    return out;
}

std::string dir(const std::string& name)
{
    const auto d = tmp_root / name;
    fs::remove_all(d);
    return d.string();
}

const std::string& dataset()
{
    static const std::string path = [] {
        const auto d = dir("data");
        REQUIRE(run("simulate --n 150 --players 6 --matches 20 --seed 3 --out " + d) == 0);
        return d + "/synthetic.csv";
    }();
    return path;
}

}  // namespace

TEST_CASE("usage errors")
{
    CHECK(run("") != 0);
    CHECK(run("--help") == 0);
    CHECK(run("fit") == 2);
    CHECK(run("fit " + dataset() + " --phi -1") == 2);
    CHECK(run("fit " + dataset() + " --phi 0.2 --phi-search") == 2);
    const auto out = dir("missing");
    CHECK(run("explore /nonexistent/shots.csv --out " + out) == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("simulate output parses and is reproducible")
{
    const auto a = dir("sim_a"), b = dir("sim_b");
    REQUIRE(run("simulate --n 80 --seed 11 --out " + a) == 0);
    REQUIRE(run("simulate --n 80 --seed 11 --out " + b) == 0);
    CHECK(slurp(a + "/synthetic.csv") == slurp(b + "/synthetic.csv"));
    CHECK(slurp(a + "/truth.csv") == slurp(b + "/truth.csv"));
    const auto m = slurp(a + "/manifest.txt");
    CHECK(m.find("command=simulate") != std::string::npos);
    CHECK(m.find("output.synthetic.csv=sha256:") != std::string::npos);
}

TEST_CASE("explore honours the neighbour count")
{
    const auto out = dir("explore");
    REQUIRE(run("explore " + dataset() + " --k-neighbors 5 --perms 99 --sims 19 --out " + out) == 0);
    const auto jc = slurp(out + "/joincount.csv");
    CHECK(jc.find(",5,99,") != std::string::npos);
    CHECK(fs::exists(out + "/kfunction.csv"));
    CHECK(fs::exists(out + "/factor_summary.csv"));
    CHECK(slurp(out + "/manifest.txt").find("input.") != std::string::npos);
}

TEST_CASE("fit and evaluate are deterministic across worker counts")
{
    const auto a = dir("fit_a"), b = dir("fit_b");
    const std::string opts = " --burnin 60 --samples 20 --grid-step 5 --prior-a 6 --seed 2";
    REQUIRE(run("fit " + dataset() + opts + " --workers 1 --out " + a) == 0);
    REQUIRE(run("fit " + dataset() + opts + " --workers 3 --out " + b) == 0);
    for (const char* f : {"summary.csv", "draws.csv", "heatmap.csv", "heatmap.pgm", "model.txt"})
        CHECK_MESSAGE(slurp(a + "/" + f) == slurp(b + "/" + f), f);
    CHECK(without_timings(slurp(a + "/manifest.txt")) ==
          without_timings(slurp(b + "/manifest.txt")));

    const auto e = dir("eval");
    REQUIRE(run("evaluate --fit-dir " + a + " " + dataset() + " --with-baseline --out " + e) == 0);
    const auto scores = slurp(e + "/scores.csv");
    CHECK(scores.find("spatial") != std::string::npos);
    CHECK(scores.find("baseline") != std::string::npos);
    CHECK(run("evaluate --fit-dir " + dir("nofit") + " " + dataset() + " --out " + e) == 2);
}

TEST_CASE("rate with unknown players succeeds with empty outputs")
{
    const auto out = dir("rate_none");
    REQUIRE(run("rate " + dataset() + " --players nobody --burnin 10 --samples 5 --out " + out) ==
            0);
    const auto r = slurp(out + "/ratings_others.csv");
    CHECK(r == "player_id,sp,ps,n_shots,n_games\n");
}

TEST_CASE("rate a single player")
{
    const auto a = dir("rate_a"), b = dir("rate_b");
    const std::string opts = " --players p0001 --burnin 30 --samples 10 --prior-a 6 --seed 5";
    REQUIRE(run("rate " + dataset() + opts + " --workers 1 --out " + a) == 0);
    REQUIRE(run("rate " + dataset() + opts + " --workers 2 --out " + b) == 0);
    const auto r = slurp(a + "/ratings_others.csv");
    CHECK(r.find("p0001,") != std::string::npos);
    CHECK(r == slurp(b + "/ratings_others.csv"));
}
