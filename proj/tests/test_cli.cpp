#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rayconfig/io.hpp"

namespace {

namespace fs = std::filesystem;

struct CliFixture {
    fs::path dir;
    CliFixture() {
        dir = fs::temp_directory_path() / ("rayconfig-cli-" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~CliFixture() { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    int run(const std::string& args) const {
        const std::string cmd = std::string(RAYCONFIG_CLI_PATH) + " " + args + " > " +
                                path("stdout.json") + " 2> " + path("stderr.txt");
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string slurp(const std::string& name) const {
        std::ifstream in(path(name), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    nlohmann::json report() const { return nlohmann::json::parse(slurp("stdout.json")); }
};

}  // namespace

TEST_CASE("cli: generate is deterministic and validates") {
    CliFixture cli;
    REQUIRE(cli.run("generate --n 4 --out " + cli.path("ones.json")) == 0);
    const std::string once = cli.slurp("ones.json");
    REQUIRE(cli.run("generate --n 4 --out " + cli.path("ones.json")) == 0);
    CHECK(once == cli.slurp("ones.json"));

    REQUIRE(cli.run("generate --n 8 --seed 7 --out " + cli.path("r7.json")) == 0);
    const std::string seeded = cli.slurp("r7.json");
    REQUIRE(cli.run("generate --n 8 --seed 7 --out " + cli.path("r7.json")) == 0);
    CHECK(seeded == cli.slurp("r7.json"));

    SUBCASE("n = 6 exits 2 and cites divisibility") {
        CHECK(cli.run("generate --n 6 --out " + cli.path("bad.json")) == 2);
        CHECK(cli.slurp("stderr.txt").find("divisible by 4") != std::string::npos);
    }
}

TEST_CASE("cli: verify runs the full check list") {
    CliFixture cli;
    REQUIRE(cli.run("generate --n 4 --out " + cli.path("ones.json")) == 0);
    REQUIRE(cli.run("verify --params " + cli.path("ones.json")) == 0);
    const auto report = cli.report();
    CHECK(report.at("outcomes").size() == 5);
    for (const auto& outcome : report.at("outcomes")) CHECK(outcome.at("pass") == true);
    CHECK(report.at("digest").get<std::string>().size() == 16);

    SUBCASE("identical inputs give identical digests") {
        const std::string digest = report.at("digest");
        REQUIRE(cli.run("verify --params " + cli.path("ones.json")) == 0);
        CHECK(cli.report().at("digest") == digest);
    }

    SUBCASE("asymmetric kappa fails at params and skips the rest") {
        auto j = nlohmann::json::parse(cli.slurp("ones.json"));
        j["kappa"][0][1] = -1;
        std::ofstream(cli.path("bad.json")) << j.dump();
        CHECK(cli.run("verify --params " + cli.path("bad.json")) == 4);
        const auto bad = cli.report();
        CHECK(bad.at("outcomes")[0].at("check") == "params");
        CHECK(bad.at("outcomes")[0].at("pass") == false);
        CHECK(bad.at("outcomes")[1].at("details").value("skipped", false) == true);
    }
    SUBCASE("unreadable file exits 2") {
        CHECK(cli.run("verify --params " + cli.path("missing.json")) == 2);
    }
    SUBCASE("wrongly-typed JSON exits 2, not 1") {
        std::ofstream(cli.path("typed.json")) << "{\"N\": \"four\", \"lambda\": [], \"mu\": [], "
                                                 "\"kappa\": []}";
        CHECK(cli.run("verify --params " + cli.path("typed.json")) == 2);
    }
}

TEST_CASE("cli: verify passes for a random N=8 parameter file") {
    CliFixture cli;
    REQUIRE(cli.run("generate --n 8 --seed 5 --out " + cli.path("r8.json")) == 0);
    REQUIRE(cli.run("verify --params " + cli.path("r8.json")) == 0);
    const auto report = cli.report();
    for (const auto& outcome : report.at("outcomes")) CHECK(outcome.at("pass") == true);
}

TEST_CASE("cli: verify honors a check subset") {
    CliFixture cli;
    REQUIRE(cli.run("generate --n 4 --out " + cli.path("ones.json")) == 0);
    REQUIRE(cli.run("verify --params " + cli.path("ones.json") + " --checks params,unitarity") ==
            0);
    CHECK(cli.report().at("outcomes").size() == 2);
    CHECK(cli.run("verify --params " + cli.path("ones.json") + " --checks bogus") == 2);
}

TEST_CASE("cli: a rotated basis file verifies and leaves the export unchanged") {
    CliFixture cli;
    REQUIRE(cli.run("generate --n 4 --out " + cli.path("ones.json")) == 0);
    const double s = 1.0 / std::sqrt(2.0);
    nlohmann::json bases = nlohmann::json::array();
    for (int k = 0; k < 3; ++k)
        bases.push_back({{{s, 0.0}, {0.0, s}}, {{s, 0.0}, {0.0, -s}}});
    std::ofstream(cli.path("bases.json")) << bases.dump();

    REQUIRE(cli.run("export --params " + cli.path("ones.json") + " --format json --out " +
                    cli.path("std.json")) == 0);
    REQUIRE(cli.run("export --params " + cli.path("ones.json") + " --bases " +
                    cli.path("bases.json") + " --format json --out " + cli.path("rot.json")) == 0);
    CHECK(cli.slurp("std.json") == cli.slurp("rot.json"));

    CHECK(cli.run("verify --params " + cli.path("ones.json") + " --bases " +
                  cli.path("bases.json")) == 0);
}

TEST_CASE("cli: color exhaustive at N=4 exhausts 32768 assignments") {
    CliFixture cli;
    REQUIRE(cli.run("generate --n 4 --out " + cli.path("ones.json")) == 0);
    REQUIRE(cli.run("color --params " + cli.path("ones.json") + " --mode exhaustive --out " +
                    cli.path("cert.json")) == 0);
    const auto cert = nlohmann::json::parse(cli.slurp("cert.json"));
    CHECK(cert.at("kind") == "ExhaustedNoColoring");
    CHECK(cert.at("stats").at("nodes_visited") == 32768);

    SUBCASE("a tiny backtracking budget is inconclusive: exit 3") {
        CHECK(cli.run("color --params " + cli.path("ones.json") +
                      " --mode backtracking --limit 5") == 3);
    }
}

TEST_CASE("cli: certify emits verifiable GF(2) certificates") {
    CliFixture cli;
    REQUIRE(cli.run("certify --n 12 --p 1,0,0,0 --out " + cli.path("cert.json")) == 0);
    const auto cert = nlohmann::json::parse(cli.slurp("cert.json"));
    CHECK(cert.at("kind") == "Gf2Infeasible");
    CHECK(cert.at("system").at("rows").size() == 66 + 12 + 12 + 1);

    REQUIRE(cli.run("certify --n 4 --p 0,0,0,0 --out " + cli.path("cert0.json")) == 0);
    const auto feasible = nlohmann::json::parse(cli.slurp("cert0.json"));
    CHECK(feasible.at("kind") == "Gf2Feasible");
    CHECK(feasible.at("witness").size() == 4 * 5);

    SUBCASE("N=6 works under the override") {
        CHECK(cli.run("certify --n 6 --p 1,0,0,0 --out " + cli.path("c6.json")) == 2);
        REQUIRE(cli.run("certify --n 6 --allow-non-4n --p 1,0,0,0 --out " + cli.path("c6.json")) ==
                0);
        CHECK(nlohmann::json::parse(cli.slurp("c6.json")).at("kind") == "Gf2Infeasible");
    }
}

TEST_CASE("cli: deform") {
    CliFixture cli;
    REQUIRE(cli.run("generate --n 4 --out " + cli.path("a.json")) == 0);

    SUBCASE("a configuration is a deformation of itself") {
        CHECK(cli.run("deform --params " + cli.path("a.json") + " " + cli.path("a.json")) == 0);
    }
    SUBCASE("lambda-only variation is a verified deformation") {
        auto j = nlohmann::json::parse(cli.slurp("a.json"));
        j["lambda"][0] = {0.6, 0.8};
        j["lambda"][2] = {0.0, 1.0};
        std::ofstream(cli.path("b.json")) << j.dump();
        CHECK(cli.run("deform --params " + cli.path("a.json") + " " + cli.path("b.json")) == 0);
        const auto report = cli.report();
        CHECK(report.at("outcomes")[0].at("pass") == true);
    }
    SUBCASE("size mismatch exits 2") {
        REQUIRE(cli.run("generate --n 8 --out " + cli.path("n8.json")) == 0);
        CHECK(cli.run("deform --params " + cli.path("a.json") + " " + cli.path("n8.json")) == 2);
        CHECK(cli.slurp("stderr.txt").find("size mismatch") != std::string::npos);
    }
    SUBCASE("differing mu/kappa requires --any") {
        REQUIRE(cli.run("generate --n 4 --seed 3 --out " + cli.path("r.json")) == 0);
        CHECK(cli.run("deform --params " + cli.path("a.json") + " " + cli.path("r.json")) == 2);
        // at N=4 every valid parameter set realizes the same graph
        CHECK(cli.run("deform --params " + cli.path("a.json") + " " + cli.path("r.json") +
                      " --any") == 0);
    }
}

TEST_CASE("cli: export formats and ray dumps") {
    CliFixture cli;
    REQUIRE(cli.run("generate --n 4 --out " + cli.path("ones.json")) == 0);
    REQUIRE(cli.run("export --params " + cli.path("ones.json") + " --format json --out " +
                    cli.path("g.json")) == 0);
    const auto graph = nlohmann::json::parse(cli.slurp("g.json"));
    CHECK(graph.at("nodes").size() == 40);
    CHECK(graph.at("bases").size() == 5);

    REQUIRE(cli.run("export --params " + cli.path("ones.json") +
                    " --format dimacs-clique --out " + cli.path("g.dimacs")) == 0);
    CHECK(cli.slurp("g.dimacs").rfind("p edge 40 ", 0) == 0);

    REQUIRE(cli.run("export --params " + cli.path("ones.json") + " --format edge-list --out " +
                    cli.path("g.txt") + " --dump-rays " + cli.path("rays.json")) == 0);
    const auto rays = nlohmann::json::parse(cli.slurp("rays.json"));
    CHECK(rays.size() == 40);
    CHECK(rays[0].at("amplitudes").size() == 8);

    SUBCASE("unknown format exits 2") {
        CHECK(cli.run("export --params " + cli.path("ones.json") + " --format dot --out " +
                      cli.path("g.dot")) == 2);
    }
    SUBCASE("byte-identical re-export, regardless of thread count") {
        const std::string first = cli.slurp("g.json");
        REQUIRE(cli.run("export --params " + cli.path("ones.json") + " --format json --out " +
                        cli.path("g.json") + " --threads 3") == 0);
        CHECK(first == cli.slurp("g.json"));
    }
}

TEST_CASE("cli: bad subcommand or missing flags exit 2") {
    CliFixture cli;
    CHECK(cli.run("frobnicate") == 2);
    CHECK(cli.run("generate --out x.json") == 2);
}
