#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fde/cli_run.hpp"
#include "fde/io.hpp"

using namespace fde;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string log;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, log;
    int code = cli_run(args, out, log);
    return {code, out.str(), log.str()};
}

std::string tmpfile_with(const std::string& name, const json& j) {
    std::string path = "/tmp/fde_cli_" + name + ".json";
    std::ofstream f(path);
    f << j.dump();
    return path;
}

}  // namespace

TEST_CASE("omega command emits the expected valuation table") {
    auto r = run({"omega", "--q", "2", "--v", "0,1", "--prec-t", "4"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    REQUIRE(j.at("ok").get<bool>());
    std::vector<std::string> want = {"1", "1/2", "1/4", "1/8"};
    int seen = 0;
    for (auto& row : j.at("table"))
        if (row.at("m").get<long long>() == 0 && row.at("i").get<long long>() < 4) {
            CHECK(row.at("val").get<std::string>() == want[(size_t)row.at("i").get<long long>()]);
            CHECK(row.at("verdict").get<std::string>() == "pass");
            ++seen;
        }
    CHECK(seen == 4);
    // logs stay on the side channel
    CHECK(json::parse(r.log).contains("log"));
}

TEST_CASE("reducible v is rejected with exit 2") {
    auto r = run({"omega", "--q", "2", "--v", "1,0,1"});
    CHECK(r.code == 2);
    CHECK(json::parse(r.log).contains("error"));
}

TEST_CASE("identical invocations are byte-identical") {
    std::vector<std::string> args = {"polylog", "--q", "2", "--v", "0,1", "--alpha", "theta",
                                     "--n", "1", "--prec-t", "2", "--prec-u", "4"};
    auto a = run(args);
    auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.log == b.log);
}

TEST_CASE("config file values are used and flags override them") {
    std::string path = "/tmp/fde_cli_config.txt";
    {
        std::ofstream f(path);
        f << "q = 2\nv = \"0,1\"\nprec-t = 3\nprec-u = 4\n";
    }
    auto from_file = run({"--config", path, "omega"});
    auto from_flags = run({"omega", "--q", "2", "--v", "0,1", "--prec-t", "3", "--prec-u", "4"});
    CHECK(from_file.code == 0);
    CHECK(from_file.out == from_flags.out);

    auto overridden = run({"--config", path, "--prec-t", "2", "omega"});
    auto flags2 = run({"omega", "--q", "2", "--v", "0,1", "--prec-t", "2", "--prec-u", "4"});
    CHECK(overridden.out == flags2.out);
    CHECK(overridden.out != from_file.out);
}

TEST_CASE("motive artifacts round-trip through verify fundamental") {
    auto mot = run({"motive", "polylog", "--q", "2", "--v", "0,1", "--alphas", "theta", "--n",
                    "1", "--prec-t", "2", "--prec-u", "4"});
    REQUIRE(mot.code == 0);
    auto j = json::parse(mot.out);
    auto phi_path = tmpfile_with("phi", j.at("phi"));
    auto psi_path = tmpfile_with("psi", j.at("psi"));
    auto ver = run({"verify", "fundamental", "--q", "2", "--phi", phi_path, "--psi", psi_path});
    CHECK(ver.code == 0);
    CHECK(json::parse(ver.out).at("ok").get<bool>());
}

TEST_CASE("abp chain check passes for the period") {
    auto r = run({"abp", "check", "--q", "2", "--v", "0,1", "--prec-t", "6", "--prec-u", "4",
                  "--nu-max", "1"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out).at("ok").get<bool>());
}

TEST_CASE("relations search reads series artifacts") {
    Session S = Session::create(2, 1);
    auto y = hs_add(S, hs_mono(fe_one(S.field), Rat(1), Rat(8)),
                    hs_const(fe_one(S.field), Rat(8)));
    auto a = tmpfile_with("val_a", hs_to_json(y));
    auto b = tmpfile_with("val_b", hs_to_json(y));
    auto r = run({"relations", "search", "--q", "2", "--v", "0,1", "--values", a + "," + b,
                  "--deg-theta", "0", "--cutoff", "2"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("relation").get<bool>());
    CHECK(j.at("residual_val").get<std::string>() == "8");
}

TEST_CASE("galois polys command vanishes at its point") {
    Session S = Session::create(2, 1);
    auto F = S.qfield;
    json forms = json::array({json::array({es_to_json(es_one(F))})});
    json gamma = json::array({es_to_json(es_t(F)), es_to_json(es_t(F))});
    json xi = json::array({es_to_json(es_t(F)), es_to_json(es_theta(F))});
    auto r = run({"galois", "polys", "--q", "2", "--forms", tmpfile_with("forms", forms),
                  "--gamma", tmpfile_with("gamma", gamma), "--xi", tmpfile_with("xi", xi)});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out).at("vanishes_at_xi").get<bool>());
}

TEST_CASE("pf-reduce and valuations commands run deterministically") {
    std::vector<std::string> args = {"pf-reduce", "--q", "2", "--shape", "3,2", "--mdeg", "1,2",
                                     "--seed", "5"};
    auto a = run(args);
    auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    auto v = run({"valuations", "--q", "3", "--v", "0,1", "--m-max", "1", "--i-max", "2"});
    CHECK(v.code == 0);
    auto j = json::parse(v.out);
    CHECK(j[0].at("val").get<std::string>() == "1/2");
}

TEST_CASE("serialized values reload bit-exactly") {
    Session S = Session::create(2, 1);
    auto place = make_place(S, {fe_zero(S.qfield), fe_one(S.qfield)});
    auto om = solve_omega(S, place, 2, Rat(4));

    auto vj = ve_to_json(om.omega);
    Session S2 = Session::create(2, 1);
    auto back = ve_from_json(S2, vj);
    CHECK(ve_to_json(back) == vj);

    auto h = om.omega.comp[0].at(1);
    CHECK(hs_to_json(hs_from_json(hs_to_json(h))) == hs_to_json(h));

    auto es = es_mul(es_t_minus_theta(S.qfield), es_theta(S.qfield));
    CHECK(es_to_json(es_from_json(es_to_json(es), S.qfield)) == es_to_json(es));

    auto mot = carlitz_motive(S, place, 2, Rat(4));
    auto pj = phi_to_json(mot.pair.phi);
    CHECK(phi_to_json(phi_from_json(pj)) == pj);
    auto sj = psi_to_json(mot.pair.psi);
    Session S3 = Session::create(2, 1);
    CHECK(psi_to_json(psi_from_json(S3, sj)) == sj);

    auto D = pf_random(2, 1, 2, {1, 2}, 3, 2, 9);
    CHECK(pf_to_json(pf_from_json(pf_to_json(D))) == pf_to_json(D));
}
