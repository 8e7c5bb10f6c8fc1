#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "certify/store.hpp"

using namespace certify;
using namespace certify::store;
namespace fs = std::filesystem;

static Store offline_store() { return Store(FIXTURES_DIR, "", ""); }

static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

TEST_CASE("load and validate the quartic fixture") {
    auto st = offline_store();
    auto rec = st.get("71.3.b.a");
    CHECK(rec.level == 71);
    CHECK(rec.weight == 3);
    CHECK(rec.field.degree() == 4);
    CHECK(rec.field.min_poly ==
          std::vector<nf::Int>{nf::Int(2825), nf::Int(-40), nf::Int(108), nf::Int(0), nf::Int(1)});
    CHECK(rec.character.order == 2);
    CHECK(rec.character.conductor == 71);
    CHECK(rec.an_bound == 300);
    // a_2 reduces to 16 at (41, beta - 11); a_101 to 0
    nf::ResiduePrime lam{41, 11, rec.field};
    CHECK(nf::reduce(rec.a(2), lam) == 16);
    CHECK(nf::reduce(rec.a(101), lam) == 0);
}

TEST_CASE("load the synthetic level-9099 form") {
    auto st = offline_store();
    auto rec = st.get("9099.2.a.g");
    CHECK(rec.level == 9099);
    CHECK(rec.weight == 2);
    CHECK(rec.field.min_poly == std::vector<nf::Int>{nf::Int(-2), nf::Int(0), nf::Int(1)});
    CHECK(rec.character.is_trivial());
    CHECK(rec.a(2).is_zero());
    CHECK(rec.a(4) == nf::NFElement::from_int(-2));  // a_4 = a_2^2 at the bad prime 2? no: 2 | N
    nf::ResiduePrime lam{7, 3, rec.field};
    CHECK(nf::reduce(rec.a(5), lam) == 6);  // a_5 = 3 + sqrt2 -> 6
    CHECK(rec.a(3).is_zero());
    CHECK_FALSE(rec.has(337));
    CHECK_THROWS_AS(rec.a(337), InsufficientCoefficients);
}

TEST_CASE("every fixture parses and round-trips canonically") {
    auto st = offline_store();
    auto labels = st.local_labels();
    CHECK(labels.size() >= 21);
    for (const auto& label : labels) {
        auto rec = st.get(label);
        CHECK(rec.label == label);
        std::string ser = serialize_record(rec);
        auto rec2 = parse_record(ser);
        CHECK(serialize_record(rec2) == ser);
        // and the on-disk fixture is already canonical
        CHECK(slurp(fs::path(FIXTURES_DIR) / (label + ".record")) == ser);
    }
}

TEST_CASE("validation rejects corrupted records") {
    auto base = slurp(fs::path(FIXTURES_DIR) / "71.3.b.a.record");
    using json = nlohmann::ordered_json;

    // mutate one eigenvalue: break multiplicativity / Hecke recursion
    {
        json j = json::parse(base);
        j["an_numerators"][5][0] = "999";  // a_6 = a_2 a_3 must now fail
        CHECK_THROWS_AS(parse_record(j.dump(1) + "\n"), ValidationFailed);
    }
    // non-monic field polynomial
    {
        json j = json::parse(base);
        j["field_poly"][4] = "2";
        CHECK_THROWS(parse_record(j.dump(1) + "\n"));
    }
    // a_1 != 1
    {
        json j = json::parse(base);
        j["an_numerators"][0][0] = "2";
        CHECK_THROWS_AS(parse_record(j.dump(1) + "\n"), ValidationFailed);
    }
    // wrong conductor claim
    {
        json j = json::parse(base);
        j["char_conductor"] = "1";
        CHECK_THROWS_AS(parse_record(j.dump(1) + "\n"), ValidationFailed);
    }
    // missing field
    {
        json j = json::parse(base);
        j.erase("an_bound");
        CHECK_THROWS_AS(parse_record(j.dump(1) + "\n"), ValidationFailed);
    }
    // wrong schema tag
    {
        json j = json::parse(base);
        j["schema"] = "newform-record/2";
        CHECK_THROWS_AS(parse_record(j.dump(1) + "\n"), ValidationFailed);
    }
}

TEST_CASE("candidate listing by level, weight and character orbit") {
    auto st = offline_store();
    auto gens = dirichlet::unit_group_gens(27);
    std::vector<nf::NFElement> vals(gens.size(), nf::NFElement::from_int(1));
    nf::NumberFieldDesc Q({nf::Int(0), nf::Int(1)});
    auto triv27 = dirichlet::make_character(27, 1, 1, gens, vals, Q);

    auto c = st.candidates(27, 4, triv27);
    REQUIRE(c.size() == 3);
    CHECK(c[0].label == "27.4.a.a");
    CHECK(c[1].label == "27.4.a.b");
    CHECK(c[2].label == "27.4.a.c");

    auto c2 = st.candidates(27, 2, triv27);
    REQUIRE(c2.size() == 1);
    CHECK(c2[0].label == "27.2.a.a");

    // level 9 via descent of the modulus-27 trivial character
    auto c3 = st.candidates(9, 4, triv27);
    REQUIRE(c3.size() == 1);
    CHECK(c3[0].label == "9.4.a.a");

    // nothing with the quadratic character at level 27
    auto chi9 = dirichlet::make_character(27, 3, 2, gens, {nf::NFElement::from_int(-1)}, Q);
    CHECK(st.candidates(27, 4, chi9).empty());
}

TEST_CASE("offline store refuses network fetches") {
    auto st = offline_store();
    CHECK_THROWS_AS(st.get("11.2.a.a"), NetworkUnavailable);
    CHECK_THROWS_AS(st.get("../etc/passwd"), ValidationFailed);
}

TEST_CASE("fetch from a local server with write-once caching") {
    fs::path tmp = fs::temp_directory_path() / "certify-store-test";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    std::string body = slurp(fs::path(FIXTURES_DIR) / "71.3.b.a.record");
    httplib::Server srv;
    std::atomic<int> hits{0};
    srv.Get("/db/record/71.3.b.a", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.set_content(body, "application/json");
    });
    srv.Get(R"(/db/record/(.+))", [&](const httplib::Request&, httplib::Response& res) {
        res.status = 404;
    });
    int port = srv.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread th([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();

    {
        Store st("", tmp.string(), "http://127.0.0.1:" + std::to_string(port) + "/db");
        auto rec = st.get("71.3.b.a");
        CHECK(rec.level == 71);
        CHECK(hits == 1);
        CHECK(fs::exists(tmp / "71.3.b.a.record"));
        // second get served from cache
        auto rec2 = st.get("71.3.b.a");
        CHECK(rec2.label == rec.label);
        CHECK(hits == 1);
        CHECK_THROWS_AS(st.get("99.2.a.a"), NotFound);
    }

    srv.stop();
    th.join();
    fs::remove_all(tmp);
}
