#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fde/fq.hpp"
#include "fde/session.hpp"

using namespace fde;

TEST_CASE("find_irreducible smallest cases") {
    CHECK(find_irreducible(2, 1) == std::vector<int>{0, 1});
    CHECK(find_irreducible(2, 2) == std::vector<int>{1, 1, 1});
    CHECK(find_irreducible(3, 2) == std::vector<int>{1, 0, 1});
    CHECK(is_irreducible(2, find_irreducible(2, 8)));
    CHECK(is_irreducible(3, find_irreducible(3, 4)));
}

TEST_CASE("arithmetic in F4") {
    auto F4 = make_field(2, 1, 2);
    auto g = fe_gen(F4);
    auto one = fe_one(F4);
    CHECK(g * g == g + one);              // g^2 = g+1 mod X^2+X+1
    CHECK(g * g * g == one);              // multiplicative order 3
    CHECK(g.inv() * g == one);
    CHECK(frobenius_power(g, 1) == g * g);
    CHECK(frobenius_power(g, 0) == g);
    CHECK(frobenius_power(g, 2) == g);    // full orbit
}

TEST_CASE("field axioms on random-ish samples") {
    auto F = make_field(3, 1, 3);
    unsigned long long n = 27;
    for (unsigned long long i = 0; i < n; i += 5)
        for (unsigned long long j = 1; j < n; j += 7) {
            auto x = element_at(F, i), y = element_at(F, j), z = element_at(F, (i * j + 11) % n);
            CHECK((x + y) * z == x * z + y * z);
            CHECK((x * y) * z == x * (y * z));
            if (!y.is_zero()) CHECK(y * y.inv() == fe_one(F));
        }
}

TEST_CASE("embedding along the tower") {
    auto F2 = make_field(2, 1, 1);
    auto F4 = make_field(2, 1, 2);
    CHECK(embed(fe_one(F2), F4) == fe_one(F4));
    CHECK(embed(fe_zero(F2), F4) == fe_zero(F4));

    auto F16 = extend_field(F4, 2);
    auto e = embed(fe_gen(F4), F16);
    // image is a root of X^2+X+1
    CHECK(e * e + e + fe_one(F16) == fe_zero(F16));
    // homomorphic on all of F4
    for (unsigned long long i = 0; i < 4; ++i)
        for (unsigned long long j = 0; j < 4; ++j) {
            auto x = element_at(F4, i), y = element_at(F4, j);
            CHECK(embed(x + y, F16) == embed(x, F16) + embed(y, F16));
            CHECK(embed(x * y, F16) == embed(x, F16) * embed(y, F16));
        }
}

TEST_CASE("three-level tower composition") {
    auto A = make_field(2, 1, 2);
    auto B = extend_field(A, 2);
    auto C = extend_field(B, 2);
    for (unsigned long long i = 0; i < 4; ++i) {
        auto x = element_at(A, i);
        CHECK(embed(embed(x, B), C) == embed(x, C));
    }
}

TEST_CASE("frobenius fixes exactly F_q") {
    auto F16 = make_field(2, 2, 2);  // q = 4
    int fixed = 0;
    for (unsigned long long i = 0; i < 16; ++i) {
        auto x = element_at(F16, i);
        if (frobenius_power(x, 1) == x) ++fixed;
    }
    CHECK(fixed == 4);
}

TEST_CASE("nth_root") {
    auto F3 = make_field(3, 1, 1);
    auto two = fe_from_int(F3, 2);
    CHECK(nth_root(fe_one(F3), 5).has_value());
    CHECK(*nth_root(fe_one(F3), 5) == fe_one(F3));
    CHECK(!nth_root(two, 2).has_value());  // 2 is a non-residue mod 3

    auto F9 = make_field(3, 1, 2);
    auto two9 = fe_from_int(F9, 2);
    auto r = nth_root(two9, 2);
    REQUIRE(r.has_value());
    CHECK(*r * *r == two9);
}

TEST_CASE("poly_roots splits a quadratic") {
    auto F4 = make_field(2, 1, 2);
    std::vector<FieldElement> f = {fe_one(F4), fe_one(F4), fe_one(F4)};  // X^2+X+1
    auto roots = poly_roots(f);
    REQUIRE(roots.size() == 2);
    auto g = fe_gen(F4);
    CHECK(roots[0] == g);
    CHECK(roots[1] == g + fe_one(F4));
}

TEST_CASE("roots_additive") {
    auto F2 = make_field(2, 1, 1);
    auto F4 = make_field(2, 1, 2);
    auto g = fe_gen(F4);

    auto ker = roots_additive(1, fe_one(F4), fe_zero(F4));
    REQUIRE(ker.size() == 2);  // x^2 = x
    CHECK(ker[0] == fe_zero(F4));
    CHECK(ker[1] == fe_one(F4));

    CHECK(roots_additive(1, fe_one(F2), fe_one(F2)).empty());

    auto rs = roots_additive(1, fe_one(F4), fe_one(F4));
    REQUIRE(rs.size() == 2);
    CHECK(rs[0] == g);
    CHECK(rs[1] == g + fe_one(F4));
    for (auto& r : rs) CHECK(r * r + r + fe_one(F4) == fe_zero(F4));
}

TEST_CASE("roots_additive count is 0 or a power of q") {
    auto F9 = make_field(3, 1, 2);
    for (unsigned long long gi = 1; gi < 9; gi += 2)
        for (unsigned long long bi = 0; bi < 9; bi += 3) {
            auto rs = roots_additive(1, element_at(F9, gi), element_at(F9, bi));
            size_t n = rs.size();
            CHECK((n == 0 || n == 1 || n == 3 || n == 9));
            for (auto& r : rs)
                CHECK(element_at(F9, gi) * r.pow(3) - r + element_at(F9, bi) == fe_zero(F9));
        }
}

TEST_CASE("session extends the tower on demand") {
    Session S = Session::create(3, 1);
    auto two = fe_from_int(S.field, 2);
    auto r = S.root_or_extend(two, 2);
    CHECK(S.field->deg == 2);  // needed F9
    CHECK(r * r == S.lift(two));
    CHECK(!S.events.empty());
}
