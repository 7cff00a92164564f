#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fde/vadic.hpp"

using namespace fde;

TEST_CASE("theta-polynomial rationals") {
    Session S = Session::create(2, 1);
    auto F = S.qfield;
    auto th = rt_theta(F);
    auto one = rt_one(F);
    auto x = rt_add(th, one);                        // theta + 1
    auto y = rt_div(one, x);                         // 1/(theta+1)
    CHECK(rt_equal(rt_mul(x, y), one));
    CHECK(rt_equal(rt_sub(x, x), rt_zero(F)));
    // gcd cancellation: (theta^2+theta)/(theta) = theta+1
    auto n = rt_poly(F, {fe_zero(F), fe_one(F), fe_one(F)});
    auto d = rt_poly(F, {fe_zero(F), fe_one(F)});
    CHECK(rt_equal(rt_div(n, d), x));
    // sigma: theta -> theta^2
    auto s = rt_sigma(x, 2);
    CHECK(rt_equal(s, rt_add(rt_mul(th, th), one)));
}

TEST_CASE("rt_expand geometric series") {
    Session S = Session::create(2, 1);
    auto F = S.qfield;
    // 1/(theta - 1) at lambda = 0: leading coefficient (0-1)^{-1} = 1 in char 2
    auto x = rt_div(rt_one(F), rt_sub(rt_theta(F), rt_one(F)));
    auto h = rt_expand(S, x, fe_zero(S.field), Rat(4));
    REQUIRE(!h.is_zero());
    CHECK(h.val() == Rat(0));
    // (theta-1) * h == 1 below cap
    auto thm1 = rt_expand(S, rt_sub(rt_theta(F), rt_one(F)), fe_zero(S.field), Rat(6));
    auto prod = hs_mul(S, thm1, h);
    REQUIRE(prod.terms.size() == 1);
    CHECK(prod.val() == Rat(0));
}

TEST_CASE("exact scalars in t") {
    Session S = Session::create(2, 1);
    auto F = S.qfield;
    auto t = es_t(F), th = es_theta(F), one = es_one(F);
    auto tmth = es_t_minus_theta(F);
    CHECK(es_equal(tmth, es_sub(t, th)));
    CHECK(es_equal(es_mul(tmth, es_inv(tmth)), one));
    CHECK(es_equal(es_pow(tmth, -2), es_inv(es_mul(tmth, tmth))));
    // sigma fixes t, moves theta
    auto s = es_sigma(tmth, 2);
    CHECK(es_equal(s, es_sub(t, es_mul(th, th))));
    CHECK(!es_equal(s, tmth));
}

TEST_CASE("exact matrix inverse") {
    Session S = Session::create(3, 1);
    auto F = S.qfield;
    EMatrix m = {{es_t(F), es_one(F)}, {es_theta(F), es_t_minus_theta(F)}};
    auto det = em_det(m);
    CHECK(!det.is_zero());
    auto mi = em_inv(m);
    auto prod = em_mul(m, mi);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(es_equal(prod[i][j], i == j ? es_one(F) : es_zero(F)));
}

TEST_CASE("make_place") {
    Session S = Session::create(2, 1);
    auto pt = make_place(S, {fe_zero(S.qfield), fe_one(S.qfield)});  // v = t
    CHECK(pt->d == 1);
    CHECK(pt->lambda[0].is_zero());

    auto pv = make_place(S, {fe_one(S.qfield), fe_one(S.qfield), fe_one(S.qfield)});
    CHECK(pv->d == 2);
    CHECK(S.field->deg >= 2);
    CHECK(frobenius_power(pv->lambda[0], 1) == pv->lambda[1]);
    CHECK(frobenius_power(pv->lambda[1], 1) == pv->lambda[0]);
    CHECK(pv->lambda[0] != pv->lambda[1]);

    // t^2 + 1 = (t+1)^2 over F_2
    CHECK_THROWS_AS(make_place(S, {fe_one(S.qfield), fe_zero(S.qfield), fe_one(S.qfield)}),
                    FieldError);
}

TEST_CASE("expand_exact basics") {
    Session S = Session::create(2, 1);
    auto place = make_place(S, {fe_zero(S.qfield), fe_one(S.qfield)});
    auto x = expand_exact(S, place, es_t_minus_theta(S.qfield), 6, Rat(6));
    // a_0 = -theta = u, a_1 = 1
    REQUIRE(x.comp[0].count(0));
    REQUIRE(x.comp[0].count(1));
    CHECK(x.comp[0].at(0).val() == Rat(1));
    CHECK(x.comp[0].at(1).val() == Rat(0));
    CHECK(x.comp[0].count(2) == 0);

    auto onev = expand_exact(S, place, es_one(S.qfield), 6, Rat(6));
    CHECK(onev.comp[0].at(0).lead().is_one());
    CHECK(onev.comp[0].size() == 1);
}

TEST_CASE("expand_exact is multiplicative") {
    Session S = Session::create(2, 1);
    auto F = S.qfield;
    auto place = make_place(S, {fe_one(F), fe_one(F), fe_one(F)});
    auto a = es_add(es_t(F), es_theta(F));
    auto b = es_add(es_mul(es_t(F), es_t(F)), es_one(F));
    auto lhs = expand_exact(S, place, es_mul(a, b), 5, Rat(5));
    auto rhs = ve_mul(S, expand_exact(S, place, a, 5, Rat(5)), expand_exact(S, place, b, 5, Rat(5)));
    auto diff = ve_sub(S, lhs, rhs);
    CHECK(ve_is_zero(diff));
}

TEST_CASE("expand_exact rejects a pole at the place") {
    Session S = Session::create(2, 1);
    auto F = S.qfield;
    auto place = make_place(S, {fe_zero(F), fe_one(F)});
    // 1/t has a pole at v = t
    auto x = es_make(F, {rt_one(F)}, {rt_zero(F), rt_one(F)});
    CHECK_THROWS_AS(expand_exact(S, place, x, 4, Rat(4)), FieldError);
}

TEST_CASE("sigma on components") {
    Session S = Session::create(2, 1);
    auto F = S.qfield;
    auto place = make_place(S, {fe_one(F), fe_one(F), fe_one(F)});  // d = 2
    auto g = fe_gen(S.field);

    VadicElement x = ve_zero(place, 4, S.field, Rat(6));
    x.comp[0][0] = hs_const(g, Rat(6));
    x.comp[1][0] = hs_const(g * g, Rat(6));
    auto sx = ve_sigma(S, x);
    // component l receives component l-1 to the q
    CHECK(hs_sub(S, sx.comp[1].at(0), hs_const(g * g, Rat(6))).is_zero());
    CHECK(hs_sub(S, sx.comp[0].at(0), hs_const(g, Rat(6))).is_zero());

    // homomorphism on truncated elements
    auto a = expand_exact(S, place, es_add(es_t(F), es_theta(F)), 4, Rat(4));
    auto b = expand_exact(S, place, es_t_minus_theta(F), 4, Rat(4));
    auto lhs = ve_sigma(S, ve_mul(S, a, b));
    auto rhs = ve_mul(S, ve_sigma(S, a), ve_sigma(S, b));
    CHECK(ve_is_zero(ve_sub(S, lhs, rhs)));
}

TEST_CASE("is_sigma_fixed") {
    Session S = Session::create(2, 1);
    auto F = S.qfield;
    auto place = make_place(S, {fe_one(F), fe_one(F), fe_one(F)});
    auto g = fe_gen(S.field);

    VadicElement good = ve_zero(place, 4, S.field, Rat(6));
    good.comp[0][0] = hs_const(g, Rat(6));
    good.comp[1][0] = hs_const(g * g, Rat(6));
    CHECK(is_sigma_fixed(S, good).fixed);

    VadicElement bad = ve_zero(place, 4, S.field, Rat(6));
    bad.comp[0][0] = hs_const(g, Rat(6));
    bad.comp[1][0] = hs_const(g, Rat(6));  // g not in F_2: compatibility fails
    auto verdict = is_sigma_fixed(S, bad);
    CHECK(!verdict.fixed);
    CHECK(!verdict.witness.empty());

    // t itself is sigma-fixed: lambda_l^q = lambda_{l+1}
    auto t = expand_exact(S, place, es_t(F), 4, Rat(6));
    CHECK(is_sigma_fixed(S, t).fixed);

    // theta is not
    auto th = expand_exact(S, place, es_theta(F), 4, Rat(6));
    CHECK(!is_sigma_fixed(S, th).fixed);
}

TEST_CASE("eval_theta_power") {
    Session S = Session::create(2, 1);
    auto F = S.qfield;
    auto place = make_place(S, {fe_zero(F), fe_one(F)});
    auto x = expand_exact(S, place, es_t_minus_theta(F), 6, Rat(6));
    auto ev = eval_theta_power(S, x, 0);
    CHECK(!ev.diverged);
    CHECK(ev.value.is_zero());  // t - theta vanishes at t = theta
    CHECK(ev.cap > Rat(0));

    // at nu = 1: theta^2 - theta = u^2 + u
    auto ev1 = eval_theta_power(S, x, 1);
    REQUIRE(ev1.value.terms.size() == 2);
    CHECK(ev1.value.val() == Rat(1));
}

TEST_CASE("ve_inv round trip") {
    Session S = Session::create(2, 1);
    auto F = S.qfield;
    auto place = make_place(S, {fe_one(F), fe_one(F), fe_one(F)});
    auto a = expand_exact(S, place, es_add(es_t_minus_theta(F), es_one(F)), 5, Rat(8));
    auto ai = ve_inv(S, a);
    auto prod = ve_mul(S, a, ai);
    auto diff = ve_sub(S, prod, ve_one(S, place, prod.Nt, Rat(8)));
    CHECK(ve_is_zero(diff));

    // Laurent case: t - theta has an invertible constant coefficient off the
    // reference component only; at d=1, v=t it needs the Laurent tail
    auto pt = make_place(S, {fe_zero(F), fe_one(F)});
    auto b = expand_exact(S, pt, es_t_minus_theta(F), 5, Rat(8));
    auto bi = ve_inv(S, b);
    CHECK(ve_imin(bi) == 0);  // constant coefficient u is invertible
    auto prod2 = ve_mul(S, b, bi);
    auto diff2 = ve_sub(S, prod2, ve_one(S, pt, prod2.Nt, Rat(8)));
    CHECK(ve_is_zero(diff2));
}
