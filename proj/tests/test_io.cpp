#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hybridwc/io.hpp"

using namespace hybridwc;

TEST_CASE("model config parsing") {
    json good = json::parse(R"({"weights":[1,1,1,1,1],"d":5,"num_polys":1,
                                "epsilon":"0+","max_q_degree":10})");
    ModelParams p = model_from_json(good);
    CHECK(p.M() == 5);
    CHECK(p.d() == 5);
    CHECK(p.epsilon.is_zero_plus());
    CHECK(p.max_q_degree == 10);

    json frac = good;
    frac["epsilon"] = "1/3";
    ModelParams pf = model_from_json(frac);
    CHECK(pf.epsilon.unstable(3));
    CHECK_FALSE(pf.epsilon.unstable(4));

    json bad = json::parse(R"({"weights":[1,1,3],"d":4,"num_polys":1,"epsilon":"0+",
                               "max_q_degree":5})");
    CHECK_THROWS_AS(model_from_json(bad), InvalidDegree);

    json negd = good;
    negd["max_q_degree"] = -1;
    CHECK_THROWS_AS(model_from_json(negd), InvalidDegree);
}

TEST_CASE("polynomial and rational-function string round-trips") {
    ModelParams cc = cc33_model();
    int ar = cc.arity();
    std::mt19937 rng(424242);
    std::uniform_int_distribution<long> coef(-9, 9);
    std::uniform_int_distribution<int> deg(0, 3);
    for (int i = 0; i < 100; ++i) {
        MPoly num(ar), den(ar);
        for (int t = 0; t < 4; ++t) {
            num += MPoly::monomial(ar, {deg(rng), deg(rng), deg(rng)}, BigRational(coef(rng)));
            den += MPoly::monomial(ar, {deg(rng), deg(rng), deg(rng)}, BigRational(coef(rng)));
        }
        if (den.is_zero()) den = MPoly::one(ar);
        if (num.is_zero()) continue;
        RatFunc f = RatFunc::frac(num, den);
        RatFunc back = parse_ratfunc(f.canonical_string(), ar);
        CHECK(back == f);
        // the canonical string of the reparse is bit-identical
        CHECK(back.canonical_string() == f.canonical_string());
    }
}

TEST_CASE("state class JSON round-trips") {
    for (const ModelParams& p : {quintic_model(), cc33_model()}) {
        for (long beta = 0; beta <= 5; ++beta) {
            StateClass c = unstable_coeff_noneq(beta, p);
            StateClass back = state_class_from_json(state_class_to_json(c), p);
            CHECK(back == c);
            EqStateClass e(p);
            for (long j = 1; j <= p.N(); ++j) e += unstable_coeff_eq(beta, j, p);
            EqStateClass eback = eq_state_class_from_json(eq_state_class_to_json(e), p);
            CHECK(eback == e);
        }
    }
}

TEST_CASE("jfun JSON coefficients re-parse to the original classes") {
    ModelParams q = quintic_model();
    for (long beta : {0L, 1L, 5L}) {
        StateClass c = unstable_coeff_noneq(beta, q);
        json j = jfun_coeff_to_json(beta, c, q);
        StateClass back(q);
        for (const auto& e : j.at("entries")) {
            long zk = e.at("z_exponent").get<long>();
            RatFunc coeff(q.arity(), BigRational::from_string(e.at("coeff").get<std::string>()));
            RatFunc zpow(q.arity(), BigRational(1));
            MPoly zv = MPoly::var(q.arity(), 0);
            RatFunc term = zk >= 0 ? coeff * RatFunc(zv.pow(static_cast<int>(zk)))
                                   : coeff / RatFunc(zv.pow(static_cast<int>(-zk)));
            back.add(q.mult(j.at("sector").get<long>()), e.at("power").get<long>(), term);
        }
        CHECK(back == c);
    }
}

TEST_CASE("tree JSON export carries kinds and contributions") {
    ModelParams cc = cc33_model();
    auto trees = enumerate_trees_onemark(1, cc, 3);
    REQUIRE(trees.size() == 4);
    for (const auto& t : trees) {
        json j = tree_to_json(t, cc);
        CHECK(j.at("aut_order").get<long>() == t.aut_order);
        CHECK(j.at("contribution").get<std::string>() != "symbolic-stable");
    }
    // a stable vertex switches the contribution to the symbolic placeholder
    ModelParams fine = cc33_model();
    fine.epsilon = Epsilon::rational(BigRational(1));
    auto trees2 = enumerate_trees_onemark(2, fine, 3);
    bool saw_symbolic = false;
    for (const auto& t : trees2) {
        json j = tree_to_json(t, fine);
        if (j.at("contribution").get<std::string>() == "symbolic-stable") saw_symbolic = true;
    }
    CHECK(saw_symbolic);
}

TEST_CASE("dot export") {
    ModelParams cc = cc33_model();
    auto trees = enumerate_trees_onemark(1, cc, 3);
    std::string dot = tree_to_dot(trees.front(), cc, 0);
    CHECK(dot.find("graph tree0") != std::string::npos);
    CHECK(dot.find("--") != std::string::npos);
}
