#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ppxgb/errors.hpp"
#include "ppxgb/fixtures.hpp"
#include "ppxgb/model.hpp"

using namespace ppxgb;

namespace {

// Hand-built two-tree fixture with depth-2 trees.
const char* kTwoTreeDump = R"([
  {"nodeid":0,"split":"age","split_condition":30.0,"yes":1,"no":2,"missing":1,"children":[
    {"nodeid":1,"split":"fare","split_condition":7.25,"yes":3,"no":4,"missing":4,"children":[
      {"nodeid":3,"leaf":0.5},{"nodeid":4,"leaf":-0.25}]},
    {"nodeid":2,"leaf":1.5}]},
  {"nodeid":0,"split":"sex","split_condition":0.5,"yes":1,"no":2,"missing":2,"children":[
    {"nodeid":1,"leaf":-1.0},{"nodeid":2,"leaf":2.0}]}
])";

}  // namespace

TEST_CASE("single-leaf dump parses to a one-node tree") {
    const PlaintextModel m = parse_model(R"([{"nodeid":0,"leaf":0.5}])");
    REQUIRE(m.trees.size() == 1);
    CHECK(m.trees[0].nodes.size() == 1);
    CHECK(m.trees[0].depth == 0);
    CHECK(m.trees[0].node(0).leaf_score == 0.5);
    CHECK(m.objective == Objective::binary_margin);
}

TEST_CASE("two-tree fixture parses field by field") {
    const PlaintextModel m = parse_model(kTwoTreeDump);
    REQUIRE(m.trees.size() == 2);
    const Cart& t0 = m.trees[0];
    CHECK(t0.depth == 2);
    CHECK(t0.node(0).feature == "age");
    CHECK(t0.node(0).threshold == 30.0);
    CHECK(t0.node(0).yes == 1);
    CHECK(t0.node(0).no == 2);
    CHECK(t0.node(0).missing == 1);
    CHECK(t0.node(1).feature == "fare");
    CHECK(t0.node(1).missing == 4);
    CHECK(t0.node(3).leaf_score == 0.5);
    CHECK(t0.node(4).leaf_score == -0.25);
    CHECK(t0.node(2).leaf_score == 1.5);
    const Cart& t1 = m.trees[1];
    CHECK(t1.depth == 1);
    CHECK(t1.node(0).feature == "sex");
}

TEST_CASE("parse rejects structural damage with node context") {
    // yes id absent from children
    CHECK_THROWS_AS(parse_model(R"([{"nodeid":0,"split":"a","split_condition":1,"yes":9,"no":2,
        "children":[{"nodeid":1,"leaf":0},{"nodeid":2,"leaf":0}]}])"),
                    ParseError);
    // missing field
    CHECK_THROWS_AS(parse_model(R"([{"nodeid":0,"split":"a","yes":1,"no":2,
        "children":[{"nodeid":1,"leaf":0},{"nodeid":2,"leaf":0}]}])"),
                    ParseError);
    // duplicate node ids
    CHECK_THROWS_AS(parse_model(R"([{"nodeid":0,"split":"a","split_condition":1,"yes":1,"no":1,
        "children":[{"nodeid":1,"leaf":0},{"nodeid":1,"leaf":0}]}])"),
                    ParseError);
    // missing pointing nowhere
    CHECK_THROWS_AS(parse_model(R"([{"nodeid":0,"split":"a","split_condition":1,"yes":1,"no":2,
        "missing":7,"children":[{"nodeid":1,"leaf":0},{"nodeid":2,"leaf":0}]}])"),
                    ParseError);
    CHECK_THROWS_AS(parse_model("not json"), ParseError);
    CHECK_THROWS_AS(parse_model("[]"), ParseError);
    try {
        parse_model(R"([{"nodeid":0,"split":"a","yes":1,"no":2,
            "children":[{"nodeid":1,"leaf":0},{"nodeid":2,"leaf":0}]}])");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("tree 0/0") != std::string::npos);
    }
}

TEST_CASE("evaluate_tree follows thresholds and missing branches") {
    const PlaintextModel m = parse_model(kTwoTreeDump);
    const Cart& t0 = m.trees[0];

    // Leaf-only tree.
    const PlaintextModel leafy = parse_model(R"([{"nodeid":0,"leaf":0.75}])");
    const auto [ls, lp] = evaluate_tree(leafy.trees[0], Query{});
    CHECK(ls == 0.75);
    CHECK(lp == std::vector<int>{0});

    // Hand-traced: age=25 -> yes(1); fare=10 -> no(4) -> -0.25.
    const auto [s1, p1] = evaluate_tree(t0, Query{{{"age", 25.0}, {"fare", 10.0}}});
    CHECK(s1 == -0.25);
    CHECK(p1 == std::vector<int>{0, 1, 4});

    // age=40 -> no(2) -> 1.5.
    const auto [s2, p2] = evaluate_tree(t0, Query{{{"age", 40.0}, {"fare", 10.0}}});
    CHECK(s2 == 1.5);
    CHECK(p2 == std::vector<int>{0, 2});

    // Missing 'age' -> missing child 1; missing fare -> missing child 4.
    const auto [s3, p3] = evaluate_tree(t0, Query{});
    CHECK(s3 == -0.25);
    CHECK(p3 == std::vector<int>{0, 1, 4});
}

TEST_CASE("evaluate_model sums trees and splits classes for softmax") {
    const PlaintextModel two = parse_model(
        R"([{"nodeid":0,"leaf":0.25},{"nodeid":0,"leaf":0.75}])");
    CHECK(evaluate_model(two, Query{}) == std::vector<double>{1.0});

    // softmax: 4 trees, 2 classes -> [t0+t2, t1+t3]
    PlaintextModel sm = parse_model(
        R"({"objective":"softmax","num_classes":2,"trees":[
            {"nodeid":0,"leaf":1.0},{"nodeid":0,"leaf":2.0},
            {"nodeid":0,"leaf":4.0},{"nodeid":0,"leaf":8.0}]})");
    CHECK(evaluate_model(sm, Query{}) == std::vector<double>{5.0, 10.0});

    // Empty queries on a random model are well-defined via missing branches.
    std::mt19937_64 rng(11);
    FixtureSpec spec;
    const PlaintextModel fixture = gen_model(rng, spec);
    const auto scores = evaluate_model(fixture, Query{});
    CHECK(scores.size() == (fixture.objective == Objective::softmax
                                ? static_cast<std::size_t>(fixture.num_classes)
                                : 1u));
}

TEST_CASE("softmax wrapper validation") {
    CHECK_THROWS_AS(parse_model(R"({"objective":"softmax","num_classes":2,"trees":[
        {"nodeid":0,"leaf":1.0}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_model(R"({"objective":"softmax","num_classes":1,"trees":[
        {"nodeid":0,"leaf":1.0}]})"),
                    ParseError);
}

TEST_CASE("interpret: sigmoid, alpha strictness, softmax ties") {
    const Prediction p0 = interpret({0.0}, Objective::binary_margin, 1, 0.5);
    CHECK(p0.probabilities[0] == doctest::Approx(0.5));
    CHECK(p0.label == 0);  // strict >

    const Prediction p2 = interpret({2.0}, Objective::binary_margin, 1, 0.5);
    CHECK(p2.probabilities[0] == doctest::Approx(0.8808).epsilon(1e-3));
    CHECK(p2.label == 1);

    const Prediction tie = interpret({0.0, 0.0}, Objective::softmax, 2, 0.5);
    CHECK(tie.probabilities[0] == doctest::Approx(0.5));
    CHECK(tie.probabilities[1] == doctest::Approx(0.5));
    CHECK(tie.label == 0);  // lowest index wins ties

    CHECK_THROWS_AS(interpret({1.0, 2.0}, Objective::binary_margin, 1, 0.5),
                    std::invalid_argument);
}

TEST_CASE("serialize/parse round-trip is structurally stable") {
    const PlaintextModel m1 = parse_model(kTwoTreeDump);
    const std::string s1 = serialize_model(m1);
    const PlaintextModel m2 = parse_model(s1);
    CHECK(serialize_model(m2) == s1);
    REQUIRE(m2.trees.size() == m1.trees.size());
    for (std::size_t i = 0; i < m1.trees.size(); ++i)
        CHECK(cart_structurally_equal(m1.trees[i], m2.trees[i]));
}

TEST_CASE("pad_to_complete: leaf tree to depth 2") {
    const PlaintextModel m = parse_model(R"([{"nodeid":0,"leaf":0.5}])");
    std::mt19937_64 rng(13);
    const Cart padded = pad_to_complete(m.trees[0], 2, {"f0"}, -1.0, 1.0, rng);
    CHECK(padded.depth == 2);
    CHECK(padded.nodes.size() == 7);
    int leaves = 0;
    for (const auto& n : padded.nodes)
        if (n.is_leaf) {
            ++leaves;
            CHECK(n.leaf_score == 0.5);
        }
    CHECK(leaves == 4);
    // Canonical layout: node i has children 2i+1 / 2i+2, yes on the left.
    for (const auto& n : padded.nodes)
        if (!n.is_leaf) {
            CHECK(n.yes == 2 * n.id + 1);
            CHECK(n.no == 2 * n.id + 2);
        }
}

TEST_CASE("padding preserves evaluation semantics") {
    std::mt19937_64 rng(17);
    FixtureSpec spec;
    spec.max_trees = 6;
    for (int trial = 0; trial < 5; ++trial) {
        const PlaintextModel m = gen_model(rng, spec);
        const PlaintextModel padded = pad_model(m, rng);
        for (const auto& t : padded.trees) {
            CHECK(t.nodes.size() == (std::size_t(1) << (t.depth + 1)) - 1);
        }
        for (int i = 0; i < 200; ++i) {
            const Query q = gen_query(rng, m, 120.0, false);
            CHECK(evaluate_model(m, q) == evaluate_model(padded, q));
        }
        // Empty and partial queries exercise the missing branches.
        CHECK(evaluate_model(m, Query{}) == evaluate_model(padded, Query{}));
    }
}

TEST_CASE("pad of an already-complete canonical tree is the identity") {
    std::mt19937_64 rng(19);
    const PlaintextModel m = parse_model(kTwoTreeDump);
    const PlaintextModel padded = pad_model(m, rng);
    const Cart again = pad_to_complete(padded.trees[0], padded.trees[0].depth, {"age"},
                                       -1.0, 1.0, rng);
    CHECK(again == padded.trees[0]);
}

TEST_CASE("pad rejects a target below the tree depth") {
    const PlaintextModel m = parse_model(kTwoTreeDump);
    std::mt19937_64 rng(23);
    CHECK_THROWS_AS(pad_to_complete(m.trees[0], 1, {"age"}, -1.0, 1.0, rng),
                    std::invalid_argument);
}

TEST_CASE("determinism: same model and query, same scores and paths") {
    std::mt19937_64 rng(29);
    FixtureSpec spec;
    const PlaintextModel m = gen_model(rng, spec);
    const Query q = gen_query(rng, m, 100.0, false);
    const auto s1 = evaluate_model(m, q);
    const auto s2 = evaluate_model(m, q);
    CHECK(s1 == s2);
    for (const auto& t : m.trees) CHECK(evaluate_tree(t, q) == evaluate_tree(t, q));
}
