#include <doctest.h>

#include <random>

#include "dbd/dataset.hpp"
#include "dbd/error.hpp"

using namespace dbd;

namespace {

Dataset two_class_dataset(std::size_t malicious, std::size_t benign) {
    std::vector<AttributeSpec> attrs{AttributeSpec::numeric("x"),
                                     AttributeSpec::nominal("class", {"malicious", "benign"})};
    std::vector<Instance> rows;
    for (std::size_t i = 0; i < malicious; ++i)
        rows.push_back({static_cast<double>(i), 0.0});
    for (std::size_t i = 0; i < benign; ++i)
        rows.push_back({static_cast<double>(i), 1.0});
    return Dataset(Schema(std::move(attrs), 1), std::move(rows));
}

} // namespace

TEST_CASE("schema validation") {
    std::vector<AttributeSpec> attrs{AttributeSpec::numeric("x"),
                                     AttributeSpec::nominal("class", {"a", "b"})};
    CHECK_NOTHROW(Schema(attrs, 1));
    CHECK_THROWS_AS(Schema(attrs, 0), InvalidArgument);  // class must be nominal
    CHECK_THROWS_AS(Schema(attrs, 2), InvalidArgument);  // out of range
    CHECK_THROWS_AS(Schema({AttributeSpec::numeric("x"), AttributeSpec::numeric("x"),
                            AttributeSpec::nominal("class", {"a"})},
                           2),
                    InvalidArgument); // duplicate name
    CHECK_THROWS_AS(Schema({AttributeSpec::nominal("c", {"a", "a"})}, 0), InvalidArgument);
    CHECK_THROWS_AS(Schema({AttributeSpec::nominal("c", {})}, 0), InvalidArgument);
}

TEST_CASE("dataset validates cells against the schema") {
    Schema schema({AttributeSpec::nominal("v", {"p", "q"}),
                   AttributeSpec::nominal("class", {"a", "b"})},
                  1);
    CHECK_NOTHROW(Dataset(schema, {{0.0, 1.0}, {kMissing, 0.0}}));
    CHECK_THROWS_AS(Dataset(schema, {{2.0, 0.0}}), InvalidArgument);      // bad nominal index
    CHECK_THROWS_AS(Dataset(schema, {{0.5, 0.0}}), InvalidArgument);      // fractional index
    CHECK_THROWS_AS(Dataset(schema, {{0.0, kMissing}}), InvalidArgument); // missing class
    CHECK_THROWS_AS(Dataset(schema, {{0.0}}), InvalidArgument);           // arity
}

TEST_CASE("boolean columns share a fingerprint with nominal false/true") {
    Schema with_bool({AttributeSpec::boolean("ip"), AttributeSpec::nominal("class", {"a", "b"})},
                     1);
    Schema with_nominal({AttributeSpec::nominal("ip", {"false", "true"}),
                         AttributeSpec::nominal("class", {"a", "b"})},
                        1);
    Schema other({AttributeSpec::nominal("ip", {"true", "false"}),
                  AttributeSpec::nominal("class", {"a", "b"})},
                 1);
    CHECK(with_bool.fingerprint() == with_nominal.fingerprint());
    CHECK(with_bool.fingerprint() != other.fingerprint());
    CHECK_FALSE(with_bool == with_nominal);
}

TEST_CASE("positive class is malicious when present") {
    Schema s({AttributeSpec::nominal("class", {"benign", "malicious"})}, 0);
    CHECK(positive_class_index(s) == 1);
    Schema t({AttributeSpec::nominal("class", {"yes", "no"})}, 0);
    CHECK(positive_class_index(t) == 0);
}

TEST_CASE("stratified folds: 63/101 at k=10 keeps folds within one per class") {
    auto d = two_class_dataset(63, 101);
    auto folds = stratified_folds(d, 10, 7);
    std::vector<std::size_t> mal(10, 0), ben(10, 0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.class_of(i) == 0)
            mal[folds.fold_of[i]]++;
        else
            ben[folds.fold_of[i]]++;
    }
    for (std::size_t f = 0; f < 10; ++f) {
        CHECK((mal[f] == 6 || mal[f] == 7));
        CHECK((ben[f] == 10 || ben[f] == 11));
    }
}

TEST_CASE("stratified folds: exact divisibility gives one of each class per fold") {
    auto d = two_class_dataset(5, 5);
    auto folds = stratified_folds(d, 5, 3);
    std::vector<std::size_t> mal(5, 0), ben(5, 0);
    for (std::size_t i = 0; i < d.size(); ++i)
        (d.class_of(i) == 0 ? mal : ben)[folds.fold_of[i]]++;
    for (std::size_t f = 0; f < 5; ++f) {
        CHECK(mal[f] == 1);
        CHECK(ben[f] == 1);
    }
}

TEST_CASE("stratified folds are deterministic per seed") {
    auto d = two_class_dataset(20, 30);
    auto a = stratified_folds(d, 7, 42);
    auto b = stratified_folds(d, 7, 42);
    CHECK(a.fold_of == b.fold_of);
}

TEST_CASE("stratified folds reject bad k") {
    auto d = two_class_dataset(3, 3);
    CHECK_THROWS_AS(stratified_folds(d, 1, 0), InvalidArgument);
    CHECK_THROWS_AS(stratified_folds(d, 7, 0), InvalidArgument);
}

TEST_CASE("fold partition invariants hold over random sizes, k and seeds") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t malicious = 1 + rng() % 40;
        std::size_t benign = 1 + rng() % 60;
        auto d = two_class_dataset(malicious, benign);
        std::size_t k = 2 + rng() % std::min<std::size_t>(d.size() - 1, 12);
        auto folds = stratified_folds(d, k, rng());

        REQUIRE(folds.fold_of.size() == d.size());
        std::vector<std::vector<std::size_t>> per_class(2, std::vector<std::size_t>(k, 0));
        for (std::size_t i = 0; i < d.size(); ++i) {
            REQUIRE(folds.fold_of[i] < k);
            per_class[d.class_of(i)][folds.fold_of[i]]++;
        }
        // disjoint and exhaustive by construction of fold_of; check the
        // within-one stratification per class
        std::vector<std::size_t> totals{malicious, benign};
        for (std::size_t c = 0; c < 2; ++c) {
            std::size_t lo = totals[c] / k;
            std::size_t hi = lo + (totals[c] % k == 0 ? 0 : 1);
            for (std::size_t f = 0; f < k; ++f) {
                CHECK(per_class[c][f] >= lo);
                CHECK(per_class[c][f] <= hi);
            }
        }
    }
}
