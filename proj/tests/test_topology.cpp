#include <doctest.h>

#include "spindle/topology.hpp"

using namespace spindle;

TEST_CASE("winding class basics") {
    const auto sig = OrbifoldSignature::make(2, 3);
    CHECK(class_of_winding(5, sig).value == 0);   // full turn count: contractible
    CHECK(class_of_winding(1, sig).value == 1);   // equator generates
    CHECK(class_of_winding(0, sig).value == 0);
    CHECK(class_of_winding(-1, sig).value == 4);  // inverse of the generator
    CHECK(class_of_winding(12, sig).value == 2);
}

TEST_CASE("class arithmetic is a homomorphism for all small signatures") {
    for (int m = 1; m <= 6; ++m) {
        for (int n = 1; n <= 6; ++n) {
            if (m + n > 12) continue;
            const auto sig = OrbifoldSignature::make(m, n);
            for (long w1 = -15; w1 <= 15; ++w1) {
                for (long w2 = -15; w2 <= 15; ++w2) {
                    const int lhs = class_of_winding(w1 + w2, sig).value;
                    const int rhs = (class_of_winding(w1, sig).value +
                                     class_of_winding(w2, sig).value) %
                                    sig.order;
                    REQUIRE(lhs == rhs);
                }
            }
        }
    }
}

TEST_CASE("subgroup membership") {
    const auto sig = OrbifoldSignature::make(3, 3);  // order 6
    CHECK(in_subgroup_of_order(class_of_winding(3, sig), 2, sig));  // (m+n)/2
    CHECK(in_subgroup_of_order(class_of_winding(0, sig), 1, sig));
    CHECK(in_subgroup_of_order(class_of_winding(0, sig), 3, sig));
    CHECK(!in_subgroup_of_order(class_of_winding(1, sig), 1, sig));
    CHECK(!in_subgroup_of_order(class_of_winding(2, sig), 2, sig));
    CHECK(in_subgroup_of_order(class_of_winding(2, sig), 3, sig));
    CHECK_THROWS_AS(in_subgroup_of_order(HomotopyClass{1}, 4, sig),
                    NotADivisor);
}

TEST_CASE("equator contractibility: iterates divisible by m+n") {
    for (const auto& [m, n] : {std::pair{1, 1}, {2, 3}, {3, 3}, {5, 2}}) {
        const auto sig = OrbifoldSignature::make(m, n);
        for (int i = 1; i <= 3 * sig.order; ++i) {
            const bool contractible =
                in_subgroup_of_order(class_of_winding(i, sig), 1, sig);
            CHECK(contractible == (i % sig.order == 0));
        }
    }
}

TEST_CASE("contractible iterate for non-enclosing loops") {
    CHECK(min_contractible_iterate_nonenclosing(OrbifoldSignature::make(2, 4)) == 3);
    CHECK(min_contractible_iterate_nonenclosing(OrbifoldSignature::make(1, 1)) == 2);
    CHECK(min_contractible_iterate_nonenclosing(OrbifoldSignature::make(2, 3)) == 5);
}
