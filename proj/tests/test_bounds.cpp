#include <catch2/catch_amalgamated.hpp>

#include "cwlab/bounds.hpp"

using namespace cwlab;

TEST_CASE("information-theoretic bound rows") {
    const int expected[] = {3, 4, 7, 13, 22, 38, 66, 115, 198, 344};
    for (int w = 1; w <= 10; ++w) CHECK(itb(w) == expected[w - 1]);
}

TEST_CASE("scalability bound rows") {
    const int induced[] = {2, 4, 7, 12, 22, 38, 66, 114, 198, 343};
    const int strict[] = {2, 3, 6, 12, 21, 37, 65, 114, 197, 343};
    for (int w = 1; w <= 10; ++w) {
        CHECK(induced_scalable_bound(w) == induced[w - 1]);
        CHECK(scalable_itb(w) == strict[w - 1]);
    }
}

TEST_CASE("two-fakes reference constants") {
    CHECK(ff_best_known(1) == 3);
    CHECK(ff_best_known(7) == 66);
    CHECK_FALSE(ff_best_known(8).has_value());
    // A solution for our problem never processes more coins than the
    // two-fakes optimum with the same number of weighings.
    for (int w = 1; w <= 7; ++w) CHECK(itb(w) <= *ff_best_known(w) + 0);
}

TEST_CASE("bound ordering and monotonicity") {
    for (int w = 1; w <= 30; ++w) {
        CHECK(scalable_itb(w) <= induced_scalable_bound(w));
        CHECK(induced_scalable_bound(w) <= itb(w));
        if (w > 1) {
            CHECK(itb(w) >= itb(w - 1));
            CHECK(induced_scalable_bound(w) >= induced_scalable_bound(w - 1));
            CHECK(scalable_itb(w) >= scalable_itb(w - 1));
        }
    }
}

TEST_CASE("FC(N) table for small N") {
    struct Row {
        int lo, hi, exact;
    };
    auto check_band = [](int from, int to, int value) {
        for (int n = from; n <= to; ++n) {
            auto [lo, hi] = fc_bounds(n);
            auto exact = fc_exact(n);
            REQUIRE(exact.has_value());
            INFO("N=" << n);
            CHECK(exact->lo == value);
            CHECK(exact->hi == value);
            CHECK(hi == value);
            CHECK(lo <= value);
        }
    };
    check_band(2, 2, 1);
    check_band(3, 4, 2);
    check_band(5, 6, 3);
    check_band(7, 11, 4);
    check_band(12, 20, 5);
    check_band(21, 36, 6);
    check_band(39, 62, 7);

    for (int n : {37, 38}) {
        auto exact = fc_exact(n);
        REQUIRE(exact.has_value());
        CHECK(exact->lo == 6);
        CHECK(exact->hi == 7);
        CHECK(fc_bounds(n).second == 7);  // the DP consumes the pessimistic end
    }
}

TEST_CASE("exact values sit between the bounds") {
    for (int n = 2; n <= 62; ++n) {
        auto [lo, hi] = fc_bounds(n);
        auto exact = fc_exact(n);
        REQUIRE(exact.has_value());
        CHECK(lo <= exact->lo);
        CHECK(exact->hi <= hi);
    }
}

TEST_CASE("seeded composition bound beyond the table") {
    CHECK(fc_bounds(180).second <= 9);   // covered by the scaled (5,20) family
    CHECK(fc_bounds(99).second <= 8);    // covered by the scaled pseudo family
    CHECK(fc_bounds(324).second <= 10);  // covered by the scaled (6,36) family
    auto [lo1000, hi1000] = fc_bounds(1000);
    CHECK(lo1000 <= hi1000);
    CHECK(hi1000 <= fc_upper_log_form(1000));
}

TEST_CASE("closed forms dominate the DP") {
    for (int n : {63, 100, 200, 500}) {
        auto [lo, hi] = fc_bounds(n);
        CHECK(hi <= fc_upper_div3_form(n));
        CHECK(hi <= fc_upper_log_form(n));
        CHECK(lo <= hi);
    }
}

TEST_CASE("table assembly") {
    BoundsTable t = emit_tables(10, 62);
    REQUIRE(t.by_w.size() == 10);
    CHECK(t.by_w[5].w == 6);
    CHECK(t.by_w[5].found == 36);
    CHECK(t.by_w[8].found == 180);
    CHECK(t.by_w[9].found == 324);
    CHECK(t.by_w[9].itb == 344);
    REQUIRE(t.by_n.size() == 61);
    CHECK(t.by_n[18].n == 20);
    CHECK(t.by_n[18].fc_upper == 5);

    std::string csv = render_w_table_csv(t);
    CHECK(csv.find("10,324,344,343,343") != std::string::npos);
    std::string text = render_w_table_text(t);
    CHECK(text.find("344") != std::string::npos);
}
