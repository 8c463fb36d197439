#include <catch_amalgamated.hpp>

#include "polycap/verification.hpp"

using namespace polycap;

TEST_CASE("invariant suite passes on representative dimensions", "[verification]") {
    for (auto [m, n] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 4},
                        std::pair{4, 9}}) {
        const Report r = verify_suite(make_dims(m, n));
        INFO("m=" << m << " n=" << n);
        for (const auto& f : r.failures()) INFO(f.name << ": " << f.detail);
        CHECK(r.passed());
        CHECK(r.checks.size() >= 20);
    }
}

TEST_CASE("suite reports failures instead of throwing", "[verification]") {
    VerifyOptions opts;
    opts.scaling_tol = -1.0;
    const Report r = verify_suite(make_dims(1, 3), opts);
    CHECK_FALSE(r.passed());
    bool scaling_failed = false;
    for (const auto& f : r.failures()) scaling_failed |= f.name.find("scaling") != std::string::npos;
    CHECK(scaling_failed);
}
