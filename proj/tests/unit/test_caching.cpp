#include "doctest.h"

#include <numeric>
#include <stdexcept>

#include "d2dcomp/caching.hpp"
#include "support/checks.hpp"

using namespace d2dcomp;

TEST_CASE("zipf popularity closed values") {
    // beta = 1, three files: weights 1, 1/2, 1/3 -> 6/11, 3/11, 2/11.
    const auto q = zipf_popularity(3, 1.0);
    REQUIRE(q.size() == 3);
    CHECK(q[0] == doctest::Approx(6.0 / 11.0).epsilon(1e-14));
    CHECK(q[1] == doctest::Approx(3.0 / 11.0).epsilon(1e-14));
    CHECK(q[2] == doctest::Approx(2.0 / 11.0).epsilon(1e-14));

    const auto uniform = zipf_popularity(8, 0.0);
    for (const double x : uniform) CHECK(x == doctest::Approx(0.125).epsilon(1e-14));

    const auto peaked = zipf_popularity(8, 12.0);
    CHECK(peaked[0] > 0.999);
    CHECK(std::accumulate(peaked.begin(), peaked.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("content parameter validation names the field") {
    ContentParams content;
    content.n_files = 0;
    CHECK_THROWS_WITH_AS(content.validate(), doctest::Contains("n_files"),
                         std::invalid_argument);
    content = ContentParams::zipf(6, 2, 0.8);
    content.cache_size = 7; // larger than the library
    CHECK_THROWS_WITH_AS(content.validate(), doctest::Contains("cache_size"),
                         std::invalid_argument);
    content = ContentParams::zipf(6, 2, 0.8);
    content.popularity[2] = -0.1;
    CHECK_THROWS_WITH_AS(content.validate(), doctest::Contains("popularity"),
                         std::invalid_argument);
    CHECK_NOTHROW(ContentParams::zipf(6, 2, 0.8).validate());
}

TEST_CASE("caching constructors satisfy the vector invariants") {
    const auto result = checks::check_caching_constructors();
    INFO(result.detail);
    CHECK(result.ok);
}

TEST_CASE("capped proportional caching pins popular files first") {
    ContentParams content = ContentParams::zipf(4, 3, 3.0);
    const CachingVector c = scheme_zipf(content);
    // Very peaked popularity: leading files saturate at 1, remainder absorbs
    // the leftover budget.
    CHECK(c[0] == 1.0);
    CHECK(c[1] == 1.0);
    CHECK(c[2] <= 1.0);
    CHECK(c[2] >= c[3]);
    CHECK(std::accumulate(c.begin(), c.end(), 0.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("cache set sampling hits the requested marginals") {
    const auto result = checks::check_cache_marginals(506, 40000);
    INFO(result.detail);
    CHECK(result.ok);
}

TEST_CASE("cache set sampling is deterministic per seed") {
    const ContentParams content = ContentParams::zipf(12, 2, 0.8);
    const CachingVector c = scheme_zipf(content);
    Rng a = make_rng(507, 0), b = make_rng(507, 0);
    for (int i = 0; i < 50; ++i) {
        const CacheSet sa = sample_cache_set(c, a);
        const CacheSet sb = sample_cache_set(c, b);
        CHECK(sa == sb);
    }
}
