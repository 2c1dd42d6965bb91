#include <catch2/catch_amalgamated.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

#include "geoloop/geoloop.hpp"

using namespace geoloop;

TEST_CASE("lattice file parsing") {
    std::istringstream good("# comment\n2\n1 0\n0.5 0.8660254\n");
    const auto lattice = read_lattice(good);
    CHECK(lattice.dimension == 2);
    CHECK(lattice.covolume == Catch::Approx(0.8660254).margin(1e-9));

    std::istringstream empty("");
    CHECK_THROWS_AS(read_lattice(empty), ParseError);

    std::istringstream bad_header("x\n1 0\n0 1\n");
    CHECK_THROWS_AS(read_lattice(bad_header), ParseError);

    std::istringstream short_row("2\n1 0\n0.5\n");
    CHECK_THROWS_AS(read_lattice(short_row), ParseError);

    std::istringstream missing_row("3\n1 0 0\n0 1 0\n");
    CHECK_THROWS_AS(read_lattice(missing_row), ParseError);

    std::istringstream junk("2\n1 0\n0 oops\n");
    CHECK_THROWS_AS(read_lattice(junk), ParseError);

    std::istringstream singular("2\n1 0\n2 0\n");
    CHECK_THROWS_AS(read_lattice(singular), SingularBasis);
}

TEST_CASE("fuchsian group file parsing") {
    // the punctured-torus generators as a file, marked free with slack 6
    std::istringstream good("# header: area base_re base_im [free] [slack]\n"
                            "6.283185307179586 0 1 1 6\n"
                            "1 1 1 2\n"
                            "1 -1 -1 2\n");
    const auto model = read_fuchsian(good);
    CHECK(model.area == Catch::Approx(2.0 * std::numbers::pi).margin(1e-12));
    CHECK(model.is_free);
    CHECK(model.slack == 6.0);
    REQUIRE(model.generators.size() == 2);
    CHECK(model.generators[0].label == "g0");

    // behaves like the preset
    CHECK(loop_count_hyp(model, 2.0) == 4);

    std::istringstream minimal("12.566 0 1\n1 1 0 1\n");
    const auto defaulted = read_fuchsian(minimal);
    CHECK_FALSE(defaulted.is_free);
    CHECK(defaulted.slack == 6.0);

    std::istringstream bad_det("6.283 0 1\n1 1 1 1\n");
    CHECK_THROWS_AS(read_fuchsian(bad_det), ParseError);

    std::istringstream bad_base("6.283 0 -1\n1 1 1 2\n");
    CHECK_THROWS_AS(read_fuchsian(bad_base), ParseError);

    std::istringstream no_generators("6.283 0 1\n");
    CHECK_THROWS_AS(read_fuchsian(no_generators), ParseError);

    std::istringstream bad_area("-6.283 0 1\n1 1 1 2\n");
    CHECK_THROWS_AS(read_fuchsian(bad_area), ParseError);

    std::istringstream short_gen("6.283 0 1\n1 1 1\n");
    CHECK_THROWS_AS(read_fuchsian(short_gen), ParseError);
}

TEST_CASE("format_double round-trips at 17 significant digits") {
    for (double value : {0.1, 1.0 / 3.0, std::numbers::pi, 1e-300, 76.539816339744831,
                         -2.0, 0.0, 1e17}) {
        const std::string s = format_double(value);
        double parsed = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), parsed);
        REQUIRE(res.ec == std::errc());
        REQUIRE(parsed == value);
    }
}
