#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string temp_path(const std::string& name) {
    return std::string("/tmp/geoloop_test_") + name;
}

RunResult run_cli(const std::string& args) {
    const std::string err_file = temp_path("stderr.txt");
    const std::string cmd = std::string(GEOLOOP_CLI_PATH) + " " + args + " 2>" + err_file;
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream err(err_file);
    std::stringstream ss;
    ss << err.rdbuf();
    result.err = ss.str();
    return result;
}

std::string write_file(const std::string& name, const std::string& content) {
    const std::string path = temp_path(name);
    std::ofstream out(path);
    out << content;
    return path;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

} // namespace

TEST_CASE("lattice-sweep CSV: header, rows, and bound flags") {
    const auto z2 = write_file("z2.txt", "2\n1 0\n0 1\n");
    const auto result = run_cli("lattice-sweep --lattice " + z2 +
                                " --t-min 1 --t-max 10 --t-step 1");
    REQUIRE(result.exit_code == 0);

    const auto lines = lines_of(result.out);
    REQUIRE(lines.size() == 11);
    CHECK(lines[0] == "t,loop_count,primitive_geodesic_count,blichfeldt_bound,satisfied");

    // re-parse every row and recompute the satisfied flag from the numbers
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        REQUIRE(cells.size() == 5);
        const double count = std::stod(cells[1]);
        const double bound = std::stod(cells[3]);
        const bool satisfied = count >= bound - 1e-9;
        CHECK(cells[4] == (satisfied ? "true" : "false"));
        CHECK(cells[4] == "true");
    }

    const auto last = split_csv(lines[10]);
    CHECK(last[1] == "316"); // Gauss-circle count at t = 10
}

TEST_CASE("lattice-sweep rejects malformed input and bad ranges") {
    const auto singular = write_file("singular.txt", "2\n1 0\n2 0\n");
    CHECK(run_cli("lattice-sweep --lattice " + singular).exit_code == 2);

    const auto z2 = write_file("z2.txt", "2\n1 0\n0 1\n");
    CHECK(run_cli("lattice-sweep --lattice " + z2 + " --t-min 5 --t-max 2").exit_code == 2);
    CHECK(run_cli("lattice-sweep --lattice does_not_exist.txt").exit_code == 2);
    CHECK(run_cli("lattice-sweep").exit_code == 2);
}

TEST_CASE("sweep output is byte-identical across runs") {
    const auto z2 = write_file("z2.txt", "2\n1 0\n0 1\n");
    const std::string sweep = "lattice-sweep --lattice " + z2 + " --t-min 1 --t-max 8 --t-step 0.5";
    CHECK(run_cli(sweep).out == run_cli(sweep).out);

    const std::string fuchsian = "fuchsian-sweep --preset punctured-torus --t-min 1 "
                                 "--t-max 4 --t-step 1 --grid 2";
    CHECK(run_cli(fuchsian).out == run_cli(fuchsian).out);

    const std::string entropy = "entropy-report --preset punctured-torus --t-min 2 "
                                "--t-max 5 --t-step 1";
    CHECK(run_cli(entropy).out == run_cli(entropy).out);

    const std::string witness = "witness --lattice " + z2 + " -r 1.2 -m 4";
    CHECK(run_cli(witness).out == run_cli(witness).out);
}

TEST_CASE("fuchsian-sweep: frozen counts and manifest caveats") {
    const auto result = run_cli("fuchsian-sweep --preset punctured-torus --t-min 2 "
                                "--t-max 8 --t-step 2 --grid 2");
    REQUIRE(result.exit_code == 0);
    const auto lines = lines_of(result.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "t,loop_count_base,loop_count_max_over_grid,blichfeldt_bound,satisfied");
    CHECK(split_csv(lines[1])[1] == "4"); // P_q(2) at base point i
    for (std::size_t i = 1; i < lines.size(); ++i) CHECK(split_csv(lines[i])[4] == "true");

    // free model: no pruning caveat in the manifest
    const json manifest = json::parse(result.err);
    CHECK(manifest["caveats"].empty());
    CHECK(manifest["model"]["is_free"] == true);

    // non-free model carries the pruning caveat
    const auto octagon = run_cli("fuchsian-sweep --preset genus2-octagon --t-min 3.1 "
                                 "--t-max 3.1 --t-step 1 --grid 1");
    REQUIRE(octagon.exit_code == 0);
    const json oct_manifest = json::parse(octagon.err);
    REQUIRE(oct_manifest["caveats"].size() == 1);
    const std::string caveat = oct_manifest["caveats"][0];
    CHECK(caveat.find("slack") != std::string::npos);
    CHECK(split_csv(lines_of(octagon.out)[1])[1] == "8");
}

TEST_CASE("fuchsian-sweep base-point override") {
    // i is the preset base point, so spelling it out changes nothing
    const std::string plain = "fuchsian-sweep --preset punctured-torus --t-min 2 --t-max 4 "
                              "--t-step 1 --grid 1";
    CHECK(run_cli(plain + " --base-point 0 1").out == run_cli(plain).out);

    const auto moved = run_cli(plain + " --base-point 0.25 1.4");
    REQUIRE(moved.exit_code == 0);
    REQUIRE(lines_of(moved.out).size() == 4);

    CHECK(run_cli(plain + " --base-point 0 -1").exit_code == 2);
}

TEST_CASE("fuchsian-sweep rejects unknown presets, listing the known ones") {
    const auto result = run_cli("fuchsian-sweep --preset no-such-model");
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("punctured-torus") != std::string::npos);
    CHECK(result.err.find("genus2-octagon") != std::string::npos);
}

TEST_CASE("fuchsian-sweep refuses a slack that fails certification") {
    const auto result = run_cli("fuchsian-sweep --preset punctured-torus --slack 0 "
                                "--t-min 3.7 --t-max 3.7 --t-step 1 --grid 1");
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("slack") != std::string::npos);
}

TEST_CASE("witness command emits a verified JSON report") {
    const auto z2 = write_file("z2.txt", "2\n1 0\n0 1\n");
    const auto result = run_cli("witness --lattice " + z2 + " -r 1.2 -m 4");
    REQUIRE(result.exit_code == 0);

    const json report = json::parse(result.out);
    REQUIRE(report["multiplicity"].get<int>() >= 4);
    const auto center = report["center"].get<std::vector<double>>();
    for (const auto& tr : report["translates"]) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < center.size(); ++k) {
            const double diff = tr[k].get<double>() - center[k];
            d2 += diff * diff;
        }
        CHECK(std::sqrt(d2) <= 1.2 + 1e-9);
    }
    for (const auto& loop : report["loop_vectors"])
        CHECK(loop["length"].get<double>() <= 2.4 + 1e-9);

    CHECK(run_cli("witness --lattice " + z2 + " -r 0.4 -m 2").exit_code == 4);
}

TEST_CASE("entropy-report columns and the synthetic hook") {
    const auto z2 = write_file("z2.txt", "2\n1 0\n0 1\n");
    const auto flat = run_cli("entropy-report --lattice " + z2 +
                              " --t-min 10 --t-max 40 --t-step 10");
    REQUIRE(flat.exit_code == 0);
    const auto lines = lines_of(flat.out);
    CHECK(lines[0] ==
          "t,log_ball_vol_over_t,log_P_over_t,log_v_over_t,h_vol_reference,half_h_vol_reference");
    // flat reference entropy is zero and the ball estimate decreases
    double prev = 1e9;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        CHECK(cells[4] == "0");
        const double est = std::stod(cells[1]);
        CHECK(est < prev);
        prev = est;
    }

    const auto synth = run_cli("entropy-report --synthetic-exp --t-min 1 --t-max 5 --t-step 1");
    REQUIRE(synth.exit_code == 0);
    for (const auto& line : lines_of(synth.out)) {
        if (line.rfind("t,", 0) == 0) continue;
        const auto cells = split_csv(line);
        CHECK(std::abs(std::stod(cells[1]) - 1.0) <= 1e-12);
    }

    const auto hyp = run_cli("entropy-report --preset punctured-torus --t-min 4 --t-max 8 "
                             "--t-step 2");
    REQUIRE(hyp.exit_code == 0);
    const auto hyp_lines = lines_of(hyp.out);
    const auto last = split_csv(hyp_lines.back());
    CHECK(std::stod(last[2]) >= 0.3); // log P_q(8) / 8 comfortably above h/2 - margin
    CHECK(last[4] == "1");
    CHECK(last[5] == "0.5");
}

TEST_CASE("entropy-report: analytic column survives past the counting radius") {
    const auto result = run_cli("entropy-report --preset punctured-torus --t-min 5 "
                                "--t-max 20 --t-step 5");
    REQUIRE(result.exit_code == 0);
    const auto lines = lines_of(result.out);
    REQUIRE(lines.size() == 5);
    const auto t20 = split_csv(lines[4]);
    CHECK(std::stod(t20[1]) == Catch::Approx(1.0572).margin(1e-4));
    CHECK(t20[2].empty()); // count columns truncated at the desk-scale radius
    CHECK(result.err.find("truncated") != std::string::npos);

    const auto t5 = split_csv(lines[1]);
    CHECK_FALSE(t5[2].empty()); // counts still present inside the radius
}

TEST_CASE("selftest passes clean and fails under the tamper hook") {
    CHECK(run_cli("selftest").exit_code == 0);
    const auto tampered = run_cli("selftest --tamper-bound");
    CHECK(tampered.exit_code == 1);
    CHECK(tampered.out.find("FAIL") != std::string::npos);

    const auto degraded = run_cli("selftest --slack 0");
    CHECK(degraded.exit_code == 1);
    CHECK(degraded.out.find("degraded") != std::string::npos);
}

TEST_CASE("presets listing names both models") {
    const auto result = run_cli("presets");
    REQUIRE(result.exit_code == 0);
    CHECK(result.out.find("punctured-torus") != std::string::npos);
    CHECK(result.out.find("genus2-octagon") != std::string::npos);
    CHECK(result.out.find("trace") != std::string::npos);
}

TEST_CASE("json format carries the same rows as csv") {
    const auto z2 = write_file("z2.txt", "2\n1 0\n0 1\n");
    const auto result = run_cli("lattice-sweep --lattice " + z2 +
                                " --t-min 1 --t-max 3 --t-step 1 --format json");
    REQUIRE(result.exit_code == 0);
    const json payload = json::parse(result.out);
    REQUIRE(payload["rows"].size() == 3);
    CHECK(payload["rows"][0]["loop_count"] == 4);
    CHECK(payload["rows"][2]["loop_count"] == 28);
    for (const auto& row : payload["rows"]) CHECK(row["satisfied"] == true);
}

TEST_CASE("--out writes the payload to a file") {
    const auto z2 = write_file("z2.txt", "2\n1 0\n0 1\n");
    const std::string out_path = temp_path("sweep_out.csv");
    const auto result = run_cli("lattice-sweep --lattice " + z2 +
                                " --t-min 1 --t-max 2 --t-step 1 --out " + out_path);
    REQUIRE(result.exit_code == 0);
    CHECK(result.out.empty());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(lines_of(ss.str()).size() == 3);
}
