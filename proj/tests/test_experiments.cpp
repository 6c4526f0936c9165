// Experiment driver and CLI: resolved-config echo, byte-level determinism,
// round-trips through the echoed config, grid-ordered rows, and the exit-code
// contract (0 ok / 2 usage / 3 numerical with the error kind verbatim).
#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <weylseam/design.hpp>
#include <weylseam/experiments.hpp>
#include <weylseam/hamiltonian.hpp>
#include <weylseam/inversion.hpp>
#include <weylseam/seam.hpp>
#include <weylseam/spectral.hpp>
#include <weylseam/transfer.hpp>

using weylseam::Artifact;
using weylseam::ExperimentConfig;
using weylseam::UsageError;
using weylseam::cplx;
using nlohmann::json;

namespace {

ExperimentConfig make_config(std::string command, json parameters) {
    ExperimentConfig config;
    config.command = std::move(command);
    config.parameters = std::move(parameters);
    return config;
}

json run_json(const std::string& command, json parameters) {
    parameters["format"] = "json";
    const Artifact artifact = weylseam::run_experiment(make_config(command, parameters));
    REQUIRE(artifact.format == "json");
    json doc = json::parse(artifact.text);
    weylseam::validate_artifact(doc);
    return doc;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    return cells;
}

void expect_usage(const ExperimentConfig& config, const std::string& needle) {
    try {
        weylseam::run_experiment(config);
        FAIL("expected a usage error mentioning '" << needle << "'");
    } catch (const UsageError& e) {
        REQUIRE(std::string(e.what()).find(needle) != std::string::npos);
    }
}

int run_cli(const std::vector<std::string>& args, std::string& out_text,
            std::string& err_text) {
    std::vector<std::string> argv_storage;
    argv_storage.push_back("weylseam");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = weylseam::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    out_text = out.str();
    err_text = err.str();
    return code;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string name, const std::string& contents)
        : path(std::move(name)) {
        std::ofstream file(path, std::ios::binary);
        REQUIRE(file.good());
        file << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("eval emits the free-point data and matches the library evaluation") {
    // Defaults: q = 0, so m = i and v = 0 at every upper-half-plane point.
    json doc = run_json("eval", json::object());
    REQUIRE(doc["columns"] ==
            json({"z_re", "z_im", "m_re", "m_im", "v_re", "v_im", "im_m"}));
    REQUIRE(doc["rows"].size() == 1);
    const auto& row = doc["rows"][0];
    REQUIRE(row[0].get<double>() == 0.3);
    REQUIRE(row[1].get<double>() == 0.5);
    REQUIRE(std::abs(row[2].get<double>()) < 1e-14);        // Re m
    REQUIRE(row[3].get<double>() == Catch::Approx(1.0).margin(1e-14)); // Im m
    REQUIRE(std::abs(row[4].get<double>()) < 1e-14);        // Re v
    REQUIRE(std::abs(row[5].get<double>()) < 1e-14);        // Im v
    REQUIRE(row[6].get<double>() == Catch::Approx(1.0).margin(1e-13));

    // The echoed config carries the filled-in defaults.
    const auto& resolved = doc["config"]["parameters"];
    REQUIRE(resolved["N"].get<int>() == 8);
    REQUIRE(resolved["Lambda"].get<double>() == 4.0);
    REQUIRE(resolved["epsilon"].get<double>() == 0.05);
    REQUIRE(resolved["q"].size() == 8);
    REQUIRE(resolved["format"] == "json");

    // A nontrivial system agrees with calling the library directly.
    json params = {{"N", 2},
                   {"Lambda", 1.0},
                   {"q", json::array({{0.25, 0.1}, {-0.15, 0.2}})},
                   {"z", {0.3, 0.7}}};
    json doc2 = run_json("eval", params);
    const weylseam::BlockHamiltonian h(2, 1.0, {cplx(0.25, 0.1), cplx(-0.15, 0.2)}, 0.05);
    const cplx z(0.3, 0.7);
    const cplx m = weylseam::weyl_m(h, z);
    const cplx v = weylseam::schur_v(h, z);
    const auto& row2 = doc2["rows"][0];
    REQUIRE(row2[2].get<double>() == Catch::Approx(m.real()).margin(1e-13));
    REQUIRE(row2[3].get<double>() == Catch::Approx(m.imag()).margin(1e-13));
    REQUIRE(row2[4].get<double>() == Catch::Approx(v.real()).margin(1e-13));
    REQUIRE(row2[5].get<double>() == Catch::Approx(v.imag()).margin(1e-13));
    REQUIRE(row2[6].get<double>() ==
            Catch::Approx(weylseam::im_m_from_v(v)).margin(1e-13));
}

TEST_CASE("csv artifacts carry the config header and C-locale %.17g cells") {
    const Artifact artifact =
        weylseam::run_experiment(make_config("eval", json::object()));
    REQUIRE(artifact.format == "csv");
    const auto lines = split_lines(artifact.text);
    REQUIRE(lines.size() == 4);
    REQUIRE(lines[0] == "# weylseam eval");
    REQUIRE(lines[1].rfind("# config {", 0) == 0);
    REQUIRE(lines[2] == "z_re,z_im,m_re,m_im,v_re,v_im,im_m");

    // Every cell must parse fully as a C-locale double ('.' decimal point),
    // and %.17g must round-trip the JSON artifact's values exactly.
    json doc = run_json("eval", json::object());
    const auto cells = split_csv(lines[3]);
    REQUIRE(cells.size() == 7);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        REQUIRE(cells[i].find(' ') == std::string::npos);
        char* end = nullptr;
        const double parsed = std::strtod(cells[i].c_str(), &end);
        REQUIRE(end == cells[i].c_str() + cells[i].size());
        REQUIRE(parsed == doc["rows"][0][i].get<double>());
    }

    // The header's config echo re-parses and reproduces the artifact.
    const std::string embedded = lines[1].substr(std::string("# config ").size());
    const ExperimentConfig config = weylseam::config_from_json(json::parse(embedded));
    const Artifact rerun = weylseam::run_experiment(config);
    REQUIRE(rerun.text == artifact.text);
}

TEST_CASE("artifacts are deterministic and round-trip through the echoed config") {
    const std::vector<std::pair<std::string, json>> cases = {
        {"eval", json::object()},
        {"design-sweep", {{"MN", {4, 8}}, {"etas", {0.5}}, {"Lambdas", {2.0, 4.0}}}},
        {"minimax", json::object()},
        {"prolate", {{"Lambda", 0.05}, {"Omega", 0.05}, {"n_grid", 64}}},
        {"reconstruct", {{"seed", 7}, {"trials", 3}}},
    };
    for (const auto& [command, params] : cases) {
        INFO("command " << command);
        for (const std::string format : {"csv", "json"}) {
            json p = params;
            p["format"] = format;
            const ExperimentConfig config = make_config(command, p);
            const Artifact first = weylseam::run_experiment(config);
            const Artifact second = weylseam::run_experiment(config);
            REQUIRE(first.text == second.text); // byte-identical reruns

            if (format == "json") {
                json doc = json::parse(first.text);
                weylseam::validate_artifact(doc);
                // Re-running the fully resolved echo reproduces the bytes.
                const ExperimentConfig echoed = weylseam::config_from_json(doc["config"]);
                const Artifact third = weylseam::run_experiment(echoed);
                REQUIRE(third.text == first.text);
            }
        }
    }
}

TEST_CASE("design-sweep rows obey the sigma_min sandwich in grid order") {
    json doc = run_json("design-sweep", json::object());
    REQUIRE(doc["columns"] ==
            json({"M", "N", "eta", "Lambda", "smin", "lower", "upper", "defect"}));
    // Defaults: MN in {4, 8, 16} x etas {0.25, 0.5, 1.0} x Lambdas {4}.
    REQUIRE(doc["rows"].size() == 9);
    const int expected_M[9] = {4, 4, 4, 8, 8, 8, 16, 16, 16};
    const double expected_eta[9] = {0.25, 0.5, 1.0, 0.25, 0.5, 1.0, 0.25, 0.5, 1.0};
    for (std::size_t i = 0; i < 9; ++i) {
        const auto& row = doc["rows"][i];
        REQUIRE(row[0].get<int>() == expected_M[i]);
        REQUIRE(row[1].get<int>() == expected_M[i]);
        REQUIRE(row[2].get<double>() == expected_eta[i]);
        REQUIRE(row[3].get<double>() == 4.0);
        const double smin = row[4].get<double>();
        const double lower = row[5].get<double>();
        const double upper = row[6].get<double>();
        REQUIRE(lower > 0.0);
        REQUIRE(lower <= smin);
        REQUIRE(smin <= upper);
        // Half-shift designs are tight frames, so the defect is roundoff.
        REQUIRE(row[7].get<double>() <= 1e-10);
    }
}

TEST_CASE("jacobian artifact matches the exact block Jacobian") {
    json doc = run_json("jacobian", {{"N", 4}, {"M", 4}, {"eta", 0.5}, {"Lambda", 2.0}});
    REQUIRE(doc["columns"] == json({"k", "j", "re", "im"}));
    REQUIRE(doc["rows"].size() == 16);

    const weylseam::SeamDesign design =
        weylseam::half_shift_design(4, 0.5, 0.5); // alpha defaults to pi/(2M)
    REQUIRE(doc["config"]["parameters"]["alpha"].get<double>() ==
            Catch::Approx(weylseam::detail::two_pi / 16.0).margin(1e-15));
    const weylseam::BlockJacobian jac = weylseam::jacobian_block_free(design, 4, 2.0);

    for (std::size_t i = 0; i < 16; ++i) {
        const auto& row = doc["rows"][i];
        const int k = row[0].get<int>();
        const int j = row[1].get<int>();
        REQUIRE(k == static_cast<int>(i) / 4); // k-major, then j: grid order
        REQUIRE(j == static_cast<int>(i) % 4);
        const cplx entry = jac.T(k, j);
        REQUIRE(row[2].get<double>() == Catch::Approx(entry.real()).margin(1e-14));
        REQUIRE(row[3].get<double>() == Catch::Approx(entry.imag()).margin(1e-14));
    }
    const std::vector<double> svals = weylseam::singular_values(jac.T);
    REQUIRE(doc["notes"]["smin"].get<double>() ==
            Catch::Approx(svals.back()).margin(1e-14));
    REQUIRE(doc["notes"]["smax"].get<double>() ==
            Catch::Approx(svals.front()).margin(1e-14));
}

TEST_CASE("reconstruct trials stay inside the certified error budget") {
    json doc = run_json("reconstruct",
                        {{"seed", 7}, {"trials", 5}, {"noise", 1e-6}, {"amp", 1e-3}});
    REQUIRE(doc["columns"] == json({"trial", "noise_norm", "error_norm", "bound_2M0e",
                                    "iterations", "mode"}));
    REQUIRE(doc["rows"].size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        const auto& row = doc["rows"][i];
        REQUIRE(row[0].get<int>() == static_cast<int>(i));
        REQUIRE(row[1].get<double>() == 1e-6);
        REQUIRE(row[2].get<double>() <= row[3].get<double>()); // error <= 2 M0 ||e||
        REQUIRE(row[4].get<int>() >= 1);
        REQUIRE(row[4].get<int>() <= 50);
        REQUIRE(row[5].get<std::string>() == "empirical");
    }

    // A different seed gives different data (same shape), and the seed is
    // echoed so the artifact is self-describing.
    REQUIRE(doc["config"]["parameters"]["seed"].get<std::uint64_t>() == 7);
    json params8 = {{"seed", 8}, {"trials", 5}, {"noise", 1e-6}, {"amp", 1e-3},
                    {"format", "json"}};
    const Artifact other =
        weylseam::run_experiment(make_config("reconstruct", params8));
    REQUIRE(json::parse(other.text)["rows"] != doc["rows"]);

    // Randomized command without a seed: refused, naming the parameter.
    expect_usage(make_config("reconstruct", {{"trials", 2}}), "seed");
}

TEST_CASE("minimax and poisson-minimax reproduce the library reports") {
    json doc = run_json("minimax", json::object());
    REQUIRE(doc["columns"] == json({"delta", "t", "sample_gap", "lower_bound",
                                    "small_noise", "delta_over_4alpha",
                                    "exponential_form"}));
    REQUIRE(doc["rows"].size() == 1);
    const weylseam::SeamDesign design = weylseam::half_shift_design(8, 0.5, 0.5);
    const weylseam::TwoPointReport report =
        weylseam::minimax_two_point(design, 8, 4.0, 1e-3, 0.05);
    const auto& row = doc["rows"][0];
    REQUIRE(row[0].get<double>() == 1e-3);
    REQUIRE(row[1].get<double>() == Catch::Approx(report.t).margin(1e-15));
    REQUIRE(row[2].get<double>() == Catch::Approx(report.sample_gap).epsilon(1e-12));
    REQUIRE(row[3].get<double>() == Catch::Approx(report.lower_bound).epsilon(1e-12));
    REQUIRE(row[4].get<bool>() == report.small_noise);
    REQUIRE(row[5].get<double>() ==
            Catch::Approx(report.delta_over_4alpha).epsilon(1e-12));
    REQUIRE(row[6].get<double>() ==
            Catch::Approx(report.exponential_form).epsilon(1e-12));
    REQUIRE(row[1].get<double>() > 0.0);
    REQUIRE(row[3].get<double>() > 0.0);

    json pdoc = run_json("poisson-minimax", {{"K_list", {4, 8}}});
    REQUIRE(pdoc["columns"] ==
            json({"K", "eta", "sample_gap", "c1_bound", "L2_separation"}));
    REQUIRE(pdoc["rows"].size() == 2);
    const weylseam::SeamDesign pdesign = weylseam::equispaced_design(0.3, 8, 0.5, 1.0);
    for (std::size_t i = 0; i < 2; ++i) {
        const int K = i == 0 ? 4 : 8;
        const auto& prow = pdoc["rows"][i];
        REQUIRE(prow[0].get<int>() == K);
        REQUIRE(prow[1].get<double>() == 1.0);
        const weylseam::BumpPair pair =
            weylseam::build_bump_pair(K, 0.1, weylseam::GridSpec{120.0, 0.01});
        const weylseam::MinimaxPairReport want =
            weylseam::minimax_pair_report(pair, pdesign, 1e-3);
        REQUIRE(prow[2].get<double>() == Catch::Approx(want.sample_gap).epsilon(1e-10));
        REQUIRE(prow[3].get<double>() == Catch::Approx(want.c1_bound).epsilon(1e-12));
        REQUIRE(prow[4].get<double>() ==
                Catch::Approx(want.L2_separation).epsilon(1e-12));
        // The measured seam gap respects the exponential damping bound.
        REQUIRE(prow[2].get<double>() <= prow[3].get<double>() * (1.0 + 1e-3));
    }
}

TEST_CASE("prolate command tabulates the singular spectrum with plateau notes") {
    json doc = run_json("prolate", {{"Lambda", 0.05}, {"Omega", 0.05}, {"n_grid", 64}});
    REQUIRE(doc["columns"] == json({"index", "sigma"}));
    REQUIRE(doc["rows"].size() == 64);
    // Rank-one regime: sigma_1 = sqrt(2 Lambda Omega), steep drop, plateau 1.
    REQUIRE(doc["rows"][0][1].get<double>() ==
            Catch::Approx(std::sqrt(2.0 * 0.05 * 0.05)).epsilon(1e-4));
    for (std::size_t i = 1; i < 64; ++i)
        REQUIRE(doc["rows"][i][1].get<double>() <=
                doc["rows"][i - 1][1].get<double>() + 1e-15);
    REQUIRE(doc["notes"]["plateau"].get<int>() == 1);
    REQUIRE(doc["notes"]["shannon"].get<double>() ==
            Catch::Approx(0.05 * 0.05 / weylseam::detail::pi).margin(1e-18));

    // A positive weight adds the weighted column and can only shrink it.
    json wdoc = run_json("prolate",
                         {{"Lambda", 0.05}, {"Omega", 0.05}, {"n_grid", 64}, {"eta", 0.5}});
    REQUIRE(wdoc["columns"] == json({"index", "sigma", "sigma_weighted"}));
    for (std::size_t i = 0; i < 64; ++i)
        REQUIRE(wdoc["rows"][i][2].get<double>() <=
                wdoc["rows"][i][1].get<double>() + 1e-10);
    REQUIRE(wdoc["notes"].contains("plateau_weighted"));
}

TEST_CASE("configuration mistakes name the failing field") {
    expect_usage(make_config("warp-core", json::object()), "unknown command 'warp-core'");
    expect_usage(make_config("eval", {{"bogus", 1}}), "bogus");
    expect_usage(make_config("eval", {{"N", "eight"}}), "'N'");
    expect_usage(make_config("eval", {{"N", 0}}), "'N'");
    expect_usage(make_config("eval", {{"Lambda", -1.0}}), "'Lambda'");
    expect_usage(make_config("eval", {{"z", {0.3, -0.5}}}), "'z'");
    expect_usage(make_config("eval", {{"z", {0.3}}}), "'z'");
    expect_usage(make_config("eval", {{"q", json::array({{0.1, 0.0}})}}), "'q'");
    expect_usage(make_config("eval", {{"format", "xml"}}), "'format'");
    expect_usage(make_config("reconstruct", {{"seed", 1}, {"mode", "hopeful"}}), "'mode'");
    expect_usage(make_config("reconstruct", {{"seed", -3}}), "'seed'");
    expect_usage(make_config("minimax", {{"delta", 0.0}}), "'delta'");
    expect_usage(make_config("poisson-minimax", {{"K_list", {1}}}), "'K_list'");
    expect_usage(make_config("design-sweep", {{"etas", json::array()}}), "'etas'");
    expect_usage(make_config("prolate", {{"n_grid", 32}}), "'n_grid'");

    // validate_artifact rejects structurally broken documents.
    json doc = run_json("eval", json::object());
    json broken = doc;
    broken.erase("rows");
    REQUIRE_THROWS_AS(weylseam::validate_artifact(broken), UsageError);
    broken = doc;
    broken["rows"][0].erase(0);
    REQUIRE_THROWS_AS(weylseam::validate_artifact(broken), UsageError);
}

TEST_CASE("the command line maps outcomes to exit codes") {
    std::string out, err;

    // 0: success, artifact on stdout.
    REQUIRE(run_cli({"--command", "eval", "--format", "json"}, out, err) == 0);
    REQUIRE(err.empty());
    weylseam::validate_artifact(json::parse(out));

    // 0: help.
    REQUIRE(run_cli({"--help"}, out, err) == 0);
    REQUIRE(out.find("--command") != std::string::npos);

    // 2: missing command, unknown command, bad flag value, unknown flag,
    //    missing seed, unreadable config — each naming the problem.
    REQUIRE(run_cli({}, out, err) == 2);
    REQUIRE(err.find("--command") != std::string::npos);
    REQUIRE(run_cli({"--command", "bogus"}, out, err) == 2);
    REQUIRE(err.find("unknown command 'bogus'") != std::string::npos);
    REQUIRE(run_cli({"--command", "eval", "--format", "xml"}, out, err) == 2);
    REQUIRE(err.find("'format'") != std::string::npos);
    REQUIRE(run_cli({"--command", "eval", "--definitely-not-a-flag"}, out, err) == 2);
    REQUIRE(run_cli({"--command", "reconstruct"}, out, err) == 2);
    REQUIRE(err.find("seed") != std::string::npos);
    REQUIRE(run_cli({"--command", "eval", "--config", "no_such_config.json"}, out, err) ==
            2);
    REQUIRE(err.find("no_such_config.json") != std::string::npos);

    // 2: config file that is not valid JSON.
    {
        TempFile bad("tmp_exp_bad.json", "{not json");
        REQUIRE(run_cli({"--config", bad.path}, out, err) == 2);
        REQUIRE(err.find("not valid JSON") != std::string::npos);
    }

    // 3: a well-formed request the numerics must refuse, with the error
    //    kind printed verbatim on stderr.
    {
        TempFile cfg("tmp_exp_badq.json",
                     R"({"command":"eval","parameters":{"N":1,"q":[[0.6,0.0]]}})");
        REQUIRE(run_cli({"--config", cfg.path}, out, err) == 3);
        REQUIRE(err.rfind("InvalidInput", 0) == 0);
    }

    // --seed overrides the config's seed, and the override is echoed.
    {
        TempFile cfg("tmp_exp_seed.json",
                     R"({"command":"reconstruct","parameters":)"
                     R"({"seed":9,"trials":2,"format":"json"}})");
        REQUIRE(run_cli({"--config", cfg.path, "--seed", "7"}, out, err) == 0);
        json doc = json::parse(out);
        REQUIRE(doc["config"]["parameters"]["seed"].get<std::uint64_t>() == 7);
        const Artifact direct = weylseam::run_experiment(make_config(
            "reconstruct", {{"seed", 7}, {"trials", 2}, {"format", "json"}}));
        REQUIRE(out == direct.text);
    }

    // --out diverts the artifact to a file and leaves stdout empty.
    {
        const std::string path = "tmp_exp_out.json";
        REQUIRE(run_cli({"--command", "eval", "--format", "json", "--out", path}, out,
                        err) == 0);
        REQUIRE(out.empty());
        std::ifstream file(path, std::ios::binary);
        REQUIRE(file.good());
        std::stringstream content;
        content << file.rdbuf();
        weylseam::validate_artifact(json::parse(content.str()));
        std::remove(path.c_str());
    }
}
