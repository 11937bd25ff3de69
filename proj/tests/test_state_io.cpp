#include <doctest.h>

#include "support.hpp"

#include <qcorr/state_io.hpp>

#include <filesystem>
#include <numbers>

using namespace qcorr;
using qcorr::test::labels;

namespace {

std::string message_of(const std::string& text) {
    try {
        parse_state(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("density matrices round-trip bit for bit") {
    for (int t = 0; t < 100; ++t) {
        const auto sig = t % 2 ? DimSignature::tripartite(2, 2, 3) : DimSignature::bipartite(2, 3);
        const DensityMatrix rho = random_density_matrix(sig, 1 + t % 5, derive_seed(51, t));
        const std::string text = dump_state(rho);
        const auto back = std::get<DensityMatrix>(parse_state(text));
        REQUIRE(back.sig() == rho.sig());
        REQUIRE(back.matrix() == rho.matrix());
        REQUIRE(dump_state(back) == text);
    }
}

TEST_CASE("pure states round-trip and promote to their projector") {
    const PureState psi = random_pure_state(DimSignature::bipartite(2, 2), 5);
    const std::string text = dump_state(psi);
    const StateDocument doc = parse_state(text);
    REQUIRE(std::holds_alternative<PureState>(doc));
    CHECK(std::get<PureState>(doc).amplitudes() == psi.amplitudes());
    CHECK(max_abs(as_density(doc).matrix() - psi.projector()) == 0.0);
}

TEST_CASE("optional fields") {
    const auto doc = parse_state(R"({"dims":[2,2],"re":[0.6,0,0,0.8]})");
    const auto& psi = std::get<PureState>(doc);
    CHECK(psi.sig() == DimSignature::bipartite(2, 2));
    CHECK(psi.amplitudes()(3) == Complex(0.8, 0.0));
    const auto named = parse_state(R"({"dims":[2],"labels":["q"],"re":[[1,0],[0,0]]})");
    CHECK(std::get<DensityMatrix>(named).sig().labels()[0] == "q");
}

TEST_CASE("parse errors name the line or the field") {
    const std::string broken = "{\n  \"dims\": [2, 2],\n  \"re\": [1, 0\n";
    CHECK(message_of(broken).find("line") != std::string::npos);
    CHECK(message_of(R"({"re":[1,0]})").find("field 'dims'") != std::string::npos);
    CHECK(message_of(R"({"dims":[2],"re":"x"})").find("field 're'") != std::string::npos);
    CHECK(message_of(R"({"dims":[2],"re":[1,0],"im":[0]})").find("field") != std::string::npos);
    CHECK(message_of(R"({"dims":[2],"re":[[1,0],[0]]})").find("field") != std::string::npos);
    CHECK(message_of("[1,2]").find("object") != std::string::npos);
}

TEST_CASE("well-formed documents that are not states") {
    CHECK_THROWS_AS(parse_state(R"({"dims":[2],"re":[[1.5,0],[0,-0.5]]})"), ValidationError);
    CHECK_THROWS_AS(parse_state(R"({"dims":[2],"re":[[0.5,0],[0,0.4]]})"), ValidationError);
    CHECK_THROWS_AS(parse_state(R"({"dims":[2],"re":[1,1]})"), ValidationError);
    CHECK(message_of(R"({"dims":[3],"re":[1,0]})").find("expected 3") != std::string::npos);
}

TEST_CASE("spec documents") {
    const auto spec = parse_one_mc_spec(R"({
        "alphas": {"re": [0.6, 0.8]},
        "a_states": [{"re": [1, 0]}, {"re": [0, 1]}],
        "c_states": [{"re": [1, 0]}, {"re": [0, 0], "im": [0, 1]}]
    })");
    CHECK(spec.size() == 2);
    CHECK(spec.alphas[1] == Complex(0.8, 0.0));
    CHECK(spec.c_states[1](1) == Complex(0.0, 1.0));
    CHECK_THROWS_AS(parse_one_mc_spec(R"({"alphas": {"re": [1]}})"), ParseError);

    const auto pp = parse_pseudo_pure_spec(R"({
        "flag_dim": 2,
        "pairs": [{"p": 0.5, "state": {"dims": [2, 2], "re": [1, 0, 0, 0]}},
                  {"p": 0.5, "state": {"dims": [2, 2], "re": [0, 0.6, 0.8, 0]}}]
    })");
    CHECK(pp.flag_dim == 2);
    CHECK(pp.pairs.size() == 2);
    CHECK(pp.pairs[1].weight == 0.5);
    CHECK_THROWS_AS(parse_pseudo_pure_spec(R"({"flag_dim": 2, "pairs": [{"p": 1}]})"), ParseError);
}

TEST_CASE("file helpers") {
    const auto dir = std::filesystem::temp_directory_path() / "qcorr_state_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "bell.json";
    write_text_file(path, dump_state(bell_state()));
    CHECK(std::get<PureState>(parse_state(read_text_file(path))).amplitudes() == bell_state().amplitudes());
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(read_text_file(dir / "missing.json"), IoError);
    CHECK_THROWS_AS(write_text_file(dir / "no" / "such" / "dir.json", "{}"), IoError);
}
