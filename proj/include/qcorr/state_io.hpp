#pragma once

#include <qcorr/errors.hpp>
#include <qcorr/states.hpp>

#include <json.hpp>

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace qcorr {

using StateDocument = std::variant<PureState, DensityMatrix>;

/// {"dims","labels","re":[[..]],"im":[[..]]}; doubles round-trip exactly.
nlohmann::json to_json(const DensityMatrix& rho);
/// {"dims","labels","re":[..],"im":[..]}, row-major in label order.
nlohmann::json to_json(const PureState& psi);

std::string dump_state(const StateDocument& doc);

/// A flat "re" array is a pure state, a nested one a density matrix.
/// Malformed documents raise ParseError (line or field in the message);
/// well-formed documents that break a state invariant raise ValidationError.
StateDocument parse_state(const std::string& text);
StateDocument state_from_json(const nlohmann::json& doc);

/// Pure documents are promoted to their projector.
DensityMatrix as_density(const StateDocument& doc);

struct PseudoPureSpec {
    std::vector<WeightedPureState> pairs;
    int flag_dim = 0;
};

/// {"alphas": {"re":[..],"im":[..]},
///  "a_states": [{"re":[..],"im":[..]}, ..], "c_states": [..]}
OneMcSpec parse_one_mc_spec(const std::string& text);

/// {"flag_dim": n, "pairs": [{"p": w, "state": <pure state document>}, ..]}
PseudoPureSpec parse_pseudo_pure_spec(const std::string& text);

/// IoError when the file cannot be read or written.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace qcorr
