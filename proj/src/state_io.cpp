#include <qcorr/state_io.hpp>

#include <fstream>
#include <sstream>

namespace qcorr {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ParseError("field '" + field + "': " + what);
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t k = 0; k < end; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": malformed JSON");
    }
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

DimSignature parse_sig(const json& doc) {
    const json& dims = member(doc, "dims", "");
    if (!dims.is_array() || dims.empty()) fail("dims", "expected a non-empty array of integers");
    std::vector<int> d;
    for (std::size_t k = 0; k < dims.size(); ++k) d.push_back(integer(dims[k], "dims[" + std::to_string(k) + "]"));
    std::vector<std::string> labels;
    if (auto it = doc.find("labels"); it != doc.end()) {
        if (!it->is_array()) fail("labels", "expected an array of strings");
        for (std::size_t k = 0; k < it->size(); ++k) {
            if (!(*it)[k].is_string()) fail("labels[" + std::to_string(k) + "]", "expected a string");
            labels.push_back((*it)[k].get<std::string>());
        }
    } else {
        for (std::size_t k = 0; k < d.size(); ++k) labels.push_back(std::string(1, static_cast<char>('a' + k)));
    }
    try {
        return DimSignature(d, labels);
    } catch (const ValidationError& e) {
        fail("dims/labels", e.what());
    }
}

ComplexVector parse_vector(const json& obj, const std::string& path, std::optional<Eigen::Index> expect) {
    const auto re = number_list(member(obj, "re", path), path + ".re");
    std::vector<double> im(re.size(), 0.0);
    if (obj.contains("im")) im = number_list(obj["im"], path + ".im");
    if (im.size() != re.size()) fail(path + ".im", "length differs from re");
    if (expect && static_cast<Eigen::Index>(re.size()) != *expect) {
        fail(path + ".re", "length " + std::to_string(re.size()) + ", expected " + std::to_string(*expect));
    }
    ComplexVector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t k = 0; k < re.size(); ++k) v(static_cast<Eigen::Index>(k)) = Complex(re[k], im[k]);
    return v;
}

RealMatrix parse_real_matrix(const json& v, const std::string& path, int n) {
    if (!v.is_array() || static_cast<int>(v.size()) != n) {
        fail(path, "expected " + std::to_string(n) + " rows");
    }
    RealMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        const auto row = number_list(v[static_cast<std::size_t>(i)], row_path);
        if (static_cast<int>(row.size()) != n) fail(row_path, "expected " + std::to_string(n) + " entries");
        for (int j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
    }
    return m;
}

json vector_doc(const ComplexVector& v) {
    json re = json::array(), im = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        re.push_back(v(k).real());
        im.push_back(v(k).imag());
    }
    return json{{"re", re}, {"im", im}};
}

json sig_doc(const DimSignature& sig) {
    return json{{"dims", sig.dims()}, {"labels", sig.labels()}};
}

} // namespace

json to_json(const DensityMatrix& rho) {
    json doc = sig_doc(rho.sig());
    json re = json::array(), im = json::array();
    const auto& m = rho.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rr = json::array(), ii = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ii.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ii));
    }
    doc["re"] = std::move(re);
    doc["im"] = std::move(im);
    return doc;
}

json to_json(const PureState& psi) {
    json doc = sig_doc(psi.sig());
    json v = vector_doc(psi.amplitudes());
    doc["re"] = v["re"];
    doc["im"] = v["im"];
    return doc;
}

std::string dump_state(const StateDocument& doc) {
    return std::visit([](const auto& s) { return to_json(s).dump(); }, doc) + "\n";
}

StateDocument state_from_json(const json& doc) {
    const DimSignature sig = parse_sig(doc);
    const json& re = member(doc, "re", "");
    if (!re.is_array()) fail("re", "expected an array");
    const int n = sig.total_dim();
    if (!re.empty() && re[0].is_array()) {
        const RealMatrix mr = parse_real_matrix(re, "re", n);
        RealMatrix mi = RealMatrix::Zero(n, n);
        if (doc.contains("im")) mi = parse_real_matrix(doc["im"], "im", n);
        ComplexMatrix m(n, n);
        m.real() = mr;
        m.imag() = mi;
        return DensityMatrix(std::move(m), sig);
    }
    return PureState(parse_vector(doc, "", n), sig);
}

StateDocument parse_state(const std::string& text) {
    return state_from_json(parse_text(text));
}

DensityMatrix as_density(const StateDocument& doc) {
    if (const auto* psi = std::get_if<PureState>(&doc)) return psi->density();
    return std::get<DensityMatrix>(doc);
}

OneMcSpec parse_one_mc_spec(const std::string& text) {
    const json doc = parse_text(text);
    OneMcSpec spec;
    const ComplexVector alphas = parse_vector(member(doc, "alphas", ""), "alphas", std::nullopt);
    spec.alphas.assign(alphas.data(), alphas.data() + alphas.size());
    for (const char* key : {"a_states", "c_states"}) {
        const json& list = member(doc, key, "");
        if (!list.is_array()) fail(key, "expected an array of vectors");
        auto& target = std::string(key) == "a_states" ? spec.a_states : spec.c_states;
        for (std::size_t k = 0; k < list.size(); ++k) {
            target.push_back(parse_vector(list[k], std::string(key) + "[" + std::to_string(k) + "]", std::nullopt));
        }
    }
    return spec;
}

PseudoPureSpec parse_pseudo_pure_spec(const std::string& text) {
    const json doc = parse_text(text);
    PseudoPureSpec spec;
    spec.flag_dim = integer(member(doc, "flag_dim", ""), "flag_dim");
    const json& pairs = member(doc, "pairs", "");
    if (!pairs.is_array() || pairs.empty()) fail("pairs", "expected a non-empty array");
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const std::string path = "pairs[" + std::to_string(k) + "]";
        const double p = number(member(pairs[k], "p", path), path + ".p");
        StateDocument s = state_from_json(member(pairs[k], "state", path));
        if (!std::holds_alternative<PureState>(s)) fail(path + ".state", "expected a pure state");
        spec.pairs.push_back(WeightedPureState{p, std::get<PureState>(std::move(s))});
    }
    return spec;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("cannot write " + path.string());
}

} // namespace qcorr
