#include "cli.hpp"

#include <qcorr/entanglement.hpp>
#include <qcorr/entropies.hpp>
#include <qcorr/state_io.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace qcorr::cli {

using nlohmann::json;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double sig9(double v) {
    if (!std::isfinite(v)) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return sig9(v);
}

json opt_num(const std::optional<double>& v) {
    return v ? num(*v) : json(nullptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) {
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
    } else {
        write_text_file(out_path, text);
    }
}

OptimizerBudget budget_from(int starts, int iters) {
    OptimizerBudget b;
    b.starts = starts;
    b.iterations = iters;
    if (starts < 1 || iters < 1) throw InputError("budget values must be positive");
    return b;
}

bool ree_in_scope(const DimSignature& sig) {
    if (sig.size() != 2) return false;
    const int lo = std::min(sig.dims()[0], sig.dims()[1]);
    const int hi = std::max(sig.dims()[0], sig.dims()[1]);
    return lo == 2 && hi <= 3;
}

json bounded(const BoundedValue& b) {
    return json{{"lower", num(b.lower)}, {"upper", num(b.upper)}, {"provenance", to_string(b.provenance)}};
}

json report_json(const EntanglementReport& r) {
    json j;
    j["concurrence"] = opt_num(r.concurrence);
    j["eof"] = num(r.eof);
    j["eof_closed_form"] = r.eof_closed_form;
    j["e_cost"] = bounded(r.e_cost);
    j["e_distillable"] = bounded(r.e_distillable);
    j["key_rate"] = bounded(r.key_rate);
    j["delta_loss"] = opt_num(r.delta_loss);
    j["ree_upper"] = opt_num(r.ree_upper);
    j["ree_lower"] = num(r.ree_lower);
    j["coherent_information"] = num(r.coherent_information);
    j["S_cond_ab"] = num(r.s_cond_ab);
    j["conditional"] = r.conditional;
    if (r.ppt_ac) j["ppt_ac"] = r.ppt_ac->ppt;
    j["discord_ab_numeric"] = opt_num(r.discord_ab_numeric);
    json violations = json::array();
    for (const auto& v : audit_chain(r)) violations.push_back({{"relation", v.relation}, {"excess", num(v.excess)}});
    j["chain_violations"] = violations;
    return j;
}

// ---- measure ----

struct MeasureArgs {
    std::string file;
    std::string measures = "entropy";
    std::string pair;
    int starts = 24;
    int iters = 200;
};

int cmd_measure(const MeasureArgs& a, std::ostream& out) {
    const DensityMatrix full = as_density(parse_state(read_text_file(a.file)));
    std::vector<std::string> labels = a.pair.empty() ? std::vector<std::string>{} : split(a.pair, ',');
    if (labels.empty()) {
        if (full.sig().size() < 2) throw InputError("state has a single subsystem; nothing to correlate");
        labels = {full.sig().labels()[0], full.sig().labels()[1]};
    }
    if (labels.size() != 2 || labels[0] == labels[1]) throw InputError("--pair needs two distinct labels");
    for (const auto& l : labels) {
        if (!full.sig().contains(l)) throw InputError("--pair: unknown label '" + l + "'");
    }
    const DensityMatrix rho = full.sig().size() == 2 ? full : full.reduced({labels[0], labels[1]});
    const std::string& x = labels[0];
    const std::string& y = labels[1];
    const OptimizerBudget budget = budget_from(a.starts, a.iters);

    json doc;
    doc["dims"] = rho.sig().dims();
    doc["labels"] = rho.sig().labels();
    for (const auto& m : split(a.measures, ',')) {
        if (m == "entropy") {
            const auto e = entropy_report(rho, x, y);
            json j;
            j["S_" + x + y] = num(e.s_joint);
            for (const auto& [label, s] : e.s_marginals) j["S_" + label] = num(s);
            for (const auto& [key, s] : e.s_conditional) j["S_cond_" + key.first + key.second] = num(s);
            j["mutual_information"] = num(e.mutual_information);
            j["coherent_information"] = num(e.coherent_information);
            doc["entropy"] = j;
        } else if (m == "discord") {
            json j;
            for (const auto& [t, s] : {std::pair{x, y}, std::pair{y, x}}) {
                const auto d = discord(rho, t, s, budget);
                j[t + "|" + s] = {{"discord", num(d.discord)},
                                  {"classical_correlation", num(d.classical_correlation)},
                                  {"mutual_information", num(d.mutual_information)},
                                  {"starts", d.optimizer_trace.seeds_tried}};
            }
            doc["discord"] = j;
        } else if (m == "entanglement") {
            ReportOptions opts;
            opts.discord_budget = budget;
            opts.with_discord = false;
            opts.with_ree = ree_in_scope(rho.sig());
            doc["entanglement"] = report_json(entanglement_report(rho, opts));
        } else if (m == "ppt") {
            const auto v = is_ppt(rho, y);
            doc["ppt"] = {{"ppt", v.ppt},
                          {"min_eigenvalue", num(v.min_eigenvalue)},
                          {"decides_separability", v.decides_separability}};
        } else if (m == "lemma1") {
            const auto v = lemma1_check(rho);
            doc["lemma1"] = {{"classification", to_string(v.classification)},
                             {"eof", num(v.eof)},
                             {"coherent_information", num(v.coherent_information)},
                             {"gap", num(v.gap)},
                             {"applicable", v.applicable},
                             {"holds", v.holds}};
        } else if (m == "irreversibility") {
            const auto c = irreversibility_conditions(rho);
            doc["irreversibility"] = {{"pure", c.pure},
                                      {"separable", c.separable},
                                      {"pseudo_pure", c.pseudo_pure},
                                      {"additivity_certificate", c.additivity_certificate},
                                      {"certificate_route", c.certificate_route},
                                      {"verdict", to_string(c.verdict)}};
        } else {
            throw InputError("unknown measure '" + m +
                             "' (expected entropy, discord, entanglement, ppt, lemma1, irreversibility)");
        }
    }
    out << doc.dump(2) << "\n";
    return kOk;
}

// ---- sweep ----

struct SweepArgs {
    std::vector<std::string> thetas{"pi/6", "pi/4", "pi/2"};
    int phi_steps = 65;
    std::string format = "csv";
    std::string out;
    std::uint64_t seed = 0;
    int starts = 24;
    int iters = 200;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    if (a.phi_steps < 2) throw InputError("--phi-steps must be at least 2");
    if (a.format != "csv" && a.format != "json") throw InputError("--format must be csv or json");
    std::vector<double> thetas;
    for (const auto& t : a.thetas) {
        const double v = parse_angle(t);
        if (v < 0.0 || v > kHalfPi + 1e-12) throw InputError("theta " + t + " outside [0, pi/2]");
        thetas.push_back(std::min(v, kHalfPi));
    }
    ReportOptions opts;
    opts.discord_budget = budget_from(a.starts, a.iters);

    static const char* header = "phi,theta,E_C,E_D,Delta,discord_ab_numeric,S_cond_ab,ree_upper,ppt_ac";
    std::ostringstream csv;
    csv << header << "\n";
    json rows = json::array();
    for (double theta : thetas) {
        for (int k = 0; k < a.phi_steps; ++k) {
            const double phi = k == a.phi_steps - 1 ? kHalfPi : kHalfPi * k / (a.phi_steps - 1);
            const auto r = theorem2_report(ExampleFamilyParams{theta, phi}, opts);
            // Delta is formed from the emitted digits so it equals E_C - E_D exactly.
            const long long ec = std::llround(r.e_cost.upper * 1e9);
            const long long ed = std::llround(r.e_distillable.upper * 1e9);
            const std::string delta = fixed9(static_cast<double>(ec - ed) / 1e9);
            const std::string ppt = r.ppt_ac && r.ppt_ac->ppt ? "true" : "false";
            const std::vector<std::string> cells{fixed9(phi),
                                                 fixed9(theta),
                                                 fixed9(static_cast<double>(ec) / 1e9),
                                                 fixed9(static_cast<double>(ed) / 1e9),
                                                 delta,
                                                 r.discord_ab_numeric ? fixed9(*r.discord_ab_numeric) : "",
                                                 fixed9(r.s_cond_ab),
                                                 r.ree_upper ? fixed9(*r.ree_upper) : "",
                                                 ppt};
            for (std::size_t c = 0; c < cells.size(); ++c) csv << (c ? "," : "") << cells[c];
            csv << "\n";
            json row = json::object();
            static const char* names[] = {"phi", "theta", "E_C", "E_D", "Delta", "discord_ab_numeric",
                                          "S_cond_ab", "ree_upper"};
            for (std::size_t c = 0; c < 8; ++c) {
                row[names[c]] = cells[c].empty() ? json(nullptr) : json(std::strtod(cells[c].c_str(), nullptr));
            }
            row["ppt_ac"] = ppt == "true";
            rows.push_back(row);
        }
    }
    std::string text;
    if (a.format == "csv") {
        text = csv.str();
    } else {
        json doc{{"columns", split(header, ',')}, {"seed", a.seed}, {"rows", rows}};
        text = doc.dump(2) + "\n";
    }
    emit(text, a.out, out);
    return kOk;
}

// ---- verify ----

struct VerifyArgs {
    std::string campaign;
    int trials = 0;
    std::uint64_t seed = 1;
    double tol = 0.0;
    int starts = 24;
    int iters = 200;
};

struct Campaign {
    int default_trials;
    double default_tol;
    // Returns the worst deviation and whether every trial passed.
    std::function<bool(const VerifyArgs&, std::ostream&)> run;
};

void trial_line(std::ostream& out, int i, double deviation, bool ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "trial %d deviation %.3e %s\n", i, deviation, ok ? "ok" : "FAIL");
    out << buf;
}

bool summary(std::ostream& out, const std::string& name, int trials, double worst, double tol, bool ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "campaign %s trials %d worst %.3e tol %.1e %s\n", name.c_str(), trials, worst,
                  tol, ok ? "PASS" : "FAIL");
    out << buf;
    return ok;
}

bool koashi_winter(const VerifyArgs& a, std::ostream& out) {
    const auto budget = budget_from(a.starts, a.iters);
    double worst = 0.0;
    bool all = true;
    for (int i = 0; i < a.trials; ++i) {
        const PureState psi = random_pure_state(DimSignature::tripartite(2, 2, 2), derive_seed(a.seed, i));
        const double eof = eof_2q(psi.reduced(std::vector<std::string>{"a", "b"}));
        const double dev = eof_via_koashi_winter(psi, budget).value - eof;
        // the projective search can only overestimate the discord
        const bool ok = dev >= -1e-9 && std::abs(dev) <= a.tol;
        worst = std::max(worst, std::abs(dev));
        all = all && ok;
        trial_line(out, i, dev, ok);
    }
    return summary(out, "koashi-winter", a.trials, worst, a.tol, all);
}

bool lemma1(const VerifyArgs& a, std::ostream& out) {
    double worst = std::numeric_limits<double>::infinity();
    bool all = true;
    int accepted = 0;
    for (std::uint64_t draw = 0; accepted < a.trials; ++draw) {
        const DensityMatrix rho = random_density_matrix(DimSignature::bipartite(2, 2), 4, derive_seed(a.seed, draw));
        const Lemma1Verdict v = lemma1_check(rho);
        if (v.classification != Lemma1Class::MixedEntangled) continue;
        const bool ok = v.gap >= a.tol;
        worst = std::min(worst, v.gap);
        all = all && ok;
        trial_line(out, accepted++, v.gap, ok);
    }
    return summary(out, "lemma1", a.trials, worst, a.tol, all);
}

bool theorem2_grid(const VerifyArgs& a, std::ostream& out) {
    if (a.trials < 2) throw InputError("theorem2-grid needs at least 2 points per axis");
    const auto budget = budget_from(a.starts, a.iters);
    double worst = 0.0;
    bool all = true;
    int i = 0;
    for (int t = 0; t < a.trials; ++t) {
        for (int p = 0; p < a.trials; ++p) {
            const ExampleFamilyParams params{kHalfPi * t / (a.trials - 1), kHalfPi * p / (a.trials - 1)};
            const auto ex = example_family(params);
            const double d = discord(ex.sigma_ab, "a", "b", budget).discord;
            const double dev = d + conditional_entropy(ex.sigma_ab, "a", "b");
            const bool ok = std::abs(dev) <= a.tol;
            worst = std::max(worst, std::abs(dev));
            all = all && ok;
            trial_line(out, i++, dev, ok);
        }
    }
    return summary(out, "theorem2-grid", a.trials * a.trials, worst, a.tol, all);
}

bool chain(const VerifyArgs& a, std::ostream& out) {
    ReportOptions opts;
    opts.with_discord = false;
    double worst = 0.0;
    bool all = true;
    for (int i = 0; i < a.trials; ++i) {
        const std::uint64_t s = derive_seed(a.seed, i);
        const int db = i % 4 == 3 ? 3 : 2;
        const int rank = 1 + static_cast<int>(s % static_cast<std::uint64_t>(2 * db));
        const DensityMatrix rho = random_density_matrix(DimSignature::bipartite(2, db), rank, s);
        const auto violations = audit_chain(entanglement_report(rho, opts), a.tol);
        double excess = 0.0;
        for (const auto& v : violations) excess = std::max(excess, v.excess);
        worst = std::max(worst, excess);
        all = all && violations.empty();
        trial_line(out, i, excess, violations.empty());
        for (const auto& v : violations) out << "  violated " << v.relation << "\n";
    }
    return summary(out, "chain", a.trials, worst, a.tol, all);
}

int cmd_verify(VerifyArgs a, std::ostream& out) {
    static const std::map<std::string, Campaign> campaigns{
        {"koashi-winter", {200, 1e-4, koashi_winter}},
        {"lemma1", {300, 1e-6, lemma1}},
        {"theorem2-grid", {17, 1e-4, theorem2_grid}},
        {"chain", {1000, 1e-9, chain}},
    };
    const auto it = campaigns.find(a.campaign);
    if (it == campaigns.end()) {
        throw InputError("unknown campaign '" + a.campaign + "' (expected koashi-winter, lemma1, theorem2-grid, chain)");
    }
    if (a.trials == 0) a.trials = it->second.default_trials;
    if (a.tol == 0.0) a.tol = it->second.default_tol;
    if (a.trials < 1) throw InputError("--trials must be at least 1");
    if (!(a.tol > 0.0)) throw InputError("--tol must be positive");
    return it->second.run(a, out) ? kOk : kVerificationFailed;
}

// ---- state make ----

struct MakeArgs {
    std::string theta = "pi/2";
    std::string phi = "pi/4";
    std::string spec;
    std::string dims = "2,2";
    int rank = 0;
    std::uint64_t seed = 0;
    bool pure = false;
    std::string keep;
    std::string out;
};

StateDocument keep_labels(StateDocument doc, const std::string& keep) {
    if (keep.empty()) return doc;
    const auto labels = split(keep, ',');
    const DimSignature& sig = std::visit([](const auto& s) -> const DimSignature& { return s.sig(); }, doc);
    for (const auto& l : labels) {
        if (!sig.contains(l)) throw InputError("--keep: unknown label '" + l + "'");
    }
    return as_density(doc).reduced(labels);
}

} // namespace

std::string fixed9(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    std::string s = buf;
    if (s == "-0.000000000") s = "0.000000000";
    return s;
}

double parse_angle(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    const auto pos = t.find("pi");
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != s.size()) throw InputError("cannot parse angle '" + text + "'");
        return v;
    };
    if (pos == std::string::npos) return number(t);
    std::string coeff = t.substr(0, pos);
    if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
    const double k = coeff.empty() ? 1.0 : number(coeff);
    const std::string rest = t.substr(pos + 2);
    if (rest.empty()) return k * std::numbers::pi;
    if (rest.front() != '/') throw InputError("cannot parse angle '" + text + "'");
    return k * std::numbers::pi / number(rest.substr(1));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum correlation and entanglement measures"};
    app.name("qcorr");
    app.require_subcommand(1);

    MeasureArgs ma;
    auto* measure = app.add_subcommand("measure", "Entropic, discord and entanglement measures of a state file");
    measure->add_option("file", ma.file, "State document (JSON)")->required();
    measure->add_option("--measures", ma.measures,
                        "Comma list: entropy, discord, entanglement, ppt, lemma1, irreversibility");
    measure->add_option("--pair", ma.pair, "Two labels to correlate (default: the first two)");
    measure->add_option("--budget-starts", ma.starts, "Measurement-search starting points");
    measure->add_option("--budget-iters", ma.iters, "Nelder-Mead iterations per start");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "E_C, E_D and Delta over the two-qubit example family");
    sweep->add_option("--theta", sa.thetas, "Theta values, e.g. pi/6,pi/4")->delimiter(',');
    sweep->add_option("--phi-steps", sa.phi_steps, "Points on [0, pi/2] including both ends");
    sweep->add_option("--format", sa.format, "csv or json");
    sweep->add_option("--out", sa.out, "Output file (default: stdout)");
    sweep->add_option("--seed", sa.seed, "Recorded in the json document");
    sweep->add_option("--budget-starts", sa.starts, "Measurement-search starting points");
    sweep->add_option("--budget-iters", sa.iters, "Nelder-Mead iterations per start");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run a seeded verification campaign");
    verify->add_option("--campaign", va.campaign, "koashi-winter, lemma1, theorem2-grid or chain")->required();
    verify->add_option("--trials", va.trials, "Trials (points per axis for theorem2-grid)");
    verify->add_option("--seed", va.seed, "Campaign seed");
    verify->add_option("--tol", va.tol, "Tolerance");
    verify->add_option("--budget-starts", va.starts, "Measurement-search starting points");
    verify->add_option("--budget-iters", va.iters, "Nelder-Mead iterations per start");

    MakeArgs mk;
    auto* state = app.add_subcommand("state", "State documents");
    state->require_subcommand(1);
    auto* make = state->add_subcommand("make", "Write a state document");
    make->require_subcommand(1);
    make->add_option("--keep", mk.keep, "Reduce to these labels")->trigger_on_parse();
    make->add_option("--out", mk.out, "Output file (default: stdout)");
    make->fallthrough();
    auto* bell = make->add_subcommand("bell", "(|00> + |11>)/sqrt(2)");
    auto* example = make->add_subcommand("example", "(|000> + |theta 1 phi>)/sqrt(2) on a, b, c");
    example->add_option("--theta", mk.theta, "Angle in [0, pi/2]");
    example->add_option("--phi", mk.phi, "Angle in [0, pi/2]");
    auto* one_mc = make->add_subcommand("one-mc", "sum_i alpha_i |a_i>|i>|c_i> from a spec file");
    one_mc->add_option("--spec", mk.spec, "Spec document")->required();
    auto* pseudo = make->add_subcommand("pseudo-pure", "Flagged mixture from a spec file");
    pseudo->add_option("--spec", mk.spec, "Spec document")->required();
    auto* random = make->add_subcommand("random", "Seeded random state");
    random->add_option("--dims", mk.dims, "Comma list of dimensions");
    random->add_option("--rank", mk.rank, "Rank (default: full)");
    random->add_option("--seed", mk.seed, "Seed");
    random->add_flag("--pure", mk.pure, "Emit a pure state");
    for (auto* sub : {bell, example, one_mc, pseudo, random}) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (measure->parsed()) return cmd_measure(ma, out);
        if (sweep->parsed()) return cmd_sweep(sa, out);
        if (verify->parsed()) return cmd_verify(va, out);

        StateDocument doc = bell_state();
        if (example->parsed()) {
            doc = example_family(ExampleFamilyParams{parse_angle(mk.theta), parse_angle(mk.phi)}).psi;
        } else if (one_mc->parsed()) {
            doc = make_one_mc(parse_one_mc_spec(read_text_file(mk.spec))).psi;
        } else if (pseudo->parsed()) {
            const PseudoPureSpec spec = parse_pseudo_pure_spec(read_text_file(mk.spec));
            doc = make_pseudo_pure(spec.pairs, spec.flag_dim);
        } else if (random->parsed()) {
            std::vector<int> dims;
            for (const auto& d : split(mk.dims, ',')) {
                std::size_t used = 0;
                int v = 0;
                try {
                    v = std::stoi(d, &used);
                } catch (const std::exception&) {
                }
                if (used != d.size() || v < 1) throw InputError("--dims: cannot parse '" + d + "'");
                dims.push_back(v);
            }
            std::vector<std::string> labels;
            for (std::size_t k = 0; k < dims.size(); ++k) labels.push_back(std::string(1, static_cast<char>('a' + k)));
            const DimSignature sig(dims, labels);
            if (mk.pure) {
                doc = random_pure_state(sig, mk.seed);
            } else {
                doc = random_density_matrix(sig, mk.rank == 0 ? sig.total_dim() : mk.rank, mk.seed);
            }
        }
        emit(dump_state(keep_labels(std::move(doc), mk.keep)), mk.out, out);
        return kOk;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kInputError;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIoError;
    } catch (const ValidationError& e) {
        err << "invalid state: " << e.what() << "\n";
        return kInvariantError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvariantError;
    }
}

} // namespace qcorr::cli
