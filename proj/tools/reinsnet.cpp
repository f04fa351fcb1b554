// reinsnet: command-line front end. Every report is JSON on stdout (or
// --out) and starts with the resolved configuration.

#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "specs.hpp"

namespace {

using namespace reinsnet;
using namespace reinsnet::cli;

constexpr const char* version = "1.0.0";

void emit(const json& report, const std::string& out) {
    if (out.empty()) {
        std::cout << dump(report);
        return;
    }
    std::ofstream f(out);
    if (!f) throw ValidationError("cannot open " + out + " for writing");
    f << dump(report);
    if (!f) throw ValidationError("write to " + out + " failed");
}

json verdict_json(const OrderVerdict& v) {
    json j;
    j["holds"] = v.holds;
    j["margin"] = num(v.margin);
    if (v.witness)
        j["witness"] = {{"t", num(v.witness->threshold)}, {"description", v.witness->description}};
    else
        j["witness"] = nullptr;
    if (v.crossing_point) j["crossing_point"] = num(*v.crossing_point);
    return j;
}

std::string rational_text(const Rational& r) {
    return r.denominator() == 1 ? std::to_string(r.numerator())
                                : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// "3", "1/12", "0.25" or a JSON number; decimals are read exactly.
Rational parse_rational(const json& v, const std::string& what) {
    std::string text;
    if (v.is_string()) text = v.get<std::string>();
    else if (v.is_number_integer()) return Rational(v.get<long long>());
    else if (v.is_number()) text = format_shortest(v.get<double>());
    else throw ValidationError(what + ": expected a number or a \"p/q\" string");
    text = trim(text);
    try {
        if (const auto slash = text.find('/'); slash != std::string::npos) {
            const long long q = std::stoll(text.substr(slash + 1));
            if (q == 0) throw ValidationError(what + ": zero denominator in '" + text + "'");
            return Rational(std::stoll(text.substr(0, slash)), q);
        }
        const auto e = text.find_first_of("eE");
        if (e != std::string::npos) throw ValidationError(what + ": exponent notation not supported in '" + text + "'");
        const auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(std::stoll(text));
        const std::string frac = text.substr(dot + 1);
        if (frac.size() > 15) throw ValidationError(what + ": too many decimals in '" + text + "'");
        long long scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const bool negative = !text.empty() && text.front() == '-';
        const std::string whole = text.substr(0, dot);
        const long long w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
        const long long f = frac.empty() ? 0 : std::stoll(frac);
        return Rational(w) + Rational(negative ? -f : f, scale);
    } catch (const std::logic_error&) {
        throw ValidationError(what + ": '" + text + "' is not a rational number");
    }
}

DiscreteLaw<Rational> parse_law(const json& j, const std::string& name) {
    if (!j.is_object() || !j.contains("atoms") || !j.contains("probs") || !j["atoms"].is_array() || !j["probs"].is_array() ||
        j["atoms"].size() != j["probs"].size() || j["atoms"].empty())
        throw ValidationError("law '" + name + "' needs equal-length non-empty \"atoms\" and \"probs\" arrays");
    std::vector<std::pair<Rational, Rational>> pairs;
    for (std::size_t i = 0; i < j["atoms"].size(); ++i)
        pairs.emplace_back(parse_rational(j["atoms"][i], name + " atom"), parse_rational(j["probs"][i], name + " probability"));
    Rational total(0);
    for (const auto& p : pairs) total += p.second;
    if (total != Rational(1)) throw ValidationError("law '" + name + "': probabilities sum to " + rational_text(total) + ", not 1");
    return DiscreteLaw<Rational>::from_pairs(pairs);
}

DiscreteJointDistribution<Rational> parse_joint(const json& j) {
    if (!j.is_object() || !j.contains("atoms") || !j.contains("probs") || !j["atoms"].is_array() || !j["probs"].is_array())
        throw ValidationError("\"joint\" needs \"atoms\" (array of vectors) and \"probs\" arrays");
    std::vector<std::vector<Rational>> atoms;
    std::vector<Rational> probs;
    for (const auto& a : j["atoms"]) {
        if (!a.is_array()) throw ValidationError("joint atoms must be arrays");
        std::vector<Rational> v;
        for (const auto& x : a) v.push_back(parse_rational(x, "joint atom"));
        atoms.push_back(std::move(v));
    }
    for (const auto& p : j["probs"]) probs.push_back(parse_rational(p, "joint probability"));
    return DiscreteJointDistribution<Rational>(std::move(atoms), std::move(probs));
}

json law_json(const DiscreteLaw<Rational>& law) {
    json atoms = json::array(), probs = json::array();
    for (std::size_t i = 0; i < law.atoms.size(); ++i) {
        atoms.push_back(rational_text(law.atoms[i]));
        probs.push_back(rational_text(law.probs[i]));
    }
    return {{"atoms", atoms}, {"probs", probs}};
}

json joint_json(const DiscreteJointDistribution<Rational>& joint) {
    json atoms = json::array(), probs = json::array();
    for (std::size_t i = 0; i < joint.atoms.size(); ++i) {
        json a = json::array();
        for (const auto& v : joint.atoms[i]) a.push_back(rational_text(v));
        atoms.push_back(a);
        probs.push_back(rational_text(joint.probs[i]));
    }
    return {{"atoms", atoms}, {"probs", probs}};
}

json solution_json(const AllocationSolution& sol, bool trace) {
    json j;
    json treaties = json::array();
    for (const auto& t : sol.treaties()) treaties.push_back(treaty_json(t));
    j["solution"] = {{"deductibles", nums(sol.deductibles)}, {"bounds", nums(sol.bounds)}, {"treaties", treaties}};
    j["objective"] = num(sol.objective);
    j["per_insurer_capital"] = nums(sol.per_insurer_capital);
    j["lower_constraint_active"] = json::array();
    for (bool b : sol.lower_constraint_active) j["lower_constraint_active"].push_back(b);
    j["evaluations"] = sol.evaluations;
    if (trace) {
        json t = json::array();
        for (const auto& e : sol.trace) t.push_back({{"start", e.start}, {"phase", e.phase}, {"objective", num(e.objective)}});
        j["trace"] = t;
    }
    return j;
}

// The checker names coordinates X1, X2; the counterexample's vector is Y.
std::string relabel(std::string s, char from, char to) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] == from && std::isdigit(static_cast<unsigned char>(s[i + 1]))) s[i] = to;
    return s;
}

json specs_json(const std::vector<RiskMeasureSpec>& specs) {
    json a = json::array();
    for (const auto& s : specs) a.push_back(spec_json(s));
    return a;
}

json input_json(const std::string& path, const ScenarioMatrix& s) {
    return {{"path", path}, {"digest", file_digest(path)}, {"rows", s.rows()}, {"cols", s.cols()}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reinsnet: optimal reinsurance in a network of insurers with RVaR capital requirements"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "draw a scenario matrix and write it as CSV");
    std::string sim_marginals, sim_copula = "independent", sim_out, sim_z;
    std::size_t sim_m = 0, sim_mixture = 0;
    std::uint64_t sim_seed = 0;
    sim->add_option("--marginals", sim_marginals, "e.g. 'lognormal:0,1;pareto:3,1' (spec*k repeats)");
    sim->add_option("--copula", sim_copula, "independent | comonotone | gaussian:rho | gaussian:[[..]] | clayton:theta")
        ->capture_default_str();
    sim->add_option("--mixture", sim_mixture, "Bernoulli mixture with this many risks (use with --z)");
    sim->add_option("--z", sim_z, "mixing factor support:probs, e.g. 0.1,0.9:0.5,0.5");
    sim->add_option("--m", sim_m, "number of scenarios")->required();
    sim->add_option("--seed", sim_seed, "random seed")->required();
    sim->add_option("--out", sim_out, "CSV output path")->required();

    // measure
    auto* meas = app.add_subcommand("measure", "RVaR of one scenario column");
    std::string meas_in;
    std::size_t meas_col = 0;
    double meas_alpha = 0.0, meas_beta = 0.0;
    meas->add_option("--in", meas_in, "scenario CSV")->required();
    meas->add_option("--col", meas_col, "1-based column")->required();
    meas->add_option("--alpha", meas_alpha, "upper tail level alpha")->capture_default_str();
    meas->add_option("--beta", meas_beta, "averaging width beta (0 gives VaR)")->capture_default_str();

    // premium
    auto* prem = app.add_subcommand("premium", "premium of a column or of the row sums");
    std::string prem_principle, prem_in;
    std::size_t prem_col = 0;
    prem->add_option("--principle", prem_principle, "ev:theta | wang:<g>:theta | exp:gamma")->required();
    prem->add_option("--in", prem_in, "scenario CSV")->required();
    prem->add_option("--col", prem_col, "1-based column; 0 prices the row sums")->capture_default_str();

    // optimize
    auto* opt = app.add_subcommand("optimize", "optimal layer treaties for the network");
    std::string opt_in, opt_specs, opt_principle, opt_mode, opt_out, opt_incomes;
    std::uint64_t opt_seed = 0;
    double opt_rcoc = 0.06;
    bool opt_no_trace = false;
    SolverOptions solver;
    opt->add_option("--in", opt_in, "scenario CSV")->required();
    opt->add_option("--specs", opt_specs, "JSON list of {alpha, beta} (inline or file)")->required();
    opt->add_option("--principle", opt_principle, "premium principle")->required();
    opt->add_option("--mode", opt_mode, "var | rvar")->required()->check(CLI::IsMember({"var", "rvar"}));
    opt->add_option("--seed", opt_seed, "seed for random starts")->required();
    opt->add_option("--out", opt_out, "report path (default stdout)");
    opt->add_option("--r-coc", opt_rcoc, "cost-of-capital rate")->capture_default_str();
    opt->add_option("--incomes", opt_incomes, "JSON list of premium incomes pi_i(X_i)");
    opt->add_option("--grid", solver.grid_points, "candidates per axis")->capture_default_str();
    opt->add_option("--starts", solver.random_starts, "random starts")->capture_default_str();
    opt->add_flag("--no-trace", opt_no_trace, "omit the solver trace");

    // dominate
    auto* dom = app.add_subcommand("dominate", "random treaties against their layer improvements");
    std::string dom_in, dom_marginals, dom_copula, dom_specs, dom_principle, dom_out;
    std::size_t dom_trials = 0, dom_m = 0;
    std::uint64_t dom_seed = 0;
    double dom_tol = 1e-2;
    dom->add_option("--trials", dom_trials, "number of random treaty vectors")->required();
    dom->add_option("--seed", dom_seed, "seed (treaties and, with --marginals, scenarios)")->required();
    dom->add_option("--specs", dom_specs, "JSON list of {alpha, beta}")->required();
    dom->add_option("--principle", dom_principle, "premium principle")->required();
    dom->add_option("--in", dom_in, "scenario CSV (alternative to --marginals)");
    dom->add_option("--marginals", dom_marginals, "simulate scenarios from these marginals");
    dom->add_option("--copula", dom_copula, "copula of the scenarios (needed to confirm PDS for RVaR insurers)");
    dom->add_option("--m", dom_m, "scenarios to simulate");
    dom->add_option("--tol", dom_tol, "relative violation tolerance")->capture_default_str();
    dom->add_option("--out", dom_out, "report path (default stdout)");

    // orders
    auto* ord = app.add_subcommand("orders", "stochastic order and dependence checks");
    ord->require_subcommand(1);
    auto* ord_check = ord->add_subcommand("check", "check one order on exact laws");
    std::string ord_kind, ord_in;
    ord_check->add_option("--kind", ord_kind, "st | icx | cut | pod | pds")->required()->check(
        CLI::IsMember({"st", "icx", "cut", "pod", "pds"}));
    ord_check->add_option("--in", ord_in, "laws JSON: {\"x\":law,\"y\":law} or {\"joint\":law}")->required();
    auto* ord_ex = ord->add_subcommand("example213", "the POD-but-not-PDS counterexample");

    // bernoulli
    auto* ber = app.add_subcommand("bernoulli", "cede/retain thresholds for a Bernoulli mixture");
    std::size_t ber_n = 0;
    std::string ber_z, ber_g = "sqrt";
    double ber_theta = 0.0;
    ber->add_option("--n", ber_n, "number of insurers")->required();
    ber->add_option("--z", ber_z, "support:probs of Z")->required();
    ber->add_option("--g", ber_g, "concave distortion")->capture_default_str();
    ber->add_option("--theta", ber_theta, "safety loading")->capture_default_str();

    // separability
    auto* sep = app.add_subcommand("separability", "additivity of separable premiums and of the optima");
    std::string sep_case, sep_marginals = "lognormal:0,0.5;lognormal:0.3,0.4;uniform:0,3", sep_treaties, sep_specs;
    std::size_t sep_m = 0, sep_opt_m = 10000;
    std::uint64_t sep_seed = 0;
    double sep_param = -1.0;
    bool sep_optimum = false;
    sep->add_option("--case", sep_case, "ev (any copula) | wang (comonotone) | exp (independent)")->required()->check(
        CLI::IsMember({"ev", "wang", "exp"}));
    sep->add_option("--seed", sep_seed, "random seed")->required();
    sep->add_option("--m", sep_m, "scenarios (default 1e5, 1e6 for exp)");
    sep->add_option("--marginals", sep_marginals, "marginals")->capture_default_str();
    sep->add_option("--param", sep_param, "theta (ev, wang) or gamma (exp); defaults 0.3, 0.2, 0.5");
    sep->add_option("--treaties", sep_treaties, "';'-separated treaty specs, one per column");
    sep->add_flag("--optimum", sep_optimum, "also compare the network optimum with the single optima");
    sep->add_option("--opt-m", sep_opt_m, "scenarios for the optimum comparison")->capture_default_str();
    sep->add_option("--specs", sep_specs, "risk measures for the optimum comparison (default VaR 0.05 each)");

    // acceptance
    auto* acc = app.add_subcommand("acceptance", "run the acceptance battery");
    std::vector<int> acc_only;
    acc->add_option("--only", acc_only, "criteria to run (default all)")->check(CLI::Range(1, 8));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        for (auto& ch : msg)
            if (ch == '\n') ch = ' ';
        std::cerr << "reinsnet: error: " << msg << " (see --help)\n";
        return 2;
    }

    try {
        if (*sim) {
            ScenarioMatrix s = [&] {
                if (sim_mixture > 0) {
                    if (!sim_marginals.empty()) throw ValidationError("simulate: use either --marginals or --mixture, not both");
                    return sample_bernoulli_mixture(parse_mixture(sim_mixture, sim_z), sim_m, sim_seed);
                }
                if (sim_marginals.empty()) throw ValidationError("simulate: --marginals (or --mixture with --z) is required");
                const auto marginals = parse_marginals(sim_marginals);
                return sample_scenarios(marginals, parse_copula(sim_copula, marginals.size()), sim_m, sim_seed);
            }();
            save_scenarios(s, sim_out);
            json cfg = {{"subcommand", "simulate"}, {"version", version}, {"m", sim_m}, {"seed", sim_seed}, {"out", sim_out}};
            if (sim_mixture > 0) {
                cfg["mixture"] = sim_mixture;
                cfg["z"] = sim_z;
            } else {
                cfg["marginals"] = sim_marginals;
                cfg["copula"] = sim_copula;
            }
            emit({{"config", cfg}, {"rows", s.rows()}, {"cols", s.cols()}, {"digest", file_digest(sim_out)}}, "");
        } else if (*meas) {
            const RiskMeasureSpec spec{meas_alpha, meas_beta};
            spec.validate();
            const auto s = load_scenarios(meas_in);
            if (meas_col < 1 || meas_col > s.cols())
                throw ValidationError("--col " + std::to_string(meas_col) + " outside 1.." + std::to_string(s.cols()));
            const json cfg = {{"subcommand", "measure"}, {"version", version}, {"in", input_json(meas_in, s)},
                              {"col", meas_col}, {"alpha", num(meas_alpha)}, {"beta", num(meas_beta)}};
            emit({{"config", cfg}, {"value", num(range_value_at_risk(s.column(meas_col - 1), spec))}}, "");
        } else if (*prem) {
            const auto principle = parse_principle(prem_principle);
            const auto s = load_scenarios(prem_in);
            if (prem_col > s.cols())
                throw ValidationError("--col " + std::to_string(prem_col) + " outside 0.." + std::to_string(s.cols()));
            const auto sample = prem_col == 0 ? s.row_sums() : std::vector<double>(s.column(prem_col - 1).begin(), s.column(prem_col - 1).end());
            const json cfg = {{"subcommand", "premium"}, {"version", version}, {"principle", describe(principle)},
                              {"in", input_json(prem_in, s)}, {"col", prem_col}};
            json report = {{"config", cfg}, {"value", num(premium_of(principle, sample))}};
            if (exponential_saturates(principle, sample)) report["warning"] = "gamma * max(sample) > 700; computed with a max shift";
            emit(report, "");
        } else if (*opt) {
            const auto s = load_scenarios(opt_in);
            const auto specs = parse_specs(read_json_arg(opt_specs, "--specs"));
            NetworkProblem p{s, specs, parse_principle(opt_principle)};
            p.cost_of_capital = opt_rcoc;
            if (!opt_incomes.empty()) p.premium_incomes = read_json_arg(opt_incomes, "--incomes").get<std::vector<double>>();
            solver.seed = opt_seed;
            const auto sol = opt_mode == "var" ? solve_var_case(p, solver) : solve_rvar_case(p, solver);
            json cfg = {{"subcommand", "optimize"}, {"version", version}, {"in", input_json(opt_in, s)},
                        {"specs", specs_json(specs)}, {"principle", describe(p.principle)}, {"mode", opt_mode},
                        {"seed", opt_seed}, {"r_coc", num(opt_rcoc)}, {"premium_incomes", nums(p.premium_incomes)},
                        {"grid_points", solver.grid_points}, {"random_starts", solver.random_starts}};
            json report = {{"config", cfg}};
            report.update(solution_json(sol, !opt_no_trace));
            emit(report, opt_out);
        } else if (*dom) {
            const auto specs = parse_specs(read_json_arg(dom_specs, "--specs"));
            const auto principle = parse_principle(dom_principle);
            json cfg = {{"subcommand", "dominate"}, {"version", version}, {"trials", dom_trials}, {"seed", dom_seed},
                        {"specs", specs_json(specs)}, {"principle", describe(principle)}, {"tol", num(dom_tol)}};
            std::optional<CopulaSpec> cop;
            std::optional<ScenarioMatrix> s;
            if (!dom_in.empty()) {
                if (!dom_marginals.empty()) throw ValidationError("dominate: use either --in or --marginals, not both");
                s = load_scenarios(dom_in);
                cfg["in"] = input_json(dom_in, *s);
                if (!dom_copula.empty()) cop = parse_copula(dom_copula, s->cols());
            } else {
                if (dom_marginals.empty() || dom_m == 0) throw ValidationError("dominate: give --in, or --marginals with --m");
                const auto marginals = parse_marginals(dom_marginals);
                cop = parse_copula(dom_copula.empty() ? "independent" : dom_copula, marginals.size());
                s = sample_scenarios(marginals, *cop, dom_m, dom_seed);
                cfg["marginals"] = dom_marginals;
                cfg["m"] = dom_m;
            }
            if (!dom_copula.empty() || dom_in.empty()) cfg["copula"] = dom_copula.empty() ? "independent" : dom_copula;
            const NetworkProblem p{*s, specs, principle};
            const auto rep = dominance_harness(p, dom_trials, dom_seed, dom_tol, cop);
            json viol = json::array();
            for (const auto& v : rep.violations)
                viol.push_back({{"trial", v.trial}, {"objective_f", num(v.objective_f)}, {"objective_layer", num(v.objective_layer)}});
            emit({{"config", cfg},
                  {"construction", rep.construction},
                  {"preconditions_met", rep.preconditions_met},
                  {"notes", rep.notes},
                  {"min_gap", num(rep.min_gap)},
                  {"mean_gap", num(rep.mean_gap)},
                  {"min_relative_gap", num(rep.min_relative_gap)},
                  {"max_rvar_mismatch", num(rep.max_rvar_mismatch)},
                  {"violations", viol}},
                 dom_out);
        } else if (*ord) {
            if (*ord_ex) {
                const auto e = example_2_13();
                json pds = verdict_json(e.pds);
                if (e.pds.witness) pds["witness"]["description"] = relabel(e.pds.witness->description, 'X', 'Y');
                if (e.pds.violation) {
                    const auto& v = *e.pds.violation;
                    pds["violation"] = {{"conditioning", "Y" + std::to_string(v.conditioning + 1)},
                                        {"lower_value", rational_text(v.lower_value)},
                                        {"upper_value", rational_text(v.upper_value)},
                                        {"threshold", rational_text(v.threshold)},
                                        {"prob_at_lower", rational_text(v.prob_at_lower)},
                                        {"prob_at_upper", rational_text(v.prob_at_upper)}};
                }
                emit({{"config", {{"subcommand", "orders example213"}, {"version", version}}},
                      {"y", joint_json(e.y)},
                      {"x", joint_json(e.x)},
                      {"pod", verdict_json(e.pod)},
                      {"pds", pds},
                      {"icx_marginal_1", verdict_json(e.icx_marginal_1)},
                      {"icx_marginal_2", verdict_json(e.icx_marginal_2)},
                      {"icx_sum_reversed", verdict_json(e.icx_sum_reversed)},
                      {"icx_sum_forward", verdict_json(e.icx_sum_forward)},
                      {"cut_marginal_2", verdict_json(e.cut_marginal_2)},
                      {"sums_equal_in_law", e.sums_equal_in_law},
                      {"same_copula", e.same_copula}},
                     "");
            } else {
                const auto laws = read_json_arg(ord_in, "--in");
                json report = {{"config", {{"subcommand", "orders check"}, {"version", version}, {"kind", ord_kind},
                                           {"in", {{"path", ord_in}, {"digest", file_digest(ord_in)}}}}}};
                if (ord_kind == "pod" || ord_kind == "pds") {
                    if (!laws.contains("joint")) throw ValidationError("--kind " + ord_kind + " needs a \"joint\" law in " + ord_in);
                    const auto joint = parse_joint(laws["joint"]);
                    report["joint"] = joint_json(joint);
                    report["verdict"] = ord_kind == "pod" ? verdict_json(check_pod(joint)) : verdict_json(check_pds_bivariate(joint));
                } else {
                    if (!laws.contains("x") || !laws.contains("y"))
                        throw ValidationError("--kind " + ord_kind + " needs laws \"x\" and \"y\" in " + ord_in);
                    const auto x = parse_law(laws["x"], "x");
                    const auto y = parse_law(laws["y"], "y");
                    report["x"] = law_json(x);
                    report["y"] = law_json(y);
                    report["verdict"] = ord_kind == "st"    ? verdict_json(check_st(x, y))
                                        : ord_kind == "icx" ? verdict_json(check_icx(x, y))
                                                            : verdict_json(check_cut_criterion(x, y));
                }
                emit(report, "");
            }
        } else if (*ber) {
            const auto model = parse_mixture(ber_n, ber_z);
            const auto g = parse_distortion(ber_g);
            const auto d = ceding_analysis(model, g, ber_theta);
            json p = json::array();
            for (std::size_t k = 0; k <= model.n; ++k) p.push_back(num(pnk(model, k)));
            emit({{"config", {{"subcommand", "bernoulli"}, {"version", version}, {"n", ber_n}, {"z", ber_z},
                              {"g", g.name()}, {"theta", num(ber_theta)}}},
                  {"pnk", p},
                  {"expected_z", num(d.expected_z)},
                  {"social_threshold", num(d.social_threshold)},
                  {"individual_threshold", num(d.individual_threshold)},
                  {"social", to_string(d.social)},
                  {"individual", to_string(d.individual)},
                  {"mean_identity_residual", num(d.mean_identity_residual)}},
                 "");
        } else if (*sep) {
            const auto marginals = parse_marginals(sep_marginals);
            const std::size_t n = marginals.size();
            PremiumPrinciple principle;
            CopulaSpec cop;
            if (sep_case == "ev") {
                principle = premium::ExpectedValue{sep_param < 0 ? 0.3 : sep_param};
                cop = n > 1 ? CopulaSpec{equicorrelated_gaussian(n, 0.5)} : CopulaSpec{copula::Independent{}};
            } else if (sep_case == "wang") {
                principle = premium::Wang{DistortionFunction::sqrt(), sep_param < 0 ? 0.2 : sep_param};
                cop = copula::Comonotone{};
            } else {
                principle = premium::Exponential{sep_param < 0 ? 0.5 : sep_param};
                cop = copula::Independent{};
            }
            validate(principle);
            const std::size_t m = sep_m ? sep_m : (sep_case == "exp" ? 1000000 : 100000);
            const auto s = sample_scenarios(marginals, cop, m, sep_seed);
            std::vector<CededLossFunction> fs;
            if (!sep_treaties.empty()) {
                for (const auto& t : split(sep_treaties, ';')) fs.push_back(parse_treaty(t));
                if (fs.size() != n)
                    throw ValidationError("--treaties gives " + std::to_string(fs.size()) + " treaties for " + std::to_string(n) + " marginals");
            } else {
                for (std::size_t j = 0; j < n; ++j) {
                    const SortedSample col(s.column(j));
                    const double lo = col.var(0.5), hi = col.var(0.01);
                    fs.push_back(hi > lo ? CededLossFunction({0.0, lo, 0.5 * (lo + hi), hi}, {0.1, 0.6, 1.0, 0.0})
                                         : CededLossFunction::proportional(0.5));
                }
            }
            const auto r = separability_check(principle, s, fs);
            json treaties = json::array();
            for (const auto& f : fs) treaties.push_back(treaty_json(f));
            json cfg = {{"subcommand", "separability"}, {"version", version}, {"case", sep_case}, {"principle", describe(principle)},
                        {"copula", describe(cop)}, {"marginals", sep_marginals}, {"m", m}, {"seed", sep_seed}, {"treaties", treaties}};
            json report = {{"config", cfg},
                           {"combined", num(r.combined)},
                           {"sum_of_parts", num(r.sum_of_parts)},
                           {"relative_difference", num(r.relative_difference)},
                           {"tolerance", num(r.tolerance)},
                           {"holds", r.holds}};
            if (sep_optimum) {
                const auto small = sample_scenarios(marginals, cop, sep_opt_m, sep_seed + 1);
                const auto specs = sep_specs.empty() ? std::vector<RiskMeasureSpec>(n, {0.05, 0.0})
                                                     : parse_specs(read_json_arg(sep_specs, "--specs"));
                const auto o = compare_with_individual_optima({small, specs, principle});
                report["config"]["opt_m"] = sep_opt_m;
                report["config"]["specs"] = specs_json(specs);
                report["optimum"] = {{"network_objective", num(o.network_objective)},
                                     {"sum_of_individual_objectives", num(o.sum_of_individual_objectives)},
                                     {"relative_difference", num(o.relative_difference)}};
            }
            emit(report, "");
        } else if (*acc) {
            const auto all = acceptance::criteria();
            int failed = 0;
            for (std::size_t k = 0; k < all.size(); ++k) {
                if (!acc_only.empty() && std::find(acc_only.begin(), acc_only.end(), static_cast<int>(k + 1)) == acc_only.end())
                    continue;
                acceptance::Outcome o;
                try {
                    o = all[k]();
                } catch (const std::exception& e) {
                    o = {static_cast<int>(k + 1), "error", false, std::string("threw: ") + e.what(), 0.0};
                }
                std::cout << acceptance::line(o) << std::endl;
                if (!o.pass) ++failed;
            }
            return failed ? 1 : 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "reinsnet: error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "reinsnet: error: malformed JSON input (" << e.what() << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "reinsnet: internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
