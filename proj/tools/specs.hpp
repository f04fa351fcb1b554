#pragma once

// Parsers for the spec strings accepted on the command line and the JSON
// helpers shared by every report.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "reinsnet/reinsnet.hpp"

namespace reinsnet::cli {

using json = nlohmann::ordered_json;

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& text, const std::string& what) {
    const auto t = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ValidationError(what + ": '" + text + "' is not a number");
    return v;
}

inline std::vector<double> parse_numbers(const std::string& text, char sep, const std::string& what) {
    std::vector<double> out;
    for (const auto& f : split(text, sep)) out.push_back(parse_number(f, what));
    return out;
}

// ---------------------------------------------------------------------------
// marginals: "lognormal:0,1;pareto:3,2;uniform:0,5;bernoulli:0.3;point:1;empirical:1,2,5"
// ---------------------------------------------------------------------------

inline Marginal parse_marginal(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = trim(spec.substr(0, colon));
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    const auto nums = args.empty() ? std::vector<double>{} : parse_numbers(args, ',', "marginal " + name);
    auto need = [&](std::size_t k, const char* form) {
        if (nums.size() != k) throw ValidationError("marginal '" + spec + "': expected " + form);
    };
    Marginal m;
    if (name == "lognormal") { need(2, "lognormal:mu,sigma"); m = marginal::LogNormal{nums[0], nums[1]}; }
    else if (name == "pareto") { need(2, "pareto:shape,scale"); m = marginal::Pareto{nums[0], nums[1]}; }
    else if (name == "uniform") { need(2, "uniform:lo,hi"); m = marginal::Uniform{nums[0], nums[1]}; }
    else if (name == "bernoulli") { need(1, "bernoulli:p"); m = marginal::Bernoulli{nums[0]}; }
    else if (name == "point") { need(1, "point:value"); m = marginal::PointMass{nums[0]}; }
    else if (name == "empirical") {
        if (nums.empty()) throw ValidationError("marginal '" + spec + "': expected empirical:v1,v2,...");
        m = marginal::Empirical{nums};
    } else {
        throw ValidationError("unknown marginal '" + name + "' (lognormal, pareto, uniform, bernoulli, point, empirical)");
    }
    validate(m);
    return m;
}

/// ';'-separated list; "spec*k" repeats a marginal k times.
inline std::vector<Marginal> parse_marginals(const std::string& spec) {
    std::vector<Marginal> out;
    for (const auto& part : split(spec, ';')) {
        auto p = trim(part);
        if (p.empty()) continue;
        std::size_t repeat = 1;
        if (const auto star = p.rfind('*'); star != std::string::npos) {
            const double r = parse_number(p.substr(star + 1), "marginal repeat count");
            if (r < 1 || r != std::floor(r)) throw ValidationError("marginal repeat count must be a positive integer");
            repeat = static_cast<std::size_t>(r);
            p = p.substr(0, star);
        }
        const auto m = parse_marginal(p);
        for (std::size_t k = 0; k < repeat; ++k) out.push_back(m);
    }
    if (out.empty()) throw ValidationError("no marginals given");
    return out;
}

// ---------------------------------------------------------------------------
// copulas: independent | comonotone | gaussian:rho | gaussian:[[1,r],[r,1]] | clayton:theta
// ---------------------------------------------------------------------------

inline CopulaSpec parse_copula(const std::string& spec, std::size_t n) {
    const auto colon = spec.find(':');
    const std::string name = trim(spec.substr(0, colon));
    const std::string arg = colon == std::string::npos ? "" : trim(spec.substr(colon + 1));
    CopulaSpec c;
    if (name == "independent") c = copula::Independent{};
    else if (name == "comonotone") c = copula::Comonotone{};
    else if (name == "gaussian") {
        if (arg.empty()) throw ValidationError("copula gaussian needs a correlation: gaussian:rho or gaussian:[[...]]");
        if (arg.front() == '[') {
            std::vector<std::vector<double>> r;
            try {
                r = json::parse(arg).get<std::vector<std::vector<double>>>();
            } catch (const json::exception&) {
                throw ValidationError("copula gaussian: correlation matrix is not a JSON array of arrays");
            }
            c = copula::Gaussian{std::move(r)};
        } else {
            c = equicorrelated_gaussian(n, parse_number(arg, "gaussian correlation"));
        }
    } else if (name == "clayton") {
        c = copula::Clayton{parse_number(arg, "clayton theta")};
    } else {
        throw ValidationError("unknown copula '" + name + "' (independent, comonotone, gaussian, clayton)");
    }
    validate(c, n);
    return c;
}

// ---------------------------------------------------------------------------
// distortions and premium principles
// ---------------------------------------------------------------------------

/// id | sqrt | pow=r | dual=r | wangt=lambda
inline DistortionFunction parse_distortion(const std::string& spec) {
    const auto s = trim(spec);
    const auto eq = s.find('=');
    const std::string name = s.substr(0, eq);
    if (eq == std::string::npos) {
        if (name == "id") return DistortionFunction::identity();
        if (name == "sqrt") return DistortionFunction::sqrt();
    } else {
        const double r = parse_number(s.substr(eq + 1), "distortion parameter");
        if (name == "pow") return DistortionFunction::power(r);
        if (name == "dual") return DistortionFunction::dual_power(r);
        if (name == "wangt") return DistortionFunction::wang_transform(r);
    }
    throw ValidationError("unknown distortion '" + spec + "' (id, sqrt, pow=r, dual=r, wangt=lambda)");
}

/// ev:theta | wang:<distortion>:theta | exp:gamma
inline PremiumPrinciple parse_principle(const std::string& spec) {
    const auto parts = split(spec, ':');
    const auto& kind = parts.front();
    PremiumPrinciple p;
    if (kind == "ev" && parts.size() == 2) {
        p = premium::ExpectedValue{parse_number(parts[1], "ev theta")};
    } else if (kind == "wang" && parts.size() == 3) {
        p = premium::Wang{parse_distortion(parts[1]), parse_number(parts[2], "wang theta")};
    } else if (kind == "exp" && parts.size() == 2) {
        p = premium::Exponential{parse_number(parts[1], "exp gamma")};
    } else {
        throw ValidationError("malformed principle '" + spec + "' (expected ev:theta, wang:<g>:theta or exp:gamma)");
    }
    validate(p);
    return p;
}

// ---------------------------------------------------------------------------
// treaties: layer:a=2,b=5 | stoploss:a=2 | pwl:knots=0,1,3,slopes=0,0.5,1
// ---------------------------------------------------------------------------

inline CededLossFunction parse_treaty(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = trim(spec.substr(0, colon));
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "layer" || kind == "stoploss") {
        double a = 0.0, b = unbounded;
        bool has_a = false, has_b = false;
        for (const auto& kv : split(body, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ValidationError("treaty '" + spec + "': expected key=value pairs");
            const auto key = trim(kv.substr(0, eq));
            const double v = parse_number(kv.substr(eq + 1), "treaty " + key);
            if (key == "a") { a = v; has_a = true; }
            else if (key == "b" && kind == "layer") { b = v; has_b = true; }
            else throw ValidationError("treaty '" + spec + "': unknown key '" + key + "'");
        }
        if (!has_a || (kind == "layer" && !has_b))
            throw ValidationError("treaty '" + spec + "': expected " + (kind == "layer" ? "layer:a=<a>,b=<b>" : "stoploss:a=<a>"));
        return CededLossFunction::from_layer(LayerTreaty(a, b));
    }
    if (kind == "pwl") {
        const auto k = body.find("knots=");
        const auto s = body.find(",slopes=");
        if (k != 0 || s == std::string::npos)
            throw ValidationError("treaty '" + spec + "': expected pwl:knots=k0,k1,...,slopes=s0,s1,...");
        return {parse_numbers(body.substr(6, s - 6), ',', "pwl knot"), parse_numbers(body.substr(s + 8), ',', "pwl slope")};
    }
    throw ValidationError("unknown treaty '" + kind + "' (layer, stoploss, pwl)");
}

// ---------------------------------------------------------------------------
// Bernoulli mixture factor: "0.1,0.9:0.5,0.5"
// ---------------------------------------------------------------------------

inline BernoulliMixtureModel parse_mixture(std::size_t n, const std::string& z) {
    const auto parts = split(z, ':');
    if (parts.size() != 2) throw ValidationError("--z must look like <support>:<probs>, e.g. 0.1,0.9:0.5,0.5");
    BernoulliMixtureModel m{n, parse_numbers(parts[0], ',', "z support"), parse_numbers(parts[1], ',', "z probability")};
    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// risk-measure specs: JSON list of {"alpha": a, "beta": b}, inline or in a file
// ---------------------------------------------------------------------------

inline json read_json_arg(const std::string& arg, const std::string& what) {
    const auto t = trim(arg);
    std::string text = t;
    if (!t.empty() && t.front() != '[' && t.front() != '{') {
        std::ifstream in(t);
        if (!in) throw ValidationError(what + ": '" + t + "' is neither inline JSON nor a readable file");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(what + ": invalid JSON (" + std::string(e.what()) + ")");
    }
}

inline std::vector<RiskMeasureSpec> parse_specs(const json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("--specs must be a non-empty JSON array of {\"alpha\":..,\"beta\":..}");
    std::vector<RiskMeasureSpec> out;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("alpha") || !e["alpha"].is_number())
            throw ValidationError("--specs: every entry needs a numeric \"alpha\"");
        RiskMeasureSpec s{e["alpha"].get<double>(), e.value("beta", 0.0)};
        s.validate();
        out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON output
// ---------------------------------------------------------------------------

/// Rounds to 12 significant digits so that reports are byte-stable.
inline json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

inline json nums(std::span<const double> v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

inline json treaty_json(const LayerTreaty& t) {
    json j;
    j["type"] = t.stop_loss() ? "stoploss" : "layer";
    j["a"] = num(t.deductible);
    if (!t.stop_loss()) j["b"] = num(t.bound);
    return j;
}

inline json treaty_json(const CededLossFunction& f) {
    json j;
    j["type"] = "pwl";
    j["knots"] = nums(f.knots());
    j["slopes"] = nums(f.slopes());
    return j;
}

inline json spec_json(const RiskMeasureSpec& s) { return {{"alpha", num(s.alpha)}, {"beta", num(s.beta)}}; }

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// FNV-1a of a file's bytes, echoed so a report pins the exact input used.
inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace reinsnet::cli
