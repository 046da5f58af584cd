#include "padicwf/scene_io.hpp"

#include "padicwf/toml_subset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace padicwf {

using nlohmann::json;

const char* to_string(SceneKind kind)
{
    switch (kind) {
    case SceneKind::Polynomial:
        return "polynomial";
    case SceneKind::Monomial:
        return "monomial";
    case SceneKind::Charts:
        return "charts";
    case SceneKind::Curve:
        return "curve";
    case SceneKind::Map:
        return "map";
    }
    return "?";
}

AnyScene SceneFile::evaluable() const
{
    if (polynomial)
        return *polynomial;
    if (monomial)
        return *monomial;
    throw Error(ErrorKind::InvalidArgument, std::string("a ") + to_string(kind) + " scene cannot be evaluated");
}

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg)
{
    throw Error(ErrorKind::Parse, where + ": " + msg);
}

// Rejects unknown keys and missing required ones.
void keys(const json& j, const std::string& where, std::initializer_list<const char*> required,
          std::initializer_list<const char*> optional = {})
{
    if (!j.is_object())
        bad(where, "expected an object");
    std::set<std::string> allowed;
    for (const char* k : required) {
        allowed.insert(k);
        if (!j.contains(k))
            bad(where, std::string("missing key '") + k + "'");
    }
    for (const char* k : optional)
        allowed.insert(k);
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k))
            bad(where, "unknown key '" + k + "'");
}

void reject_floats(const json& j, const std::string& where)
{
    if (j.is_number_float())
        bad(where, "float literals are not accepted; write rationals as \"a/b\" strings");
    if (j.is_structured())
        for (const auto& [k, v] : j.items())
            reject_floats(v, where);
}

long long integer(const json& j, const std::string& where)
{
    if (!j.is_number_integer())
        bad(where, "expected an integer");
    return j.get<long long>();
}

int small_int(const json& j, const std::string& where, int lo, int hi)
{
    const long long v = integer(j, where);
    if (v < lo || v > hi)
        bad(where, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
}

std::string text(const json& j, const std::string& where)
{
    if (!j.is_string())
        bad(where, "expected a string");
    return j.get<std::string>();
}

Rational rational(const json& j, const std::string& where)
{
    if (j.is_number_integer())
        return Rational(Integer(j.dump()));
    if (!j.is_string())
        bad(where, "expected a rational as an integer or an \"a/b\" string");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
        bad(where, e.what());
    }
}

const json& array(const json& j, const std::string& where)
{
    if (!j.is_array())
        bad(where, "expected an array");
    return j;
}

std::vector<int> int_list(const json& j, const std::string& where, int lo, int hi)
{
    std::vector<int> out;
    for (const auto& x : array(j, where))
        out.push_back(small_int(x, where, lo, hi));
    return out;
}

RationalVector rational_list(const json& j, const std::string& where)
{
    RationalVector out;
    for (const auto& x : array(j, where))
        out.push_back(rational(x, where));
    return out;
}

Polynomial polynomial(const json& j, const std::map<std::string, int>& vars, int nvars, const std::string& where)
{
    try {
        return parse_polynomial(text(j, where), vars, nvars);
    } catch (const Error& e) {
        bad(where, e.what());
    }
}

std::map<std::string, int> source_variables(int k)
{
    std::map<std::string, int> vars;
    for (int i = 0; i < k; ++i)
        vars["s" + std::to_string(i + 1)] = i;
    if (k == 1)
        vars["s"] = 0;
    return vars;
}

ResolutionChart chart_from_json(const json& j, const std::string& where)
{
    keys(j, where, {"id", "l", "r"}, {"dprime", "tau", "direction", "glue"});
    ResolutionChart c;
    c.id = text(j["id"], where + ".id");
    c.l = int_list(j["l"], where + ".l", 0, 64);
    c.r = int_list(j["r"], where + ".r", -64, 64);
    if (j.contains("dprime")) {
        for (const auto& x : array(j["dprime"], where + ".dprime")) {
            if (!x.is_boolean())
                bad(where + ".dprime", "expected booleans");
            c.dprime.push_back(x.get<bool>());
        }
    } else {
        c.dprime.assign(c.l.size(), false);
    }
    if (j.contains("tau"))
        c.tau = int_list(j["tau"], where + ".tau", -1000, 1000);
    else
        for (int i = 0; i < c.n(); ++i)
            c.tau.push_back(i);
    if (j.contains("direction"))
        c.direction = rational_list(j["direction"], where + ".direction");
    if (j.contains("glue"))
        c.glue = text(j["glue"], where + ".glue");
    return c;
}

BoundSpec bound_from_json(const json& j, const std::string& where, bool with_kind)
{
    if (with_kind)
        keys(j, where, {"kind", "d", "q", "charts"});
    else
        keys(j, where, {"d", "q", "charts"});
    BoundSpec b;
    b.d = small_int(j["d"], where + ".d", 1, 16);
    b.q = small_int(j["q"], where + ".q", 0, 16);
    std::size_t i = 0;
    for (const auto& c : array(j["charts"], where + ".charts"))
        b.charts.push_back(chart_from_json(c, where + ".charts[" + std::to_string(i++) + "]"));
    // tau defaults to the identity, which only fits when n == q.
    for (std::size_t k = 0; k < b.charts.size(); ++k) {
        const auto& c = b.charts[k];
        if (!j["charts"][k].contains("tau") && c.n() != b.q)
            bad(where + ".charts[" + std::to_string(k) + "]", "tau is required when the chart dimension differs from q");
    }
    return b;
}

ProbePlanEntry probe_from_json(const json& j, const std::string& where, const PrimeContext& ctx, int dim)
{
    keys(j, where, {"id", "xi"}, {"cube", "k_max", "kind", "twist_scale"});
    ProbePlanEntry e;
    e.id = text(j["id"], where + ".id");
    e.xi = rational_list(j["xi"], where + ".xi");
    e.cube = parse_cube(j.contains("cube") ? text(j["cube"], where + ".cube") : "0", dim, ctx);
    if (j.contains("k_max"))
        e.k_max = small_int(j["k_max"], where + ".k_max", 1, 64);
    if (j.contains("kind")) {
        const std::string k = text(j["kind"], where + ".kind");
        if (k == "ray")
            e.kind = ProbeKind::Ray;
        else if (k == "constancy")
            e.kind = ProbeKind::Constancy;
        else
            bad(where + ".kind", "expected \"ray\" or \"constancy\"");
    }
    if (j.contains("twist_scale"))
        e.twist_scale = rational(j["twist_scale"], where + ".twist_scale");
    return e;
}

}  // namespace

SceneFile scene_from_json(const json& j)
{
    reject_floats(j, "scene file");
    keys(j, "scene file", {"format_version", "prime", "max_level", "scene"}, {"probes", "output", "bound"});
    SceneFile f;
    f.format_version = small_int(j["format_version"], "format_version", 0, 1000);
    if (f.format_version != kSceneFormatVersion)
        bad("format_version", "unsupported version " + std::to_string(f.format_version) + " (expected " +
                                  std::to_string(kSceneFormatVersion) + ")");
    f.prime = small_int(j["prime"], "prime", 2, 1 << 20);
    if (!is_prime(f.prime))
        bad("prime", std::to_string(f.prime) + " is not prime");
    f.max_level = small_int(j["max_level"], "max_level", 1, 62);
    const PrimeContext ctx = f.context();

    const json& s = j["scene"];
    if (!s.is_object() || !s.contains("kind"))
        bad("scene", "expected an object with a \"kind\"");
    const std::string kind = text(s["kind"], "scene.kind");
    int dim = 0;
    if (kind == "polynomial") {
        keys(s, "scene", {"kind", "n", "d", "phi"}, {"r", "twist"});
        f.kind = SceneKind::Polynomial;
        PolynomialScene p;
        p.n = small_int(s["n"], "scene.n", 1, 8);
        p.d = small_int(s["d"], "scene.d", 1, 8);
        const auto vars = chart_variables(p.n);
        for (const auto& phi : array(s["phi"], "scene.phi"))
            p.phi.push_back(polynomial(phi, vars, p.n, "scene.phi"));
        if (static_cast<int>(p.phi.size()) != p.d)
            bad("scene.phi", "expected d polynomials");
        p.r = s.contains("r") ? int_list(s["r"], "scene.r", 0, 64) : std::vector<int>(static_cast<std::size_t>(p.n), 0);
        if (static_cast<int>(p.r.size()) != p.n)
            bad("scene.r", "expected n exponents");
        if (s.contains("twist"))
            p.twist = polynomial(s["twist"], vars, p.n, "scene.twist");
        dim = p.n;
        f.polynomial = std::move(p);
    } else if (kind == "monomial") {
        keys(s, "scene", {"kind", "l", "r"});
        f.kind = SceneKind::Monomial;
        MonomialScene m{int_list(s["l"], "scene.l", 0, 64), int_list(s["r"], "scene.r", -64, 64)};
        try {
            m.validate();
        } catch (const Error& e) {
            bad("scene", e.what());
        }
        dim = m.n();
        f.monomial = std::move(m);
    } else if (kind == "charts") {
        f.kind = SceneKind::Charts;
        f.bound = bound_from_json(s, "scene", true);
    } else if (kind == "curve") {
        keys(s, "scene", {"kind", "d", "param"});
        f.kind = SceneKind::Curve;
        CurveScene c;
        c.d = small_int(s["d"], "scene.d", 1, 16);
        for (const auto& x : array(s["param"], "scene.param"))
            c.param.push_back(polynomial(x, {{"s", 0}}, 1, "scene.param"));
        f.curve = std::move(c);
    } else if (kind == "map") {
        keys(s, "scene", {"kind", "coordinates", "source_dim", "pieces"}, {"sample_budget", "seed"});
        f.kind = SceneKind::Map;
        MapSpec m;
        m.coordinates = small_int(s["coordinates"], "scene.coordinates", 1, 16);
        const int k = small_int(s["source_dim"], "scene.source_dim", 1, 8);
        for (const auto& piece : array(s["pieces"], "scene.pieces")) {
            PolynomialMap pm{k, {}};
            for (const auto& x : array(piece, "scene.pieces"))
                pm.components.push_back(polynomial(x, source_variables(k), k, "scene.pieces"));
            m.pieces.push_back(std::move(pm));
        }
        if (s.contains("sample_budget"))
            m.sample_budget = small_int(s["sample_budget"], "scene.sample_budget", 0, 1 << 30);
        if (s.contains("seed"))
            m.seed = static_cast<std::uint64_t>(integer(s["seed"], "scene.seed"));
        f.map = std::move(m);
    } else {
        bad("scene.kind", "unknown kind '" + kind + "'");
    }

    if (j.contains("bound")) {
        if (f.bound)
            bad("bound", "a charts scene already carries its bound");
        f.bound = bound_from_json(j["bound"], "bound", false);
    }
    if (j.contains("probes")) {
        if (dim == 0)
            bad("probes", std::string("a ") + kind + " scene has nothing to probe");
        std::size_t i = 0;
        for (const auto& p : array(j["probes"], "probes"))
            f.probes.push_back(probe_from_json(p, "probes[" + std::to_string(i++) + "]", ctx, dim));
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        keys(o, "output", {"path"}, {"format"});
        OutputSpec out;
        out.path = text(o["path"], "output.path");
        if (o.contains("format"))
            out.format = text(o["format"], "output.format");
        if (out.format != "json" && out.format != "csv")
            bad("output.format", "expected \"json\" or \"csv\"");
        f.output = std::move(out);
    }
    return f;
}

SceneFile load_scene_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Parse, "cannot open scene file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string content = buf.str();
    json j;
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0) {
        j = parse_toml_subset(content);
    } else {
        try {
            j = json::parse(content);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::Parse, std::string("json: ") + e.what());
        }
    }
    return scene_from_json(j);
}

ResidueCube parse_cube(const std::string& text, int dim, const PrimeContext& ctx)
{
    const auto colon = text.find(':');
    std::vector<std::int64_t> base;
    int level = 0;
    try {
        std::size_t used = 0;
        const std::string level_text = text.substr(0, colon);
        level = std::stoi(level_text, &used);
        if (used != level_text.size() || level < 0)
            throw std::invalid_argument("level");
        if (colon != std::string::npos) {
            std::stringstream parts(text.substr(colon + 1));
            std::string item;
            while (std::getline(parts, item, ',')) {
                const long long b = std::stoll(item, &used);
                if (used != item.size())
                    throw std::invalid_argument("base");
                base.push_back(b);
            }
        } else {
            base.assign(static_cast<std::size_t>(dim), 0);
        }
    } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, "cube '" + text + "' is not of the form level:b1,b2,...");
    }
    if (static_cast<int>(base.size()) != dim)
        throw Error(ErrorKind::Parse, "cube '" + text + "' needs " + std::to_string(dim) + " base coordinates");
    try {
        ctx.check_level(level);
        for (const auto b : base)
            if (b < 0 || b >= ctx.power(level))
                throw Error(ErrorKind::Parse, "base coordinates must lie in [0, p^level)");
        return ResidueCube(base, level, ctx);
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, "cube '" + text + "': " + e.what());
    }
}

RationalVector parse_rational_list(const std::string& text)
{
    RationalVector out;
    std::stringstream parts(text);
    std::string item;
    while (std::getline(parts, item, ','))
        out.push_back(parse_rational(item));
    if (out.empty())
        throw Error(ErrorKind::Parse, "empty rational list");
    return out;
}

}  // namespace padicwf
