#include "padicwf/geometry.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace padicwf {

using nlohmann::json;

Subspace Subspace::zero(int d)
{
    Subspace s;
    s.d_ = d;
    return s;
}

Subspace Subspace::full(int d)
{
    std::vector<RationalVector> rows;
    for (int i = 0; i < d; ++i) {
        RationalVector e(static_cast<std::size_t>(d), Rational(0));
        e[static_cast<std::size_t>(i)] = 1;
        rows.push_back(std::move(e));
    }
    return span(d, rows);
}

Subspace Subspace::span(int d, const std::vector<RationalVector>& vectors)
{
    std::vector<RationalVector> rows;
    for (const auto& v : vectors) {
        if (static_cast<int>(v.size()) != d)
            throw Error(ErrorKind::DimensionMismatch, "vector of length " + std::to_string(v.size()) +
                                                          " in a subspace of Q^" + std::to_string(d));
        rows.push_back(v);
    }
    // Reduced row echelon form.
    std::size_t rank = 0;
    for (int col = 0; col < d && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][static_cast<std::size_t>(col)] == 0)
            ++pivot;
        if (pivot == rows.size())
            continue;
        std::swap(rows[rank], rows[pivot]);
        const Rational lead = rows[rank][static_cast<std::size_t>(col)];
        for (auto& x : rows[rank])
            x /= lead;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][static_cast<std::size_t>(col)] == 0)
                continue;
            const Rational f = rows[i][static_cast<std::size_t>(col)];
            for (int c = 0; c < d; ++c)
                rows[i][static_cast<std::size_t>(c)] -= f * rows[rank][static_cast<std::size_t>(c)];
        }
        ++rank;
    }
    rows.resize(rank);
    Subspace s;
    s.d_ = d;
    s.basis_ = std::move(rows);
    return s;
}

namespace {

int pivot_of(const RationalVector& row)
{
    for (std::size_t c = 0; c < row.size(); ++c)
        if (row[c] != 0)
            return static_cast<int>(c);
    return -1;
}

}  // namespace

Subspace Subspace::perp() const
{
    std::vector<int> pivots;
    for (const auto& row : basis_)
        pivots.push_back(pivot_of(row));
    std::vector<RationalVector> null;
    for (int f = 0; f < d_; ++f) {
        if (std::find(pivots.begin(), pivots.end(), f) != pivots.end())
            continue;
        RationalVector v(static_cast<std::size_t>(d_), Rational(0));
        v[static_cast<std::size_t>(f)] = 1;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            v[static_cast<std::size_t>(pivots[i])] = -basis_[i][static_cast<std::size_t>(f)];
        null.push_back(std::move(v));
    }
    return span(d_, null);
}

bool Subspace::contains(const RationalVector& v) const
{
    if (static_cast<int>(v.size()) != d_)
        throw Error(ErrorKind::DimensionMismatch, "vector length differs from subspace ambient dimension");
    RationalVector r = v;
    for (const auto& row : basis_) {
        const int c = pivot_of(row);
        const Rational f = r[static_cast<std::size_t>(c)];
        if (f == 0)
            continue;
        for (int k = 0; k < d_; ++k)
            r[static_cast<std::size_t>(k)] -= f * row[static_cast<std::size_t>(k)];
    }
    return std::all_of(r.begin(), r.end(), [](const Rational& x) { return x == 0; });
}

bool Subspace::contains(const Subspace& other) const
{
    if (other.d_ != d_)
        return false;
    return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const RationalVector& v) { return contains(v); });
}

bool operator<(const Subspace& a, const Subspace& b)
{
    if (a.d_ != b.d_)
        return a.d_ < b.d_;
    if (a.dim() != b.dim())
        return a.dim() < b.dim();
    return a.basis_ < b.basis_;
}

const char* to_string(WBlockRule rule)
{
    switch (rule) {
    case WBlockRule::ZeroSection:
        return "ZeroSection";
    case WBlockRule::FullFiber:
        return "FullFiber";
    case WBlockRule::Subbundle:
        return "Subbundle";
    }
    return "?";
}

WBlockRule rule_of(const Subspace& s)
{
    if (s.is_zero())
        return WBlockRule::ZeroSection;
    if (s.is_full())
        return WBlockRule::FullFiber;
    return WBlockRule::Subbundle;
}

namespace {

bool subset(const std::vector<int>& a, const std::vector<int>& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void sort_unique(std::vector<int>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

ConormalComponent ConormalComponent::conormal_of(std::vector<int> zero_set, Subspace fiber_base)
{
    sort_unique(zero_set);
    ConormalComponent c;
    c.zero_set = zero_set;
    c.conormal_support = std::move(zero_set);
    c.conormal_fiber = fiber_base.perp();
    c.fiber_base = std::move(fiber_base);
    return c;
}

bool ConormalComponent::contains(const ConormalComponent& other) const
{
    return subset(zero_set, other.zero_set) && fiber_base.contains(other.fiber_base) &&
           subset(other.conormal_support, conormal_support) && conormal_fiber.contains(other.conormal_fiber);
}

bool operator<(const ConormalComponent& a, const ConormalComponent& b)
{
    if (a.zero_set != b.zero_set)
        return a.zero_set < b.zero_set;
    if (!(a.fiber_base == b.fiber_base))
        return a.fiber_base < b.fiber_base;
    if (a.conormal_support != b.conormal_support)
        return a.conormal_support < b.conormal_support;
    return a.conormal_fiber < b.conormal_fiber;
}

void ConicSetDescriptor::canonicalize()
{
    for (auto& c : components) {
        sort_unique(c.zero_set);
        sort_unique(c.conormal_support);
    }
    std::sort(components.begin(), components.end());
    components.erase(std::unique(components.begin(), components.end()), components.end());
    std::vector<ConormalComponent> kept;
    for (std::size_t i = 0; i < components.size(); ++i) {
        bool covered = false;
        for (std::size_t j = 0; j < components.size() && !covered; ++j)
            covered = j != i && components[j].contains(components[i]);
        if (!covered)
            kept.push_back(components[i]);
    }
    components = std::move(kept);
}

ConicSetDescriptor crit_of_map(const AmbientSpec& ambient, const std::vector<Stratum>& strata)
{
    ConicSetDescriptor desc{ambient, {}};
    desc.components.push_back(ConormalComponent::conormal_of({}, Subspace::full(ambient.fiber_dim)));
    for (const auto& s : strata) {
        std::set<int> seen;
        for (int i : s.zero_set) {
            if (i < 0 || i >= ambient.y_dim)
                throw Error(ErrorKind::MalformedStratum, "stratum index " + std::to_string(i) + " outside the base");
            if (!seen.insert(i).second)
                throw Error(ErrorKind::MalformedStratum, "stratum index " + std::to_string(i) + " repeated");
        }
        Subspace e;
        switch (s.rule) {
        case WBlockRule::ZeroSection:
            e = Subspace::zero(ambient.fiber_dim);
            break;
        case WBlockRule::FullFiber:
            e = Subspace::full(ambient.fiber_dim);
            break;
        case WBlockRule::Subbundle:
            if (s.subbundle.ambient_dim() != ambient.fiber_dim)
                throw Error(ErrorKind::MalformedStratum, "subbundle lives in the wrong fiber dimension");
            e = s.subbundle;
            break;
        }
        desc.components.push_back(ConormalComponent::conormal_of(s.zero_set, e));
    }
    desc.canonicalize();
    return desc;
}

ConicSetDescriptor symplectic_swap(const ConicSetDescriptor& desc)
{
    ConicSetDescriptor out = desc;
    out.ambient.fiber = desc.ambient.fiber == FiberKind::W ? FiberKind::WDual : FiberKind::W;
    for (auto& c : out.components)
        std::swap(c.fiber_base, c.conormal_fiber);
    out.canonicalize();
    return out;
}

CoordinateProjection CoordinateProjection::identity(int n)
{
    CoordinateProjection p{n, {}};
    for (int i = 0; i < n; ++i)
        p.kept.push_back(i);
    return p;
}

ConicSetDescriptor pushforward_coordinate(const ConicSetDescriptor& desc, const CoordinateProjection& proj)
{
    if (proj.source_dim != desc.ambient.y_dim)
        throw Error(ErrorKind::UnsupportedMap, "projection source dimension differs from the descriptor base");
    std::vector<int> new_index(static_cast<std::size_t>(proj.source_dim), -1);
    for (std::size_t k = 0; k < proj.kept.size(); ++k) {
        const int i = proj.kept[k];
        if (i < 0 || i >= proj.source_dim || new_index[static_cast<std::size_t>(i)] != -1)
            throw Error(ErrorKind::UnsupportedMap, "not a coordinate projection: bad kept index " + std::to_string(i));
        new_index[static_cast<std::size_t>(i)] = static_cast<int>(k);
    }
    auto remap = [&](const std::vector<int>& s) {
        std::vector<int> out;
        for (int i : s)
            if (new_index[static_cast<std::size_t>(i)] >= 0)
                out.push_back(new_index[static_cast<std::size_t>(i)]);
        return out;
    };
    ConicSetDescriptor out{desc.ambient, {}};
    out.ambient.y_dim = static_cast<int>(proj.kept.size());
    for (const auto& c : desc.components)
        out.components.push_back({remap(c.zero_set), c.fiber_base, remap(c.conormal_support), c.conormal_fiber});
    out.canonicalize();
    return out;
}

bool is_well_formed(const ConicSetDescriptor& desc)
{
    const auto& a = desc.ambient;
    auto indices_ok = [&](const std::vector<int>& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] < 0 || s[i] >= a.y_dim)
                return false;
            if (i > 0 && s[i - 1] >= s[i])
                return false;
        }
        return true;
    };
    for (const auto& c : desc.components)
        if (!indices_ok(c.zero_set) || !indices_ok(c.conormal_support) || c.fiber_base.ambient_dim() != a.fiber_dim ||
            c.conormal_fiber.ambient_dim() != a.fiber_dim)
            return false;
    return a.y_dim >= 0 && a.fiber_dim >= 0;
}

// Covector sets are linear spaces, hence stable under scaling.
bool is_conic(const ConicSetDescriptor& desc)
{
    return is_well_formed(desc);
}

// Base sets in the fiber block are linear subspaces, hence stable under homotheties.
bool is_homothety_stable(const ConicSetDescriptor& desc)
{
    return is_well_formed(desc);
}

bool isotropic_check(const ConicSetDescriptor& desc)
{
    if (!is_well_formed(desc))
        return false;
    for (const auto& c : desc.components) {
        if (!subset(c.conormal_support, c.zero_set))
            return false;
        if (!c.fiber_base.perp().contains(c.conormal_fiber))
            return false;
        const int dimension = (desc.ambient.y_dim - static_cast<int>(c.zero_set.size())) + c.fiber_base.dim() +
                              static_cast<int>(c.conormal_support.size()) + c.conormal_fiber.dim();
        if (dimension > desc.ambient.y_dim + desc.ambient.fiber_dim)
            return false;
    }
    return true;
}

bool is_lagrangian(const ConicSetDescriptor& desc)
{
    if (!isotropic_check(desc))
        return false;
    for (const auto& c : desc.components) {
        const int dimension = (desc.ambient.y_dim - static_cast<int>(c.zero_set.size())) + c.fiber_base.dim() +
                              static_cast<int>(c.conormal_support.size()) + c.conormal_fiber.dim();
        if (dimension != desc.ambient.y_dim + desc.ambient.fiber_dim)
            return false;
    }
    return true;
}

namespace {

void check_point_shape(const AmbientSpec& a, const RationalVector& y, const RationalVector& w)
{
    if (static_cast<int>(y.size()) != a.y_dim || static_cast<int>(w.size()) != a.fiber_dim)
        throw Error(ErrorKind::DimensionMismatch, "point does not match the ambient dimensions");
}

bool on_base(const ConormalComponent& c, const RationalVector& y, const RationalVector& w)
{
    for (int i : c.zero_set)
        if (y[static_cast<std::size_t>(i)] != 0)
            return false;
    return c.fiber_base.contains(w);
}

}  // namespace

bool membership(const ConicSetDescriptor& desc, const CotangentPoint& point)
{
    check_point_shape(desc.ambient, point.y, point.w);
    check_point_shape(desc.ambient, point.eta, point.phi);
    for (const auto& c : desc.components) {
        if (!on_base(c, point.y, point.w))
            continue;
        bool eta_ok = true;
        for (int i = 0; i < desc.ambient.y_dim && eta_ok; ++i)
            if (point.eta[static_cast<std::size_t>(i)] != 0 &&
                !std::binary_search(c.conormal_support.begin(), c.conormal_support.end(), i))
                eta_ok = false;
        if (eta_ok && c.conormal_fiber.contains(point.phi))
            return true;
    }
    return false;
}

bool singular_fiber_nonempty(const ConicSetDescriptor& desc, const RationalVector& y, const RationalVector& w)
{
    check_point_shape(desc.ambient, y, w);
    for (const auto& c : desc.components)
        if (on_base(c, y, w) && (!c.conormal_support.empty() || !c.conormal_fiber.is_zero()))
            return true;
    return false;
}

std::string rational_to_string(const Rational& q)
{
    return q.get_str();
}

Rational parse_rational(const std::string& text)
{
    static const std::regex pattern(R"(\s*([+-]?[0-9]+)(?:\s*/\s*([0-9]+))?\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern))
        throw Error(ErrorKind::Parse, "not an exact rational literal: '" + text + "'");
    Integer num(m[1].str()[0] == '+' ? m[1].str().substr(1) : m[1].str());
    Integer den = m[2].matched ? Integer(m[2].str()) : Integer(1);
    if (den == 0)
        throw Error(ErrorKind::Parse, "zero denominator in '" + text + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

namespace {

json subspace_to_json(const Subspace& s)
{
    json rows = json::array();
    for (const auto& row : s.basis()) {
        json r = json::array();
        for (const auto& x : row)
            r.push_back(rational_to_string(x));
        rows.push_back(r);
    }
    return rows;
}

[[noreturn]] void schema_error(const std::string& msg)
{
    throw Error(ErrorKind::Parse, "descriptor: " + msg);
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where)
{
    if (!j.is_object())
        schema_error(where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; }))
            schema_error("unknown key '" + k + "' in " + where);
    for (const char* k : keys)
        if (!j.contains(k))
            schema_error("missing key '" + std::string(k) + "' in " + where);
}

int get_int(const json& j, const std::string& where)
{
    if (!j.is_number_integer())
        schema_error(where + " must be an integer");
    return j.get<int>();
}

std::vector<int> get_indices(const json& j, const std::string& where)
{
    if (!j.is_array())
        schema_error(where + " must be an array");
    std::vector<int> out;
    for (const auto& x : j)
        out.push_back(get_int(x, where));
    return out;
}

Rational get_rational(const json& j, const std::string& where)
{
    if (j.is_number_integer())
        return Rational(Integer(j.dump()));
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_float())
        schema_error(where + ": float literals are not accepted");
    schema_error(where + " must be a rational string or an integer");
}

Subspace subspace_from_json(const json& rule, const json& rows, int d, const std::string& where)
{
    if (!rule.is_string())
        schema_error(where + " rule must be a string");
    const std::string name = rule.get<std::string>();
    if (!rows.is_array())
        schema_error(where + " basis must be an array");
    std::vector<RationalVector> vecs;
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            schema_error(where + " basis rows must have length " + std::to_string(d));
        RationalVector v;
        for (const auto& x : row)
            v.push_back(get_rational(x, where));
        vecs.push_back(std::move(v));
    }
    Subspace s = Subspace::span(d, vecs);
    if (name != to_string(rule_of(s)))
        schema_error(where + " rule '" + name + "' does not match its basis");
    return s;
}

}  // namespace

json to_json(const ConicSetDescriptor& desc)
{
    json comps = json::array();
    for (const auto& c : desc.components) {
        json jc;
        jc["zero_set"] = c.zero_set;
        jc["w_block_rule"] = to_string(c.w_block_rule());
        jc["fiber_base"] = subspace_to_json(c.fiber_base);
        jc["conormal_support"] = c.conormal_support;
        jc["conormal_rule"] = to_string(rule_of(c.conormal_fiber));
        jc["conormal_fiber"] = subspace_to_json(c.conormal_fiber);
        comps.push_back(jc);
    }
    json j;
    j["ambient"] = {{"y_dim", desc.ambient.y_dim},
                    {"fiber_dim", desc.ambient.fiber_dim},
                    {"fiber", desc.ambient.fiber == FiberKind::W ? "W" : "W*"}};
    j["components"] = comps;
    return j;
}

ConicSetDescriptor descriptor_from_json(const json& j)
{
    only_keys(j, {"ambient", "components"}, "descriptor");
    const json& a = j["ambient"];
    only_keys(a, {"y_dim", "fiber_dim", "fiber"}, "ambient");
    ConicSetDescriptor desc;
    desc.ambient.y_dim = get_int(a["y_dim"], "y_dim");
    desc.ambient.fiber_dim = get_int(a["fiber_dim"], "fiber_dim");
    if (a["fiber"] == "W")
        desc.ambient.fiber = FiberKind::W;
    else if (a["fiber"] == "W*")
        desc.ambient.fiber = FiberKind::WDual;
    else
        schema_error("fiber must be \"W\" or \"W*\"");
    if (desc.ambient.y_dim < 0 || desc.ambient.fiber_dim < 0)
        schema_error("negative dimension");
    if (!j["components"].is_array())
        schema_error("components must be an array");
    const int d = desc.ambient.fiber_dim;
    for (const auto& jc : j["components"]) {
        only_keys(jc, {"zero_set", "w_block_rule", "fiber_base", "conormal_support", "conormal_rule", "conormal_fiber"},
                  "component");
        ConormalComponent c;
        c.zero_set = get_indices(jc["zero_set"], "zero_set");
        c.conormal_support = get_indices(jc["conormal_support"], "conormal_support");
        c.fiber_base = subspace_from_json(jc["w_block_rule"], jc["fiber_base"], d, "fiber_base");
        c.conormal_fiber = subspace_from_json(jc["conormal_rule"], jc["conormal_fiber"], d, "conormal_fiber");
        desc.components.push_back(std::move(c));
    }
    if (!is_well_formed(desc)) {
        ConicSetDescriptor sorted = desc;
        for (auto& c : sorted.components) {
            std::sort(c.zero_set.begin(), c.zero_set.end());
            std::sort(c.conormal_support.begin(), c.conormal_support.end());
        }
        if (!is_well_formed(sorted))
            schema_error("component indices outside the base");
    }
    desc.canonicalize();
    return desc;
}

}  // namespace padicwf
