#include "padicwf/cli.hpp"

#include "padicwf/scene_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace padicwf {

using nlohmann::json;

namespace {

struct Options {
    std::string scene_path;
    std::string xi;
    std::string cube;
    int oracle_level = -1;
    std::string twist_scale;
    int threads = 1;
    std::string suite;
    std::uint64_t seed = 7;
    int trials = 200;
    std::string output;
    std::string format;
};

// An assertion failure after results were produced.
struct CheckFailed {
    std::string message;
};

std::string resolve(const std::string& path)
{
    if (path.empty() || path == "-")
        return path;
    const char* dir = std::getenv(kOutputDirVariable);
    std::filesystem::path p(path);
    if (dir && *dir && p.is_relative())
        p = std::filesystem::path(dir) / p;
    return p.string();
}

class Emitter {
public:
    Emitter(const Options& opt, const SceneFile& scene, std::ostream& out) : out_(out)
    {
        if (!opt.output.empty())
            path_ = opt.output;
        else if (scene.output)
            path_ = scene.output->path;
        path_ = resolve(path_);
        if (!opt.format.empty())
            format_ = opt.format;
        else if (scene.output)
            format_ = scene.output->format;
        else if (path_.size() >= 4 && path_.compare(path_.size() - 4, 4, ".csv") == 0)
            format_ = "csv";
        if (format_ != "json" && format_ != "csv")
            throw Error(ErrorKind::Parse, "output format must be json or csv");
    }

    const std::string& format() const { return format_; }

    void write(const std::string& text)
    {
        if (path_.empty() || path_ == "-") {
            out_ << text;
            out_.flush();
            return;
        }
        const auto parent = std::filesystem::path(path_).parent_path();
        if (!parent.empty())
            std::filesystem::create_directories(parent);
        std::ofstream f(path_, std::ios::binary);
        if (!f)
            throw Error(ErrorKind::InvalidArgument, "cannot write '" + path_ + "'");
        f << text;
    }
    void write(const json& j) { write(j.dump(2) + "\n"); }

private:
    std::ostream& out_;
    std::string path_;
    std::string format_ = "json";
};

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json rational_json(const RationalVector& v)
{
    json out = json::array();
    for (const auto& x : v)
        out.push_back(rational_to_string(x));
    return out;
}

int scene_dim(const AnyScene& scene)
{
    return std::visit([](const auto& s) { return static_cast<int>(s.r.size()); }, scene);
}

void cmd_eval(const Options& opt, const SceneFile& file, Emitter& emit)
{
    const PrimeContext ctx = file.context();
    const AnyScene scene = file.evaluable();
    const int dim = scene_dim(scene);
    RationalVector xi;
    if (!opt.xi.empty())
        xi = parse_rational_list(opt.xi);
    else if (!file.probes.empty())
        xi = file.probes.front().xi;
    else
        throw Error(ErrorKind::Parse, "eval needs --xi (or a probe in the scene file)");
    const ResidueCube cube = opt.cube.empty() ? ResidueCube::whole(dim) : parse_cube(opt.cube, dim, ctx);
    std::optional<Rational> twist;
    if (!opt.twist_scale.empty())
        twist = parse_rational(opt.twist_scale);

    json record = {{"command", "eval"},
                   {"scene", to_string(file.kind)},
                   {"prime", file.prime},
                   {"cube", {{"level", cube.level()}, {"base", cube.base()}}},
                   {"xi", rational_json(xi)}};
    CyclotomicValue value;
    std::optional<CyclotomicValue> oracle;
    if (const auto* poly = std::get_if<PolynomialScene>(&scene)) {
        if (static_cast<int>(xi.size()) != poly->d)
            throw Error(ErrorKind::Parse, "--xi needs " + std::to_string(poly->d) + " coordinates");
        FrequencyPoint f;
        for (const auto& x : xi)
            f.xi.emplace_back(x);
        if (twist)
            f.twist_scale = PAdicScalar(*twist);
        value = direct_ft(*poly, cube, f, ctx, EvalOptions{opt.threads});
        if (opt.oracle_level >= 0)
            oracle = brute_force_ft(*poly, cube, f, opt.oracle_level, ctx);
    } else {
        const auto& mono = std::get<MonomialScene>(scene);
        if (xi.size() != 1)
            throw Error(ErrorKind::Parse, "--xi needs one coordinate for a monomial scene");
        value = inverse_ft(mono, cube, PAdicScalar(xi[0]), ctx);
        if (opt.oracle_level >= 0)
            oracle = truncated_oracle(mono, cube, PAdicScalar(xi[0]), opt.oracle_level, ctx);
    }
    record["value"] = value_to_json(value);
    if (oracle) {
        record["oracle"] = {{"level", opt.oracle_level}, {"value", value_to_json(*oracle)}, {"agrees", *oracle == value}};
    }
    emit.write(record);
    if (oracle && *oracle != value)
        throw CheckFailed{"the oracle disagrees with the evaluator"};
}

ConicSetDescriptor bound_of(const SceneFile& file)
{
    if (!file.bound)
        throw Error(ErrorKind::Parse, "the scene file has no charts (a charts scene or a top-level \"bound\")");
    return build_L(file.bound->charts, file.bound->d, file.bound->q);
}

void cmd_bound(const SceneFile& file, Emitter& emit)
{
    emit.write(to_json(bound_of(file)));
}

void cmd_pcrit(const SceneFile& file, Emitter& emit)
{
    if (file.curve) {
        emit.write(to_json(pcrit_exact(*file.curve)));
    } else if (file.map) {
        emit.write(to_json(pcrit_sampled(file.map->pieces, file.map->coordinates, file.map->sample_budget,
                                         file.map->seed)));
    } else {
        throw Error(ErrorKind::Parse, "pcrit needs a curve or map scene");
    }
}

std::string probes_csv(const std::vector<ProbeReport>& rays)
{
    std::string csv = "probe_id,level,value_re,value_im,exact_zero\n";
    for (const auto& r : rays)
        for (std::size_t j = 0; j < r.values.size(); ++j) {
            const auto z = r.values[j].to_complex();
            csv += r.id + "," + std::to_string(j + 1) + "," + format_double(z.real()) + "," + format_double(z.imag()) +
                   "," + (r.values[j].is_zero() ? "true" : "false") + "\n";
        }
    return csv;
}

void cmd_probe(const Options& opt, const SceneFile& file, Emitter& emit)
{
    const PrimeContext ctx = file.context();
    const AnyScene scene = file.evaluable();
    if (file.probes.empty())
        throw Error(ErrorKind::Parse, "the scene file lists no probes");
    const EvalOptions eval{opt.threads};
    CoverReport report;
    if (file.bound) {
        report = wavefront_cover_check(scene, bound_of(file), file.probes, ctx, eval);
    } else {
        for (const auto& e : file.probes) {
            if (e.kind == ProbeKind::Ray) {
                auto r = smoothness_probe(scene, e.cube, e.xi, e.k_max, ctx, e.twist_scale, eval);
                r.id = e.id;
                report.rays.push_back(std::move(r));
            } else {
                auto c = local_constancy_probe(scene, e.cube, e.xi, e.k_max, ctx, e.twist_scale, eval);
                c.id = e.id;
                report.constancy.push_back(std::move(c));
            }
        }
    }
    if (emit.format() == "csv") {
        emit.write(probes_csv(report.rays));
    } else {
        json j = to_json(report);
        j["command"] = "probe";
        j["coverage_checked"] = file.bound.has_value();
        emit.write(j);
    }
    if (!report.passed())
        throw CheckFailed{std::to_string(report.violations.size()) + " probe(s) outside the bound"};
}

void cmd_verify(const Options& opt, const SceneFile& file, Emitter& emit)
{
    const PrimeContext ctx = file.context();
    json j;
    bool passed = false;
    if (opt.suite == "homogeneity") {
        if (!file.monomial)
            throw Error(ErrorKind::Parse, "the homogeneity suite needs a monomial scene");
        const auto r = homogeneity_suite(*file.monomial, opt.trials, opt.seed, ctx);
        j = to_json(r);
        passed = r.passed();
    } else if (opt.suite == "oracle") {
        const auto r = oracle_suite(file.evaluable(), opt.trials, opt.seed, ctx);
        j = to_json(r);
        passed = r.passed();
    } else if (opt.suite == "floor") {
        const auto r = floor_suite(opt.trials, opt.seed, ctx);
        j = to_json(r);
        passed = r.passed();
    } else if (opt.suite == "coverage") {
        if (file.probes.empty())
            throw Error(ErrorKind::Parse, "the coverage suite needs probes");
        const auto r = wavefront_cover_check(file.evaluable(), bound_of(file), file.probes, ctx, {opt.threads});
        j = to_json(r);
        j["suite"] = "coverage";
        passed = r.passed();
    } else {
        throw Error(ErrorKind::Parse, "unknown suite '" + opt.suite + "'");
    }
    j["command"] = "verify";
    emit.write(j);
    if (!passed)
        throw CheckFailed{"suite " + opt.suite + " failed"};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact p-adic character sums, conic bounds and probes", "padicwf"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("scene", opt.scene_path, "Scene file (.json or .toml)")->required();
        sub->add_option("-o,--output", opt.output, "Output path (default: the scene's output path, else stdout)");
    };
    auto* eval = app.add_subcommand("eval", "Evaluate the localized transform at one frequency");
    add_common(eval);
    eval->add_option("--xi", opt.xi, "Frequency as comma-separated rationals");
    eval->add_option("--cube", opt.cube, "Residue cube level:b1,b2,...");
    eval->add_option("--oracle-level", opt.oracle_level, "Also evaluate the brute-force oracle at this level");
    eval->add_option("--twist-scale", opt.twist_scale, "Scale t of the twist term");
    eval->add_option("--threads", opt.threads, "Worker threads")->check(CLI::Range(1, 256));
    auto* bound = app.add_subcommand("bound", "Build the wave-front bound L from resolution charts");
    add_common(bound);
    auto* pcrit = app.add_subcommand("pcrit", "Compute PCrit for a curve (exact) or map (sampled) scene");
    add_common(pcrit);
    auto* probe = app.add_subcommand("probe", "Run the scene's probe plan, checking coverage when charts are given");
    add_common(probe);
    probe->add_option("--threads", opt.threads, "Worker threads")->check(CLI::Range(1, 256));
    probe->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    auto* verify = app.add_subcommand("verify", "Run an identity or coverage suite");
    add_common(verify);
    verify->add_option("--suite", opt.suite, "homogeneity, oracle, coverage or floor")
        ->required()
        ->check(CLI::IsMember({"homogeneity", "oracle", "coverage", "floor"}));
    verify->add_option("--seed", opt.seed, "PRNG seed");
    verify->add_option("--trials", opt.trials, "Number of random trials")->check(CLI::Range(1, 1000000));
    verify->add_option("--threads", opt.threads, "Worker threads")->check(CLI::Range(1, 256));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        const SceneFile file = load_scene_file(opt.scene_path);
        Emitter emit(opt, file, out);
        if (eval->parsed())
            cmd_eval(opt, file, emit);
        else if (bound->parsed())
            cmd_bound(file, emit);
        else if (pcrit->parsed())
            cmd_pcrit(file, emit);
        else if (probe->parsed())
            cmd_probe(opt, file, emit);
        else
            cmd_verify(opt, file, emit);
    } catch (const CheckFailed& f) {
        err << "padicwf: check failed: " << f.message << "\n";
        return kExitAssertion;
    } catch (const Error& e) {
        err << "padicwf: " << e.what() << "\n";
        return e.kind() == ErrorKind::Parse ? kExitParse : kExitEval;
    } catch (const std::exception& e) {
        err << "padicwf: " << e.what() << "\n";
        return kExitEval;
    }
    return kExitOk;
}

}  // namespace padicwf
