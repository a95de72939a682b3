// dlab: command-line front end for the finite-scale Dirichlet form lab.
//
// Exit codes: 0 success or property holds, 1 property violated (witness in the
// output), 2 bad input or unmet precondition.

#include "dirichlet/capacity.hpp"
#include "dirichlet/energy_dominance.hpp"
#include "dirichlet/errors.hpp"
#include "dirichlet/gelfand.hpp"
#include "dirichlet/io.hpp"
#include "dirichlet/selftest.hpp"
#include "dirichlet/sierpinski.hpp"
#include "dirichlet/truncation.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace fs = std::filesystem;
using namespace dirichlet;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadInput = 2;

struct Options {
    std::string form, measure, sequence, generators, function, expr, out, set, boundary;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    int level = 3, depth = 6;
    bool zero_order = false, uniform_weights = false;
};

// Everything a run reports besides its CSV files.
struct Run {
    std::string subcommand;
    json inputs = json::object();
    json summary = json::object();
    std::vector<std::string> outputs;
};

/// Destination for one named output: a file under --out, or stdout.
class Sink {
public:
    Sink(const Options& o, Run& run, const std::string& name) {
        if (o.out.empty()) return;
        fs::create_directories(o.out);
        const fs::path p = fs::path(o.out) / name;
        file_ = std::make_unique<std::ofstream>(p, std::ios::binary);
        if (!*file_) throw InputError("cannot write " + p.string());
        run.outputs.push_back(p.string());
    }
    std::ostream& operator*() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string need(const std::string& value, const char* flag) {
    if (value.empty()) throw InputError(std::string("missing required flag ") + flag);
    return value;
}

void record(Run& run, const std::string& path) { run.inputs[path] = file_digest(path); }

LoadedForm load_form(const Options& o, Run& run, bool allow_null = false) {
    record(run, need(o.form, "--form"));
    GraphForm::Options fo;
    fo.allow_null_measure = allow_null;
    return load_form_spec(o.form, fo);
}

Measure load_measure(const Options& o, Run& run, const LoadedForm& lf) {
    if (o.measure.empty()) return Measure(lf.form.base_measure());
    record(run, o.measure);
    return Measure(load_point_values(o.measure, lf, 0.0));
}

/// --function CSV (every point listed) or --expr evaluated at each point.
Function load_function(const Options& o, Run& run, const LoadedForm& lf) {
    if (!o.expr.empty()) return make_sequence(Expression::parse(o.expr), 1, lf).terms.front();
    record(run, need(o.function, "--function or --expr"));
    const Function f = load_point_values(o.function, lf, std::numeric_limits<double>::quiet_NaN());
    Index given = 0;
    for (Eigen::Index i = 0; i < f.size(); ++i) given += std::isnan(f[i]) ? 0 : 1;
    if (given != lf.form.size())
        throw InputError(fmt::format("function has values at {} points, form has {}", given, lf.form.size()));
    return f;
}

void write_witness(std::ostream& out, const LoadedForm& lf, const Function& f, const Function& g) {
    out << "point,f,g\n";
    for (Index x = 0; x < lf.form.size(); ++x)
        out << lf.labels[x] << ',' << fmt_num(f[static_cast<Eigen::Index>(x)]) << ','
            << fmt_num(g[static_cast<Eigen::Index>(x)]) << '\n';
}

std::string join_labels(const LoadedForm& lf, const PointSet& s) {
    std::string out;
    for (Index x : s) out += (out.empty() ? "" : " ") + lf.labels[x];
    return out;
}

// --- subcommands ----------------------------------------------------------------

int form_check(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run, true);
    const GraphForm& form = lf.form;
    Index active = 0;
    for (Index x = 0; x < form.size(); ++x) active += form.is_active(x) ? 1 : 0;
    // Markov property on a deterministic probe.
    Function probe(static_cast<Eigen::Index>(form.size()));
    for (Eigen::Index i = 0; i < probe.size(); ++i) probe[i] = std::sin(1.0 + 2.0 * static_cast<double>(i)) * 1.5;
    const ContractionReport cr = contraction_check(form, probe);
    Sink sink(o, run, "form_check.csv");
    std::ostream& out = *sink;
    out << "property,value\n";
    out << "points," << form.size() << '\n';
    out << "edges," << form.edges().size() << '\n';
    out << "active_points," << active << '\n';
    out << "total_killing," << fmt_num(form.killing().sum()) << '\n';
    out << "irreducible," << is_irreducible(form) << '\n';
    out << "transient," << is_transient(form) << '\n';
    out << "markov_contraction," << cr.holds << '\n';
    run.summary = {{"points", form.size()}, {"markov_contraction", cr.holds}};
    return cr.holds ? kOk : kViolation;
}

int energy_measure_cmd(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run, true);
    const Function f = load_function(o, run, lf);
    const Measure g = energy_measure(lf.form, f);
    Sink sink(o, run, "energy_measure.csv");
    *sink << "point,gamma\n";
    for (Index x = 0; x < lf.form.size(); ++x) *sink << lf.labels[x] << ',' << fmt_num(g[x]) << '\n';
    run.summary = {{"energy", energy(lf.form, f)}, {"gamma_total", g.total()}};
    return kOk;
}

int edm_build(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run, true);
    const Measure m = minimal_edm(lf.form, {}, o.uniform_weights ? EdmWeights::uniform : EdmWeights::dyadic);
    Sink sink(o, run, "edm.csv");
    *sink << "point,weight\n";
    for (Index x = 0; x < lf.form.size(); ++x) *sink << lf.labels[x] << ',' << fmt_num(m[x]) << '\n';
    run.summary = {{"support_size", m.support().size()}, {"total", m.total()}};
    return kOk;
}

int edm_check(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run, true);
    need(o.measure, "--measure");
    const Measure m = load_measure(o, run, lf);
    const DominanceReport d = is_energy_dominant(lf.form, m);
    Sink sink(o, run, "edm_check.csv");
    *sink << "property,value\n";
    *sink << "energy_dominant," << d.dominant << '\n';
    if (!d.dominant) {
        *sink << "uncharged_points," << join_labels(lf, d.violations) << '\n';
        run.summary = {{"energy_dominant", false}, {"witness_point", lf.labels[d.violations.front()]}};
        return kViolation;
    }
    const MinimalityReport mr = is_minimal_edm(lf.form, m);
    *sink << "minimal," << mr.minimal << '\n';
    if (!mr.minimal) *sink << "excess_points," << join_labels(lf, mr.excess) << '\n';
    run.summary = {{"energy_dominant", true}, {"minimal", mr.minimal}};
    return kOk;
}

int density_cmd(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run, true);
    const Measure m = load_measure(o, run, lf);
    const Function f = load_function(o, run, lf);
    const DominanceReport d = is_energy_dominant(lf.form, m);
    Sink sink(o, run, "density.csv");
    if (!d.dominant) {
        *sink << "uncharged_point\n";
        for (Index x : d.violations) *sink << lf.labels[x] << '\n';
        run.summary = {{"energy_dominant", false}};
        return kViolation;
    }
    const DensityVector dv = energy_density(lf.form, f, m);
    *sink << "point,density\n";
    for (Index k = 0; k < dv.points.size(); ++k) *sink << lf.labels[dv.points[k]] << ',' << fmt_num(dv.values[k]) << '\n';
    run.summary = {{"energy_dominant", true}, {"integral", dv.integrate(m)}};
    return kOk;
}

int change_measure_cmd(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run, true);
    need(o.measure, "--measure");
    const Measure m = load_measure(o, run, lf);
    try {
        const QuotientForm q = change_measure(lf.form, m);
        std::vector<std::string> labels;
        for (Index x : q.retained) labels.push_back(lf.labels[x]);
        Sink sink(o, run, "quotient.form");
        write_form_spec(*sink, q.form, labels);
        run.summary = {{"retained", q.retained.size()}, {"removed", lf.form.size() - q.retained.size()}};
        return kOk;
    } catch (const WellDefinednessError& e) {
        Sink sink(o, run, "witness.csv");
        write_witness(*sink, lf, e.f(), e.g());
        run.summary = {{"well_defined", false}, {"energy_f", e.energy_f()}, {"energy_g", e.energy_g()}};
        return kViolation;
    }
}

int closability_run(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run, true);
    const Measure m = load_measure(o, run, lf);
    record(run, need(o.sequence, "--sequence"));
    const FunctionSequence seq = load_sequence(o.sequence, lf);
    ClosabilityTolerances tol;
    tol.cauchy = o.tol;
    const ClosabilityReport r = closability_experiment(lf.form, seq, m, tol);
    if (!r.dominant) {
        Sink sink(o, run, "witness.csv");
        write_witness(*sink, lf, *r.witness_f, *r.witness_g);
        run.summary = {{"energy_dominant", false}, {"diagnosis", r.diagnosis},
                       {"energy_f", r.witness_energy_f}, {"energy_g", r.witness_energy_g}};
        return kViolation;
    }
    Sink sink(o, run, "closability.csv");
    std::ostream& out = *sink;
    out << "n,energy,l2_norm,k_j,bound\n";
    std::vector<const Subsequence::Step*> at(seq.terms.size(), nullptr);
    if (r.subsequence)
        for (const auto& s : r.subsequence->steps) at[s.n] = &s;
    for (Index n = 0; n < seq.terms.size(); ++n) {
        out << n + 1 << ',' << fmt_num(r.energies[n]) << ',' << fmt_num(r.l2_norms[n]) << ',';
        if (at[n]) out << at[n]->k << ',' << fmt_num(at[n]->ui_bound);
        else out << ',';
        out << '\n';
    }
    run.summary = {{"energy_dominant", true}, {"closable", r.closable}, {"diagnosis", r.diagnosis}};
    return r.closable ? kOk : kViolation;
}

int sg_kusuoka(const Options& o, Run& run) {
    if (o.depth < o.level) throw InputError("--depth must be at least --level");
    const Measure m = kusuoka_measure(o.depth, o.level);
    const double scale = std::pow(3.0, o.level);
    Sink sink(o, run, "kusuoka.csv");
    *sink << "cell,mass,log_ratio\n";
    for (Index w = 0; w < m.size(); ++w)
        *sink << CellWord::from_rank(o.level, w).str() << ',' << fmt_num(m[w]) << ',' << fmt_num(std::log(m[w] * scale))
              << '\n';
    run.summary = {{"level", o.level}, {"depth", o.depth}, {"total", m.total()}};
    return kOk;
}

int sg_harmonic(const Options& o, Run& run) {
    std::vector<double> b;
    std::stringstream ss(need(o.boundary, "--boundary"));
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t used = 0;
        try {
            b.push_back(std::stod(item, &used));
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0) throw InputError("--boundary expects three numbers a,b,c");
    }
    if (b.size() != 3) throw InputError("--boundary expects three numbers a,b,c");
    const Eigen::Vector3d bd(b[0], b[1], b[2]);
    const SGLevelForm& sg = sg_level_form(o.level);
    const Function h = harmonic_extend(sg, bd);
    Sink sink(o, run, "harmonic.csv");
    *sink << "vertex,value\n";
    for (Eigen::Index v = 0; v < h.size(); ++v) *sink << v << ',' << fmt_num(h[v]) << '\n';
    run.summary = {{"level", o.level}, {"energy", sg.energy(h)}, {"boundary_energy", boundary_energy(bd)}};
    return kOk;
}

int capacity_cmd(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run);
    const PointSet a = parse_point_list(need(o.set, "--set"), lf);
    const EquilibriumReport r = o.zero_order ? capacity0(lf.form, a) : capacity(lf.form, a);
    Sink sink(o, run, "capacity.csv");
    *sink << "point,potential\n";
    for (Index x = 0; x < lf.form.size(); ++x)
        *sink << lf.labels[x] << ',' << fmt_num(r.potential[static_cast<Eigen::Index>(x)]) << '\n';
    *sink << "# " << (o.zero_order ? "cap0" : "cap1") << " = " << fmt_num(r.value) << '\n';
    run.summary = {{"capacity", r.value}, {"kkt_ok", r.kkt_ok}, {"resolves", r.resolves}};
    if (!r.note.empty()) run.summary["note"] = r.note;
    return r.kkt_ok ? kOk : kViolation;
}

int split_measure_cmd(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run, true);
    need(o.measure, "--measure");
    const Measure m = load_measure(o, run, lf);
    const M0DominanceReport r = energy_dominance_of_m0(lf.form, m);
    Sink sink(o, run, "split.csv");
    *sink << "point,m0,m1\n";
    for (Index x = 0; x < lf.form.size(); ++x)
        *sink << lf.labels[x] << ',' << fmt_num(r.split.m0[x]) << ',' << fmt_num(r.split.m1[x]) << '\n';
    run.summary = {{"m0_dominant", r.m0_dominant}, {"m1_total", r.split.m1.total()},
                   {"zero_capacity_points", r.split.null_set.size()}};
    return r.m0_dominant ? kOk : kViolation;
}

int quasi_support(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run, true);
    need(o.measure, "--measure");
    const Measure m = load_measure(o, run, lf);
    const QuasiSupportReport r = full_quasi_support_check(lf.form, m);
    Sink sink(o, run, "quasi_support.csv");
    *sink << "property,value\n";
    *sink << "full," << r.full << '\n';
    *sink << "irreducible," << r.irreducible << '\n';
    *sink << "transient," << r.transient << '\n';
    if (!r.full) *sink << "missing_points," << join_labels(lf, r.missing) << '\n';
    run.summary = {{"full", r.full}, {"missing", r.missing.size()}};
    return r.full ? kOk : kViolation;
}

int gelfand_cmd(const Options& o, Run& run) {
    const LoadedForm lf = load_form(o, run, true);
    record(run, need(o.generators, "--generators"));
    const AlgebraSpec spec = build_algebra(Measure(lf.form.base_measure()), load_generators(o.generators, lf));
    try {
        const TransferResult t = transfer(lf.form, spec);
        const SpectrumQuotient& q = t.quotient;
        std::vector<std::string> labels;
        {
            Sink sink(o, run, "classes.csv");
            *sink << "class,points,mass\n";
            for (Index c = 0; c < q.size(); ++c) {
                labels.push_back("c" + std::to_string(c));
                *sink << labels.back() << ',' << join_labels(lf, q.classes[c]) << ',' << fmt_num(q.pushed[c]) << '\n';
            }
        }
        Sink sink(o, run, "transferred.form");
        write_form_spec(*sink, t.form, labels);
        const TransferredCarreReport cc = transferred_carre_check(t.form, o.seed);
        run.summary = {{"classes", q.size()}, {"carre_check", cc.passes}};
        return cc.passes ? kOk : kViolation;
    } catch (const WellDefinednessError& e) {
        Sink sink(o, run, "witness.csv");
        write_witness(*sink, lf, e.f(), e.g());
        run.summary = {{"energy_compatible", false}, {"energy_f", e.energy_f()}, {"energy_g", e.energy_g()}};
        return kViolation;
    }
}

int selftest(const Options& o, Run& run) {
    Sink sink(o, run, "selftest.txt");
    Index failed = 0;
    for (int id = 1; id <= kCriterionCount; ++id) {
        const CriterionResult r = run_criterion(id, o.seed);
        *sink << format_result(r) << std::endl;
        run.summary["AC" + std::to_string(id)] = r.pass;
        failed += r.pass ? 0 : 1;
    }
    return failed == 0 ? kOk : kViolation;
}

void emit_manifest(const Options& o, const Run& run, int code, double seconds, const std::string& error) {
    json m;
    m["subcommand"] = run.subcommand;
    m["inputs"] = run.inputs;
    m["outputs"] = run.outputs;
    m["tolerances"] = {{"tol", o.tol}, {"relative", kRelTol}, {"absolute_floor", kAbsFloor}};
    m["seed"] = o.seed;
    m["wall_time_seconds"] = seconds;
    m["exit_code"] = code;
    m["status"] = code == kOk ? "pass" : code == kViolation ? "property-violation" : "input-error";
    m["summary"] = run.summary;
    if (!error.empty()) m["error"] = error;
    if (o.out.empty()) {
        std::cerr << m.dump(2) << '\n';
        return;
    }
    std::ofstream(fs::path(o.out) / "manifest.json") << m.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dlab: finite-scale Dirichlet form experiments"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--form", o.form, "form specification file");
        sub->add_option("--measure", o.measure, "measure CSV (point,weight)");
        sub->add_option("--tol", o.tol, "tolerance");
        sub->add_option("--seed", o.seed, "seed for randomized checks");
        sub->add_option("--out", o.out, "output directory (default: stdout)");
        return sub;
    };
    using Handler = int (*)(const Options&, Run&);
    std::vector<std::pair<CLI::App*, Handler>> handlers;
    auto add = [&](const char* name, const char* help, Handler h) {
        CLI::App* sub = common(app.add_subcommand(name, help));
        handlers.emplace_back(sub, h);
        return sub;
    };

    add("form-check", "structural summary and Markov check", form_check);
    auto* em = add("energy-measure", "energy measure of a function", energy_measure_cmd);
    em->add_option("--function", o.function, "function CSV (point,value)");
    em->add_option("--expr", o.expr, "function expression in x, i, N");
    auto* eb = add("edm-build", "minimal energy dominant measure", edm_build);
    eb->add_flag("--uniform-weights", o.uniform_weights, "equal series weights instead of 2^-n");
    add("edm-check", "energy dominance and minimality of --measure", edm_check);
    auto* de = add("density", "energy density with respect to --measure", density_cmd);
    de->add_option("--function", o.function, "function CSV (point,value)");
    de->add_option("--expr", o.expr, "function expression in x, i, N");
    add("change-measure", "quotient form on the support of --measure", change_measure_cmd);
    auto* cl = add("closability-run", "closability experiment along a sequence", closability_run);
    cl->add_option("--sequence", o.sequence, "sequence file (count, expr)");

    CLI::App* sg = app.add_subcommand("sg", "Sierpinski gasket experiments");
    sg->require_subcommand(1);
    auto* sk = common(sg->add_subcommand("kusuoka", "Kusuoka cell masses"));
    sk->add_option("--level", o.level, "cell level l")->check(CLI::Range(0, kMaxSgLevel));
    sk->add_option("--depth", o.depth, "graph level n >= l")->check(CLI::Range(0, kMaxSgLevel));
    handlers.emplace_back(sk, sg_kusuoka);
    auto* sh = common(sg->add_subcommand("harmonic", "harmonic extension of corner values"));
    sh->add_option("--boundary", o.boundary, "corner values a,b,c");
    sh->add_option("--level", o.level, "level n")->check(CLI::Range(0, kMaxSgLevel));
    handlers.emplace_back(sh, sg_harmonic);

    auto* ca = add("capacity", "equilibrium potential and capacity of --set", capacity_cmd);
    ca->add_option("--set", o.set, "comma-separated points");
    ca->add_flag("--zero-order", o.zero_order, "0-order capacity (transient forms)");
    add("split-measure", "split --measure into positive and zero capacity parts", split_measure_cmd);
    add("quasi-support-check", "does --measure have full quasi support", quasi_support);
    auto* ge = add("gelfand", "transfer the form to the spectrum of an algebra", gelfand_cmd);
    ge->add_option("--generators", o.generators, "generators CSV (point,g1,...)");
    add("selftest", "run the acceptance suite", selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kBadInput;
    }

    Run run;
    Handler handler = nullptr;
    for (const auto& [sub, h] : handlers) {
        if (sub->parsed()) {
            handler = h;
            run.subcommand = (sub->get_parent() == &app ? "" : sub->get_parent()->get_name() + " ") + sub->get_name();
        }
    }

    const auto start = std::chrono::steady_clock::now();
    int code = kOk;
    std::string error;
    try {
        code = handler(o, run);
    } catch (const PropertyViolation& e) {
        code = kViolation;
        error = e.what();
    } catch (const InputError& e) {
        code = kBadInput;
        error = e.what();
    } catch (const PreconditionError& e) {
        code = kBadInput;
        error = e.what();
    } catch (const std::exception& e) {
        code = kBadInput;
        error = std::string("internal error: ") + e.what();
    }
    std::cout.flush();
    if (!error.empty()) std::cerr << "dlab: " << error << '\n';
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
        emit_manifest(o, run, code, seconds, error);
    } catch (const std::exception& e) {
        std::cerr << "dlab: cannot write manifest: " << e.what() << '\n';
        if (code == kOk) code = kBadInput;
    }
    return code;
}
