#include "dirichlet/io.hpp"

#include "dirichlet/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace dirichlet {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}

std::string strip(std::string s) {
    const auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& where) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw InputError(where + ": '" + text + "' is not a number");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(strip(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

Index LoadedForm::index_of(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw InputError("unknown point '" + label + "'");
    return static_cast<Index>(it - labels.begin());
}

LoadedForm parse_form_spec(std::istream& in, GraphForm::Options options) {
    LoadedForm out;
    std::map<std::string, Index> index;
    std::vector<std::optional<double>> coords;
    std::map<std::pair<Index, Index>, double> conductance;
    std::map<Index, double> killing, measure;

    auto point = [&](const std::string& label) {
        const auto [it, inserted] = index.emplace(label, out.labels.size());
        if (inserted) {
            out.labels.push_back(label);
            coords.emplace_back();
        }
        return it->second;
    };

    std::string raw;
    Index lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip(raw);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        const std::string where = "form spec line " + std::to_string(lineno);
        const std::string& kw = tok[0];
        if (kw == "point" && (tok.size() == 2 || tok.size() == 3)) {
            const Index p = point(tok[1]);
            if (tok.size() == 3) coords[p] = parse_number(tok[2], where);
        } else if (kw == "edge" && tok.size() == 4) {
            const Index a = point(tok[1]), b = point(tok[2]);
            if (a == b) throw InputError(where + ": self loop at '" + tok[1] + "'");
            const double c = parse_number(tok[3], where);
            if (c < 0.0) throw InputError(where + ": negative conductance");
            const auto key = std::minmax(a, b);
            if (!conductance.emplace(std::pair{key.first, key.second}, c).second)
                throw InputError(where + ": edge " + tok[1] + "-" + tok[2] + " listed twice");
        } else if (kw == "killing" && tok.size() == 3) {
            killing[point(tok[1])] = parse_number(tok[2], where);
        } else if (kw == "measure" && tok.size() == 3) {
            measure[point(tok[1])] = parse_number(tok[2], where);
        } else {
            throw InputError(where + ": cannot parse '" + line + "'");
        }
    }
    const Index n = out.labels.size();
    if (n == 0) throw InputError("form spec declares no points");
    Eigen::VectorXd k = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd mu = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    for (const auto& [p, v] : killing) k[static_cast<Eigen::Index>(p)] = v;
    for (const auto& [p, v] : measure) mu[static_cast<Eigen::Index>(p)] = v;
    std::vector<Edge> edges;
    for (const auto& [key, c] : conductance)
        if (c > 0.0) edges.push_back({key.first, key.second, c});
    out.form = GraphForm::from_edges(n, edges, k, mu, options);
    for (Index p = 0; p < n; ++p) out.coordinates.push_back(coords[p].value_or(static_cast<double>(p)));
    return out;
}

LoadedForm load_form_spec(const std::string& path, GraphForm::Options options) {
    std::ifstream in = open_input(path);
    return parse_form_spec(in, options);
}

void write_form_spec(std::ostream& out, const GraphForm& form, const std::vector<std::string>& labels) {
    if (labels.size() != form.size()) throw InputError("label count differs from form size");
    for (Index x = 0; x < form.size(); ++x) out << "point " << labels[x] << '\n';
    for (const Edge& e : form.edges()) out << "edge " << labels[e.a] << ' ' << labels[e.b] << ' ' << fmt_num(e.weight) << '\n';
    for (Index x = 0; x < form.size(); ++x) {
        const double k = form.killing()[static_cast<Eigen::Index>(x)];
        if (k != 0.0) out << "killing " << labels[x] << ' ' << fmt_num(k) << '\n';
    }
    for (Index x = 0; x < form.size(); ++x)
        out << "measure " << labels[x] << ' ' << fmt_num(form.base_measure()[static_cast<Eigen::Index>(x)]) << '\n';
}

Eigen::VectorXd read_point_values(std::istream& in, const LoadedForm& form, double fill) {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(form.labels.size()), fill);
    std::vector<bool> seen(form.labels.size(), false);
    std::string raw;
    Index lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip(raw);
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        const std::string where = "csv line " + std::to_string(lineno);
        if (cells.size() != 2) throw InputError(where + ": expected 'point,value'");
        if (lineno == 1 && cells[0] == "point") continue;
        const Index p = form.index_of(cells[0]);
        if (seen[p]) throw InputError(where + ": point '" + cells[0] + "' listed twice");
        seen[p] = true;
        v[static_cast<Eigen::Index>(p)] = parse_number(cells[1], where);
    }
    return v;
}

Eigen::VectorXd load_point_values(const std::string& path, const LoadedForm& form, double fill) {
    std::ifstream in = open_input(path);
    return read_point_values(in, form, fill);
}

std::vector<Function> load_generators(const std::string& path, const LoadedForm& form) {
    std::ifstream in = open_input(path);
    std::string raw;
    std::vector<Function> gens;
    Index lineno = 0;
    std::vector<bool> seen(form.labels.size(), false);
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip(raw);
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (gens.empty()) {
            if (cells.size() < 2 || cells[0] != "point") throw InputError("generator csv needs a 'point,g1,...' header");
            gens.assign(cells.size() - 1, Function::Zero(static_cast<Eigen::Index>(form.labels.size())));
            continue;
        }
        const std::string where = "generator csv line " + std::to_string(lineno);
        if (cells.size() != gens.size() + 1) throw InputError(where + ": wrong column count");
        const Index p = form.index_of(cells[0]);
        seen[p] = true;
        for (Index g = 0; g < gens.size(); ++g)
            gens[g][static_cast<Eigen::Index>(p)] = parse_number(cells[g + 1], where);
    }
    if (gens.empty()) throw InputError("generator csv is empty");
    for (Index p = 0; p < seen.size(); ++p)
        if (!seen[p]) throw InputError("generator csv misses point '" + form.labels[p] + "'");
    return gens;
}

FunctionSequence make_sequence(const Expression& expr, Index count, const LoadedForm& form) {
    FunctionSequence seq;
    const Index n = form.labels.size();
    for (Index k = 1; k <= count; ++k) {
        Function u(static_cast<Eigen::Index>(n));
        for (Index x = 0; x < n; ++x) {
            const Variables v{form.coordinates[x], static_cast<double>(x), static_cast<double>(n), static_cast<double>(k)};
            const double y = expr(v);
            if (!std::isfinite(y))
                throw InputError("sequence expression is not finite at term " + std::to_string(k) + ", point '" +
                                 form.labels[x] + "'");
            u[static_cast<Eigen::Index>(x)] = y;
        }
        seq.terms.push_back(std::move(u));
        seq.labels.push_back("u" + std::to_string(k));
    }
    return seq;
}

FunctionSequence load_sequence(const std::string& path, const LoadedForm& form) {
    std::ifstream in = open_input(path);
    std::string raw;
    std::optional<Index> count;
    std::optional<Expression> expr;
    while (std::getline(in, raw)) {
        const std::string line = strip(raw);
        if (line.empty()) continue;
        if (line.rfind("count", 0) == 0) {
            const double c = parse_number(strip(line.substr(5)), "sequence count");
            if (c < 1 || c != std::floor(c)) throw InputError("sequence count must be a positive integer");
            count = static_cast<Index>(c);
        } else if (line.rfind("expr", 0) == 0) {
            expr = Expression::parse(line.substr(4));
        } else {
            throw InputError("sequence file: cannot parse '" + line + "'");
        }
    }
    if (!count || !expr) throw InputError("sequence file needs 'count' and 'expr' lines");
    return make_sequence(*expr, *count, form);
}

PointSet parse_point_list(const std::string& text, const LoadedForm& form) {
    PointSet out;
    for (const std::string& cell : split_csv(text)) {
        if (cell.empty()) continue;
        Index p;
        if (std::find(form.labels.begin(), form.labels.end(), cell) != form.labels.end()) {
            p = form.index_of(cell);
        } else {
            const double v = parse_number(cell, "point list");
            if (v < 0 || v != std::floor(v) || v >= static_cast<double>(form.labels.size()))
                throw InputError("point list: '" + cell + "' is not a point");
            p = static_cast<Index>(v);
        }
        out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string file_digest(const std::string& path) {
    std::ifstream in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fmt::format("{:016x}", fnv1a64(ss.str()));
}

std::string fmt_num(double v) { return fmt::format("{:.15g}", v); }

}  // namespace dirichlet
