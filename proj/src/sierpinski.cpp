#include "dirichlet/sierpinski.hpp"

#include "dirichlet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace dirichlet {

namespace {

Index pow3(int k) {
    Index p = 1;
    for (int i = 0; i < k; ++i) p *= 3;
    return p;
}

void require_level(int level) {
    if (level < 0 || level > kMaxSgLevel)
        throw InputError("gasket level " + std::to_string(level) + " outside 0.." + std::to_string(kMaxSgLevel));
}

}  // namespace

CellWord::CellWord(std::vector<int> letters) : letters_(std::move(letters)) {
    for (int a : letters_)
        if (a < 0 || a > 2) throw InputError("cell word letter outside {0,1,2}");
}

CellWord CellWord::from_rank(int level, Index rank) {
    if (level < 0) throw InputError("negative cell level");
    std::vector<int> letters(static_cast<Index>(level));
    for (int i = level; i-- > 0;) {
        letters[static_cast<Index>(i)] = static_cast<int>(rank % 3);
        rank /= 3;
    }
    if (rank != 0) throw InputError("cell rank out of range for level");
    return CellWord(std::move(letters));
}

Index CellWord::rank() const {
    Index r = 0;
    for (int a : letters_) r = 3 * r + static_cast<Index>(a);
    return r;
}

std::string CellWord::str() const {
    std::string s;
    for (int a : letters_) s.push_back(static_cast<char>('0' + a));
    return s;
}

Index sg_vertex_count(int level) { return (3 * pow3(level) + 3) / 2; }

SGLevelForm::SGLevelForm(int level) : level_(level) {
    require_level(level);
    cells_.push_back({0, 1, 2});
    for (int n = 0; n < level; ++n) {
        std::vector<std::array<Index, 3>> next;
        next.reserve(3 * cells_.size());
        for (const auto& [a, b, c] : cells_) {
            const Index m01 = vertex_count_++, m02 = vertex_count_++, m12 = vertex_count_++;
            parents_.push_back({a, b, c});
            parents_.push_back({a, c, b});
            parents_.push_back({b, c, a});
            next.push_back({a, m01, m02});
            next.push_back({m01, b, m12});
            next.push_back({m02, m12, c});
        }
        cells_ = std::move(next);
        conductance_ *= 5.0 / 3.0;
    }
    measure_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vertex_count_));
    const double share = 1.0 / (3.0 * static_cast<double>(cells_.size()));
    for (const auto& cell : cells_)
        for (Index v : cell) measure_[static_cast<Eigen::Index>(v)] += share;
}

Index SGLevelForm::ancestor(Index cell, int l) const {
    if (l < 0 || l > level_) throw InputError("cell level outside 0..n");
    return cell / pow3(level_ - l);
}

double SGLevelForm::energy(const Function& f) const {
    if (static_cast<Index>(f.size()) != vertex_count_) throw InputError("function length differs from vertex count");
    double s = 0.0;
    for (const auto& [a, b, c] : cells_) {
        const double fa = f[static_cast<Eigen::Index>(a)], fb = f[static_cast<Eigen::Index>(b)],
                     fc = f[static_cast<Eigen::Index>(c)];
        s += (fa - fb) * (fa - fb) + (fb - fc) * (fb - fc) + (fa - fc) * (fa - fc);
    }
    return conductance_ * s;
}

GraphForm SGLevelForm::graph() const {
    std::vector<Edge> edges;
    edges.reserve(3 * cells_.size());
    for (const auto& [a, b, c] : cells_) {
        edges.push_back({std::min(a, b), std::max(a, b), conductance_});
        edges.push_back({std::min(b, c), std::max(b, c), conductance_});
        edges.push_back({std::min(a, c), std::max(a, c), conductance_});
    }
    return GraphForm::from_edges(vertex_count_, edges, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vertex_count_)),
                                 measure_);
}

const SGLevelForm& sg_level_form(int level) {
    require_level(level);
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<SGLevelForm>> cache;
    const std::lock_guard lock(mutex);
    auto& slot = cache[level];
    if (!slot) slot = std::make_unique<SGLevelForm>(level);
    return *slot;
}

LevelOneCalibration calibrate_level_one() {
    // Corners 0..2, midpoints 3 = m01, 4 = m02, 5 = m12, unit conductances.
    const int edges[9][2] = {{0, 3}, {0, 4}, {3, 4}, {3, 1}, {1, 5}, {3, 5}, {4, 5}, {5, 2}, {4, 2}};
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(6, 6);
    for (const auto& e : edges) {
        L(e[0], e[0]) += 1.0;
        L(e[1], e[1]) += 1.0;
        L(e[0], e[1]) -= 1.0;
        L(e[1], e[0]) -= 1.0;
    }
    // Stationarity in the interior: L_II u_I = -L_IB b.
    const Eigen::MatrixXd LII = L.bottomRightCorner(3, 3);
    const Eigen::MatrixXd LIB = L.bottomLeftCorner(3, 3);
    const Eigen::Vector3d b(1.0, 0.0, 0.0);
    const Eigen::Vector3d u = LII.fullPivLu().solve(-LIB * b);
    Eigen::VectorXd full(6);
    full << b, u;
    const double e1 = full.dot(L * full);  // sum over edges of squared differences
    LevelOneCalibration r;
    r.midpoints_for_unit_corner = u;
    r.renormalization = boundary_energy(b) / e1;
    r.adjacent_weight = u[0];  // m01 sees corner 0 as adjacent
    r.opposite_weight = u[2];  // m12 sees corner 0 as opposite
    return r;
}

double boundary_energy(const Eigen::Vector3d& b) {
    return (b[0] - b[1]) * (b[0] - b[1]) + (b[1] - b[2]) * (b[1] - b[2]) + (b[0] - b[2]) * (b[0] - b[2]);
}

Function harmonic_extend(const SGLevelForm& sg, const Eigen::Vector3d& boundary) {
    Function h(static_cast<Eigen::Index>(sg.vertex_count()));
    h.head<3>() = boundary;
    for (Index v = 3; v < sg.vertex_count(); ++v) {
        const auto& [a, b, c] = sg.midpoint_parents(v);
        h[static_cast<Eigen::Index>(v)] =
            (2.0 * h[static_cast<Eigen::Index>(a)] + 2.0 * h[static_cast<Eigen::Index>(b)] +
             h[static_cast<Eigen::Index>(c)]) / 5.0;
    }
    return h;
}

Eigen::VectorXd cell_energy_measure(const SGLevelForm& sg, const Function& f, const Function& g, int l) {
    if (l < 0 || l > sg.level()) throw InputError("cell level outside 0..n");
    if (static_cast<Index>(f.size()) != sg.vertex_count() || static_cast<Index>(g.size()) != sg.vertex_count())
        throw InputError("function length differs from vertex count");
    const Index group = pow3(sg.level() - l);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pow3(l)));
    const auto& cells = sg.cells();
    for (Index k = 0; k < cells.size(); ++k) {
        const auto [a, b, c] = cells[k];
        auto d = [&](const Function& u, Index x, Index y) {
            return u[static_cast<Eigen::Index>(x)] - u[static_cast<Eigen::Index>(y)];
        };
        const double s = d(f, a, b) * d(g, a, b) + d(f, b, c) * d(g, b, c) + d(f, a, c) * d(g, a, c);
        out[static_cast<Eigen::Index>(k / group)] += sg.conductance() * s;
    }
    return out;
}

Measure cell_energy_measure(const SGLevelForm& sg, const Function& f, int l) {
    return Measure(cell_energy_measure(sg, f, f, l).cwiseMax(0.0));
}

BeurlingDenyTriple sg_beurling_deny(const SGLevelForm& sg) {
    BeurlingDenyTriple t;
    const SGLevelForm* p = &sg;
    t.local_part = [p](const Function& f) { return cell_energy_measure(*p, f, p->level()); };
    t.killing = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sg.vertex_count()));
    return t;
}

std::array<Eigen::Vector3d, 2> orthonormal_harmonic_boundaries() {
    Eigen::Vector3d h1(1.0, 0.0, -1.0), h2(1.0, -2.0, 1.0);
    h1 /= std::sqrt(boundary_energy(h1));
    h2 /= std::sqrt(boundary_energy(h2));
    return {h1, h2};
}

Measure kusuoka_measure(int n, int l) {
    if (l < 0 || l > n) throw InputError("cell level must satisfy 0 <= l <= n");
    const SGLevelForm& sg = sg_level_form(n);
    const auto hb = orthonormal_harmonic_boundaries();
    const Function h1 = harmonic_extend(sg, hb[0]);
    const Function h2 = harmonic_extend(sg, hb[1]);
    Eigen::VectorXd m = 0.5 * (cell_energy_measure(sg, h1, h1, l) + cell_energy_measure(sg, h2, h2, l));
    return Measure(m.cwiseMax(0.0));
}

SingularityReport singularity_diagnostic(int l, Index bins) {
    if (l < 0 || l > 12) throw InputError("singularity diagnostic level outside 0..12");
    if (bins == 0) throw InputError("histogram needs at least one bin");
    SingularityReport r;
    r.level = l;
    r.masses = kusuoka_measure(l, l);
    const double cells = static_cast<double>(r.masses.size());
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, h = 0.0;
    for (Index w = 0; w < r.masses.size(); ++w) {
        const double m = r.masses[w];
        if (!(m > 0.0)) throw InternalError("Kusuoka measure vanishes on cell " + CellWord::from_rank(l, w).str());
        lo = std::min(lo, m);
        hi = std::max(hi, m);
        r.log_ratios.push_back(std::log(m * cells));
        h -= m * std::log(m);
    }
    r.min_log_ratio = std::log(lo * cells);
    r.max_log_ratio = std::log(hi * cells);
    r.spread = hi / lo;
    r.entropy_ratio = l == 0 ? 1.0 : h / (static_cast<double>(l) * std::log(3.0));

    const double width = (r.max_log_ratio - r.min_log_ratio) / static_cast<double>(bins);
    for (Index b = 0; b <= bins; ++b) r.histogram_edges.push_back(r.min_log_ratio + width * static_cast<double>(b));
    r.histogram.assign(bins, 0);
    for (double v : r.log_ratios) {
        Index b = width > 0.0 ? static_cast<Index>((v - r.min_log_ratio) / width) : 0;
        ++r.histogram[std::min(b, bins - 1)];
    }
    return r;
}

SingularityTrend singularity_trend(int max_level, Index bins) {
    SingularityTrend t;
    for (int l = 0; l <= max_level; ++l) {
        t.levels.push_back(singularity_diagnostic(l, bins));
        if (l >= 1 && t.levels[l].spread < t.levels[l - 1].spread * (1.0 - kRelTol)) t.spread_nondecreasing = false;
        if (l >= 3 && !(t.levels[l].entropy_ratio < t.levels[l - 1].entropy_ratio))
            t.entropy_strictly_decreasing_from_2 = false;
    }
    return t;
}

LocalTruncationReport local_truncation_equality(const SGLevelForm& sg, const Function& f, double alpha, int l) {
    if (!(alpha > 0.0)) throw InputError("truncation level alpha must be positive");
    if (l < 0 || l > sg.level()) throw InputError("cell level outside 0..n");
    const Function residual = f - f.cwiseMax(-alpha).cwiseMin(alpha);
    LocalTruncationReport r;
    r.lhs = sg.energy(residual);

    // Per level-l cell: which of {f >= alpha}, {f <= -alpha}, {|f| < alpha} its vertices meet.
    enum : unsigned { kPos = 1, kNeg = 2, kMid = 4 };
    const Index group = pow3(sg.level() - l);
    std::vector<unsigned> kind(pow3(l), 0);
    const auto& cells = sg.cells();
    for (Index k = 0; k < cells.size(); ++k)
        for (Index v : cells[k]) {
            const double x = f[static_cast<Eigen::Index>(v)];
            kind[k / group] |= x >= alpha ? kPos : (x <= -alpha ? kNeg : kMid);
        }
    const Measure gamma = cell_energy_measure(sg, f, l);
    for (Index w = 0; w < kind.size(); ++w) {
        if (kind[w] == kPos || kind[w] == kNeg) {
            r.inside_mass += gamma[w];
            ++r.inside_cells;
        } else if (kind[w] != kMid) {
            r.straddle_mass += gamma[w];
            ++r.straddling_cells;
        }
    }
    r.defect = r.lhs - r.inside_mass;
    const double scale = std::max(r.lhs, r.inside_mass);
    r.bounded = approx_le(0.0, r.defect, 0.0, 1e-12 * scale + kAbsFloor) &&
                approx_le(r.defect, r.straddle_mass, 0.0, 1e-12 * scale + kAbsFloor);
    r.exact = approx_equal(r.lhs, r.inside_mass, 1e-12);
    return r;
}

ProductRuleReport sg_product_rule_defect(const SGLevelForm& sg, const Function& f, const Function& g,
                                         const Function& h) {
    const int n = sg.level();
    const Function fg = f.cwiseProduct(g);
    const Eigen::VectorXd lhs = cell_energy_measure(sg, fg, h, n);
    const Eigen::VectorXd gh = cell_energy_measure(sg, g, h, n);
    const Eigen::VectorXd fh = cell_energy_measure(sg, f, h, n);
    double num = 0.0, den = 0.0;
    const auto& cells = sg.cells();
    for (Index k = 0; k < cells.size(); ++k) {
        double fw = 0.0, gw = 0.0;
        for (Index v : cells[k]) {
            fw += f[static_cast<Eigen::Index>(v)] / 3.0;
            gw += g[static_cast<Eigen::Index>(v)] / 3.0;
        }
        const auto i = static_cast<Eigen::Index>(k);
        num += std::abs(lhs[i] - fw * gh[i] - gw * fh[i]);
        den += std::abs(fw * gh[i]) + std::abs(gw * fh[i]);
    }
    return {n, den > 0.0 ? num / den : 0.0};
}

bool sg_locality_check(const SGLevelForm& sg, const Function& f, int l) {
    const Index group = pow3(sg.level() - l);
    const Measure gamma = cell_energy_measure(sg, f, l);
    std::vector<double> lo(gamma.size(), std::numeric_limits<double>::infinity());
    std::vector<double> hi(gamma.size(), -std::numeric_limits<double>::infinity());
    const auto& cells = sg.cells();
    for (Index k = 0; k < cells.size(); ++k)
        for (Index v : cells[k]) {
            lo[k / group] = std::min(lo[k / group], f[static_cast<Eigen::Index>(v)]);
            hi[k / group] = std::max(hi[k / group], f[static_cast<Eigen::Index>(v)]);
        }
    for (Index w = 0; w < gamma.size(); ++w)
        if (lo[w] == hi[w] && gamma[w] != 0.0) return false;
    return true;
}

}  // namespace dirichlet
