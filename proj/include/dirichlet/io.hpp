#pragma once

#include "dirichlet/expression.hpp"
#include "dirichlet/graph_form.hpp"
#include "dirichlet/truncation.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dirichlet {

/**
 * Form specification, one directive per line, '#' starts a comment:
 *
 *   point <label> [coordinate]
 *   edge <label> <label> <conductance>
 *   killing <label> <kappa>
 *   measure <label> <mu>          (defaults to 1)
 *
 * Points may also be introduced implicitly by their first use.
 */
struct LoadedForm {
    GraphForm form;
    std::vector<std::string> labels;
    std::vector<double> coordinates;  ///< explicit coordinate, else the point index

    Index index_of(const std::string& label) const;
};

LoadedForm parse_form_spec(std::istream& in, GraphForm::Options options = {});
LoadedForm load_form_spec(const std::string& path, GraphForm::Options options = {});
void write_form_spec(std::ostream& out, const GraphForm& form, const std::vector<std::string>& labels);

/// CSV with a `point,<value>` layout; the header line is optional and points
/// are given by label. Unlisted points get `fill`.
Eigen::VectorXd read_point_values(std::istream& in, const LoadedForm& form, double fill);
Eigen::VectorXd load_point_values(const std::string& path, const LoadedForm& form, double fill);

/// CSV `point,g1,g2,...` with a header row.
std::vector<Function> load_generators(const std::string& path, const LoadedForm& form);

/// Sequence file: `count <N>` and `expr <expression>` lines. Term n (1-based)
/// evaluates the expression at every point.
FunctionSequence load_sequence(const std::string& path, const LoadedForm& form);
FunctionSequence make_sequence(const Expression& expr, Index count, const LoadedForm& form);

/// Comma-separated point list, labels or indices ("0,3,7").
PointSet parse_point_list(const std::string& text, const LoadedForm& form);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);
std::uint64_t fnv1a64(std::string_view bytes);

/// 15 significant digits.
std::string fmt_num(double v);

}  // namespace dirichlet
