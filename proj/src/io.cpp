#include "rcd/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rcd/errors.hpp"

namespace rcd {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                cur += '"';
                ++k;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.emplace_back(trim(cur));
    return out;
}

std::string format_double(double v) {
    std::array<char, 512> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    return {buf.data(), res.ptr};
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

Dataset parse_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        const std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
        if (!trim(line).empty()) lines.push_back(line);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    if (lines.empty()) throw InputError("csv: empty input");

    std::vector<std::string> names = split_fields(lines.front());
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (name.empty()) throw InputError("csv: empty column name in header");
        if (!seen.insert(name).second) throw InputError("csv: duplicate column name '" + name + "'");
    }
    if (lines.size() < 2) throw InputError("csv: no data rows");
    const auto cols = static_cast<Eigen::Index>(names.size());
    const auto rows = static_cast<Eigen::Index>(lines.size() - 1);
    Eigen::MatrixXd values(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto fields = split_fields(lines[static_cast<std::size_t>(r) + 1]);
        const std::string where_row = "csv: data row " + std::to_string(r + 1);
        if (static_cast<Eigen::Index>(fields.size()) != cols) {
            throw InputError(where_row + " has " + std::to_string(fields.size()) + " cells, expected " +
                             std::to_string(cols));
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const std::string& cell = fields[static_cast<std::size_t>(c)];
            const std::string where =
                where_row + ", column " + std::to_string(c + 1) + " ('" + names[static_cast<std::size_t>(c)] + "')";
            if (cell.empty()) throw InputError(where + ": missing value");
            double v = 0.0;
            const char* first = cell.data();
            if (*first == '+') ++first;
            const auto res = std::from_chars(first, cell.data() + cell.size(), v);
            if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
                throw InputError(where + ": non-numeric value '" + cell + "'");
            }
            if (!std::isfinite(v)) throw InputError(where + ": non-finite value '" + cell + "'");
            values(r, c) = v;
        }
    }
    Dataset d{std::move(names), std::move(values), false};
    center_columns(d);
    return d;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw InputError("failed writing '" + path + "'");
}

Dataset ingest_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

std::string to_csv(const Dataset& data) {
    std::string out;
    for (std::size_t c = 0; c < data.names.size(); ++c) {
        if (c) out += ',';
        out += data.names[c];
    }
    out += '\n';
    for (Eigen::Index r = 0; r < data.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.values.cols(); ++c) {
            if (c) out += ',';
            out += format_double(data.values(r, c));
        }
        out += '\n';
    }
    return out;
}

nlohmann::json config_to_json(const RcdConfig& config) {
    return {{"alpha_corr", config.alpha_corr},       {"alpha_indep", config.alpha_indep},
            {"alpha_shapiro", config.alpha_shapiro}, {"max_explanatory", config.max_explanatory},
            {"sweep_enabled", config.sweep_enabled}, {"sweep_k_max", config.sweep_k_max}};
}

nlohmann::json model_to_json(const GroundTruthModel& model) {
    auto rows = [](const Eigen::MatrixXd& m) {
        nlohmann::json out = nlohmann::json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            out.push_back(std::move(row));
        }
        return out;
    };
    return {{"B", rows(model.b)},
            {"Lambda", rows(model.lambda)},
            {"causal_order", model.causal_order},
            {"seed", model.seed},
            {"rng", std::string(kRngAlgorithm)}};
}

GroundTruthModel model_from_json(const nlohmann::json& doc) {
    try {
        auto matrix = [](const nlohmann::json& rows, Eigen::Index cols_if_empty) {
            const auto r = static_cast<Eigen::Index>(rows.size());
            const Eigen::Index c = r > 0 ? static_cast<Eigen::Index>(rows[0].size()) : cols_if_empty;
            Eigen::MatrixXd m(r, c);
            for (Eigen::Index i = 0; i < r; ++i) {
                if (static_cast<Eigen::Index>(rows[i].size()) != c) throw InputError("model json: ragged matrix");
                for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
            }
            return m;
        };
        Eigen::MatrixXd b = matrix(doc.at("B"), 0);
        Eigen::MatrixXd lambda = matrix(doc.at("Lambda"), 0);
        if (lambda.rows() == 0) lambda.resize(b.rows(), 0);
        GroundTruthModel model = make_model(std::move(b), std::move(lambda), doc.at("seed").get<std::uint64_t>());
        model.causal_order = doc.at("causal_order").get<std::vector<std::size_t>>();
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("model json: ") + e.what());
    }
}

std::string emit_graph(const CausalGraph& graph, const std::vector<std::string>& names, GraphFormat format,
                       const nlohmann::json& metadata) {
    const std::size_t n = graph.num_variables();
    if (names.size() != n) throw InvalidArgument("emit_graph: name count does not match graph size");

    std::vector<std::pair<std::string, std::string>> directed, bidirected, unresolved;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (graph.parents(i, j)) directed.emplace_back(names[j], names[i]);
            if (j > i && graph.confounded(i, j)) bidirected.emplace_back(names[i], names[j]);
        }
    }
    for (const auto& [i, j] : graph.unresolved) unresolved.emplace_back(names[i], names[j]);

    if (format == GraphFormat::Dot) {
        std::vector<std::string> nodes, edges;
        for (const auto& name : names) nodes.push_back("  " + dot_quote(name) + ";");
        for (const auto& [from, to] : directed) edges.push_back("  " + dot_quote(from) + " -> " + dot_quote(to) + ";");
        for (const auto& [a, b] : bidirected) {
            edges.push_back("  " + dot_quote(a) + " -> " + dot_quote(b) + " [dir=both];");
        }
        for (const auto& [a, b] : unresolved) {
            edges.push_back("  " + dot_quote(a) + " -> " + dot_quote(b) + " [style=dashed, dir=none];");
        }
        std::sort(nodes.begin(), nodes.end());
        std::sort(edges.begin(), edges.end());
        std::string out = "digraph rcd {\n";
        for (const auto& l : nodes) out += l + "\n";
        for (const auto& l : edges) out += l + "\n";
        return out + "}\n";
    }

    auto pairs = [](std::vector<std::pair<std::string, std::string>> v) {
        std::sort(v.begin(), v.end());
        nlohmann::json arr = nlohmann::json::array();
        for (auto& [a, b] : v) arr.push_back({a, b});
        return arr;
    };
    nlohmann::json doc = metadata.is_object() ? metadata : nlohmann::json::object();
    doc["variables"] = names;
    doc["directed"] = pairs(directed);
    doc["bidirected"] = pairs(bidirected);
    doc["unresolved"] = pairs(unresolved);
    return doc.dump(2) + "\n";
}

NamedGraph graph_from_json(std::string_view text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        NamedGraph out;
        out.names = doc.at("variables").get<std::vector<std::string>>();
        std::map<std::string, std::size_t> index;
        for (std::size_t k = 0; k < out.names.size(); ++k) index[out.names[k]] = k;
        auto lookup = [&](const nlohmann::json& v) {
            const auto it = index.find(v.get<std::string>());
            if (it == index.end()) throw InputError("graph json: unknown variable " + v.dump());
            return it->second;
        };
        out.graph = CausalGraph(out.names.size());
        for (const auto& e : doc.at("directed")) out.graph.parents.set(lookup(e.at(1)), lookup(e.at(0)));
        for (const auto& e : doc.at("bidirected")) {
            const std::size_t a = lookup(e.at(0)), b = lookup(e.at(1));
            out.graph.confounded.set(a, b);
            out.graph.confounded.set(b, a);
        }
        for (const auto& e : doc.at("unresolved")) {
            const std::size_t a = lookup(e.at(0)), b = lookup(e.at(1));
            out.graph.unresolved.insert({std::min(a, b), std::max(a, b)});
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("graph json: ") + e.what());
    }
}

std::string benchmark_csv(const BenchmarkReport& report) {
    std::ostringstream out;
    out << "seed,directed_precision,directed_recall,directed_f_measure,"
           "bidirected_precision,bidirected_recall,bidirected_f_measure\n";
    for (const auto& t : report.trials) {
        const auto& d = t.rcd.directed;
        const auto& b = t.rcd.bidirected;
        out << t.seed << ',' << format_double(d.precision) << ',' << format_double(d.recall) << ','
            << format_double(d.f_measure) << ',' << format_double(b.precision) << ',' << format_double(b.recall)
            << ',' << format_double(b.f_measure) << '\n';
    }
    return out.str();
}

nlohmann::json benchmark_summary(const BenchmarkReport& report) {
    nlohmann::json doc;
    doc["trials"] = report.trials.size();
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto& [name, q] : report.summary) {
        metrics[name] = {{"lower_quartile", q.lower}, {"median", q.median}, {"upper_quartile", q.upper}};
    }
    doc["metrics"] = std::move(metrics);
    return doc;
}

}  // namespace rcd
