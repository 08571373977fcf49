// SPDX-License-Identifier: Apache-2.0
#include "airgnn/netgraph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "airgnn/error.hpp"
#include "airgnn/format.hpp"
#include "airgnn/rng.hpp"

namespace airgnn {

Layout::Layout(int n_pairs, std::vector<ComplexGain> gains, std::vector<double> noise_var, double p_max_mw)
    : n_(n_pairs), gains_(std::move(gains)), noise_var_(std::move(noise_var)), p_max_mw_(p_max_mw)
{
    if (n_ < 1)
        throw std::invalid_argument("layout: n_pairs must be >= 1");
    if (gains_.size() != static_cast<std::size_t>(n_) * n_)
        throw std::invalid_argument("layout: gain matrix must be " + std::to_string(n_) + "x" + std::to_string(n_));
    if (noise_var_.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("layout: expected one noise variance per receiver");
    for (double s : noise_var_)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("layout: noise variances must be finite and > 0");
    if (!(p_max_mw_ > 0.0) || !std::isfinite(p_max_mw_))
        throw std::invalid_argument("layout: p_max must be finite and > 0");
    for (const auto &g : gains_)
        if (!std::isfinite(g.re) || !std::isfinite(g.im))
            throw std::invalid_argument("layout: gains must be finite");
}

Layout generate_layout(int n_pairs, double p_max_dbm, double noise_var, std::uint64_t rng_seed)
{
    if (n_pairs < 1)
        throw std::invalid_argument("generate_layout: n_pairs must be >= 1");
    if (!(noise_var > 0.0))
        throw std::invalid_argument("generate_layout: noise_var must be > 0");

    GaussianStream rng(rng_seed);
    const double component_std = std::sqrt(0.5);
    std::vector<ComplexGain> gains(static_cast<std::size_t>(n_pairs) * n_pairs);
    for (auto &g : gains) {
        g.re = rng(component_std);
        g.im = rng(component_std);
    }
    return Layout(n_pairs, std::move(gains), std::vector<double>(n_pairs, noise_var), dbm_to_mw(p_max_dbm));
}

std::vector<Layout> generate_layouts(std::size_t count, int n_pairs, double p_max_dbm, double noise_var,
                                     std::uint64_t rng_seed)
{
    std::vector<Layout> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        out.push_back(generate_layout(n_pairs, p_max_dbm, noise_var, derive_seed(rng_seed, {k})));
    return out;
}

std::vector<int> NetworkGraph::neighbors(int v) const
{
    std::vector<int> out;
    for (int i = in_offsets[v]; i < in_offsets[v + 1]; ++i)
        out.push_back(edge_src[in_edges[i]]);
    return out;
}

void NetworkGraph::validate() const
{
    if (node_features.rows() != node_count)
        throw DimensionError("graph: node feature rows != node_count");
    if (edge_features.rows() != edge_count() || edge_dst.size() != edge_src.size())
        throw DimensionError("graph: edge feature rows != edge count");
    for (int e = 0; e < edge_count(); ++e)
        if (edge_src[e] < 0 || edge_src[e] >= node_count || edge_dst[e] < 0 || edge_dst[e] >= node_count)
            throw std::invalid_argument("graph: edge " + std::to_string(e) + " has an invalid endpoint");
    if (in_offsets.size() != static_cast<std::size_t>(node_count) + 1 ||
        in_edges.size() != static_cast<std::size_t>(edge_count()))
        throw std::invalid_argument("graph: inconsistent incoming-edge index");
}

NetworkGraph make_graph(Eigen::MatrixXd node_features, Eigen::MatrixXd edge_features, std::vector<int> edge_src,
                        std::vector<int> edge_dst)
{
    NetworkGraph g;
    g.node_count = static_cast<int>(node_features.rows());
    g.node_features = std::move(node_features);
    g.edge_features = std::move(edge_features);
    g.edge_src = std::move(edge_src);
    g.edge_dst = std::move(edge_dst);
    if (g.edge_dst.size() != g.edge_src.size() || g.edge_features.rows() != static_cast<Eigen::Index>(g.edge_src.size()))
        throw DimensionError("make_graph: edge list and edge features disagree");
    for (std::size_t e = 0; e < g.edge_src.size(); ++e)
        if (g.edge_src[e] < 0 || g.edge_src[e] >= g.node_count || g.edge_dst[e] < 0 || g.edge_dst[e] >= g.node_count)
            throw std::invalid_argument("make_graph: edge " + std::to_string(e) + " has an invalid endpoint");

    // Counting sort by destination keeps the original edge order within each list.
    g.in_offsets.assign(g.node_count + 1, 0);
    for (int d : g.edge_dst)
        ++g.in_offsets[d + 1];
    std::partial_sum(g.in_offsets.begin(), g.in_offsets.end(), g.in_offsets.begin());
    g.in_edges.resize(g.edge_src.size());
    std::vector<int> cursor(g.in_offsets.begin(), g.in_offsets.end() - 1);
    for (int e = 0; e < g.edge_count(); ++e)
        g.in_edges[cursor[g.edge_dst[e]]++] = e;
    return g;
}

NetworkGraph layout_to_graph(const Layout &layout)
{
    const int n = layout.n_pairs();
    Eigen::MatrixXd nodes(n, 2);
    for (int i = 0; i < n; ++i) {
        nodes(i, 0) = layout.gain(i, i).magnitude();
        nodes(i, 1) = layout.noise_var(i);
    }
    const int e_count = n * (n - 1);
    Eigen::MatrixXd edges(e_count, 2);
    std::vector<int> src, dst;
    src.reserve(e_count);
    dst.reserve(e_count);
    int e = 0;
    for (int v = 0; v < n; ++v) {
        for (int u = 0; u < n; ++u) {
            if (u == v)
                continue;
            edges(e, 0) = layout.gain(u, v).magnitude();
            edges(e, 1) = layout.gain(v, u).magnitude();
            src.push_back(u);
            dst.push_back(v);
            ++e;
        }
    }
    return make_graph(std::move(nodes), std::move(edges), std::move(src), std::move(dst));
}

GraphBatch make_batch(std::span<const NetworkGraph *const> graphs)
{
    GraphBatch b;
    b.node_offsets.push_back(0);
    b.edge_offsets.push_back(0);
    int node_dim = -1, edge_dim = -1;
    for (const auto *g : graphs) {
        if (node_dim < 0) {
            node_dim = g->node_dim();
            edge_dim = g->edge_dim();
        } else if (g->node_dim() != node_dim || g->edge_dim() != edge_dim) {
            throw DimensionError("make_batch: graphs disagree on feature dimensions");
        }
        b.node_offsets.push_back(b.node_offsets.back() + g->node_count);
        b.edge_offsets.push_back(b.edge_offsets.back() + g->edge_count());
    }
    const int n_total = b.node_offsets.back();
    const int e_total = b.edge_offsets.back();
    Eigen::MatrixXd nodes(n_total, std::max(node_dim, 0));
    Eigen::MatrixXd edges(e_total, std::max(edge_dim, 0));
    std::vector<int> src(e_total), dst(e_total);
    for (std::size_t k = 0; k < graphs.size(); ++k) {
        const auto &g = *graphs[k];
        const int no = b.node_offsets[k], eo = b.edge_offsets[k];
        nodes.middleRows(no, g.node_count) = g.node_features;
        edges.middleRows(eo, g.edge_count()) = g.edge_features;
        for (int e = 0; e < g.edge_count(); ++e) {
            src[eo + e] = g.edge_src[e] + no;
            dst[eo + e] = g.edge_dst[e] + no;
        }
    }
    b.graph = make_graph(std::move(nodes), std::move(edges), std::move(src), std::move(dst));
    return b;
}

GraphBatch make_batch(const NetworkGraph &graph)
{
    const NetworkGraph *one[] = {&graph};
    return make_batch(std::span<const NetworkGraph *const>(one));
}

// ---------------------------------------------------------------------------
// Layout file

namespace {

void write_array(std::ostream &os, const std::vector<double> &v)
{
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << format_double(v[i]);
    os << ']';
}

std::size_t line_of(const std::string &text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// Byte offsets where each element of the top-level array begins.
std::vector<std::size_t> record_offsets(const std::string &text)
{
    std::vector<std::size_t> out;
    int depth = 0;
    bool in_string = false, escaped = false, expect_element = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        if (depth == 1 && expect_element) {
            out.push_back(i);
            expect_element = false;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '[' || c == '{') {
            ++depth;
            if (depth == 1)
                expect_element = true;
        } else if (c == ']' || c == '}') {
            --depth;
        } else if (c == ',' && depth == 1) {
            expect_element = true;
        }
    }
    return out;
}

std::vector<double> read_vector(const nlohmann::json &j, const char *key, const std::string &where)
{
    if (!j.contains(key) || !j.at(key).is_array())
        throw std::runtime_error(where + ": missing array \"" + key + "\"");
    std::vector<double> out;
    for (const auto &x : j.at(key)) {
        if (!x.is_number())
            throw std::runtime_error(where + ": non-numeric entry in \"" + key + "\"");
        out.push_back(x.get<double>());
    }
    return out;
}

} // namespace

void save_layouts(std::span<const Layout> layouts, const std::filesystem::path &path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("save_layouts: cannot open " + path.string() + " for writing");
    os << "[";
    for (std::size_t k = 0; k < layouts.size(); ++k) {
        const Layout &l = layouts[k];
        const int n = l.n_pairs();
        os << (k ? ",\n" : "\n") << "{\"n\":" << n << ",\"p_max_mw\":" << format_double(l.p_max_mw())
           << ",\"noise_var\":";
        write_array(os, std::vector<double>(l.noise_vars().begin(), l.noise_vars().end()));
        for (int part = 0; part < 2; ++part) {
            os << (part == 0 ? ",\"gains_re\":[" : ",\"gains_im\":[");
            for (int j = 0; j < n; ++j) {
                std::vector<double> row(n);
                for (int i = 0; i < n; ++i)
                    row[i] = part == 0 ? l.gain(j, i).re : l.gain(j, i).im;
                if (j)
                    os << ',';
                write_array(os, row);
            }
            os << ']';
        }
        os << '}';
    }
    os << "\n]\n";
    if (!os)
        throw std::runtime_error("save_layouts: write failed for " + path.string());
}

std::vector<Layout> load_layouts(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("load_layouts: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    const std::string text = ss.str();

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("malformed JSON in ") + path.string() + ": " + e.what(), line_of(text, e.byte));
    }
    if (!doc.is_array())
        throw ParseError("layout file must contain a top-level array", 1);

    const auto offsets = record_offsets(text);
    std::vector<Layout> out;
    out.reserve(doc.size());
    for (std::size_t k = 0; k < doc.size(); ++k) {
        const std::size_t line = k < offsets.size() ? line_of(text, offsets[k]) : 0;
        const std::string where = "record " + std::to_string(k);
        try {
            const auto &r = doc[k];
            if (!r.is_object() || !r.contains("n") || !r.at("n").is_number_integer())
                throw std::runtime_error(where + ": missing integer \"n\"");
            const int n = r.at("n").get<int>();
            if (n < 1)
                throw std::runtime_error(where + ": n must be >= 1");
            if (!r.contains("p_max_mw") || !r.at("p_max_mw").is_number())
                throw std::runtime_error(where + ": missing number \"p_max_mw\"");
            const double p_max = r.at("p_max_mw").get<double>();
            auto noise = read_vector(r, "noise_var", where);
            std::vector<ComplexGain> gains(static_cast<std::size_t>(n) * n);
            for (int part = 0; part < 2; ++part) {
                const char *key = part == 0 ? "gains_re" : "gains_im";
                if (!r.contains(key) || !r.at(key).is_array() || r.at(key).size() != static_cast<std::size_t>(n))
                    throw std::runtime_error(where + ": \"" + key + "\" must be a square " + std::to_string(n) + "x" +
                                             std::to_string(n) + " block");
                for (int j = 0; j < n; ++j) {
                    const auto &row = r.at(key)[j];
                    if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
                        throw std::runtime_error(where + ": \"" + key + "\" must be a square " + std::to_string(n) +
                                                 "x" + std::to_string(n) + " block (row " + std::to_string(j) + ")");
                    for (int i = 0; i < n; ++i) {
                        if (!row[i].is_number())
                            throw std::runtime_error(where + ": non-numeric gain entry");
                        (part == 0 ? gains[j * n + i].re : gains[j * n + i].im) = row[i].get<double>();
                    }
                }
            }
            out.emplace_back(n, std::move(gains), std::move(noise), p_max);
        } catch (const std::exception &e) {
            std::string msg = e.what();
            if (msg.rfind("record ", 0) != 0)
                msg = where + ": " + msg;
            throw ParseError(msg, line);
        }
    }
    return out;
}

} // namespace airgnn
