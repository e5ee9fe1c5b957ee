#include "cpdd/partition.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace cpdd {

NodeGraph build_graph(const Band& band) {
    NodeGraph g;
    g.n_nodes = band.n_active();
    g.offsets.assign(static_cast<std::size_t>(g.n_nodes) + 1, 0);

    std::vector<std::vector<std::int32_t>> adj(g.n_nodes);
    for (std::int32_t i = 0; i < g.n_nodes; ++i) {
        for (const Lattice& c : laplacian_neighbors(band.active()[i].lat, band.dim())) {
            std::int32_t j = band.find(c);
            if (j >= 0 && band.is_active_index(j)) adj[i].push_back(j);
        }
        std::sort(adj[i].begin(), adj[i].end());
    }
    for (std::int32_t i = 0; i < g.n_nodes; ++i) {
        g.offsets[i + 1] = g.offsets[i] + static_cast<std::int64_t>(adj[i].size());
    }
    g.adjacency.reserve(static_cast<std::size_t>(g.offsets.back()));
    for (const auto& row : adj) g.adjacency.insert(g.adjacency.end(), row.begin(), row.end());
    return g;
}

std::vector<std::int32_t> DisjointPartition::part_sizes() const {
    std::vector<std::int32_t> sizes(n_subdomains, 0);
    for (std::int32_t l : labels) ++sizes[l];
    return sizes;
}

double DisjointPartition::balance_ratio() const {
    auto sizes = part_sizes();
    auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    return *lo > 0 ? static_cast<double>(*hi) / static_cast<double>(*lo)
                   : std::numeric_limits<double>::infinity();
}

std::int64_t edge_cut(const NodeGraph& graph, std::span<const std::int32_t> labels) {
    std::int64_t cut = 0;
    for (std::int32_t i = 0; i < graph.n_nodes; ++i) {
        for (std::int32_t j : graph.neighbors(i)) {
            if (j > i && labels[i] != labels[j]) ++cut;
        }
    }
    return cut;
}

std::vector<std::int32_t> part_components(const NodeGraph& graph,
                                          std::span<const std::int32_t> labels,
                                          std::int32_t n_parts) {
    std::vector<std::int32_t> components(n_parts, 0);
    std::vector<char> seen(graph.n_nodes, 0);
    std::deque<std::int32_t> queue;
    for (std::int32_t start = 0; start < graph.n_nodes; ++start) {
        if (seen[start]) continue;
        ++components[labels[start]];
        seen[start] = 1;
        queue.push_back(start);
        while (!queue.empty()) {
            std::int32_t u = queue.front();
            queue.pop_front();
            for (std::int32_t v : graph.neighbors(u)) {
                if (!seen[v] && labels[v] == labels[u]) {
                    seen[v] = 1;
                    queue.push_back(v);
                }
            }
        }
    }
    return components;
}

namespace {

double ratio_after_move(std::vector<std::int32_t>& sizes, std::int32_t from, std::int32_t to) {
    --sizes[from];
    ++sizes[to];
    auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    double r = *lo > 0 ? static_cast<double>(*hi) / static_cast<double>(*lo)
                       : std::numeric_limits<double>::infinity();
    ++sizes[from];
    --sizes[to];
    return r;
}

}  // namespace

DisjointPartition partition_graph(const NodeGraph& graph, std::int32_t n_parts,
                                  std::uint64_t seed, const PartitionOptions& options) {
    if (n_parts < 1) throw Error(ErrorCode::invalid_config, "n_parts must be >= 1");
    if (n_parts > graph.n_nodes) {
        throw Error(ErrorCode::too_many_parts,
                    "requested " + std::to_string(n_parts) + " parts for " +
                        std::to_string(graph.n_nodes) + " nodes");
    }

    DisjointPartition part;
    part.n_subdomains = n_parts;
    part.labels.assign(graph.n_nodes, -1);
    if (n_parts == 1) {
        std::fill(part.labels.begin(), part.labels.end(), 0);
        return part;
    }

    // Greedy graph growing: BFS regions seeded at the unassigned node of
    // minimum index (band order = lattice order).
    const std::int32_t base = graph.n_nodes / n_parts;
    const std::int32_t rem = graph.n_nodes % n_parts;
    std::int32_t scan = 0;
    std::deque<std::int32_t> frontier;
    for (std::int32_t j = 0; j < n_parts; ++j) {
        const std::int32_t target = base + (j < rem ? 1 : 0);
        std::int32_t count = 0;
        frontier.clear();
        while (count < target) {
            if (frontier.empty()) {
                while (scan < graph.n_nodes && part.labels[scan] != -1) ++scan;
                frontier.push_back(scan);
            }
            std::int32_t u = frontier.front();
            frontier.pop_front();
            if (part.labels[u] != -1) continue;
            part.labels[u] = j;
            ++count;
            for (std::int32_t v : graph.neighbors(u)) {
                if (part.labels[v] == -1) frontier.push_back(v);
            }
        }
    }

    // Boundary refinement: move nodes to the neighboring part that lowers the
    // edge cut most, respecting the balance tolerance.
    auto sizes = part.part_sizes();
    std::vector<std::int32_t> order(graph.n_nodes);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::vector<std::int32_t> gain(n_parts, 0);

    for (int sweep = 0; sweep < options.max_refine_sweeps; ++sweep) {
        std::shuffle(order.begin(), order.end(), rng);
        std::int64_t moves = 0;
        for (std::int32_t u : order) {
            const std::int32_t a = part.labels[u];
            if (sizes[a] <= 1) continue;
            std::vector<std::int32_t> touched;
            for (std::int32_t v : graph.neighbors(u)) {
                std::int32_t l = part.labels[v];
                if (gain[l] == 0) touched.push_back(l);
                ++gain[l];
            }
            std::int32_t best = a;
            std::int32_t best_gain = 0;
            for (std::int32_t l : touched) {
                if (l == a) continue;
                std::int32_t delta = gain[l] - gain[a];
                if (delta <= 0) continue;
                if (delta > best_gain || (delta == best_gain && l < best)) {
                    best = l;
                    best_gain = delta;
                }
            }
            for (std::int32_t l : touched) gain[l] = 0;
            if (best == a) continue;
            double current = static_cast<double>(*std::max_element(sizes.begin(), sizes.end())) /
                             static_cast<double>(*std::min_element(sizes.begin(), sizes.end()));
            double after = ratio_after_move(sizes, a, best);
            if (after <= std::max(options.balance_tolerance, current)) {
                part.labels[u] = best;
                --sizes[a];
                ++sizes[best];
                ++moves;
            }
        }
        if (moves == 0) break;
    }

    double ratio = part.balance_ratio();
    if (ratio > options.balance_tolerance + 1e-12) {
        std::ostringstream os;
        os << "partition balance ratio " << ratio << " exceeds tolerance "
           << options.balance_tolerance;
        part.warnings.push_back(os.str());
    }
    auto comps = part_components(graph, part.labels, n_parts);
    for (std::int32_t j = 0; j < n_parts; ++j) {
        if (comps[j] > 1) {
            part.warnings.push_back("part " + std::to_string(j) + " induces " +
                                    std::to_string(comps[j]) + " connected components");
        }
    }
    return part;
}

DisjointPartition import_partition(const std::string& path, std::int32_t n_nodes,
                                   std::optional<std::int32_t> n_parts) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open partition file " + path);

    DisjointPartition part;
    part.labels.reserve(n_nodes);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::int64_t label;
        if (!(ls >> label)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw Error(ErrorCode::wrong_length,
                        path + ":" + std::to_string(line_no) + ": expected an integer label");
        }
        if (label < 0 || (n_parts && label >= *n_parts)) {
            throw Error(ErrorCode::label_out_of_range,
                        path + ":" + std::to_string(line_no) + ": label " + std::to_string(label) +
                            (n_parts ? " outside 0.." + std::to_string(*n_parts - 1) : " is negative"));
        }
        part.labels.push_back(static_cast<std::int32_t>(label));
    }
    if (static_cast<std::int32_t>(part.labels.size()) != n_nodes) {
        throw Error(ErrorCode::wrong_length,
                    path + ": has " + std::to_string(part.labels.size()) + " labels, band has " +
                        std::to_string(n_nodes) + " active nodes");
    }
    part.n_subdomains =
        n_parts ? *n_parts : *std::max_element(part.labels.begin(), part.labels.end()) + 1;

    auto sizes = part.part_sizes();
    for (std::int32_t j = 0; j < part.n_subdomains; ++j) {
        if (sizes[j] == 0) part.warnings.push_back("imported partition leaves part " +
                                                   std::to_string(j) + " empty");
    }
    double ratio = part.balance_ratio();
    if (ratio > 1.2) {
        part.warnings.push_back("imported partition balance ratio " + std::to_string(ratio) +
                                " exceeds 1.2");
    }
    return part;
}

void export_partition(const std::string& path, const DisjointPartition& partition) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::io_error, "cannot write partition file " + path);
    for (std::int32_t l : partition.labels) os << l << "\n";
}

}  // namespace cpdd
