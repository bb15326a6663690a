#include <algorithm>
#include <fstream>
#include <functional>
#include <queue>
#include <sstream>
#include <string>

#include "llocg/errors.hpp"
#include "llocg/polytope.hpp"

namespace llocg {

DagGraph::DagGraph(int node_count, std::vector<std::pair<int, int>> edges, int source, int sink)
    : node_count_(node_count), edges_(std::move(edges)), source_(source), sink_(sink) {
    if (node_count_ < 2) throw ArgumentError("dag: need at least two nodes");
    if (source_ < 0 || source_ >= node_count_ || sink_ < 0 || sink_ >= node_count_ || source_ == sink_) {
        throw ArgumentError("dag: invalid source/sink");
    }
    const auto n = static_cast<std::size_t>(node_count_);
    out_.assign(n, {});
    std::vector<std::vector<int>> in(n);
    std::vector<int> indegree(n, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto [u, v] = edges_[e];
        if (u < 0 || u >= node_count_ || v < 0 || v >= node_count_) {
            throw ArgumentError("dag: edge endpoint out of range");
        }
        if (u == v) throw ArgumentError("dag: self-loop on node " + std::to_string(u));
        out_[static_cast<std::size_t>(u)].push_back(static_cast<int>(e));
        in[static_cast<std::size_t>(v)].push_back(static_cast<int>(e));
        ++indegree[static_cast<std::size_t>(v)];
    }

    // Kahn's algorithm, smallest ready node first, so the order is canonical.
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int i = 0; i < node_count_; ++i) {
        if (indegree[static_cast<std::size_t>(i)] == 0) ready.push(i);
    }
    while (!ready.empty()) {
        const int u = ready.top();
        ready.pop();
        topo_.push_back(u);
        for (int e : out_[static_cast<std::size_t>(u)]) {
            const int v = edges_[static_cast<std::size_t>(e)].second;
            if (--indegree[static_cast<std::size_t>(v)] == 0) ready.push(v);
        }
    }
    if (topo_.size() != n) throw ArgumentError("dag: graph contains a cycle");

    std::vector<char> from_source(n, 0), to_sink(n, 0);
    from_source[static_cast<std::size_t>(source_)] = 1;
    for (int u : topo_) {
        if (!from_source[static_cast<std::size_t>(u)]) continue;
        for (int e : out_[static_cast<std::size_t>(u)]) {
            from_source[static_cast<std::size_t>(edges_[static_cast<std::size_t>(e)].second)] = 1;
        }
    }
    to_sink[static_cast<std::size_t>(sink_)] = 1;
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
        for (int e : out_[static_cast<std::size_t>(*it)]) {
            if (to_sink[static_cast<std::size_t>(edges_[static_cast<std::size_t>(e)].second)]) {
                to_sink[static_cast<std::size_t>(*it)] = 1;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!from_source[i] || !to_sink[i]) {
            throw ArgumentError("dag: node " + std::to_string(i) + " lies on no source-sink path");
        }
    }
}

DagGraph DagGraph::parse(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    int max_node = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        int u = 0, v = 0;
        std::string extra;
        if (!(ls >> u >> v) || (ls >> extra)) {
            throw ArgumentError("dag: malformed edge on line " + std::to_string(line_no));
        }
        if (u < 0 || v < 0) throw ArgumentError("dag: negative node on line " + std::to_string(line_no));
        edges.emplace_back(u, v);
        max_node = std::max({max_node, u, v});
    }
    if (edges.empty()) throw ArgumentError("dag: no edges");
    return DagGraph(max_node + 1, std::move(edges), 0, max_node);
}

DagGraph DagGraph::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("dag: cannot open " + path);
    return parse(in);
}

double DagGraph::path_count() const {
    std::vector<double> count(static_cast<std::size_t>(node_count_), 0.0);
    count[static_cast<std::size_t>(source_)] = 1.0;
    for (int u : topo_) {
        for (int e : out_[static_cast<std::size_t>(u)]) {
            count[static_cast<std::size_t>(edges_[static_cast<std::size_t>(e)].second)] +=
                count[static_cast<std::size_t>(u)];
        }
    }
    return count[static_cast<std::size_t>(sink_)];
}

int DagGraph::longest_path_edges() const {
    std::vector<int> len(static_cast<std::size_t>(node_count_), -1);
    len[static_cast<std::size_t>(source_)] = 0;
    for (int u : topo_) {
        if (len[static_cast<std::size_t>(u)] < 0) continue;
        for (int e : out_[static_cast<std::size_t>(u)]) {
            auto& target = len[static_cast<std::size_t>(edges_[static_cast<std::size_t>(e)].second)];
            target = std::max(target, len[static_cast<std::size_t>(u)] + 1);
        }
    }
    return len[static_cast<std::size_t>(sink_)];
}

std::vector<std::vector<int>> DagGraph::enumerate_paths(std::size_t limit) const {
    std::vector<std::vector<int>> paths;
    std::vector<int> stack;
    std::function<void(int)> walk = [&](int u) {
        if (u == sink_) {
            if (paths.size() >= limit) throw ArgumentError("dag: too many paths to enumerate");
            paths.push_back(stack);
            return;
        }
        for (int e : out_[static_cast<std::size_t>(u)]) {
            stack.push_back(e);
            walk(edges_[static_cast<std::size_t>(e)].second);
            stack.pop_back();
        }
    };
    walk(source_);
    return paths;
}

}  // namespace llocg
