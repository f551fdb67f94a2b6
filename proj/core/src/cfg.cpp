#include "pakmarket/cfg.hpp"

#include <algorithm>
#include <queue>

namespace pakmarket {

namespace {

std::string mask_str(Package s) {
    std::string out = "{";
    bool first = true;
    for (int j : members(s)) {
        if (!first) out += ",";
        out += std::to_string(j);
        first = false;
    }
    return out + "}";
}

} // namespace

CostFunctionGraph::CostFunctionGraph(std::vector<Package> nodes, std::vector<Arc> arcs)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    std::sort(arcs_.begin(), arcs_.end());
    arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());

    const int n = static_cast<int>(nodes_.size());
    out_.assign(n, {});
    in_.assign(n, {});
    for (const Arc& a : arcs_) {
        int u = node_index(a.from), v = node_index(a.to);
        if (u < 0 || v < 0) continue; // flagged by validate_cfg
        out_[u].push_back(v);
        in_[v].push_back(u);
    }

    // strict transitive closure by relaxation (handles cycles, flagged later)
    reach_.assign(n, std::vector<bool>(n, false));
    for (int u = 0; u < n; ++u)
        for (int v : out_[u]) reach_[u][v] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (reach_[u][v])
                    for (int w = 0; w < n; ++w)
                        if (reach_[v][w] && !reach_[u][w]) {
                            reach_[u][w] = true;
                            changed = true;
                        }
    }

    // transitive reduction when acyclic: drop arcs implied via an intermediate
    bool acyclic = true;
    for (int u = 0; u < n; ++u)
        if (reach_[u][u]) acyclic = false;
    if (acyclic) {
        std::vector<Arc> kept;
        for (const Arc& a : arcs_) {
            int u = node_index(a.from), v = node_index(a.to);
            if (u < 0 || v < 0) {
                kept.push_back(a);
                continue;
            }
            bool redundant = false;
            for (int w : out_[u])
                if (w != v && reach_[w][v]) redundant = true;
            if (!redundant) kept.push_back(a);
        }
        if (kept.size() != arcs_.size()) {
            arcs_ = std::move(kept);
            out_.assign(n, {});
            in_.assign(n, {});
            for (const Arc& a : arcs_) {
                int u = node_index(a.from), v = node_index(a.to);
                if (u < 0 || v < 0) continue;
                out_[u].push_back(v);
                in_[v].push_back(u);
            }
        }
    }
    for (auto& lst : out_) std::sort(lst.begin(), lst.end());
    for (auto& lst : in_) std::sort(lst.begin(), lst.end());

    // Kahn with canonical tie-breaking; leftover nodes (cycles) appended
    std::vector<int> indeg(n, 0);
    for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(in_[v].size());
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<bool> placed(n, false);
    while (!ready.empty()) {
        int u = ready.top();
        ready.pop();
        placed[u] = true;
        topo_.push_back(nodes_[u]);
        for (int v : out_[u])
            if (--indeg[v] == 0) ready.push(v);
    }
    for (int v = 0; v < n; ++v)
        if (!placed[v]) topo_.push_back(nodes_[v]);
}

bool CostFunctionGraph::has_node(Package s) const { return node_index(s) >= 0; }

int CostFunctionGraph::node_index(Package s) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s);
    if (it == nodes_.end() || *it != s) return -1;
    return static_cast<int>(it - nodes_.begin());
}

Reachability CostFunctionGraph::reachability(Package s) const {
    int i = node_index(s);
    if (i < 0) throw DomainError("reachability: unknown node " + mask_str(s));
    Reachability r;
    const int n = static_cast<int>(nodes_.size());
    r.succ0.push_back(s);
    r.pred0.push_back(s);
    for (int j = 0; j < n; ++j) {
        if (reach_[i][j]) r.succ.push_back(nodes_[j]);
        if (reach_[j][i]) r.pred.push_back(nodes_[j]);
    }
    for (Package q : r.succ)
        if (q != s) r.succ0.push_back(q);
    for (Package q : r.pred)
        if (q != s) r.pred0.push_back(q);
    for (int j : out_[i]) r.out_nbr.push_back(nodes_[j]);
    for (int j : in_[i]) r.in_nbr.push_back(nodes_[j]);
    std::sort(r.succ0.begin(), r.succ0.end());
    std::sort(r.pred0.begin(), r.pred0.end());
    return r;
}

bool CostFunctionGraph::reaches(Package from, Package to) const {
    int u = node_index(from), v = node_index(to);
    if (u < 0 || v < 0) throw DomainError("reaches: unknown node");
    return reach_[u][v];
}

ValidationReport validate_cfg(const CostFunctionGraph& graph) {
    ValidationReport rep;
    const auto& nodes = graph.nodes();
    for (const Arc& a : graph.arcs()) {
        if (!graph.has_node(a.from) || !graph.has_node(a.to))
            rep.violations.push_back({"Def. 4(i)", "arc endpoint is not a node: " +
                                                       mask_str(a.from) + " -> " +
                                                       mask_str(a.to)});
        else if (!a.to.strict_subset_of(a.from))
            rep.violations.push_back({"Def. 4(i)", "arc target is not a strict subset: " +
                                                       mask_str(a.from) + " -> " +
                                                       mask_str(a.to)});
    }
    for (Package s : nodes) {
        for (int j : members(s)) {
            Package sj = singleton(j);
            if (s == sj) continue;
            if (!graph.has_node(sj) || !graph.reaches(s, sj))
                rep.violations.push_back({"Def. 4(ii)", "singleton {" + std::to_string(j) +
                                                            "} unreachable from " +
                                                            mask_str(s)});
        }
    }
    for (Package s : nodes) {
        int i = graph.node_index(s);
        (void)i;
        if (graph.reaches(s, s))
            rep.violations.push_back({"Obs. 1(b)", "cycle through " + mask_str(s)});
    }
    for (Package s : nodes)
        if (s.size() == 1 && !graph.reachability(s).out_nbr.empty())
            rep.violations.push_back({"Obs. 1(c)", "singleton " + mask_str(s) +
                                                       " is not a sink"});
    // weak connectivity
    if (nodes.size() > 1) {
        std::vector<std::vector<int>> undirected(nodes.size());
        for (const Arc& a : graph.arcs()) {
            int u = graph.node_index(a.from), v = graph.node_index(a.to);
            if (u < 0 || v < 0) continue;
            undirected[u].push_back(v);
            undirected[v].push_back(u);
        }
        std::vector<bool> seen(nodes.size(), false);
        std::vector<int> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : undirected[u])
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (!seen[i])
                rep.violations.push_back({"Obs. 1(d)", "node " + mask_str(nodes[i]) +
                                                           " disconnected"});
    }
    return rep;
}

void require_valid_cfg(const CostFunctionGraph& graph) {
    auto rep = validate_cfg(graph);
    if (!rep.ok()) {
        std::string msg = "invalid cost function graph:";
        for (const auto& v : rep.violations) msg += " [" + v.clause + "] " + v.detail + ";";
        throw ValidationError(msg);
    }
}

CostFunctionGraph complete_graph(int n) {
    std::vector<Package> nodes = all_packages(n);
    std::vector<Arc> arcs;
    for (Package t : nodes) {
        if (t.size() < 2) continue;
        for (int j : members(t))
            arcs.push_back({t, Package(t.bits & ~singleton(j).bits)});
    }
    return CostFunctionGraph(std::move(nodes), std::move(arcs));
}

std::vector<int> characteristic_raw(const CostFunctionGraph& graph,
                                    const std::vector<int>& y_totals) {
    if (y_totals.size() != graph.nodes().size())
        throw DomainError("characteristic: totals size mismatch");
    const int n = static_cast<int>(graph.nodes().size());
    std::vector<int> k(n, 0);
    for (Package s : graph.topological_order()) {
        int i = graph.node_index(s);
        int acc = y_totals[i];
        for (Package pre : graph.reachability(s).pred) acc -= k[graph.node_index(pre)];
        k[i] = acc;
    }
    return k;
}

PackageMultiset characteristic(const CostFunctionGraph& graph,
                               const std::vector<int>& y_totals) {
    auto k = characteristic_raw(graph, y_totals);
    PackageMultiset out;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] < 0)
            throw ConsistencyError("characteristic: negative multiplicity at node " +
                                   mask_str(graph.nodes()[i]));
        if (k[i] > 0) out.add(graph.nodes()[i], k[i]);
    }
    return out;
}

std::vector<int> forward_totals(const CostFunctionGraph& graph,
                                const PackageMultiset& k) {
    std::vector<int> y(graph.nodes().size(), 0);
    for (const auto& [s, c] : k.counts())
        if (!graph.has_node(s))
            throw DomainError("forward_totals: package not a graph node");
    for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
        Package s = graph.nodes()[i];
        int acc = k.count(s);
        for (Package pre : graph.reachability(s).pred) acc += k.count(pre);
        y[i] = acc;
    }
    return y;
}

std::vector<std::vector<int>> characteristic_matrix(const CostFunctionGraph& graph) {
    const int n = static_cast<int>(graph.nodes().size());
    std::vector<std::vector<int>> phi(n, std::vector<int>(n, 0));
    std::vector<int> unit(n, 0);
    for (int col = 0; col < n; ++col) {
        unit[col] = 1;
        auto k = characteristic_raw(graph, unit);
        unit[col] = 0;
        for (int row = 0; row < n; ++row) phi[row][col] = k[row];
    }
    return phi;
}

std::vector<Rat> dual_psi(const CostFunctionGraph& graph, const std::vector<Rat>& p) {
    if (p.size() != graph.nodes().size())
        throw DomainError("dual_psi: price vector size mismatch");
    auto phi = characteristic_matrix(graph);
    const int n = static_cast<int>(p.size());
    std::vector<Rat> psi(n, Rat(0));
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row)
            if (phi[row][col] != 0) psi[col] += Rat(phi[row][col]) * p[row];
    return psi;
}

std::vector<int> complete_characteristic_raw(int n, const std::vector<int>& y_totals) {
    auto pkgs = all_packages(n);
    if (y_totals.size() != pkgs.size())
        throw DomainError("complete_characteristic: totals size mismatch");
    std::vector<int> k(pkgs.size(), 0);
    for (std::size_t i = 0; i < pkgs.size(); ++i) {
        Package s = pkgs[i];
        int acc = 0;
        for (std::size_t j = 0; j < pkgs.size(); ++j) {
            Package sp = pkgs[j];
            if (!s.subset_of(sp)) continue;
            int t = sp.size() - s.size();
            acc += (t % 2 == 0 ? 1 : -1) * y_totals[j];
        }
        k[i] = acc;
    }
    return k;
}

PackageMultiset complete_characteristic(int n, const std::vector<int>& y_totals) {
    auto pkgs = all_packages(n);
    auto k = complete_characteristic_raw(n, y_totals);
    PackageMultiset out;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] < 0)
            throw ConsistencyError("complete_characteristic: negative multiplicity at " +
                                   mask_str(pkgs[i]));
        if (k[i] > 0) out.add(pkgs[i], k[i]);
    }
    return out;
}

std::vector<Rat> complete_dual(int n, const std::vector<Rat>& p) {
    auto pkgs = all_packages(n);
    if (p.size() != pkgs.size()) throw DomainError("complete_dual: size mismatch");
    std::vector<Rat> psi(pkgs.size(), Rat(0));
    for (std::size_t i = 0; i < pkgs.size(); ++i) {
        Package s = pkgs[i];
        for (std::size_t j = 0; j < pkgs.size(); ++j) {
            Package sp = pkgs[j];
            if (sp.empty() || !sp.subset_of(s)) continue;
            int t = s.size() - sp.size();
            psi[i] += Rat(t % 2 == 0 ? 1 : -1) * p[j];
        }
    }
    return psi;
}

} // namespace pakmarket
