#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pakmarket/market.hpp"
#include "pakmarket/rational.hpp"

namespace pakmarket {

struct Arc {
    Package from; // superset T
    Package to;   // strict subset S
    auto operator<=>(const Arc&) const = default;
};

struct ValidationReport {
    struct Violation {
        std::string clause; // e.g. "Def. 4(i)"
        std::string detail;
    };
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

struct Reachability {
    std::vector<Package> succ0;   // R+0(S), includes S
    std::vector<Package> succ;    // R+(S)
    std::vector<Package> pred0;   // R-0(S), includes S
    std::vector<Package> pred;    // R-(S)
    std::vector<Package> out_nbr; // N+(S), direct successors
    std::vector<Package> in_nbr;  // N-(S), direct predecessors
};

/// DAG over packages. Arcs point from supersets to strict subsets; every node
/// must reach the singleton of each of its members; singletons are sinks.
class CostFunctionGraph {
public:
    CostFunctionGraph(std::vector<Package> nodes, std::vector<Arc> arcs);

    const std::vector<Package>& nodes() const { return nodes_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    bool has_node(Package s) const;
    int node_index(Package s) const; // -1 when absent

    /// Cached transitive reachability per node.
    Reachability reachability(Package s) const;

    /// True iff `to` is reachable from `from` (strictly, following arcs).
    bool reaches(Package from, Package to) const;

    /// Nodes in topological order, supersets before subsets, canonical
    /// tie-breaking (Kahn's method).
    const std::vector<Package>& topological_order() const { return topo_; }

private:
    std::vector<Package> nodes_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<bool>> reach_; // reach_[i][j]: j strictly reachable from i
    std::vector<std::vector<int>> out_, in_;
    std::vector<Package> topo_;
};

/// Checks every clause of the CFG definition; empty report iff valid.
ValidationReport validate_cfg(const CostFunctionGraph& graph);

/// Throws ValidationError when the report is nonempty.
void require_valid_cfg(const CostFunctionGraph& graph);

/// Complete CFG on n varieties: all nonempty subsets, arcs from each package
/// to its subsets one level down.
CostFunctionGraph complete_graph(int n);

/// Algorithm 1: recover the partition k from per-node assignment totals Y
/// (indexed like graph.nodes()). Throws ConsistencyError on negative k_S.
PackageMultiset characteristic(const CostFunctionGraph& graph,
                               const std::vector<int>& y_totals);

/// Same linear map without the consistency check; entries may be negative.
std::vector<int> characteristic_raw(const CostFunctionGraph& graph,
                                    const std::vector<int>& y_totals);

/// Forward map: Y_S = sum of k_{S'} over S' in R-0(S).
std::vector<int> forward_totals(const CostFunctionGraph& graph,
                                const PackageMultiset& k);

/// Integer matrix Phi with characteristic(graph, Y) = Phi * Y, rows/columns
/// in graph.nodes() order.
std::vector<std::vector<int>> characteristic_matrix(const CostFunctionGraph& graph);

/// Characteristic function dual: psi = Phi^T * p.
std::vector<Rat> dual_psi(const CostFunctionGraph& graph, const std::vector<Rat>& p);

/// Closed forms for the complete graph; vectors indexed by mask-1 over the
/// canonical nonempty packages of an n-variety ground set.
PackageMultiset complete_characteristic(int n, const std::vector<int>& y_totals);
std::vector<int> complete_characteristic_raw(int n, const std::vector<int>& y_totals);
std::vector<Rat> complete_dual(int n, const std::vector<Rat>& p);

} // namespace pakmarket
