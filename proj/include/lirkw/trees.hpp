#pragma once

#include <compare>
#include <string>
#include <vector>

#include "lirkw/common.hpp"
#include "lirkw/tableau.hpp"

namespace lirkw {

/// Vertex colors: meagre vertices stand for the nonlinear right-hand side and
/// its derivatives, fat vertices for an application of the linear term, and
/// square vertices for a time differentiation of the fat vertex they lead to.
enum class Color { Meagre, Fat, Square };

/// Rooted tree over the three vertex colors, kept in canonical form:
/// children are sorted by a total order (color rank, then vertex count, then
/// recursive comparison), so isomorphic trees share one representation.
///
/// Grammar: fat vertices have at most one child; square vertices have exactly
/// one child, which must be square or fat.
class LwTree {
public:
    explicit LwTree(Color color, std::vector<LwTree> children = {});

    Color color() const { return color_; }
    const std::vector<LwTree>& children() const { return children_; }
    /// Vertex count rho.
    int order() const { return order_; }
    bool all_meagre() const;
    /// True if some fat leaf is reached by a plain fat edge (its parent is
    /// not a square vertex), counting a bare fat root as well. Conditions for
    /// such trees vanish for any tableau whose gamma rows and g sum to zero.
    bool ends_in_free_fat() const;

    std::string bracket_string() const;

    static int compare(const LwTree& x, const LwTree& y);
    bool operator==(const LwTree& o) const { return compare(*this, o) == 0; }
    bool operator<(const LwTree& o) const { return compare(*this, o) < 0; }

private:
    Color color_;
    std::vector<LwTree> children_;
    int order_;
};

enum class TreeFamily { T, LW1, LW2, LW3 };

/// All non-isomorphic family trees with order <= max_order, in canonical
/// order. T is the all-meagre subset; LW2 removes square-rooted trees from
/// LW1; LW3 shares LW2's tree set.
std::vector<LwTree> enumerate_trees(TreeFamily family, int max_order);

/// Classical density: 1 for the leaf, rho(t) times the product of the
/// children's densities otherwise. Defined for all-meagre trees only;
/// throws NotAMeagreTree.
long density(const LwTree& tree);

/// The standard catalog of the 23 trees of order <= 3, in the indexing used
/// by reports (tau1..tau23). Index i-1 holds tau_i.
const std::vector<LwTree>& tree_catalog();

/// Catalog index (1-based) of a tree of order <= 3, or 0 if absent.
int catalog_index(const LwTree& tree);

/// Evaluates the order-condition sum Phi^type(tree) for a numeric tableau by
/// nested summation over stage indices. The root factor is b_j for a meagre
/// root, g_j for a fat root, and (type 1 only) g_j*gamma_{j,j}^p for a fat
/// root preceded by p squares. Interior edges contribute a_{j,k} (meagre
/// child), gamma_{j,k} (fat child), and for a fat child preceded by p squares
/// gamma_{j,k}*gamma_{k,k}^p, gamma_{j,j}^{p+1}, or gamma_{j,j}^p*gamma_{j,k}
/// under types 1, 2, 3 respectively. Throws FamilyMismatch when the tree is
/// outside the type's family (square roots with type 2 or 3).
double phi_sum(const Tableau& tb, const LwTree& tree, int type);

struct OrderConditionRow {
    LwTree tree;
    std::string label;    // tauN for cataloged trees, bracket string otherwise
    double target = 0.0;  // 1/density for all-meagre trees, 0 otherwise
    double phi = 0.0;
    double residual = 0.0;
};

/// One row per family tree of order <= p for the given method type
/// (type 1 -> LW1, types 2 and 3 -> LW2). A tableau passes at order p iff
/// every |residual| <= 1e-10.
std::vector<OrderConditionRow> verify_order(const Tableau& tb, int type, int p);

/// The curated third-order condition subsets for tableaux built under the
/// usual structural simplifications: 9 rows for type 1, 10 for type 2.
/// Labels follow the conventional reduced-set numbering.
std::vector<OrderConditionRow> reduced_conditions(const Tableau& tb, int type);

inline bool all_pass(const std::vector<OrderConditionRow>& rows, double tol = 1e-10) {
    for (const auto& r : rows)
        if (!(std::abs(r.residual) <= tol)) return false;
    return true;
}

}  // namespace lirkw
