#include "lirkw/trees.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace lirkw {

LwTree::LwTree(Color color, std::vector<LwTree> children)
    : color_(color), children_(std::move(children)) {
    if (color_ == Color::Fat && children_.size() > 1)
        throw std::invalid_argument("LwTree: fat vertices are singly branched");
    if (color_ == Color::Square) {
        if (children_.size() != 1)
            throw std::invalid_argument("LwTree: square vertices need exactly one child");
        if (children_.front().color() == Color::Meagre)
            throw std::invalid_argument("LwTree: square children must be square or fat");
    }
    std::sort(children_.begin(), children_.end());
    order_ = 1;
    for (const auto& c : children_) order_ += c.order();
}

bool LwTree::all_meagre() const {
    if (color_ != Color::Meagre) return false;
    for (const auto& c : children_)
        if (!c.all_meagre()) return false;
    return true;
}

bool LwTree::ends_in_free_fat() const {
    std::function<bool(const LwTree&, Color)> walk = [&](const LwTree& t, Color parent) {
        if (t.color() == Color::Fat && t.children().empty() && parent != Color::Square)
            return true;
        for (const auto& c : t.children())
            if (walk(c, t.color())) return true;
        return false;
    };
    return walk(*this, Color::Meagre);
}

int LwTree::compare(const LwTree& x, const LwTree& y) {
    if (x.color_ != y.color_) return x.color_ < y.color_ ? -1 : 1;
    if (x.order_ != y.order_) return x.order_ < y.order_ ? -1 : 1;
    const std::size_t n = std::min(x.children_.size(), y.children_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(x.children_[i], y.children_[i]); c != 0) return c;
    if (x.children_.size() != y.children_.size())
        return x.children_.size() < y.children_.size() ? -1 : 1;
    return 0;
}

std::string LwTree::bracket_string() const {
    if (color_ == Color::Square) {
        // render the whole square chain as theta_p around the fat's subtree
        int p = 0;
        const LwTree* cur = this;
        while (cur->color() == Color::Square) {
            ++p;
            cur = &cur->children().front();
        }
        std::string inner = cur->children().empty() ? " " : cur->children().front().bracket_string();
        return "θ" + std::to_string(p) + "[" + inner + "]";
    }
    std::string inner;
    if (children_.empty()) {
        inner = " ";
    } else {
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (i) inner += " ";
            inner += children_[i].bracket_string();
        }
    }
    return "[" + inner + "]_" + (color_ == Color::Meagre ? "." : "o");
}

namespace {

// All LW1 trees with exactly `order` vertices.
std::vector<LwTree> gen_order(int order, std::vector<std::vector<LwTree>>& memo) {
    if (static_cast<int>(memo.size()) > order && !memo[order].empty()) return memo[order];
    std::vector<LwTree> out;
    if (order == 1) {
        out.emplace_back(Color::Meagre);
        out.emplace_back(Color::Fat);
    } else {
        std::vector<LwTree> pool;
        for (int k = 1; k < order; ++k)
            for (const auto& t : gen_order(k, memo)) pool.push_back(t);
        std::sort(pool.begin(), pool.end());

        // meagre root: non-decreasing child sequences totalling order-1
        std::vector<LwTree> chosen;
        std::function<void(int, std::size_t)> pick = [&](int remaining, std::size_t start) {
            if (remaining == 0) {
                out.emplace_back(Color::Meagre, chosen);
                return;
            }
            for (std::size_t i = start; i < pool.size(); ++i) {
                if (pool[i].order() > remaining) continue;
                chosen.push_back(pool[i]);
                pick(remaining - pool[i].order(), i);
                chosen.pop_back();
            }
        };
        pick(order - 1, 0);

        for (const auto& sub : gen_order(order - 1, memo)) {
            out.emplace_back(Color::Fat, std::vector<LwTree>{sub});
            if (sub.color() != Color::Meagre)
                out.emplace_back(Color::Square, std::vector<LwTree>{sub});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (static_cast<int>(memo.size()) <= order) memo.resize(order + 1);
    memo[order] = out;
    return out;
}

}  // namespace

std::vector<LwTree> enumerate_trees(TreeFamily family, int max_order) {
    if (max_order < 1 || max_order > 6)
        throw std::invalid_argument("enumerate_trees: max_order must be in [1, 6]");
    std::vector<std::vector<LwTree>> memo;
    std::vector<LwTree> out;
    for (int k = 1; k <= max_order; ++k) {
        for (const auto& t : gen_order(k, memo)) {
            switch (family) {
                case TreeFamily::T:
                    if (t.all_meagre()) out.push_back(t);
                    break;
                case TreeFamily::LW1:
                    out.push_back(t);
                    break;
                case TreeFamily::LW2:
                case TreeFamily::LW3:
                    if (t.color() != Color::Square) out.push_back(t);
                    break;
            }
        }
    }
    return out;
}

long density(const LwTree& tree) {
    if (!tree.all_meagre()) throw NotAMeagreTree("density: tree has non-meagre vertices");
    long p = tree.order();
    for (const auto& c : tree.children()) p *= density(c);
    return p;
}

namespace {

LwTree m(std::vector<LwTree> ch = {}) { return LwTree(Color::Meagre, std::move(ch)); }
LwTree f(std::vector<LwTree> ch = {}) { return LwTree(Color::Fat, std::move(ch)); }
LwTree sq(LwTree ch) { return LwTree(Color::Square, {std::move(ch)}); }

std::vector<LwTree> build_catalog() {
    std::vector<LwTree> c;
    c.reserve(23);
    c.push_back(m());                        // tau1
    c.push_back(f());                        // tau2
    c.push_back(m({m()}));                   // tau3
    c.push_back(m({f()}));                   // tau4
    c.push_back(f({m()}));                   // tau5
    c.push_back(f({f()}));                   // tau6
    c.push_back(sq(f()));                    // tau7
    c.push_back(m({m(), m()}));              // tau8
    c.push_back(m({f(), m()}));              // tau9
    c.push_back(m({f(), f()}));              // tau10
    c.push_back(m({m({m()})}));              // tau11
    c.push_back(m({m({f()})}));              // tau12
    c.push_back(m({f({f()})}));              // tau13
    c.push_back(m({f({m()})}));              // tau14
    c.push_back(f({f({m()})}));              // tau15
    c.push_back(f({m({m()})}));              // tau16
    c.push_back(f({m({f()})}));              // tau17
    c.push_back(f({f({f()})}));              // tau18
    c.push_back(sq(sq(f())));                // tau19
    c.push_back(f({sq(f())}));               // tau20
    c.push_back(sq(f({f()})));               // tau21
    c.push_back(sq(f({m()})));               // tau22
    c.push_back(m({sq(f())}));               // tau23
    return c;
}

}  // namespace

const std::vector<LwTree>& tree_catalog() {
    static const std::vector<LwTree> catalog = build_catalog();
    return catalog;
}

int catalog_index(const LwTree& tree) {
    const auto& catalog = tree_catalog();
    for (std::size_t i = 0; i < catalog.size(); ++i)
        if (catalog[i] == tree) return static_cast<int>(i) + 1;
    return 0;
}

namespace {

/// Evaluation view of a vertex: a meagre vertex, or a linear-term vertex
/// (the fat node) together with the count p of squares leading to it.
struct EvalNode {
    bool meagre = true;
    int p = 0;
    std::vector<EvalNode> children;
};

EvalNode to_eval(const LwTree& t) {
    EvalNode n;
    const LwTree* cur = &t;
    if (t.color() == Color::Square) {
        n.meagre = false;
        while (cur->color() == Color::Square) {
            ++n.p;
            cur = &cur->children().front();
        }
    } else {
        n.meagre = (t.color() == Color::Meagre);
    }
    for (const auto& c : cur->children()) n.children.push_back(to_eval(c));
    return n;
}

double phi_bar(const EvalNode& n, int j, const Tableau& tb, int type) {
    const int s = tb.stages;
    auto child_product = [&](int k) {
        double prod = 1.0;
        for (const auto& c : n.children) prod *= phi_bar(c, k, tb, type);
        return prod;
    };
    if (n.meagre) {
        double sum = 0.0;
        for (int k = 0; k < s; ++k)
            if (tb.a(j, k) != 0.0) sum += tb.a(j, k) * child_product(k);
        return sum;
    }
    if (n.p == 0) {
        double sum = 0.0;
        for (int k = 0; k < s; ++k)
            if (tb.gamma(j, k) != 0.0) sum += tb.gamma(j, k) * child_product(k);
        return sum;
    }
    switch (type) {
        case 1: {
            double sum = 0.0;
            for (int k = 0; k < s; ++k)
                if (tb.gamma(j, k) != 0.0)
                    sum += tb.gamma(j, k) * std::pow(tb.gamma(k, k), n.p) * child_product(k);
            return sum;
        }
        case 2:
            return std::pow(tb.gamma(j, j), n.p + 1) * child_product(j);
        case 3: {
            double sum = 0.0;
            const double diag = std::pow(tb.gamma(j, j), n.p);
            for (int k = 0; k < s; ++k)
                if (tb.gamma(j, k) != 0.0) sum += diag * tb.gamma(j, k) * child_product(k);
            return sum;
        }
        default:
            throw std::invalid_argument("phi_sum: type must be 1, 2 or 3");
    }
}

}  // namespace

double phi_sum(const Tableau& tb, const LwTree& tree, int type) {
    if (type < 1 || type > 3) throw std::invalid_argument("phi_sum: type must be 1, 2 or 3");
    if (tree.color() == Color::Square && type != 1)
        throw FamilyMismatch("phi_sum: square-rooted trees exist only in the type-1 family");
    const EvalNode root = to_eval(tree);
    double total = 0.0;
    for (int j = 0; j < tb.stages; ++j) {
        double w;
        if (root.meagre)
            w = tb.b[j];
        else if (root.p == 0)
            w = tb.g[j];
        else
            w = tb.g[j] * std::pow(tb.gamma(j, j), root.p);
        if (w == 0.0) continue;
        double prod = 1.0;
        for (const auto& c : root.children) prod *= phi_bar(c, j, tb, type);
        total += w * prod;
    }
    return total;
}

namespace {

OrderConditionRow make_row(const Tableau& tb, const LwTree& t, int type, std::string label) {
    OrderConditionRow row{t, std::move(label), 0.0, 0.0, 0.0};
    row.target = t.all_meagre() ? 1.0 / static_cast<double>(density(t)) : 0.0;
    row.phi = phi_sum(tb, t, type);
    row.residual = row.phi - row.target;
    return row;
}

std::string label_for(const LwTree& t) {
    if (int idx = catalog_index(t); idx > 0) return "tau" + std::to_string(idx);
    return t.bracket_string();
}

}  // namespace

std::vector<OrderConditionRow> verify_order(const Tableau& tb, int type, int p) {
    const TreeFamily family = (type == 1) ? TreeFamily::LW1 : TreeFamily::LW2;
    std::vector<OrderConditionRow> rows;
    for (const auto& t : enumerate_trees(family, p))
        rows.push_back(make_row(tb, t, type, label_for(t)));
    return rows;
}

std::vector<OrderConditionRow> reduced_conditions(const Tableau& tb, int type) {
    const auto& cat = tree_catalog();
    std::vector<OrderConditionRow> rows;
    if (type == 1) {
        for (int idx : {1, 3, 5, 8, 11, 14, 15, 16, 22})
            rows.push_back(make_row(tb, cat[idx - 1], 1, "tau" + std::to_string(idx)));
    } else if (type == 2) {
        for (int idx : {1, 3, 5, 8, 11, 14, 15, 16})
            rows.push_back(make_row(tb, cat[idx - 1], 2, "tau" + std::to_string(idx)));
        // conventional reduced-set numbering for the two square-chain rows
        rows.push_back(make_row(tb, cat[20 - 1], 2, "tau18"));
        rows.push_back(make_row(tb, cat[23 - 1], 2, "tau19"));
    } else {
        throw std::invalid_argument("reduced_conditions: type must be 1 or 2");
    }
    return rows;
}

}  // namespace lirkw
