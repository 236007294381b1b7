#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "tvc/category.hpp"
#include "tvc/lattice.hpp"

namespace tvc {

struct hilbert_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using LatticePtr = std::shared_ptr<const Lattice>;
using LabelKey = std::uint64_t;

constexpr int kBitsPerEdge = 4;
constexpr int kMaxStateEdges = 16;
constexpr std::uint64_t kEnumerationCap = std::uint64_t(1) << 24;
constexpr double kAmpDropTol = 1e-14;

// boundary labels per hole
struct Sector {
    std::vector<Label> hole_label;
    bool operator==(const Sector&) const = default;
};

inline Label key_get(LabelKey k, int edge) {
    return Label((k >> (kBitsPerEdge * edge)) & ((1u << kBitsPerEdge) - 1));
}
inline LabelKey key_set(LabelKey k, int edge, Label v) {
    LabelKey mask = LabelKey((1u << kBitsPerEdge) - 1) << (kBitsPerEdge * edge);
    return (k & ~mask) | (LabelKey(v) << (kBitsPerEdge * edge));
}

// label of a pin folded to point INTO the given site
Label incoming_label(const CategoryData& cat, const Lattice& lat,
                     const Sector& sec, const Pin& pin, int site, LabelKey key);

Label stub_label(const Lattice& lat, const Sector& sec, int stub);

bool is_admissible(const CategoryData& cat, const Lattice& lat,
                   const Sector& sec, LabelKey key);

// ordered list of admissible labelings (ascending key = lexicographic from
// edge 0 upward)
struct Basis {
    LatticePtr lat;
    Sector sector;
    std::vector<LabelKey> keys;
    std::unordered_map<LabelKey, int> index;
    int dim() const { return int(keys.size()); }
};

Basis enumerate_admissible(const CategoryData& cat, LatticePtr lat,
                           const Sector& sec);

// sparse state over labelings of one lattice+sector
struct State {
    LatticePtr lat;
    Sector sector;
    std::unordered_map<LabelKey, cplx> amp;

    State() = default;
    State(LatticePtr l, Sector s) : lat(std::move(l)), sector(std::move(s)) {}

    void add(LabelKey k, cplx a) {
        auto it = amp.find(k);
        if (it == amp.end()) amp.emplace(k, a);
        else it->second += a;
    }
    void scale(cplx c) {
        for (auto& [k, a] : amp) a *= c;
    }
    void drop_tiny(double tol = kAmpDropTol) {
        for (auto it = amp.begin(); it != amp.end();)
            if (std::abs(it->second) < tol) it = amp.erase(it);
            else ++it;
    }
    std::vector<std::pair<LabelKey, cplx>> sorted_items() const;
    double norm() const;
};

State basis_state(LatticePtr lat, const Sector& sec, LabelKey key);
cplx inner_product(const State& a, const State& b);
State add_states(const State& a, const State& b);
State scaled(const State& a, cplx c);

std::string dump_state(const State& s);

struct LinearOp {
    std::vector<int> support;  // edges the operator may read or write
    std::function<State(const State&)> fn;
    State operator()(const State& s) const { return fn(s); }
};

LinearOp identity_op();
LinearOp compose(const LinearOp& a, const LinearOp& b);  // applies b then a

Eigen::SparseMatrix<cplx> materialize(const LinearOp& op, const Basis& basis);
Eigen::MatrixXcd materialize_dense(const LinearOp& op, const Basis& basis);
LinearOp adjoint(const LinearOp& op, const Basis& basis);

int rank_of_span(const std::vector<State>& states, double tol = 1e-8);

}  // namespace tvc
