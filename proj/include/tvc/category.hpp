#pragma once

#include <complex>
#include <string>
#include <vector>

namespace tvc {

using cplx = std::complex<double>;

// A simple-object label. Index 0 is always the trivial particle.
using Label = int;
constexpr Label kVac = 0;

// Full algebraic data of a multiplicity-free anyon model: fusion rules
// delta_{ijk}, quantum dimensions d_i, the F tensor F^{ijm}_{kln} and the
// braiding R^{ij}_k.  All tensors are stored densely over label tuples;
// admissibility is always re-derived from delta.
struct CategoryData {
    int n = 0;
    std::vector<std::string> names;
    std::vector<Label> dual_of;
    std::vector<char> delta_tab;   // n^3, delta_{ijk} with all labels incoming
    std::vector<double> qdim;
    std::vector<cplx> f_tab;       // n^6, F^{ijm}_{kln}
    std::vector<cplx> r_tab;       // n^3, R^{ij}_k (zero where delta_{ijk*}=0)

    Label dual(Label i) const { return dual_of[size_t(i)]; }
    bool delta(Label i, Label j, Label k) const {
        return delta_tab[size_t((i * n + j) * n + k)] != 0;
    }
    double d(Label i) const { return qdim[size_t(i)]; }
    cplx f(Label i, Label j, Label m, Label k, Label l, Label nn) const {
        return f_tab[size_t(((((i * n + j) * n + m) * n + k) * n + l) * n + nn)];
    }
    cplx r(Label i, Label j, Label k) const {
        return r_tab[size_t((i * n + j) * n + k)];
    }

    cplx& f_ref(Label i, Label j, Label m, Label k, Label l, Label nn) {
        return f_tab[size_t(((((i * n + j) * n + m) * n + k) * n + l) * n + nn)];
    }
    cplx& r_ref(Label i, Label j, Label k) {
        return r_tab[size_t((i * n + j) * n + k)];
    }

    // 1 iff (i,j) can fuse to k, i.e. delta_{i j k*} = 1.
    bool fuses_to(Label i, Label j, Label k) const {
        return delta(i, j, dual(k));
    }
};

struct AxiomCheck {
    std::string name;
    double residual = 0.0;
    std::vector<Label> worst;      // offending index tuple
    bool pass = false;
};

struct ValidationReport {
    std::vector<AxiomCheck> checks;
    double tol = 0.0;
    bool all_pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const AxiomCheck* find(const std::string& name) const {
        for (auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// Thrown on structurally invalid category input (validate() never throws).
struct category_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CategoryData fibonacci();
CategoryData z2();
CategoryData load_category(const std::string& json_text);
std::string save_category(const CategoryData& cat);

ValidationReport validate(const CategoryData& cat, double tol = 1e-12);
double total_dim(const CategoryData& cat);
cplx twist(const CategoryData& cat, Label i);

// S_{ij} from the Hopf-link evaluation.  unitarity_residual reports how far
// S is from unitary; values above tolerance mean the category is not modular.
struct SMatrixResult {
    std::vector<std::vector<cplx>> s;
    double unitarity_residual = 0.0;
    bool modular(double tol = 1e-10) const { return unitarity_residual < tol; }
};
SMatrixResult s_matrix(const CategoryData& cat);

// Genus-1 representation of the doubled theory: S_D = S (x) conj(S) and
// T_D = diag(theta_i theta_j^*) over doubled labels (i,j), row-major in i,j.
struct DoubledTorusRep {
    int n = 0;  // single-category label count; matrices are n^2 x n^2
    std::vector<std::vector<cplx>> s_d;
    std::vector<std::vector<cplx>> t_d;
    bool modular = false;
};
DoubledTorusRep doubled_torus_rep(const CategoryData& cat);

}  // namespace tvc
