#include "tvc/category.hpp"

#include <cmath>
#include <numbers>

#include "json.hpp"

namespace tvc {

using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

CategoryData make_empty(int n) {
    CategoryData c;
    c.n = n;
    c.names.resize(size_t(n));
    c.dual_of.assign(size_t(n), 0);
    c.delta_tab.assign(size_t(n) * n * n, 0);
    c.qdim.assign(size_t(n), 0.0);
    c.f_tab.assign(size_t(n) * n * n * n * n * n, cplx(0, 0));
    c.r_tab.assign(size_t(n) * n * n, cplx(0, 0));
    return c;
}

void set_delta(CategoryData& c, Label i, Label j, Label k) {
    c.delta_tab[size_t((i * c.n + j) * c.n + k)] = 1;
}

// F is supported exactly where both sides of the flip are admissible.
bool f_admissible(const CategoryData& c, Label i, Label j, Label m, Label k,
                  Label l, Label n) {
    return c.delta(i, j, m) && c.delta(k, l, c.dual(m)) && c.delta(i, l, n) &&
           c.delta(j, k, c.dual(n));
}

}  // namespace

CategoryData fibonacci() {
    const double tau = (1.0 + std::sqrt(5.0)) / 2.0;
    CategoryData c = make_empty(2);
    c.names = {"1", "tau"};
    c.dual_of = {0, 1};
    c.qdim = {1.0, tau};
    // delta_{ijk} = 0 only when exactly one label is tau.
    for (Label i = 0; i < 2; ++i)
        for (Label j = 0; j < 2; ++j)
            for (Label k = 0; k < 2; ++k)
                if (i + j + k != 1) set_delta(c, i, j, k);

    const double st = std::sqrt(tau);
    for (Label i = 0; i < 2; ++i)
        for (Label j = 0; j < 2; ++j)
            for (Label m = 0; m < 2; ++m)
                for (Label k = 0; k < 2; ++k)
                    for (Label l = 0; l < 2; ++l)
                        for (Label n = 0; n < 2; ++n) {
                            if (!f_admissible(c, i, j, m, k, l, n)) continue;
                            cplx v(1.0, 0.0);
                            if (i == 1 && j == 1 && k == 1 && l == 1) {
                                if (m == 0 && n == 0) v = 1.0 / tau;
                                else if (m != n) v = 1.0 / st;
                                else v = -1.0 / tau;
                            }
                            c.f_ref(i, j, m, k, l, n) = v;
                        }

    // Chirality fixed so the tau twist is exp(-4 pi i / 5).
    c.r_ref(0, 0, 0) = 1.0;
    c.r_ref(0, 1, 1) = 1.0;
    c.r_ref(1, 0, 1) = 1.0;
    c.r_ref(1, 1, 0) = std::polar(1.0, 4.0 * kPi / 5.0);
    c.r_ref(1, 1, 1) = std::polar(1.0, -3.0 * kPi / 5.0);
    return c;
}

CategoryData z2() {
    CategoryData c = make_empty(2);
    c.names = {"0", "1"};
    c.dual_of = {0, 1};
    c.qdim = {1.0, 1.0};
    for (Label i = 0; i < 2; ++i)
        for (Label j = 0; j < 2; ++j)
            for (Label k = 0; k < 2; ++k)
                if ((i + j + k) % 2 == 0) set_delta(c, i, j, k);
    for (Label i = 0; i < 2; ++i)
        for (Label j = 0; j < 2; ++j)
            for (Label m = 0; m < 2; ++m)
                for (Label k = 0; k < 2; ++k)
                    for (Label l = 0; l < 2; ++l)
                        for (Label n = 0; n < 2; ++n)
                            if (f_admissible(c, i, j, m, k, l, n))
                                c.f_ref(i, j, m, k, l, n) = 1.0;
    for (Label i = 0; i < 2; ++i)
        for (Label j = 0; j < 2; ++j)
            for (Label k = 0; k < 2; ++k)
                if (c.delta(i, j, c.dual(k))) c.r_ref(i, j, k) = 1.0;  // bosonic
    return c;
}

std::string save_category(const CategoryData& cat) {
    json doc;
    doc["labels"] = cat.names;
    doc["dual"] = cat.dual_of;
    json triples = json::array();
    for (Label i = 0; i < cat.n; ++i)
        for (Label j = 0; j < cat.n; ++j)
            for (Label k = 0; k < cat.n; ++k)
                if (cat.delta(i, j, k)) triples.push_back({i, j, k});
    doc["delta"] = triples;
    doc["qdim"] = cat.qdim;
    json fs = json::array();
    for (Label i = 0; i < cat.n; ++i)
        for (Label j = 0; j < cat.n; ++j)
            for (Label m = 0; m < cat.n; ++m)
                for (Label k = 0; k < cat.n; ++k)
                    for (Label l = 0; l < cat.n; ++l)
                        for (Label n = 0; n < cat.n; ++n) {
                            cplx v = cat.f(i, j, m, k, l, n);
                            if (v == cplx(0, 0)) continue;
                            fs.push_back({{"idx", {i, j, m, k, l, n}},
                                          {"re", v.real()},
                                          {"im", v.imag()}});
                        }
    doc["F"] = fs;
    json rs = json::array();
    for (Label i = 0; i < cat.n; ++i)
        for (Label j = 0; j < cat.n; ++j)
            for (Label k = 0; k < cat.n; ++k) {
                cplx v = cat.r(i, j, k);
                if (v == cplx(0, 0)) continue;
                rs.push_back(
                    {{"idx", {i, j, k}}, {"re", v.real()}, {"im", v.imag()}});
            }
    doc["R"] = rs;
    return doc.dump(2);
}

CategoryData load_category(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw category_error(std::string("category parse error: ") + e.what());
    }
    try {
        auto labels = doc.at("labels").get<std::vector<std::string>>();
        int n = int(labels.size());
        if (n < 1) throw category_error("category needs at least one label");
        CategoryData c = make_empty(n);
        c.names = labels;
        auto dual = doc.at("dual").get<std::vector<int>>();
        if (int(dual.size()) != n) throw category_error("dual size mismatch");
        c.dual_of = dual;
        for (Label i = 0; i < n; ++i) {
            if (dual[size_t(i)] < 0 || dual[size_t(i)] >= n)
                throw category_error("dual index out of range");
            if (c.dual(c.dual(i)) != i)
                throw category_error("dual is not an involution");
        }
        if (c.dual(kVac) != kVac) throw category_error("dual(1) must be 1");

        for (auto& t : doc.at("delta")) {
            auto v = t.get<std::vector<int>>();
            if (v.size() != 3) throw category_error("delta triple malformed");
            for (int x : v)
                if (x < 0 || x >= n) throw category_error("delta index range");
            set_delta(c, v[0], v[1], v[2]);
        }
        // cyclic and dual symmetry of delta
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j)
                for (Label k = 0; k < n; ++k) {
                    bool d = c.delta(i, j, k);
                    if (d != c.delta(j, k, i))
                        throw category_error("delta not cyclic");
                    if (d != c.delta(c.dual(k), c.dual(j), c.dual(i)))
                        throw category_error("delta not dual-symmetric");
                }
        for (Label i = 0; i < n; ++i)
            if (!c.delta(i, c.dual(i), kVac))
                throw category_error("delta_{i i* 1} must be 1");

        auto qd = doc.at("qdim").get<std::vector<double>>();
        if (int(qd.size()) != n) throw category_error("qdim size mismatch");
        c.qdim = qd;
        if (std::abs(c.d(kVac) - 1.0) > 1e-12)
            throw category_error("d_1 must be 1");
        for (Label i = 0; i < n; ++i) {
            if (c.d(i) <= 0) throw category_error("qdim must be positive");
            if (std::abs(c.d(i) - c.d(c.dual(i))) > 1e-12)
                throw category_error("d_i must equal d_{i*}");
        }

        for (auto& t : doc.at("F")) {
            auto idx = t.at("idx").get<std::vector<int>>();
            if (idx.size() != 6) throw category_error("F index malformed");
            for (int x : idx)
                if (x < 0 || x >= n) throw category_error("F index range");
            c.f_ref(idx[0], idx[1], idx[2], idx[3], idx[4], idx[5]) =
                cplx(t.at("re").get<double>(), t.value("im", 0.0));
        }
        for (auto& t : doc.at("R")) {
            auto idx = t.at("idx").get<std::vector<int>>();
            if (idx.size() != 3) throw category_error("R index malformed");
            for (int x : idx)
                if (x < 0 || x >= n) throw category_error("R index range");
            c.r_ref(idx[0], idx[1], idx[2]) =
                cplx(t.at("re").get<double>(), t.value("im", 0.0));
        }

        // every admissible F/R entry must be present (nonzero)
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j)
                for (Label m = 0; m < n; ++m)
                    for (Label k = 0; k < n; ++k)
                        for (Label l = 0; l < n; ++l)
                            for (Label nn = 0; nn < n; ++nn)
                                if (f_admissible(c, i, j, m, k, l, nn) &&
                                    c.f(i, j, m, k, l, nn) == cplx(0, 0))
                                    throw category_error(
                                        "missing F entry for admissible index");
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j)
                for (Label k = 0; k < n; ++k)
                    if (c.delta(i, j, c.dual(k)) && c.r(i, j, k) == cplx(0, 0))
                        throw category_error(
                            "missing R entry for admissible index");
        return c;
    } catch (const json::exception& e) {
        throw category_error(std::string("category parse error: ") + e.what());
    }
}

ValidationReport validate(const CategoryData& c, double tol) {
    ValidationReport rep;
    rep.tol = tol;
    const int n = c.n;
    auto record = [&](const std::string& name, double res,
                      std::vector<Label> worst) {
        AxiomCheck ch;
        ch.name = name;
        ch.residual = res;
        ch.worst = std::move(worst);
        ch.pass = res <= tol;
        rep.checks.push_back(std::move(ch));
    };

    {
        double worst = 0;
        std::vector<Label> at;
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j)
                for (Label k = 0; k < n; ++k)
                    for (Label l = 0; l < n; ++l) {
                        double lhs = 0, rhs = 0;
                        for (Label m = 0; m < n; ++m) {
                            lhs += c.delta(i, j, c.dual(m)) *
                                   c.delta(m, k, c.dual(l));
                            rhs += c.delta(j, k, c.dual(m)) *
                                   c.delta(i, m, c.dual(l));
                        }
                        double r = std::abs(lhs - rhs);
                        if (r > worst) worst = r, at = {i, j, k, l};
                    }
        record("fusion_associativity", worst, at);
    }
    {
        double worst = 0;
        std::vector<Label> at;
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j) {
                double s = 0;
                for (Label k = 0; k < n; ++k)
                    if (c.delta(i, j, k)) s += c.d(k);
                double r = std::abs(c.d(i) * c.d(j) - s);
                if (r > worst) worst = r, at = {i, j};
            }
        record("qdim_consistency", worst, at);
    }
    {
        // F vanishes unless both vertex pairs are admissible, and conversely
        // never vanishes on admissible entries.
        double worst = 0;
        std::vector<Label> at;
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j)
                for (Label m = 0; m < n; ++m)
                    for (Label k = 0; k < n; ++k)
                        for (Label l = 0; l < n; ++l)
                            for (Label nn = 0; nn < n; ++nn) {
                                bool adm = f_admissible(c, i, j, m, k, l, nn);
                                double r = adm ? 0.0
                                               : std::abs(c.f(i, j, m, k, l, nn));
                                if (r > worst) worst = r, at = {i, j, m, k, l, nn};
                            }
        record("physicality", worst, at);
    }
    {
        double worst = 0;
        std::vector<Label> at;
        for (Label m = 0; m < n; ++m)
            for (Label l = 0; l < n; ++l)
                for (Label q = 0; q < n; ++q)
                    for (Label k = 0; k < n; ++k)
                        for (Label p = 0; p < n; ++p)
                            for (Label j = 0; j < n; ++j)
                                for (Label i = 0; i < n; ++i)
                                    for (Label s = 0; s < n; ++s)
                                        for (Label r = 0; r < n; ++r) {
                                            cplx lhs = 0;
                                            for (Label nn = 0; nn < n; ++nn)
                                                lhs += c.f(m, l, q, k, p, nn) *
                                                       c.f(j, i, c.dual(p), m, nn, s) *
                                                       c.f(j, s, nn, l, k, r);
                                            cplx rhs =
                                                c.f(j, i, c.dual(p), c.dual(q), k, r) *
                                                c.f(c.dual(r), i, c.dual(q), m, l, s);
                                            double d = std::abs(lhs - rhs);
                                            if (d > worst)
                                                worst = d,
                                                at = {m, l, q, k, p, j, i, s, r};
                                        }
        record("pentagon", worst, at);
    }
    {
        double worst = 0;
        std::vector<Label> at;
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j)
                for (Label m = 0; m < n; ++m)
                    for (Label k = 0; k < n; ++k)
                        for (Label l = 0; l < n; ++l)
                            for (Label nn = 0; nn < n; ++nn) {
                                double r = std::abs(
                                    std::conj(c.f(i, j, m, k, l, nn)) -
                                    c.f(c.dual(i), c.dual(j), c.dual(m),
                                        c.dual(k), c.dual(l), c.dual(nn)));
                                if (r > worst) worst = r, at = {i, j, m, k, l, nn};
                            }
        record("unitarity_conjugation", worst, at);
    }
    {
        // rows of the F-matrix for fixed outer labels are orthonormal
        double worst = 0;
        std::vector<Label> at;
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j)
                for (Label k = 0; k < n; ++k)
                    for (Label l = 0; l < n; ++l)
                        for (Label m = 0; m < n; ++m)
                            for (Label m2 = 0; m2 < n; ++m2) {
                                bool adm_m = c.delta(i, j, m) &&
                                             c.delta(k, l, c.dual(m));
                                bool adm_m2 = c.delta(i, j, m2) &&
                                              c.delta(k, l, c.dual(m2));
                                if (!adm_m || !adm_m2) continue;
                                cplx s = 0;
                                for (Label nn = 0; nn < n; ++nn)
                                    s += c.f(i, j, m, k, l, nn) *
                                         std::conj(c.f(i, j, m2, k, l, nn));
                                double want = (m == m2) ? 1.0 : 0.0;
                                double r = std::abs(s - want);
                                if (r > worst) worst = r, at = {i, j, m, k, l, m2};
                            }
        record("unitarity_rows", worst, at);
    }
    {
        double worst = 0;
        std::vector<Label> at;
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j)
                for (Label m = 0; m < n; ++m)
                    for (Label k = 0; k < n; ++k)
                        for (Label l = 0; l < n; ++l)
                            for (Label nn = 0; nn < n; ++nn) {
                                double r1 = std::abs(
                                    c.f(i, j, m, k, l, nn) -
                                    c.f(j, i, m, l, k, c.dual(nn)));
                                double r2 = std::abs(
                                    c.f(l, k, c.dual(m), j, i, nn) -
                                    c.f(i, m, j, c.dual(k), nn, l) *
                                        std::sqrt(c.d(m) * c.d(nn) /
                                                  (c.d(j) * c.d(l))));
                                double r = std::max(r1, r2);
                                if (r > worst) worst = r, at = {i, j, m, k, l, nn};
                            }
        record("tetrahedral_symmetry", worst, at);
    }
    {
        double worst = 0;
        std::vector<Label> at;
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j)
                for (Label k = 0; k < n; ++k) {
                    cplx want = c.delta(i, j, k)
                                    ? cplx(std::sqrt(c.d(k) / (c.d(i) * c.d(j))), 0)
                                    : cplx(0, 0);
                    double r = std::abs(
                        c.f(i, c.dual(i), kVac, c.dual(j), j, k) - want);
                    if (r > worst) worst = r, at = {i, j, k};
                }
        record("normalization", worst, at);
    }
    {
        double worst = 0;
        std::vector<Label> at;
        for (Label i = 0; i < n; ++i)
            for (Label j = 0; j < n; ++j)
                for (Label k = 0; k < n; ++k) {
                    if (!c.delta(i, j, c.dual(k))) continue;
                    double r = std::abs(std::abs(c.r(i, j, k)) - 1.0);
                    if (r > worst) worst = r, at = {i, j, k};
                }
        record("r_unimodular", worst, at);
    }
    {
        // hexagon identities, both crossings
        double worst = 0;
        std::vector<Label> at;
        for (Label k = 0; k < n; ++k)
            for (Label i = 0; i < n; ++i)
                for (Label j = 0; j < n; ++j)
                    for (Label m = 0; m < n; ++m)
                        for (Label l = 0; l < n; ++l)
                            for (Label g = 0; g < n; ++g) {
                                cplx lhs = c.r(k, i, m) *
                                           c.f(c.dual(k), c.dual(i), m, l,
                                               c.dual(j), g) *
                                           c.r(k, j, g);
                                cplx rhs = 0;
                                for (Label nn = 0; nn < n; ++nn)
                                    rhs += c.f(c.dual(i), c.dual(k), m, l,
                                               c.dual(j), nn) *
                                           c.r(k, nn, l) *
                                           c.f(c.dual(j), c.dual(i), nn, l,
                                               c.dual(k), g);
                                double r = std::abs(lhs - rhs);
                                if (r > worst) worst = r, at = {k, i, j, m, l, g};
                            }
        record("hexagon_1", worst, at);
    }
    {
        double worst = 0;
        std::vector<Label> at;
        for (Label i = 0; i < n; ++i)
            for (Label k = 0; k < n; ++k)
                for (Label j = 0; j < n; ++j)
                    for (Label m = 0; m < n; ++m)
                        for (Label l = 0; l < n; ++l)
                            for (Label g = 0; g < n; ++g) {
                                cplx lhs = c.r(i, k, m) *
                                           c.f(k, i, c.dual(m), c.dual(l), j,
                                               c.dual(g)) *
                                           c.r(j, k, g);
                                cplx rhs = 0;
                                for (Label nn = 0; nn < n; ++nn)
                                    rhs += c.f(i, k, c.dual(m), c.dual(l), j,
                                               c.dual(nn)) *
                                           c.r(nn, k, l) *
                                           c.f(j, i, c.dual(nn), c.dual(l), k,
                                               c.dual(g));
                                double r = std::abs(lhs - rhs);
                                if (r > worst) worst = r, at = {i, k, j, m, l, g};
                            }
        record("hexagon_2", worst, at);
    }
    return rep;
}

double total_dim(const CategoryData& cat) {
    double s = 0;
    for (Label i = 0; i < cat.n; ++i) s += cat.d(i) * cat.d(i);
    return std::sqrt(s);
}

cplx twist(const CategoryData& cat, Label i) {
    return std::conj(cat.r(cat.dual(i), i, kVac));
}

SMatrixResult s_matrix(const CategoryData& cat) {
    const int n = cat.n;
    const double D = total_dim(cat);
    SMatrixResult res;
    res.s.assign(size_t(n), std::vector<cplx>(size_t(n), cplx(0, 0)));
    // Hopf link of loops i and j.  Resolving the two crossings fuses the
    // strands twice through a channel k, picking up the monodromy
    // R^{ij}_k R^{ji}_k; the bubble and loop rules then reduce the leftover
    // theta-graph to d_k.
    for (Label i = 0; i < n; ++i)
        for (Label j = 0; j < n; ++j) {
            cplx v = 0;
            for (Label k = 0; k < n; ++k) {
                if (!cat.delta(i, j, cat.dual(k))) continue;
                v += cat.d(k) * cat.r(i, j, k) * cat.r(j, i, k);
            }
            res.s[size_t(i)][size_t(j)] = v / D;
        }
    double worst = 0;
    for (Label i = 0; i < n; ++i)
        for (Label j = 0; j < n; ++j) {
            cplx v = 0;
            for (Label k = 0; k < n; ++k)
                v += res.s[size_t(i)][size_t(k)] *
                     std::conj(res.s[size_t(j)][size_t(k)]);
            worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
        }
    res.unitarity_residual = worst;
    return res;
}

DoubledTorusRep doubled_torus_rep(const CategoryData& cat) {
    const int n = cat.n;
    auto sm = s_matrix(cat);
    DoubledTorusRep rep;
    rep.n = n;
    rep.modular = sm.modular();
    const int nn = n * n;
    rep.s_d.assign(size_t(nn), std::vector<cplx>(size_t(nn), cplx(0, 0)));
    rep.t_d.assign(size_t(nn), std::vector<cplx>(size_t(nn), cplx(0, 0)));
    for (Label a = 0; a < n; ++a)
        for (Label b = 0; b < n; ++b) {
            int row = a * n + b;
            rep.t_d[size_t(row)][size_t(row)] =
                twist(cat, a) * std::conj(twist(cat, b));
            for (Label a2 = 0; a2 < n; ++a2)
                for (Label b2 = 0; b2 < n; ++b2)
                    rep.s_d[size_t(row)][size_t(a2 * n + b2)] =
                        sm.s[size_t(a)][size_t(a2)] *
                        std::conj(sm.s[size_t(b)][size_t(b2)]);
        }
    return rep;
}

}  // namespace tvc
