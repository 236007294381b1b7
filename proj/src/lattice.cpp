#include "tvc/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "json.hpp"

namespace tvc {

using json = nlohmann::json;

namespace {

int pin_index(const Lattice& lat, int site, const Pin& p) {
    const auto& r = lat.rot[size_t(site)];
    for (int i = 0; i < int(r.size()); ++i)
        if (r[size_t(i)] == p) return i;
    throw lattice_error("pin not found at site");
}

}  // namespace

void Lattice::refresh_faces() {
    faces.clear();
    plaquettes.clear();
    const int ne = n_edges();
    std::vector<char> used(size_t(2 * ne), 0);
    for (int d0 = 0; d0 < 2 * ne; ++d0) {
        if (used[size_t(d0)]) continue;
        FaceWalk w;
        int cur = d0;
        do {
            used[size_t(cur)] = 1;
            int e = cur / 2;
            bool fwd = (cur % 2 == 0);
            w.steps.push_back({Pin{Pin::kEdge, e, fwd ? 1 : 0}, fwd});
            int head = fwd ? edges[size_t(e)].v : edges[size_t(e)].u;
            int pi = pin_index(*this, head, Pin{Pin::kEdge, e, fwd ? 1 : 0});
            for (;;) {
                pi = (pi + 1) % int(rot[size_t(head)].size());
                Pin p = rot[size_t(head)][size_t(pi)];
                if (p.kind == Pin::kStub) {
                    w.steps.push_back({p, true});
                    w.is_hole = true;
                    if (w.hole_id < 0) w.hole_id = stubs[size_t(p.id)].hole;
                    else if (w.hole_id != stubs[size_t(p.id)].hole)
                        throw lattice_error("face touches two holes");
                    continue;
                }
                cur = 2 * p.id + (p.end == 0 ? 0 : 1);
                break;
            }
        } while (cur != d0);
        faces.push_back(std::move(w));
    }
    for (int f = 0; f < int(faces.size()); ++f)
        if (!faces[size_t(f)].is_hole) plaquettes.push_back(f);
}

void Lattice::check_consistent() const {
    if (int(rot.size()) != n_sites) throw lattice_error("rot size");
    std::vector<int> ends(edges.size(), 0);
    std::vector<int> stub_seen(stubs.size(), 0);
    for (int s = 0; s < n_sites; ++s) {
        for (const Pin& p : rot[size_t(s)]) {
            if (p.kind == Pin::kEdge) {
                const auto& e = edges[size_t(p.id)];
                int at = p.end == 0 ? e.u : e.v;
                if (at != s) throw lattice_error("pin endpoint mismatch");
                ends[size_t(p.id)]++;
            } else {
                if (stubs[size_t(p.id)].site != s)
                    throw lattice_error("stub site mismatch");
                stub_seen[size_t(p.id)]++;
            }
        }
    }
    for (int c : ends)
        if (c != 2) throw lattice_error("edge must have two pins");
    for (int c : stub_seen)
        if (c != 1) throw lattice_error("stub must have one pin");
}

Lattice::PlaquetteWalk Lattice::plaquette_walk(int face_index) const {
    const FaceWalk& f = faces[size_t(face_index)];
    if (f.is_hole) throw lattice_error("face is a hole, not a plaquette");
    PlaquetteWalk w;
    int m = int(f.steps.size());
    for (int i = 0; i < m; ++i) {
        const WalkStep& st = f.steps[size_t(i)];
        int e = st.pin.id;
        bool fwd = st.forward;
        int head = fwd ? edges[size_t(e)].v : edges[size_t(e)].u;
        w.edge_ids.push_back(e);
        w.forward.push_back(fwd);
        w.sites.push_back(head);
        // the leg at head is the pin that is neither the arrival end of this
        // step nor the departure end of the next step
        Pin arrive{Pin::kEdge, e, fwd ? 1 : 0};
        const WalkStep& nx = f.steps[size_t((i + 1) % m)];
        Pin depart{Pin::kEdge, nx.pin.id, nx.forward ? 0 : 1};
        const auto& r = rot[size_t(head)];
        if (r.size() != 3)
            throw lattice_error("plaquette walk needs trivalent sites");
        Pin leg;
        bool found = false;
        for (const Pin& p : r)
            if (!(p == arrive) && !(p == depart)) {
                leg = p;
                found = true;
                break;
            }
        if (!found) throw lattice_error("degenerate plaquette corner");
        w.legs.push_back(leg);
    }
    return w;
}

bool Lattice::same_structure(const Lattice& other) const {
    if (n_sites != other.n_sites || edges.size() != other.edges.size() ||
        stubs.size() != other.stubs.size())
        return false;
    for (size_t e = 0; e < edges.size(); ++e)
        if (edges[e].u != other.edges[e].u || edges[e].v != other.edges[e].v)
            return false;
    for (size_t s = 0; s < stubs.size(); ++s)
        if (stubs[s].site != other.stubs[s].site ||
            stubs[s].hole != other.stubs[s].hole ||
            stubs[s].marked != other.stubs[s].marked)
            return false;
    for (int v = 0; v < n_sites; ++v) {
        const auto& a = rot[size_t(v)];
        const auto& b = other.rot[size_t(v)];
        if (a.size() != b.size()) return false;
        int k = int(a.size());
        bool ok = false;
        for (int off = 0; off < k && !ok; ++off) {
            bool match = true;
            for (int i = 0; i < k; ++i)
                if (!(a[size_t(i)] == b[size_t((i + off) % k)])) {
                    match = false;
                    break;
                }
            ok = match;
        }
        if (!ok) return false;
    }
    return true;
}

std::optional<EdgeRelabeling> find_relabeling(const Lattice& a,
                                              const Lattice& b) {
    if (a.n_sites != b.n_sites || a.edges.size() != b.edges.size() ||
        a.stubs.size() != b.stubs.size())
        return std::nullopt;
    if (a.n_sites == 0) return std::nullopt;

    const int ns = a.n_sites;
    std::vector<int> site_map, site_rev, edge_map, edge_rev, stub_map, stub_rev;
    std::vector<int> site_off;
    std::vector<bool> flip;

    auto try_seed = [&](int b0, int off0) -> bool {
        site_map.assign(size_t(ns), -1);
        site_rev.assign(size_t(ns), -1);
        site_off.assign(size_t(ns), -1);
        edge_map.assign(a.edges.size(), -1);
        edge_rev.assign(b.edges.size(), -1);
        stub_map.assign(a.stubs.size(), -1);
        stub_rev.assign(b.stubs.size(), -1);
        flip.assign(a.edges.size(), false);

        site_map[0] = b0;
        site_rev[size_t(b0)] = 0;
        site_off[0] = off0;
        std::vector<int> pending{0};
        while (!pending.empty()) {
            int sa = pending.back();
            pending.pop_back();
            int sb = site_map[size_t(sa)];
            int off = site_off[size_t(sa)];
            const auto& ra = a.rot[size_t(sa)];
            const auto& rb = b.rot[size_t(sb)];
            if (ra.size() != rb.size()) return false;
            int k = int(ra.size());
            for (int i = 0; i < k; ++i) {
                const Pin& pa = ra[size_t(i)];
                const Pin& pb = rb[size_t((i + off) % k)];
                if (pa.kind != pb.kind) return false;
                if (pa.kind == Pin::kStub) {
                    const Stub& s1 = a.stubs[size_t(pa.id)];
                    const Stub& s2 = b.stubs[size_t(pb.id)];
                    if (s1.hole != s2.hole || s1.marked != s2.marked)
                        return false;
                    if (stub_map[size_t(pa.id)] == -1 &&
                        stub_rev[size_t(pb.id)] == -1) {
                        stub_map[size_t(pa.id)] = pb.id;
                        stub_rev[size_t(pb.id)] = pa.id;
                    } else if (stub_map[size_t(pa.id)] != pb.id)
                        return false;
                    continue;
                }
                if (edge_map[size_t(pa.id)] == -1 &&
                    edge_rev[size_t(pb.id)] == -1) {
                    edge_map[size_t(pa.id)] = pb.id;
                    edge_rev[size_t(pb.id)] = pa.id;
                    flip[size_t(pa.id)] = (pa.end != pb.end);
                } else if (edge_map[size_t(pa.id)] != pb.id ||
                           flip[size_t(pa.id)] != (pa.end != pb.end))
                    return false;
                int fa = pa.end == 0 ? a.edges[size_t(pa.id)].v
                                     : a.edges[size_t(pa.id)].u;
                int fb = pb.end == 0 ? b.edges[size_t(pb.id)].v
                                     : b.edges[size_t(pb.id)].u;
                Pin qa{Pin::kEdge, pa.id, 1 - pa.end};
                Pin qb{Pin::kEdge, pb.id, 1 - pb.end};
                int ia = pin_index(a, fa, qa);
                int ib = pin_index(b, fb, qb);
                int kb = int(b.rot[size_t(fb)].size());
                if (int(a.rot[size_t(fa)].size()) != kb) return false;
                int need = ((ib - ia) % kb + kb) % kb;
                if (site_map[size_t(fa)] == -1 && site_rev[size_t(fb)] == -1) {
                    site_map[size_t(fa)] = fb;
                    site_rev[size_t(fb)] = fa;
                    site_off[size_t(fa)] = need;
                    pending.push_back(fa);
                } else if (site_map[size_t(fa)] != fb ||
                           site_off[size_t(fa)] != need)
                    return false;
            }
        }
        for (int e = 0; e < int(a.edges.size()); ++e)
            if (edge_map[size_t(e)] == -1) return false;
        for (int v = 0; v < ns; ++v)
            if (site_map[size_t(v)] == -1) return false;
        return true;
    };

    for (int b0 = 0; b0 < ns; ++b0)
        for (int off = 0; off < int(a.rot[0].size()); ++off)
            if (try_seed(b0, off)) {
                EdgeRelabeling rel;
                rel.edge_map = edge_map;
                rel.flipped.assign(flip.begin(), flip.end());
                return rel;
            }
    return std::nullopt;
}

// --- TriMesh -> dual ---------------------------------------------------------

Lattice dual_lattice(const TriMesh& mesh) {
    const int nf = int(mesh.faces.size());
    const int ne = int(mesh.edge_ends.size());
    std::vector<std::vector<std::pair<int, bool>>> usage(size_t(ne));
    for (int f = 0; f < nf; ++f)
        for (auto [e, fwd] : mesh.faces[size_t(f)]) {
            if (e < 0 || e >= ne)
                throw lattice_error("face references bad edge");
            usage[size_t(e)].push_back({f, fwd});
        }

    Lattice lat;
    lat.n_sites = nf;
    lat.rot.assign(size_t(nf), {});
    lat.n_holes = mesh.n_holes;
    std::vector<int> dual_id(size_t(ne), -1);
    std::vector<bool> dual_is_stub(size_t(ne), false);
    for (int e = 0; e < ne; ++e) {
        auto& us = usage[size_t(e)];
        if (us.size() == 2) {
            if (us[0].second == us[1].second)
                throw lattice_error("inconsistent orientation (non-orientable?)");
            DualEdge de;
            de.u = us[0].second ? us[0].first : us[1].first;
            de.v = us[0].second ? us[1].first : us[0].first;
            dual_id[size_t(e)] = int(lat.edges.size());
            lat.edges.push_back(de);
        } else if (us.size() == 1) {
            auto it = mesh.boundary_hole.find(e);
            if (it == mesh.boundary_hole.end())
                throw lattice_error("boundary edge without hole assignment");
            Stub s;
            s.site = us[0].first;
            s.hole = it->second;
            auto mk = mesh.marked_of_hole.find(it->second);
            s.marked = (mk != mesh.marked_of_hole.end() && mk->second == e);
            dual_id[size_t(e)] = int(lat.stubs.size());
            dual_is_stub[size_t(e)] = true;
            lat.stubs.push_back(s);
        } else {
            throw lattice_error("edge used by more than two faces (non-manifold)");
        }
    }
    for (int f = 0; f < nf; ++f) {
        for (auto [e, fwd] : mesh.faces[size_t(f)]) {
            Pin p;
            if (dual_is_stub[size_t(e)]) {
                p.kind = Pin::kStub;
                p.id = dual_id[size_t(e)];
                p.end = 0;
            } else {
                p.kind = Pin::kEdge;
                p.id = dual_id[size_t(e)];
                p.end = fwd ? 0 : 1;
            }
            lat.rot[size_t(f)].push_back(p);
        }
    }
    lat.check_consistent();
    lat.refresh_faces();
    return lat;
}

Lattice dual_of_triangulation(const std::vector<std::array<int, 3>>& triangles,
                              const std::map<int, std::array<int, 2>>& marked) {
    if (triangles.empty()) throw lattice_error("empty triangulation");
    int nv = 0;
    for (auto& t : triangles) {
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw lattice_error("triangle with repeated vertex");
        for (int v : t) nv = std::max(nv, v + 1);
    }
    std::map<std::pair<int, int>, int> edge_id;
    std::vector<std::array<int, 2>> edge_ends;
    auto get_edge = [&](int u, int v) {
        auto key = std::minmax(u, v);
        auto it = edge_id.find(key);
        if (it != edge_id.end()) return it->second;
        int id = int(edge_ends.size());
        edge_id[key] = id;
        edge_ends.push_back({key.first, key.second});
        return id;
    };
    struct Side {
        int tri;
        int slot;
    };
    std::map<int, std::vector<Side>> sides;
    std::vector<std::array<int, 3>> tri_edges(triangles.size());
    for (int t = 0; t < int(triangles.size()); ++t)
        for (int s = 0; s < 3; ++s) {
            int u = triangles[size_t(t)][size_t(s)];
            int v = triangles[size_t(t)][size_t((s + 1) % 3)];
            int e = get_edge(u, v);
            tri_edges[size_t(t)][size_t(s)] = e;
            sides[e].push_back({t, s});
            if (sides[e].size() > 2)
                throw lattice_error("non-manifold: edge in more than two triangles");
        }
    std::vector<int> flipped(triangles.size(), -1);
    std::vector<int> queue{0};
    flipped[0] = 0;
    auto dir_of = [&](int t, int s, int fl) {
        int u = triangles[size_t(t)][size_t(s)];
        int v = triangles[size_t(t)][size_t((s + 1) % 3)];
        if (fl) std::swap(u, v);
        return std::make_pair(u, v);
    };
    while (!queue.empty()) {
        int t = queue.back();
        queue.pop_back();
        for (int s = 0; s < 3; ++s) {
            int e = tri_edges[size_t(t)][size_t(s)];
            for (auto& sd : sides[e]) {
                if (sd.tri == t && sd.slot == s) continue;
                auto d1 = dir_of(t, s, flipped[size_t(t)]);
                auto d2 = dir_of(sd.tri, sd.slot, 0);
                int need = (d1 == d2) ? 1 : 0;  // shared edge must run opposite
                if (flipped[size_t(sd.tri)] == -1) {
                    flipped[size_t(sd.tri)] = need;
                    queue.push_back(sd.tri);
                } else if (flipped[size_t(sd.tri)] != need) {
                    throw lattice_error("non-orientable triangulation");
                }
            }
        }
    }
    for (int t = 0; t < int(triangles.size()); ++t)
        if (flipped[size_t(t)] == -1)
            throw lattice_error("triangulation not connected");

    TriMesh mesh;
    mesh.n_vertices = nv;
    mesh.edge_ends = edge_ends;
    mesh.faces.resize(triangles.size());
    for (int t = 0; t < int(triangles.size()); ++t) {
        for (int s = 0; s < 3; ++s) {
            int slot = flipped[size_t(t)] ? 2 - s : s;
            int e = tri_edges[size_t(t)][size_t(slot)];
            auto [u, v] = dir_of(t, slot, flipped[size_t(t)]);
            bool fwd = (edge_ends[size_t(e)][0] == u &&
                        edge_ends[size_t(e)][1] == v);
            mesh.faces[size_t(t)].push_back({e, fwd});
        }
    }
    std::vector<int> bedges;
    for (auto& [e, us] : sides)
        if (us.size() == 1) bedges.push_back(e);
    std::sort(bedges.begin(), bedges.end());
    std::map<int, std::vector<int>> at_vertex;
    for (int e : bedges) {
        at_vertex[edge_ends[size_t(e)][0]].push_back(e);
        at_vertex[edge_ends[size_t(e)][1]].push_back(e);
    }
    for (auto& [v, es] : at_vertex)
        if (es.size() != 2)
            throw lattice_error("boundary vertex not on exactly two boundary edges");
    std::set<int> unassigned(bedges.begin(), bedges.end());
    int hole = 0;
    while (!unassigned.empty()) {
        int start = *unassigned.begin();
        int cur = start, prev_v = edge_ends[size_t(start)][0];
        do {
            unassigned.erase(cur);
            mesh.boundary_hole[cur] = hole;
            int nv2 = edge_ends[size_t(cur)][0] == prev_v
                          ? edge_ends[size_t(cur)][1]
                          : edge_ends[size_t(cur)][0];
            auto& es = at_vertex[nv2];
            cur = (es[0] == cur) ? es[1] : es[0];
            prev_v = nv2;
        } while (cur != start);
        ++hole;
    }
    mesh.n_holes = hole;
    for (auto& [h, pair] : marked) {
        auto key = std::minmax(pair[0], pair[1]);
        auto it = edge_id.find({key.first, key.second});
        if (it == edge_id.end()) throw lattice_error("marked edge not found");
        auto bh = mesh.boundary_hole.find(it->second);
        if (bh == mesh.boundary_hole.end() || bh->second != h)
            throw lattice_error("marked edge not on that boundary component");
        mesh.marked_of_hole[h] = it->second;
    }
    for (int h = 0; h < hole; ++h)
        if (!mesh.marked_of_hole.count(h))
            for (int e : bedges)
                if (mesh.boundary_hole[e] == h) {
                    mesh.marked_of_hole[h] = e;
                    break;
                }
    return dual_lattice(mesh);
}

// --- constructors ------------------------------------------------------------

TriMesh torus_tri_mesh(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols < 2)
        throw lattice_error("torus lattice needs rows*cols >= 2");
    TriMesh m;
    m.n_vertices = rows * cols;
    auto vid = [&](int i, int j) {
        return ((i % rows + rows) % rows) * cols + ((j % cols + cols) % cols);
    };
    auto h_id = [&](int i, int j) {
        return ((i % rows + rows) % rows) * cols + ((j % cols + cols) % cols);
    };
    auto v_id = [&](int i, int j) { return rows * cols + h_id(i, j); };
    auto d_id = [&](int i, int j) { return 2 * rows * cols + h_id(i, j); };
    m.edge_ends.resize(size_t(3 * rows * cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            m.edge_ends[size_t(h_id(i, j))] = {vid(i, j), vid(i, j + 1)};
            m.edge_ends[size_t(v_id(i, j))] = {vid(i, j), vid(i + 1, j)};
            m.edge_ends[size_t(d_id(i, j))] = {vid(i, j + 1), vid(i + 1, j)};
        }
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            m.faces.push_back({{v_id(i, j), true},
                               {d_id(i, j), false},
                               {h_id(i, j), false}});
            m.faces.push_back({{d_id(i, j), true},
                               {h_id(i + 1, j), true},
                               {v_id(i, j + 1), false}});
        }
    return m;
}

Lattice torus_lattice(int rows, int cols) {
    Lattice lat = dual_lattice(torus_tri_mesh(rows, cols));
    for (int f : lat.plaquettes) {
        auto w = lat.plaquette_walk(f);
        std::set<int> distinct(w.edge_ids.begin(), w.edge_ids.end());
        if (distinct.size() != w.edge_ids.size())
            throw lattice_error("torus lattice too small: plaquette repeats edges");
    }
    return lat;
}

TriMesh annulus_tri_mesh(int n) {
    if (n < 2) throw lattice_error("annulus lattice needs n_rungs >= 2");
    TriMesh m;
    m.n_vertices = 2 * n;
    auto G = [&](int k) { return (k % n + n) % n; };
    auto O = [&](int k) { return n + (k % n + n) % n; };
    auto g_edge = [&](int k) { return (k % n + n) % n; };
    auto o_edge = [&](int k) { return n + (k % n + n) % n; };
    auto v_edge = [&](int k) { return 2 * n + (k % n + n) % n; };
    auto d_edge = [&](int k) { return 3 * n + (k % n + n) % n; };
    m.edge_ends.resize(size_t(4 * n));
    for (int k = 0; k < n; ++k) {
        m.edge_ends[size_t(g_edge(k))] = {G(k), G(k + 1)};
        m.edge_ends[size_t(o_edge(k))] = {O(k), O(k + 1)};
        m.edge_ends[size_t(v_edge(k))] = {G(k), O(k)};
        m.edge_ends[size_t(d_edge(k))] = {G(k + 1), O(k)};
    }
    for (int k = 0; k < n; ++k) {
        m.faces.push_back({{g_edge(k), true},
                           {d_edge(k), true},
                           {v_edge(k), false}});
        m.faces.push_back({{d_edge(k), false},
                           {v_edge(k + 1), true},
                           {o_edge(k), false}});
    }
    for (int k = 0; k < n; ++k) {
        m.boundary_hole[g_edge(k)] = 0;
        m.boundary_hole[o_edge(k)] = 1;
    }
    m.marked_of_hole[0] = g_edge(0);
    m.marked_of_hole[1] = o_edge(0);
    m.n_holes = 2;
    return m;
}

Lattice annulus_lattice(int n_rungs) {
    return dual_lattice(annulus_tri_mesh(n_rungs));
}

Lattice sphere_tet_lattice() {
    return dual_of_triangulation({{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}});
}

Lattice annulus_two_strip_lattice(int n) {
    if (n < 2) throw lattice_error("two-strip annulus needs n >= 2");
    TriMesh m;
    m.n_vertices = 3 * n;
    auto I = [&](int k) { return (k % n + n) % n; };
    auto C = [&](int k) { return n + (k % n + n) % n; };
    auto O = [&](int k) { return 2 * n + (k % n + n) % n; };
    auto& E = m.edge_ends;
    auto add_edge = [&](int u, int v) {
        E.push_back({u, v});
        return int(E.size()) - 1;
    };
    std::vector<int> ic(size_t(n)), cc(size_t(n)), oc(size_t(n)), vi(size_t(n)),
        di(size_t(n)), vo(size_t(n)), dd(size_t(n));
    for (int k = 0; k < n; ++k) ic[size_t(k)] = add_edge(I(k), I(k + 1));
    for (int k = 0; k < n; ++k) cc[size_t(k)] = add_edge(C(k), C(k + 1));
    for (int k = 0; k < n; ++k) oc[size_t(k)] = add_edge(O(k), O(k + 1));
    for (int k = 0; k < n; ++k) vi[size_t(k)] = add_edge(I(k), C(k));
    for (int k = 0; k < n; ++k) di[size_t(k)] = add_edge(I(k + 1 == n ? 0 : k + 1), C(k));
    for (int k = 0; k < n; ++k) vo[size_t(k)] = add_edge(C(k), O(k));
    for (int k = 0; k < n; ++k) dd[size_t(k)] = add_edge(C(k + 1 == n ? 0 : k + 1), O(k));
    auto at = [&](std::vector<int>& v, int k) { return v[size_t((k % n + n) % n)]; };
    for (int k = 0; k < n; ++k) {
        // inner strip: (i_k, i_{k+1}, c_k), (c_k, i_{k+1}, c_{k+1})
        m.faces.push_back({{at(ic, k), true}, {at(di, k), true}, {at(vi, k), false}});
        m.faces.push_back({{at(di, k), false}, {at(vi, k + 1), true}, {at(cc, k), false}});
        // outer strip: (c_k, c_{k+1}, o_k), (o_k, c_{k+1}, o_{k+1})
        m.faces.push_back({{at(cc, k), true}, {at(dd, k), true}, {at(vo, k), false}});
        m.faces.push_back({{at(dd, k), false}, {at(vo, k + 1), true}, {at(oc, k), false}});
    }
    for (int k = 0; k < n; ++k) {
        m.boundary_hole[at(ic, k)] = 0;
        m.boundary_hole[at(oc, k)] = 1;
    }
    m.marked_of_hole[0] = ic[0];
    m.marked_of_hole[1] = oc[0];
    m.n_holes = 2;
    return dual_lattice(m);
}

namespace {

// theta gadget rotations; arcs x1, x2 run a -> b; stub at a points into the
// hole behind a (for the standalone theta this is the outer/root hole).
struct ThetaIds {
    int site_a, site_b;
    int arc1, arc2;
};

}  // namespace

Lattice theta_lattice() { return punctured_sphere_lattice(2); }

Lattice punctured_sphere_lattice(int n) {
    if (n < 2) throw lattice_error("punctured sphere lattice needs n >= 2");
    Lattice lat;
    auto add_site = [&]() {
        lat.rot.push_back({});
        return lat.n_sites++;
    };
    auto add_edge = [&](int u, int v) {
        lat.edges.push_back({u, v});
        return int(lat.edges.size()) - 1;
    };
    auto add_stub = [&](int site, int hole, bool marked) {
        lat.stubs.push_back({site, hole, marked});
        return int(lat.stubs.size()) - 1;
    };
    // Leaf gadget for puncture p (holes 1..n-1): sites a (toward tree) and b
    // (toward puncture). Returns the id of the pending stem pin slot on a.
    // The stem edge itself is added by the caller; we leave a placeholder.
    struct Leaf {
        int a, b, x1, x2;
    };
    std::vector<Leaf> leaves;
    for (int p = 1; p <= n - 1; ++p) {
        Leaf lf;
        lf.a = add_site();
        lf.b = add_site();
        lf.x1 = add_edge(lf.a, lf.b);
        lf.x2 = add_edge(lf.a, lf.b);
        int s = add_stub(lf.b, p, true);
        // rot[b]: arcs with the puncture stub between them (inner face)
        lat.rot[size_t(lf.b)] = {Pin{Pin::kEdge, lf.x1, 1}, Pin{Pin::kStub, s, 0},
                                 Pin{Pin::kEdge, lf.x2, 1}};
        // rot[a] gets (x1, stem, x2); stem filled below
        lat.rot[size_t(lf.a)] = {Pin{Pin::kEdge, lf.x1, 0}, Pin{},
                                 Pin{Pin::kEdge, lf.x2, 0}};
        leaves.push_back(lf);
    }
    if (n == 2) {
        int s = add_stub(leaves[0].a, 0, true);
        lat.rot[size_t(leaves[0].a)][1] = Pin{Pin::kStub, s, 0};
    } else {
        // left comb: junction J_k joins the running trunk with leaf k+1
        int trunk_site = leaves[0].a;  // site whose pending slot faces down
        for (int k = 1; k <= n - 2; ++k) {
            int j = add_site();
            int stem_l = add_edge(j, trunk_site);      // to the running trunk
            int stem_r = add_edge(j, leaves[size_t(k)].a);  // to leaf k+1
            lat.rot[size_t(trunk_site)][1] = Pin{Pin::kEdge, stem_l, 1};
            lat.rot[size_t(leaves[size_t(k)].a)][1] = Pin{Pin::kEdge, stem_r, 1};
            if (k < n - 2) {
                lat.rot[size_t(j)] = {Pin{}, Pin{Pin::kEdge, stem_l, 0},
                                      Pin{Pin::kEdge, stem_r, 0}};
            } else {
                int s = add_stub(j, 0, true);
                lat.rot[size_t(j)] = {Pin{Pin::kStub, s, 0},
                                      Pin{Pin::kEdge, stem_l, 0},
                                      Pin{Pin::kEdge, stem_r, 0}};
            }
            trunk_site = j;
        }
    }
    lat.n_holes = n;
    lat.check_consistent();
    lat.refresh_faces();
    return lat;
}

Lattice load_surface(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw lattice_error(std::string("surface parse error: ") + e.what());
    }
    try {
        std::vector<std::array<int, 3>> tris;
        for (auto& t : doc.at("triangles")) {
            auto v = t.get<std::vector<int>>();
            if (v.size() != 3)
                throw lattice_error("triangulation face is not a triangle");
            tris.push_back({v[0], v[1], v[2]});
        }
        std::map<int, std::array<int, 2>> marked;
        if (doc.contains("marked"))
            for (auto& [k, v] : doc.at("marked").items()) {
                auto p = v.get<std::vector<int>>();
                if (p.size() != 2) throw lattice_error("marked edge malformed");
                marked[std::stoi(k)] = {p[0], p[1]};
            }
        return dual_of_triangulation(tris, marked);
    } catch (const json::exception& e) {
        throw lattice_error(std::string("surface parse error: ") + e.what());
    }
}

// --- 3-manifold gluing data ----------------------------------------------------

namespace {

std::array<int, 3> face_corners(int f) {
    switch (f) {
        case 0: return {1, 2, 3};
        case 1: return {0, 2, 3};
        case 2: return {0, 1, 3};
        case 3: return {0, 1, 2};
    }
    throw manifold_error("bad face index");
}

struct DSU {
    std::vector<int> parent;
    explicit DSU(int n) : parent(size_t(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[size_t(x)] != x) {
            parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
            x = parent[size_t(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[size_t(find(a))] = find(b); }
};

int slot_id(int tet, int a, int b) { return (tet * 4 + a) * 4 + b; }

}  // namespace

void GluedManifold::build() {
    edge_of_slot.clear();
    free_faces.clear();
    class_on_boundary.clear();

    std::vector<std::vector<char>> glued(size_t(n_tets),
                                         std::vector<char>(4, 0));
    for (auto& g : gluings) {
        if (g.tet_a < 0 || g.tet_a >= n_tets || g.tet_b < 0 ||
            g.tet_b >= n_tets || g.face_a < 0 || g.face_a > 3 || g.face_b < 0 ||
            g.face_b > 3)
            throw manifold_error("gluing references bad tetrahedron or face");
        if (g.tet_a == g.tet_b && g.face_a == g.face_b)
            throw manifold_error("face glued to itself");
        std::array<int, 3> p = g.perm;
        std::sort(p.begin(), p.end());
        if (p != std::array<int, 3>{0, 1, 2})
            throw manifold_error("gluing map is not a permutation");
        if (glued[size_t(g.tet_a)][size_t(g.face_a)]++)
            throw manifold_error("face glued twice");
        if (glued[size_t(g.tet_b)][size_t(g.face_b)]++)
            throw manifold_error("face glued twice");
    }
    for (int t = 0; t < n_tets; ++t)
        for (int f = 0; f < 4; ++f)
            if (!glued[size_t(t)][size_t(f)]) free_faces.push_back({t, f});

    // union directed edge slots through the gluings
    DSU dsu(n_tets * 16);
    for (auto& g : gluings) {
        auto ca = face_corners(g.face_a);
        auto cb = face_corners(g.face_b);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                dsu.unite(slot_id(g.tet_a, ca[size_t(i)], ca[size_t(j)]),
                          slot_id(g.tet_b, cb[size_t(g.perm[size_t(i)])],
                                  cb[size_t(g.perm[size_t(j)])]));
            }
    }
    // collapse orbit pairs {O, O_reversed} into edge classes
    std::map<int, int> orbit_class;  // orbit root -> class id (for chosen orbit)
    n_edge_classes = 0;
    std::vector<char> bnd;
    for (int t = 0; t < n_tets; ++t)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                if (a == b) continue;
                int fwd = dsu.find(slot_id(t, a, b));
                int rev = dsu.find(slot_id(t, b, a));
                if (fwd == rev)
                    throw manifold_error(
                        "edge identified with itself reversed "
                        "(inconsistent vertex orders)");
                if (orbit_class.count(fwd) || orbit_class.count(rev)) continue;
                orbit_class[fwd] = n_edge_classes++;
                bnd.push_back(0);
            }
    for (int t = 0; t < n_tets; ++t)
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                int fwd = dsu.find(slot_id(t, a, b));
                int rev = dsu.find(slot_id(t, b, a));
                int cls, sgn;
                if (orbit_class.count(fwd)) {
                    cls = orbit_class[fwd];
                    sgn = +1;
                } else {
                    cls = orbit_class[rev];
                    sgn = -1;
                }
                edge_of_slot[{t, a, b}] = {cls, sgn};
            }
    // boundary classes: edges on free faces
    class_on_boundary.assign(size_t(n_edge_classes), 0);
    for (auto& [t, f] : free_faces) {
        auto c = face_corners(f);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                auto key = std::array<int, 3>{
                    t, std::min(c[size_t(i)], c[size_t(j)]),
                    std::max(c[size_t(i)], c[size_t(j)])};
                class_on_boundary[size_t(edge_of_slot[key].first)] = 1;
            }
    }

    // orientability: tets must admit alternating orientations
    std::vector<int> orient(size_t(n_tets), 0);
    std::vector<int> stack{0};
    orient[0] = 1;
    auto perm_sign = [](const std::array<int, 3>& p) {
        int inv = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (p[size_t(i)] > p[size_t(j)]) ++inv;
        return inv % 2 ? -1 : +1;
    };
    std::vector<std::vector<std::pair<int, int>>> adj(size_t(n_tets));
    for (auto& g : gluings) {
        int rel = -perm_sign(g.perm) * (g.face_a % 2 ? -1 : 1) *
                  (g.face_b % 2 ? -1 : 1);
        adj[size_t(g.tet_a)].push_back({g.tet_b, rel});
        adj[size_t(g.tet_b)].push_back({g.tet_a, rel});
    }
    while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        for (auto [t2, rel] : adj[size_t(t)]) {
            int want = orient[size_t(t)] * rel;
            if (orient[size_t(t2)] == 0) {
                orient[size_t(t2)] = want;
                stack.push_back(t2);
            } else if (orient[size_t(t2)] != want) {
                throw manifold_error("non-orientable gluing");
            }
        }
    }
    for (int t = 0; t < n_tets; ++t)
        if (orient[size_t(t)] == 0 && n_tets > 1)
            throw manifold_error("gluing not connected");
}

GluedManifold builtin_ball() {
    GluedManifold m;
    m.n_tets = 1;
    m.build();
    return m;
}

GluedManifold builtin_s3() {
    GluedManifold m;
    m.n_tets = 2;
    for (int f = 0; f < 4; ++f)
        m.gluings.push_back({0, f, 1, f, {0, 1, 2}});
    m.build();
    return m;
}

GluedManifold builtin_s3_five_tet() {
    // boundary of the 4-simplex on vertices 0..4: tet t omits vertex t
    GluedManifold m;
    m.n_tets = 5;
    auto verts_of_tet = [](int t) {
        std::array<int, 4> v{};
        int k = 0;
        for (int x = 0; x < 5; ++x)
            if (x != t) v[size_t(k++)] = x;
        return v;
    };
    // each triangle = pair {t1,t2} omitted; glue the matching faces
    for (int t1 = 0; t1 < 5; ++t1)
        for (int t2 = t1 + 1; t2 < 5; ++t2) {
            auto va = verts_of_tet(t1);
            auto vb = verts_of_tet(t2);
            // face of t1 opposite local position of global vertex t2
            int fa = -1, fb = -1;
            for (int i = 0; i < 4; ++i) {
                if (va[size_t(i)] == t2) fa = i;
                if (vb[size_t(i)] == t1) fb = i;
            }
            auto ca = face_corners(fa);
            auto cb = face_corners(fb);
            std::array<int, 3> perm{};
            for (int i = 0; i < 3; ++i) {
                int global = va[size_t(ca[size_t(i)])];
                for (int j = 0; j < 3; ++j)
                    if (vb[size_t(cb[size_t(j)])] == global) perm[size_t(i)] = j;
            }
            m.gluings.push_back({t1, fa, t2, fb, perm});
        }
    m.build();
    return m;
}

namespace {

// Smith-normal-form style reduction over the integers; returns (rank,
// torsion coefficients > 1).
std::pair<int, std::vector<long>> smith_reduce(std::vector<std::vector<long>> a) {
    int rows = int(a.size());
    int cols = rows ? int(a[0].size()) : 0;
    int r = 0, c = 0;
    std::vector<long> diag;
    while (r < rows && c < cols) {
        int pr = -1, pc = -1;
        long best = 0;
        for (int i = r; i < rows; ++i)
            for (int j = c; j < cols; ++j)
                if (a[size_t(i)][size_t(j)] != 0 &&
                    (best == 0 || std::abs(a[size_t(i)][size_t(j)]) < best)) {
                    best = std::abs(a[size_t(i)][size_t(j)]);
                    pr = i;
                    pc = j;
                }
        if (pr < 0) break;
        std::swap(a[size_t(pr)], a[size_t(r)]);
        for (int i = 0; i < rows; ++i) std::swap(a[size_t(i)][size_t(pc)], a[size_t(i)][size_t(c)]);
        bool again = true;
        while (again) {
            again = false;
            for (int i = r + 1; i < rows; ++i) {
                long q = a[size_t(i)][size_t(c)] / a[size_t(r)][size_t(c)];
                if (q)
                    for (int j = c; j < cols; ++j)
                        a[size_t(i)][size_t(j)] -= q * a[size_t(r)][size_t(j)];
                if (a[size_t(i)][size_t(c)] != 0) {
                    std::swap(a[size_t(i)], a[size_t(r)]);
                    again = true;
                }
            }
            for (int j = c + 1; j < cols; ++j) {
                long q = a[size_t(r)][size_t(j)] / a[size_t(r)][size_t(c)];
                if (q)
                    for (int i = r; i < rows; ++i)
                        a[size_t(i)][size_t(j)] -= q * a[size_t(i)][size_t(c)];
                if (a[size_t(r)][size_t(j)] != 0) {
                    for (int i = 0; i < rows; ++i)
                        std::swap(a[size_t(i)][size_t(j)], a[size_t(i)][size_t(c)]);
                    again = true;
                }
            }
        }
        diag.push_back(std::abs(a[size_t(r)][size_t(c)]));
        ++r;
        ++c;
    }
    std::vector<long> torsion;
    for (long d : diag)
        if (d > 1) torsion.push_back(d);
    return {int(diag.size()), torsion};
}

}  // namespace

std::pair<int, std::vector<long>> homology_h1(const GluedManifold& man) {
    GluedManifold m = man;
    m.build();
    // vertex classes
    DSU vdsu(m.n_tets * 4);
    for (auto& g : m.gluings) {
        auto ca = face_corners(g.face_a);
        auto cb = face_corners(g.face_b);
        for (int i = 0; i < 3; ++i)
            vdsu.unite(g.tet_a * 4 + ca[size_t(i)],
                       g.tet_b * 4 + cb[size_t(g.perm[size_t(i)])]);
    }
    std::map<int, int> vclass;
    for (int t = 0; t < m.n_tets; ++t)
        for (int v = 0; v < 4; ++v) {
            int r = vdsu.find(t * 4 + v);
            if (!vclass.count(r)) {
                int id = int(vclass.size());
                vclass[r] = id;
            }
        }
    int nv = int(vclass.size());
    auto vid = [&](int t, int v) { return vclass[vdsu.find(t * 4 + v)]; };

    // face classes: one per gluing plus one per free face
    struct FaceRep {
        int tet, face;
    };
    std::vector<FaceRep> fclasses;
    for (auto& g : m.gluings) fclasses.push_back({g.tet_a, g.face_a});
    for (auto& [t, f] : m.free_faces) fclasses.push_back({t, f});

    // boundary maps with integer coefficients
    std::vector<std::vector<long>> d1(
        size_t(m.n_edge_classes), std::vector<long>(size_t(nv), 0));
    for (auto& [slot, cs] : m.edge_of_slot) {
        auto [cls, sgn] = cs;
        int t = slot[0], a = slot[1], b = slot[2];
        // record once per class: orientation a->b if sgn=+1
        if (d1[size_t(cls)] == std::vector<long>(size_t(nv), 0)) {
            int head = sgn > 0 ? b : a;
            int tail = sgn > 0 ? a : b;
            d1[size_t(cls)][size_t(vid(t, head))] += 1;
            d1[size_t(cls)][size_t(vid(t, tail))] -= 1;
        }
    }
    std::vector<std::vector<long>> d2(
        fclasses.size(), std::vector<long>(size_t(m.n_edge_classes), 0));
    for (size_t fi = 0; fi < fclasses.size(); ++fi) {
        auto [t, f] = fclasses[fi];
        auto c = face_corners(f);
        // oriented boundary of the triangle (c0,c1,c2)
        for (int k = 0; k < 3; ++k) {
            int a = c[size_t(k)], b = c[size_t((k + 1) % 3)];
            auto key = std::array<int, 3>{t, std::min(a, b), std::max(a, b)};
            auto [cls, sgn] = m.edge_of_slot[key];
            int dir = (a < b) ? 1 : -1;  // slot stored ascending
            d2[fi][size_t(cls)] += dir * sgn;
        }
    }
    auto [rank_d1, tor1] = smith_reduce(d1);
    auto d2t = d2;
    auto [rank_d2, tor2] = smith_reduce(d2t);
    int betti = m.n_edge_classes - rank_d1 - rank_d2;
    // torsion of H1 comes from the Smith form of d2
    std::vector<std::vector<long>> d2m = d2;
    auto [r2, torsion] = smith_reduce(d2m);
    (void)r2;
    (void)tor1;
    (void)tor2;
    return {betti, torsion};
}

namespace {

// deterministic search over two-tetrahedron gluings
template <typename Pred>
GluedManifold search_two_tet(int free_faces, Pred&& pred) {
    std::vector<std::array<int, 2>> all_faces;
    for (int t = 0; t < 2; ++t)
        for (int f = 0; f < 4; ++f) all_faces.push_back({t, f});
    std::array<std::array<int, 3>, 6> perms{{{0, 1, 2},
                                             {0, 2, 1},
                                             {1, 0, 2},
                                             {1, 2, 0},
                                             {2, 0, 1},
                                             {2, 1, 0}}};
    int nf = 8;
    // choose pairing of faces (some left free), then perms per pair
    std::vector<int> partner(size_t(nf), -2);
    GluedManifold found;
    bool done = false;

    std::function<void(int, std::vector<std::pair<int, int>>&)> rec =
        [&](int i, std::vector<std::pair<int, int>>& pairs) {
            if (done) return;
            if (i == nf) {
                int frees = 0;
                for (int k = 0; k < nf; ++k)
                    if (partner[size_t(k)] == -1) ++frees;
                if (frees != free_faces) return;
                // assign permutations
                std::vector<int> pidx(pairs.size(), 0);
                for (;;) {
                    GluedManifold m;
                    m.n_tets = 2;
                    for (size_t k = 0; k < pairs.size(); ++k) {
                        auto [a, b] = pairs[k];
                        m.gluings.push_back(
                            {all_faces[size_t(a)][0], all_faces[size_t(a)][1],
                             all_faces[size_t(b)][0], all_faces[size_t(b)][1],
                             perms[size_t(pidx[k])]});
                    }
                    try {
                        m.build();
                        if (pred(m)) {
                            found = m;
                            done = true;
                            return;
                        }
                    } catch (const manifold_error&) {
                    }
                    // next perm combo
                    size_t k = 0;
                    while (k < pidx.size() && ++pidx[k] == 6) pidx[k++] = 0;
                    if (k == pidx.size()) break;
                }
                return;
            }
            if (partner[size_t(i)] != -2) {
                rec(i + 1, pairs);
                return;
            }
            partner[size_t(i)] = -1;  // free
            rec(i + 1, pairs);
            if (done) return;
            partner[size_t(i)] = -2;
            for (int j = i + 1; j < nf; ++j) {
                if (partner[size_t(j)] != -2) continue;
                partner[size_t(i)] = j;
                partner[size_t(j)] = i;
                pairs.push_back({i, j});
                rec(i + 1, pairs);
                pairs.pop_back();
                partner[size_t(i)] = -2;
                partner[size_t(j)] = -2;
                if (done) return;
            }
        };
    std::vector<std::pair<int, int>> pairs;
    rec(0, pairs);
    if (!done) throw manifold_error("search failed");
    return found;
}

}  // namespace

GluedManifold builtin_s2xs1() {
    // the first two-tetrahedron closed orientable gluing with H1 = Z and no
    // torsion, in deterministic search order
    static GluedManifold cached = [] {
        return search_two_tet(0, [](const GluedManifold& m) {
            auto [b1, tor] = homology_h1(m);
            return b1 == 1 && tor.empty();
        });
    }();
    return cached;
}

GluedManifold builtin_solid_torus() {
    // two tetrahedra, two free faces, H1 = Z, boundary a torus (chi = 0)
    static GluedManifold cached = [] {
        return search_two_tet(2, [](const GluedManifold& m) {
            auto [b1, tor] = homology_h1(m);
            if (b1 != 1 || !tor.empty()) return false;
            // boundary Euler characteristic from the free faces
            // vertices/edges on the boundary:
            int be = 0;
            for (int c = 0; c < m.n_edge_classes; ++c)
                if (m.class_on_boundary[size_t(c)]) ++be;
            // boundary vertex classes: count distinct vertex classes on free faces
            GluedManifold mm = m;
            DSU vdsu(mm.n_tets * 4);
            for (auto& g : mm.gluings) {
                auto ca = face_corners(g.face_a);
                auto cb = face_corners(g.face_b);
                for (int i = 0; i < 3; ++i)
                    vdsu.unite(g.tet_a * 4 + ca[size_t(i)],
                               g.tet_b * 4 + cb[size_t(g.perm[size_t(i)])]);
            }
            std::set<int> bverts;
            for (auto& [t, f] : mm.free_faces)
                for (int c : face_corners(f)) bverts.insert(vdsu.find(t * 4 + c));
            int chi = int(bverts.size()) - be + int(mm.free_faces.size());
            return chi == 0;
        });
    }();
    return cached;
}

GluedManifold load_manifold(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw manifold_error(std::string("manifold parse error: ") + e.what());
    }
    try {
        GluedManifold m;
        auto tets = doc.at("tets").get<std::vector<std::vector<int>>>();
        m.n_tets = int(tets.size());
        for (auto& t : tets)
            if (t.size() != 4) throw manifold_error("tet needs four vertices");
        for (auto& g : doc.at("gluings")) {
            auto a = g.at("a").get<std::vector<int>>();
            auto b = g.at("b").get<std::vector<int>>();
            auto p = g.at("map").get<std::vector<int>>();
            if (a.size() != 2 || b.size() != 2 || p.size() != 3)
                throw manifold_error("gluing malformed");
            m.gluings.push_back({a[0], a[1], b[0], b[1], {p[0], p[1], p[2]}});
        }
        m.build();
        return m;
    } catch (const json::exception& e) {
        throw manifold_error(std::string("manifold parse error: ") + e.what());
    }
}

}  // namespace tvc
