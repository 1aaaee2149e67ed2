#include "pachner4/complex.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "pachner4/error.hpp"

namespace pachner4 {

template <std::size_t N>
std::array<VertexId, N> sorted_key(std::array<VertexId, N> cell) {
  std::sort(cell.begin(), cell.end());
  return cell;
}

template <std::size_t N>
int permutation_sign(const std::array<VertexId, N>& cell) {
  int sign = 1;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      if (cell[i] > cell[j]) sign = -sign;
  return sign;
}

template <std::size_t N>
std::string to_string(const std::array<VertexId, N>& cell) {
  std::ostringstream os;
  for (std::size_t i = 0; i < N; ++i) os << (i ? "," : "") << cell[i];
  return os.str();
}

template std::array<VertexId, 2> sorted_key(std::array<VertexId, 2>);
template std::array<VertexId, 3> sorted_key(std::array<VertexId, 3>);
template std::array<VertexId, 4> sorted_key(std::array<VertexId, 4>);
template std::array<VertexId, 5> sorted_key(std::array<VertexId, 5>);
template int permutation_sign(const std::array<VertexId, 3>&);
template int permutation_sign(const std::array<VertexId, 4>&);
template int permutation_sign(const std::array<VertexId, 5>&);
template std::string to_string(const std::array<VertexId, 2>&);
template std::string to_string(const std::array<VertexId, 3>&);
template std::string to_string(const std::array<VertexId, 4>&);
template std::string to_string(const std::array<VertexId, 5>&);

OrientedSimplex OrientedSimplex::from_ordered(const Simplex& ordered) {
  return {sorted_key(ordered), permutation_sign(ordered)};
}

Simplex OrientedSimplex::ordered() const {
  Simplex out = vertices;
  if (sign < 0) std::swap(out[0], out[1]);
  return out;
}

namespace {

template <class Key>
std::optional<std::size_t> find_key(const std::vector<Key>& keys, const Key& key) {
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - keys.begin());
}

// Facet of a sorted simplex omitting position p; it stays sorted. The
// orientation induced on it is (-1)^p times the simplex sign.
Tetrahedron facet(const Simplex& sorted, int p) {
  Tetrahedron t{};
  for (int i = 0, j = 0; i < 5; ++i)
    if (i != p) t[j++] = sorted[i];
  return t;
}

template <std::size_t K>
void collect_subsets(const Simplex& s, std::set<std::array<VertexId, K>>& out) {
  std::array<int, K> idx{};
  for (std::size_t i = 0; i < K; ++i) idx[i] = static_cast<int>(i);
  while (true) {
    std::array<VertexId, K> cell{};
    for (std::size_t i = 0; i < K; ++i) cell[i] = s[idx[i]];
    out.insert(cell);
    int i = static_cast<int>(K) - 1;
    while (i >= 0 && idx[i] == 5 - static_cast<int>(K) + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (std::size_t j = i + 1; j < K; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

Complex4 Complex4::build(std::span<const Simplex> input, bool allow_boundary) {
  Complex4 c;
  c.allow_boundary_ = allow_boundary;
  std::set<Simplex> seen;
  std::set<VertexId> verts;
  std::set<Edge> edges;
  std::set<Triangle> tris;
  std::set<Tetrahedron> tets;
  for (const Simplex& s : input) {
    Simplex key = sorted_key(s);
    if (std::adjacent_find(key.begin(), key.end()) != key.end())
      throw StructuralError("simplex (" + to_string(s) + ") has repeated vertex ids");
    if (!seen.insert(key).second)
      throw StructuralError("duplicate simplex with vertex set {" + to_string(key) + "}");
    c.simplices_.push_back(OrientedSimplex::from_ordered(s));
    verts.insert(key.begin(), key.end());
    collect_subsets<2>(key, edges);
    collect_subsets<3>(key, tris);
    collect_subsets<4>(key, tets);
  }
  c.vertices_.assign(verts.begin(), verts.end());
  c.edges_.assign(edges.begin(), edges.end());
  c.triangles_.assign(tris.begin(), tris.end());
  c.tetrahedra_.assign(tets.begin(), tets.end());

  c.edge_star_.resize(c.edges_.size());
  c.triangle_star_.resize(c.triangles_.size());
  c.tet_star_.resize(c.tetrahedra_.size());
  for (std::size_t k = 0; k < c.simplices_.size(); ++k) {
    const Simplex& s = c.simplices_[k].vertices;
    std::set<Edge> e;
    std::set<Triangle> t;
    std::set<Tetrahedron> f;
    collect_subsets<2>(s, e);
    collect_subsets<3>(s, t);
    collect_subsets<4>(s, f);
    for (const auto& x : e) c.edge_star_[*find_key(c.edges_, x)].push_back(k);
    for (const auto& x : t) c.triangle_star_[*find_key(c.triangles_, x)].push_back(k);
    for (const auto& x : f) c.tet_star_[*find_key(c.tetrahedra_, x)].push_back(k);
  }

  for (std::size_t i = 0; i < c.tetrahedra_.size(); ++i) {
    const auto& star = c.tet_star_[i];
    if (star.size() > 2)
      throw StructuralError("non-manifold tetrahedron {" + to_string(c.tetrahedra_[i]) +
                            "} incident to " + std::to_string(star.size()) + " simplices");
    if (star.size() == 1) {
      c.closed_ = false;
      continue;
    }
    if (c.induced_orientation(star[0], c.tetrahedra_[i]) ==
        c.induced_orientation(star[1], c.tetrahedra_[i]))
      c.orientation_consistent_ = false;
  }
  if (!c.closed_ && !allow_boundary)
    throw StructuralError("complex has boundary tetrahedra but boundary was not allowed");
  return c;
}

std::optional<std::size_t> Complex4::vertex_index(VertexId v) const {
  return find_key(vertices_, v);
}
std::optional<std::size_t> Complex4::edge_index(const Edge& e) const {
  return find_key(edges_, sorted_key(e));
}
std::optional<std::size_t> Complex4::triangle_index(const Triangle& t) const {
  return find_key(triangles_, sorted_key(t));
}
std::optional<std::size_t> Complex4::tetrahedron_index(const Tetrahedron& t) const {
  return find_key(tetrahedra_, sorted_key(t));
}

int Complex4::induced_orientation(std::size_t s, const Tetrahedron& tet) const {
  const OrientedSimplex& simplex = simplices_.at(s);
  const Tetrahedron key = sorted_key(tet);
  for (int p = 0; p < 5; ++p)
    if (facet(simplex.vertices, p) == key) return simplex.sign * ((p % 2) ? -1 : 1);
  throw StructuralError("tetrahedron {" + to_string(key) + "} is not a facet of simplex " +
                        std::to_string(s));
}

std::vector<Simplex> Complex4::ordered_simplices() const {
  std::vector<Simplex> out;
  out.reserve(simplices_.size());
  for (const auto& s : simplices_) out.push_back(s.ordered());
  return out;
}

std::vector<std::size_t> star_of_triangle(const Complex4& c, const Triangle& t) {
  auto idx = c.triangle_index(t);
  if (!idx) throw StructuralError("triangle {" + to_string(sorted_key(t)) + "} is not a face");
  return c.triangle_star(*idx);
}

namespace {

struct ClusterShape {
  Triangle abc{};
  Triangle def{};
  std::array<std::size_t, 3> star{};
};

std::optional<ClusterShape> cluster_shape(const Complex4& c, const Triangle& t,
                                          std::string* why) {
  auto idx = c.triangle_index(t);
  if (!idx) {
    if (why) *why = "triangle {" + to_string(sorted_key(t)) + "} is not a face";
    return std::nullopt;
  }
  const auto& star = c.triangle_star(*idx);
  if (star.size() != 3) {
    if (why)
      *why = "triangle {" + to_string(sorted_key(t)) + "} lies in " +
             std::to_string(star.size()) + " simplices, a 3->3 move needs exactly 3";
    return std::nullopt;
  }
  std::set<VertexId> all;
  for (auto s : star) all.insert(c.simplices()[s].vertices.begin(), c.simplices()[s].vertices.end());
  if (all.size() != 6) {
    if (why) *why = "star of the triangle spans " + std::to_string(all.size()) + " vertices, not 6";
    return std::nullopt;
  }
  ClusterShape shape;
  shape.abc = sorted_key(t);
  std::vector<VertexId> rest;
  for (VertexId v : all)
    if (std::find(shape.abc.begin(), shape.abc.end(), v) == shape.abc.end()) rest.push_back(v);
  std::copy(rest.begin(), rest.end(), shape.def.begin());
  if (c.triangle_index(shape.def)) {
    if (why)
      *why = "complementary triangle {" + to_string(shape.def) +
             "} is already a face; the move would identify distinct simplices";
    return std::nullopt;
  }
  std::copy(star.begin(), star.end(), shape.star.begin());
  return shape;
}

}  // namespace

std::pair<Complex4, MoveRecord> pachner_33(const Complex4& c, const Triangle& t) {
  std::string why;
  auto shape = cluster_shape(c, t, &why);
  if (!shape) throw MovePreconditionError(why);

  MoveRecord rec;
  rec.old_face = shape->abc;
  rec.new_face = shape->def;
  rec.removed = shape->star;
  for (int i = 0; i < 3; ++i) {
    rec.six_vertices[i] = shape->abc[i];
    rec.six_vertices[i + 3] = shape->def[i];
  }

  // Oriented boundary of the removed cluster, on the tetrahedra that do not
  // contain ABC (the others are interior to the cluster).
  std::map<Tetrahedron, int> boundary;
  for (auto s : shape->star) {
    const Simplex& v = c.simplices()[s].vertices;
    for (int p = 0; p < 5; ++p) {
      Tetrahedron f = facet(v, p);
      if (!std::includes(f.begin(), f.end(), shape->abc.begin(), shape->abc.end()))
        boundary[f] = c.induced_orientation(s, f);
    }
  }

  std::vector<Simplex> next;
  next.reserve(c.num_simplices());
  for (std::size_t k = 0; k < c.num_simplices(); ++k)
    if (std::find(shape->star.begin(), shape->star.end(), k) == shape->star.end())
      next.push_back(c.simplices()[k].ordered());

  for (int i = 0; i < 3; ++i) {
    Simplex verts{};
    int j = 0;
    for (VertexId v : rec.six_vertices)
      if (v != shape->abc[i]) verts[j++] = v;
    verts = sorted_key(verts);
    // Choose the orientation whose induced orientation agrees with the
    // removed cluster on every shared boundary tetrahedron.
    int sign = 0;
    for (int p = 0; p < 5; ++p) {
      auto it = boundary.find(facet(verts, p));
      if (it == boundary.end()) continue;
      const int s = it->second * ((p % 2) ? -1 : 1);
      if (sign != 0 && s != sign)
        throw StructuralError("cluster around {" + to_string(shape->abc) +
                              "} is not consistently oriented");
      sign = s;
    }
    if (sign == 0) throw StructuralError("new simplex shares no boundary tetrahedron");
    next.push_back(OrientedSimplex{verts, sign}.ordered());
    rec.added[i] = next.size() - 1;
  }

  Complex4 out = Complex4::build(next, c.allows_boundary());
  if (c.is_orientation_consistent() && !out.is_orientation_consistent())
    throw StructuralError("3->3 move broke orientation consistency");
  return {std::move(out), rec};
}

std::vector<Triangle> movable_triangles(const Complex4& c) {
  std::vector<Triangle> out;
  for (const auto& t : c.triangles())
    if (cluster_shape(c, t, nullptr)) out.push_back(t);
  return out;
}

std::vector<Simplex> boundary_of_5_simplex() {
  // Facet omitting vertex i carries sign (-1)^i.
  std::vector<Simplex> out;
  for (int i = 0; i < 6; ++i) {
    Simplex s{};
    for (int v = 0, j = 0; v < 6; ++v)
      if (v != i) s[j++] = v;
    if (i % 2) std::swap(s[0], s[1]);
    out.push_back(s);
  }
  return out;
}

}  // namespace pachner4
