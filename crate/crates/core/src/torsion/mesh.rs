//! Triangulated cross-sections.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::Real;

/// A directed boundary segment, traversed with the section on its left
/// (counterclockwise on the outer loop, clockwise around holes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge<T> {
    pub nodes: [usize; 2],
    /// 0 for the outer boundary, 1, 2, … for holes.
    pub loop_id: usize,
    /// Outward unit normal.
    pub normal: [T; 2],
    /// Angle `ϑ` of the outward normal with the `X₁` axis.
    pub normal_angle: T,
    /// Arc length at the midpoint, measured from the start of the loop.
    pub s: T,
    /// `∂ϑ/∂s` along the segment; zero on straight segments, the curvature
    /// of polygonal boundaries being concentrated at the vertices.
    pub curvature: T,
    pub length: T,
}

/// A conforming triangulation of a planar cross-section with its oriented
/// boundary loops.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionMesh<T> {
    nodes: Vec<[T; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge<T>>,
    edges: Vec<[usize; 2]>,
    triangle_edges: Vec<[usize; 3]>,
}

fn mesh_err(msg: impl Into<String>) -> Error {
    Error::Mesh(msg.into())
}

impl<T: Real> CrossSectionMesh<T> {
    /// Builds and validates a mesh with an explicit boundary description:
    /// `(edge, loop)` pairs in any order.
    ///
    /// Triangles must be counterclockwise with positive area. The boundary
    /// must consist of exactly the edges owned by a single triangle,
    /// directed as in that triangle, grouped into closed loops; loop 0 must
    /// enclose positive area and every other loop negative area.
    pub fn new(nodes: Vec<[T; 2]>, triangles: Vec<[usize; 3]>, boundary: &[([usize; 2], usize)]) -> Result<Self> {
        let (edges, triangle_edges, topo) = Self::topology(&nodes, &triangles)?;
        let mut given: HashMap<(usize, usize), usize> = HashMap::with_capacity(boundary.len());
        for &([a, b], l) in boundary {
            if given.insert((a, b), l).is_some() {
                return Err(mesh_err(format!("boundary edge [{a}, {b}] listed twice")));
            }
        }
        for &(a, b) in &topo {
            if !given.contains_key(&(a, b)) {
                if given.contains_key(&(b, a)) {
                    return Err(mesh_err(format!("boundary edge [{b}, {a}] is oriented against its triangle")));
                }
                return Err(mesh_err(format!("boundary edge [{a}, {b}] is missing")));
            }
        }
        if given.len() != topo.len() {
            let extra = given.keys().find(|k| !topo.contains(k)).copied().unwrap_or_default();
            return Err(mesh_err(format!("[{}, {}] is not a boundary edge of the triangulation", extra.0, extra.1)));
        }
        let loops: Vec<(usize, usize, usize)> = boundary.iter().map(|&([a, b], l)| (a, b, l)).collect();
        let boundary = Self::trace_loops(&nodes, &loops)?;
        Ok(Self { nodes, triangles, boundary, edges, triangle_edges })
    }

    /// Builds a mesh, deriving the boundary loops from the triangulation. The
    /// loop enclosing the largest area becomes loop 0.
    pub fn from_triangles(nodes: Vec<[T; 2]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let (edges, triangle_edges, topo) = Self::topology(&nodes, &triangles)?;
        let mut next: HashMap<usize, (usize, usize)> = HashMap::new();
        for (n, &(a, b)) in topo.iter().enumerate() {
            if next.insert(a, (b, n)).is_some() {
                return Err(mesh_err(format!("boundary is pinched at node {a}")));
            }
        }
        let mut used = vec![false; topo.len()];
        let mut chains: Vec<Vec<(usize, usize)>> = Vec::new();
        for start in 0..topo.len() {
            if used[start] {
                continue;
            }
            let mut chain = Vec::new();
            let mut cur = start;
            loop {
                used[cur] = true;
                let (a, b) = topo[cur];
                chain.push((a, b));
                match next.get(&b) {
                    Some(&(_, n)) if !used[n] => cur = n,
                    _ => break,
                }
            }
            chains.push(chain);
        }
        let area = |c: &Vec<(usize, usize)>| {
            c.iter().fold(T::zero(), |s, &(a, b)| {
                let (p, q) = (nodes[a], nodes[b]);
                s + (p[0] * q[1] - q[0] * p[1]) * T::lit(0.5)
            })
        };
        let outer = (0..chains.len()).max_by(|&i, &j| area(&chains[i]).partial_cmp(&area(&chains[j])).expect("finite area"));
        let mut loops = Vec::with_capacity(topo.len());
        let mut id = 1;
        for (n, chain) in chains.iter().enumerate() {
            let l = if Some(n) == outer {
                0
            } else {
                id += 1;
                id - 1
            };
            loops.extend(chain.iter().map(|&(a, b)| (a, b, l)));
        }
        let boundary = Self::trace_loops(&nodes, &loops)?;
        Ok(Self { nodes, triangles, boundary, edges, triangle_edges })
    }

    #[allow(clippy::type_complexity)]
    fn topology(nodes: &[[T; 2]], triangles: &[[usize; 3]]) -> Result<(Vec<[usize; 2]>, Vec<[usize; 3]>, Vec<(usize, usize)>)> {
        if triangles.is_empty() {
            return Err(mesh_err("no triangles"));
        }
        if nodes.iter().flatten().any(|v| !v.is_finite()) {
            return Err(mesh_err("non-finite node coordinate"));
        }
        let mut edges = Vec::new();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut owners: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nodes.len()) {
                return Err(mesh_err(format!("triangle {t} references a missing node")));
            }
            let [a, b, c] = tri.map(|v| nodes[v]);
            let twice = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
            if !(twice > T::zero()) {
                return Err(mesh_err(format!("triangle {t} has non-positive area (clockwise or degenerate)")));
            }
            let mut te = [0; 3];
            for k in 0..3 {
                let (p, q) = (tri[k], tri[(k + 1) % 3]);
                let key = (p.min(q), p.max(q));
                let e = *index.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    owners.push(Vec::new());
                    edges.len() - 1
                });
                owners[e].push((p, q));
                te[k] = e;
            }
            triangle_edges.push(te);
        }
        let mut topo = Vec::new();
        for (e, own) in owners.iter().enumerate() {
            match own.len() {
                1 => topo.push(own[0]),
                2 if own[0] == (own[1].1, own[1].0) => {}
                2 => return Err(mesh_err(format!("triangles sharing edge {:?} are inconsistently oriented", edges[e]))),
                _ => return Err(mesh_err(format!("edge {:?} is shared by more than two triangles", edges[e]))),
            }
        }
        Ok((edges, triangle_edges, topo))
    }

    /// Orders each loop, checks closure and orientation, and fills in the
    /// geometric data of every segment.
    fn trace_loops(nodes: &[[T; 2]], edges: &[(usize, usize, usize)]) -> Result<Vec<BoundaryEdge<T>>> {
        let mut ids: Vec<usize> = edges.iter().map(|e| e.2).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.first() != Some(&0) {
            return Err(mesh_err("no outer boundary loop (id 0)"));
        }
        let mut out = Vec::with_capacity(edges.len());
        for &id in &ids {
            let members: Vec<(usize, usize)> = edges.iter().filter(|e| e.2 == id).map(|e| (e.0, e.1)).collect();
            let mut succ: HashMap<usize, usize> = HashMap::with_capacity(members.len());
            for (n, &(a, _)) in members.iter().enumerate() {
                if succ.insert(a, n).is_some() {
                    return Err(mesh_err(format!("loop {id} is not a simple closed curve at node {a}")));
                }
            }
            let mut order = Vec::with_capacity(members.len());
            let mut cur = 0;
            for _ in 0..members.len() {
                order.push(cur);
                let b = members[cur].1;
                match succ.get(&b) {
                    Some(&n) => cur = n,
                    None => return Err(mesh_err(format!("loop {id} is not closed at node {b}"))),
                }
            }
            if cur != 0 || {
                let mut seen = order.clone();
                seen.sort_unstable();
                seen.dedup();
                seen.len() != members.len()
            } {
                return Err(mesh_err(format!("loop {id} splits into several closed curves")));
            }
            let mut area = T::zero();
            let mut s = T::zero();
            for &n in &order {
                let (a, b) = members[n];
                let (p, q) = (nodes[a], nodes[b]);
                area += (p[0] * q[1] - q[0] * p[1]) * T::lit(0.5);
                let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
                let len = (dx * dx + dy * dy).sqrt();
                let normal = [dy / len, -dx / len];
                out.push(BoundaryEdge {
                    nodes: [a, b],
                    loop_id: id,
                    normal,
                    normal_angle: normal[1].atan2(normal[0]),
                    s: s + len * T::lit(0.5),
                    curvature: T::zero(),
                    length: len,
                });
                s += len;
            }
            if (id == 0) != (area > T::zero()) {
                return Err(mesh_err(format!(
                    "loop {id} has the wrong orientation (outer loop counterclockwise, holes clockwise)"
                )));
            }
        }
        Ok(out)
    }

    /// Structured mesh of `R_int ≤ r ≤ R_ext` with `n_radial` layers and
    /// `n_angular` nodes per ring; a disk when `R_int = 0`.
    pub fn annulus(r_int: T, r_ext: T, n_radial: usize, n_angular: usize) -> Result<Self> {
        if !(r_int >= T::zero() && r_ext > r_int) {
            return Err(Error::Geometry("annulus radii must satisfy 0 <= r_int < r_ext".into()));
        }
        if n_radial == 0 || n_angular < 3 {
            return Err(mesh_err("annulus needs n_radial >= 1 and n_angular >= 3"));
        }
        let solid = r_int == T::zero();
        let nn = n_angular;
        let mut nodes = Vec::new();
        if solid {
            nodes.push([T::zero(), T::zero()]);
        }
        let first_ring = usize::from(solid);
        for i in first_ring..=n_radial {
            let r = r_int + (r_ext - r_int) * T::lit(i as f64 / n_radial as f64);
            for j in 0..nn {
                let phi = T::two_pi() * T::lit(j as f64 / nn as f64);
                nodes.push([r * phi.cos(), r * phi.sin()]);
            }
        }
        let id = |i: usize, j: usize| usize::from(solid) + (i - first_ring) * nn + j % nn;
        let mut triangles = Vec::new();
        if solid {
            for j in 0..nn {
                triangles.push([0, id(1, j), id(1, j + 1)]);
            }
        }
        for i in first_ring..n_radial {
            for j in 0..nn {
                triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        Self::from_triangles(nodes, triangles)
    }

    /// Structured mesh of the rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: T, y0: T, x1: T, y1: T, nx: usize, ny: usize) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) || nx == 0 || ny == 0 {
            return Err(Error::Geometry("rectangle needs x1 > x0, y1 > y0 and at least one cell".into()));
        }
        let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                let x = x0 + (x1 - x0) * T::lit(i as f64 / nx as f64);
                let y = y0 + (y1 - y0) * T::lit(j as f64 / ny as f64);
                nodes.push([x, y]);
            }
        }
        let id = |i: usize, j: usize| j * (nx + 1) + i;
        let mut triangles = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        Self::from_triangles(nodes, triangles)
    }

    pub fn nodes(&self) -> &[[T; 2]] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Boundary segments, loop by loop in traversal order.
    pub fn boundary(&self) -> &[BoundaryEdge<T>] {
        &self.boundary
    }

    /// Undirected edges `[a, b]` with `a < b`.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Edge indices of each triangle: local edges `(v₀v₁, v₁v₂, v₂v₀)`.
    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.triangle_edges
    }

    pub fn vertices(&self, t: usize) -> [[T; 2]; 3] {
        self.triangles[t].map(|v| self.nodes[v])
    }

    pub fn triangle_area(&self, t: usize) -> T {
        let [a, b, c] = self.vertices(t);
        ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])) * T::lit(0.5)
    }

    pub fn area(&self) -> T {
        (0..self.triangles.len()).fold(T::zero(), |s, t| s + self.triangle_area(t))
    }

    fn edge_length(&self, e: usize) -> T {
        let [a, b] = self.edges[e].map(|v| self.nodes[v]);
        ((b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1])).sqrt()
    }

    /// Longest edge.
    pub fn h_max(&self) -> T {
        (0..self.edges.len()).fold(T::zero(), |m, e| m.max(self.edge_length(e)))
    }

    /// Barycentric coordinates of `x` in triangle `t`.
    pub fn barycentric(&self, t: usize, x: &[T; 2]) -> [T; 3] {
        let [a, b, c] = self.vertices(t);
        let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
        let l1 = ((x[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (x[1] - a[1])) / det;
        let l2 = ((b[0] - a[0]) * (x[1] - a[1]) - (x[0] - a[0]) * (b[1] - a[1])) / det;
        [T::one() - l1 - l2, l1, l2]
    }

    /// A triangle containing `x` (with a relative tolerance of `1e-12`), by
    /// linear search.
    pub fn locate(&self, x: &[T; 2]) -> Option<usize> {
        let tol = T::lit(-1e-12);
        (0..self.triangles.len()).find(|&t| self.barycentric(t, x).iter().all(|&l| l >= tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_topology() {
        let m = CrossSectionMesh::<f64>::annulus(0.5, 1.0, 4, 32).unwrap();
        assert_eq!(m.triangles().len(), 2 * 4 * 32);
        assert_eq!(m.boundary().len(), 64);
        let holes = m.boundary().iter().filter(|e| e.loop_id == 1).count();
        assert_eq!(holes, 32);
        // outward normals: away from the centre outside, towards it inside
        for e in m.boundary() {
            let mid = [0, 1].map(|k| 0.5 * (m.nodes()[e.nodes[0]][k] + m.nodes()[e.nodes[1]][k]));
            let radial = mid[0] * e.normal[0] + mid[1] * e.normal[1];
            assert_eq!(radial > 0.0, e.loop_id == 0);
        }
        let poly = 0.5 * 32.0 * (2.0 * std::f64::consts::PI / 32.0).sin() * (1.0 - 0.25);
        assert!((m.area() - poly).abs() < 1e-13);
        let disk = CrossSectionMesh::<f64>::annulus(0.0, 1.0, 3, 16).unwrap();
        assert_eq!(disk.boundary().len(), 16);
    }

    #[test]
    fn explicit_boundary_validation() {
        let sq = CrossSectionMesh::<f64>::rectangle(0.0, 0.0, 1.0, 1.0, 2, 2).unwrap();
        let bnd: Vec<([usize; 2], usize)> = sq.boundary().iter().map(|e| (e.nodes, 0)).collect();
        let ok = CrossSectionMesh::new(sq.nodes().to_vec(), sq.triangles().to_vec(), &bnd).unwrap();
        assert_eq!(ok.boundary().len(), 8);
        assert!((ok.boundary().last().unwrap().s - 3.75).abs() < 1e-15);

        let mut reversed = bnd.clone();
        reversed[0].0 = [reversed[0].0[1], reversed[0].0[0]];
        assert!(matches!(CrossSectionMesh::new(sq.nodes().to_vec(), sq.triangles().to_vec(), &reversed), Err(Error::Mesh(_))));

        let missing = &bnd[1..];
        assert!(CrossSectionMesh::new(sq.nodes().to_vec(), sq.triangles().to_vec(), missing).is_err());

        let mut cw = sq.triangles().to_vec();
        cw[0].swap(1, 2);
        assert!(CrossSectionMesh::new(sq.nodes().to_vec(), cw, &bnd).is_err());

        let hole_as_outer: Vec<_> = bnd.iter().map(|&(e, _)| (e, 1)).collect();
        assert!(CrossSectionMesh::new(sq.nodes().to_vec(), sq.triangles().to_vec(), &hole_as_outer).is_err());
    }

    #[test]
    fn point_location() {
        let m = CrossSectionMesh::<f64>::rectangle(-1.0, -1.0, 1.0, 1.0, 4, 4).unwrap();
        let t = m.locate(&[0.3, -0.2]).unwrap();
        assert!(m.barycentric(t, &[0.3, -0.2]).iter().all(|&l| l >= 0.0));
        assert!(m.locate(&[2.0, 0.0]).is_none());
    }
}
