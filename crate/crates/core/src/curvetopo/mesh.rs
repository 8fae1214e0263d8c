//! Antipodally symmetric icosphere with a vertex at each pole.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Highest subdivision level accepted (~5M triangles).
pub const MAX_LEVEL: u32 = 9;

/// Longest chord after each number of refinements, rounded up.
const MAX_EDGE: [f64; 10] = [1.05147, 0.61804, 0.32492, 0.16465, 0.08261, 0.04134, 0.02068, 0.01034, 0.00517, 0.00259];

#[derive(Debug, Clone)]
pub struct SphereMesh {
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[usize; 3]>,
    /// Endpoints of every undirected edge, smaller index first.
    edges: Vec<[usize; 2]>,
    /// The three edge ids of each triangle: edge k joins corners k and k+1.
    triangle_edges: Vec<[usize; 3]>,
    antipode: Vec<usize>,
    antipodal_edge: Vec<usize>,
    level: u32,
    max_edge: f64,
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn key(v: [f64; 3]) -> [i64; 3] {
    v.map(|c| (c * 1e9).round() as i64)
}

impl SphereMesh {
    /// Icosahedron refined `level` times by edge midpoints pushed to the sphere.
    ///
    /// The base icosahedron has vertices at `(0, 0, ±1)` and its lower ring is
    /// the exact negation of the upper one, so every refinement keeps the
    /// vertex set closed under `P -> -P` bit for bit.
    pub fn icosphere(level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::invalid(format!("subdivision level {level} above {MAX_LEVEL}")));
        }
        let z = 1.0 / 5f64.sqrt();
        let rho = 2.0 * z;
        let mut vertices = vec![[0.0, 0.0, 1.0]];
        for k in 0..5 {
            let a = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
            vertices.push([rho * a.cos(), rho * a.sin(), z]);
        }
        for k in 0..5 {
            let u = vertices[1 + k];
            vertices.push([-u[0], -u[1], -u[2]]);
        }
        vertices.push([0.0, 0.0, -1.0]);
        // Upper ring U_k = 1 + k at angle 72k; lower ring vertex 6 + k sits at
        // 72k + 180 = 36 + 72(k + 2), so the lower vertex between U_m and
        // U_{m+1} is 6 + (m + 3) % 5.
        let up = |k: usize| 1 + k % 5;
        let low = |m: usize| 6 + (m + 3) % 5;
        let mut triangles = Vec::new();
        for k in 0..5 {
            triangles.push([0, up(k), up(k + 1)]);
            triangles.push([up(k), low(k), up(k + 1)]);
            triangles.push([low(k), low(k + 1), up(k + 1)]);
            triangles.push([11, low(k + 1), low(k)]);
        }
        for t in triangles.iter_mut() {
            let (a, b, c) = (vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            let e1 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let e2 = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let n = [e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]];
            if n[0] * a[0] + n[1] * a[1] + n[2] * a[2] < 0.0 {
                t.swap(1, 2);
            }
        }

        for _ in 0..level {
            let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
            let mut next = Vec::with_capacity(triangles.len() * 4);
            let mut mid = |a: usize, b: usize, vertices: &mut Vec<[f64; 3]>| {
                let k = (a.min(b), a.max(b));
                *midpoint.entry(k).or_insert_with(|| {
                    let (p, q) = (vertices[a], vertices[b]);
                    vertices.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                    vertices.len() - 1
                })
            };
            for &[a, b, c] in &triangles {
                let ab = mid(a, b, &mut vertices);
                let bc = mid(b, c, &mut vertices);
                let ca = mid(c, a, &mut vertices);
                next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
            }
            triangles = next;
        }

        let mut edge_id: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for t in &triangles {
            let mut ids = [0; 3];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let e = (a.min(b), a.max(b));
                ids[k] = *edge_id.entry(e).or_insert_with(|| {
                    edges.push([e.0, e.1]);
                    edges.len() - 1
                });
            }
            triangle_edges.push(ids);
        }

        let index: HashMap<[i64; 3], usize> = vertices.iter().enumerate().map(|(i, &v)| (key(v), i)).collect();
        let antipode: Vec<usize> = vertices
            .iter()
            .map(|v| index.get(&key([-v[0], -v[1], -v[2]])).copied())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::invalid("icosphere lost antipodal symmetry"))?;
        let antipodal_edge = edges
            .iter()
            .map(|&[a, b]| {
                let (p, q) = (antipode[a], antipode[b]);
                edge_id.get(&(p.min(q), p.max(q))).copied()
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::invalid("icosphere edge set is not antipodally closed"))?;
        let max_edge = edges.iter().map(|&[a, b]| dist(vertices[a], vertices[b])).fold(0.0, f64::max);

        Ok(Self { vertices, triangles, edges, triangle_edges, antipode, antipodal_edge, level, max_edge })
    }

    /// Smallest level whose longest edge is below `0.5 / degree`.
    pub fn level_for_degree(degree: usize) -> u32 {
        let target = 0.5 / degree.max(1) as f64;
        (0..=MAX_LEVEL).find(|&l| MAX_EDGE[l as usize] < target).unwrap_or(MAX_LEVEL)
    }

    pub fn for_degree(degree: usize) -> Result<Self> {
        Self::icosphere(Self::level_for_degree(degree))
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.triangle_edges
    }

    pub fn antipode(&self, v: usize) -> usize {
        self.antipode[v]
    }

    pub fn antipodal_edge(&self, e: usize) -> usize {
        self.antipodal_edge[e]
    }

    pub fn subdivision_level(&self) -> u32 {
        self.level
    }

    /// Longest chord length.
    pub fn max_edge(&self) -> f64 {
        self.max_edge
    }
}
