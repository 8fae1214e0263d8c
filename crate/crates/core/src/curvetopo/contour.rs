//! Zero-set extraction on the sphere mesh and discrete winding numbers.

use std::f64::consts::{PI, TAU};

use super::mesh::SphereMesh;
use crate::error::{DegenerateReason, Error, Result};
use crate::polynomial::{HomogeneousScratch, PolySample};

/// Crossings closer than this to `(0, 0, ±1)` make the sample degenerate.
pub const POLE_EXCLUSION: f64 = 1e-3;

/// Loops with fewer crossings than this are not trusted.
pub const MIN_LOOP_POINTS: usize = 6;

const NO_CROSSING: u32 = u32::MAX;

/// One closed component of the extracted zero set on `S^2`.
///
/// Loops are oriented with `F > 0` on the left as seen from outside the
/// sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveLoop {
    pub points: Vec<[f64; 3]>,
    /// Mesh edge crossed by each point.
    pub edges: Vec<usize>,
    pub winding: i32,
    pub is_self_antipodal: bool,
    /// Index of the antipodal image when it is a different loop.
    pub partner: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopSet {
    pub degree: usize,
    pub loops: Vec<CurveLoop>,
}

fn off_pole(p: [f64; 3]) -> Result<()> {
    if p[0].hypot(p[1]) < POLE_EXCLUSION {
        Err(Error::DegenerateSample(DegenerateReason::NearPole))
    } else {
        Ok(())
    }
}

/// Winding of a closed polyline about the `Z` axis: accumulated change of
/// `atan2(Y, X)` over `2π`, each step wrapped into `(-π, π]`.
pub fn winding_number(points: &[[f64; 3]]) -> Result<i32> {
    if points.is_empty() {
        return Ok(0);
    }
    let mut total = 0.0;
    let mut prev = None;
    for p in points.iter().chain(std::iter::once(&points[0])) {
        off_pole(*p)?;
        let a = p[1].atan2(p[0]);
        if let Some(b) = prev {
            let mut delta: f64 = a - b;
            if delta > PI {
                delta -= TAU;
            } else if delta <= -PI {
                delta += TAU;
            }
            total += delta;
        }
        prev = Some(a);
    }
    let turns = total / TAU;
    let w = turns.round();
    if (turns - w).abs() >= 0.1 {
        return Err(Error::DegenerateSample(DegenerateReason::NonIntegerWinding));
    }
    if w.abs() > 1.0 {
        return Err(Error::DegenerateSample(DegenerateReason::WindingOutOfRange));
    }
    Ok(w as i32)
}

/// Tie-break for vertices where `F` vanishes: exactly one of `v`, `-v` is
/// upper, so odd `F` keeps `sign F(-v) = -sign F(v)`.
fn upper(v: [f64; 3]) -> bool {
    (v[2], v[1], v[0]) > (-v[2], -v[1], -v[0])
}

/// Piecewise-linear zero set of `F` on `mesh`, chained into oriented loops.
///
/// A vertex value equal to zero counts as positive, except for odd degree on
/// the lower hemisphere where it counts as negative. Crossings are keyed by
/// mesh edge, so chaining is purely combinatorial; the antipodal partner of
/// a loop is the loop through the antipodal edge of any of its crossings.
pub fn extract_loops(poly: &PolySample, mesh: &SphereMesh) -> Result<LoopSet> {
    let verts = mesh.vertices();
    let mut scratch = HomogeneousScratch::new(poly.degree());
    let values: Vec<f64> = verts.iter().map(|&v| scratch.eval(poly, v)).collect();
    let even = poly.degree().is_multiple_of(2);
    let positive: Vec<bool> =
        values.iter().zip(verts).map(|(&f, &v)| f > 0.0 || (f == 0.0 && (even || upper(v)))).collect();
    if positive.iter().all(|&p| p) || positive.iter().all(|&p| !p) {
        return Ok(LoopSet { degree: poly.degree(), loops: Vec::new() });
    }

    let edges = mesh.edges();
    let mut next = vec![NO_CROSSING; edges.len()];
    let mut crossed = 0usize;
    for (tri, tedges) in mesh.triangles().iter().zip(mesh.triangle_edges()) {
        let s = tri.map(|v| positive[v]);
        if s[0] == s[1] && s[1] == s[2] {
            continue;
        }
        // Lone corner k: its two incident edges are k-1 and k. In a
        // counterclockwise triangle the lone corner lies left of the
        // segment running from edge k to edge k-1.
        let k = if s[0] != s[1] && s[0] != s[2] {
            0
        } else if s[1] != s[0] && s[1] != s[2] {
            1
        } else {
            2
        };
        let (ek, ekm1) = (tedges[k], tedges[(k + 2) % 3]);
        let (from, to) = if s[k] { (ek, ekm1) } else { (ekm1, ek) };
        if next[from] != NO_CROSSING {
            return Err(Error::DegenerateSample(DegenerateReason::OpenChain));
        }
        next[from] = to as u32;
        crossed += 1;
    }

    let mut loop_of = vec![u32::MAX; edges.len()];
    let mut loops = Vec::new();
    let mut seen = 0usize;
    for start in 0..edges.len() {
        if next[start] == NO_CROSSING || loop_of[start] != u32::MAX {
            continue;
        }
        let id = loops.len() as u32;
        let mut edge_ids = Vec::new();
        let mut e = start;
        loop {
            if loop_of[e] != u32::MAX {
                return Err(Error::DegenerateSample(DegenerateReason::OpenChain));
            }
            loop_of[e] = id;
            edge_ids.push(e);
            let n = next[e];
            if n == NO_CROSSING {
                return Err(Error::DegenerateSample(DegenerateReason::OpenChain));
            }
            e = n as usize;
            if e == start {
                break;
            }
        }
        seen += edge_ids.len();
        if edge_ids.len() < MIN_LOOP_POINTS {
            return Err(Error::DegenerateSample(DegenerateReason::ShortLoop));
        }
        let points = edge_ids
            .iter()
            .map(|&e| {
                let [a, b] = edges[e];
                let (fa, fb) = (values[a], values[b]);
                let t = if fa == fb { 0.5 } else { fa / (fa - fb) };
                let (pa, pb) = (verts[a], verts[b]);
                let p = [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]), pa[2] + t * (pb[2] - pa[2])];
                let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                let q = [p[0] / n, p[1] / n, p[2] / n];
                off_pole(q).map(|_| q)
            })
            .collect::<Result<Vec<_>>>()?;
        let winding = winding_number(&points)?;
        loops.push(CurveLoop { points, edges: edge_ids, winding, is_self_antipodal: false, partner: None });
    }
    if seen != crossed {
        return Err(Error::DegenerateSample(DegenerateReason::OpenChain));
    }

    for i in 0..loops.len() {
        let image = loop_of[mesh.antipodal_edge(loops[i].edges[0])] as usize;
        if image >= loops.len() || loops[image].edges.len() != loops[i].edges.len() {
            return Err(Error::DegenerateSample(DegenerateReason::AntipodalMismatch));
        }
        if image == i {
            loops[i].is_self_antipodal = true;
        } else {
            loops[i].partner = Some(image);
        }
    }
    for i in 0..loops.len() {
        if let Some(j) = loops[i].partner {
            if loops[j].partner != Some(i) {
                return Err(Error::DegenerateSample(DegenerateReason::AntipodalMismatch));
            }
        }
    }
    Ok(LoopSet { degree: poly.degree(), loops })
}
