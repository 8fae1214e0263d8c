use super::contour::{extract_loops, LoopSet};
use super::mesh::SphereMesh;
use crate::error::{DegenerateReason, Error, Result};
use crate::polynomial::PolySample;

/// Topological summary of one sample as seen from `p = [0:0:1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthSampleReport {
    /// Number of ovals with `p` in their interior.
    pub depth: usize,
    /// Connected components of the curve in the projective plane.
    pub n_components_rp2: usize,
    pub has_pseudoline: bool,
    pub discarded: Option<DegenerateReason>,
}

impl DepthSampleReport {
    pub fn discarded(reason: DegenerateReason) -> Self {
        Self { depth: 0, n_components_rp2: 0, has_pseudoline: false, discarded: Some(reason) }
    }
}

/// Harnack's bound `1 + (d-1)(d-2)/2` on the number of components.
pub fn harnack_bound(degree: usize) -> usize {
    if degree < 2 {
        1
    } else {
        1 + (degree - 1) * (degree - 2) / 2
    }
}

fn degenerate(reason: DegenerateReason) -> Error {
    Error::DegenerateSample(reason)
}

/// Classifies the loops of a [`LoopSet`]: every antipodal pair is one oval,
/// a self-antipodal loop is the pseudoline, and an oval encloses `p`
/// exactly when its lifts wind once around the axis.
pub fn depth_from_loops(set: &LoopSet) -> Result<DepthSampleReport> {
    let d = set.degree;
    let (mut pairs, mut depth, mut pseudolines) = (0, 0, 0);
    for (i, l) in set.loops.iter().enumerate() {
        if l.is_self_antipodal {
            pseudolines += 1;
            continue;
        }
        let j = l.partner.ok_or_else(|| degenerate(DegenerateReason::AntipodalMismatch))?;
        if j < i {
            continue;
        }
        if set.loops[j].winding.abs() != l.winding.abs() {
            return Err(degenerate(DegenerateReason::AntipodalMismatch));
        }
        pairs += 1;
        if l.winding.abs() == 1 {
            depth += 1;
        }
    }
    if pseudolines != d % 2 {
        return Err(degenerate(DegenerateReason::AntipodalMismatch));
    }
    if depth > d / 2 {
        return Err(degenerate(DegenerateReason::BezoutViolation));
    }
    let n_components_rp2 = pairs + pseudolines;
    if n_components_rp2 > harnack_bound(d) {
        return Err(degenerate(DegenerateReason::HarnackViolation));
    }
    Ok(DepthSampleReport { depth, n_components_rp2, has_pseudoline: pseudolines == 1, discarded: None })
}

pub fn depth_of_sample(poly: &PolySample, mesh: &SphereMesh) -> Result<DepthSampleReport> {
    depth_from_loops(&extract_loops(poly, mesh)?)
}

/// [`depth_of_sample`] with degenerate samples folded into the report.
pub fn assess_sample(poly: &PolySample, mesh: &SphereMesh) -> DepthSampleReport {
    match depth_of_sample(poly, mesh) {
        Ok(r) => r,
        Err(Error::DegenerateSample(reason)) => DepthSampleReport::discarded(reason),
        Err(e) => unreachable!("depth_of_sample only fails with DegenerateSample, got {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nested_circles(n: usize) -> PolySample {
        // Π_{i=1..n} (x^2 + y^2 - i^2), expanded as a polynomial in ρ = x^2 + y^2.
        let mut rho_coeffs = vec![1.0];
        for i in 1..=n {
            let r2 = (i * i) as f64;
            let mut next = vec![0.0; rho_coeffs.len() + 1];
            for (k, c) in rho_coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r2 * c;
            }
            rho_coeffs = next;
        }
        let mut terms = Vec::new();
        for (k, c) in rho_coeffs.iter().enumerate() {
            // ρ^k = Σ_m C(k, m) x^{2m} y^{2(k-m)}
            let mut binom = 1.0;
            for m in 0..=k {
                terms.push(((2 * m, 2 * (k - m)), c * binom));
                binom = binom * (k - m) as f64 / (m + 1) as f64;
            }
        }
        PolySample::from_terms(2 * n, terms, 0).unwrap()
    }

    #[test]
    fn three_nested_circles_have_depth_three() {
        let p = nested_circles(3);
        let mesh = SphereMesh::for_degree(6).unwrap();
        let r = depth_of_sample(&p, &mesh).unwrap();
        assert_eq!(r.depth, 3);
        assert_eq!(r.n_components_rp2, 3);
        assert!(!r.has_pseudoline);
    }

    #[test]
    fn offset_circle_has_depth_zero() {
        let p = PolySample::from_terms(2, [((2, 0), 1.0), ((1, 0), -10.0), ((0, 2), 1.0), ((0, 0), 24.0)], 0).unwrap();
        let r = depth_of_sample(&p, &SphereMesh::for_degree(2).unwrap()).unwrap();
        assert_eq!((r.depth, r.n_components_rp2), (0, 1));
    }

    #[test]
    fn empty_curve() {
        let p = PolySample::from_terms(2, [((2, 0), 1.0), ((0, 2), 1.0), ((0, 0), 1.0)], 0).unwrap();
        let r = depth_of_sample(&p, &SphereMesh::for_degree(2).unwrap()).unwrap();
        assert_eq!((r.depth, r.n_components_rp2, r.has_pseudoline), (0, 0, false));
    }

    #[test]
    fn line_is_a_pseudoline_not_an_oval() {
        let p = PolySample::from_terms(1, [((1, 0), 1.0), ((0, 0), -2.0)], 0).unwrap();
        let r = depth_of_sample(&p, &SphereMesh::for_degree(1).unwrap()).unwrap();
        assert_eq!((r.depth, r.n_components_rp2, r.has_pseudoline), (0, 1, true));
    }

    #[test]
    fn harnack_values() {
        assert_eq!(harnack_bound(1), 1);
        assert_eq!(harnack_bound(2), 1);
        assert_eq!(harnack_bound(3), 2);
        assert_eq!(harnack_bound(6), 11);
    }
}
