//! Dense bivariate polynomials in the affine chart `Z != 0` and their
//! homogenization on the unit sphere.
//!
//! A [`PolySample`] stores `f(x, y) = Σ c[j1][j2] x^j1 y^j2` on a square
//! coefficient grid. Its `degree` is the homogenization degree, so the
//! projective curve is `F(X, Y, Z) = Σ c[j1][j2] X^j1 Y^j2 Z^(d - j1 - j2)`.

use crate::error::{Error, Result};

/// Tolerance on `|P| - 1` accepted by [`PolySample::homogenize_and_eval_sphere`].
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PolySample {
    degree: usize,
    side: usize,
    coeffs: Vec<f64>,
    seed_id: u64,
}

/// Value, gradient and radial derivative `t = x f_x + y f_y` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEval {
    pub f: f64,
    pub fx: f64,
    pub fy: f64,
    pub t: f64,
}

impl PolySample {
    /// Builds a sample from `((j1, j2), coefficient)` pairs. Repeated
    /// monomials are summed. `degree` must equal the largest total degree
    /// among the nonzero terms.
    pub fn from_terms<I>(degree: usize, terms: I, seed_id: u64) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), f64)>,
    {
        let side = degree + 1;
        let mut coeffs = vec![0.0; side * side];
        for ((j1, j2), c) in terms {
            if j1 + j2 > degree {
                if c != 0.0 {
                    return Err(Error::invalid(format!("term x^{j1} y^{j2} exceeds degree {degree}")));
                }
                continue;
            }
            coeffs[j1 * side + j2] += c;
        }
        Self::from_dense(degree, side, coeffs, seed_id)
    }

    /// Builds a sample from a row-major `side x side` grid, `coeffs[j1 * side + j2]`.
    pub fn from_dense(degree: usize, side: usize, coeffs: Vec<f64>, seed_id: u64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("degree must be at least 1"));
        }
        if coeffs.len() != side * side {
            return Err(Error::invalid("coefficient grid has wrong length"));
        }
        let mut top = None;
        for (k, &c) in coeffs.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::invalid("non-finite coefficient"));
            }
            if c != 0.0 {
                let total = k / side + k % side;
                top = Some(top.map_or(total, |t: usize| t.max(total)));
            }
        }
        match top {
            Some(t) if t == degree => Ok(Self { degree, side, coeffs, seed_id }),
            Some(t) => Err(Error::invalid(format!("declared degree {degree} but highest nonzero term has degree {t}"))),
            None => Err(Error::invalid("zero polynomial")),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn seed_id(&self) -> u64 {
        self.seed_id
    }

    pub fn coeff(&self, j1: usize, j2: usize) -> f64 {
        if j1 < self.side && j2 < self.side {
            self.coeffs[j1 * self.side + j2]
        } else {
            0.0
        }
    }

    /// Nonzero terms as `((j1, j2), c)`.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        let side = self.side;
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0.0).map(move |(k, &c)| ((k / side, k % side), c))
    }

    /// Affine evaluation of `f`, `f_x`, `f_y` and `t = x f_x + y f_y`,
    /// nested Horner in `y` for every power of `x`, then in `x`.
    pub fn eval_with_radial(&self, x: f64, y: f64) -> RadialEval {
        let side = self.side;
        let (mut f, mut fx, mut fy) = (0.0, 0.0, 0.0);
        for j1 in (0..side).rev() {
            let row = &self.coeffs[j1 * side..(j1 + 1) * side];
            let (mut p, mut dp) = (0.0, 0.0);
            for &c in row.iter().rev() {
                dp = dp * y + p;
                p = p * y + c;
            }
            fx = fx * x + f;
            f = f * x + p;
            fy = fy * x + dp;
        }
        RadialEval { f, fx, fy, t: x * fx + y * fy }
    }

    /// Affine value only.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let side = self.side;
        let mut f = 0.0;
        for j1 in (0..side).rev() {
            let row = &self.coeffs[j1 * side..(j1 + 1) * side];
            let p = row.iter().rev().fold(0.0, |acc, &c| acc * y + c);
            f = f * x + p;
        }
        f
    }

    /// `F(P)` for a point on the unit sphere.
    pub fn homogenize_and_eval_sphere(&self, p: [f64; 3]) -> Result<f64> {
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::invalid(format!("point is not on the unit sphere (|P| = {n})")));
        }
        Ok(self.eval_homogeneous(p))
    }

    /// `F(X, Y, Z)` at any point of R^3.
    pub fn eval_homogeneous(&self, p: [f64; 3]) -> f64 {
        let mut scratch = HomogeneousScratch::new(self.degree);
        scratch.eval(self, p)
    }

    /// `F` together with its analytic gradient `(F_X, F_Y, F_Z)`.
    pub fn eval_homogeneous_grad(&self, p: [f64; 3]) -> (f64, [f64; 3]) {
        let d = self.degree;
        let pw = |v: f64, k: i64| if k < 0 { 0.0 } else { v.powi(k as i32) };
        let (mut f, mut g) = (0.0, [0.0; 3]);
        for ((j1, j2), c) in self.terms() {
            let j3 = d - j1 - j2;
            let (a, b, e) = (j1 as i64, j2 as i64, j3 as i64);
            let (xa, yb, ze) = (pw(p[0], a), pw(p[1], b), pw(p[2], e));
            f += c * xa * yb * ze;
            g[0] += c * a as f64 * pw(p[0], a - 1) * yb * ze;
            g[1] += c * b as f64 * xa * pw(p[1], b - 1) * ze;
            g[2] += c * e as f64 * xa * yb * pw(p[2], e - 1);
        }
        (f, g)
    }

    /// The polynomial `G` with `G(P) = F(R P)`, re-expanded in monomials.
    pub fn rotated(&self, rot: &[[f64; 3]; 3]) -> Result<Self> {
        let d = self.degree;
        let lin: [HomPoly; 3] = std::array::from_fn(|i| HomPoly::linear(rot[i]));
        let powers: [Vec<HomPoly>; 3] = std::array::from_fn(|i| {
            let mut v = vec![HomPoly::one()];
            for k in 1..=d {
                let next = v[k - 1].mul(&lin[i]);
                v.push(next);
            }
            v
        });
        let mut acc = HomPoly::zero(d);
        for ((j1, j2), c) in self.terms() {
            let j3 = d - j1 - j2;
            let term = powers[0][j1].mul(&powers[1][j2]).mul(&powers[2][j3]);
            acc.add_scaled(&term, c);
        }
        // Drop roundoff-level coefficients so the leading-degree check is meaningful.
        let scale = acc.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let terms = acc.iter().filter(|(_, c)| c.abs() > 1e-14 * scale).map(|((i, j, _), c)| ((i, j), c));
        Self::from_terms(d, terms, self.seed_id)
    }
}

/// Reusable power tables for evaluating `F` at many points.
#[derive(Debug, Clone)]
pub struct HomogeneousScratch {
    px: Vec<f64>,
    py: Vec<f64>,
    pz: Vec<f64>,
}

impl HomogeneousScratch {
    pub fn new(degree: usize) -> Self {
        Self { px: vec![1.0; degree + 1], py: vec![1.0; degree + 1], pz: vec![1.0; degree + 1] }
    }

    pub fn eval(&mut self, poly: &PolySample, p: [f64; 3]) -> f64 {
        let d = poly.degree;
        if self.px.len() < d + 1 {
            *self = Self::new(d);
        }
        for k in 1..=d {
            self.px[k] = self.px[k - 1] * p[0];
            self.py[k] = self.py[k - 1] * p[1];
            self.pz[k] = self.pz[k - 1] * p[2];
        }
        let side = poly.side;
        let mut total = 0.0;
        for j1 in 0..side.min(d + 1) {
            let row = &poly.coeffs[j1 * side..(j1 + 1) * side];
            let mut acc = 0.0;
            for (j2, &c) in row.iter().enumerate().take(d + 1 - j1) {
                acc += c * self.py[j2] * self.pz[d - j1 - j2];
            }
            total += acc * self.px[j1];
        }
        total
    }
}

/// Homogeneous trivariate polynomial of fixed degree, coefficients indexed by
/// the exponents of X and Y (the Z exponent is implied).
#[derive(Debug, Clone)]
struct HomPoly {
    degree: usize,
    coeffs: Vec<f64>,
}

impl HomPoly {
    fn zero(degree: usize) -> Self {
        Self { degree, coeffs: vec![0.0; (degree + 1) * (degree + 1)] }
    }

    fn one() -> Self {
        Self { degree: 0, coeffs: vec![1.0] }
    }

    fn linear(row: [f64; 3]) -> Self {
        let mut p = Self::zero(1);
        p.coeffs[2] = row[0]; // X: (1, 0)
        p.coeffs[1] = row[1]; // Y: (0, 1)
        p.coeffs[0] = row[2]; // Z: (0, 0)
        p
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.degree + 1) + j
    }

    fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), f64)> + '_ {
        let d = self.degree;
        (0..=d).flat_map(move |i| (0..=d - i).map(move |j| ((i, j, d - i - j), self.coeffs[self.idx(i, j)])))
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for ((i, j, _), a) in self.iter() {
            if a == 0.0 {
                continue;
            }
            for ((k, l, _), b) in other.iter() {
                let at = out.idx(i + k, j + l);
                out.coeffs[at] += a * b;
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &Self, s: f64) {
        debug_assert_eq!(self.degree, other.degree);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> PolySample {
        PolySample::from_terms(2, [((2, 0), 1.0), ((0, 2), 1.0), ((0, 0), -1.0)], 0).unwrap()
    }

    #[test]
    fn unit_circle_evaluations() {
        let p = circle();
        assert_eq!(p.eval_with_radial(0.0, 0.0), RadialEval { f: -1.0, fx: 0.0, fy: 0.0, t: 0.0 });
        assert_eq!(p.eval_with_radial(2.0, 0.0), RadialEval { f: 3.0, fx: 4.0, fy: 0.0, t: 8.0 });
    }

    #[test]
    fn monomial_radial_derivative_is_euler_multiple() {
        let p = PolySample::from_terms(3, [((2, 1), 3.0)], 0).unwrap();
        let e = p.eval_with_radial(1.0, 2.0);
        assert_eq!((e.f, e.fx, e.fy, e.t), (6.0, 12.0, 3.0, 18.0));
        assert_eq!(e.t, 3.0 * e.f);
    }

    #[test]
    fn circle_homogenizes_to_cone() {
        let p = circle();
        assert_eq!(p.homogenize_and_eval_sphere([0.0, 0.0, 1.0]).unwrap(), -1.0);
        let q = [0.6, 0.0, 0.8];
        let v = p.homogenize_and_eval_sphere(q).unwrap();
        assert!((v - (0.36 - 0.64)).abs() < 1e-15);
    }

    #[test]
    fn rejects_off_sphere_points() {
        let p = circle();
        assert!(p.homogenize_and_eval_sphere([0.0, 0.0, 1.0 + 1e-9]).is_err());
        assert!(p.homogenize_and_eval_sphere([0.0, 0.0, 1.0 + 1e-13]).is_ok());
    }

    #[test]
    fn degree_must_match_support() {
        assert!(PolySample::from_terms(3, [((1, 1), 1.0)], 0).is_err());
        assert!(PolySample::from_terms(1, [((1, 1), 1.0)], 0).is_err());
        assert!(PolySample::from_terms(2, [((0, 0), 0.0)], 0).is_err());
        assert!(PolySample::from_terms(1, [((0, 0), f64::NAN), ((1, 0), 1.0)], 0).is_err());
    }

    #[test]
    fn rotation_matches_composition() {
        let p =
            PolySample::from_terms(3, [((0, 0), 0.3), ((1, 0), -1.2), ((1, 2), 0.7), ((3, 0), 2.0), ((0, 1), 0.5)], 7)
                .unwrap();
        let (c, s) = (0.6f64, 0.8f64);
        let rot = [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]];
        let g = p.rotated(&rot).unwrap();
        for q in [[0.1, 0.2, 0.97], [0.5, -0.5, 0.7], [-0.3, 0.9, 0.1]] {
            let rq = [
                rot[0][0] * q[0] + rot[0][1] * q[1] + rot[0][2] * q[2],
                rot[1][0] * q[0] + rot[1][1] * q[1] + rot[1][2] * q[2],
                rot[2][0] * q[0] + rot[2][1] * q[1] + rot[2][2] * q[2],
            ];
            let lhs = g.eval_homogeneous(q);
            let rhs = p.eval_homogeneous(rq);
            assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
        }
    }
}
