//! Fusion-category data and the 6j self-duality check.
//!
//! A 6-tuple `{j1 j2 j3; j4 j5 j6}` is admissible when its four triangles
//! fuse: `j3 ∈ j1⊗j2`, `j6 ∈ j1⊗j5`, `j6* ∈ j4⊗j2`, `j3* ∈ j4⊗j5`.

use crate::error::{Error, Result};
use crate::linalg::{c, max_abs_diff, CMat};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

pub type Tuple = [usize; 6];

#[derive(Debug, Clone)]
pub struct FusionCategoryData {
    pub name: String,
    pub labels: Vec<String>,
    pub dual: Vec<usize>,
    /// `fusion[(a * n + b) * n + c]` is true when c occurs in a⊗b.
    pub fusion: Vec<bool>,
    pub dims: Vec<f64>,
    pub s: CMat,
    /// Dense over all n⁶ tuples, zero off the admissible ones.
    pub six_j: Vec<Complex64>,
}

impl FusionCategoryData {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn fuses(&self, a: usize, b: usize, c: usize) -> bool {
        let n = self.rank();
        self.fusion[(a * n + b) * n + c]
    }

    pub fn admissible(&self, t: &Tuple) -> bool {
        let [j1, j2, j3, j4, j5, j6] = *t;
        self.fuses(j1, j2, j3) && self.fuses(j1, j5, j6) && self.fuses(j4, j2, self.dual[j6]) && self.fuses(j4, j5, self.dual[j3])
    }

    pub fn index(&self, t: &Tuple) -> usize {
        t.iter().fold(0, |acc, &j| acc * self.rank() + j)
    }

    pub fn six_j(&self, t: &Tuple) -> Complex64 {
        self.six_j[self.index(t)]
    }

    pub fn all_tuples(&self) -> impl Iterator<Item = Tuple> + '_ {
        let n = self.rank();
        (0..n.pow(6)).map(move |mut i| {
            let mut t = [0; 6];
            for slot in t.iter_mut().rev() {
                *slot = i % n;
                i /= n;
            }
            t
        })
    }

    pub fn random_tuples<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<Tuple> {
        (0..count).map(|_| std::array::from_fn(|_| rng.random_range(0..self.rank()))).collect()
    }

    /// Structural checks run at construction.
    pub fn validate(&self) -> Result<()> {
        let n = self.rank();
        let bad = |m: &str| Err(Error::Construction(format!("{}: {m}", self.name)));
        if self.dual.iter().enumerate().any(|(j, &k)| k >= n || self.dual[k] != j) {
            return bad("dual is not an involution");
        }
        let s = &self.s;
        if max_abs_diff(&(s * s.adjoint()), &CMat::identity(n, n)) > 1e-12 {
            return bad("S is not unitary");
        }
        if max_abs_diff(s, &s.transpose()) > 1e-12 {
            return bad("S is not symmetric");
        }
        let s2 = s * s;
        for j in 0..n {
            for k in 0..n {
                if k != self.dual[j] && s2[(j, k)].norm() > 1e-12 {
                    return bad("S² is not supported on the charge conjugation");
                }
            }
        }
        if self.all_tuples().any(|t| !self.admissible(&t) && self.six_j(&t).norm() > 0.0) {
            return bad("6j symbol off the admissible tuples");
        }
        let vacuum = verify_6j_duality(self, &[[0; 6]]);
        if vacuum.max_deviation > 1e-10 {
            return bad("vacuum tuple breaks the duality");
        }
        Ok(())
    }
}

/// Z_d with trivial associator. Needs odd d so that q^(jk) gives a modular S.
pub fn pointed_zd_category(d: u32) -> Result<FusionCategoryData> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("pointed category needs odd d ≥ 3, got {d}")));
    }
    let n = d as usize;
    let mut fusion = vec![false; n * n * n];
    for a in 0..n {
        for b in 0..n {
            fusion[(a * n + b) * n + (a + b) % n] = true;
        }
    }
    let s = CMat::from_fn(n, n, |j, k| {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / d as f64) / (d as f64).sqrt()
    });
    let mut cat = FusionCategoryData {
        name: format!("Z_{d}"),
        labels: (0..n).map(|j| j.to_string()).collect(),
        dual: (0..n).map(|j| (n - j) % n).collect(),
        fusion,
        dims: vec![1.0; n],
        s,
        six_j: Vec::new(),
    };
    cat.six_j = cat.all_tuples().map(|t| if cat.admissible(&t) { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect();
    cat.validate()?;
    Ok(cat)
}

#[derive(Debug, Clone, Serialize)]
pub struct SixJReport {
    pub category: String,
    pub tuples: usize,
    pub max_deviation: f64,
    pub worst_tuple: Tuple,
}

/// |{X6 X5 X4; X3* X2* X1*}|² against Σ_Y Π_k S[X_k][Y_k] |{Y1 … Y6}|².
pub fn verify_6j_duality(cat: &FusionCategoryData, tuples: &[Tuple]) -> SixJReport {
    let weights: Vec<(Tuple, f64)> = cat
        .all_tuples()
        .filter_map(|y| {
            let w = cat.six_j(&y).norm_sqr();
            (w > 0.0).then_some((y, w))
        })
        .collect();
    let mut worst = (0.0f64, [0; 6]);
    for x in tuples {
        let flipped = [x[5], x[4], x[3], cat.dual[x[2]], cat.dual[x[1]], cat.dual[x[0]]];
        let lhs = cat.six_j(&flipped).norm_sqr();
        let rhs: Complex64 = weights
            .iter()
            .map(|(y, w)| x.iter().zip(y).map(|(&a, &b)| cat.s[(a, b)]).product::<Complex64>() * *w)
            .sum();
        let dev = (rhs - lhs).norm();
        if dev > worst.0 {
            worst = (dev, *x);
        }
    }
    SixJReport { category: cat.name.clone(), tuples: tuples.len(), max_deviation: worst.0, worst_tuple: worst.1 }
}

#[cfg(feature = "fibonacci")]
pub use fib::{fibonacci_category, fibonacci_f};

#[cfg(feature = "fibonacci")]
mod fib {
    use super::*;

    const ONE: usize = 0;
    const TAU: usize = 1;

    fn fuses(a: usize, b: usize, c: usize) -> bool {
        // a triangle with exactly one τ cannot fuse
        let taus = [a, b, c].iter().filter(|&&x| x == TAU).count();
        taus != 1
    }

    /// F^{abc}_d[e, f] with the single free block F^{τττ}_τ = [[x, y], [y, −x]].
    fn f_symbol(x: f64, a: usize, b: usize, cc: usize, d: usize, e: usize, f: usize) -> f64 {
        if !(fuses(a, b, e) && fuses(e, cc, d) && fuses(b, cc, f) && fuses(a, f, d)) {
            return 0.0;
        }
        if [a, b, cc, d] == [TAU; 4] {
            let y = (1.0 - x * x).max(0.0).sqrt();
            return [[x, y], [y, -x]][e][f];
        }
        1.0
    }

    fn pentagon_residual(x: f64) -> f64 {
        let mut r = 0.0;
        let l = [ONE, TAU];
        for &a in &l {
            for &b in &l {
                for &cc in &l {
                    for &d in &l {
                        for &e in &l {
                            for &f in &l {
                                for &g in &l {
                                    for &k in &l {
                                        for &m in &l {
                                            let lhs = f_symbol(x, f, cc, d, e, g, m) * f_symbol(x, a, b, m, e, f, k);
                                            let rhs: f64 = l
                                                .iter()
                                                .map(|&h| {
                                                    f_symbol(x, a, b, cc, g, f, h)
                                                        * f_symbol(x, a, h, d, e, g, k)
                                                        * f_symbol(x, b, cc, d, k, h, m)
                                                })
                                                .sum();
                                            r += (lhs - rhs).powi(2);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        r
    }

    /// Solves the pentagon for the free entry of F^{τττ}_τ among orthogonal
    /// symmetric blocks with positive off-diagonal.
    pub fn fibonacci_f() -> Result<f64> {
        let grid = 4000;
        let (mut best, mut best_r) = (0.0, f64::INFINITY);
        for i in 1..grid {
            let x = -1.0 + 2.0 * i as f64 / grid as f64;
            let r = pentagon_residual(x);
            if r < best_r {
                (best, best_r) = (x, r);
            }
        }
        let (mut lo, mut hi) = (best - 2.0 / grid as f64, best + 2.0 / grid as f64);
        let g = (3.0 - 5f64.sqrt()) / 2.0;
        for _ in 0..200 {
            let (m1, m2) = (lo + g * (hi - lo), hi - g * (hi - lo));
            if pentagon_residual(m1) < pentagon_residual(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let x = (lo + hi) / 2.0;
        let r = pentagon_residual(x);
        if r > 1e-20 {
            return Err(Error::Construction(format!("pentagon solve stalled at residual {r:e}")));
        }
        Ok(x)
    }

    pub fn fibonacci_category() -> Result<FusionCategoryData> {
        let x = fibonacci_f()?;
        // x = 1/φ at the solution; dimensions follow from it
        let phi = 1.0 / x;
        let dims = vec![1.0, phi];
        let total = (1.0 + phi * phi).sqrt();
        let s = CMat::from_fn(2, 2, |j, k| c(if j == TAU && k == TAU { -1.0 } else { dims[j] * dims[k] } / total, 0.0));
        let mut fusion = vec![false; 8];
        for a in 0..2 {
            for b in 0..2 {
                for cc in 0..2 {
                    fusion[(a * 2 + b) * 2 + cc] = fuses(a, b, cc);
                }
            }
        }
        let mut cat = FusionCategoryData {
            name: "Fibonacci".into(),
            labels: vec!["1".into(), "τ".into()],
            dual: vec![ONE, TAU],
            fusion,
            dims: dims.clone(),
            s,
            six_j: Vec::new(),
        };
        // {j1 j2 j3; j4 j5 j6} = F^{j1 j2 j4}_{j5}[j3, j6] / √(d_j3 d_j6)
        cat.six_j = cat
            .all_tuples()
            .map(|[j1, j2, j3, j4, j5, j6]| c(f_symbol(x, j1, j2, j4, j5, j3, j6) / (dims[j3] * dims[j6]).sqrt(), 0.0))
            .collect();
        cat.validate()?;
        Ok(cat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn even_d_is_rejected() {
        assert!(matches!(pointed_zd_category(4), Err(Error::InvalidParameter(_))));
        assert!(pointed_zd_category(9).is_ok());
    }

    #[test]
    fn pointed_data() {
        for d in [3u32, 5, 7] {
            let cat = pointed_zd_category(d).unwrap();
            let n = d as usize;
            assert!(max_abs_diff(&(&cat.s * cat.s.adjoint()), &CMat::identity(n, n)) <= 1e-12);
            assert!((0..n).all(|j| cat.dual[cat.dual[j]] == j));
            let count = cat.all_tuples().filter(|t| cat.admissible(t)).count();
            assert_eq!(count, n.pow(3));
            // each triangle is the abelian fusion rule
            assert!(cat.fuses(1, 2, 3 % n));
            assert!(!cat.fuses(1, 1, 0));
        }
    }

    #[test]
    fn vacuum_tuple() {
        let cat = pointed_zd_category(5).unwrap();
        let r = verify_6j_duality(&cat, &[[0; 6]]);
        assert!(r.max_deviation < 1e-12);
    }

    #[test]
    fn full_scan_d3() {
        let cat = pointed_zd_category(3).unwrap();
        let tuples: Vec<Tuple> = cat.all_tuples().collect();
        assert_eq!(tuples.len(), 729);
        assert!(verify_6j_duality(&cat, &tuples).max_deviation <= 1e-9);
    }

    #[test]
    fn random_tuples_d5_d7() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [5u32, 7] {
            let cat = pointed_zd_category(d).unwrap();
            let tuples = cat.random_tuples(&mut rng, 200);
            assert!(verify_6j_duality(&cat, &tuples).max_deviation <= 1e-9);
        }
    }

    #[test]
    fn broken_six_j_is_caught() {
        let mut cat = pointed_zd_category(3).unwrap();
        let t = cat.all_tuples().find(|t| cat.admissible(t) && t.iter().any(|&j| j != 0)).unwrap();
        let i = cat.index(&t);
        cat.six_j[i] = c(0.5, 0.0);
        let tuples: Vec<Tuple> = cat.all_tuples().collect();
        assert!(verify_6j_duality(&cat, &tuples).max_deviation > 1e-3);
    }

    #[cfg(feature = "fibonacci")]
    #[test]
    fn fibonacci_scan() {
        let x = fibonacci_f().unwrap();
        assert!((x - 2.0 / (1.0 + 5f64.sqrt())).abs() < 1e-10);
        let cat = fibonacci_category().unwrap();
        let tuples: Vec<Tuple> = cat.all_tuples().collect();
        assert_eq!(tuples.len(), 64);
        assert!(verify_6j_duality(&cat, &tuples).max_deviation <= 1e-8);
    }
}
