//! String Fourier transform: one-click rotation of a diagram's boundary.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::diagram::{ChargedDiagram, Coeff, DiagramSum, Layer};
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec};
use crate::matrix::{diagram_to_entries, diagram_to_matrix, matrix_to_diagram, unit_diagram, TwoBox};
use crate::scalar::{make_ring, ExactScalar, Ring};

/// Rotate the boundary by one point: with points numbered counterclockwise
/// from the bottom-left, new point i is old point i+1. The bottom-left output
/// bends up to become the leftmost input and the rightmost input bends down
/// to become the rightmost output.
pub fn rotate_word(w: &ChargedDiagram) -> Result<ChargedDiagram> {
    if w.bottom() == 0 {
        return Err(Error::Arity("rotation needs at least one output".into()));
    }
    let mut layers = vec![Layer::Cap(w.top())];
    layers.extend(w.shifted(1).layers().iter().copied());
    layers.push(Layer::Cup(0));
    ChargedDiagram::new(w.top(), layers)
}

pub fn rotate<C: Coeff>(sum: &DiagramSum<C>) -> Result<DiagramSum<C>> {
    if sum.bottom() == 0 {
        return Err(Error::Arity("rotation needs at least one output".into()));
    }
    let terms = sum
        .terms()
        .iter()
        .map(|(c, w)| Ok((c.clone(), rotate_word(w)?)))
        .collect::<Result<Vec<_>>>()?;
    DiagramSum::from_terms(sum.ring(), sum.top(), sum.bottom(), terms)
}

/// Inverse click: the top-left input bends down to become the bottom-left
/// output. Repeating `rotate` n−1 times is not an inverse on charged terms,
/// since n clicks twist a charge-c sector by q^(c²).
pub fn rotate_back_word(w: &ChargedDiagram) -> Result<ChargedDiagram> {
    if w.top() == 0 {
        return Err(Error::Arity("inverse rotation needs at least one input".into()));
    }
    let mut layers = vec![Layer::Cap(0)];
    layers.extend(w.shifted(1).layers().iter().copied());
    layers.push(Layer::Cup(w.bottom()));
    ChargedDiagram::new(w.top(), layers)
}

pub fn rotate_inverse<C: Coeff>(sum: &DiagramSum<C>) -> Result<DiagramSum<C>> {
    if sum.top() == 0 {
        return Err(Error::Arity("inverse rotation needs at least one input".into()));
    }
    let terms = sum
        .terms()
        .iter()
        .map(|(c, w)| Ok((c.clone(), rotate_back_word(w)?)))
        .collect::<Result<Vec<_>>>()?;
    DiagramSum::from_terms(sum.ring(), sum.top(), sum.bottom(), terms)
}

/// One click on a 2-input/2-output diagram.
pub fn rotate_one_click<C: Coeff>(sum: &DiagramSum<C>) -> Result<DiagramSum<C>> {
    if sum.top() != 2 || sum.bottom() != 2 {
        return Err(Error::Arity(format!("expected a 2-box, got ({}, {})", sum.top(), sum.bottom())));
    }
    rotate(sum)
}

/// The SFT on d×d matrices as a d²×d² matrix on row-major entry vectors,
/// generated by rotating every matrix-unit diagram.
#[derive(Debug)]
pub struct RotationTable {
    pub d: u32,
    pub table: CMat,
    pub exact: Vec<Vec<ExactScalar>>,
}

impl RotationTable {
    pub fn build(ring: &Ring) -> Self {
        let d = ring.d() as usize;
        let n = d * d;
        let mut exact = vec![vec![ExactScalar::zero(ring); n]; n];
        for j in 0..d {
            for k in 0..d {
                let rot = rotate_one_click(&unit_diagram(ring, j as i64, k as i64)).unwrap();
                let e = diagram_to_entries(&rot).unwrap();
                for (r, row) in e.into_iter().enumerate() {
                    for (s, x) in row.into_iter().enumerate() {
                        exact[r * d + s][j * d + k] = x;
                    }
                }
            }
        }
        let table = CMat::from_fn(n, n, |a, b| exact[a][b].to_complex());
        RotationTable { d: ring.d(), table, exact }
    }

    /// Shared table for `d`.
    pub fn get(d: u32) -> Result<Arc<RotationTable>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<RotationTable>>>> = OnceLock::new();
        let ring = make_ring(d)?;
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().unwrap().get(&d) {
            return Ok(t.clone());
        }
        let t = Arc::new(RotationTable::build(&ring));
        cache.lock().unwrap().insert(d, t.clone());
        Ok(t)
    }

    pub fn apply(&self, a: &CMat) -> CMat {
        let d = self.d as usize;
        let v = CVec::from_fn(d * d, |i, _| a[(i / d, i % d)]);
        let out = &self.table * v;
        CMat::from_fn(d, d, |r, s| out[r * d + s])
    }

    pub fn apply_inverse(&self, a: &CMat) -> CMat {
        let d = self.d as usize;
        let v = CVec::from_fn(d * d, |i, _| a[(i / d, i % d)]);
        let out = self.table.adjoint() * v;
        CMat::from_fn(d, d, |r, s| out[r * d + s])
    }
}

pub fn sft_2box(a: &TwoBox) -> Result<TwoBox> {
    let t = RotationTable::get(a.d)?;
    Ok(TwoBox { d: a.d, m: t.apply(&a.m) })
}

/// Inverse SFT (the table is unitary).
pub fn sft_2box_inverse(a: &TwoBox) -> Result<TwoBox> {
    let t = RotationTable::get(a.d)?;
    Ok(TwoBox { d: a.d, m: t.apply_inverse(&a.m) })
}

/// The same map computed through the pictures, without the table.
pub fn sft_2box_via_diagrams(a: &TwoBox) -> Result<TwoBox> {
    let ring = make_ring(a.d)?;
    diagram_to_matrix(&rotate_one_click(&matrix_to_diagram(&ring, a)?)?)
}

/// SFT on the doubled space: S_{(x,y),(z,w)} = T_{(z,x),(w,y)}.
pub fn sft_bipartite(t: &CMat, d: usize) -> Result<CMat> {
    let n = d * d;
    if t.nrows() != n || t.ncols() != n {
        return Err(Error::Dimension(format!("expected {n}x{n}, got {}x{}", t.nrows(), t.ncols())));
    }
    Ok(CMat::from_fn(n, n, |r, s| {
        let (x, y) = (r / d, r % d);
        let (z, w) = (s / d, s % d);
        t[(z * d + x, w * d + y)]
    }))
}

pub fn sft_bipartite_inverse(s: &CMat, d: usize) -> Result<CMat> {
    let n = d * d;
    if s.nrows() != n || s.ncols() != n {
        return Err(Error::Dimension(format!("expected {n}x{n}, got {}x{}", s.nrows(), s.ncols())));
    }
    Ok(CMat::from_fn(n, n, |r, col| {
        let (z, x) = (r / d, r % d);
        let (w, y) = (col / d, col % d);
        s[(x * d + y, z * d + w)]
    }))
}

/// (1/√d)·Σ_ℓ q^{kℓ}·P_ℓ.
pub fn fourier_of_projection(d: u32, k: usize) -> CMat {
    let s = 1.0 / (d as f64).sqrt();
    CMat::from_fn(d as usize, d as usize, |i, j| {
        if i == j {
            Complex64::from_polar(s, 2.0 * std::f64::consts::PI * ((k * i) % d as usize) as f64 / d as f64)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// One step of the printed proof that SFT agrees with the DFT on diagonals.
#[derive(Debug, Clone)]
pub struct ProofStep {
    pub rule: &'static str,
    pub holds: bool,
}

fn word(top: usize, layers: Vec<Layer>) -> ChargedDiagram {
    ChargedDiagram::new(top, layers).expect("hand-built word")
}

fn ch(pos: usize, k: i64, d: u32) -> Layer {
    Layer::Charge { pos, k: k.rem_euclid(d as i64) as u32 }
}

/// Replay the six equalities for charge `k` as exact rewrite identities.
pub fn replay_proof_chain(ring: &Ring, k: i64) -> Vec<ProofStep> {
    let d = ring.d();
    let zk2 = ExactScalar::zeta_pow(ring, k * k);
    let single = |w: ChargedDiagram| DiagramSum::<ExactScalar>::single(ring, w);
    // cap(m)∘cup(−m), charges on right legs
    let proj = |m: i64| single(word(2, vec![ch(1, -m, d), Layer::Cup(0), Layer::Cap(0), ch(1, m, d)]));
    let s0 = proj(k);
    let w1 = single(word(2, vec![ch(0, -k, d), Layer::Cup(0), Layer::Cap(0), ch(1, k, d)]));
    let w2 = single(word(2, vec![ch(1, -k, d), ch(0, k, d)]));
    let w3 = |l: i64| single(word(2, vec![ch(1, -k, d), ch(1, -l, d), Layer::Cup(0), Layer::Cap(0), ch(1, l, d), ch(0, k, d)]));
    let w4 = |l: i64| single(word(2, vec![ch(1, -k, d), ch(1, -l, d), Layer::Cup(0), Layer::Cap(0), ch(0, k, d), ch(1, l, d)]));
    let w5 = |l: i64| single(word(2, vec![ch(1, -k, d), ch(1, -l, d), Layer::Cup(0), Layer::Cap(0), ch(1, k, d), ch(1, l, d)]));
    let inv_delta = ExactScalar::delta_pow(ring, -1);
    let sum = |f: &dyn Fn(i64) -> DiagramSum| {
        (0..d as i64).fold(DiagramSum::zero(ring, 2, 2), |acc, l| acc.add(&f(l)).unwrap())
    };

    let mut steps = Vec::new();
    // 1. charge across the cup
    steps.push(ProofStep { rule: "charge-across-cap", holds: s0.equivalent(&w1.scaled(&zk2)) });
    // 2. rotation of the moved picture gives two through strings
    let rot_ok = rotate_one_click(&w1).unwrap().equivalent(&w2)
        && rotate_one_click(&s0).unwrap().equivalent(&w2.scaled(&zk2));
    steps.push(ProofStep { rule: "sft-definition", holds: rot_ok });
    // 3. resolution of identity between the two charges
    let expanded = w2.expand_identity(1, 0).unwrap();
    let explicit = sum(&|l| w3(l)).scaled(&inv_delta);
    let same_matrix = diagram_to_entries(&w2).unwrap() == diagram_to_entries(&explicit).unwrap();
    steps.push(ProofStep { rule: "identity-insertion", holds: expanded.equivalent(&explicit) && same_matrix });
    // 4. para-isotopy of the two cap charges
    let pi_ok = (0..d as i64).all(|l| w3(l).equivalent(&w4(l).scaled(&ExactScalar::q_pow(ring, k * l))));
    steps.push(ProofStep { rule: "para-isotopy", holds: pi_ok });
    // 5. charge across the cap again
    let sf_ok = (0..d as i64).all(|l| w4(l).equivalent(&w5(l).scaled(&zk2)));
    steps.push(ProofStep { rule: "charge-across-cap", holds: sf_ok });
    // 6. fuse and shift the summation index
    let lhs = sum(&|l| w5(l).scaled(&ExactScalar::q_pow(ring, k * k + k * l)));
    let rhs = sum(&|m| proj(m).scaled(&ExactScalar::q_pow(ring, k * m)));
    steps.push(ProofStep { rule: "index-shift", holds: lhs.equivalent(&rhs) });
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff, random_matrix};
    use rand::SeedableRng;

    #[test]
    fn sft_of_projection_matches_dft() {
        for d in 2..=8 {
            for k in 0..d as usize {
                let p = TwoBox::unit(d, k, k);
                let f = sft_2box(&p).unwrap();
                assert!(max_abs_diff(&f.m, &fourier_of_projection(d, k)) < 1e-12, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn table_matches_diagram_route() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for d in 2..=5 {
            let a = TwoBox::new(d, random_matrix(&mut rng, d as usize)).unwrap();
            let x = sft_2box(&a).unwrap();
            let y = sft_2box_via_diagrams(&a).unwrap();
            assert!(max_abs_diff(&x.m, &y.m) < 1e-12);
        }
    }

    #[test]
    fn table_is_unitary() {
        for d in 2..=6 {
            let t = RotationTable::get(d).unwrap();
            let n = (d * d) as usize;
            assert!(max_abs_diff(&(t.table.adjoint() * &t.table), &identity(n)) < 1e-12);
        }
    }

    #[test]
    fn four_clicks_twist_charged_sectors() {
        // e_{jk} has charge c = j − k; four clicks multiply it by q^(c²)
        for d in 2..=6u32 {
            let ring = make_ring(d).unwrap();
            for j in 0..d as usize {
                for k in 0..d as usize {
                    let mut a = TwoBox::unit(d, j, k);
                    for _ in 0..4 {
                        a = sft_2box(&a).unwrap();
                    }
                    let cc = j as i64 - k as i64;
                    let want = TwoBox::unit(d, j, k).m * ring.zeta_pow_c(ring.q_exp(cc * cc));
                    assert!(max_abs_diff(&a.m, &want) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rotation_inverse() {
        let ring = make_ring(3).unwrap();
        let p = unit_diagram(&ring, 1, 2);
        assert!(rotate_inverse(&rotate(&p).unwrap()).unwrap().equivalent(&p));
        assert!(rotate(&rotate_inverse(&p).unwrap()).unwrap().equivalent(&p));
        let three = rotate(&rotate(&rotate(&p).unwrap()).unwrap()).unwrap();
        assert!(!three.equivalent(&rotate_inverse(&p).unwrap()));
    }

    #[test]
    fn proof_chain() {
        for d in [2u32, 3, 5, 8] {
            let ring = make_ring(d).unwrap();
            for k in 0..d as i64 {
                for s in replay_proof_chain(&ring, k) {
                    assert!(s.holds, "d={d} k={k} step {}", s.rule);
                }
            }
        }
    }

    #[test]
    fn bipartite_inverse() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let t = random_matrix(&mut rng, 9);
        let s = sft_bipartite(&t, 3).unwrap();
        assert!(max_abs_diff(&sft_bipartite_inverse(&s, 3).unwrap(), &t) < 1e-15);
        assert!(sft_bipartite(&t, 2).is_err());
    }
}
