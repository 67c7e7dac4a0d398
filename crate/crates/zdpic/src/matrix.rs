//! Matrix semantics: the dictionary between charged diagrams and qudit
//! vectors and operators.
//!
//! Basis ket |k⟩ is δ^(−1/2)·cap(k); an operator on m qudits has 2m inputs and
//! 2m outputs, qudit i living on the string pair (2i, 2i+1).

use num_complex::Complex64;

use crate::diagram::{eval_word, ChargedDiagram, Coeff, DiagramSum, Layer};
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec};
use crate::scalar::{ExactScalar, Monomial, Ring};

/// A vector in C^d.
#[derive(Clone, Debug, PartialEq)]
pub struct QuditKet {
    pub d: u32,
    pub amplitudes: CVec,
}

impl QuditKet {
    pub fn basis(d: u32, k: u32) -> Self {
        let mut v = CVec::zeros(d as usize);
        v[(k % d) as usize] = c(1.0, 0.0);
        QuditKet { d, amplitudes: v }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }
}

/// A d×d operator: the matrix image of a 2-input/2-output diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoBox {
    pub d: u32,
    pub m: CMat,
}

impl TwoBox {
    pub fn new(d: u32, m: CMat) -> Result<Self> {
        if m.nrows() != d as usize || m.ncols() != d as usize {
            return Err(Error::Dimension(format!("expected {d}x{d}, got {}x{}", m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite entry".into()));
        }
        Ok(TwoBox { d, m })
    }

    pub fn diag(d: u32, f: &[Complex64]) -> Self {
        TwoBox { d, m: CMat::from_diagonal(&CVec::from_column_slice(f)) }
    }

    pub fn unit(d: u32, j: usize, k: usize) -> Self {
        let mut m = CMat::zeros(d as usize, d as usize);
        m[(j, k)] = c(1.0, 0.0);
        TwoBox { d, m }
    }

    pub fn adjoint(&self) -> Self {
        TwoBox { d: self.d, m: self.m.adjoint() }
    }
}

/// Caps side by side, charge `ks[i]` on the right leg of cap i.
pub fn pair_ket_word(d: u32, ks: &[u32]) -> ChargedDiagram {
    let mut layers = Vec::with_capacity(2 * ks.len());
    for (i, &k) in ks.iter().enumerate() {
        layers.push(Layer::Cap(2 * i));
        if k % d != 0 {
            layers.push(Layer::Charge { pos: 2 * i + 1, k: k % d });
        }
    }
    ChargedDiagram::new(0, layers).expect("caps side by side")
}

fn digits(d: u32, m: usize, mut idx: usize) -> Vec<u32> {
    let mut out = vec![0; m];
    for i in (0..m).rev() {
        out[i] = (idx % d as usize) as u32;
        idx /= d as usize;
    }
    out
}

/// |k⟩ with its picture. The picture is the bare cap; the ket is
/// δ^(−1/2) times it, so ⟨j|k⟩ = δ^(−1)·eval(cup(−j)∘cap(k)).
pub fn ket_from_charge(ring: &Ring, k: i64) -> (QuditKet, DiagramSum) {
    let d = ring.d();
    let k = k.rem_euclid(d as i64) as u32;
    (QuditKet::basis(d, k), DiagramSum::cap(ring, k as i64))
}

/// ⟨j|k⟩ evaluated through the pictures.
pub fn inner_product(ring: &Ring, j: i64, k: i64) -> ExactScalar {
    let v = DiagramSum::cup(ring, -j).compose_vertical(&DiagramSum::cap(ring, k)).unwrap().eval_closed().unwrap();
    &v * &ExactScalar::delta_pow(ring, -1)
}

/// Matrix unit e_jk = δ^(−1)·cap(j)∘cup(−k).
pub fn unit_diagram(ring: &Ring, j: i64, k: i64) -> DiagramSum {
    DiagramSum::cap(ring, j)
        .compose_vertical(&DiagramSum::cup(ring, -k))
        .unwrap()
        .scaled(&ExactScalar::delta_pow(ring, -1))
}

/// P_k = e_kk.
pub fn projection_diagram(ring: &Ring, k: i64) -> DiagramSum {
    unit_diagram(ring, k, k)
}

/// Matrix entries (J, K) = δ^(−m)·eval(bra_J ∘ D ∘ ket_K), kept in the
/// coefficient type of the sum.
pub fn diagram_to_entries<C: Coeff>(sum: &DiagramSum<C>) -> Result<Vec<Vec<C>>> {
    let (t, b) = (sum.top(), sum.bottom());
    if t != b || t % 2 != 0 {
        return Err(Error::Arity(format!("need 2m inputs and 2m outputs, got ({t}, {b})")));
    }
    let ring = sum.ring();
    let d = ring.d();
    let m = t / 2;
    let n = (d as usize).pow(m as u32);
    let kets: Vec<ChargedDiagram> = (0..n).map(|i| pair_ket_word(d, &digits(d, m, i))).collect();
    let bras: Vec<ChargedDiagram> = kets.iter().map(|k| k.reflect(d)).collect();
    let norm = Monomial { zeta: 0, delta: -(m as i64) };
    let mut out = vec![vec![C::zero(ring); n]; n];
    for (coef, w) in sum.terms() {
        for (kk, ket) in kets.iter().enumerate() {
            let upper = ket.stack(w)?;
            for (jj, bra) in bras.iter().enumerate() {
                if let Some(mono) = eval_word(ring, &upper.stack(bra)?)? {
                    let v = coef.mul(&C::from_monomial(ring, mono.times(norm)));
                    out[jj][kk] = out[jj][kk].add(&v);
                }
            }
        }
    }
    Ok(out)
}

/// Operator on m qudits represented by a 2m-in/2m-out diagram sum.
pub fn diagram_to_operator<C: Coeff>(sum: &DiagramSum<C>) -> Result<CMat> {
    let e = diagram_to_entries(sum)?;
    let n = e.len();
    Ok(CMat::from_fn(n, n, |i, j| e[i][j].to_complex()))
}

pub fn diagram_to_matrix<C: Coeff>(sum: &DiagramSum<C>) -> Result<TwoBox> {
    if sum.top() != 2 || sum.bottom() != 2 {
        return Err(Error::Arity(format!("a 2-box has 2 inputs and 2 outputs, got ({}, {})", sum.top(), sum.bottom())));
    }
    Ok(TwoBox { d: sum.d(), m: diagram_to_operator(sum)? })
}

/// Σ_{JK} A_{JK}·δ^(−m)·ket_J∘bra_K for an operator on m qudits.
pub fn operator_to_diagram(ring: &Ring, a: &CMat) -> Result<DiagramSum<Complex64>> {
    let d = ring.d();
    let n = a.nrows();
    let mut m = 0;
    let mut size = 1;
    while size < n {
        size *= d as usize;
        m += 1;
    }
    if size != n || a.ncols() != n {
        return Err(Error::Dimension(format!("{}x{} is not a power of d={d}", a.nrows(), a.ncols())));
    }
    let scale = ring.delta().powi(-(m as i32));
    let mut terms = Vec::new();
    for j in 0..n {
        for k in 0..n {
            let z = a[(j, k)];
            if z == c(0.0, 0.0) {
                continue;
            }
            let bra = pair_ket_word(d, &digits(d, m, k)).reflect(d);
            let ket = pair_ket_word(d, &digits(d, m, j));
            terms.push((z * scale, bra.stack(&ket)?));
        }
    }
    DiagramSum::from_terms(ring, 2 * m, 2 * m, terms)
}

pub fn matrix_to_diagram(ring: &Ring, a: &TwoBox) -> Result<DiagramSum<Complex64>> {
    if a.d != ring.d() {
        return Err(Error::Dimension(format!("2-box over d={} used with d={}", a.d, ring.d())));
    }
    operator_to_diagram(ring, &a.m)
}

/// The pictured Paulis on two strings: X = charge 1 on the right string,
/// Y = charge −1 on the left string, Z = charges 1 (left) and −1 (right) at one level.
pub struct PauliPictures {
    pub i: DiagramSum,
    pub x: DiagramSum,
    pub y: DiagramSum,
    pub z: DiagramSum,
}

pub fn pauli_pictures(ring: &Ring) -> PauliPictures {
    PauliPictures {
        i: DiagramSum::identity(ring, 2),
        x: DiagramSum::same_level(ring, 2, &[(1, 1)]).unwrap(),
        y: DiagramSum::same_level(ring, 2, &[(0, -1)]).unwrap(),
        z: DiagramSum::same_level(ring, 2, &[(0, 1), (1, -1)]).unwrap(),
    }
}

/// F_{ℓk} = q^{kℓ}/√d.
pub fn dft_matrix(d: u32) -> TwoBox {
    let s = 1.0 / (d as f64).sqrt();
    let m = CMat::from_fn(d as usize, d as usize, |l, k| {
        Complex64::from_polar(s, 2.0 * std::f64::consts::PI * ((k * l) % d as usize) as f64 / d as f64)
    });
    TwoBox { d, m }
}

/// (F f)(ℓ) = d^(−1/2)·Σ_k q^{kℓ} f(k).
pub fn dft_apply(f: &[Complex64]) -> Vec<Complex64> {
    let d = f.len() as u32;
    let fm = dft_matrix(d).m;
    (fm * CVec::from_column_slice(f)).iter().copied().collect()
}

/// Phase gate G|k⟩ = ζ^(k²)|k⟩, defined at the matrix level.
pub fn gaussian_gate(ring: &Ring) -> TwoBox {
    let d = ring.d();
    let f: Vec<Complex64> = (0..d as i64).map(|k| ring.zeta_pow_c(k * k)).collect();
    TwoBox::diag(d, &f)
}

/// Clock and shift: Z|k⟩ = q^k|k⟩, X|k⟩ = |k+1⟩.
pub fn clock_shift(d: u32) -> (CMat, CMat) {
    let n = d as usize;
    let z = CMat::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / d as f64)
        } else {
            c(0.0, 0.0)
        }
    });
    let x = CMat::from_fn(n, n, |i, j| if i == (j + 1) % n { c(1.0, 0.0) } else { c(0.0, 0.0) });
    (z, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff};
    use crate::scalar::make_ring;

    #[test]
    fn kets_are_orthonormal() {
        for d in 2..=6 {
            let r = make_ring(d).unwrap();
            for j in 0..d as i64 {
                for k in 0..d as i64 {
                    let want = if j == k { ExactScalar::one(&r) } else { ExactScalar::zero(&r) };
                    assert_eq!(inner_product(&r, j, k), want);
                }
            }
        }
    }

    #[test]
    fn projections() {
        for d in 2..=6 {
            let r = make_ring(d).unwrap();
            let mut total = DiagramSum::zero(&r, 2, 2);
            for k in 0..d as i64 {
                let p = projection_diagram(&r, k);
                assert!(p.compose_vertical(&p).unwrap().equivalent(&p));
                let m = diagram_to_matrix(&p).unwrap().m;
                assert!(max_abs_diff(&m, &TwoBox::unit(d, k as usize, k as usize).m) < 1e-14);
                total = total.add(&p).unwrap();
            }
            // the resolution of identity holds in every closed context, checked exactly
            let e = diagram_to_entries(&total).unwrap();
            for (j, row) in e.iter().enumerate() {
                for (k, x) in row.iter().enumerate() {
                    let want = if j == k { ExactScalar::one(&r) } else { ExactScalar::zero(&r) };
                    assert_eq!(*x, want);
                }
            }
        }
    }

    #[test]
    fn paulis_are_clock_and_shift() {
        for d in 2..=9 {
            let r = make_ring(d).unwrap();
            let p = pauli_pictures(&r);
            let (zc, xs) = clock_shift(d);
            let z = diagram_to_matrix(&p.z).unwrap().m;
            let x = diagram_to_matrix(&p.x).unwrap().m;
            assert!(max_abs_diff(&z, &zc) < 1e-12, "d={d}");
            assert!(max_abs_diff(&x, &xs) < 1e-12, "d={d}");
            assert!(max_abs_diff(&(&z * &x), &(&x * &z * r.q())) < 1e-12);
            let y = diagram_to_matrix(&p.y).unwrap().m;
            // charge 1 on the left string is ζ·X·Z, so Y is its inverse
            let left1 = &x * &z * r.zeta();
            assert!(max_abs_diff(&(&y * &left1), &identity(d as usize)) < 1e-12);
            let i = diagram_to_matrix(&p.i).unwrap().m;
            assert!(max_abs_diff(&i, &identity(d as usize)) < 1e-14);
        }
    }

    #[test]
    fn dft_identities() {
        let f = [c(1.0, 0.0), c(2.0, 0.5), c(-1.0, 0.0), c(0.0, 3.0), c(0.5, 0.5)];
        let ff = dft_apply(&dft_apply(&f));
        for k in 0..5 {
            assert!((ff[k] - f[(5 - k) % 5]).norm() < 1e-12);
        }
        let f2 = dft_matrix(2).m;
        let s = 1.0 / 2f64.sqrt();
        assert!((f2[(1, 1)] - c(-s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for d in 2..=6 {
            let r = make_ring(d).unwrap();
            for _ in 0..10 {
                let a = TwoBox::new(d, crate::linalg::random_matrix(&mut rng, d as usize)).unwrap();
                let back = diagram_to_matrix(&matrix_to_diagram(&r, &a).unwrap()).unwrap();
                assert!(max_abs_diff(&a.m, &back.m) < 1e-12);
            }
        }
    }

    #[test]
    fn wrong_arity() {
        let r = make_ring(3).unwrap();
        assert!(matches!(diagram_to_matrix(&DiagramSum::<ExactScalar>::cap(&r, 1)), Err(Error::Arity(_))));
    }
}
