//! Four-string qudits, the neutral subspace, and the GHZ/Max pair.

use num_complex::Complex64;
use serde::Serialize;

use crate::diagram::{canonical_word, ChargedDiagram, DiagramSum};
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, entropy, identity, kron, max_abs_diff, phase_distance, CMat, CVec};
use crate::matrix::{diagram_to_operator, pair_ket_word, TwoBox};
use crate::qfa::entropic_up_check;
use crate::scalar::{make_ring, ExactScalar, Ring};
use crate::sft::{rotate, sft_2box};

/// Operators on the doubled space of one quon (two string pairs).
#[derive(Debug, Clone)]
pub struct QuonPauli {
    pub d: u32,
    pub x: CMat,
    pub y: CMat,
    pub z: CMat,
    pub gamma: CMat,
}

fn four_box(ring: &Ring, charges: &[(usize, i64)]) -> Result<CMat> {
    diagram_to_operator(&DiagramSum::<ExactScalar>::same_level(ring, 4, charges)?)
}

/// X, Y, Z drawn as opposite charge pairs on strings (1,4), (1,3), (1,2);
/// γ = ζ^(−1)·XYZ.
pub fn quon_paulis(d: u32) -> Result<QuonPauli> {
    let ring = make_ring(d)?;
    let x = four_box(&ring, &[(0, 1), (3, -1)])?;
    let y = four_box(&ring, &[(0, -1), (2, 1)])?;
    let z = four_box(&ring, &[(0, 1), (1, -1)])?;
    let gamma = (&x * &y * &z) * ring.zeta_pow_c(-1);
    Ok(QuonPauli { d, x, y, z, gamma })
}

/// γ written directly as one picture with alternating charges on all four strings.
pub fn grading_picture(d: u32) -> Result<CMat> {
    let ring = make_ring(d)?;
    four_box(&ring, &[(0, 1), (1, -1), (2, 1), (3, -1)])
}

/// Projector onto the γ = 1 eigenspace.
pub fn neutral_projector(d: u32) -> Result<CMat> {
    let p = quon_paulis(d)?;
    // γ is unitary with eigenvalues q^j; (γ + γ*)/2 has eigenvalue 1 only at j = 0
    let h = (&p.gamma + p.gamma.adjoint()).scale(0.5);
    let (vals, vecs) = eigh(&h);
    let cols: Vec<usize> = (0..vals.len()).filter(|&i| (vals[i] - 1.0).abs() < 1e-9).collect();
    if cols.len() != d as usize {
        return Err(Error::Representation(format!("neutral subspace has rank {}, expected {d}", cols.len())));
    }
    let v = CMat::from_fn(vecs.nrows(), cols.len(), |r, k| vecs[(r, cols[k])]);
    Ok(&v * v.adjoint())
}

/// Logical basis vectors |k, −k⟩ in the pair basis; they span the neutral subspace.
pub fn logical_basis(d: u32) -> CMat {
    let n = d as usize;
    CMat::from_fn(n * n, n, |r, k| if r == k * n + (n - k) % n { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

#[derive(Debug, Clone, Serialize)]
pub struct QuonReport {
    pub d: u32,
    pub unitarity: f64,
    pub order_d: f64,
    pub gamma_commutators: f64,
    pub gamma_picture: f64,
    pub neutral_rank: usize,
    pub xyz_on_neutral: f64,
    pub zx_relation_on_neutral: f64,
}

pub fn quon_relations(d: u32) -> Result<QuonReport> {
    let ring = make_ring(d)?;
    let p = quon_paulis(d)?;
    let n = (d * d) as usize;
    let id = identity(n);
    let pow = |m: &CMat| (0..d).fold(id.clone(), |acc, _| acc * m);
    let mut unitarity = 0.0f64;
    let mut order = 0.0f64;
    let mut comm = 0.0f64;
    for m in [&p.x, &p.y, &p.z] {
        unitarity = unitarity.max(max_abs_diff(&(m.adjoint() * m), &id));
        order = order.max(max_abs_diff(&pow(m), &id));
        comm = comm.max(max_abs_diff(&(&p.gamma * m), &(m * &p.gamma)));
    }
    let gamma_picture = max_abs_diff(&p.gamma, &grading_picture(d)?);
    let proj = neutral_projector(d)?;
    let rank = crate::linalg::trace(&proj).re.round() as usize;
    let l = logical_basis(d);
    let restrict = |m: &CMat| l.adjoint() * m * &l;
    let xyz = restrict(&(&p.x * &p.y * &p.z));
    let small = identity(d as usize);
    let xyz_err = max_abs_diff(&xyz, &(&small * ring.zeta()));
    let (xl, zl) = (restrict(&p.x), restrict(&p.z));
    let zx = max_abs_diff(&(&zl * &xl), &((&xl * &zl) * ring.zeta_pow_c(ring.q_exp(1))));
    // the logical vectors must lie in the projector's range
    let leak = max_abs_diff(&(&proj * &l), &l);
    Ok(QuonReport {
        d,
        unitarity,
        order_d: order,
        gamma_commutators: comm,
        gamma_picture,
        neutral_rank: rank,
        xyz_on_neutral: xyz_err.max(leak),
        zx_relation_on_neutral: zx,
    })
}

/// Amplitudes of n qudits, index a_1·d^(n−1) + … + a_n.
#[derive(Debug, Clone, Serialize)]
pub struct MultiQuditState {
    pub n: usize,
    pub d: u32,
    #[serde(serialize_with = "ser_amplitudes")]
    pub amplitudes: CVec,
}

fn ser_amplitudes<S: serde::Serializer>(v: &CVec, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v.iter() {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl MultiQuditState {
    pub fn new(n: usize, d: u32, amplitudes: CVec) -> Result<Self> {
        if amplitudes.len() != (d as usize).pow(n as u32) {
            return Err(Error::Dimension(format!("{} amplitudes for {n} qudits of dimension {d}", amplitudes.len())));
        }
        Ok(MultiQuditState { n, d, amplitudes })
    }

    pub fn normalized(&self) -> Self {
        let nrm = self.amplitudes.norm();
        MultiQuditState { n: self.n, d: self.d, amplitudes: self.amplitudes.unscale(nrm) }
    }
}

/// Internal pairing of the three-quon GHZ picture on 12 boundary points.
pub const GHZ_PAIRING: [(usize, usize); 6] = [(0, 11), (1, 10), (2, 5), (3, 4), (6, 9), (7, 8)];

fn ghz_picture(ring: &Ring) -> DiagramSum {
    let w = ChargedDiagram::new(0, canonical_word(0, 12, &GHZ_PAIRING).expect("planar pairing")).unwrap();
    DiagramSum::single(ring, w)
}

fn logical_ket(ring: &Ring, k: u32) -> DiagramSum {
    let d = ring.d();
    DiagramSum::single(ring, pair_ket_word(d, &[k % d, (d - k % d) % d]))
}

/// Contract the picture `g` against three 4-point effects built from `effect`.
fn contract(ring: &Ring, g: &DiagramSum, effect: impl Fn(u32) -> Result<DiagramSum>) -> Result<CVec> {
    let d = ring.d();
    let n = (d as usize).pow(3);
    let effects: Vec<DiagramSum> = (0..d).map(&effect).collect::<Result<_>>()?;
    let mut out = CVec::zeros(n);
    for idx in 0..n {
        let a = [idx / (d * d) as usize, (idx / d as usize) % d as usize, idx % d as usize];
        let bra = effects[a[0]]
            .compose_horizontal(&effects[a[1]])?
            .compose_horizontal(&effects[a[2]])?
            .adjoint();
        out[idx] = bra.compose_vertical(g)?.eval_closed()?.to_complex();
    }
    Ok(out)
}

/// GHZ amplitudes from the pictured pairing against logical kets.
pub fn ghz_state(d: u32) -> Result<MultiQuditState> {
    let ring = make_ring(d)?;
    let amps = contract(&ring, &ghz_picture(&ring), |k| Ok(logical_ket(&ring, k)))?;
    Ok(MultiQuditState::new(3, d, amps)?.normalized())
}

/// The same pairing read against the one-click rotated logical kets.
pub fn max_state(d: u32) -> Result<MultiQuditState> {
    let ring = make_ring(d)?;
    let amps = contract(&ring, &ghz_picture(&ring), |k| rotate(&logical_ket(&ring, k)))?;
    Ok(MultiQuditState::new(3, d, amps)?.normalized())
}

pub fn ghz_closed_form(d: u32) -> MultiQuditState {
    let n = d as usize;
    let s = 1.0 / (d as f64).sqrt();
    let amps = CVec::from_fn(n * n * n, |i, _| if i % (n * n + n + 1) == 0 { c(s, 0.0) } else { c(0.0, 0.0) });
    MultiQuditState { n: 3, d, amplitudes: amps }
}

/// d^(−1)·Σ_{a₁+a₂+a₃ ≡ 0}|a⟩.
pub fn max_closed_form(d: u32) -> MultiQuditState {
    let n = d as usize;
    let amps = CVec::from_fn(n * n * n, |i, _| {
        if (i / (n * n) + (i / n) % n + i % n).is_multiple_of(n) {
            c(1.0 / d as f64, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    MultiQuditState { n: 3, d, amplitudes: amps }
}

/// (F⊗…⊗F)·ψ with F_{ℓk} = q^(kℓ)/√d.
pub fn fourier_each(state: &MultiQuditState) -> MultiQuditState {
    let f = crate::matrix::dft_matrix(state.d).m;
    let mut big = CMat::identity(1, 1);
    for _ in 0..state.n {
        big = kron(&big, &f);
    }
    MultiQuditState { n: state.n, d: state.d, amplitudes: big * &state.amplitudes }
}

pub fn reduced_density(state: &MultiQuditState, keep: &[usize]) -> Result<CMat> {
    if keep.iter().any(|&i| i >= state.n) {
        return Err(Error::Index(format!("subsystem out of range for {} qudits", state.n)));
    }
    let mut k = keep.to_vec();
    k.sort_unstable();
    k.dedup();
    if k.len() != keep.len() {
        return Err(Error::Index("repeated subsystem".into()));
    }
    let dims = vec![state.d as usize; state.n];
    Ok(crate::linalg::reduced_density(&state.amplitudes, &dims, keep))
}

/// Von Neumann entropy of the reduced state on `cut`.
pub fn entanglement_entropy(state: &MultiQuditState, cut: &[usize]) -> Result<f64> {
    let s = state.normalized();
    Ok(entropy(&reduced_density(&s, cut)?))
}

/// A 2-box read as a bipartite pure state (row index ⊗ column index).
pub fn box_as_state(a: &TwoBox) -> MultiQuditState {
    let n = a.d as usize;
    let v = CVec::from_fn(n * n, |i, _| a.m[(i / n, i % n)]);
    MultiQuditState { n: 2, d: a.d, amplitudes: v }.normalized()
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalMaximalReport {
    pub d: u32,
    pub zero_entropy: f64,
    pub bell_entropy: f64,
    pub exchange_error: f64,
    pub flat_modulus_error: f64,
    pub up_lhs: [f64; 2],
    pub up_rhs: [f64; 2],
    pub pass: bool,
}

pub fn minimal_maximal_pair_check(d: u32, tol: f64) -> Result<MinimalMaximalReport> {
    let zero = TwoBox::unit(d, 0, 0);
    let bell = TwoBox { d, m: identity(d as usize).unscale((d as f64).sqrt()) };
    let fz = sft_2box(&zero)?;
    let fb = sft_2box(&bell)?;
    let exchange = max_abs_diff(&fz.m, &bell.m).max(max_abs_diff(&fb.m, &zero.m));
    let target = 1.0 / (d as f64).sqrt();
    let flat = fz.m.diagonal().iter().map(|z| (z.norm() - target).abs()).fold(0.0, f64::max);
    let zero_entropy = entanglement_entropy(&box_as_state(&zero), &[0])?;
    let bell_entropy = entanglement_entropy(&box_as_state(&bell), &[0])?;
    let u0 = entropic_up_check(&zero, tol)?;
    let u1 = entropic_up_check(&bell, tol)?;
    let pass = exchange <= tol
        && flat <= tol
        && zero_entropy.abs() <= tol
        && (bell_entropy - (d as f64).ln()).abs() <= tol
        && u0.pass
        && u1.pass;
    Ok(MinimalMaximalReport {
        d,
        zero_entropy,
        bell_entropy,
        exchange_error: exchange,
        flat_modulus_error: flat,
        up_lhs: [u0.lhs, u1.lhs],
        up_rhs: [u0.rhs, u1.rhs],
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StatesReport {
    pub d: u32,
    pub ghz_vs_closed_form: f64,
    pub max_vs_closed_form: f64,
    pub max_vs_fourier_ghz: f64,
    pub single_qudit_reduction: f64,
}

pub fn states_check(d: u32) -> Result<StatesReport> {
    let ghz = ghz_state(d)?;
    let max = max_state(d)?;
    let mix = identity(d as usize).unscale(d as f64);
    let mut red = 0.0f64;
    for s in [&ghz, &max] {
        for q in 0..3 {
            red = red.max(max_abs_diff(&reduced_density(s, &[q])?, &mix));
        }
    }
    Ok(StatesReport {
        d,
        ghz_vs_closed_form: phase_distance(&ghz_closed_form(d).amplitudes, &ghz.amplitudes),
        max_vs_closed_form: phase_distance(&max_closed_form(d).amplitudes, &max.amplitudes),
        max_vs_fourier_ghz: phase_distance(&fourier_each(&ghz).amplitudes, &max.amplitudes),
        single_qudit_reduction: red,
    })
}

/// Product of single-qudit kets.
pub fn product_state(d: u32, kets: &[CVec]) -> MultiQuditState {
    let mut v = CVec::from_element(1, Complex64::new(1.0, 0.0));
    for k in kets {
        v = v.kronecker(k);
    }
    MultiQuditState { n: kets.len(), d, amplitudes: v }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paulis_and_grading() {
        for d in 2..=7 {
            let r = quon_relations(d).unwrap();
            assert!(r.unitarity < 1e-12 && r.order_d < 1e-12, "{r:?}");
            assert!(r.gamma_commutators < 1e-12 && r.gamma_picture < 1e-12, "{r:?}");
            assert_eq!(r.neutral_rank, d as usize);
            assert!(r.xyz_on_neutral < 1e-12 && r.zx_relation_on_neutral < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn ghz_d2() {
        let g = ghz_state(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let want = CVec::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        assert!(phase_distance(&want, &g.amplitudes) < 1e-12);
    }

    #[test]
    fn ghz_and_max() {
        for d in [2, 3, 5, 7] {
            let r = states_check(d).unwrap();
            assert!(r.ghz_vs_closed_form < 1e-10, "{r:?}");
            assert!(r.max_vs_closed_form < 1e-10, "{r:?}");
            assert!(r.max_vs_fourier_ghz < 1e-10, "{r:?}");
            assert!(r.single_qudit_reduction < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn entropies_of_cuts() {
        let e0 = CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let p = product_state(3, &[e0.clone(), e0.clone(), e0]);
        assert!(entanglement_entropy(&p, &[1]).unwrap().abs() < 1e-12);
        assert!((entanglement_entropy(&ghz_state(3).unwrap(), &[0]).unwrap() - 3f64.ln()).abs() < 1e-10);
        assert!(reduced_density(&p, &[3]).is_err());
    }

    #[test]
    fn minimal_maximal() {
        for d in 2..=6 {
            let r = minimal_maximal_pair_check(d, 1e-10).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let r = minimal_maximal_pair_check(2, 1e-10).unwrap();
        assert!(r.zero_entropy.abs() < 1e-12 && (r.bell_entropy - 2f64.ln()).abs() < 1e-12);
    }
}
