//! Fourier analysis on 2-boxes: planar trace, p-norms, convolution and the
//! norm, positivity and entropy inequalities of the SFT.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::diagram::{ChargedDiagram, Coeff, DiagramSum, Layer};
use crate::error::{Error, Result};
use crate::linalg::{c, gaussian, min_eigenvalue, singular_values, trace, CMat};
use crate::matrix::{diagram_to_entries, matrix_to_diagram, unit_diagram, TwoBox};
use crate::scalar::{make_ring, ExactScalar, Ring};
use crate::sft::sft_2box;

/// Close input i to output i around the right side.
pub fn planar_closure<C: Coeff>(sum: &DiagramSum<C>) -> Result<DiagramSum<C>> {
    let n = sum.top();
    if n != sum.bottom() {
        return Err(Error::Arity(format!("closure needs equal arities, got ({n}, {})", sum.bottom())));
    }
    let terms = sum
        .terms()
        .iter()
        .map(|(coef, w)| {
            let mut layers: Vec<Layer> = (0..n).map(Layer::Cap).collect();
            layers.extend(w.padded_right(n).layers().iter().copied());
            layers.extend((0..n).rev().map(Layer::Cup));
            Ok((coef.clone(), ChargedDiagram::new(0, layers)?))
        })
        .collect::<Result<Vec<_>>>()?;
    DiagramSum::from_terms(sum.ring(), 0, 0, terms)
}

/// Ratio between the closed picture of e_kk and Tr(e_kk), checked to be the
/// same for every k and zero off the diagonal.
pub fn measure_trace_constant(ring: &Ring) -> Result<ExactScalar> {
    let d = ring.d() as i64;
    let mut found: Option<ExactScalar> = None;
    for j in 0..d {
        for k in 0..d {
            let v = planar_closure(&unit_diagram(ring, j, k))?.eval_closed()?;
            if j != k {
                if v != ExactScalar::zero(ring) {
                    return Err(Error::Representation(format!("closure of e_{j}{k} is {v}")));
                }
            } else if let Some(f) = &found {
                if *f != v {
                    return Err(Error::Representation(format!("closure of e_{k}{k} is {v}, expected {f}")));
                }
            } else {
                found = Some(v);
            }
        }
    }
    Ok(found.expect("d ≥ 2"))
}

/// Frozen per-d value of [`measure_trace_constant`].
pub fn trace_constant(d: u32) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<u32, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&t) = cache.lock().unwrap().get(&d) {
        return Ok(t);
    }
    let ring = make_ring(d)?;
    let t = measure_trace_constant(&ring)?.to_complex().re;
    cache.lock().unwrap().insert(d, t);
    Ok(t)
}

/// The closed picture of `a`, evaluated term by term.
pub fn planar_trace(a: &TwoBox) -> Result<Complex64> {
    let ring = make_ring(a.d)?;
    planar_closure(&matrix_to_diagram(&ring, a)?)?.eval_closed()
}

fn tr(a: &TwoBox) -> Result<Complex64> {
    Ok(trace(&a.m) * trace_constant(a.d)?)
}

/// (tr |A|^p)^(1/p); `p = f64::INFINITY` gives the largest singular value.
pub fn p_norm(a: &TwoBox, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("p-norm needs p ≥ 1, got {p}")));
    }
    let sv = singular_values(&a.m);
    if p.is_infinite() {
        return Ok(sv.into_iter().fold(0.0, f64::max));
    }
    let t = trace_constant(a.d)?;
    Ok((t * sv.iter().map(|s| s.powf(p)).sum::<f64>()).powf(1.0 / p))
}

/// Bilinear structure tensor of the horizontal product, generated from the
/// pictures of matrix-unit pairs.
#[derive(Debug)]
pub struct ConvolutionTable {
    pub d: u32,
    table: Vec<CMat>,
}

/// Put `a` left of `b`, join a's right input to b's left input and a's
/// right output to b's left output.
pub fn horizontal_product<C: Coeff>(a: &DiagramSum<C>, b: &DiagramSum<C>) -> Result<DiagramSum<C>> {
    if a.top() != 2 || a.bottom() != 2 || b.top() != 2 || b.bottom() != 2 {
        return Err(Error::Arity("convolution takes two 2-boxes".into()));
    }
    let ring = a.ring();
    let open = DiagramSum::from_diagram(ring, C::from_monomial(ring, Default::default()), ChargedDiagram::new(2, vec![Layer::Cap(1)])?);
    let close = DiagramSum::from_diagram(ring, C::from_monomial(ring, Default::default()), ChargedDiagram::new(4, vec![Layer::Cup(1)])?);
    close.compose_vertical(&a.compose_horizontal(b)?)?.compose_vertical(&open)
}

impl ConvolutionTable {
    pub fn build(ring: &Ring) -> Result<Self> {
        let d = ring.d() as usize;
        let units: Vec<DiagramSum> =
            (0..d * d).map(|i| unit_diagram(ring, (i / d) as i64, (i % d) as i64)).collect();
        let mut table = Vec::with_capacity(d.pow(4));
        for x in &units {
            for y in &units {
                let e = diagram_to_entries(&horizontal_product(x, y)?)?;
                table.push(CMat::from_fn(d, d, |r, s| e[r][s].to_complex()));
            }
        }
        Ok(ConvolutionTable { d: ring.d(), table })
    }

    pub fn get(d: u32) -> Result<Arc<ConvolutionTable>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ConvolutionTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().unwrap().get(&d) {
            return Ok(t.clone());
        }
        let t = Arc::new(ConvolutionTable::build(&make_ring(d)?)?);
        cache.lock().unwrap().insert(d, t.clone());
        Ok(t)
    }

    pub fn apply(&self, a: &CMat, b: &CMat) -> CMat {
        let d = self.d as usize;
        let n = d * d;
        let mut out = CMat::zeros(d, d);
        for x in 0..n {
            let ax = a[(x / d, x % d)];
            if ax == c(0.0, 0.0) {
                continue;
            }
            for y in 0..n {
                let by = b[(y / d, y % d)];
                if by != c(0.0, 0.0) {
                    out += &self.table[x * n + y] * (ax * by);
                }
            }
        }
        out
    }
}

pub fn convolution(a: &TwoBox, b: &TwoBox) -> Result<TwoBox> {
    if a.d != b.d {
        return Err(Error::Dimension(format!("convolution of d={} and d={}", a.d, b.d)));
    }
    let t = ConvolutionTable::get(a.d)?;
    Ok(TwoBox { d: a.d, m: t.apply(&a.m, &b.m) })
}

/// Same product computed directly through the pictures.
pub fn convolution_via_diagrams(a: &TwoBox, b: &TwoBox) -> Result<TwoBox> {
    if a.d != b.d {
        return Err(Error::Dimension(format!("convolution of d={} and d={}", a.d, b.d)));
    }
    let ring = make_ring(a.d)?;
    let h = horizontal_product(&matrix_to_diagram(&ring, a)?, &matrix_to_diagram(&ring, b)?)?;
    crate::matrix::diagram_to_matrix(&h)
}

#[derive(Debug, Clone, Serialize)]
pub struct NormReport {
    pub p: f64,
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

/// ‖F(A)‖_q ≤ δ^(1−2/p)·‖A‖_p for p in [1, 2].
pub fn hausdorff_young_check(a: &TwoBox, p: f64, tol: f64) -> Result<NormReport> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [1, 2], got {p}")));
    }
    let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
    let delta = (a.d as f64).sqrt();
    let lhs = p_norm(&sft_2box(a)?, q)?;
    let rhs = delta.powf(1.0 - 2.0 / p) * p_norm(a, p)?;
    let slack = rhs - lhs;
    Ok(NormReport { p, q, lhs, rhs, slack, pass: slack >= -tol })
}

#[derive(Debug, Clone)]
pub struct BiProjectionData {
    pub d: u32,
    pub subgroup: Vec<usize>,
    pub two_box: TwoBox,
}

fn projection_multiple(m: &CMat, tol: f64) -> bool {
    // positive multiple of a projection: hermitian, spectrum in {0, λ}
    if crate::linalg::max_abs_diff(m, &m.adjoint()) > tol {
        return false;
    }
    let (vals, _) = crate::linalg::eigh(m);
    let top = vals.iter().copied().fold(0.0, f64::max);
    top > tol && vals.iter().all(|&v| v.abs() <= tol || (v - top).abs() <= tol)
}

/// The indicator of a subgroup H of Z_d, given by its order.
pub fn biprojection(d: u32, order: u32) -> Result<BiProjectionData> {
    if order == 0 || !d.is_multiple_of(order) {
        return Err(Error::InvalidParameter(format!("no subgroup of order {order} in Z_{d}")));
    }
    let step = (d / order) as usize;
    let subgroup: Vec<usize> = (0..order as usize).map(|i| i * step).collect();
    let f: Vec<Complex64> =
        (0..d as usize).map(|k| if subgroup.contains(&k) { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect();
    let two_box = TwoBox::diag(d, &f);
    if !projection_multiple(&two_box.m, 1e-10) || !projection_multiple(&sft_2box(&two_box)?.m, 1e-10) {
        return Err(Error::Construction(format!("subgroup of order {order} failed biprojection validation")));
    }
    Ok(BiProjectionData { d, subgroup, two_box })
}

/// Translate the support by g and modulate by the character k ↦ q^(χk).
pub fn bi_shift(b: &BiProjectionData, g: usize, chi: usize) -> TwoBox {
    let d = b.d as usize;
    let f: Vec<Complex64> = (0..d)
        .map(|k| {
            if b.subgroup.contains(&((k + d - g % d) % d)) {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ((chi * k) % d) as f64 / d as f64)
            } else {
                c(0.0, 0.0)
            }
        })
        .collect();
    TwoBox::diag(b.d, &f)
}

/// Relative distance of the modulus pattern from the nearest bi-shift
/// pattern: off-diagonal mass, spread of |a_k| on the best coset and leakage
/// off it, all relative to the mean modulus on the coset.
pub fn bi_shift_distance(a: &TwoBox) -> f64 {
    let d = a.d as usize;
    let mut off = 0.0f64;
    for r in 0..d {
        for s in 0..d {
            if r != s {
                off = off.max(a.m[(r, s)].norm());
            }
        }
    }
    let mods: Vec<f64> = (0..d).map(|k| a.m[(k, k)].norm()).collect();
    let mut best = f64::INFINITY;
    for h in (1..=d).filter(|h| d.is_multiple_of(*h)) {
        let step = d / h;
        for g in 0..step {
            let on: Vec<f64> = (0..h).map(|i| mods[g + i * step]).collect();
            let mean = on.iter().sum::<f64>() / h as f64;
            if mean == 0.0 {
                continue;
            }
            let spread = on.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
            let leak = (0..d).filter(|k| k % step != g).map(|k| mods[k]).fold(0.0, f64::max);
            best = best.min(spread.max(leak).max(off) / mean);
        }
    }
    best
}

pub fn looks_like_bi_shift(a: &TwoBox, tol: f64) -> bool {
    bi_shift_distance(a) <= tol
}

/// PSD test via the hermitian part; returns (min eigenvalue, pass).
pub fn schur_positivity_check(a: &TwoBox, b: &TwoBox, tol: f64) -> Result<(f64, bool)> {
    for (name, x) in [("A", a), ("B", b)] {
        if crate::linalg::max_abs_diff(&x.m, &x.m.adjoint()) > 1e-9 || min_eigenvalue(&x.m) < -1e-9 {
            return Err(Error::Precondition(format!("{name} is not positive semidefinite")));
        }
    }
    let conv = convolution(a, b)?;
    let scale = p_norm(a, f64::INFINITY)? * p_norm(b, f64::INFINITY)?;
    let m = min_eigenvalue(&conv.m) / scale.max(1.0);
    Ok((m, m >= -tol))
}

/// h_p(A) = p/(1−p)·log‖A‖_p.
pub fn renyi_entropy(a: &TwoBox, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 || p == 1.0 {
        return Err(Error::InvalidParameter(format!("Rényi order must be positive and ≠ 1, got {p}")));
    }
    if p < 1.0 {
        let t = trace_constant(a.d)?;
        let s: f64 = singular_values(&a.m).iter().map(|x| x.powf(p)).sum();
        return Ok(p / (1.0 - p) * (t * s).ln() / p);
    }
    Ok(p / (1.0 - p) * p_norm(a, p)?.ln())
}

/// h(A) = tr(−|A| log |A|).
pub fn von_neumann_entropy(a: &TwoBox) -> Result<f64> {
    let t = trace_constant(a.d)?;
    Ok(t * singular_values(&a.m).iter().filter(|&&s| s > 1e-12).map(|&s| -s * s.ln()).sum::<f64>())
}

#[derive(Debug, Clone, Serialize)]
pub struct UncertaintyReport {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// h(|A|²) + h(|F(A)|²) ≥ 2‖A‖₂²·log δ − 2‖A‖₂²·log‖A‖₂².
pub fn entropic_up_check(a: &TwoBox, tol: f64) -> Result<UncertaintyReport> {
    let sq = |x: &TwoBox| TwoBox { d: x.d, m: x.m.adjoint() * &x.m };
    let f = sft_2box(a)?;
    let lhs = von_neumann_entropy(&sq(a))? + von_neumann_entropy(&sq(&f))?;
    let n2 = p_norm(a, 2.0)?.powi(2);
    if n2 == 0.0 {
        return Err(Error::Precondition("entropic bound needs A ≠ 0".into()));
    }
    let rhs = 2.0 * n2 * (a.d as f64).sqrt().ln() - 2.0 * n2 * n2.ln();
    Ok(UncertaintyReport { lhs, rhs, pass: lhs >= rhs - tol })
}

/// Neutral 2-box with i.i.d. complex Gaussian diagonal.
pub fn random_neutral<R: Rng>(rng: &mut R, d: u32) -> TwoBox {
    let f: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
    TwoBox::diag(d, &f)
}

/// Neutral positive 2-box A*A.
pub fn random_neutral_psd<R: Rng>(rng: &mut R, d: u32) -> TwoBox {
    let a = random_neutral(rng, d);
    TwoBox { d, m: a.m.adjoint() * &a.m }
}

/// Random element of the full d×d matrix algebra (charged sectors included).
pub fn random_charged<R: Rng>(rng: &mut R, d: u32) -> TwoBox {
    TwoBox { d, m: crate::linalg::random_matrix(rng, d as usize) }
}

/// Planar-trace consistency helper used by tests and the CLI.
pub fn trace_normalized(a: &TwoBox) -> Result<Complex64> {
    tr(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trace_constant_is_one() {
        for d in 2..=6 {
            assert_eq!(measure_trace_constant(&make_ring(d).unwrap()).unwrap(), ExactScalar::one(&make_ring(d).unwrap()));
        }
    }

    #[test]
    fn planar_trace_agrees_with_entry_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_charged(&mut rng, 3);
        assert!((planar_trace(&a).unwrap() - trace_normalized(&a).unwrap()).norm() < 1e-10);
        let pos = TwoBox { d: 3, m: a.m.adjoint() * &a.m };
        assert!(planar_trace(&pos).unwrap().re >= 0.0);
    }

    #[test]
    fn norms() {
        let z = TwoBox::diag(3, &[c(0.0, 0.0); 3]);
        assert_eq!(p_norm(&z, 1.5).unwrap(), 0.0);
        assert!(p_norm(&z, 0.5).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_charged(&mut rng, 4);
        let tr2 = trace_normalized(&TwoBox { d: 4, m: a.m.adjoint() * &a.m }).unwrap().re;
        assert!((p_norm(&a, 2.0).unwrap().powi(2) - tr2).abs() < 1e-9);
        assert!(p_norm(&a, 1.0).unwrap() >= p_norm(&a, 2.0).unwrap());
    }

    #[test]
    fn convolution_table_matches_pictures() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for d in 2..=4 {
            let a = random_charged(&mut rng, d);
            let b = random_charged(&mut rng, d);
            let x = convolution(&a, &b).unwrap();
            let y = convolution_via_diagrams(&a, &b).unwrap();
            assert!(max_abs_diff(&x.m, &y.m) < 1e-10);
        }
    }

    #[test]
    fn biprojections_validate() {
        assert!(biprojection(4, 2).is_ok());
        assert!(biprojection(6, 3).is_ok());
        assert!(biprojection(6, 4).is_err());
        let b = biprojection(4, 2).unwrap();
        assert!(max_abs_diff(&bi_shift(&b, 0, 0).m, &b.two_box.m) < 1e-15);
        let s = bi_shift(&b, 1, 1);
        assert!(looks_like_bi_shift(&s, 1e-9));
        assert!(hausdorff_young_check(&s, 1.5, 1e-8).unwrap().slack.abs() <= 1e-8);
    }

    #[test]
    fn hy_on_neutral_boxes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 2..=6 {
            for _ in 0..50 {
                let a = random_neutral(&mut rng, d);
                for p in [1.0, 1.2, 1.5, 1.8, 2.0] {
                    assert!(hausdorff_young_check(&a, p, 1e-8).unwrap().pass);
                }
                assert!(hausdorff_young_check(&a, 2.0, 0.0).unwrap().slack.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn charged_boxes_break_the_inequalities() {
        // outside the neutral sector the bounds are not theorems; keep one witness each
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (mut hy, mut up, mut schur) = (false, false, false);
        for _ in 0..200 {
            let a = random_charged(&mut rng, 2);
            hy |= !hausdorff_young_check(&a, 1.5, 1e-8).unwrap().pass;
            up |= !entropic_up_check(&a, 1e-8).unwrap().pass;
            let b = random_charged(&mut rng, 2);
            let pa = TwoBox { d: 2, m: a.m.adjoint() * &a.m };
            let pb = TwoBox { d: 2, m: b.m.adjoint() * &b.m };
            schur |= !schur_positivity_check(&pa, &pb, 1e-9).unwrap().1;
        }
        assert!(hy && up && schur);
    }

    #[test]
    fn convolution_identity_and_intertwining() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for d in 2..=5 {
            let unit = crate::sft::sft_2box_inverse(&TwoBox { d, m: crate::linalg::identity(d as usize) }).unwrap();
            let a = random_neutral(&mut rng, d);
            let b = random_neutral(&mut rng, d);
            assert!(max_abs_diff(&convolution(&unit, &a).unwrap().m, &a.m) < 1e-10);
            let lhs = sft_2box(&convolution(&a, &b).unwrap()).unwrap().m;
            let rhs = sft_2box(&a).unwrap().m * sft_2box(&b).unwrap().m;
            assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
            let x = random_neutral(&mut rng, d);
            let ab = convolution(&a, &b).unwrap();
            assert!(max_abs_diff(&ab.m, &convolution(&b, &a).unwrap().m) < 1e-10);
            let l = convolution(&ab, &x).unwrap();
            let r = convolution(&a, &convolution(&b, &x).unwrap()).unwrap();
            assert!(max_abs_diff(&l.m, &r.m) < 1e-10);
        }
    }

    #[test]
    fn non_bi_shifts_are_strict() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for d in 2..=6 {
            let mut n = 0;
            let mut worst = f64::INFINITY;
            while n < 200 {
                let a = random_neutral(&mut rng, d);
                if bi_shift_distance(&a) < 0.25 {
                    continue;
                }
                n += 1;
                worst = worst.min(hausdorff_young_check(&a, 1.5, 0.0).unwrap().slack);
            }
            assert!(worst > 1e-4, "d={d} worst {worst}");
        }
    }

    #[test]
    fn schur_on_neutral_boxes() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for d in 2..=6 {
            for _ in 0..50 {
                let a = random_neutral_psd(&mut rng, d);
                let b = random_neutral_psd(&mut rng, d);
                assert!(schur_positivity_check(&a, &b, 1e-9).unwrap().1);
            }
            let b = biprojection(d, 1).unwrap().two_box;
            assert!(schur_positivity_check(&b, &b, 1e-9).unwrap().1);
        }
        let not_psd = TwoBox::diag(2, &[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(matches!(schur_positivity_check(&not_psd, &not_psd, 1e-9), Err(Error::Precondition(_))));
    }

    #[test]
    fn bi_shifts_are_extremal() {
        for d in 2..=6u32 {
            for order in (1..=d).filter(|h| d % h == 0) {
                let b = biprojection(d, order).unwrap();
                for g in 0..d as usize {
                    for chi in 0..d as usize {
                        let s = bi_shift(&b, g, chi);
                        for p in [1.0, 1.25, 1.5, 1.75, 2.0] {
                            assert!(hausdorff_young_check(&s, p, 0.0).unwrap().slack.abs() <= 1e-8, "d={d} H={order} g={g} chi={chi} p={p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn entropies() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let flat = TwoBox::diag(4, &[c(0.25, 0.0); 4]);
        let h2 = renyi_entropy(&flat, 2.0).unwrap();
        assert!((renyi_entropy(&flat, 3.0).unwrap() - h2).abs() < 1e-12);
        assert!((von_neumann_entropy(&flat).unwrap() - h2).abs() < 1e-12);
        assert!(renyi_entropy(&flat, 1.0).is_err());
        for d in 2..=6 {
            let a = random_neutral(&mut rng, d);
            let n1 = p_norm(&a, 1.0).unwrap();
            let a = TwoBox { d, m: a.m.unscale(n1) };
            let diff = (renyi_entropy(&a, 1.0 + 1e-5).unwrap() - von_neumann_entropy(&a).unwrap()).abs();
            assert!(diff <= 1e-4);
        }
    }

    #[test]
    fn uncertainty() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for d in 2..=6 {
            for _ in 0..50 {
                let a = random_neutral(&mut rng, d);
                assert!(entropic_up_check(&a, 1e-8).unwrap().pass);
                let big = TwoBox { d, m: a.m.scale(3.7) };
                assert!(entropic_up_check(&big, 1e-8).unwrap().pass);
            }
            let zero_state = TwoBox::unit(d, 0, 0);
            let r = entropic_up_check(&zero_state, 1e-8).unwrap();
            assert!(r.pass && (r.lhs - r.rhs).abs() < 1e-10);
        }
    }
}
