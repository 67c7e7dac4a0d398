//! Parafermion algebras, double braids between adjacent pairs, and
//! braid invariance of product states.
//!
//! Elements of PF_2n are kept as sums over ordered monomials
//! c^α = c_0^α_0 ⋯ c_{2n−1}^α_{2n−1}; the matrix representation is only
//! used to validate the relations the exponent arithmetic relies on.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, CMat};
use crate::scalar::{make_ring, Ring};

/// Exact monomial matrix: column j maps to ζ^phase[j]·e_perm[j].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoMat {
    pub perm: Vec<usize>,
    pub phase: Vec<i64>,
    order: i64,
}

impl MonoMat {
    pub fn identity(dim: usize, order: i64) -> Self {
        MonoMat { perm: (0..dim).collect(), phase: vec![0; dim], order }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// self·other
    pub fn mul(&self, other: &MonoMat) -> MonoMat {
        let perm = other.perm.iter().map(|&p| self.perm[p]).collect();
        let phase = other
            .perm
            .iter()
            .zip(&other.phase)
            .map(|(&p, &e)| (e + self.phase[p]).rem_euclid(self.order))
            .collect();
        MonoMat { perm, phase, order: self.order }
    }

    pub fn pow(&self, k: u32) -> MonoMat {
        (0..k).fold(MonoMat::identity(self.dim(), self.order), |acc, _| acc.mul(self))
    }

    pub fn inverse(&self) -> MonoMat {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut phase = vec![0; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            phase[self.perm[j]] = (-self.phase[j]).rem_euclid(self.order);
        }
        MonoMat { perm, phase, order: self.order }
    }

    pub fn scaled(&self, e: i64) -> MonoMat {
        MonoMat { perm: self.perm.clone(), phase: self.phase.iter().map(|&p| (p + e).rem_euclid(self.order)).collect(), order: self.order }
    }

    pub fn kron(&self, other: &MonoMat) -> MonoMat {
        let m = other.dim();
        let mut perm = Vec::with_capacity(self.dim() * m);
        let mut phase = Vec::with_capacity(self.dim() * m);
        for a in 0..self.dim() {
            for b in 0..m {
                perm.push(self.perm[a] * m + other.perm[b]);
                phase.push((self.phase[a] + other.phase[b]).rem_euclid(self.order));
            }
        }
        MonoMat { perm, phase, order: self.order }
    }

    pub fn to_dense(&self, ring: &Ring) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            m[(self.perm[j], j)] = ring.zeta_pow_c(self.phase[j]);
        }
        m
    }

    /// Tr(R·M) in O(dim).
    pub fn trace_against(&self, r: &CMat, ring: &Ring) -> Complex64 {
        (0..self.dim()).map(|j| r[(j, self.perm[j])] * ring.zeta_pow_c(self.phase[j])).sum()
    }
}

/// Clock/shift ladder on (C^d)^⊗n with exact generators.
#[derive(Debug, Clone)]
pub struct ParafermionRep {
    pub d: u32,
    pub n: usize,
    pub ring: Ring,
    pub generators: Vec<MonoMat>,
}

fn shift(d: usize, order: i64) -> MonoMat {
    MonoMat { perm: (0..d).map(|j| (j + 1) % d).collect(), phase: vec![0; d], order }
}

fn clock_inv(d: usize, ring: &Ring) -> MonoMat {
    MonoMat { perm: (0..d).collect(), phase: (0..d as i64).map(|j| ring.q_exp(-j)).collect(), order: ring.zeta_order() as i64 }
}

impl ParafermionRep {
    pub fn new(d: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("need at least one pair".into()));
        }
        let ring = make_ring(d)?;
        let order = ring.zeta_order() as i64;
        let du = d as usize;
        let x = shift(du, order);
        let zi = clock_inv(du, &ring);
        let b0 = x.mul(&zi);
        // the unique ζ^e with (ζ^e·XZ^(−1))^d = 1
        let e = (0..order)
            .find(|&e| b0.scaled(e).pow(d) == MonoMat::identity(du, order))
            .ok_or_else(|| Error::Construction("no phase makes XZ^(-1) of order d".into()))?;
        let b = b0.scaled(e);
        let id = MonoMat::identity(du, order);
        let mut generators = Vec::with_capacity(2 * n);
        for i in 0..n {
            for local in [&x, &b] {
                let mut m = MonoMat::identity(1, order);
                for slot in 0..n {
                    let f = if slot < i { &zi } else if slot == i { local } else { &id };
                    m = m.kron(f);
                }
                generators.push(m);
            }
        }
        let rep = ParafermionRep { d, n, ring, generators };
        rep.validate()?;
        Ok(rep)
    }

    /// c_j^d = 1 and c_j c_k = q·c_k c_j for j < k, exactly.
    pub fn validate(&self) -> Result<()> {
        let dim = self.generators[0].dim();
        let order = self.ring.zeta_order() as i64;
        let q = self.ring.q_exp(1);
        for (j, cj) in self.generators.iter().enumerate() {
            if cj.pow(self.d) != MonoMat::identity(dim, order) {
                return Err(Error::Representation(format!("c_{j}^d ≠ 1")));
            }
            for (k, ck) in self.generators.iter().enumerate().skip(j + 1) {
                if cj.mul(ck) != ck.mul(cj).scaled(q) {
                    return Err(Error::Representation(format!("c_{j} c_{k} ≠ q c_{k} c_{j}")));
                }
            }
        }
        Ok(())
    }

    pub fn monomial(&self, alpha: &[u8]) -> MonoMat {
        let dim = self.generators[0].dim();
        let mut m = MonoMat::identity(dim, self.ring.zeta_order() as i64);
        for (g, &a) in self.generators.iter().zip(alpha) {
            m = m.mul(&g.pow(a as u32));
        }
        m
    }

    pub fn to_dense(&self, x: &PfElement) -> CMat {
        let dim = self.generators[0].dim();
        let mut out = CMat::zeros(dim, dim);
        for (&key, &coef) in &x.terms {
            let m = self.monomial(&unpack(key, 2 * self.n));
            for j in 0..dim {
                out[(m.perm[j], j)] += coef * self.ring.zeta_pow_c(m.phase[j]);
            }
        }
        out
    }

    /// Dimension of the span of c_0^a c_1^b (should be d²).
    pub fn pair_span_dimension(&self) -> usize {
        let d = self.d as usize;
        let dim = self.generators[0].dim();
        let mut rows = CMat::zeros(d * d, dim * dim);
        for a in 0..d {
            for b in 0..d {
                let mut alpha = vec![0u8; 2 * self.n];
                alpha[0] = a as u8;
                alpha[1] = b as u8;
                let m = self.monomial(&alpha).to_dense(&self.ring);
                for (i, z) in m.iter().enumerate() {
                    rows[(a * d + b, i)] = *z;
                }
            }
        }
        rows.svd(false, false).singular_values.iter().filter(|&&s| s > 1e-9).count()
    }
}

/// Z_d grade of an exponent vector.
pub fn grading(alpha: &[u8], d: u32) -> u32 {
    alpha.iter().map(|&a| a as u32).sum::<u32>() % d
}

/// Exponent vector packed four bits per generator (d ≤ 16, at most 8 pairs).
pub type Key = u64;

pub fn pack(alpha: &[u8]) -> Key {
    assert!(alpha.len() <= 16, "at most 8 pairs");
    alpha.iter().enumerate().fold(0, |k, (j, &a)| k | (a as u64) << (4 * j))
}

pub fn unpack(key: Key, len: usize) -> Vec<u8> {
    (0..len).map(|j| ((key >> (4 * j)) & 0xf) as u8).collect()
}

fn exponent(key: Key, j: usize) -> i64 {
    ((key >> (4 * j)) & 0xf) as i64
}

/// Element of PF_2n as coefficients on ordered monomials.
#[derive(Debug, Clone)]
pub struct PfElement {
    pub d: u32,
    pub n: usize,
    pub terms: BTreeMap<Key, Complex64>,
}

impl PfElement {
    pub fn zero(d: u32, n: usize) -> Self {
        assert!(d <= 16 && n <= 8, "exponent packing supports d ≤ 16 and 8 pairs");
        PfElement { d, n, terms: BTreeMap::new() }
    }

    pub fn monomial(d: u32, alpha: &[u8], coef: Complex64) -> Self {
        let mut e = PfElement::zero(d, alpha.len() / 2);
        e.terms.insert(pack(alpha), coef);
        e
    }

    pub fn one(d: u32, n: usize) -> Self {
        PfElement::monomial(d, &vec![0; 2 * n], c(1.0, 0.0))
    }

    pub fn generator(d: u32, n: usize, j: usize, power: i64) -> Self {
        let mut alpha = vec![0u8; 2 * n];
        alpha[j] = power.rem_euclid(d as i64) as u8;
        PfElement::monomial(d, &alpha, c(1.0, 0.0))
    }

    pub fn add_term(&mut self, alpha: &[u8], coef: Complex64) {
        *self.terms.entry(pack(alpha)).or_insert(c(0.0, 0.0)) += coef;
    }

    pub fn add(&self, o: &PfElement) -> PfElement {
        let mut out = self.clone();
        for (&a, &z) in &o.terms {
            *out.terms.entry(a).or_insert(c(0.0, 0.0)) += z;
        }
        out
    }

    pub fn scale(&self, z: Complex64) -> PfElement {
        PfElement { d: self.d, n: self.n, terms: self.terms.iter().map(|(&a, &w)| (a, w * z)).collect() }
    }

    fn q_table(&self, ring: &Ring) -> Vec<Complex64> {
        (0..self.d as i64).map(|e| ring.zeta_pow_c(ring.q_exp(e))).collect()
    }

    pub fn mul(&self, o: &PfElement, ring: &Ring) -> PfElement {
        let d = self.d as i64;
        let len = 2 * self.n;
        let qs = self.q_table(ring);
        let mut acc: std::collections::HashMap<Key, Complex64> = std::collections::HashMap::new();
        for (&a, &x) in &self.terms {
            for (&b, &y) in &o.terms {
                // c^a c^b = q^(−Σ_{j>k} a_j b_k) c^(a+b)
                let mut e = 0i64;
                let mut below = 0i64;
                let mut sum: Key = 0;
                for j in 0..len {
                    let (aj, bj) = (exponent(a, j), exponent(b, j));
                    e -= aj * below;
                    below += bj;
                    sum |= (((aj + bj) % d) as u64) << (4 * j);
                }
                *acc.entry(sum).or_insert(c(0.0, 0.0)) += x * y * qs[e.rem_euclid(d) as usize];
            }
        }
        let terms = acc.into_iter().filter(|(_, z)| z.norm() > 1e-14).collect();
        PfElement { d: self.d, n: self.n, terms }
    }

    /// Adjoint: (λ c^α)* = conj(λ)·q^(−Σ_{j>k} α_j α_k)·c^(−α).
    pub fn adjoint(&self, ring: &Ring) -> PfElement {
        let d = self.d as i64;
        let qs = self.q_table(ring);
        let mut out = PfElement::zero(self.d, self.n);
        for (&a, &x) in &self.terms {
            let mut e = 0i64;
            let mut below = 0i64;
            let mut neg: Key = 0;
            for j in 0..2 * self.n {
                let aj = exponent(a, j);
                e -= aj * below;
                below += aj;
                neg |= (((d - aj) % d) as u64) << (4 * j);
            }
            *out.terms.entry(neg).or_insert(c(0.0, 0.0)) += x.conj() * qs[e.rem_euclid(d) as usize];
        }
        out
    }

    pub fn prune(mut self, tol: f64) -> PfElement {
        self.terms.retain(|_, z| z.norm() > tol);
        self
    }

    pub fn max_diff(&self, o: &PfElement) -> f64 {
        let mut m = 0.0f64;
        for (a, &z) in &self.terms {
            m = m.max((z - o.terms.get(a).copied().unwrap_or_default()).norm());
        }
        for (a, &z) in &o.terms {
            if !self.terms.contains_key(a) {
                m = m.max(z.norm());
            }
        }
        m
    }

    pub fn pow(&self, k: u32, ring: &Ring) -> PfElement {
        (0..k).fold(PfElement::one(self.d, self.n), |acc, _| acc.mul(self, ring))
    }
}

/// Which side the inverse sits on in the adjoint action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AdConvention {
    /// Ad(b)(x) = b⁻¹·x·b
    InverseLeft,
    /// Ad(b)(x) = b·x·b⁻¹
    InverseRight,
}

/// The Gaussian σ_i = d^(−1/2)·Σ_k ζ^(s·k²)·(ζ^e·c_i^(−1)c_(i+1))^k.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BraidAnsatz {
    pub sign: i64,
    pub zeta_exp: i64,
    pub convention: AdConvention,
}

fn pair_monomial(d: u32, n: usize, pair: usize, m: i64, k: i64) -> PfElement {
    let mut alpha = vec![0u8; 2 * n];
    alpha[2 * pair] = m.rem_euclid(d as i64) as u8;
    alpha[2 * pair + 1] = k.rem_euclid(d as i64) as u8;
    PfElement::monomial(d, &alpha, c(1.0, 0.0))
}

pub fn single_braid(ring: &Ring, n: usize, i: usize, a: &BraidAnsatz) -> PfElement {
    let d = ring.d();
    let u = PfElement::generator(d, n, i, -1)
        .mul(&PfElement::generator(d, n, i + 1, 1), ring)
        .scale(ring.zeta_pow_c(a.zeta_exp));
    let mut s = PfElement::zero(d, n);
    let mut uk = PfElement::one(d, n);
    for k in 0..d as i64 {
        s = s.add(&uk.scale(ring.zeta_pow_c(a.sign * k * k)));
        uk = uk.mul(&u, ring);
    }
    s.scale(c(1.0 / (d as f64).sqrt(), 0.0)).prune(1e-14)
}

/// σ_{2j+1}·σ_{2j}·σ_{2j+2}·σ_{2j+1} (generators indexed from 0).
fn raw_double_braid(ring: &Ring, n: usize, j: usize, a: &BraidAnsatz) -> PfElement {
    let s = |i| single_braid(ring, n, i, a);
    s(2 * j + 1).mul(&s(2 * j), ring).mul(&s(2 * j + 2), ring).mul(&s(2 * j + 1), ring)
}

fn is_unitary(x: &PfElement, ring: &Ring, tol: f64) -> bool {
    x.adjoint(ring).mul(x, ring).max_diff(&PfElement::one(x.d, x.n)) <= tol
}

/// ‖x·b − b·y‖ (or the mirrored form), which vanishes iff Ad(b)(x) = y.
fn intertwining_error(ring: &Ring, b: &PfElement, x: &PfElement, y: &PfElement, conv: AdConvention) -> f64 {
    match conv {
        AdConvention::InverseLeft => x.mul(b, ring).max_diff(&b.mul(y, ring)),
        AdConvention::InverseRight => b.mul(x, ring).max_diff(&y.mul(b, ring)),
    }
}

/// Max error of Ad(b_j)(c_2j^m c_2j+1^k) = c_2j+2^m c_2j+3^k over all (m, k).
fn transport_one(ring: &Ring, n: usize, j: usize, b: &PfElement, conv: AdConvention) -> f64 {
    let d = ring.d() as i64;
    let mut worst = 0.0f64;
    for m in 0..d {
        for k in 0..d {
            let x = pair_monomial(ring.d(), n, j, m, k);
            let y = pair_monomial(ring.d(), n, j + 1, m, k);
            worst = worst.max(intertwining_error(ring, b, &x, &y, conv));
        }
    }
    worst
}

/// Max error of Ad(b_j b_(j−1)) moving charges (k,l,m,n) on pairs j−1, j one
/// pair to the right.
fn transport_two(ring: &Ring, n: usize, j: usize, bj: &PfElement, bjm: &PfElement, conv: AdConvention) -> f64 {
    let d = ring.d() as i64;
    let prod = bj.mul(bjm, ring);
    let mut worst = 0.0f64;
    for k in 0..d {
        for l in 0..d {
            for m in 0..d {
                for r in 0..d {
                    let x = pair_monomial(ring.d(), n, j - 1, k, l).mul(&pair_monomial(ring.d(), n, j, m, r), ring);
                    let y = pair_monomial(ring.d(), n, j, k, l).mul(&pair_monomial(ring.d(), n, j + 1, m, r), ring);
                    worst = worst.max(intertwining_error(ring, &prod, &x, &y, conv));
                }
            }
        }
    }
    worst
}

/// Scan the Gaussian family for an ansatz passing both transport identities
/// on three pairs.
pub fn find_ansatz(ring: &Ring) -> Result<BraidAnsatz> {
    static CACHE: OnceLock<Mutex<HashMap<u32, BraidAnsatz>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(a) = cache.lock().unwrap().get(&ring.d()) {
        return Ok(*a);
    }
    let a = scan_ansatz(ring)?;
    cache.lock().unwrap().insert(ring.d(), a);
    Ok(a)
}

fn scan_ansatz(ring: &Ring) -> Result<BraidAnsatz> {
    let order = ring.zeta_order() as i64;
    for sign in [-1, 1] {
        for zeta_exp in 0..order {
            for convention in [AdConvention::InverseLeft, AdConvention::InverseRight] {
                let a = BraidAnsatz { sign, zeta_exp, convention };
                if !is_unitary(&single_braid(ring, 3, 0, &a), ring, 1e-10) {
                    continue;
                }
                let b0 = raw_double_braid(ring, 3, 0, &a);
                if transport_one(ring, 3, 0, &b0, convention) > 1e-10 {
                    continue;
                }
                let b1 = raw_double_braid(ring, 3, 1, &a);
                if transport_two(ring, 3, 1, &b1, &b0, convention) <= 1e-10 {
                    return Ok(a);
                }
            }
        }
    }
    Err(Error::Construction(format!("no Gaussian ansatz transports charges for d={}", ring.d())))
}

#[derive(Debug, Clone)]
pub struct DoubleBraid {
    pub j: usize,
    pub element: PfElement,
    /// Angle removed so the local 2-pair determinant is 1.
    pub phase: f64,
    pub ansatz: BraidAnsatz,
}

impl DoubleBraid {
    pub fn adjoint_action(&self, x: &PfElement, ring: &Ring) -> PfElement {
        let b = &self.element;
        let bi = b.adjoint(ring);
        match self.ansatz.convention {
            AdConvention::InverseLeft => bi.mul(x, ring).mul(b, ring),
            AdConvention::InverseRight => b.mul(x, ring).mul(&bi, ring),
        }
    }
}

/// Double braid exchanging pairs j and j+1 (0-based), validated against
/// the charge-transport identity.
pub fn double_braid(rep: &ParafermionRep, j: usize) -> Result<DoubleBraid> {
    if j + 1 >= rep.n {
        return Err(Error::InvalidParameter(format!("pair {j} has no right neighbour among {} pairs", rep.n)));
    }
    let ring = &rep.ring;
    let ansatz = find_ansatz(ring)?;
    // determinant of the braid on two pairs alone fixes the phase
    let local = raw_double_braid(ring, 2, 0, &ansatz);
    let two = ParafermionRep::new(rep.d, 2)?;
    let det = two.to_dense(&local).determinant();
    let phase = det.arg() / (rep.d * rep.d) as f64;
    let element = raw_double_braid(ring, rep.n, j, &ansatz).scale(Complex64::from_polar(1.0, -phase));
    if !is_unitary(&element, ring, 1e-10) || transport_one(ring, rep.n, j, &element, ansatz.convention) > 1e-10 {
        return Err(Error::Construction(format!("double braid {j} failed validation")));
    }
    Ok(DoubleBraid { j, element, phase, ansatz })
}

#[derive(Debug, Clone, Serialize)]
pub struct BraidReport {
    pub d: u32,
    pub pairs: usize,
    pub ansatz: BraidAnsatz,
    pub determinant_phase: f64,
    pub transport_one: f64,
    pub transport_two: f64,
    pub yang_baxter: f64,
    /// b_j b_j+1 b_j = e^(iθ)·b_j+1 b_j b_j+1; θ in units of π.
    pub yang_baxter_phase: f64,
    pub far_commutation: f64,
    pub reidemeister_two: f64,
}

fn proportional(a: &PfElement, b: &PfElement) -> (Complex64, f64) {
    let (key, &bz) = b.terms.iter().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())).expect("nonzero");
    let lambda = a.terms.get(key).copied().unwrap_or_default() / bz;
    (lambda, a.max_diff(&b.scale(lambda)))
}

pub fn braid_relation_check(rep: &ParafermionRep) -> Result<BraidReport> {
    if rep.n < 3 {
        return Err(Error::InvalidParameter("braid relations need at least three pairs".into()));
    }
    let ring = &rep.ring;
    let bs: Vec<DoubleBraid> = (0..rep.n - 1).map(|j| double_braid(rep, j)).collect::<Result<_>>()?;
    let conv = bs[0].ansatz.convention;
    let mut t1 = 0.0f64;
    let mut t2 = 0.0f64;
    let mut yb = 0.0f64;
    let mut yb_phase = 0.0f64;
    let mut r2 = 0.0f64;
    for j in 0..rep.n - 1 {
        t1 = t1.max(transport_one(ring, rep.n, j, &bs[j].element, conv));
        let inv = bs[j].element.adjoint(ring);
        r2 = r2.max(bs[j].element.mul(&inv, ring).max_diff(&PfElement::one(rep.d, rep.n)));
        if j >= 1 {
            t2 = t2.max(transport_two(ring, rep.n, j, &bs[j].element, &bs[j - 1].element, conv));
        }
        if j + 2 < rep.n {
            let (a, b) = (&bs[j].element, &bs[j + 1].element);
            let lhs = a.mul(b, ring).mul(a, ring);
            let rhs = b.mul(a, ring).mul(b, ring);
            let (lambda, err) = proportional(&lhs, &rhs);
            yb = yb.max(err.max((lambda.norm() - 1.0).abs()));
            yb_phase = lambda.arg() / std::f64::consts::PI;
        }
    }
    let mut far = 0.0f64;
    for j in 0..rep.n - 1 {
        for k in j + 2..rep.n - 1 {
            let (a, b) = (&bs[j].element, &bs[k].element);
            far = far.max(a.mul(b, ring).max_diff(&b.mul(a, ring)));
        }
    }
    Ok(BraidReport {
        d: rep.d,
        pairs: rep.n,
        ansatz: bs[0].ansatz,
        determinant_phase: bs[0].phase,
        transport_one: t1,
        transport_two: t2,
        yang_baxter: yb,
        yang_baxter_phase: yb_phase,
        far_commutation: far,
        reidemeister_two: r2,
    })
}

/// A functional on PF_2n, evaluated on ordered monomials.
#[derive(Debug, Clone)]
pub enum AlgebraState {
    /// ρ on PF_2 = M_d, repeated on every pair.
    Product { rho: CMat, n: usize },
    /// Tr(R·x) for a density matrix R on (C^d)^⊗n.
    Density(CMat),
}

/// Single-pair density ρ repeated on n pairs.
/// Random diagonal density matrix; diagonal ρ is exactly the grade-0 sector.
pub fn random_neutral_density<R: rand::Rng>(rng: &mut R, d: u32) -> CMat {
    let w: Vec<f64> = (0..d).map(|_| crate::linalg::gaussian(rng).norm_sqr()).collect();
    let t: f64 = w.iter().sum();
    CMat::from_fn(d as usize, d as usize, |i, j| if i == j { c(w[i] / t, 0.0) } else { c(0.0, 0.0) })
}

/// Keeps only the entries ρ_ij with i − j in the subgroup generated by `step`.
pub fn restrict_grades(rho: &CMat, step: usize) -> CMat {
    let d = rho.nrows();
    CMat::from_fn(d, d, |i, j| if ((i + d - j) % d).is_multiple_of(step) { rho[(i, j)] } else { c(0.0, 0.0) })
}

pub fn product_state(rho: &CMat, n: usize) -> Result<AlgebraState> {
    let tr = crate::linalg::trace(rho);
    if (tr - c(1.0, 0.0)).norm() > 1e-10 || !crate::linalg::is_hermitian(rho, 1e-10) || crate::linalg::min_eigenvalue(rho) < -1e-10 {
        return Err(Error::Precondition("ρ must be a density matrix".into()));
    }
    Ok(AlgebraState::Product { rho: rho.clone(), n })
}

impl AlgebraState {
    pub fn eval(&self, rep: &ParafermionRep, x: &PfElement) -> Complex64 {
        match self {
            AlgebraState::Product { rho, .. } => {
                let pair = ParafermionRep::new(rep.d, 1).expect("valid d");
                x.terms
                    .iter()
                    .map(|(&key, &z)| {
                        let mut v = z;
                        for p in unpack(key, 2 * x.n).chunks(2) {
                            if p[0] != 0 || p[1] != 0 {
                                v *= pair.monomial(p).trace_against(rho, &rep.ring);
                            }
                        }
                        v
                    })
                    .sum()
            }
            AlgebraState::Density(r) => {
                x.terms.iter().map(|(&key, &z)| z * rep.monomial(&unpack(key, 2 * x.n)).trace_against(r, &rep.ring)).sum()
            }
        }
    }
}

/// All ordered monomials of total degree ≤ `cap` in 2n generators.
pub fn monomials_up_to(d: u32, n: usize, cap: usize) -> Vec<Vec<u8>> {
    fn rec(d: u32, pos: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left.min(d as usize - 1) {
            cur[pos] = e as u8;
            rec(d, pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    rec(d, 0, cap, &mut vec![0u8; 2 * n], &mut out);
    out
}

/// Precomputed Ad(b_j)(x) for every low-degree monomial x and every j.
#[derive(Debug, Clone)]
pub struct BraidImages {
    pub monomials: Vec<Vec<u8>>,
    pub images: Vec<Vec<PfElement>>,
}

pub fn braid_images(rep: &ParafermionRep, degree_cap: usize) -> Result<BraidImages> {
    let monomials = monomials_up_to(rep.d, rep.n, degree_cap);
    let mut images = Vec::new();
    for j in 0..rep.n.saturating_sub(1) {
        let b = double_braid(rep, j)?;
        images.push(
            monomials
                .iter()
                .map(|a| b.adjoint_action(&PfElement::monomial(rep.d, a, c(1.0, 0.0)), &rep.ring))
                .collect(),
        );
    }
    Ok(BraidImages { monomials, images })
}

/// max |φ(Ad(b_j)(x)) − φ(x)| over the precomputed images.
pub fn braid_invariance_check(state: &AlgebraState, rep: &ParafermionRep, images: &BraidImages) -> f64 {
    let mut worst = 0.0f64;
    for per_j in &images.images {
        for (alpha, img) in images.monomials.iter().zip(per_j) {
            let x = PfElement::monomial(rep.d, alpha, c(1.0, 0.0));
            worst = worst.max((state.eval(rep, img) - state.eval(rep, &x)).norm());
        }
    }
    worst
}

/// ρ(c_0^a c_1^b) = 0 whenever a + b ≢ 0 (mod d); returns the largest such value.
pub fn neutrality_violation(rho: &CMat, d: u32) -> Result<f64> {
    let pair = ParafermionRep::new(d, 1)?;
    let mut worst = 0.0f64;
    for a in 0..d as u8 {
        for b in 0..d as u8 {
            if !(a as u32 + b as u32).is_multiple_of(d) {
                worst = worst.max(pair.monomial(&[a, b]).trace_against(rho, &pair.ring).norm());
            }
        }
    }
    Ok(worst)
}

pub fn neutrality_check(rho: &CMat, d: u32, tol: f64) -> Result<bool> {
    Ok(neutrality_violation(rho, d)? <= tol)
}

/// d = p₁p₂⋯ with distinct primes.
pub fn is_square_free(d: u32) -> bool {
    (2..=d).take_while(|p| p * p <= d).all(|p| !d.is_multiple_of(p * p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, random_psd};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_density<R: rand::Rng>(rng: &mut R, d: usize) -> CMat {
        let p = random_psd(rng, d);
        let t = crate::linalg::trace(&p);
        p.unscale(t.re)
    }

    #[test]
    fn generators_exact() {
        for d in 2..=6 {
            for n in 1..=3 {
                let rep = ParafermionRep::new(d, n).unwrap();
                assert_eq!(rep.pair_span_dimension(), (d * d) as usize);
            }
        }
        let rep = ParafermionRep::new(2, 2).unwrap();
        for g in &rep.generators {
            assert_eq!(g.mul(g), MonoMat::identity(4, 4));
        }
    }

    #[test]
    fn exponent_arithmetic_matches_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 2..=4 {
            let rep = ParafermionRep::new(d, 2).unwrap();
            for _ in 0..10 {
                let mut x = PfElement::zero(d, 2);
                let mut y = PfElement::zero(d, 2);
                for _ in 0..3 {
                    let a: Vec<u8> = (0..4).map(|_| rng.random_range(0..d) as u8).collect();
                    let b: Vec<u8> = (0..4).map(|_| rng.random_range(0..d) as u8).collect();
                    x.add_term(&a, crate::linalg::gaussian(&mut rng));
                    y.add_term(&b, crate::linalg::gaussian(&mut rng));
                }
                let xy = rep.to_dense(&x.mul(&y, &rep.ring));
                assert!(max_abs_diff(&xy, &(rep.to_dense(&x) * rep.to_dense(&y))) < 1e-10);
                assert!(max_abs_diff(&rep.to_dense(&x.adjoint(&rep.ring)), &rep.to_dense(&x).adjoint()) < 1e-10);
            }
        }
    }

    #[test]
    fn grading_rules() {
        assert_eq!(grading(&[1, 2], 3), 0);
        assert_eq!(grading(&[1, 0], 3), 1);
        assert_eq!(grading(&[2, 2, 1, 0], 4), 1);
    }

    #[test]
    fn braids_transport_and_satisfy_relations() {
        for d in 2..=4 {
            let rep = ParafermionRep::new(d, 4).unwrap();
            let r = braid_relation_check(&rep).unwrap();
            assert!(r.transport_one <= 1e-10 && r.transport_two <= 1e-10, "{r:?}");
            assert!(r.yang_baxter <= 1e-10 && r.far_commutation <= 1e-10, "{r:?}");
            assert!(r.reidemeister_two <= 1e-10, "{r:?}");
        }
    }

    #[test]
    fn product_states_are_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=3 {
            let rep = ParafermionRep::new(d, 4).unwrap();
            let images = braid_images(&rep, 2).unwrap();
            let mixed = product_state(&CMat::identity(d as usize, d as usize).unscale(d as f64), 4).unwrap();
            assert!(braid_invariance_check(&mixed, &rep, &images) < 1e-12);
            for _ in 0..5 {
                let s = product_state(&random_neutral_density(&mut rng, d), 4).unwrap();
                assert!(braid_invariance_check(&s, &rep, &images) <= 1e-10);
            }
        }
        // d = 4: grades {0, 2} form an isotropic subgroup
        let rep = ParafermionRep::new(4, 4).unwrap();
        let images = braid_images(&rep, 2).unwrap();
        let rho = restrict_grades(&random_density(&mut rng, 4), 2);
        let s = product_state(&rho, 4).unwrap();
        assert!(braid_invariance_check(&s, &rep, &images) <= 1e-10);
    }

    #[test]
    fn charged_product_states_break_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rep = ParafermionRep::new(3, 4).unwrap();
        let images = braid_images(&rep, 2).unwrap();
        let s = product_state(&random_density(&mut rng, 3), 4).unwrap();
        assert!(braid_invariance_check(&s, &rep, &images) > 1e-4);
    }

    #[test]
    fn correlated_state_is_not_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rep = ParafermionRep::new(2, 4).unwrap();
        let images = braid_images(&rep, 2).unwrap();
        let psi = crate::linalg::random_unit_vector(&mut rng, 16);
        let r = (&psi * psi.adjoint()).scale(0.3) + CMat::identity(16, 16).scale(0.7 / 16.0);
        assert!(braid_invariance_check(&AlgebraState::Density(r), &rep, &images) > 1e-4);
    }

    #[test]
    fn neutrality() {
        let d = 3;
        let mixed = CMat::identity(3, 3).unscale(3.0);
        assert!(neutrality_check(&mixed, d, 1e-12).unwrap());
        let mut coh = mixed.clone();
        coh[(1, 0)] = c(0.2, 0.0);
        coh[(0, 1)] = c(0.2, 0.0);
        assert!(!neutrality_check(&coh, d, 1e-6).unwrap());
        let diag = CMat::from_diagonal(&crate::linalg::CVec::from_vec(vec![c(0.7, 0.0), c(0.3, 0.0)]));
        assert!(neutrality_check(&diag, 2, 1e-12).unwrap());
        assert!(is_square_free(6) && !is_square_free(4) && !is_square_free(9));
    }
}
