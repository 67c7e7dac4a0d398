//! Exact arithmetic in the phase ring generated by ζ and δ = √d.
//!
//! An [`ExactScalar`] is `a(ζ) + δ·b(ζ)` with `a`, `b` rational polynomials in ζ
//! reduced modulo the cyclotomic polynomial of ord(ζ), so equal values have equal
//! representations. When √d already lies in Q(ζ) the δ part is folded into `a`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Fixed data for one qudit order `d`.
#[derive(Debug)]
pub struct RingParams {
    d: u32,
    /// ord(ζ): d for odd d, 2d for even d.
    order: u32,
    /// ζ = exp(2πi·unit/order).
    unit: u32,
    /// Cyclotomic polynomial of `order`, low degree first, monic.
    phi: Vec<BigInt>,
    /// √d written in the ζ-basis, when it lies in Q(ζ).
    delta_in_field: Option<Vec<BigRational>>,
}

pub type Ring = Arc<RingParams>;

fn ring_cache() -> &'static Mutex<HashMap<u32, Ring>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Ring>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Ring data for `d`. ζ = q^((d+1)/2) for odd d, ζ = exp(πi/d) for even d.
pub fn make_ring(d: u32) -> Result<Ring> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d must be >= 2, got {d}")));
    }
    let mut cache = ring_cache().lock().unwrap();
    if let Some(r) = cache.get(&d) {
        return Ok(r.clone());
    }
    let (order, unit) = if d % 2 == 1 { (d, d.div_ceil(2)) } else { (2 * d, 1) };
    let phi = cyclotomic(order as usize);
    let mut params = RingParams { d, order, unit, phi, delta_in_field: None };
    params.delta_in_field = sqrt_d_in_field(&params);
    let ring = Arc::new(params);
    cache.insert(d, ring.clone());
    Ok(ring)
}

impl RingParams {
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Multiplicative order of ζ.
    pub fn zeta_order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn q(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.d as f64)
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta_pow_c(1)
    }

    pub fn delta(&self) -> f64 {
        (self.d as f64).sqrt()
    }

    /// ζ^e as a float.
    pub fn zeta_pow_c(&self, e: i64) -> Complex64 {
        let n = self.order as i64;
        let k = (e.rem_euclid(n) * self.unit as i64).rem_euclid(n);
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
    }

    /// Exponent of ζ giving q^e.
    pub fn q_exp(&self, e: i64) -> i64 {
        (2 * e).rem_euclid(self.order as i64)
    }

    /// Whether δ is folded into the ζ-polynomial part.
    pub fn delta_folded(&self) -> bool {
        self.delta_in_field.is_some()
    }

    fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        let deg = self.degree();
        if v.len() > deg {
            for i in (deg..v.len()).rev() {
                if v[i].is_zero() {
                    continue;
                }
                let c = v[i].clone();
                for j in 0..deg {
                    if !self.phi[j].is_zero() {
                        v[i - deg + j] -= &c * BigRational::from_integer(self.phi[j].clone());
                    }
                }
                v[i] = BigRational::zero();
            }
        }
        v.resize(deg, BigRational::zero());
        v
    }

    fn poly_mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.iter().all(Zero::is_zero) || b.iter().all(Zero::is_zero) {
            return vec![BigRational::zero(); self.degree()];
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.reduce(out)
    }

    fn monomial_poly(&self, e: i64) -> Vec<BigRational> {
        let n = self.order as i64;
        let e = e.rem_euclid(n) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        self.reduce(v)
    }
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn].clone();
    let mut q = vec![BigInt::zero(); r.len() - dn];
    for i in (0..q.len()).rev() {
        let c = &r[i + dn] / &lead;
        for j in 0..=dn {
            r[i + j] -= &c * &den[j];
        }
        q[i] = c;
    }
    q
}

/// Φ_n with integer coefficients, low degree first.
pub fn cyclotomic(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::from(-1);
    p[n] = BigInt::one();
    for m in 1..n {
        if n.is_multiple_of(m) {
            p = poly_div_exact(&p, &cyclotomic(m));
        }
    }
    p
}

fn squarefree_split(d: u32) -> (u32, u32) {
    // d = s² · m with m squarefree
    let mut m = 1u32;
    let mut s = 1u32;
    let mut x = d;
    let mut p = 2u32;
    while p * p <= x {
        let mut e = 0;
        while x.is_multiple_of(p) {
            x /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
        p += 1;
    }
    m *= x;
    (s, m)
}

fn prime_factors(mut m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn eval_poly(r: &RingParams, v: &[BigRational]) -> Complex64 {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| r.zeta_pow_c(i as i64) * c.to_f64().unwrap_or(f64::NAN))
        .sum()
}

/// √d as a ζ-polynomial, built from Gauss sums and checked exactly.
fn sqrt_d_in_field(r: &RingParams) -> Option<Vec<BigRational>> {
    let (s, m) = squarefree_split(r.d);
    let int = |x: u32| BigRational::from_integer(BigInt::from(x));
    if m == 1 {
        return Some(r.reduce(vec![int(s)]));
    }
    let conductor = if m % 4 == 1 { m } else { 4 * m };
    if !r.order.is_multiple_of(conductor) {
        return None;
    }
    let n = r.order as i64;
    let mut acc = r.reduce(vec![int(s)]);
    for p in prime_factors(m) {
        let mut g = vec![BigRational::zero(); r.degree()];
        if p == 2 {
            // ζ_8 + ζ_8⁻¹ up to the sign fixed below
            let e = n / 8;
            g = add_vec(&r.monomial_poly(e), &r.monomial_poly(-e));
        } else {
            let step = n / p as i64;
            for k in 0..p as i64 {
                g = add_vec(&g, &r.monomial_poly(step * k * k));
            }
        }
        acc = r.poly_mul(&acc, &g);
    }
    // fix the unit (±1, ±i) so the value is +√d
    let target = (r.d as f64).sqrt();
    let mut units = vec![r.monomial_poly(0), neg_vec(&r.monomial_poly(0))];
    if n % 4 == 0 {
        // even d: ζ = exp(2πi/n), so ζ^(n/4) = i
        units.push(r.monomial_poly(n / 4));
        units.push(neg_vec(&r.monomial_poly(n / 4)));
    }
    for u in units {
        let cand = r.poly_mul(&acc, &u);
        let val = eval_poly(r, &cand);
        if (val.re - target).abs() < 1e-9 && val.im.abs() < 1e-9 {
            let sq = r.poly_mul(&cand, &cand);
            if sq == r.reduce(vec![int(r.d)]) {
                return Some(cand);
            }
        }
    }
    None
}

fn add_vec(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x + y
        })
        .collect()
}

fn neg_vec(a: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|x| -x.clone()).collect()
}

/// `ζ^zeta · δ^delta`, the only factors produced by local rewrite rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub zeta: i64,
    pub delta: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { zeta: 0, delta: 0 };

    pub fn times(self, o: Monomial) -> Monomial {
        Monomial { zeta: self.zeta + o.zeta, delta: self.delta + o.delta }
    }

    pub fn reduced(self, ring: &RingParams) -> Monomial {
        Monomial { zeta: self.zeta.rem_euclid(ring.order as i64), delta: self.delta }
    }

    pub fn to_complex(self, ring: &RingParams) -> Complex64 {
        ring.zeta_pow_c(self.zeta) * ring.delta().powi(self.delta as i32)
    }
}

/// Exact element `a(ζ) + δ·b(ζ)`.
#[derive(Clone)]
pub struct ExactScalar {
    ring: Ring,
    a: Vec<BigRational>,
    b: Vec<BigRational>,
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ring.d == other.ring.d && self.a == other.a && self.b == other.b
    }
}
impl Eq for ExactScalar {}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (dp, terms) in self.terms() {
            for (e, c) in terms {
                let z = if e == 0 { String::new() } else { format!("ζ^{e}") };
                let dl = if dp == 0 { "" } else { "δ" };
                let sep = if z.is_empty() && dl.is_empty() { "" } else { "·" };
                let c = if c.is_one() && !(z.is_empty() && dl.is_empty()) {
                    String::new()
                } else {
                    format!("{c}{sep}")
                };
                parts.push(format!("{c}{z}{dl}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl ExactScalar {
    pub fn zero(ring: &Ring) -> Self {
        let z = vec![BigRational::zero(); ring.degree()];
        ExactScalar { ring: ring.clone(), a: z.clone(), b: z }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::rational(ring, BigRational::one())
    }

    pub fn rational(ring: &Ring, c: BigRational) -> Self {
        let mut s = Self::zero(ring);
        s.a = ring.reduce(vec![c]);
        s
    }

    pub fn integer(ring: &Ring, c: i64) -> Self {
        Self::rational(ring, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn zeta_pow(ring: &Ring, e: i64) -> Self {
        Self::monomial(ring, Monomial { zeta: e, delta: 0 })
    }

    pub fn q_pow(ring: &Ring, e: i64) -> Self {
        Self::zeta_pow(ring, ring.q_exp(e))
    }

    pub fn delta_pow(ring: &Ring, p: i64) -> Self {
        Self::monomial(ring, Monomial { zeta: 0, delta: p })
    }

    pub fn monomial(ring: &Ring, m: Monomial) -> Self {
        let d = BigRational::from_integer(BigInt::from(ring.d));
        let half = m.delta.div_euclid(2);
        let odd = m.delta.rem_euclid(2) == 1;
        let c = if half >= 0 {
            num_traits::pow(d, half as usize)
        } else {
            num_traits::pow(d, (-half) as usize).recip()
        };
        let poly: Vec<BigRational> = ring.monomial_poly(m.zeta).into_iter().map(|x| x * &c).collect();
        let mut s = Self::zero(ring);
        if odd {
            s.b = poly;
        } else {
            s.a = poly;
        }
        s.fold();
        s
    }

    fn fold(&mut self) {
        if let Some(delta) = &self.ring.delta_in_field {
            if self.b.iter().any(|x| !x.is_zero()) {
                let extra = self.ring.poly_mul(&self.b, delta);
                self.a = add_vec(&self.a, &extra);
                self.b = vec![BigRational::zero(); self.ring.degree()];
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn d(&self) -> u32 {
        self.ring.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero) && self.b.iter().all(Zero::is_zero)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.ring.d != o.ring.d {
            return Err(Error::InvalidParameter(format!(
                "scalars over different rings (d={} vs d={})",
                self.ring.d, o.ring.d
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(ExactScalar { ring: self.ring.clone(), a: add_vec(&self.a, &o.a), b: add_vec(&self.b, &o.b) })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let r = &self.ring;
        let d = BigRational::from_integer(BigInt::from(r.d));
        let aa = r.poly_mul(&self.a, &o.a);
        let bb: Vec<BigRational> = r.poly_mul(&self.b, &o.b).into_iter().map(|x| x * &d).collect();
        let ab = r.poly_mul(&self.a, &o.b);
        let ba = r.poly_mul(&self.b, &o.a);
        let mut s = ExactScalar { ring: r.clone(), a: add_vec(&aa, &bb), b: add_vec(&ab, &ba) };
        s.fold();
        Ok(s)
    }

    pub fn neg(&self) -> Self {
        ExactScalar { ring: self.ring.clone(), a: neg_vec(&self.a), b: neg_vec(&self.b) }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ExactScalar {
            ring: self.ring.clone(),
            a: self.a.iter().map(|x| x * c).collect(),
            b: self.b.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        self.try_mul(&Self::monomial(&self.ring, m)).expect("same ring")
    }

    /// Complex conjugate: ζ^e ↦ ζ^(−e), δ fixed.
    pub fn conj(&self) -> Self {
        let r = &self.ring;
        let flip = |v: &[BigRational]| {
            let mut out = vec![BigRational::zero(); r.order as usize];
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    let j = (r.order as usize - i) % r.order as usize;
                    out[j] += c;
                }
            }
            r.reduce(out)
        };
        ExactScalar { ring: r.clone(), a: flip(&self.a), b: flip(&self.b) }
    }

    pub fn to_complex(&self) -> Complex64 {
        eval_poly(&self.ring, &self.a) + eval_poly(&self.ring, &self.b) * self.ring.delta()
    }

    /// `(delta power, [(ζ exponent, coefficient)])` groups with nonzero coefficients.
    pub fn terms(&self) -> Vec<(i64, Vec<(i64, BigRational)>)> {
        let mut out = Vec::new();
        for (dp, v) in [(0i64, &self.a), (1, &self.b)] {
            let t: Vec<(i64, BigRational)> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64, c.clone()))
                .collect();
            if !t.is_empty() {
                out.push((dp, t));
            }
        }
        out
    }

    /// Inverse of [`terms`](Self::terms); accepts any exponents and delta powers.
    pub fn from_terms(ring: &Ring, groups: &[(i64, Vec<(i64, BigRational)>)]) -> Self {
        let mut s = Self::zero(ring);
        for (dp, terms) in groups {
            for (e, c) in terms {
                let m = Self::monomial(ring, Monomial { zeta: *e, delta: *dp }).scale(c);
                s = s.try_add(&m).expect("same ring");
            }
        }
        s
    }

    /// Exact real non-negativity is not decidable cheaply in this basis;
    /// this returns the float verdict with a tolerance.
    pub fn is_nonneg_real(&self, tol: f64) -> bool {
        let z = self.to_complex();
        z.im.abs() <= tol && z.re >= -tol
    }

    pub fn abs_max_coeff(&self) -> f64 {
        self.a.iter().chain(self.b.iter()).map(|c| c.abs().to_f64().unwrap_or(0.0)).fold(0.0, f64::max)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            /// Panics when the operands live over different rings; use the `try_` form to handle that.
            fn $f(self, o: &ExactScalar) -> ExactScalar {
                self.$m(o).expect("scalar ring mismatch")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_branches() {
        let r2 = make_ring(2).unwrap();
        assert!((r2.zeta() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let r3 = make_ring(3).unwrap();
        let q = r3.q();
        assert!((r3.zeta() - q * q).norm() < 1e-14);
        for d in 2..=12 {
            let r = make_ring(d).unwrap();
            assert!((r.zeta() * r.zeta() - r.q()).norm() < 1e-13);
            assert_eq!(ExactScalar::zeta_pow(&r, (d * d) as i64), ExactScalar::one(&r));
            assert_eq!(ExactScalar::delta_pow(&r, 2), ExactScalar::integer(&r, d as i64));
        }
        assert!(make_ring(1).is_err());
    }

    #[test]
    fn exponent_reduction() {
        let r = make_ring(5).unwrap();
        let a = ExactScalar::zeta_pow(&r, 1);
        let b = ExactScalar::zeta_pow(&r, 11);
        assert_eq!(&a + &b, a.scale(&BigRational::from_integer(2.into())));
        // 1 + ζ + ... + ζ^(N-1) = 0
        let mut s = ExactScalar::zero(&r);
        for e in 0..5 {
            s = &s + &ExactScalar::zeta_pow(&r, e);
        }
        assert!(s.is_zero());
    }

    #[test]
    fn conj_and_delta() {
        for d in 2..=9u32 {
            let r = make_ring(d).unwrap();
            for k in 0..d as i64 {
                let x = ExactScalar::monomial(&r, Monomial { zeta: k * k, delta: 1 });
                let y = ExactScalar::monomial(&r, Monomial { zeta: -k * k, delta: 1 });
                assert_eq!(x.conj(), y);
            }
            let di = ExactScalar::delta_pow(&r, -1);
            assert_eq!(&di * &ExactScalar::delta_pow(&r, 1), ExactScalar::one(&r));
        }
    }

    #[test]
    fn folded_delta_is_sqrt_d() {
        for d in [4u32, 5, 8, 9, 12, 13] {
            let r = make_ring(d).unwrap();
            assert!(r.delta_folded(), "d={d}");
            let v = ExactScalar::delta_pow(&r, 1).to_complex();
            assert!((v.re - (d as f64).sqrt()).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
        for d in [2u32, 3, 6, 7] {
            assert!(!make_ring(d).unwrap().delta_folded());
        }
    }

    #[test]
    fn mismatched_rings() {
        let a = ExactScalar::one(&make_ring(2).unwrap());
        let b = ExactScalar::one(&make_ring(3).unwrap());
        assert!(matches!(a.try_add(&b), Err(Error::InvalidParameter(_))));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn zeta_k_squared_is_d_periodic() {
        for d in 2..=12u32 {
            let r = make_ring(d).unwrap();
            for k in -15i64..15 {
                let kk = k + d as i64;
                assert_eq!(ExactScalar::zeta_pow(&r, k * k), ExactScalar::zeta_pow(&r, kk * kk));
            }
        }
    }
}
