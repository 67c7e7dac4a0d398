//! Versioned JSON documents for diagram sums.
//!
//! A term lists its boundary pairs (points counterclockwise, bottom-left = 0),
//! a number of closed loops, and its charges as `[string, value]` in vertical
//! order. Strings `0..pairs.len()` are the pairs in listed order, the rest
//! are the loops. A charge sits at the leftmost top endpoint of its string
//! when it has one, otherwise at its leftmost bottom endpoint; top charges
//! come above the uncharged pairing, bottom charges below it, loops last.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::diagram::{canonical_word, ChargedDiagram, DiagramSum, Layer};
use crate::error::{Error, Result};
use crate::scalar::{make_ring, ExactScalar, Ring};

pub const DIAGRAM_FORMAT: &str = "zdpic.diagram";
pub const DIAGRAM_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ScalarGroup {
    pub delta_half_pow: i64,
    /// `[zetaExp, numerator, denominator]`, integers as decimal strings.
    pub coeffs: Vec<(i64, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TermDocument {
    pub pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub loops: usize,
    pub charges: Vec<(usize, u32)>,
    pub scalar: Vec<ScalarGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DiagramDocument {
    pub format: String,
    pub version: u32,
    pub d: u32,
    pub top_arity: usize,
    pub bottom_arity: usize,
    pub terms: Vec<TermDocument>,
}

fn scalar_to_doc(s: &ExactScalar) -> Vec<ScalarGroup> {
    s.terms()
        .into_iter()
        .map(|(dp, cs)| ScalarGroup {
            delta_half_pow: dp,
            coeffs: cs.into_iter().map(|(e, c)| (e, c.numer().to_string(), c.denom().to_string())).collect(),
        })
        .collect()
}

fn scalar_from_doc(ring: &Ring, groups: &[ScalarGroup]) -> Result<ExactScalar> {
    let int = |s: &str| s.parse::<BigInt>().map_err(|_| Error::Parse(format!("not an integer: {s:?}")));
    let mut out = Vec::new();
    for g in groups {
        let mut cs = Vec::new();
        for (e, n, den) in &g.coeffs {
            let den = int(den)?;
            if den == BigInt::from(0) {
                return Err(Error::Parse("zero denominator".into()));
            }
            cs.push((*e, BigRational::new(int(n)?, den)));
        }
        out.push((g.delta_half_pow, cs));
    }
    Ok(ExactScalar::from_terms(ring, &out))
}

struct Anchors {
    /// (is_top, position) per pair
    spots: Vec<(bool, usize)>,
}

fn anchors(top: usize, bottom: usize, pairs: &[(usize, usize)]) -> Anchors {
    let spot = |&(a, b): &(usize, usize)| {
        let hi = a.max(b);
        if hi >= bottom {
            // top points run right to left, so the largest number is leftmost
            (true, top - 1 - (hi - bottom))
        } else {
            (false, a.min(b))
        }
    };
    Anchors { spots: pairs.iter().map(spot).collect() }
}

impl TermDocument {
    fn to_word(&self, d: u32, top: usize, bottom: usize) -> Result<ChargedDiagram> {
        let middle = canonical_word(top, bottom, &self.pairs)?;
        let a = anchors(top, bottom, &self.pairs);
        let strings = self.pairs.len() + self.loops;
        let (mut head, mut tail) = (Vec::new(), Vec::new());
        let mut on_loop = vec![Vec::new(); self.loops];
        for &(s, k) in &self.charges {
            if s >= strings {
                return Err(Error::Parse(format!("charge on string {s}, only {strings} strings")));
            }
            if k >= d {
                return Err(Error::Parse(format!("charge value {k} is not below d={d}")));
            }
            let layer = |pos| Layer::Charge { pos, k };
            match a.spots.get(s) {
                Some(&(true, pos)) => head.push(layer(pos)),
                Some(&(false, pos)) => tail.push(layer(pos)),
                None => on_loop[s - self.pairs.len()].push(layer(bottom)),
            }
        }
        let mut layers = head;
        layers.extend(middle);
        layers.extend(tail);
        for charges in on_loop {
            layers.push(Layer::Cap(bottom));
            layers.extend(charges);
            layers.push(Layer::Cup(bottom));
        }
        ChargedDiagram::new(top, layers)
    }
}

fn string_of(pairs: &[(usize, usize)], point: usize) -> usize {
    pairs.iter().position(|&(a, b)| a == point || b == point).expect("pairing is perfect")
}

impl DiagramDocument {
    /// The normal form of `sum`, one document term per normal-form word.
    pub fn from_sum(sum: &DiagramSum) -> Self {
        let (top, bottom) = (sum.top(), sum.bottom());
        let n = sum.normalize();
        let terms = n
            .terms()
            .iter()
            .map(|(c, w)| {
                let layers = w.layers();
                let head = layers.iter().take_while(|l| matches!(l, Layer::Charge { .. })).count();
                let tail = if head == layers.len() {
                    0
                } else {
                    layers.iter().rev().take_while(|l| matches!(l, Layer::Charge { .. })).count()
                };
                let middle = ChargedDiagram::new(top, layers[head..layers.len() - tail].to_vec()).expect("sub-word");
                let (pairs, loops) = middle.pairing();
                let mut charges = Vec::new();
                for (i, l) in layers.iter().enumerate() {
                    if let Layer::Charge { pos, k } = *l {
                        let point = if i < head { bottom + (top - 1 - pos) } else { pos };
                        if i < head || i >= layers.len() - tail {
                            charges.push((string_of(&pairs, point), k));
                        }
                    }
                }
                TermDocument { pairs, loops, charges, scalar: scalar_to_doc(c) }
            })
            .collect();
        DiagramDocument {
            format: DIAGRAM_FORMAT.into(),
            version: DIAGRAM_VERSION,
            d: sum.d(),
            top_arity: top,
            bottom_arity: bottom,
            terms,
        }
    }

    pub fn to_sum(&self) -> Result<DiagramSum> {
        if self.format != DIAGRAM_FORMAT {
            return Err(Error::Parse(format!("unknown format {:?}", self.format)));
        }
        if self.version != DIAGRAM_VERSION {
            return Err(Error::Parse(format!("unsupported version {}", self.version)));
        }
        let ring = make_ring(self.d)?;
        if (self.top_arity + self.bottom_arity) % 2 == 1 {
            return Err(Error::Parse("odd number of boundary points".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((scalar_from_doc(&ring, &t.scalar)?, t.to_word(self.d, self.top_arity, self.bottom_arity)?)))
            .collect::<Result<Vec<_>>>()?;
        DiagramSum::from_terms(&ring, self.top_arity, self.bottom_arity, terms)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: DiagramDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.to_sum()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }

    /// The closed neutral loop.
    pub fn neutral_circle(d: u32) -> Result<Self> {
        Ok(DiagramDocument {
            format: DIAGRAM_FORMAT.into(),
            version: DIAGRAM_VERSION,
            d: make_ring(d)?.d(),
            top_arity: 0,
            bottom_arity: 0,
            terms: vec![TermDocument {
                pairs: vec![],
                loops: 1,
                charges: vec![],
                scalar: vec![ScalarGroup { delta_half_pow: 0, coeffs: vec![(0, "1".into(), "1".into())] }],
            }],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::random_word;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circle_evaluates_to_delta() {
        for d in 2..=6 {
            let doc = DiagramDocument::neutral_circle(d).unwrap();
            let ring = make_ring(d).unwrap();
            assert_eq!(doc.to_sum().unwrap().eval_closed().unwrap(), ExactScalar::delta_pow(&ring, 1));
        }
    }

    #[test]
    fn normal_forms_survive() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 2..=6u32 {
            let ring = make_ring(d).unwrap();
            for _ in 0..30 {
                let top = 2 * rng.random_range(0..3);
                let w = random_word(&mut rng, d, top, 12, 8);
                let s = DiagramSum::single(&ring, w).scaled(&ExactScalar::zeta_pow(&ring, rng.random_range(0..7)));
                let doc = DiagramDocument::from_sum(&s);
                let back = doc.to_sum().unwrap();
                assert!(back.equivalent(&s), "d={d}");
                assert_eq!(DiagramDocument::from_sum(&back), doc);
                assert_eq!(DiagramDocument::parse(&doc.to_json()).unwrap(), doc);
            }
        }
    }

    #[test]
    fn charged_loop_vanishes() {
        let mut doc = DiagramDocument::neutral_circle(3).unwrap();
        doc.terms[0].charges.push((0, 1));
        assert!(doc.to_sum().unwrap().eval_closed().unwrap().is_zero());
    }

    #[test]
    fn malformed_documents() {
        let good = DiagramDocument::neutral_circle(3).unwrap();
        let mut bad = good.clone();
        bad.version = 99;
        assert!(matches!(bad.to_sum(), Err(Error::Parse(_))));
        let mut bad = good.clone();
        bad.terms[0].charges.push((5, 1));
        assert!(bad.to_sum().is_err());
        let mut bad = good.clone();
        bad.top_arity = 4;
        bad.terms[0].pairs = vec![(0, 2), (1, 3)];
        assert!(bad.to_sum().is_err());
        assert!(DiagramDocument::parse("{\"format\": 1}").is_err());
        let extra = good.to_json().replacen("\"d\"", "\"extra\": 1, \"d\"", 1);
        assert!(DiagramDocument::parse(&extra).is_err());
    }
}
