//! Charged planar diagrams as layered words, and their rewrite normal form.
//!
//! A word is read top to bottom starting from `top` strands. `Cap(i)` opens a
//! new pair of strands at `i, i+1`, `Cup(i)` closes strands `i, i+1`, and
//! `Charge { pos, k }` puts charge `k` on strand `pos`. Vertical order of the
//! layers is the global order of charge placements.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Monomial, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Charge { pos: usize, k: u32 },
    Cap(usize),
    Cup(usize),
}

impl Layer {
    fn shifted(self, by: usize) -> Layer {
        match self {
            Layer::Charge { pos, k } => Layer::Charge { pos: pos + by, k },
            Layer::Cap(c) => Layer::Cap(c + by),
            Layer::Cup(c) => Layer::Cup(c + by),
        }
    }

    fn width_after(self, w: usize) -> Option<usize> {
        match self {
            Layer::Charge { pos, .. } => (pos < w).then_some(w),
            Layer::Cap(c) => (c <= w).then_some(w + 2),
            Layer::Cup(c) => (c + 1 < w).then(|| w - 2),
        }
    }
}

/// One planar diagram (no scalar). Equality is equality of words; compare
/// normal forms to compare diagrams up to the relations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChargedDiagram {
    top: usize,
    layers: Vec<Layer>,
}

impl ChargedDiagram {
    pub fn new(top: usize, layers: Vec<Layer>) -> Result<Self> {
        let mut w = top;
        for (i, l) in layers.iter().enumerate() {
            w = l
                .width_after(w)
                .ok_or_else(|| Error::Index(format!("layer {i} ({l:?}) does not fit width {w}")))?;
        }
        Ok(ChargedDiagram { top, layers })
    }

    pub fn identity(n: usize) -> Self {
        ChargedDiagram { top: n, layers: Vec::new() }
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.widths().last().copied().unwrap_or(self.top)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Width at each gap; gap `g` sits just above layer `g`.
    pub fn widths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.layers.len() + 1);
        let mut w = self.top;
        out.push(w);
        for l in &self.layers {
            w = l.width_after(w).expect("validated word");
            out.push(w);
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.top == 0 && self.bottom() == 0
    }

    pub fn charge_count(&self) -> usize {
        self.layers.iter().filter(|l| matches!(l, Layer::Charge { .. })).count()
    }

    /// `self` placed on top of `below`.
    pub fn stack(&self, below: &ChargedDiagram) -> Result<Self> {
        if self.bottom() != below.top {
            return Err(Error::Composition(format!(
                "cannot stack: {} outputs over {} inputs",
                self.bottom(),
                below.top
            )));
        }
        let mut layers = self.layers.clone();
        layers.extend_from_slice(&below.layers);
        Ok(ChargedDiagram { top: self.top, layers })
    }

    /// Side by side; all layers of `self` come first (their charges sit higher).
    pub fn beside(&self, right: &ChargedDiagram) -> Self {
        let mut layers = self.layers.clone();
        let b = self.bottom();
        layers.extend(right.layers.iter().map(|l| l.shifted(b)));
        ChargedDiagram { top: self.top + right.top, layers }
    }

    /// Vertical mirror with charges negated mod `d`.
    pub fn reflect(&self, d: u32) -> Self {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|l| match *l {
                Layer::Charge { pos, k } => Layer::Charge { pos, k: (d - k) % d },
                Layer::Cap(c) => Layer::Cup(c),
                Layer::Cup(c) => Layer::Cap(c),
            })
            .collect();
        ChargedDiagram { top: self.bottom(), layers }
    }

    /// Boundary pairing (points counterclockwise, bottom-left = 0) and the
    /// number of closed loops, ignoring charges.
    pub fn pairing(&self) -> (Vec<(usize, usize)>, usize) {
        let widths = self.widths();
        let (t, b) = (self.top, self.bottom());
        let mut pairs = Vec::new();
        for p in 0..t {
            let end = trace(&self.layers, Cursor { gap: 0, pos: p, up: false }, None).0;
            let a = point_number(t, b, End::Top(p));
            let z = point_number(t, b, end);
            if a < z {
                pairs.push((a, z));
            }
        }
        for p in 0..b {
            let end = trace(&self.layers, Cursor { gap: self.layers.len(), pos: p, up: true }, None).0;
            let a = point_number(t, b, End::Bottom(p));
            let z = point_number(t, b, end);
            if a < z {
                pairs.push((a, z));
            }
        }
        pairs.sort_unstable();
        (pairs, count_components(&self.layers, &widths) - (t + b) / 2)
    }

    /// Shift every layer right by `by` strands (identity strands on the left).
    pub fn shifted(&self, by: usize) -> Self {
        ChargedDiagram { top: self.top + by, layers: self.layers.iter().map(|l| l.shifted(by)).collect() }
    }

    /// Add `n` identity strands on the right.
    pub fn padded_right(&self, n: usize) -> Self {
        ChargedDiagram { top: self.top + n, layers: self.layers.clone() }
    }
}

impl fmt::Display for ChargedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|", self.top)?;
        for l in &self.layers {
            match l {
                Layer::Charge { pos, k } => write!(f, " c{pos}:{k}")?,
                Layer::Cap(c) => write!(f, " ∩{c}")?,
                Layer::Cup(c) => write!(f, " ∪{c}")?,
            }
        }
        write!(f, "]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Top(usize),
    Bottom(usize),
    Loop,
}

fn point_number(top: usize, bottom: usize, e: End) -> usize {
    match e {
        End::Bottom(p) => p,
        End::Top(p) => bottom + (top - 1 - p),
        End::Loop => unreachable!("boundary trace cannot close up"),
    }
}

#[derive(Clone, Copy, Debug)]
struct Cursor {
    gap: usize,
    pos: usize,
    up: bool,
}

/// Follow a strand from `c` until it reaches the boundary, or until it runs
/// back into layer `stop` (the charge it started from). Returns the end and
/// the layer indices of charges met on the way.
fn trace(layers: &[Layer], mut c: Cursor, stop: Option<(usize, usize)>) -> (End, Vec<usize>) {
    let mut met = Vec::new();
    loop {
        if c.up {
            if c.gap == 0 {
                return (End::Top(c.pos), met);
            }
            let j = c.gap - 1;
            if Some((j, c.pos)) == stop {
                return (End::Loop, met);
            }
            match layers[j] {
                Layer::Charge { pos, .. } => {
                    if pos == c.pos {
                        met.push(j);
                    }
                    c.gap = j;
                }
                Layer::Cap(a) => {
                    if c.pos == a || c.pos == a + 1 {
                        c.pos = if c.pos == a { a + 1 } else { a };
                        c.up = false;
                    } else {
                        c.pos = if c.pos < a { c.pos } else { c.pos - 2 };
                        c.gap = j;
                    }
                }
                Layer::Cup(a) => {
                    c.pos = if c.pos < a { c.pos } else { c.pos + 2 };
                    c.gap = j;
                }
            }
        } else {
            if c.gap == layers.len() {
                return (End::Bottom(c.pos), met);
            }
            let j = c.gap;
            if Some((j, c.pos)) == stop {
                return (End::Loop, met);
            }
            match layers[j] {
                Layer::Charge { pos, .. } => {
                    if pos == c.pos {
                        met.push(j);
                    }
                    c.gap = j + 1;
                }
                Layer::Cup(a) => {
                    if c.pos == a || c.pos == a + 1 {
                        c.pos = if c.pos == a { a + 1 } else { a };
                        c.up = true;
                    } else {
                        c.pos = if c.pos < a { c.pos } else { c.pos - 2 };
                        c.gap = j + 1;
                    }
                }
                Layer::Cap(a) => {
                    c.pos = if c.pos < a { c.pos } else { c.pos + 2 };
                    c.gap = j + 1;
                }
            }
        }
    }
}

fn count_components(layers: &[Layer], widths: &[usize]) -> usize {
    let mut offs = Vec::with_capacity(widths.len());
    let mut n = 0;
    for w in widths {
        offs.push(n);
        n += w;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra] = rb;
        }
    };
    for (g, l) in layers.iter().enumerate() {
        let (above, below) = (offs[g], offs[g + 1]);
        match *l {
            Layer::Charge { .. } => {
                for p in 0..widths[g] {
                    union(&mut parent, above + p, below + p);
                }
            }
            Layer::Cap(a) => {
                for p in 0..widths[g] {
                    let q = if p < a { p } else { p + 2 };
                    union(&mut parent, above + p, below + q);
                }
                union(&mut parent, below + a, below + a + 1);
            }
            Layer::Cup(a) => {
                for p in 0..widths[g + 1] {
                    let q = if p < a { p } else { p + 2 };
                    union(&mut parent, below + p, above + q);
                }
                union(&mut parent, above + a, above + a + 1);
            }
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// The uncharged word realizing a planar pairing: cups for top-top strings
/// (leftmost adjacent pair first), through strands, then caps for
/// bottom-bottom strings built in reverse.
pub fn canonical_word(top: usize, bottom: usize, pairs: &[(usize, usize)]) -> Result<Vec<Layer>> {
    let mut partner = vec![usize::MAX; top + bottom];
    for &(a, b) in pairs {
        if a >= top + bottom || b >= top + bottom || partner[a] != usize::MAX || partner[b] != usize::MAX || a == b {
            return Err(Error::Index(format!("bad pair ({a},{b})")));
        }
        partner[a] = b;
        partner[b] = a;
    }
    if partner.contains(&usize::MAX) {
        return Err(Error::Index("pairing is not perfect".into()));
    }
    let top_pt = |i: usize| bottom + (top - 1 - i);
    let mut layers = Vec::new();
    // top side: current strands as point numbers
    let mut cur: Vec<usize> = (0..top).map(top_pt).collect();
    'outer: loop {
        for i in 0..cur.len().saturating_sub(1) {
            if partner[cur[i]] == cur[i + 1] {
                layers.push(Layer::Cup(i));
                cur.drain(i..i + 2);
                continue 'outer;
            }
        }
        break;
    }
    let mut bot: Vec<usize> = (0..bottom).collect();
    let mut caps = Vec::new();
    'outer2: loop {
        for i in 0..bot.len().saturating_sub(1) {
            if partner[bot[i]] == bot[i + 1] {
                caps.push(Layer::Cap(i));
                bot.drain(i..i + 2);
                continue 'outer2;
            }
        }
        break;
    }
    if cur.len() != bot.len() || cur.iter().zip(&bot).any(|(&a, &b)| partner[a] != b) {
        return Err(Error::Index("pairing is not planar".into()));
    }
    layers.extend(caps.into_iter().rev());
    Ok(layers)
}

// ---------------------------------------------------------------------------
// Normalization

/// Choices the rewrite engine is free to make; the normal form must not
/// depend on them.
pub trait Strategy {
    /// Index into the list of pending charges.
    fn pick(&mut self, n: usize) -> usize;
    /// Direction to push a charge around a closed loop.
    fn loop_up(&mut self) -> bool;
}

pub struct Deterministic;

impl Strategy for Deterministic {
    fn pick(&mut self, _n: usize) -> usize {
        0
    }
    fn loop_up(&mut self) -> bool {
        true
    }
}

pub struct Randomized<'a, R: Rng>(pub &'a mut R);

impl<R: Rng> Strategy for Randomized<'_, R> {
    fn pick(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }
    fn loop_up(&mut self) -> bool {
        self.0.random_bool(0.5)
    }
}

#[derive(Clone, Copy, Debug)]
struct Item {
    layer: Layer,
    id: usize,
}

struct Work {
    d: i64,
    items: Vec<Item>,
    phase: Monomial,
}

enum Step {
    Moved,
    Fused,
    Annihilated,
    Boundary,
}

impl Work {
    fn layers(&self) -> Vec<Layer> {
        self.items.iter().map(|i| i.layer).collect()
    }

    fn index_of(&self, id: usize) -> usize {
        self.items.iter().position(|i| i.id == id).expect("live charge")
    }

    fn zeta(&mut self, e: i64) {
        self.phase.zeta += e;
    }

    /// Move charge at index `i` one layer up or down along its strand.
    /// Returns the outcome and the new direction.
    fn step(&mut self, i: usize, up: bool) -> (Step, bool) {
        let Layer::Charge { pos: p, k } = self.items[i].layer else { unreachable!() };
        let k = k as i64;
        if up {
            if i == 0 {
                return (Step::Boundary, up);
            }
            let j = i - 1;
            match self.items[j].layer {
                Layer::Charge { pos: p2, k: k2 } => {
                    if p2 == p {
                        return self.fuse(i, j, up);
                    }
                    let e = if p < p2 { k * k2 as i64 } else { -k * k2 as i64 };
                    self.zeta(2 * e);
                    self.items.swap(i, j);
                    (Step::Moved, up)
                }
                Layer::Cap(a) => {
                    if p == a {
                        self.zeta(k * k);
                        self.set_pos(i, a + 1);
                        (Step::Moved, false)
                    } else if p == a + 1 {
                        self.zeta(-k * k);
                        self.set_pos(i, a);
                        (Step::Moved, false)
                    } else {
                        let np = if p < a { p } else { p - 2 };
                        self.set_pos(i, np);
                        self.items.swap(i, j);
                        (Step::Moved, up)
                    }
                }
                Layer::Cup(a) => {
                    let np = if p < a { p } else { p + 2 };
                    self.set_pos(i, np);
                    self.items.swap(i, j);
                    (Step::Moved, up)
                }
            }
        } else {
            if i + 1 == self.items.len() {
                return (Step::Boundary, up);
            }
            let j = i + 1;
            match self.items[j].layer {
                Layer::Charge { pos: p2, k: k2 } => {
                    if p2 == p {
                        return self.fuse(i, j, up);
                    }
                    let e = if p < p2 { -k * k2 as i64 } else { k * k2 as i64 };
                    self.zeta(2 * e);
                    self.items.swap(i, j);
                    (Step::Moved, up)
                }
                Layer::Cup(a) => {
                    if p == a + 1 {
                        self.zeta(k * k);
                        self.set_pos(i, a);
                        (Step::Moved, true)
                    } else if p == a {
                        self.zeta(-k * k);
                        self.set_pos(i, a + 1);
                        (Step::Moved, true)
                    } else {
                        let np = if p < a { p } else { p - 2 };
                        self.set_pos(i, np);
                        self.items.swap(i, j);
                        (Step::Moved, up)
                    }
                }
                Layer::Cap(a) => {
                    let np = if p < a { p } else { p + 2 };
                    self.set_pos(i, np);
                    self.items.swap(i, j);
                    (Step::Moved, up)
                }
            }
        }
    }

    fn set_pos(&mut self, i: usize, np: usize) {
        if let Layer::Charge { k, .. } = self.items[i].layer {
            self.items[i].layer = Layer::Charge { pos: np, k };
        }
    }

    /// Merge the moving charge `i` into its neighbour `j`; the neighbour keeps its id.
    fn fuse(&mut self, i: usize, j: usize, up: bool) -> (Step, bool) {
        let (Layer::Charge { k: a, .. }, Layer::Charge { pos, k: b }) = (self.items[i].layer, self.items[j].layer) else {
            unreachable!()
        };
        let s = ((a as i64 + b as i64) % self.d) as u32;
        if s == 0 {
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            self.items.remove(hi);
            self.items.remove(lo);
            (Step::Annihilated, up)
        } else {
            self.items[j].layer = Layer::Charge { pos, k: s };
            self.items.remove(i);
            (Step::Fused, up)
        }
    }

    /// Push charge `id` along its strand (vertical direction `up`) until it
    /// reaches the boundary or fuses with another charge.
    fn push(&mut self, id: usize, mut up: bool) -> Step {
        loop {
            let i = self.index_of(id);
            let (s, nu) = self.step(i, up);
            up = nu;
            match s {
                Step::Moved => continue,
                other => return other,
            }
        }
    }
}

/// Result of normalizing one word: the phase picked up, or `None` when the
/// term vanishes (a charged closed loop).
pub struct NormalForm {
    pub phase: Monomial,
    pub diagram: ChargedDiagram,
}

/// Rewrite one word into normal form:
/// every charge moves along its string to an anchor (top endpoint for
/// through strings, left endpoint for caps and cups), loops are fused and
/// removed, the charges in each boundary collar are sorted left to right by
/// para-isotopy, and the uncharged middle is replaced by the canonical word
/// of its pairing times δ per loop.
pub fn normalize_word(ring: &Ring, w: &ChargedDiagram, strategy: &mut dyn Strategy) -> Option<NormalForm> {
    let d = ring.d() as i64;
    let mut items: Vec<Item> = Vec::with_capacity(w.layers.len());
    for (id, l) in w.layers.iter().enumerate() {
        match *l {
            Layer::Charge { k, .. } if k as i64 % d == 0 => {}
            Layer::Charge { pos, k } => items.push(Item { layer: Layer::Charge { pos, k: (k as i64 % d) as u32 }, id }),
            other => items.push(Item { layer: other, id }),
        }
    }
    let mut work = Work { d, items, phase: Monomial::ONE };
    let mut settled: Vec<usize> = Vec::new();

    loop {
        let pending: Vec<usize> = work
            .items
            .iter()
            .filter(|it| matches!(it.layer, Layer::Charge { .. }) && !settled.contains(&it.id))
            .map(|it| it.id)
            .collect();
        if pending.is_empty() {
            break;
        }
        let id = pending[strategy.pick(pending.len())];
        let i = work.index_of(id);
        let Layer::Charge { pos, k } = work.items[i].layer else { unreachable!() };
        let layers = work.layers();
        let (up_end, up_met) = trace(&layers, Cursor { gap: i, pos, up: true }, Some((i, pos)));
        let (down_end, _) = trace(&layers, Cursor { gap: i + 1, pos, up: false }, Some((i, pos)));
        let go_up = match (up_end, down_end) {
            (End::Loop, _) => {
                if up_met.is_empty() {
                    // lone charge on a loop
                    return None;
                }
                strategy.loop_up()
            }
            (End::Top(a), End::Top(b)) => a < b,
            (End::Bottom(a), End::Bottom(b)) => a < b,
            (End::Top(_), _) => true,
            (_, End::Top(_)) => false,
            _ => unreachable!("strand ends"),
        };
        let _ = k;
        match work.push(id, go_up) {
            Step::Boundary => settled.push(id),
            Step::Fused | Step::Annihilated => {}
            Step::Moved => unreachable!(),
        }
    }

    // collars
    let n = work.items.len();
    let top_len = work.items.iter().take_while(|it| matches!(it.layer, Layer::Charge { .. })).count();
    let bot_len = if top_len == n {
        0
    } else {
        work.items.iter().rev().take_while(|it| matches!(it.layer, Layer::Charge { .. })).count()
    };
    let mut top_c: Vec<Layer> = work.items[..top_len].iter().map(|i| i.layer).collect();
    let mut bot_c: Vec<Layer> = work.items[n - bot_len..].iter().map(|i| i.layer).collect();
    let middle: Vec<Layer> = work.items[top_len..n - bot_len].iter().map(|i| i.layer).collect();
    debug_assert!(middle.iter().all(|l| !matches!(l, Layer::Charge { .. })));
    let mut phase = work.phase;
    phase.zeta += sort_collar(&mut top_c);
    phase.zeta += sort_collar(&mut bot_c);

    let mid = ChargedDiagram { top: w.top, layers: middle };
    let (pairs, loops) = mid.pairing();
    phase.delta += loops as i64;
    let bottom = mid.bottom();
    let mut layers = top_c;
    layers.extend(canonical_word(w.top, bottom, &pairs).expect("pairing of a valid word"));
    layers.extend(bot_c);
    Some(NormalForm { phase: phase.reduced(ring), diagram: ChargedDiagram { top: w.top, layers } })
}

/// Value of a closed word as a monomial, or `None` when it vanishes.
pub fn eval_word(ring: &Ring, w: &ChargedDiagram) -> Result<Option<Monomial>> {
    if !w.is_closed() {
        return Err(Error::NotClosed { top: w.top(), bottom: w.bottom() });
    }
    Ok(normalize_word(ring, w, &mut Deterministic).map(|nf| nf.phase))
}

/// Bubble-sort a run of charges so positions increase downward; returns the
/// accumulated ζ exponent.
fn sort_collar(c: &mut [Layer]) -> i64 {
    let mut e = 0;
    let n = c.len();
    for pass in 0..n {
        for i in 0..n.saturating_sub(1 + pass) {
            let (Layer::Charge { pos: pa, k: ka }, Layer::Charge { pos: pc, k: kc }) = (c[i], c[i + 1]) else {
                unreachable!()
            };
            if pc < pa {
                // lower charge C moves up past A, C left of A
                e += 2 * (kc as i64) * (ka as i64);
                c.swap(i, i + 1);
            }
        }
    }
    e
}

// ---------------------------------------------------------------------------
// Coefficients and sums

/// Coefficient type of a [`DiagramSum`]: exact ring elements or floats.
pub trait Coeff: Clone + fmt::Debug {
    fn zero(ring: &Ring) -> Self;
    fn from_monomial(ring: &Ring, m: Monomial) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_complex(&self) -> Complex64;
}

impl Coeff for ExactScalar {
    fn zero(ring: &Ring) -> Self {
        ExactScalar::zero(ring)
    }
    fn from_monomial(ring: &Ring, m: Monomial) -> Self {
        ExactScalar::monomial(ring, m)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn conj(&self) -> Self {
        ExactScalar::conj(self)
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn to_complex(&self) -> Complex64 {
        ExactScalar::to_complex(self)
    }
}

impl Coeff for Complex64 {
    fn zero(_: &Ring) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_monomial(ring: &Ring, m: Monomial) -> Self {
        m.to_complex(ring)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Formal linear combination of diagrams with shared arities.
#[derive(Clone, Debug)]
pub struct DiagramSum<C: Coeff = ExactScalar> {
    ring: Ring,
    top: usize,
    bottom: usize,
    terms: Vec<(C, ChargedDiagram)>,
}

impl<C: Coeff> PartialEq for DiagramSum<C>
where
    C: PartialEq,
{
    fn eq(&self, o: &Self) -> bool {
        self.ring.d() == o.ring.d() && self.top == o.top && self.bottom == o.bottom && self.terms == o.terms
    }
}

impl<C: Coeff> DiagramSum<C> {
    pub fn zero(ring: &Ring, top: usize, bottom: usize) -> Self {
        DiagramSum { ring: ring.clone(), top, bottom, terms: Vec::new() }
    }

    pub fn from_diagram(ring: &Ring, c: C, w: ChargedDiagram) -> Self {
        DiagramSum { ring: ring.clone(), top: w.top(), bottom: w.bottom(), terms: vec![(c, w)] }
    }

    pub fn single(ring: &Ring, w: ChargedDiagram) -> Self {
        Self::from_diagram(ring, C::from_monomial(ring, Monomial::ONE), w)
    }

    pub fn from_terms(ring: &Ring, top: usize, bottom: usize, terms: Vec<(C, ChargedDiagram)>) -> Result<Self> {
        for (_, w) in &terms {
            if w.top() != top || w.bottom() != bottom {
                return Err(Error::Arity(format!(
                    "term {w} has arity ({}, {}), expected ({top}, {bottom})",
                    w.top(),
                    w.bottom()
                )));
            }
        }
        Ok(DiagramSum { ring: ring.clone(), top, bottom, terms })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn d(&self) -> u32 {
        self.ring.d()
    }
    pub fn top(&self) -> usize {
        self.top
    }
    pub fn bottom(&self) -> usize {
        self.bottom
    }
    pub fn terms(&self) -> &[(C, ChargedDiagram)] {
        &self.terms
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        Self::single(ring, ChargedDiagram::identity(n))
    }

    /// Cap (no inputs, two outputs) with charge `k` on its right leg.
    pub fn cap(ring: &Ring, k: i64) -> Self {
        let k = k.rem_euclid(ring.d() as i64) as u32;
        Self::single(ring, ChargedDiagram { top: 0, layers: vec![Layer::Cap(0), Layer::Charge { pos: 1, k }] })
    }

    /// Cup (two inputs, no outputs) with charge `k` on its right leg.
    pub fn cup(ring: &Ring, k: i64) -> Self {
        let k = k.rem_euclid(ring.d() as i64) as u32;
        Self::single(ring, ChargedDiagram { top: 2, layers: vec![Layer::Charge { pos: 1, k }, Layer::Cup(0)] })
    }

    /// Neutral closed circle.
    pub fn circle(ring: &Ring, k: i64) -> Self {
        let k = k.rem_euclid(ring.d() as i64) as u32;
        Self::single(
            ring,
            ChargedDiagram { top: 0, layers: vec![Layer::Cap(0), Layer::Charge { pos: 1, k }, Layer::Cup(0)] },
        )
    }

    /// Identity strands of width `width` carrying charges drawn at one level.
    /// The charges are emitted top to bottom in the given order with the
    /// interpolation factor ζ^(Σ_{i<j} k_i k_j) (signed representatives as given).
    pub fn same_level(ring: &Ring, width: usize, charges: &[(usize, i64)]) -> Result<Self> {
        let d = ring.d() as i64;
        let mut e = 0;
        for i in 0..charges.len() {
            for j in i + 1..charges.len() {
                e += charges[i].1 * charges[j].1;
            }
        }
        let layers = charges
            .iter()
            .map(|&(pos, k)| Layer::Charge { pos, k: k.rem_euclid(d) as u32 })
            .collect();
        let w = ChargedDiagram::new(width, layers)?;
        Ok(Self::from_diagram(ring, C::from_monomial(ring, Monomial { zeta: e, delta: 0 }), w))
    }

    pub fn scaled(&self, c: &C) -> Self {
        DiagramSum {
            ring: self.ring.clone(),
            top: self.top,
            bottom: self.bottom,
            terms: self.terms.iter().map(|(x, w)| (c.mul(x), w.clone())).collect(),
        }
    }

    pub fn scaled_monomial(&self, m: Monomial) -> Self {
        self.scaled(&C::from_monomial(&self.ring, m))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_ring(o)?;
        if self.top != o.top || self.bottom != o.bottom {
            return Err(Error::Arity("sum of diagrams with different arities".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(DiagramSum { ring: self.ring.clone(), top: self.top, bottom: self.bottom, terms })
    }

    fn check_ring(&self, o: &Self) -> Result<()> {
        if self.ring.d() != o.ring.d() {
            return Err(Error::InvalidParameter("diagrams over different d".into()));
        }
        Ok(())
    }

    /// Operator composition `self ∘ inner`: `inner` is stacked on top of `self`.
    pub fn compose_vertical(&self, inner: &Self) -> Result<Self> {
        inner.stack(self)
    }

    /// `self` stacked on top of `below` (the reading order of a picture).
    pub fn stack(&self, below: &Self) -> Result<Self> {
        self.check_ring(below)?;
        if self.bottom != below.top {
            return Err(Error::Composition(format!(
                "{} outputs cannot feed {} inputs",
                self.bottom, below.top
            )));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * below.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &below.terms {
                terms.push((a.mul(b), x.stack(y)?));
            }
        }
        Ok(DiagramSum { ring: self.ring.clone(), top: self.top, bottom: below.bottom, terms })
    }

    /// Side-by-side product; the left factor's charges come first.
    pub fn compose_horizontal(&self, right: &Self) -> Result<Self> {
        self.check_ring(right)?;
        let mut terms = Vec::with_capacity(self.terms.len() * right.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &right.terms {
                terms.push((a.mul(b), x.beside(y)));
            }
        }
        Ok(DiagramSum {
            ring: self.ring.clone(),
            top: self.top + right.top,
            bottom: self.bottom + right.bottom,
            terms,
        })
    }

    /// Vertical reflection: charges negated, coefficients conjugated.
    pub fn adjoint(&self) -> Self {
        let d = self.ring.d();
        DiagramSum {
            ring: self.ring.clone(),
            top: self.bottom,
            bottom: self.top,
            terms: self.terms.iter().map(|(c, w)| (c.conj(), w.reflect(d))).collect(),
        }
    }

    pub fn map_diagrams(&self, f: impl Fn(&ChargedDiagram) -> ChargedDiagram) -> Result<Self> {
        let terms: Vec<(C, ChargedDiagram)> = self.terms.iter().map(|(c, w)| (c.clone(), f(w))).collect();
        let (top, bottom) = terms.first().map(|(_, w)| (w.top(), w.bottom())).unwrap_or((self.top, self.bottom));
        Self::from_terms(&self.ring, top, bottom, terms)
    }

    pub fn normalize(&self) -> Self {
        self.normalize_with(&mut Deterministic)
    }

    pub fn normalize_with(&self, strategy: &mut dyn Strategy) -> Self {
        let mut acc: BTreeMap<ChargedDiagram, C> = BTreeMap::new();
        for (c, w) in &self.terms {
            if c.is_zero() {
                continue;
            }
            if let Some(nf) = normalize_word(&self.ring, w, strategy) {
                let v = c.mul(&C::from_monomial(&self.ring, nf.phase));
                match acc.get_mut(&nf.diagram) {
                    Some(x) => *x = x.add(&v),
                    None => {
                        acc.insert(nf.diagram, v);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (c, w)).collect();
        DiagramSum { ring: self.ring.clone(), top: self.top, bottom: self.bottom, terms }
    }

    /// Value of a closed diagram.
    pub fn eval_closed(&self) -> Result<C> {
        if self.top != 0 || self.bottom != 0 {
            return Err(Error::NotClosed { top: self.top, bottom: self.bottom });
        }
        let n = self.normalize();
        let mut s = C::zero(&self.ring);
        for (c, w) in n.terms {
            debug_assert!(w.layers.is_empty());
            s = s.add(&c);
        }
        Ok(s)
    }

    /// Replace the two parallel strands `pos, pos+1` at gap `gap` of every
    /// term by (1/δ)·Σ_k cap(k)∘cup(−k).
    pub fn expand_identity(&self, gap: usize, pos: usize) -> Result<Self> {
        let d = self.ring.d();
        let mut terms = Vec::new();
        for (c, w) in &self.terms {
            let widths = w.widths();
            if gap >= widths.len() || pos + 1 >= widths[gap] {
                return Err(Error::Index(format!("no strand pair {pos},{} at gap {gap} of {w}", pos + 1)));
            }
            let cdelta = c.mul(&C::from_monomial(&self.ring, Monomial { zeta: 0, delta: -1 }));
            for k in 0..d {
                let mut layers = w.layers[..gap].to_vec();
                layers.push(Layer::Charge { pos: pos + 1, k: (d - k) % d });
                layers.push(Layer::Cup(pos));
                layers.push(Layer::Cap(pos));
                layers.push(Layer::Charge { pos: pos + 1, k });
                layers.extend_from_slice(&w.layers[gap..]);
                terms.push((cdelta.clone(), ChargedDiagram { top: w.top, layers }));
            }
        }
        Ok(DiagramSum { ring: self.ring.clone(), top: self.top, bottom: self.bottom, terms })
    }

    pub fn to_complex(&self) -> DiagramSum<Complex64> {
        DiagramSum {
            ring: self.ring.clone(),
            top: self.top,
            bottom: self.bottom,
            terms: self.terms.iter().map(|(c, w)| (c.to_complex(), w.clone())).collect(),
        }
    }
}

impl DiagramSum<ExactScalar> {
    /// Normal forms agree term by term with identical exact coefficients.
    pub fn equivalent(&self, o: &Self) -> bool {
        self.normalize() == o.normalize()
    }
}

// ---------------------------------------------------------------------------
// Random words and sound local moves (test support)

/// Random valid word with `top` inputs and `len` layers.
pub fn random_word<R: Rng>(rng: &mut R, d: u32, top: usize, len: usize, max_width: usize) -> ChargedDiagram {
    let mut w = top;
    let mut layers = Vec::with_capacity(len);
    for _ in 0..len {
        let r: f64 = rng.random();
        if r < 0.45 && w > 0 {
            layers.push(Layer::Charge { pos: rng.random_range(0..w), k: rng.random_range(1..d) });
        } else if (r < 0.72 && w + 2 <= max_width) || w < 2 {
            layers.push(Layer::Cap(rng.random_range(0..=w)));
            w += 2;
        } else {
            layers.push(Layer::Cup(rng.random_range(0..w - 1)));
            w -= 2;
        }
    }
    ChargedDiagram { top, layers }
}

/// Random word closed off by cups at the end.
pub fn random_closed_word<R: Rng>(rng: &mut R, d: u32, len: usize, max_width: usize) -> ChargedDiagram {
    let mut w = random_word(rng, d, 0, len, max_width);
    let mut b = w.bottom();
    while b > 0 {
        let c = rng.random_range(0..b - 1);
        w.layers.push(Layer::Cup(c));
        b -= 2;
    }
    w
}

/// Random word with `top` inputs, closed or opened at the end to `bottom`
/// outputs (same parity as `top`).
pub fn random_box_word<R: Rng>(rng: &mut R, d: u32, top: usize, bottom: usize, len: usize, max_width: usize) -> ChargedDiagram {
    assert_eq!((top + bottom) % 2, 0, "arity parity");
    let mut w = random_word(rng, d, top, len, max_width);
    let mut b = w.bottom();
    while b > bottom {
        w.layers.push(Layer::Cup(rng.random_range(0..b - 1)));
        b -= 2;
    }
    while b < bottom {
        w.layers.push(Layer::Cap(rng.random_range(0..=b)));
        b += 2;
    }
    w
}

/// Apply random relation-preserving local edits; returns the edited word and
/// the monomial `m` with `original = m · edited`.
pub fn perturb<R: Rng>(rng: &mut R, ring: &Ring, w: &ChargedDiagram, moves: usize) -> (ChargedDiagram, Monomial) {
    let d = ring.d();
    let mut w = w.clone();
    let mut m = Monomial::ONE;
    for _ in 0..moves {
        let widths = w.widths();
        let kinds = [0u8, 1, 2];
        match *kinds.choose(rng).unwrap() {
            0 => {
                // zigzag insertion on a strand
                let g = rng.random_range(0..widths.len());
                if widths[g] == 0 {
                    continue;
                }
                let p = rng.random_range(0..widths[g]);
                let ins = if rng.random_bool(0.5) {
                    [Layer::Cap(p + 1), Layer::Cup(p)]
                } else {
                    [Layer::Cap(p), Layer::Cup(p + 1)]
                };
                w.layers.splice(g..g, ins);
            }
            1 => {
                // split a charge k = a + b on its strand
                let idx: Vec<usize> =
                    (0..w.layers.len()).filter(|&i| matches!(w.layers[i], Layer::Charge { .. })).collect();
                if let Some(&i) = idx.choose(rng) {
                    let Layer::Charge { pos, k } = w.layers[i] else { unreachable!() };
                    let a = rng.random_range(0..d);
                    let b = (k + d - a) % d;
                    w.layers.splice(i..=i, [Layer::Charge { pos, k: a }, Layer::Charge { pos, k: b }]);
                }
            }
            _ => {
                // para-isotopy swap of adjacent charges on different strands
                let idx: Vec<usize> = (0..w.layers.len().saturating_sub(1))
                    .filter(|&i| {
                        matches!((w.layers[i], w.layers[i + 1]),
                            (Layer::Charge { pos: a, .. }, Layer::Charge { pos: b, .. }) if a != b)
                    })
                    .collect();
                if let Some(&i) = idx.choose(rng) {
                    let (Layer::Charge { pos: pa, k: ka }, Layer::Charge { pos: pc, k: kc }) =
                        (w.layers[i], w.layers[i + 1])
                    else {
                        unreachable!()
                    };
                    // lower C moved above A picks up q^{±kc·ka}; original = q^{∓} · swapped
                    let e = if pc < pa { kc as i64 * ka as i64 } else { -(kc as i64 * ka as i64) };
                    m.zeta += 2 * e;
                    w.layers.swap(i, i + 1);
                }
            }
        }
    }
    (w, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::make_ring;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type S = DiagramSum<ExactScalar>;

    #[test]
    fn loop_values() {
        for d in 2..=6 {
            let r = make_ring(d).unwrap();
            assert_eq!(S::circle(&r, 0).eval_closed().unwrap(), ExactScalar::delta_pow(&r, 1));
            for k in 1..d as i64 {
                assert!(S::circle(&r, k).eval_closed().unwrap().is_zero());
            }
            let two = S::circle(&r, 0).compose_horizontal(&S::circle(&r, 0)).unwrap();
            assert_eq!(two.eval_closed().unwrap(), ExactScalar::integer(&r, d as i64));
            let mixed = S::circle(&r, 1).compose_horizontal(&S::circle(&r, 0)).unwrap();
            assert!(mixed.eval_closed().unwrap().is_zero());
        }
    }

    #[test]
    fn nested_circles() {
        let r = make_ring(3).unwrap();
        let w = ChargedDiagram::new(0, vec![Layer::Cap(0), Layer::Cap(1), Layer::Cup(1), Layer::Cup(0)]).unwrap();
        assert_eq!(S::single(&r, w).eval_closed().unwrap(), ExactScalar::integer(&r, 3));
    }

    #[test]
    fn cup_after_cap() {
        for d in 2..=6 {
            let r = make_ring(d).unwrap();
            for j in 0..d as i64 {
                for k in 0..d as i64 {
                    let v = S::cup(&r, -j).compose_vertical(&S::cap(&r, k)).unwrap().eval_closed().unwrap();
                    let want = if j == k { ExactScalar::delta_pow(&r, 1) } else { ExactScalar::zero(&r) };
                    assert_eq!(v, want);
                }
            }
        }
    }

    #[test]
    fn para_isotopy_phase() {
        let r = make_ring(5).unwrap();
        let (k, l) = (2i64, 3i64);
        let a = S::single(
            &r,
            ChargedDiagram::new(2, vec![Layer::Charge { pos: 0, k: 2 }, Layer::Charge { pos: 1, k: 3 }]).unwrap(),
        );
        let b = S::single(
            &r,
            ChargedDiagram::new(2, vec![Layer::Charge { pos: 1, k: 3 }, Layer::Charge { pos: 0, k: 2 }]).unwrap(),
        );
        assert!(b.equivalent(&a.scaled(&ExactScalar::q_pow(&r, k * l))));
    }

    #[test]
    fn interpolation_phase() {
        let r = make_ring(4).unwrap();
        for k in 0..4i64 {
            let sl = S::same_level(&r, 2, &[(0, k), (1, -k)]).unwrap();
            let ordered = S::same_level(&r, 2, &[(0, k)]).unwrap().stack(&S::same_level(&r, 2, &[(1, -k)]).unwrap()).unwrap();
            assert!(sl.equivalent(&ordered.scaled(&ExactScalar::zeta_pow(&r, -k * k))));
        }
    }

    #[test]
    fn charge_across_cap() {
        for d in 2..=6 {
            let r = make_ring(d).unwrap();
            for k in 0..d as i64 {
                let right = S::cap(&r, k);
                let left = S::single(
                    &r,
                    ChargedDiagram::new(0, vec![Layer::Cap(0), Layer::Charge { pos: 0, k: k as u32 }]).unwrap(),
                );
                assert!(left.equivalent(&right.scaled(&ExactScalar::zeta_pow(&r, k * k))));
            }
        }
    }

    #[test]
    fn adjoint_is_involution() {
        let r = make_ring(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let w = random_word(&mut rng, 4, 2, 10, 6);
            let s = S::single(&r, w).scaled(&ExactScalar::zeta_pow(&r, 3));
            assert_eq!(s.adjoint().adjoint(), s);
        }
        assert!(S::cap(&r, 1).adjoint().equivalent(&S::cup(&r, -1)));
    }

    #[test]
    fn canonical_word_round_trip() {
        let pairs = vec![(0, 5), (1, 2), (3, 4)];
        let w = canonical_word(0, 6, &pairs).unwrap();
        let cd = ChargedDiagram::new(0, w).unwrap();
        assert_eq!(cd.pairing(), (pairs, 0));
        assert!(canonical_word(0, 4, &[(0, 2), (1, 3)]).is_err());
    }

    #[test]
    fn normalize_idempotent_and_confluent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..=6u32 {
            let r = make_ring(d).unwrap();
            for _ in 0..40 {
                let top = 2 * rng.random_range(0..3);
                let w = random_word(&mut rng, d, top, 14, 8);
                let s = S::single(&r, w.clone());
                let n = s.normalize();
                assert_eq!(n.normalize(), n);
                for _ in 0..5 {
                    let (pw, m) = perturb(&mut rng, &r, &w, 4);
                    let alt = S::single(&r, pw).scaled_monomial(m).normalize_with(&mut Randomized(&mut rng));
                    assert_eq!(alt, n, "d={d} word {w}");
                }
            }
        }
    }

    #[test]
    fn stack_arity_error() {
        let r = make_ring(3).unwrap();
        let e = S::cap(&r, 0).stack(&S::cap(&r, 0));
        assert!(matches!(e, Err(Error::Composition(_))));
        assert!(matches!(S::cap(&r, 0).eval_closed(), Err(Error::NotClosed { .. })));
    }
}
