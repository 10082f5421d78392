//! Finite-partition measure spaces and signed simple functions on them.
//!
//! A [`StepFunction`] lays its pieces out as consecutive left-closed intervals
//! of the standard interval, starting at 0. On an infinite space the pieces
//! cover `[0, S)` and the function equals `tail_value` on `[S, ∞)`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ext::{Extended, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeasureSpace {
    total_mass: Extended,
}

impl MeasureSpace {
    pub fn finite(total_mass: Rational) -> Result<Self> {
        if !total_mass.is_positive() {
            return Err(Error::InvalidInput(format!(
                "total_mass must be positive, got {total_mass}"
            )));
        }
        Ok(Self {
            total_mass: Extended::Finite(total_mass),
        })
    }

    pub fn infinite() -> Self {
        Self {
            total_mass: Extended::Infinite,
        }
    }

    pub fn new(total_mass: Extended) -> Result<Self> {
        match total_mass {
            Extended::Finite(m) => Self::finite(m),
            Extended::Infinite => Ok(Self::infinite()),
        }
    }

    pub fn total_mass(&self) -> &Extended {
        &self.total_mass
    }

    pub fn is_infinite(&self) -> bool {
        self.total_mass.is_infinite()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub value: Rational,
    pub mass: Rational,
}

impl Piece {
    pub fn new(value: Rational, mass: Rational) -> Self {
        Self { value, mass }
    }
}

/// Binary pointwise operations on step functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointwiseOp {
    Add,
    Subtract,
    Multiply,
    Min,
    Max,
    AbsDiff,
}

impl PointwiseOp {
    pub fn apply(self, a: &Rational, b: &Rational) -> Rational {
        match self {
            PointwiseOp::Add => a + b,
            PointwiseOp::Subtract => a - b,
            PointwiseOp::Multiply => a * b,
            PointwiseOp::Min => a.min(b).clone(),
            PointwiseOp::Max => a.max(b).clone(),
            PointwiseOp::AbsDiff => (a - b).abs(),
        }
    }
}

/// A simple function with a constant nonnegative tail on the infinite-mass remainder.
///
/// `tail_value` stores `|f|` on the remainder; it is always 0 on finite spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepFunction {
    space: MeasureSpace,
    pieces: Vec<Piece>,
    tail_value: Rational,
}

/// One cell of a common refinement: its start, length and the value of each
/// refined function there.
#[derive(Debug, Clone)]
pub struct Cell {
    pub start: Rational,
    pub len: Rational,
    pub values: Vec<Rational>,
}

/// Common refinement of several functions on one space.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub cells: Vec<Cell>,
    /// Tail values, present on infinite spaces.
    pub tails: Option<Vec<Rational>>,
}

impl StepFunction {
    pub fn new(space: MeasureSpace, pieces: Vec<Piece>, tail_value: Rational) -> Result<Self> {
        if let Some(p) = pieces.iter().find(|p| p.mass.is_negative()) {
            return Err(Error::InvalidInput(format!(
                "pieces: negative mass {}",
                p.mass
            )));
        }
        if tail_value.is_negative() {
            return Err(Error::InvalidInput(format!(
                "tail_value must be nonnegative, got {tail_value}"
            )));
        }
        let extent: Rational = pieces.iter().map(|p| &p.mass).sum();
        match space.total_mass() {
            Extended::Finite(total) => {
                if !tail_value.is_zero() {
                    return Err(Error::InvalidInput(
                        "tail_value must be 0 on a finite space".into(),
                    ));
                }
                if &extent != total {
                    return Err(Error::InvalidInput(format!(
                        "pieces: masses sum to {extent}, expected total_mass {total}"
                    )));
                }
            }
            Extended::Infinite => {}
        }
        Ok(Self {
            space,
            pieces,
            tail_value,
        })
    }

    /// Finite space whose total mass is the sum of the piece masses.
    pub fn on_finite(pieces: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let pieces: Vec<Piece> = pieces
            .into_iter()
            .map(|(v, m)| Piece::new(v, m))
            .collect();
        let total: Rational = pieces.iter().map(|p| &p.mass).sum();
        Self::new(MeasureSpace::finite(total)?, pieces, Rational::zero())
    }

    /// Infinite space: the pieces, then `tail_value` forever.
    pub fn with_tail(
        pieces: impl IntoIterator<Item = (Rational, Rational)>,
        tail_value: Rational,
    ) -> Result<Self> {
        let pieces = pieces
            .into_iter()
            .map(|(v, m)| Piece::new(v, m))
            .collect();
        Self::new(MeasureSpace::infinite(), pieces, tail_value)
    }

    pub fn zero(space: &MeasureSpace) -> Self {
        Self::constant(space, Rational::zero()).expect("zero is a valid constant")
    }

    /// The constant `c`; on infinite spaces `c` must be nonnegative.
    pub fn constant(space: &MeasureSpace, c: Rational) -> Result<Self> {
        match space.total_mass() {
            Extended::Finite(m) => Self::new(
                space.clone(),
                vec![Piece::new(c, m.clone())],
                Rational::zero(),
            ),
            Extended::Infinite => Self::new(space.clone(), Vec::new(), c),
        }
    }

    /// `1_{[0,t)}` on `space` (clipped to the space).
    pub fn indicator_prefix(space: &MeasureSpace, t: &Rational) -> Result<Self> {
        if t.is_negative() {
            return Err(Error::InvalidInput("indicator length must be >= 0".into()));
        }
        let one = Rational::one();
        let zero = Rational::zero();
        match space.total_mass() {
            Extended::Finite(m) => {
                let t = t.min(m).clone();
                let rest = m - &t;
                Self::new(
                    space.clone(),
                    vec![Piece::new(one, t), Piece::new(zero.clone(), rest)],
                    zero,
                )
            }
            Extended::Infinite => {
                Self::new(space.clone(), vec![Piece::new(one, t.clone())], zero)
            }
        }
    }

    /// `1_{[t, ∞)}` restricted to the space.
    pub fn indicator_suffix(space: &MeasureSpace, t: &Rational) -> Result<Self> {
        if t.is_negative() {
            return Err(Error::InvalidInput("indicator start must be >= 0".into()));
        }
        let zero = Rational::zero();
        match space.total_mass() {
            Extended::Finite(m) => {
                let t = t.min(m).clone();
                let rest = m - &t;
                Self::new(
                    space.clone(),
                    vec![Piece::new(zero.clone(), t), Piece::new(Rational::one(), rest)],
                    zero,
                )
            }
            Extended::Infinite => Self::new(
                space.clone(),
                vec![Piece::new(zero, t.clone())],
                Rational::one(),
            ),
        }
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn tail_value(&self) -> &Rational {
        &self.tail_value
    }

    /// Length covered by the finite pieces.
    pub fn extent(&self) -> Rational {
        self.pieces.iter().map(|p| &p.mass).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| !p.value.is_negative() || p.mass.is_zero())
    }

    /// Drops zero-mass pieces, merges adjacent equal values and folds trailing
    /// pieces equal to the tail into the tail.
    pub fn canonicalize(&self) -> StepFunction {
        let mut out: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for p in self.pieces.iter().filter(|p| !p.mass.is_zero()) {
            match out.last_mut() {
                Some(last) if last.value == p.value => last.mass += &p.mass,
                _ => out.push(p.clone()),
            }
        }
        if self.space.is_infinite() {
            while out.last().is_some_and(|p| p.value == self.tail_value) {
                out.pop();
            }
        }
        StepFunction {
            space: self.space.clone(),
            pieces: out,
            tail_value: self.tail_value.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize().pieces.len() == self.pieces.len()
    }

    /// Equality almost everywhere.
    pub fn ae_eq(&self, other: &StepFunction) -> bool {
        self.space == other.space && self.canonicalize() == other.canonicalize()
    }

    /// `∫ f dμ`; `+∞` when a positive tail sits on infinite mass.
    pub fn integrate(&self) -> Result<Extended> {
        let finite: Rational = self.pieces.iter().map(|p| &p.value * &p.mass).sum();
        if self.space.is_infinite() && self.tail_value.is_positive() {
            return Ok(Extended::Infinite);
        }
        Ok(Extended::Finite(finite))
    }

    pub fn abs(&self) -> StepFunction {
        self.map_values(|v| v.abs())
    }

    /// `c · f`; the tail (which stores `|f|`) scales by `|c|`.
    pub fn scale(&self, c: &Rational) -> StepFunction {
        let mut out = self.map_values(|v| v * c);
        out.tail_value = &self.tail_value * c.abs();
        out
    }

    fn map_values(&self, f: impl Fn(&Rational) -> Rational) -> StepFunction {
        StepFunction {
            space: self.space.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece::new(f(&p.value), p.mass.clone()))
                .collect(),
            tail_value: f(&self.tail_value).abs(),
        }
    }

    /// Value at the point `x` of the standard interval.
    pub fn value_at(&self, x: &Rational) -> Rational {
        let mut start = Rational::zero();
        for p in &self.pieces {
            let end = &start + &p.mass;
            if x >= &start && x < &end {
                return p.value.clone();
            }
            start = end;
        }
        self.tail_value.clone()
    }

    /// `(start, end, value)` for every piece of positive mass.
    pub fn intervals(&self) -> Vec<(Rational, Rational, Rational)> {
        let mut start = Rational::zero();
        let mut out = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            let end = &start + &p.mass;
            if !p.mass.is_zero() {
                out.push((start.clone(), end.clone(), p.value.clone()));
            }
            start = end;
        }
        out
    }

    /// Splits every piece into `k` equal parts (same function a.e.).
    pub fn split_uniform(&self, k: usize) -> StepFunction {
        let k = k.max(1);
        let kq = Rational::from_integer(k.into());
        let pieces = self
            .pieces
            .iter()
            .flat_map(|p| {
                let m = &p.mass / &kq;
                std::iter::repeat_n(Piece::new(p.value.clone(), m), k)
            })
            .collect();
        StepFunction {
            space: self.space.clone(),
            pieces,
            tail_value: self.tail_value.clone(),
        }
    }

    /// Builds a function on the same space from explicit pieces and tail.
    pub fn with_pieces(&self, pieces: Vec<Piece>, tail_value: Rational) -> Result<StepFunction> {
        StepFunction::new(self.space.clone(), pieces, tail_value)
    }

    pub fn pointwise(&self, other: &StepFunction, op: PointwiseOp) -> Result<StepFunction> {
        let r = refine(&[self, other])?;
        let pieces = r
            .cells
            .into_iter()
            .map(|c| Piece::new(op.apply(&c.values[0], &c.values[1]), c.len))
            .collect();
        let tail = match r.tails {
            Some(t) => {
                let v = op.apply(&t[0], &t[1]);
                if v.is_negative() {
                    return Err(Error::NegativeTail(v.to_string()));
                }
                v
            }
            None => Rational::zero(),
        };
        Ok(StepFunction {
            space: self.space.clone(),
            pieces,
            tail_value: tail,
        })
    }

    /// `|f| <= |g|` everywhere (on the common refinement, tails included).
    pub fn abs_le(&self, other: &StepFunction) -> Result<bool> {
        let r = refine(&[self, other])?;
        let cells_ok = r
            .cells
            .iter()
            .all(|c| c.values[0].abs() <= c.values[1].abs());
        let tails_ok = r.tails.is_none_or(|t| t[0] <= t[1]);
        Ok(cells_ok && tails_ok)
    }
}

/// Common refinement by interval overlap. All functions must share a space.
pub fn refine(fs: &[&StepFunction]) -> Result<Refinement> {
    let Some(first) = fs.first() else {
        return Ok(Refinement {
            cells: Vec::new(),
            tails: None,
        });
    };
    for f in &fs[1..] {
        if f.space != first.space {
            return Err(Error::SpaceMismatch {
                left: first.space.total_mass().to_string(),
                right: f.space.total_mass().to_string(),
            });
        }
    }
    let infinite = first.space.is_infinite();
    let extent = fs.iter().map(|f| f.extent()).max().unwrap_or_default();

    // breakpoints of every function, merged
    let mut cuts: Vec<Rational> = vec![Rational::zero(), extent.clone()];
    for f in fs {
        let mut x = Rational::zero();
        for p in f.pieces() {
            x += &p.mass;
            cuts.push(x.clone());
        }
    }
    cuts.sort();
    cuts.dedup();

    let mut cursors: Vec<(usize, Rational)> = vec![(0, Rational::zero()); fs.len()];
    let mut cells = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a >= b {
            continue;
        }
        let mut values = Vec::with_capacity(fs.len());
        for (f, (idx, end)) in fs.iter().zip(cursors.iter_mut()) {
            // advance to the piece that contains [a, b)
            while *idx < f.pieces.len() && (&*end + &f.pieces[*idx].mass) <= *a {
                *end += &f.pieces[*idx].mass;
                *idx += 1;
            }
            let v = if *idx < f.pieces.len() {
                f.pieces[*idx].value.clone()
            } else {
                f.tail_value.clone()
            };
            values.push(v);
        }
        cells.push(Cell {
            start: a.clone(),
            len: b - a,
            values,
        });
    }
    let tails = infinite.then(|| fs.iter().map(|f| f.tail_value.clone()).collect());
    Ok(Refinement { cells, tails })
}

/// Assignment of each piece to a block; the tail region of an infinite space
/// is its own block unless `tail_block` merges it into one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMap {
    pub block_assignment: Vec<usize>,
    pub tail_block: Option<usize>,
}

impl PartitionMap {
    pub fn new(block_assignment: Vec<usize>) -> Self {
        Self {
            block_assignment,
            tail_block: None,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self::new((0..n).collect())
    }

    pub fn single_block(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    /// Whether `g` (with the same piece layout) is constant on every block.
    pub fn is_measurable(&self, g: &StepFunction) -> bool {
        if g.pieces.len() != self.block_assignment.len() {
            return false;
        }
        let mut seen: std::collections::HashMap<usize, &Rational> = Default::default();
        for (p, b) in g.pieces.iter().zip(&self.block_assignment) {
            if p.mass.is_zero() {
                continue;
            }
            if let Some(v) = seen.insert(*b, &p.value) {
                if v != &p.value {
                    return false;
                }
            }
        }
        true
    }
}

/// `E[f | blocks]`, keeping the piece layout of `f`.
pub fn conditional_expectation(f: &StepFunction, blocks: &PartitionMap) -> Result<StepFunction> {
    if blocks.block_assignment.len() != f.pieces.len() {
        return Err(Error::PartitionMismatch {
            expected: f.pieces.len(),
            got: blocks.block_assignment.len(),
        });
    }
    if let Some(b) = blocks.tail_block {
        if f.space.is_infinite() {
            return Err(Error::InfiniteBlock(b));
        }
        return Err(Error::InvalidInput(
            "tail_block given on a finite space".into(),
        ));
    }
    let mut sums: std::collections::HashMap<usize, (Rational, Rational)> = Default::default();
    for (p, b) in f.pieces.iter().zip(&blocks.block_assignment) {
        let e = sums.entry(*b).or_default();
        e.0 += &p.value * &p.mass;
        e.1 += &p.mass;
    }
    let pieces = f
        .pieces
        .iter()
        .zip(&blocks.block_assignment)
        .map(|(p, b)| {
            let (s, m) = &sums[b];
            let v = if m.is_zero() { Rational::zero() } else { s / m };
            Piece::new(v, p.mass.clone())
        })
        .collect();
    Ok(StepFunction {
        space: f.space.clone(),
        pieces,
        tail_value: f.tail_value.clone(),
    })
}

/// `∫_0^x w` for the default weight on an infinite space: `w = 2^-k` on `[k-1, k)`.
fn default_weight_cdf(x: &Rational) -> Rational {
    use num_traits::ToPrimitive;
    let k_minus_1 = x.floor();
    let k = k_minus_1
        .to_integer()
        .to_usize()
        .expect("interval position fits in usize")
        + 1;
    let half_pow = |n: usize| Rational::new(1.into(), num_bigint::BigInt::one() << n);
    // mass of the first k-1 unit cells is 1 - 2^-(k-1)
    Rational::one() - half_pow(k - 1) + half_pow(k) * (x - &k_minus_1)
}

fn delta_integrand(d: &Rational) -> Rational {
    d / (Rational::one() + d)
}

/// `δ₀(f, g) = ∫ |f−g| / (1+|f−g|) · w dμ` with an explicit weight.
pub fn delta0_metric(f: &StepFunction, g: &StepFunction, w: &StepFunction) -> Result<Rational> {
    if w.space.is_infinite() {
        if w.tail_value.is_positive() {
            return Err(Error::WeightNotIntegrable);
        }
        // a weight vanishing on infinite mass is not positive a.e.
        return Err(Error::NonPositiveWeight);
    }
    if w.pieces.iter().any(|p| p.mass.is_positive() && !p.value.is_positive()) {
        return Err(Error::NonPositiveWeight);
    }
    let r = refine(&[f, g, w])?;
    Ok(r.cells
        .iter()
        .map(|c| delta_integrand(&(&c.values[0] - &c.values[1]).abs()) * &c.values[2] * &c.len)
        .sum())
}

/// `δ₀` with the default weight: `1/μ(Ω)` on finite spaces, `2^-k` on the
/// k-th unit interval of an infinite space.
pub fn delta0_default(f: &StepFunction, g: &StepFunction) -> Result<Rational> {
    let r = refine(&[f, g])?;
    match f.space.total_mass() {
        Extended::Finite(m) => Ok(r
            .cells
            .iter()
            .map(|c| delta_integrand(&(&c.values[0] - &c.values[1]).abs()) * &c.len)
            .sum::<Rational>()
            / m),
        Extended::Infinite => {
            let mut total = Rational::zero();
            let mut end = Rational::zero();
            for c in &r.cells {
                end = &c.start + &c.len;
                let wmass = default_weight_cdf(&end) - default_weight_cdf(&c.start);
                total += delta_integrand(&(&c.values[0] - &c.values[1]).abs()) * wmass;
            }
            let tails = r.tails.expect("infinite space has tails");
            let d = (&tails[0] - &tails[1]).abs();
            total += delta_integrand(&d) * (Rational::one() - default_weight_cdf(&end));
            Ok(total)
        }
    }
}
