//! Finite Boolean algebras of subsets of `{0..n-1}`, their atoms (the
//! ζ-partition), ultrafilters, the Stone map and factor spaces.
//!
//! Subsets are bitmasks; bit `i` is ground point `i`.

use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ext::Rational;

pub const MAX_GROUND: usize = 16;

pub type Subset = u32;

fn full_mask(n: usize) -> Subset {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn check_ground(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("ground set must be nonempty".into()));
    }
    if n > MAX_GROUND {
        return Err(Error::GroundTooLarge(n));
    }
    Ok(())
}

pub fn subset_from_points(n: usize, points: &[usize]) -> Result<Subset> {
    points.iter().try_fold(0, |acc, &p| {
        if p >= n {
            Err(Error::InvalidInput(format!("point {p} outside ground set of size {n}")))
        } else {
            Ok(acc | (1 << p))
        }
    })
}

pub fn subset_points(s: Subset) -> Vec<usize> {
    (0..32).filter(|i| s & (1 << i) != 0).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteBooleanAlgebra {
    ground_size: usize,
    /// Sorted ascending as integers.
    members: Vec<Subset>,
    /// Ordered by smallest point.
    atoms: Vec<Subset>,
}

/// All unions of the given disjoint atoms, sorted.
fn unions_of(atoms: &[Subset]) -> Vec<Subset> {
    let mut members: Vec<Subset> = (0u32..1 << atoms.len())
        .map(|sel| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| sel & (1 << i) != 0)
                .fold(0, |acc, (_, a)| acc | a)
        })
        .collect();
    members.sort_unstable();
    members
}

impl FiniteBooleanAlgebra {
    /// Validates that `members` contains `∅`, the full set, and is closed under
    /// complement and union.
    pub fn new(ground_size: usize, members: Vec<Subset>) -> Result<Self> {
        check_ground(ground_size)?;
        let full = full_mask(ground_size);
        let set: HashSet<Subset> = members.iter().copied().collect();
        if members.iter().any(|m| m & !full != 0) {
            return Err(Error::InvalidInput("member outside ground set".into()));
        }
        if !set.contains(&0) || !set.contains(&full) {
            return Err(Error::InvalidInput("algebra must contain the empty and full sets".into()));
        }
        for &a in &set {
            if !set.contains(&(full & !a)) {
                return Err(Error::InvalidInput(format!("not closed under complement: {a:#b}")));
            }
            for &b in &set {
                if !set.contains(&(a | b)) {
                    return Err(Error::InvalidInput(format!("not closed under union: {a:#b}, {b:#b}")));
                }
            }
        }
        let mut atoms: Vec<Subset> = set
            .iter()
            .copied()
            .filter(|&a| a != 0 && set.iter().all(|&b| b == 0 || b & a != b || b == a))
            .collect();
        atoms.sort_by_key(|a| a.trailing_zeros());
        let mut members: Vec<Subset> = set.into_iter().collect();
        members.sort_unstable();
        Ok(Self {
            ground_size,
            members,
            atoms,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn atoms(&self) -> &[Subset] {
        &self.atoms
    }

    pub fn full(&self) -> Subset {
        full_mask(self.ground_size)
    }

    pub fn complement(&self, a: Subset) -> Subset {
        self.full() & !a
    }

    pub fn index_of(&self, a: Subset) -> Option<usize> {
        self.members.binary_search(&a).ok()
    }

    pub fn contains(&self, a: Subset) -> bool {
        self.index_of(a).is_some()
    }

    /// Whether the algebra separates points.
    pub fn separates_points(&self) -> bool {
        self.atoms.iter().all(|a| a.count_ones() == 1)
    }
}

/// Smallest algebra containing the generators. Points are grouped by their
/// membership pattern across the generators; the groups are the atoms.
pub fn generate_algebra(n: usize, generators: &[Subset]) -> Result<FiniteBooleanAlgebra> {
    check_ground(n)?;
    let full = full_mask(n);
    if generators.iter().any(|g| g & !full != 0) {
        return Err(Error::InvalidInput("generator outside ground set".into()));
    }
    let mut groups: BTreeMap<Vec<bool>, Subset> = BTreeMap::new();
    for point in 0..n {
        let signature = generators.iter().map(|g| g & (1 << point) != 0).collect();
        *groups.entry(signature).or_default() |= 1 << point;
    }
    let mut atoms: Vec<Subset> = groups.into_values().collect();
    atoms.sort_by_key(|a| a.trailing_zeros());
    Ok(FiniteBooleanAlgebra {
        ground_size: n,
        members: unions_of(&atoms),
        atoms,
    })
}

/// Like [`generate_algebra`] with generators given as point lists.
pub fn generate_algebra_from_points(n: usize, generators: &[Vec<usize>]) -> Result<FiniteBooleanAlgebra> {
    check_ground(n)?;
    let masks = generators
        .iter()
        .map(|g| subset_from_points(n, g))
        .collect::<Result<Vec<_>>>()?;
    generate_algebra(n, &masks)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl ZetaPartition {
    pub fn block_of(&self, point: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&point))
    }
}

/// Blocks of points no member separates: the atoms of the algebra.
pub fn zeta_partition(alg: &FiniteBooleanAlgebra) -> ZetaPartition {
    ZetaPartition {
        blocks: alg.atoms.iter().map(|&a| subset_points(a)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultrafilter {
    /// Indices into [`FiniteBooleanAlgebra::members`], ascending.
    pub selected: Vec<usize>,
}

impl Ultrafilter {
    pub fn contains_member(&self, index: usize) -> bool {
        self.selected.binary_search(&index).is_ok()
    }
}

fn ultrafilter_at(alg: &FiniteBooleanAlgebra, atom: Subset) -> Ultrafilter {
    Ultrafilter {
        selected: alg
            .members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m & atom == atom)
            .map(|(i, _)| i)
            .collect(),
    }
}

/// The four ultrafilter axioms: no `∅`, upward closed, closed under `∩`,
/// and exactly one of `A`, `Aᶜ` for every member.
pub fn is_ultrafilter(alg: &FiniteBooleanAlgebra, u: &Ultrafilter) -> bool {
    let sets: HashSet<Subset> = u
        .selected
        .iter()
        .filter_map(|&i| alg.members.get(i).copied())
        .collect();
    if sets.len() != u.selected.len() || sets.contains(&0) {
        return false;
    }
    let upward = sets
        .iter()
        .all(|&a| alg.members.iter().all(|&b| b & a != a || sets.contains(&b)));
    let meets = sets
        .iter()
        .all(|&a| sets.iter().all(|&b| sets.contains(&(a & b))));
    let decides = alg
        .members
        .iter()
        .all(|&a| sets.contains(&a) != sets.contains(&alg.complement(a)));
    upward && meets && decides
}

/// One ultrafilter per atom, in atom order.
pub fn ultrafilters(alg: &FiniteBooleanAlgebra) -> Vec<Ultrafilter> {
    alg.atoms.iter().map(|&a| ultrafilter_at(alg, a)).collect()
}

/// `{U : A ∈ U}` as a bitmask over the ultrafilters of [`ultrafilters`].
pub fn stone_map(alg: &FiniteBooleanAlgebra, a: Subset) -> Result<Subset> {
    if !alg.contains(a) {
        return Err(Error::NotAMember);
    }
    Ok(alg
        .atoms
        .iter()
        .enumerate()
        .filter(|(_, &atom)| a & atom == atom)
        .fold(0, |acc, (i, _)| acc | (1 << i)))
}

/// `U_ω = {A : ω ∈ A}`.
pub fn point_ultrafilter(alg: &FiniteBooleanAlgebra, point: usize) -> Result<Ultrafilter> {
    let atom = alg
        .atoms
        .iter()
        .copied()
        .find(|a| point < alg.ground_size && a & (1 << point) != 0)
        .ok_or_else(|| Error::InvalidInput(format!("point {point} outside ground set")))?;
    Ok(ultrafilter_at(alg, atom))
}

/// Whether the Stone map is injective and preserves `∪`, `∩` and complement
/// on every pair of members.
pub fn verify_stone_isomorphism(alg: &FiniteBooleanAlgebra) -> bool {
    let all = full_mask(alg.atoms.len());
    let images: Vec<Subset> = alg
        .members
        .iter()
        .map(|&m| stone_map(alg, m).expect("member"))
        .collect();
    let distinct: HashSet<Subset> = images.iter().copied().collect();
    if distinct.len() != images.len() {
        return false;
    }
    let image = |a: Subset| alg.index_of(a).map(|i| images[i]);
    alg.members.iter().zip(&images).all(|(&a, &ia)| {
        image(alg.complement(a)) == Some(all & !ia)
            && alg.members.iter().zip(&images).all(|(&b, &ib)| {
                image(a | b) == Some(ia | ib) && image(a & b) == Some(ia & ib)
            })
    })
}

/// Finite model of a measure space: one positive mass per ground point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSpace {
    weights: Vec<Rational>,
}

impl WeightedSpace {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("weighted space needs at least one point".into()));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn mass(&self, s: Subset) -> Rational {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| s & (1 << i) != 0)
            .map(|(_, w)| w)
            .sum()
    }

    /// `Σ values[i]·weights[i]`.
    pub fn integrate(&self, values: &[Rational]) -> Result<Rational> {
        if values.len() != self.weights.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} values, got {}",
                self.weights.len(),
                values.len()
            )));
        }
        Ok(values
            .iter()
            .zip(&self.weights)
            .fold(Rational::zero(), |acc, (v, w)| acc + v * w))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSpace {
    pub space: WeightedSpace,
    /// Block id of each ground point.
    pub projection: Vec<usize>,
}

impl FactorSpace {
    /// Image of a ζ-set under the projection, as a bitmask over blocks.
    pub fn image(&self, s: Subset) -> Subset {
        self.projection
            .iter()
            .enumerate()
            .filter(|(i, _)| s & (1 << i) != 0)
            .fold(0, |acc, (_, &b)| acc | (1 << b))
    }

    /// Lifts a function on blocks to the ground set.
    pub fn pull_back(&self, block_values: &[Rational]) -> Vec<Rational> {
        self.projection.iter().map(|&b| block_values[b].clone()).collect()
    }
}

/// Collapses each ζ-block to one point carrying the block's mass.
pub fn factor_space(space: &WeightedSpace, alg: &FiniteBooleanAlgebra) -> Result<FactorSpace> {
    if space.weights.len() != alg.ground_size {
        return Err(Error::InvalidInput(format!(
            "space has {} points but the algebra has ground size {}",
            space.weights.len(),
            alg.ground_size
        )));
    }
    let weights = alg.atoms.iter().map(|&a| space.mass(a)).collect();
    let projection = (0..alg.ground_size)
        .map(|p| {
            alg.atoms
                .iter()
                .position(|a| a & (1 << p) != 0)
                .expect("atoms cover the ground set")
        })
        .collect();
    Ok(FactorSpace {
        space: WeightedSpace::new(weights)?,
        projection,
    })
}
