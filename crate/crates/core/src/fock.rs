//! Free-field Fock spaces: bosons `α(n)`, Neveu-Schwarz fermions `ψ(r)`
//! with `r ∈ ℤ + ½`, and Ramond fermions `ψ(n)` with `n ∈ ℤ` acting on a
//! two-dimensional ground space `{w⁺, w⁻}`.
//!
//! A layout is an ordered list of species. Basis monomials keep the
//! creation modes of each species in strictly canonical order (bosons
//! non-increasing, fermions strictly decreasing in magnitude) with earlier
//! species to the left; tensor products of Fock spaces are just longer
//! layouts, which reproduces the Koszul sign rule automatically.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::FockError;
use crate::scalar::{rat, ExactScalar};
use crate::series::{FracExp, Series, Variable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpeciesKind {
    Boson,
    FermionNs,
    FermionR,
}

impl SpeciesKind {
    pub fn is_fermion(self) -> bool {
        !matches!(self, SpeciesKind::Boson)
    }

    /// Whether `index2/2` lies on this species' mode lattice.
    pub fn admits(self, index2: i64) -> bool {
        match self {
            SpeciesKind::Boson | SpeciesKind::FermionR => index2.rem_euclid(2) == 0,
            SpeciesKind::FermionNs => index2.rem_euclid(2) == 1,
        }
    }

    /// Doubled magnitude of the lowest creation mode.
    pub fn lowest_creation2(self) -> u16 {
        match self {
            SpeciesKind::FermionNs => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Species {
    pub kind: SpeciesKind,
    pub name: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ground {
    Vacuum,
    Plus,
    Minus,
}

impl Ground {
    pub fn is_odd(self) -> bool {
        self == Ground::Minus
    }

    fn flip(self) -> Ground {
        match self {
            Ground::Plus => Ground::Minus,
            Ground::Minus => Ground::Plus,
            Ground::Vacuum => Ground::Vacuum,
        }
    }
}

pub type Modes = SmallVec<[u16; 4]>;

/// A creation monomial applied to a ground state. Modes are stored as
/// doubled magnitudes, so `ψ(−3/2)` is `3` and `α(−2)` is `4`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    parts: SmallVec<[Modes; 4]>,
    ground: Ground,
}

impl Monomial {
    pub fn ground(species: usize, ground: Ground) -> Self {
        Monomial {
            parts: (0..species).map(|_| Modes::new()).collect(),
            ground,
        }
    }

    pub fn from_parts(parts: Vec<Vec<u16>>, ground: Ground) -> Self {
        Monomial {
            parts: parts.into_iter().map(Modes::from_vec).collect(),
            ground,
        }
    }

    pub fn parts(&self) -> &[Modes] {
        &self.parts
    }

    pub fn ground_state(&self) -> Ground {
        self.ground
    }

    pub fn is_ground(&self) -> bool {
        self.parts.iter().all(|p| p.is_empty())
    }

    /// Twice the sum of creation-mode magnitudes.
    pub fn level2(&self) -> i64 {
        self.parts.iter().flatten().map(|&m| m as i64).sum()
    }

    pub fn mode_count(&self) -> usize {
        self.parts.iter().map(|p| p.len()).sum()
    }

    /// The leftmost creation mode as `(species, doubled magnitude)` together
    /// with the remaining monomial; `self = mode · rest` with no sign.
    pub fn peel(&self) -> Option<(usize, u16, Monomial)> {
        let s = self.parts.iter().position(|p| !p.is_empty())?;
        let mut rest = self.clone();
        let m = rest.parts[s].remove(0);
        Some((s, m, rest))
    }

    /// Exchange the species blocks `[0, half)` and `[half, 2·half)`.
    pub fn swap_halves(&self) -> Monomial {
        let half = self.parts.len() / 2;
        let mut parts: SmallVec<[Modes; 4]> = SmallVec::new();
        parts.extend(self.parts[half..].iter().cloned());
        parts.extend(self.parts[..half].iter().cloned());
        Monomial {
            parts,
            ground: self.ground,
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}", self.parts, self.ground)
    }
}

#[derive(Clone, Default, PartialEq, Eq)]
pub struct FockVector(BTreeMap<Monomial, ExactScalar>);

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(m: Monomial) -> Self {
        Self::term(m, ExactScalar::one())
    }

    pub fn term(m: Monomial, c: ExactScalar) -> Self {
        let mut v = Self::zero();
        v.add_term(m, &c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> ExactScalar {
        self.0.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += s · v`
    pub fn axpy(&mut self, s: &ExactScalar, v: &FockVector) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &v.0 {
            self.add_term(m.clone(), &(c * s));
        }
    }

    pub fn add(&self, v: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.axpy(&ExactScalar::one(), v);
        out
    }

    pub fn sub(&self, v: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.axpy(&ExactScalar::from_int(-1), v);
        out
    }

    pub fn scale(&self, s: &ExactScalar) -> FockVector {
        let mut out = FockVector::zero();
        out.axpy(s, self);
        out
    }

    /// Twice the level, if every term sits at the same level.
    pub fn level2(&self) -> Option<i64> {
        let mut it = self.0.keys().map(Monomial::level2);
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> (ExactScalar, Monomial)) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in &self.0 {
            let (s, m2) = f(m);
            out.add_term(m2, &(c * &s));
        }
        out
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

/// Ordered list of free-field species sharing one ground state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockLayout {
    species: Vec<Species>,
    /// Value of the anticommutator `{ψ(r), ψ(−r)}` (1 for the standard
    /// normalisation).
    fermion_norm: BigRational,
}

impl FockLayout {
    pub fn new(species: Vec<Species>) -> Self {
        let ramond = species.iter().filter(|s| s.kind == SpeciesKind::FermionR).count();
        assert!(ramond <= 1, "at most one Ramond fermion shares the ground space");
        FockLayout {
            species,
            fermion_norm: rat(1, 1),
        }
    }

    fn sp(kind: SpeciesKind, name: &str) -> Species {
        Species {
            kind,
            name: name.to_string(),
        }
    }

    pub fn boson() -> Self {
        Self::new(vec![Self::sp(SpeciesKind::Boson, "a")])
    }

    pub fn fermion_ns() -> Self {
        Self::new(vec![Self::sp(SpeciesKind::FermionNs, "psi")])
    }

    pub fn fermion_r() -> Self {
        Self::new(vec![Self::sp(SpeciesKind::FermionR, "psi")])
    }

    /// `B ⊗ F_NS`
    pub fn vosa() -> Self {
        Self::new(vec![
            Self::sp(SpeciesKind::Boson, "a"),
            Self::sp(SpeciesKind::FermionNs, "psi"),
        ])
    }

    /// `(B ⊗ F_NS) ⊗ (B ⊗ F_NS)`
    pub fn vosa_squared() -> Self {
        Self::new(vec![
            Self::sp(SpeciesKind::Boson, "a1"),
            Self::sp(SpeciesKind::FermionNs, "psi1"),
            Self::sp(SpeciesKind::Boson, "a2"),
            Self::sp(SpeciesKind::FermionNs, "psi2"),
        ])
    }

    /// `B ⊗ F_R`
    pub fn ramond() -> Self {
        Self::new(vec![
            Self::sp(SpeciesKind::Boson, "a"),
            Self::sp(SpeciesKind::FermionR, "psi"),
        ])
    }

    pub fn with_fermion_norm(mut self, norm: BigRational) -> Self {
        self.fermion_norm = norm;
        self
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn has_ramond(&self) -> bool {
        self.species.iter().any(|s| s.kind == SpeciesKind::FermionR)
    }

    pub fn ground_states(&self) -> Vec<Monomial> {
        let n = self.species.len();
        if self.has_ramond() {
            vec![Monomial::ground(n, Ground::Plus), Monomial::ground(n, Ground::Minus)]
        } else {
            vec![Monomial::ground(n, Ground::Vacuum)]
        }
    }

    pub fn vacuum(&self) -> Monomial {
        self.ground_states().remove(0)
    }

    pub fn is_odd(&self, m: &Monomial) -> bool {
        let fermions: usize = self
            .species
            .iter()
            .zip(&m.parts)
            .filter(|(s, _)| s.kind.is_fermion())
            .map(|(_, p)| p.len())
            .sum();
        (fermions % 2 == 1) ^ m.ground.is_odd()
    }

    /// Parity of a vector whose terms share one parity.
    pub fn vector_parity(&self, v: &FockVector) -> Option<bool> {
        let mut it = v.terms().map(|(m, _)| self.is_odd(m));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    fn fermions_before(&self, m: &Monomial, s: usize) -> usize {
        self.species[..s]
            .iter()
            .zip(&m.parts)
            .filter(|(sp, _)| sp.kind.is_fermion())
            .map(|(_, p)| p.len())
            .sum()
    }

    /// Apply the mode of species `s` with index `index2/2`, returning at most
    /// one monomial.
    pub fn apply_mode_monomial(&self, s: usize, index2: i64, m: &Monomial) -> Option<(ExactScalar, Monomial)> {
        let kind = self.species[s].kind;
        debug_assert!(kind.admits(index2), "mode {index2}/2 off the lattice of {kind:?}");
        let part = &m.parts[s];
        match kind {
            SpeciesKind::Boson => {
                if index2 < 0 {
                    let mag = (-index2) as u16;
                    let mut out = m.clone();
                    let p = out.parts[s].iter().position(|&x| x < mag).unwrap_or(out.parts[s].len());
                    out.parts[s].insert(p, mag);
                    Some((ExactScalar::one(), out))
                } else if index2 == 0 {
                    None
                } else {
                    let mag = index2 as u16;
                    let count = part.iter().filter(|&&x| x == mag).count() as i64;
                    if count == 0 {
                        return None;
                    }
                    let mut out = m.clone();
                    let p = out.parts[s].iter().position(|&x| x == mag).unwrap();
                    out.parts[s].remove(p);
                    Some((ExactScalar::from_int(count * index2 / 2), out))
                }
            }
            SpeciesKind::FermionNs | SpeciesKind::FermionR => {
                if index2 == 0 {
                    // Ramond zero mode: anticommute past every fermion, then
                    // ψ(0) w^± = sqrt(norm/2) w^∓.
                    let total = self.fermions_before(m, self.species.len());
                    let c = ExactScalar::from_rational(&self.fermion_norm / rat(2, 1))
                        .sqrt()
                        .expect("zero-mode normalisation has a square root in Q(i, √2)");
                    let c = if total % 2 == 1 { -c } else { c };
                    let mut out = m.clone();
                    out.ground = out.ground.flip();
                    return Some((c, out));
                }
                let before = self.fermions_before(m, s);
                if index2 < 0 {
                    let mag = (-index2) as u16;
                    if part.contains(&mag) {
                        return None;
                    }
                    let p = part.iter().position(|&x| x < mag).unwrap_or(part.len());
                    let mut out = m.clone();
                    out.parts[s].insert(p, mag);
                    let c = if (before + p) % 2 == 1 {
                        ExactScalar::from_int(-1)
                    } else {
                        ExactScalar::one()
                    };
                    Some((c, out))
                } else {
                    let mag = index2 as u16;
                    let p = part.iter().position(|&x| x == mag)?;
                    let mut out = m.clone();
                    out.parts[s].remove(p);
                    let c = ExactScalar::from_rational(self.fermion_norm.clone());
                    let c = if (before + p) % 2 == 1 { -c } else { c };
                    Some((c, out))
                }
            }
        }
    }

    pub fn apply_mode(&self, s: usize, index2: i64, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in v.terms() {
            if let Some((k, m2)) = self.apply_mode_monomial(s, index2, m) {
                out.add_term(m2, &(c * &k));
            }
        }
        out
    }

    /// Canonical text form, e.g. `a(-2)a(-1)psi(-1/2)|0>`.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut s = String::new();
        for (sp, part) in self.species.iter().zip(&m.parts) {
            for &mag in part {
                s.push_str(&format!("{}({})", sp.name, rat(-(mag as i64), 2)));
            }
        }
        s.push_str(match m.ground {
            Ground::Vacuum => "|0>",
            Ground::Plus => "|w+>",
            Ground::Minus => "|w->",
        });
        s
    }

    pub fn format_vector(&self, v: &FockVector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.terms()
            .map(|(m, c)| {
                if c.is_one() {
                    self.format_monomial(m)
                } else {
                    format!("({})·{}", c, self.format_monomial(m))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parse the canonical text form of a single monomial.
    pub fn parse_monomial(&self, text: &str) -> Result<Monomial, FockError> {
        let bad = || FockError::InvalidMode(text.to_string());
        let (body, ground) = text.rsplit_once('|').ok_or_else(bad)?;
        let ground = match ground {
            "0>" => Ground::Vacuum,
            "w+>" => Ground::Plus,
            "w->" => Ground::Minus,
            _ => return Err(bad()),
        };
        let mut v = FockVector::basis(Monomial::ground(self.species.len(), ground));
        let mut ops = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(bad)?;
            let close = rest.find(')').ok_or_else(bad)?;
            let name = &rest[..open];
            let idx = FracExp::parse(&rest[open + 1..close]).map_err(|_| bad())?;
            let s = self.species.iter().position(|sp| sp.name == name).ok_or_else(bad)?;
            let i2 = idx.times_int(2).ok_or_else(bad)?;
            if i2 >= 0 || !self.species[s].kind.admits(i2) {
                return Err(bad());
            }
            ops.push((s, i2));
            rest = &rest[close + 1..];
        }
        for &(s, i2) in ops.iter().rev() {
            v = self.apply_mode(s, i2, &v);
        }
        let found = match v.terms().next() {
            Some((m, c)) if v.len() == 1 && c.is_one() => Ok(m.clone()),
            _ => Err(bad()),
        };
        found
    }
}

/// Which single-sector space a [`FockSpaceSpec`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FockKind {
    Boson,
    FermionNs,
    FermionR,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockSpaceSpec {
    pub kind: FockKind,
    pub truncation: BigRational,
}

/// Basis monomials of a layout whose weight (`level + ground offset`) is
/// below the truncation `W`, sorted by weight then canonical order.
#[derive(Clone, Debug)]
pub struct TruncatedSpace {
    layout: FockLayout,
    ground_weight: BigRational,
    truncation: BigRational,
    basis: Vec<Monomial>,
}

/// All canonical mode lists of one species with doubled level `< budget2`.
fn partitions_into(kind: SpeciesKind, budget2: i64) -> Vec<Modes> {
    fn rec(kind: SpeciesKind, max_part: i64, remaining: i64, cur: &mut Modes, out: &mut Vec<Modes>) {
        out.push(cur.clone());
        let mut p = kind.lowest_creation2() as i64;
        while p <= max_part && p < remaining {
            cur.push(p as u16);
            let next_max = if kind.is_fermion() { p - 2 } else { p };
            rec(kind, next_max, remaining - p, cur, out);
            cur.pop();
            p += 2;
        }
    }
    let mut out = Vec::new();
    if budget2 > 0 {
        rec(kind, budget2, budget2, &mut Modes::new(), &mut out);
    }
    out
}

impl TruncatedSpace {
    pub fn new(layout: FockLayout, ground_weight: BigRational, truncation: BigRational) -> Self {
        let budget = (&truncation - &ground_weight) * rat(2, 1);
        // states with 2·level < budget
        let budget2 = budget.ceil().to_integer().to_i64().unwrap_or(0);
        let mut basis = Vec::new();
        if budget > BigRational::zero() {
            let per_species: Vec<Vec<Modes>> = layout
                .species()
                .iter()
                .map(|sp| partitions_into(sp.kind, budget2))
                .collect();
            let mut stack: Vec<(usize, i64, Vec<Modes>)> = vec![(0, 0, Vec::new())];
            while let Some((s, used, parts)) = stack.pop() {
                if s == per_species.len() {
                    for g in layout.ground_states() {
                        let m = Monomial {
                            parts: parts.iter().cloned().collect(),
                            ground: g.ground,
                        };
                        basis.push(m);
                    }
                    continue;
                }
                for p in &per_species[s] {
                    let l: i64 = p.iter().map(|&x| x as i64).sum();
                    if BigRational::from_integer((used + l).into()) < budget {
                        let mut next = parts.clone();
                        next.push(p.clone());
                        stack.push((s + 1, used + l, next));
                    }
                }
            }
        }
        basis.sort_by(|a, b| (a.level2(), a).cmp(&(b.level2(), b)));
        basis.dedup();
        TruncatedSpace {
            layout,
            ground_weight,
            truncation,
            basis,
        }
    }

    pub fn from_spec(spec: &FockSpaceSpec, ground_weight: BigRational) -> Self {
        let layout = match spec.kind {
            FockKind::Boson => FockLayout::boson(),
            FockKind::FermionNs => FockLayout::fermion_ns(),
            FockKind::FermionR => FockLayout::fermion_r(),
        };
        Self::new(layout, ground_weight, spec.truncation.clone())
    }

    pub fn layout(&self) -> &FockLayout {
        &self.layout
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn truncation(&self) -> &BigRational {
        &self.truncation
    }

    pub fn ground_weight(&self) -> &BigRational {
        &self.ground_weight
    }

    pub fn weight(&self, m: &Monomial) -> BigRational {
        &self.ground_weight + rat(m.level2(), 2)
    }

    /// Basis states with level (weight above the ground) at most `max_level2/2`.
    pub fn basis_up_to_level2(&self, max_level2: i64) -> Vec<Monomial> {
        self.basis.iter().filter(|m| m.level2() <= max_level2).cloned().collect()
    }

    /// `(weight, dimension)` of every nonempty layer.
    pub fn layer_dimensions(&self) -> Vec<(BigRational, usize)> {
        let mut out: Vec<(BigRational, usize)> = Vec::new();
        for m in &self.basis {
            let w = self.weight(m);
            match out.last_mut() {
                Some((lw, n)) if *lw == w => *n += 1,
                _ => out.push((w, 1)),
            }
        }
        out
    }

    /// Apply a single mode, failing if the result leaves the truncated space.
    pub fn mode_apply(&self, species: usize, index: FracExp, m: &Monomial) -> Result<FockVector, FockError> {
        let i2 = index
            .times_int(2)
            .filter(|&i2| species < self.layout.species().len() && self.layout.species()[species].kind.admits(i2))
            .ok_or_else(|| FockError::InvalidMode(format!("species {species}, index {index}")))?;
        let out = self.layout.apply_mode(species, i2, &FockVector::basis(m.clone()));
        let new_weight = self.weight(m) - rat(i2, 2);
        if !out.is_zero() && new_weight >= self.truncation {
            return Err(FockError::TruncationOverflow {
                weight: new_weight.to_string(),
                truncation: self.truncation.to_string(),
            });
        }
        Ok(out)
    }

    pub fn dump(&self) -> String {
        self.basis
            .iter()
            .map(|m| self.layout.format_monomial(m) + "\n")
            .collect()
    }
}

/// A linear operator on a Fock space, applied state by state.
pub trait LinearOp: Sync {
    fn apply_monomial(&self, m: &Monomial) -> FockVector;

    fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in v.terms() {
            out.axpy(c, &self.apply_monomial(m));
        }
        out
    }
}

impl<F: Fn(&Monomial) -> FockVector + Sync> LinearOp for F {
    fn apply_monomial(&self, m: &Monomial) -> FockVector {
        self(m)
    }
}

/// Graded dimension `Σ_λ dim(M_λ) q^{shift + λ}` for an operator `L0` that
/// must be diagonal on the basis. `grading` is the L0 eigenvalue increase
/// per unit of level, used to place the truncation of the result.
pub fn character(
    space: &TruncatedSpace,
    shift: &BigRational,
    l0: &dyn LinearOp,
    grading: &BigRational,
) -> Result<Series, FockError> {
    let mut eigen: Vec<BigRational> = Vec::with_capacity(space.basis.len());
    for m in &space.basis {
        let image = l0.apply_monomial(m);
        let lambda = image.coeff(m);
        let rest = image.sub(&FockVector::term(m.clone(), lambda.clone()));
        let lambda = match (rest.is_zero(), lambda.as_rational()) {
            (true, Some(r)) => r.clone(),
            (true, None) if lambda.is_zero() => BigRational::zero(),
            _ => return Err(FockError::NonDiagonal(space.layout.format_monomial(m))),
        };
        eigen.push(lambda);
    }
    let ground = space
        .basis
        .iter()
        .zip(&eigen)
        .find(|(m, _)| m.level2() == 0)
        .map(|(_, l)| l.clone())
        .unwrap_or_else(|| space.ground_weight.clone());
    let levels = &space.truncation - &space.ground_weight;
    let top = shift + &ground + grading * &levels;
    let to_exp = |r: &BigRational| {
        FracExp::new(r.numer().to_i64().expect("exponent fits"), r.denom().to_i64().expect("exponent fits"))
    };
    let mut series = Series::zero(Variable::Q, to_exp(&top));
    for lambda in &eigen {
        series.add_term(to_exp(&(shift + lambda)), &ExactScalar::one());
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(space: &TruncatedSpace) -> Vec<(String, usize)> {
        space.layer_dimensions().into_iter().map(|(w, n)| (w.to_string(), n)).collect()
    }

    /// independent partition counter
    fn partition_count(n: usize) -> usize {
        let mut p = vec![0usize; n + 1];
        p[0] = 1;
        for part in 1..=n {
            for total in part..=n {
                p[total] += p[total - part];
            }
        }
        p[n]
    }

    #[test]
    fn ns_fermion_layers() {
        let s = TruncatedSpace::new(FockLayout::fermion_ns(), rat(0, 1), rat(5, 2));
        assert_eq!(
            dims(&s),
            vec![("0".into(), 1), ("1/2".into(), 1), ("3/2".into(), 1), ("2".into(), 1)]
        );
        assert_eq!(
            s.dump(),
            "|0>\npsi(-1/2)|0>\npsi(-3/2)|0>\npsi(-3/2)psi(-1/2)|0>\n"
        );
    }

    #[test]
    fn boson_layers_are_partition_numbers() {
        let s = TruncatedSpace::new(FockLayout::boson(), rat(0, 1), rat(8, 1));
        let got: Vec<usize> = s.layer_dimensions().into_iter().map(|(_, n)| n).collect();
        let want: Vec<usize> = (0..8).map(partition_count).collect();
        assert_eq!(got, want);
        assert_eq!(&got[..4], &[1, 1, 2, 3]);
    }

    #[test]
    fn ramond_layers() {
        let g = rat(1, 16);
        let s = TruncatedSpace::new(FockLayout::fermion_r(), g.clone(), &g + rat(2, 1));
        assert_eq!(dims(&s), vec![("1/16".into(), 2), ("17/16".into(), 2)]);
        let s = TruncatedSpace::new(FockLayout::fermion_r(), g.clone(), &g + rat(4, 1));
        let got: Vec<usize> = s.layer_dimensions().into_iter().map(|(_, n)| n).collect();
        assert_eq!(got, vec![2, 2, 2, 4]);
    }

    #[test]
    fn empty_truncation() {
        let s = TruncatedSpace::new(FockLayout::vosa(), rat(0, 1), rat(0, 1));
        assert!(s.basis().is_empty());
        let l0 = |m: &Monomial| FockVector::basis(m.clone());
        let ch = character(&s, &rat(-1, 16), &l0, &rat(1, 1)).unwrap();
        assert!(ch.is_zero());
    }

    #[test]
    fn commutator_and_anticommutator() {
        let b = FockLayout::boson();
        let vac = FockVector::basis(b.vacuum());
        let a_m1 = b.apply_mode(0, -2, &vac);
        assert_eq!(b.apply_mode(0, 2, &a_m1), vac);
        assert!(b.apply_mode(0, 2, &vac).is_zero());

        let f = FockLayout::fermion_ns();
        let vac = FockVector::basis(f.vacuum());
        let p = f.apply_mode(0, -1, &vac);
        assert_eq!(f.apply_mode(0, 1, &p), vac);
        // Pauli
        assert!(f.apply_mode(0, -1, &p).is_zero());
    }

    #[test]
    fn ramond_zero_mode() {
        let r = FockLayout::fermion_r();
        let wp = FockVector::basis(Monomial::ground(1, Ground::Plus));
        let wm = FockVector::basis(Monomial::ground(1, Ground::Minus));
        let once = r.apply_mode(0, 0, &wp);
        assert_eq!(once, wm.scale(&ExactScalar::sqrt2().scale_rational(&rat(1, 2))));
        assert_eq!(r.apply_mode(0, 0, &once), wp.scale(&ExactScalar::frac(1, 2)));
        assert!(r.is_odd(&Monomial::ground(1, Ground::Minus)));
        assert!(!r.is_odd(&Monomial::ground(1, Ground::Plus)));
        // ψ(0) anticommutes with ψ(−1)
        let v = r.apply_mode(0, -2, &wp);
        let lhs = r.apply_mode(0, 0, &r.apply_mode(0, -2, &wp));
        let rhs = r.apply_mode(0, -2, &r.apply_mode(0, 0, &wp));
        assert_eq!(lhs, rhs.scale(&ExactScalar::from_int(-1)));
        assert!(!v.is_zero());
    }

    #[test]
    fn koszul_signs_across_species() {
        let l = FockLayout::vosa_squared();
        let vac = FockVector::basis(l.vacuum());
        // ψ1(−1/2) ψ2(−1/2) |0> = − ψ2(−1/2) ψ1(−1/2) |0>
        let a = l.apply_mode(1, -1, &l.apply_mode(3, -1, &vac));
        let b = l.apply_mode(3, -1, &l.apply_mode(1, -1, &vac));
        assert_eq!(a, b.scale(&ExactScalar::from_int(-1)));
    }

    #[test]
    fn text_roundtrip() {
        let l = FockLayout::vosa();
        let m = l.parse_monomial("a(-2)a(-1)psi(-1/2)|0>").unwrap();
        assert_eq!(l.format_monomial(&m), "a(-2)a(-1)psi(-1/2)|0>");
        assert!(l.parse_monomial("a(-1/2)|0>").is_err());
    }

    #[test]
    fn truncation_overflow() {
        let s = TruncatedSpace::new(FockLayout::boson(), rat(0, 1), rat(2, 1));
        let vac = s.layout().vacuum();
        assert!(s.mode_apply(0, FracExp::int(-1), &vac).is_ok());
        assert!(matches!(
            s.mode_apply(0, FracExp::int(-2), &vac),
            Err(FockError::TruncationOverflow { .. })
        ));
        assert!(matches!(s.mode_apply(0, FracExp::half(1), &vac), Err(FockError::InvalidMode(_))));
    }

    #[test]
    fn non_diagonal_operator_rejected() {
        let s = TruncatedSpace::new(FockLayout::fermion_r(), rat(1, 16), rat(2, 1));
        let zero_mode = |m: &Monomial| s.layout().apply_mode(0, 0, &FockVector::basis(m.clone()));
        assert!(matches!(
            character(&s, &rat(0, 1), &zero_mode, &rat(1, 1)),
            Err(FockError::NonDiagonal(_))
        ));
    }

    proptest::proptest! {
        #[test]
        fn modes_shift_level_and_respect_pauli(ops in proptest::collection::vec((0usize..4, -6i64..6), 1..6)) {
            let l = FockLayout::vosa_squared();
            let mut v = FockVector::basis(l.vacuum());
            for (s, i) in ops {
                let kind = l.species()[s].kind;
                let i2 = if kind.admits(2 * i) { 2 * i } else { 2 * i + 1 };
                let before = v.level2();
                let out = l.apply_mode(s, i2, &v);
                if let (Some(b), Some(a)) = (before, out.level2()) {
                    proptest::prop_assert_eq!(a, b - i2);
                }
                if kind.is_fermion() && i2 < 0 {
                    proptest::prop_assert!(l.apply_mode(s, i2, &out).is_zero());
                }
                v = if out.is_zero() { v } else { out };
            }
        }
    }
}
