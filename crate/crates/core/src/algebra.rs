//! Structure-constant presentations of the Virasoro, N=1 and N=2
//! superconformal algebras (Neveu-Schwarz, Ramond, and mirror-twisted
//! sectors), with brute-force verifiers for super-skew-symmetry, the
//! super-Jacobi identity, and automorphisms.
//!
//! Indices are stored doubled (`index2 = 2·index`) so that the whole
//! `½ℤ` lattice is integral. The central element is the basis symbol `C`;
//! representations substitute a scalar for it later.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::scalar::{rat, ExactScalar, ScalarJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    L,
    J,
    G,
    G1,
    G2,
    C,
}

impl Family {
    pub fn is_odd(self) -> bool {
        matches!(self, Family::G | Family::G1 | Family::G2)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::L => "L",
            Family::J => "J",
            Family::G => "G",
            Family::G1 => "G1",
            Family::G2 => "G2",
            Family::C => "C",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Some(match s {
            "L" => Family::L,
            "J" => Family::J,
            "G" => Family::G,
            "G1" => Family::G1,
            "G2" => Family::G2,
            "C" => Family::C,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub family: Family,
    /// twice the mode index
    pub index2: i64,
}

impl Generator {
    pub fn new(family: Family, index2: i64) -> Self {
        let index2 = if family == Family::C { 0 } else { index2 };
        Generator { family, index2 }
    }

    pub fn l(n: i64) -> Self {
        Self::new(Family::L, 2 * n)
    }

    pub fn j2(index2: i64) -> Self {
        Self::new(Family::J, index2)
    }

    pub fn central() -> Self {
        Self::new(Family::C, 0)
    }

    pub fn is_odd(self) -> bool {
        self.family.is_odd()
    }

    pub fn index(self) -> BigRational {
        rat(self.index2, 2)
    }

    pub fn index_string(self) -> String {
        self.index().to_string()
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family == Family::C {
            write!(f, "C")
        } else {
            write!(f, "{}_{{{}}}", self.family.name(), self.index())
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A finitely supported linear combination of generators.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement(BTreeMap<Generator, ExactScalar>);

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(g: Generator) -> Self {
        Self::term(g, ExactScalar::one())
    }

    pub fn term(g: Generator, c: ExactScalar) -> Self {
        let mut e = Self::zero();
        e.add_term(g, &c);
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &ExactScalar)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, g: Generator) -> ExactScalar {
        self.0.get(&g).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: Generator, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(g).or_default();
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&g);
        }
    }

    pub fn add(&self, o: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_assign(o, &ExactScalar::one());
        out
    }

    pub fn sub(&self, o: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_assign(o, &ExactScalar::from_int(-1));
        out
    }

    pub fn add_assign(&mut self, o: &AlgebraElement, s: &ExactScalar) {
        for (g, c) in &o.0 {
            self.add_term(*g, &(c * s));
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        out.add_assign(self, s);
        out
    }

    /// Parity of a homogeneous element (`None` for zero or mixed parity).
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.0.keys().map(|g| g.is_odd());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            terms: self
                .0
                .iter()
                .map(|(g, c)| ElementTermJson {
                    generator: g.family.name().to_string(),
                    index: g.index_string(),
                    coeff: c.to_json(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (n, (g, c)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{}", g)?;
            } else {
                write!(f, "({})·{}", c, g)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementTermJson {
    pub generator: String,
    pub index: String,
    pub coeff: ScalarJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub terms: Vec<ElementTermJson>,
}

/// A bracket on generator pairs plus the index lattice it lives on.
pub trait BracketRule: Sync {
    fn name(&self) -> String;
    fn families(&self) -> &'static [Family];
    /// Whether a generator of this family may carry index `index2 / 2`.
    fn admits(&self, g: Generator) -> bool;
    /// Super-bracket of two admissible generators.
    fn bracket_generators(&self, a: Generator, b: Generator) -> AlgebraElement;

    /// All admissible generators with `|index| ≤ window`, plus `C`.
    fn windowed_basis(&self, window: i64) -> Vec<Generator> {
        let mut out = Vec::new();
        for &f in self.families() {
            if f == Family::C {
                continue;
            }
            for i2 in -2 * window..=2 * window {
                let g = Generator::new(f, i2);
                if self.admits(g) {
                    out.push(g);
                }
            }
        }
        out.push(Generator::central());
        out
    }

    fn check(&self, e: &AlgebraElement) -> Result<(), AlgebraError> {
        for (g, _) in e.terms() {
            if !self.families().contains(&g.family) || !self.admits(*g) {
                return Err(AlgebraError::InvalidIndexLattice {
                    symbol: g.to_string(),
                    algebra: self.name(),
                });
            }
        }
        Ok(())
    }

    /// Bilinear super-bracket.
    fn bracket(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.bracket_unchecked(a, b))
    }

    fn bracket_unchecked(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (ga, ca) in a.terms() {
            for (gb, cb) in b.terms() {
                out.add_assign(&self.bracket_generators(*ga, *gb), &(ca * cb));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraKind {
    #[serde(rename = "virasoro")]
    Virasoro,
    #[serde(rename = "n1-ns")]
    N1Ns,
    #[serde(rename = "n1-ramond")]
    N1Ramond,
    #[serde(rename = "n2-ns")]
    N2Ns,
    #[serde(rename = "n2-ramond")]
    N2Ramond,
    #[serde(rename = "n2-mirror-twisted")]
    N2MirrorTwisted,
}

impl AlgebraKind {
    pub const ALL: [AlgebraKind; 6] = [
        AlgebraKind::Virasoro,
        AlgebraKind::N1Ns,
        AlgebraKind::N1Ramond,
        AlgebraKind::N2Ns,
        AlgebraKind::N2Ramond,
        AlgebraKind::N2MirrorTwisted,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraKind::Virasoro => "virasoro",
            AlgebraKind::N1Ns => "n1-ns",
            AlgebraKind::N1Ramond => "n1-ramond",
            AlgebraKind::N2Ns => "n2-ns",
            AlgebraKind::N2Ramond => "n2-ramond",
            AlgebraKind::N2MirrorTwisted => "n2-mirror-twisted",
        }
    }

    pub fn parse(s: &str) -> Option<AlgebraKind> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Whether indices of `f` are half-odd (`true`) or integral (`false`).
    fn half_odd(self, f: Family) -> bool {
        use AlgebraKind::*;
        matches!(
            (self, f),
            (N1Ns, Family::G) | (N2Ns, Family::G1 | Family::G2) | (N2MirrorTwisted, Family::G1 | Family::J)
        )
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `(m³ − m)/12` with `m = m2/2`.
fn virasoro_cocycle(m2: i64) -> BigRational {
    let m = rat(m2, 2);
    (&m * &m * &m - &m) / rat(12, 1)
}

fn r(n: i64, d: i64) -> ExactScalar {
    ExactScalar::frac(n, d)
}

/// Structure constants shared by every built-in presentation; `cocycle`
/// supplies the Virasoro central term so that corrupted variants can reuse
/// the rest of the table.
fn table_bracket(
    kind: AlgebraKind,
    cocycle: &dyn Fn(i64) -> BigRational,
    a: Generator,
    b: Generator,
) -> AlgebraElement {
    use Family::*;
    let (x, y) = (a.index2, b.index2);
    let i = ExactScalar::i();
    let mut out = AlgebraElement::zero();
    match (a.family, b.family) {
        (C, _) | (_, C) => {}
        (L, L) => {
            // [L_m, L_n] = (m − n) L_{m+n} + (m³ − m)/12 δ_{m+n,0} C
            out.add_term(Generator::new(L, x + y), &r(x - y, 2));
            if x + y == 0 {
                out.add_term(Generator::central(), &ExactScalar::from_rational(cocycle(x)));
            }
        }
        (L, g @ (G | G1 | G2)) => {
            // [L_m, G_r] = (m/2 − r) G_{m+r}
            out.add_term(Generator::new(g, x + y), &r(x - 2 * y, 4));
        }
        (g @ (G | G1 | G2), L) => {
            out.add_term(Generator::new(g, x + y), &r(2 * x - y, 4));
        }
        (L, J) => {
            // [L_m, J_n] = −n J_{m+n}
            out.add_term(Generator::new(J, x + y), &r(-y, 2));
        }
        (J, L) => {
            out.add_term(Generator::new(J, x + y), &r(x, 2));
        }
        (G, G) | (G1, G1) | (G2, G2) => {
            // [G_r, G_s] = 2 L_{r+s} + (1/3)(r² − 1/4) δ_{r+s,0} C
            out.add_term(Generator::new(L, x + y), &ExactScalar::from_int(2));
            if x + y == 0 {
                out.add_term(Generator::central(), &r(x * x - 1, 12));
            }
        }
        (J, J) => {
            // [J_m, J_n] = (1/3) m δ_{m+n,0} C
            if x + y == 0 {
                out.add_term(Generator::central(), &r(x, 6));
            }
        }
        (G1, G2) => {
            let c = if kind == AlgebraKind::N2MirrorTwisted {
                // [G1_r, G2_n] = −i (r − n) J_{r+n}
                &-&i * &r(x - y, 2)
            } else {
                // [G1_r, G2_s] = i (s − r) J_{r+s}
                &i * &r(y - x, 2)
            };
            out.add_term(Generator::new(J, x + y), &c);
        }
        (G2, G1) => {
            let c = if kind == AlgebraKind::N2MirrorTwisted {
                &-&i * &r(y - x, 2)
            } else {
                &i * &r(x - y, 2)
            };
            out.add_term(Generator::new(J, x + y), &c);
        }
        (J, G1) => {
            // [J_m, G1_r] = −i G2_{m+r}
            out.add_term(Generator::new(G2, x + y), &-&i);
        }
        (G1, J) => {
            out.add_term(Generator::new(G2, x + y), &i);
        }
        (J, G2) => {
            // [J_m, G2_r] = i G1_{m+r}
            out.add_term(Generator::new(G1, x + y), &i);
        }
        (G2, J) => {
            out.add_term(Generator::new(G1, x + y), &-&i);
        }
        // Pairs such as (G, J) never occur inside one presentation.
        _ => {}
    }
    out
}

impl BracketRule for AlgebraKind {
    fn name(&self) -> String {
        self.as_str().to_string()
    }

    fn families(&self) -> &'static [Family] {
        use Family::*;
        match self {
            AlgebraKind::Virasoro => &[L, C],
            AlgebraKind::N1Ns | AlgebraKind::N1Ramond => &[L, G, C],
            _ => &[L, J, G1, G2, C],
        }
    }

    fn admits(&self, g: Generator) -> bool {
        if !self.families().contains(&g.family) {
            return false;
        }
        if g.family == Family::C {
            return true;
        }
        let odd_index = g.index2.rem_euclid(2) == 1;
        odd_index == self.half_odd(g.family)
    }

    fn bracket_generators(&self, a: Generator, b: Generator) -> AlgebraElement {
        table_bracket(*self, &virasoro_cocycle, a, b)
    }
}

/// A presentation whose Virasoro central term has been replaced; used as a
/// negative control for the verifiers.
pub struct CentralTermOverride {
    pub base: AlgebraKind,
    pub label: String,
    pub cocycle: fn(i64) -> BigRational,
}

impl CentralTermOverride {
    /// Central term `(m³ − m)/11`: a rescaling of the true cocycle, so it
    /// still satisfies the Jacobi identity.
    pub fn virasoro_over_eleven() -> Self {
        CentralTermOverride {
            base: AlgebraKind::Virasoro,
            label: "virasoro[(m^3-m)/11]".into(),
            cocycle: |m2| {
                let m = rat(m2, 2);
                (&m * &m * &m - &m) / rat(11, 1)
            },
        }
    }

    /// Central term `(m⁵ − m)/12`: odd (so skew-symmetry survives) but not a
    /// 2-cocycle, so the Jacobi identity breaks.
    pub fn virasoro_quintic() -> Self {
        CentralTermOverride {
            base: AlgebraKind::Virasoro,
            label: "virasoro[(m^5-m)/12]".into(),
            cocycle: |m2| {
                let m = rat(m2, 2);
                let m2 = &m * &m;
                (&m2 * &m2 * &m - &m) / rat(12, 1)
            },
        }
    }
}

impl BracketRule for CentralTermOverride {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn families(&self) -> &'static [Family] {
        self.base.families()
    }

    fn admits(&self, g: Generator) -> bool {
        self.base.admits(g)
    }

    fn bracket_generators(&self, a: Generator, b: Generator) -> AlgebraElement {
        table_bracket(self.base, &self.cocycle, a, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Skew,
    Jacobi,
    Automorphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub check: CheckKind,
    pub triple: Vec<Generator>,
    pub residual: AlgebraElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub algebra: String,
    pub window: i64,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "algebra": self.algebra,
            "window": self.window,
            "checked": self.checked,
            "passed": self.passed(),
            "violations": self.violations.iter().map(|v| serde_json::json!({
                "check": v.check,
                "triple": v.triple.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "residual": v.residual.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn sign(odd: bool) -> ExactScalar {
    ExactScalar::from_int(if odd { -1 } else { 1 })
}

/// Check super-skew-symmetry on all windowed pairs and the super-Jacobi
/// identity on all windowed triples.
pub fn verify_algebra(rule: &dyn BracketRule, window: i64) -> Report {
    let basis = if window < 0 { Vec::new() } else { rule.windowed_basis(window) };
    let br = |a: &AlgebraElement, b: &AlgebraElement| rule.bracket_unchecked(a, b);
    let mut violations: Vec<Violation> = basis
        .par_iter()
        .flat_map_iter(|&a| {
            let mut found = Vec::new();
            let ea = AlgebraElement::basis(a);
            for &b in &basis {
                let eb = AlgebraElement::basis(b);
                // [a,b] + (−1)^{|a||b|} [b,a] = 0
                let mut skew = br(&ea, &eb);
                skew.add_assign(&br(&eb, &ea), &sign(a.is_odd() && b.is_odd()));
                if !skew.is_zero() {
                    found.push(Violation {
                        check: CheckKind::Skew,
                        triple: vec![a, b],
                        residual: skew,
                    });
                }
                for &c in &basis {
                    let ec = AlgebraElement::basis(c);
                    // (−1)^{|a||c|}[a,[b,c]] + (−1)^{|b||a|}[b,[c,a]] + (−1)^{|c||b|}[c,[a,b]]
                    let mut jac = AlgebraElement::zero();
                    jac.add_assign(&br(&ea, &br(&eb, &ec)), &sign(a.is_odd() && c.is_odd()));
                    jac.add_assign(&br(&eb, &br(&ec, &ea)), &sign(b.is_odd() && a.is_odd()));
                    jac.add_assign(&br(&ec, &br(&ea, &eb)), &sign(c.is_odd() && b.is_odd()));
                    if !jac.is_zero() {
                        found.push(Violation {
                            check: CheckKind::Jacobi,
                            triple: vec![a, b, c],
                            residual: jac,
                        });
                    }
                }
            }
            found
        })
        .collect();
    violations.sort_by(|x, y| (x.check, &x.triple).cmp(&(y.check, &y.triple)));
    let n = basis.len();
    Report {
        algebra: rule.name(),
        window,
        checked: n * n + n * n * n,
        violations,
    }
}

/// The mirror map `G1 ↦ G1, G2 ↦ −G2, J ↦ −J, L ↦ L, C ↦ C` on the N=2
/// Neveu-Schwarz algebra.
pub fn mirror_automorphism(e: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    AlgebraKind::N2Ns
        .check(e)
        .map_err(|_| AlgebraError::InvalidAlgebra(AlgebraKind::N2Ns.name()))?;
    let mut out = AlgebraElement::zero();
    for (g, c) in e.terms() {
        match g.family {
            Family::G2 | Family::J => out.add_term(*g, &-c),
            _ => out.add_term(*g, c),
        }
    }
    Ok(out)
}

/// Check `map([a, b]) = [map(a), map(b)]` for all windowed generator pairs.
pub fn verify_automorphism(
    rule: &dyn BracketRule,
    map: &(dyn Fn(&AlgebraElement) -> AlgebraElement + Sync),
    window: i64,
) -> Report {
    let basis = if window < 0 { Vec::new() } else { rule.windowed_basis(window) };
    let mut violations: Vec<Violation> = basis
        .par_iter()
        .flat_map_iter(|&a| {
            let ea = AlgebraElement::basis(a);
            basis
                .iter()
                .filter_map(|&b| {
                    let eb = AlgebraElement::basis(b);
                    let lhs = map(&rule.bracket_unchecked(&ea, &eb));
                    let rhs = rule.bracket_unchecked(&map(&ea), &map(&eb));
                    let residual = lhs.sub(&rhs);
                    (!residual.is_zero()).then(|| Violation {
                        check: CheckKind::Automorphism,
                        triple: vec![a, b],
                        residual,
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    violations.sort_by(|x, y| x.triple.cmp(&y.triple));
    let n = basis.len();
    Report {
        algebra: rule.name(),
        window,
        checked: n * n,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Family::*;

    fn g(f: Family, index2: i64) -> AlgebraElement {
        AlgebraElement::basis(Generator::new(f, index2))
    }

    fn br(k: AlgebraKind, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement {
        k.bracket(&a, &b).unwrap()
    }

    #[test]
    fn virasoro_central_term() {
        let got = br(AlgebraKind::Virasoro, g(L, 4), g(L, -4));
        let mut want = AlgebraElement::term(Generator::l(0), ExactScalar::from_int(4));
        want.add_term(Generator::central(), &ExactScalar::frac(1, 2));
        assert_eq!(got, want);
    }

    #[test]
    fn n1_ns_odd_bracket() {
        let got = br(AlgebraKind::N1Ns, g(G, 3), g(G, -3));
        let mut want = AlgebraElement::term(Generator::l(0), ExactScalar::from_int(2));
        want.add_term(Generator::central(), &ExactScalar::frac(2, 3));
        assert_eq!(got, want);
    }

    #[test]
    fn n2_ns_j_on_g1() {
        let got = br(AlgebraKind::N2Ns, g(J, 2), g(G1, 1));
        assert_eq!(got, AlgebraElement::term(Generator::new(G2, 3), -ExactScalar::i()));
    }

    #[test]
    fn mirror_twisted_mixed_odd() {
        let got = br(AlgebraKind::N2MirrorTwisted, g(G1, 1), g(G2, 0));
        let want = AlgebraElement::term(Generator::new(J, 1), (-ExactScalar::i()).scale_rational(&rat(1, 2)));
        assert_eq!(got, want);
    }

    #[test]
    fn lattice_violations_rejected() {
        let err = AlgebraKind::N2Ns.bracket(&g(J, 1), &g(G1, 1)).unwrap_err();
        assert!(matches!(err, AlgebraError::InvalidIndexLattice { .. }));
        assert!(AlgebraKind::N2MirrorTwisted.bracket(&g(G2, 1), &g(L, 0)).is_err());
        assert!(AlgebraKind::Virasoro.bracket(&g(G, 1), &g(L, 0)).is_err());
    }

    #[test]
    fn brackets_stay_on_lattice() {
        for kind in AlgebraKind::ALL {
            let basis = kind.windowed_basis(3);
            for &a in &basis {
                for &b in &basis {
                    let out = kind.bracket_generators(a, b);
                    assert!(kind.check(&out).is_ok(), "{kind}: [{a}, {b}] = {out}");
                }
            }
        }
    }

    #[test]
    fn mirror_and_ns_lattices_differ() {
        let ns = AlgebraKind::N2Ns;
        let tw = AlgebraKind::N2MirrorTwisted;
        assert!(ns.admits(Generator::new(J, 2)) && !ns.admits(Generator::new(J, 1)));
        assert!(tw.admits(Generator::new(J, 1)) && !tw.admits(Generator::new(J, 2)));
        assert!(tw.admits(Generator::new(G2, 0)) && !ns.admits(Generator::new(G2, 0)));
    }

    #[test]
    fn small_window_verification() {
        for kind in AlgebraKind::ALL {
            let rep = verify_algebra(&kind, 2);
            assert!(rep.passed(), "{kind}: {:?}", rep.violations.first());
        }
        assert!(verify_algebra(&AlgebraKind::Virasoro, 0).passed());
    }

    #[test]
    fn rescaled_cocycle_is_still_a_cocycle() {
        assert!(verify_algebra(&CentralTermOverride::virasoro_over_eleven(), 3).passed());
    }

    #[test]
    fn quintic_cocycle_fails_jacobi_only() {
        let rep = verify_algebra(&CentralTermOverride::virasoro_quintic(), 4);
        assert!(!rep.passed());
        assert!(rep.violations.iter().all(|v| v.check == CheckKind::Jacobi));
        // (a − b) f(c) + cyclic = 120 for (1, 2, −3) when f(m) = (m⁵ − m)/12 · 12
        assert!(rep
            .violations
            .iter()
            .any(|v| v.triple == vec![Generator::l(1), Generator::l(2), Generator::l(-3)]));
    }

    #[test]
    fn mirror_map_is_involutive_automorphism() {
        let e = g(G2, 1).add(&g(J, 2)).add(&g(G1, -1)).add(&g(L, 0));
        let once = mirror_automorphism(&e).unwrap();
        assert_eq!(once.coeff(Generator::new(G2, 1)), ExactScalar::from_int(-1));
        assert_eq!(mirror_automorphism(&once).unwrap(), e);

        let lhs = mirror_automorphism(&br(AlgebraKind::N2Ns, g(J, 2), g(G1, 1))).unwrap();
        assert_eq!(lhs, AlgebraElement::term(Generator::new(G2, 3), ExactScalar::i()));
        let rhs = br(
            AlgebraKind::N2Ns,
            mirror_automorphism(&g(J, 2)).unwrap(),
            mirror_automorphism(&g(G1, 1)).unwrap(),
        );
        assert_eq!(lhs, rhs);

        assert!(mirror_automorphism(&g(J, 1)).is_err());
    }

    #[test]
    fn automorphism_checks() {
        let kappa = |e: &AlgebraElement| mirror_automorphism(e).unwrap();
        assert!(verify_automorphism(&AlgebraKind::N2Ns, &kappa, 3).passed());
        assert!(verify_automorphism(&AlgebraKind::N2Ns, &|e: &AlgebraElement| e.clone(), 3).passed());

        let flip_g1 = |e: &AlgebraElement| {
            let mut out = AlgebraElement::zero();
            for (gen, c) in e.terms() {
                out.add_term(*gen, &if gen.family == G1 { -c } else { c.clone() });
            }
            out
        };
        let rep = verify_automorphism(&AlgebraKind::N2Ns, &flip_g1, 3);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.triple == vec![Generator::new(J, 0), Generator::new(G1, 1)]));
    }
}
