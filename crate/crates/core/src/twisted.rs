//! Twisted sectors: the σ-twisted (Ramond) module `M_σ = B ⊗ F_R` of `V`,
//! and the κ̃-twisted module of `V ⊗ V` built on the same space.
//!
//! Generators of `V ⊗ V` act through `Y_g(v¹, x) = Y_σ(Δ₂(x) v, x^{1/2})`
//! with slot 2 obtained by `x^{1/2} ↦ −x^{1/2}`; composite states are
//! handled by the twisted iterate recursion of [`VertexEngine`].

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{AlgebraKind, Family};
use crate::delta::apply_delta;
use crate::error::{DeltaError, FockError, TwistError};
use crate::fock::{character, FockLayout, FockVector, LinearOp, Monomial, TruncatedSpace};
use crate::scalar::{rat, ExactScalar};
use crate::series::{FracExp, Series};
use crate::vosa::{
    check_presentation, generator_state, verify_jacobi, GeneratorAction, JacobiCase, ModeFamily, ModeOp,
    N2Calibration, Realization, RelationReport, RelationViolation, TensorVosa, Twist, VertexEngine, VosaStructure,
};

/// `α^σ_n = α(n)` for `n ∈ ℤ`, `ψ^σ_r = ψ(r + 1/2)` for `r ∈ ℤ + 1/2`.
pub struct SigmaAction {
    layout: FockLayout,
}

impl GeneratorAction for SigmaAction {
    fn module(&self) -> &FockLayout {
        &self.layout
    }

    fn apply(&self, t: usize, a2: i64, w: &Monomial) -> FockVector {
        let fermion = self.layout.species()[t].kind.is_fermion();
        if (a2.rem_euclid(2) == 1) != fermion {
            return FockVector::zero();
        }
        match self.layout.apply_mode_monomial(t, a2 + fermion as i64, w) {
            Some((c, m)) => FockVector::term(m, c),
            None => FockVector::zero(),
        }
    }
}

/// The σ-twisted module `M_σ`, truncated to levels `≤ max_level`.
pub struct SigmaModule {
    vosa: VosaStructure,
    engine: Arc<VertexEngine>,
    space: TruncatedSpace,
    ground_weight: BigRational,
}

impl SigmaModule {
    pub fn new(max_level: i64) -> Result<Self, TwistError> {
        Self::with_layout(FockLayout::ramond(), max_level)
    }

    pub fn with_layout(layout: FockLayout, max_level: i64) -> Result<Self, TwistError> {
        let vosa = VosaStructure::free_field();
        let engine = Arc::new(VertexEngine::new(
            FockLayout::vosa(),
            Twist::Parity,
            Box::new(SigmaAction { layout: layout.clone() }),
        ));
        // the ground weight is whatever L^σ(0) says it is
        let mut ground = None;
        for g in layout.ground_states() {
            let image = engine.mode_on(vosa.omega(), 2, &g);
            let lambda = image.coeff(&g);
            let rest = image.sub(&FockVector::term(g.clone(), lambda.clone()));
            let lambda = match (rest.is_zero(), lambda.as_rational()) {
                (true, Some(r)) => r.clone(),
                (true, None) if lambda.is_zero() => BigRational::zero(),
                _ => return Err(FockError::NonDiagonal(layout.format_monomial(&g)).into()),
            };
            match &ground {
                None => ground = Some(lambda),
                Some(prev) if *prev == lambda => {}
                Some(_) => return Err(FockError::NonDiagonal("ground states".into()).into()),
            }
        }
        let ground_weight = ground.expect("a ground state");
        let space = TruncatedSpace::new(layout, ground_weight.clone(), &ground_weight + rat(2 * max_level + 1, 2));
        Ok(SigmaModule {
            vosa,
            engine,
            space,
            ground_weight,
        })
    }

    pub fn vosa(&self) -> &VosaStructure {
        &self.vosa
    }

    pub fn engine(&self) -> &VertexEngine {
        &self.engine
    }

    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    pub fn layout(&self) -> &FockLayout {
        self.space.layout()
    }

    /// `L^σ(0)` eigenvalue on `w^±`, as produced by the twisted modes of `ω`.
    pub fn ground_weight(&self) -> &BigRational {
        &self.ground_weight
    }

    /// Ground `L^σ(0)` contributions of the boson and fermion halves of `ω`.
    pub fn ground_split(&self) -> (ExactScalar, ExactScalar) {
        let l = self.vosa.layout();
        let boson = FockVector::term(l.parse_monomial("a(-1)a(-1)|0>").unwrap(), ExactScalar::frac(1, 2));
        let fermion = FockVector::term(l.parse_monomial("psi(-3/2)psi(-1/2)|0>").unwrap(), ExactScalar::frac(1, 2));
        let g = &self.layout().ground_states()[0];
        (
            self.engine.mode_on(&boson, 2, g).coeff(g),
            self.engine.mode_on(&fermion, 2, g).coeff(g),
        )
    }

    pub fn sigma_twisted_mode(&self, v: &FockVector, n: FracExp) -> Result<ModeOp<'_>, FockError> {
        let a2 = n.times_int(2).ok_or_else(|| FockError::InvalidMode(n.to_string()))?;
        Ok(self.engine.mode_op(v, a2))
    }

    pub fn states_up_to_level(&self, max_level: i64) -> Vec<Monomial> {
        self.space.basis_up_to_level2(2 * max_level)
    }

    pub fn l0(&self) -> ModeOp<'_> {
        self.engine.mode_op(self.vosa.omega(), 2)
    }

    /// `L^σ(n) = ω^σ_{n+1}`, `G^σ(n) = τ^σ_{n+1/2}`.
    pub fn realization(&self) -> Realization<'_> {
        Realization {
            families: vec![
                (Family::L, Realization::engine_family(&self.engine, self.vosa.omega().clone(), 2)),
                (Family::G, Realization::engine_family(&self.engine, self.vosa.tau().clone(), 1)),
            ],
            central: ExactScalar::from_rational(self.vosa.central_charge().clone()),
        }
    }

    pub fn verify_virasoro(&self, window: i64, max_level: i64) -> RelationReport {
        let real = self.realization();
        let states = self.states_up_to_level(max_level);
        check_presentation(&AlgebraKind::Virasoro, window, &real, self.layout(), &states, "virasoro on M_sigma")
    }

    pub fn verify_ramond(&self, window: i64, max_level: i64) -> RelationReport {
        let real = self.realization();
        let states = self.states_up_to_level(max_level);
        check_presentation(&AlgebraKind::N1Ramond, window, &real, self.layout(), &states, "n1-ramond on M_sigma")
    }

    pub fn verify_jacobi(&self, window: i64, max_level: i64) -> RelationReport {
        let l = self.vosa.layout();
        let gens = [("alpha", generator_state(l, 0), 0), ("psi", generator_state(l, 1), 1)];
        let mut cases = Vec::new();
        for (un, u, al) in &gens {
            for (vn, v, _) in &gens {
                cases.push(JacobiCase {
                    u_name: un.to_string(),
                    u: u.clone(),
                    alpha2: *al,
                    v_name: vn.to_string(),
                    v: v.clone(),
                });
            }
        }
        let states = self.states_up_to_level(max_level);
        verify_jacobi(
            self.vosa.engine(),
            &self.engine,
            &cases,
            window,
            &states,
            "twisted jacobi on M_sigma",
        )
    }

    /// `dim_q M_σ = tr q^{−c/24 + L^σ(0)}`
    pub fn character(&self) -> Result<Series, FockError> {
        let shift = -(self.vosa.central_charge() / rat(24, 1));
        character(&self.space, &shift, &self.l0(), &rat(1, 1))
    }
}

/// `Y_g(v^j, x)` for a slot vector, from `Δ₂(x) v = Σ_e x^e u_e`:
/// `(v¹)^g_a = Σ_e (u_e)^σ_{2a+2e+1}` and `(v²)^g_a = (−1)^{2a} (v¹)^g_a`.
#[derive(Clone, Debug)]
pub struct SlotOperator {
    terms: Vec<(FracExp, FockVector)>,
    /// coefficients of slot 1 and slot 2
    slots: [ExactScalar; 2],
}

impl SlotOperator {
    pub fn new(vosa: &VosaStructure, v: &FockVector, slots: [ExactScalar; 2]) -> Result<Self, DeltaError> {
        let delta = apply_delta(vosa, v, 2)?;
        Ok(SlotOperator {
            terms: delta.terms.into_iter().collect(),
            slots,
        })
    }

    pub fn delta_terms(&self) -> &[(FracExp, FockVector)] {
        &self.terms
    }

    pub fn apply(&self, sigma: &VertexEngine, a2: i64, w: &Monomial) -> FockVector {
        let phase = if a2.rem_euclid(2) == 1 {
            &self.slots[0] - &self.slots[1]
        } else {
            &self.slots[0] + &self.slots[1]
        };
        if phase.is_zero() {
            return FockVector::zero();
        }
        let mut out = FockVector::zero();
        for (e, u) in &self.terms {
            let j2 = 2 * a2 + e.times_int(4).expect("Δ₂ exponents lie in ¼ℤ") + 2;
            out.axpy(&phase, &sigma.mode_on(u, j2, w));
        }
        out
    }
}

/// `single_slot_twisted_mode(v, j, n)` applied to one module state.
pub fn single_slot_twisted_mode(
    sigma: &SigmaModule,
    v: &FockVector,
    slot: usize,
    n: FracExp,
    w: &Monomial,
) -> Result<FockVector, TwistError> {
    let slots = match slot {
        1 => [ExactScalar::one(), ExactScalar::zero()],
        2 => [ExactScalar::zero(), ExactScalar::one()],
        _ => return Err(FockError::InvalidMode(format!("slot {slot}")).into()),
    };
    let a2 = n.times_int(2).ok_or_else(|| FockError::InvalidMode(n.to_string()))?;
    Ok(SlotOperator::new(sigma.vosa(), v, slots)?.apply(sigma.engine(), a2, w))
}

/// Generator action of `V ⊗ V` on `M_σ` through `Δ₂`.
pub struct KappaAction {
    sigma: Arc<VertexEngine>,
    generators: Vec<SlotOperator>,
}

impl GeneratorAction for KappaAction {
    fn module(&self) -> &FockLayout {
        self.sigma.module()
    }

    fn apply(&self, t: usize, a2: i64, w: &Monomial) -> FockVector {
        let half = self.generators.len();
        let out = self.generators[t % half].apply(&self.sigma, a2, w);
        if t >= half && a2.rem_euclid(2) == 1 {
            out.scale(&ExactScalar::from_int(-1))
        } else {
            out
        }
    }

    fn level_scale(&self) -> i64 {
        2
    }
}

/// The κ̃-twisted `V ⊗ V`-module structure on the space of `M_σ`.
pub struct MirrorTwistedModule {
    sigma: SigmaModule,
    tensor: TensorVosa,
    calibration: N2Calibration,
    engine: VertexEngine,
    omega_route: SlotOperator,
    tau_route: SlotOperator,
    l0_spectrum: Vec<(Monomial, BigRational)>,
}

pub fn build_mirror_twisted_module(
    sigma: SigmaModule,
    tensor: TensorVosa,
    calibration: N2Calibration,
) -> Result<MirrorTwistedModule, TwistError> {
    let vosa = sigma.vosa();
    let one = ExactScalar::one();
    let generators = (0..2)
        .map(|t| SlotOperator::new(vosa, &generator_state(vosa.layout(), t), [one.clone(), ExactScalar::zero()]))
        .collect::<Result<Vec<_>, _>>()?;
    let action = KappaAction {
        sigma: sigma.engine.clone(),
        generators,
    };
    let engine = VertexEngine::new(tensor.layout().clone(), Twist::Transposition, Box::new(action));
    let both = [one.clone(), one];
    let omega_route = SlotOperator::new(vosa, vosa.omega(), both.clone())?;
    let tau_route = SlotOperator::new(vosa, vosa.tau(), both)?;
    let mut module = MirrorTwistedModule {
        sigma,
        tensor,
        calibration,
        engine,
        omega_route,
        tau_route,
        l0_spectrum: Vec::new(),
    };
    let mut spectrum = Vec::new();
    for m in module.space().basis() {
        let image = module.omega_route.apply(&module.sigma.engine, 2, m);
        let lambda = image.coeff(m);
        if !image.sub(&FockVector::term(m.clone(), lambda.clone())).is_zero() {
            return Err(FockError::NonDiagonal(module.layout().format_monomial(m)).into());
        }
        let lambda = lambda
            .as_rational()
            .cloned()
            .unwrap_or_else(|| if lambda.is_zero() { BigRational::zero() } else { unreachable!("L(0) eigenvalues are rational") });
        spectrum.push((m.clone(), lambda));
    }
    module.l0_spectrum = spectrum;
    Ok(module)
}

/// Characters compared by the graded-dimension identity.
#[derive(Clone, Debug)]
pub struct CharacterIdentityReport {
    pub sigma_series: Series,
    pub kappa_series: Series,
    pub kappa_dilated: Series,
    pub ground_kappa: BigRational,
    pub passed: bool,
}

impl CharacterIdentityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim_q_sigma": self.sigma_series.to_json(),
            "dim_q_kappa": self.kappa_series.to_json(),
            "dim_q2_kappa": self.kappa_dilated.to_json(),
            "ground_L0_kappa": self.ground_kappa.to_string(),
            "leading_exponent_kappa": self.kappa_series.valuation().to_string(),
            "passed": self.passed,
        })
    }
}

impl MirrorTwistedModule {
    pub fn sigma(&self) -> &SigmaModule {
        &self.sigma
    }

    pub fn tensor(&self) -> &TensorVosa {
        &self.tensor
    }

    pub fn calibration(&self) -> &N2Calibration {
        &self.calibration
    }

    pub fn engine(&self) -> &VertexEngine {
        &self.engine
    }

    /// The underlying space: literally the one of `M_σ`.
    pub fn space(&self) -> &TruncatedSpace {
        self.sigma.space()
    }

    pub fn layout(&self) -> &FockLayout {
        self.sigma.layout()
    }

    pub fn l0_spectrum(&self) -> &[(Monomial, BigRational)] {
        &self.l0_spectrum
    }

    pub fn ground_l0(&self) -> BigRational {
        self.l0_spectrum
            .iter()
            .map(|(_, l)| l.clone())
            .min()
            .unwrap_or_else(BigRational::zero)
    }

    /// States whose `L^κ̃(0)` weight is at most `max_weight2/2` above the ground.
    pub fn states_up_to_weight2(&self, max_weight2: i64) -> Vec<Monomial> {
        // L^κ̃(0) = ½ L^σ(0) + const, so a κ̃-weight step of ½ is one σ-level
        self.space().basis_up_to_level2(2 * max_weight2)
    }

    fn slot_family<'a>(&'a self, op: &'a SlotOperator, shift2: i64, scale: ExactScalar) -> ModeFamily<'a> {
        Box::new(move |i2, w| op.apply(&self.sigma.engine, i2 + shift2, w).scale(&scale))
    }

    /// `L_n = ω^g_{n+1}`, `G1_r = τ⁽¹⁾^g_{r+1/2}`, `G2_n = τ⁽²⁾^g_{n+1/2}`,
    /// `J_r = J^g_r` with `C ↦ 3`. `L` and `G1` come from the Δ₂ route,
    /// `G2` and `J` from the twisted iterate.
    pub fn realization(&self) -> Realization<'_> {
        let cal = &self.calibration;
        Realization {
            families: vec![
                (Family::L, self.slot_family(&self.omega_route, 2, ExactScalar::one())),
                (Family::G1, self.slot_family(&self.tau_route, 1, cal.c1.clone())),
                (Family::G2, Realization::engine_family(&self.engine, cal.tau2.clone(), 1)),
                (Family::J, Realization::engine_family(&self.engine, cal.j.clone(), 0)),
            ],
            central: ExactScalar::from_rational(self.tensor.central_charge()),
        }
    }

    fn sub_realization(&self, g: Family) -> Realization<'_> {
        let mut real = self.realization();
        real.families.retain(|(f, _)| *f == Family::L || *f == g);
        for (f, _) in real.families.iter_mut() {
            if *f == g {
                *f = Family::G;
            }
        }
        real
    }

    /// The full mirror-twisted table plus the `G1` (N=1 NS) and `G2`
    /// (N=1 Ramond) sub-tables.
    pub fn verify_relations(&self, window: i64, max_weight2: i64) -> RelationReport {
        let states = self.states_up_to_weight2(max_weight2);
        let layout = self.layout();
        let mut report = check_presentation(
            &AlgebraKind::N2MirrorTwisted,
            window,
            &self.realization(),
            layout,
            &states,
            "n2-mirror-twisted",
        );
        report.merge(check_presentation(
            &AlgebraKind::N1Ns,
            window,
            &self.sub_realization(Family::G1),
            layout,
            &states,
            "G1 n1-ns",
        ));
        report.merge(check_presentation(
            &AlgebraKind::N1Ramond,
            window,
            &self.sub_realization(Family::G2),
            layout,
            &states,
            "G2 n1-ramond",
        ));
        report.label = "mirror-twisted relations".into();
        report
    }

    /// Twisted Jacobi identity for every κ̃-eigencomponent of a generator
    /// against every generator.
    pub fn verify_jacobi(&self, window: i64, max_weight2: i64) -> RelationReport {
        let gens = self.tensor.generators();
        let half = ExactScalar::frac(1, 2);
        let mut cases = Vec::new();
        for k in 0..2 {
            let (n1, g1) = &gens[k];
            let (n2, g2) = &gens[k + 2];
            let plus = g1.add(g2).scale(&half);
            let minus = g1.sub(g2).scale(&half);
            for (name, u, alpha2) in [(format!("({n1}+{n2})/2"), plus, 0), (format!("({n1}-{n2})/2"), minus, 1)] {
                for (vn, v) in &gens {
                    cases.push(JacobiCase {
                        u_name: name.clone(),
                        u: u.clone(),
                        alpha2,
                        v_name: vn.clone(),
                        v: v.clone(),
                    });
                }
            }
        }
        let states = self.states_up_to_weight2(max_weight2);
        verify_jacobi(
            self.tensor.engine(),
            &self.engine,
            &cases,
            window,
            &states,
            "twisted jacobi (kappa)",
        )
    }

    /// The two routes to slot-vector operators agree: the twisted iterate
    /// versus `Δ₂` on the σ-twisted module.
    pub fn verify_routes(&self, window: i64, max_weight2: i64) -> Result<RelationReport, TwistError> {
        let vosa = self.sigma.vosa();
        let one = ExactScalar::one();
        let zero = ExactScalar::zero();
        let mut checks: Vec<(String, FockVector, SlotOperator)> = vec![
            ("omega1+omega2".into(), self.tensor.omega().clone(), self.omega_route.clone()),
            ("tau1+tau2".into(), self.tensor.tau_sum(), self.tau_route.clone()),
        ];
        for (name, v) in [("omega", vosa.omega()), ("tau", vosa.tau())] {
            checks.push((
                format!("{name}^1"),
                self.tensor.slot_embed(v, 1),
                SlotOperator::new(vosa, v, [one.clone(), zero.clone()])?,
            ));
            checks.push((
                format!("{name}^2"),
                self.tensor.slot_embed(v, 2),
                SlotOperator::new(vosa, v, [zero.clone(), one.clone()])?,
            ));
        }
        let states = self.states_up_to_weight2(max_weight2);
        let mut report = RelationReport::new("delta route vs twisted iterate", window);
        for (name, v, route) in &checks {
            for a2 in -2 * window..=2 * window {
                for w in &states {
                    let r = self.engine.mode_on(v, a2, w).sub(&route.apply(&self.sigma.engine, a2, w));
                    report.checked += 1;
                    if !r.is_zero() {
                        report.violations.push(RelationViolation {
                            check: "route".into(),
                            items: vec![name.clone(), rat(a2, 2).to_string()],
                            state: self.layout().format_monomial(w),
                            residual: self.layout().format_vector(&r),
                        });
                    }
                }
            }
        }
        Ok(report)
    }

    /// Equivariance `(κ̃v)^g_n = (−1)^{2n} v^g_n` and the index-lattice law
    /// for the κ̃-eigenvectors `τ⁽¹⁾` (fixed), `τ⁽²⁾` and `J` (negated).
    pub fn verify_equivariance(&self, window: i64, max_weight2: i64) -> RelationReport {
        let t = &self.tensor;
        let cal = &self.calibration;
        let mut states: Vec<(String, FockVector)> = t.generators();
        states.push(("tau(2)".into(), cal.tau2.clone()));
        states.push(("J".into(), cal.j.clone()));
        states.push(("tau(1)".into(), cal.tau1.clone()));
        let vosa = self.sigma.vosa();
        states.push(("omega^1".into(), t.slot_embed(vosa.omega(), 1)));
        let module_states = self.states_up_to_weight2(max_weight2);
        let mut report = RelationReport::new("kappa equivariance", window);
        let mut push = |check: &str, name: &str, a2: i64, w: &Monomial, r: &FockVector| {
            report.checked += 1;
            if !r.is_zero() {
                report.violations.push(RelationViolation {
                    check: check.into(),
                    items: vec![name.to_string(), rat(a2, 2).to_string()],
                    state: self.layout().format_monomial(w),
                    residual: self.layout().format_vector(r),
                });
            }
        };
        for (name, v) in &states {
            let kv = t.kappa(v);
            for a2 in -2 * window..=2 * window {
                let phase = ExactScalar::from_int(if a2.rem_euclid(2) == 1 { -1 } else { 1 });
                for w in &module_states {
                    let lhs = self.engine.mode_on(&kv, a2, w);
                    let rhs = self.engine.mode_on(v, a2, w).scale(&phase);
                    push("equivariance", name, a2, w, &lhs.sub(&rhs));
                }
            }
        }
        for (name, v, odd) in [("tau(1)", &cal.tau1, false), ("tau(2)", &cal.tau2, true), ("J", &cal.j, true)] {
            for a2 in (-2 * window..=2 * window).filter(|a2| (a2.rem_euclid(2) == 1) != odd) {
                for w in &module_states {
                    push("lattice", name, a2, w, &self.engine.mode_on(v, a2, w));
                }
            }
        }
        report
    }

    pub fn l0(&self) -> impl LinearOp + '_ {
        move |m: &Monomial| self.omega_route.apply(&self.sigma.engine, 2, m)
    }

    /// `dim_q M_κ̃ = tr q^{−2c/24 + L^κ̃(0)}`
    pub fn character(&self) -> Result<Series, FockError> {
        let shift = -(self.tensor.central_charge() / rat(24, 1));
        character(self.space(), &shift, &self.l0(), &rat(1, 2))
    }
}

/// Compare `dim_q M_σ` with `dim_{q²} M_κ̃` coefficient by coefficient.
pub fn character_identity_check(module: &MirrorTwistedModule) -> Result<CharacterIdentityReport, FockError> {
    let sigma_series = module.sigma().character()?;
    let kappa_series = module.character()?;
    let kappa_dilated = kappa_series.dilate(2);
    let passed = sigma_series == kappa_dilated;
    Ok(CharacterIdentityReport {
        sigma_series,
        kappa_series,
        kappa_dilated,
        ground_kappa: module.ground_l0(),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(levels: i64) -> MirrorTwistedModule {
        let sigma = SigmaModule::new(levels).unwrap();
        let tensor = TensorVosa::new();
        let cal = tensor.calibrate_n2(1, 2).unwrap();
        build_mirror_twisted_module(sigma, tensor, cal).unwrap()
    }

    #[test]
    fn ramond_ground_weight_emerges() {
        let s = SigmaModule::new(2).unwrap();
        assert_eq!(*s.ground_weight(), rat(1, 16));
        let (b, f) = s.ground_split();
        assert_eq!(b, ExactScalar::zero());
        assert_eq!(f, ExactScalar::frac(1, 16));
    }

    #[test]
    fn sigma_sector_relations() {
        let s = SigmaModule::new(2).unwrap();
        let r = s.verify_virasoro(2, 2);
        assert!(r.passed(), "{:?}", r.violations.first());
        let r = s.verify_ramond(2, 2);
        assert!(r.passed(), "{:?}", r.violations.first());
        let r = s.verify_jacobi(1, 2);
        assert!(r.passed(), "{:?}", r.violations.first());
    }

    #[test]
    fn g0_squared_is_l0_minus_c_over_24() {
        // [G(0), G(0)] = 2L(0) − c/12
        let s = SigmaModule::new(2).unwrap();
        let e = s.engine();
        let tau = s.vosa().tau();
        for w in s.states_up_to_level(2) {
            let g0 = e.mode_on(tau, 1, &w);
            let lhs = e.mode(tau, 1, &g0).scale(&ExactScalar::from_int(2));
            let l0 = e.mode_on(s.vosa().omega(), 2, &w).scale(&ExactScalar::from_int(2));
            let want = l0.sub(&FockVector::term(w.clone(), ExactScalar::frac(1, 8)));
            assert_eq!(lhs, want);
        }
    }

    #[test]
    fn slot_generator_operators() {
        let s = SigmaModule::new(2).unwrap();
        let l = s.vosa().layout();
        let psi = generator_state(l, 1);
        let r = s.layout();
        for w in s.states_up_to_level(2) {
            let wv = FockVector::basis(w.clone());
            for a2 in -4..=4 {
                // (ψ¹)^g_a = 2^{−1/2} ψ(2a + 1), (ψ²)^g_a = (−1)^{2a} (ψ¹)^g_a
                let got = single_slot_twisted_mode(&s, &psi, 1, FracExp::half(a2), &w).unwrap();
                let want = r.apply_mode(1, 2 * a2 + 2, &wv).scale(&ExactScalar::pow2_half(-1));
                assert_eq!(got, want);
                let got2 = single_slot_twisted_mode(&s, &psi, 2, FracExp::half(a2), &w).unwrap();
                let sgn = ExactScalar::from_int(if a2 % 2 == 0 { 1 } else { -1 });
                assert_eq!(got2, want.scale(&sgn));
            }
        }
    }

    #[test]
    fn kappa_ground_and_characters() {
        let m = module(3);
        assert_eq!(m.ground_l0(), rat(1, 8));
        let c = character_identity_check(&m).unwrap();
        assert!(c.passed);
        let coeffs: Vec<String> = c.sigma_series.terms().values().map(|v| v.to_string()).collect();
        assert_eq!(coeffs, vec!["2", "4", "8", "16"]);
        assert_eq!(c.kappa_series.valuation(), FracExp::int(0));
        assert_eq!(m.space().basis(), m.sigma().space().basis());
    }

    #[test]
    fn routes_and_equivariance() {
        let m = module(2);
        let r = m.verify_routes(1, 1).unwrap();
        assert!(r.passed(), "{:?}", r.violations.first());
        let r = m.verify_equivariance(1, 1);
        assert!(r.passed(), "{:?}", r.violations.first());
    }

    #[test]
    fn mirror_relations_small() {
        let m = module(2);
        let r = m.verify_relations(1, 1);
        assert!(r.passed(), "{:?}", r.violations.first());
        let r = m.verify_jacobi(1, 1);
        assert!(r.passed(), "{:?}", r.violations.first());
    }
}
