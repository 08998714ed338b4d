//! Quantum labstates: superpositions of detector configurations with exact
//! amplitudes, stage-map evolution and projective measurement.
//!
//! A configuration is a [`RegisterState`]. Labstates are written as sums of
//! `amp * monomial` terms, where a monomial is a product of generators
//! applied to the contextual vacuum `|0)`: `A<k>` creates a signal at site
//! `k`, `D<k>` decommissions it and `Z<k>` removes it altogether.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::amp::{Amp, RealQ2};
use crate::bits::{BitOp, PBitState};
use crate::rat::Rat;
use crate::register::{RegisterState, Site};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `A<k>`: signal creation.
    Create(u32),
    /// `D<k>`: decommissioning.
    Decommission(u32),
    /// `Z<k>`: the annihilator, leaves the site empty.
    Remove(u32),
}

impl Generator {
    pub fn site(self) -> u32 {
        match self {
            Generator::Create(k) | Generator::Decommission(k) | Generator::Remove(k) => k,
        }
    }

    pub fn op(self) -> BitOp {
        match self {
            Generator::Create(_) => BitOp::A_BAR,
            Generator::Decommission(_) => BitOp::D,
            Generator::Remove(_) => BitOp::Z,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Create(k) => write!(f, "A{k}"),
            Generator::Decommission(k) => write!(f, "D{k}"),
            Generator::Remove(k) => write!(f, "Z{k}"),
        }
    }
}

/// Operator product of generators; the rightmost acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<Generator>);

impl Monomial {
    pub fn vac() -> Self {
        Monomial(Vec::new())
    }

    pub fn create(sites: &[u32]) -> Self {
        Monomial(sites.iter().map(|&k| Generator::Create(k)).collect())
    }

    pub fn is_vac(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sites(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|g| g.site())
    }

    pub fn apply(&self, base: &RegisterState) -> RegisterState {
        self.0
            .iter()
            .rev()
            .fold(base.clone(), |st, g| st.apply_site_op(g.op(), g.site()))
    }

    /// Creation sites if the monomial is made only of `A<k>`s.
    pub fn creation_sites(&self) -> Option<BTreeSet<u32>> {
        self.0
            .iter()
            .map(|g| match g {
                Generator::Create(k) => Some(*k),
                _ => None,
            })
            .collect()
    }

    /// Canonical monomial describing `config` relative to the ground state of
    /// `sites`: signals, then faulty sites, then removed sites.
    pub fn describing(config: &RegisterState, sites: &BTreeSet<u32>) -> Self {
        let all: BTreeSet<u32> = sites
            .iter()
            .copied()
            .chain(config.iter().map(|(s, _)| s.id))
            .collect();
        let mut gens = Vec::new();
        for pass in [PBitState::Signal, PBitState::Faulty, PBitState::Empty] {
            for &k in &all {
                if config.get(k) == pass {
                    gens.push(match pass {
                        PBitState::Signal => Generator::Create(k),
                        PBitState::Faulty => Generator::Decommission(k),
                        _ => Generator::Remove(k),
                    });
                }
            }
        }
        Monomial(gens)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "VAC");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

fn signal_set(config: &RegisterState) -> BTreeSet<u32> {
    config.sites_in(PBitState::Signal).map(|s| s.id).collect()
}

fn fmt_sites(sites: &BTreeSet<u32>) -> String {
    if sites.is_empty() {
        return "VAC".into();
    }
    sites
        .iter()
        .map(|k| format!("A{k}"))
        .collect::<Vec<_>>()
        .join("*")
}

/// Finite superposition of configurations over a declared site set.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Labstate {
    sites: BTreeSet<u32>,
    terms: BTreeMap<RegisterState, Amp>,
}

impl Labstate {
    /// The zero vector over `sites`.
    pub fn zero<I: IntoIterator<Item = u32>>(sites: I) -> Self {
        Labstate {
            sites: sites.into_iter().collect(),
            terms: BTreeMap::new(),
        }
    }

    /// Contextual vacuum `|0)` over `sites`, amplitude 1.
    pub fn vacuum<I: IntoIterator<Item = u32>>(sites: I) -> Self {
        let mut st = Labstate::zero(sites);
        let ground = st.ground();
        st.terms.insert(ground, Amp::one());
        st
    }

    /// `Σ amp · monomial |0)` over `sites`.
    pub fn from_terms<I: IntoIterator<Item = u32>>(sites: I, terms: &[(Amp, Monomial)]) -> Self {
        let mut st = Labstate::zero(sites);
        for (_, m) in terms {
            st.sites.extend(m.sites());
        }
        let ground = st.ground();
        for (a, m) in terms {
            st.add_term(m.apply(&ground), a.clone());
        }
        st
    }

    pub fn ground(&self) -> RegisterState {
        RegisterState::void().construct(self.sites.iter().map(|&k| Site::new(k)))
    }

    pub fn sites(&self) -> &BTreeSet<u32> {
        &self.sites
    }

    pub fn declare(&mut self, site: u32) {
        self.sites.insert(site);
    }

    pub fn add_term(&mut self, config: RegisterState, amp: Amp) {
        if amp.is_zero() {
            return;
        }
        for (s, _) in config.iter() {
            self.sites.insert(s.id);
        }
        let slot = self.terms.entry(config).or_default();
        *slot = &*slot + &amp;
        if slot.is_zero() {
            self.terms.retain(|_, a| !a.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RegisterState, &Amp)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, config: &RegisterState) -> Amp {
        self.terms.get(config).cloned().unwrap_or_default()
    }

    /// Amplitude of `monomial |0)`.
    pub fn coefficient(&self, monomial: &Monomial) -> Amp {
        self.amplitude(&monomial.apply(&self.ground()))
    }

    /// Bit operator at one site, extended linearly.
    pub fn apply_op(&self, op: BitOp, site: u32) -> Labstate {
        let mut out = Labstate::zero(self.sites.iter().copied());
        for (c, a) in &self.terms {
            out.add_term(c.apply_site_op(op, site), a.clone());
        }
        out
    }

    pub fn apply_creation(&self, site: u32) -> Labstate {
        self.apply_op(BitOp::A_BAR, site)
    }

    pub fn apply_annihilation(&self, site: u32) -> Labstate {
        self.apply_op(BitOp::A, site)
    }

    pub fn apply_decommission(&self, site: u32) -> Labstate {
        self.apply_op(BitOp::D, site)
    }

    pub fn scale(&self, k: &Amp) -> Labstate {
        let mut out = Labstate::zero(self.sites.iter().copied());
        for (c, a) in &self.terms {
            out.add_term(c.clone(), a * k);
        }
        out
    }

    pub fn plus(&self, other: &Labstate) -> Labstate {
        let mut out = self.clone();
        out.sites.extend(other.sites.iter().copied());
        for (c, a) in &other.terms {
            out.add_term(c.clone(), a.clone());
        }
        out
    }

    /// `(self|other)`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Labstate) -> Amp {
        self.terms
            .iter()
            .filter_map(|(c, a)| other.terms.get(c).map(|b| a.conj() * b))
            .sum()
    }

    pub fn norm_sqr(&self) -> RealQ2 {
        self.terms.values().map(Amp::sqmod).sum()
    }

    pub fn is_normalized(&self) -> bool {
        let n = self.norm_sqr();
        n.cr.is_zero() && n.c1.is_one()
    }

    /// `Some(phase)` if `other = phase · self` for a unit-modulus `phase`.
    pub fn phase_relative_to(&self, other: &Labstate) -> Option<Amp> {
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (c, a) = self.terms.iter().next()?;
        let phase = other.terms.get(c)?.checked_div(a)?;
        if !phase.is_unit() {
            return None;
        }
        let matches = self
            .terms
            .iter()
            .all(|(c, a)| other.terms.get(c).is_some_and(|b| *b == a * &phase));
        matches.then_some(phase)
    }

    pub fn eq_up_to_phase(&self, other: &Labstate) -> bool {
        self.phase_relative_to(other).is_some()
    }

    /// `(amp, monomial)` pairs in configuration order.
    pub fn to_terms(&self) -> Vec<(Amp, Monomial)> {
        self.terms
            .iter()
            .map(|(c, a)| (a.clone(), Monomial::describing(c, &self.sites)))
            .collect()
    }

    pub fn render_float(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.to_terms()
            .iter()
            .map(|(a, m)| {
                let (re, im) = a.to_f64_parts();
                format!(
                    "({}{}{}i)*{m}",
                    fmt_sig(re),
                    if im < 0.0 { "-" } else { "+" },
                    fmt_sig(im.abs())
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Labstate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .to_terms()
            .iter()
            .map(|(a, m)| format!("{a}*{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Labstate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Decimal with 12 significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub fn inner(a: &Labstate, b: &Labstate) -> Amp {
    a.inner(b)
}

/// One evolution step given by rewrite rules on creation monomials.
///
/// A configuration's signal sites are covered first by joint (multi-site)
/// rules, largest first, then by single-site rules or pass-through sites.
/// Faulty debris and ground sites carry over untouched.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StageMap {
    rules: BTreeMap<BTreeSet<u32>, Vec<(Amp, Monomial)>>,
    pass_through: BTreeSet<u32>,
}

impl StageMap {
    pub fn new() -> Self {
        StageMap::default()
    }

    /// Replaces any existing rule for the same monomial; returns the old image.
    pub fn insert_rule(
        &mut self,
        source: BTreeSet<u32>,
        image: Vec<(Amp, Monomial)>,
    ) -> Option<Vec<(Amp, Monomial)>> {
        self.rules.insert(source, image)
    }

    pub fn rule(mut self, source: &[u32], image: Vec<(Amp, Monomial)>) -> Self {
        self.insert_rule(source.iter().copied().collect(), image);
        self
    }

    pub fn pass(mut self, site: u32) -> Self {
        self.pass_through.insert(site);
        self
    }

    pub fn rules(&self) -> impl Iterator<Item = (&BTreeSet<u32>, &Vec<(Amp, Monomial)>)> {
        self.rules.iter()
    }

    pub fn remove_rule(&mut self, source: &BTreeSet<u32>) {
        self.rules.remove(source);
    }

    pub fn rules_mut(
        &mut self,
    ) -> impl Iterator<Item = (&BTreeSet<u32>, &mut Vec<(Amp, Monomial)>)> {
        self.rules.iter_mut()
    }

    pub fn pass_through(&self) -> &BTreeSet<u32> {
        &self.pass_through
    }

    /// Every site named in a rule key or image.
    pub fn sites(&self) -> BTreeSet<u32> {
        self.rules
            .iter()
            .flat_map(|(k, img)| {
                k.iter()
                    .copied()
                    .chain(img.iter().flat_map(|(_, m)| m.sites().collect::<Vec<_>>()))
            })
            .chain(self.pass_through.iter().copied())
            .collect()
    }

    fn cover(&self, signals: &BTreeSet<u32>) -> Result<Vec<&Vec<(Amp, Monomial)>>, Error> {
        let mut remaining = signals.clone();
        let mut images = Vec::new();
        let mut joints: Vec<_> = self.rules.iter().filter(|(k, _)| k.len() >= 2).collect();
        joints.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        for (key, img) in joints {
            if key.is_subset(&remaining) {
                remaining.retain(|k| !key.contains(k));
                images.push(img);
            }
        }
        for k in remaining {
            match self.rules.get(&BTreeSet::from([k])) {
                Some(img) => images.push(img),
                None if self.pass_through.contains(&k) => {}
                None => {
                    return Err(Error::UnmatchedMonomial {
                        monomial: fmt_sites(signals),
                    });
                }
            }
        }
        Ok(images)
    }

    pub fn apply(&self, state: &Labstate) -> Result<Labstate, Error> {
        let mut out = Labstate::zero(state.sites.iter().copied().chain(self.sites()));
        for (config, amp) in &state.terms {
            let signals = signal_set(config);
            let images = self.cover(&signals)?;
            let mut background = config.clone();
            for &k in signals.iter().filter(|k| !self.pass_through.contains(k)) {
                background.set(k, PBitState::Ground);
            }
            let mut partial = vec![(amp.clone(), background)];
            for img in images {
                partial = partial
                    .iter()
                    .flat_map(|(a, cfg)| img.iter().map(move |(b, m)| (a * b, m.apply(cfg))))
                    .collect();
            }
            for (a, cfg) in partial {
                out.add_term(cfg, a);
            }
        }
        Ok(out)
    }

    /// Rule images as labstates on the vacuum of all sites the map touches.
    pub fn images(&self) -> Vec<(BTreeSet<u32>, Labstate)> {
        let sites = self.sites();
        self.rules
            .iter()
            .map(|(k, img)| (k.clone(), Labstate::from_terms(sites.iter().copied(), img)))
            .collect()
    }

    /// `(image(m)|image(m')) = δ_mm'` over all rule pairs.
    pub fn check_isometry(&self) -> bool {
        self.isometry_defect().is_none()
    }

    /// First rule pair violating orthonormality, for error reports.
    pub fn isometry_defect(&self) -> Option<String> {
        let images = self.images();
        for (i, (ki, a)) in images.iter().enumerate() {
            for (kj, b) in &images[i..] {
                let ip = a.inner(b);
                let want = if ki == kj { Amp::one() } else { Amp::zero() };
                if ip != want {
                    return Some(format!("({}|{}) = {ip}", fmt_sites(ki), fmt_sites(kj)));
                }
            }
        }
        None
    }
}

pub fn stage_apply(map: &StageMap, state: &Labstate) -> Result<Labstate, Error> {
    map.apply(state)
}

pub fn check_isometry(map: &StageMap) -> bool {
    map.check_isometry()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    Signal(u32),
    Faulty(u32),
    Ground(u32),
    /// No signal at any site not named by a `Signal` condition.
    NoOtherSignal,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Signal(k) => write!(f, "signal@{k}"),
            Condition::Faulty(k) => write!(f, "faulty@{k}"),
            Condition::Ground(k) => write!(f, "ground@{k}"),
            Condition::NoOtherSignal => write!(f, "noothersignal"),
        }
    }
}

/// Projector onto the configurations satisfying every condition.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Projector {
    conditions: Vec<Condition>,
}

impl Projector {
    pub fn new(conditions: Vec<Condition>) -> Self {
        Projector { conditions }
    }

    /// Signal at every listed site.
    pub fn signals(sites: &[u32]) -> Self {
        Projector::new(sites.iter().map(|&k| Condition::Signal(k)).collect())
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn matches(&self, config: &RegisterState) -> bool {
        let named: BTreeSet<u32> = self
            .conditions
            .iter()
            .filter_map(|c| match c {
                Condition::Signal(k) => Some(*k),
                _ => None,
            })
            .collect();
        self.conditions.iter().all(|c| match *c {
            Condition::Signal(k) => config.get(k) == PBitState::Signal,
            Condition::Faulty(k) => config.get(k) == PBitState::Faulty,
            Condition::Ground(k) => config.get(k) == PBitState::Ground,
            Condition::NoOtherSignal => signal_set(config).is_subset(&named),
        })
    }

    /// Product `self · other`.
    pub fn then(&self, other: &Projector) -> Projector {
        let mut conditions = self.conditions.clone();
        conditions.extend(other.conditions.iter().copied());
        Projector { conditions }
    }

    /// `P|ψ)`.
    pub fn project(&self, state: &Labstate) -> Labstate {
        let mut out = Labstate::zero(state.sites.iter().copied());
        for (c, a) in state.terms.iter().filter(|(c, _)| self.matches(c)) {
            out.add_term(c.clone(), a.clone());
        }
        out
    }

    pub fn weight(&self, state: &Labstate) -> RealQ2 {
        state
            .terms
            .iter()
            .filter(|(c, _)| self.matches(c))
            .map(|(_, a)| a.sqmod())
            .sum()
    }
}

impl fmt::Display for Projector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.conditions.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Born probability `(ψ|P|ψ)`, required to be rational.
pub fn probability(state: &Labstate, p: &Projector) -> Result<Rat, Error> {
    p.weight(state).as_rat()
}

/// Classical mixture of pure labstates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityState {
    branches: Vec<(Rat, Labstate)>,
}

impl DensityState {
    pub fn new(branches: Vec<(Rat, Labstate)>) -> Result<Self, Error> {
        if branches.iter().any(|(w, _)| w.is_negative()) {
            return Err(Error::InvalidMixture("negative weight".into()));
        }
        let total: Rat = branches.iter().map(|(w, _)| w).sum();
        if !total.is_one() {
            return Err(Error::InvalidMixture(format!("weights sum to {total}")));
        }
        Ok(DensityState { branches })
    }

    pub fn branches(&self) -> &[(Rat, Labstate)] {
        &self.branches
    }

    /// Branch-wise evolution.
    pub fn evolve(&self, map: &StageMap) -> Result<DensityState, Error> {
        let branches = self
            .branches
            .iter()
            .map(|(w, s)| Ok((w.clone(), map.apply(s)?)))
            .collect::<Result<_, Error>>()?;
        Ok(DensityState { branches })
    }

    /// `Tr{ρ P} = Σ_b w_b (ψ_b|P|ψ_b)`.
    pub fn probability(&self, p: &Projector) -> Result<Rat, Error> {
        self.branches
            .iter()
            .filter(|(w, _)| !w.is_zero())
            .map(|(w, s)| probability(s, p).map(|x| w * &x))
            .sum()
    }
}

pub fn density_probability(rho: &DensityState, p: &Projector) -> Result<Rat, Error> {
    rho.probability(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2(s: &str) -> Amp {
        s.parse().unwrap()
    }

    fn vac7() -> Labstate {
        Labstate::vacuum(1..=7)
    }

    #[test]
    fn creation_on_vacuum() {
        let s = vac7().apply_creation(6);
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&Monomial::create(&[6])), Amp::one());
        assert_eq!(s.to_string(), "(1)*A6");
    }

    #[test]
    fn decommission_idempotent() {
        let once = vac7().apply_decommission(2);
        assert_eq!(once.apply_decommission(2), once);
        assert_eq!(once.to_string(), "(1)*D2");
    }

    #[test]
    fn double_creation_leaves_register() {
        let s = vac7().apply_creation(3).apply_creation(3);
        let (cfg, _) = s.terms().next().unwrap();
        assert_eq!(cfg.get(3u32), PBitState::Empty);
        assert_eq!(s.inner(&vac7().apply_creation(3)), Amp::zero());
        assert_eq!(s.to_string(), "(1)*Z3");
    }

    #[test]
    fn inner_products() {
        assert_eq!(vac7().inner(&vac7()), Amp::one());
        assert_eq!(
            vac7().apply_creation(1).inner(&vac7().apply_creation(2)),
            Amp::zero()
        );
        let s = Labstate::from_terms(
            1..=3,
            &[
                (r2("(i/r2)"), Monomial::create(&[2])),
                (r2("(-1/r2)"), Monomial::create(&[3])),
            ],
        );
        assert_eq!(s.inner(&s), Amp::one());
        // conjugate-linear in the first slot
        let t = s.scale(&Amp::i());
        assert_eq!(t.inner(&s), -Amp::i());
    }

    #[test]
    fn beamsplitter_rule_is_isometric() {
        let bs = StageMap::new().rule(
            &[1],
            vec![
                (r2("(i/r2)"), Monomial::create(&[2])),
                (r2("(-1/r2)"), Monomial::create(&[3])),
            ],
        );
        assert!(check_isometry(&bs));
        let collide = StageMap::new()
            .rule(&[1], vec![(Amp::one(), Monomial::create(&[2]))])
            .rule(&[2], vec![(Amp::one(), Monomial::create(&[2]))]);
        assert!(!check_isometry(&collide));
    }

    #[test]
    fn unmatched_monomial_is_an_error() {
        let map = StageMap::new().rule(&[1], vec![(Amp::one(), Monomial::create(&[2]))]);
        let s = vac7().apply_creation(3);
        assert!(matches!(
            map.apply(&s),
            Err(Error::UnmatchedMonomial { .. })
        ));
        // the vacuum needs no rule
        assert_eq!(map.apply(&vac7()).unwrap(), vac7());
        // pass-through keeps the signal
        let map = map.pass(3);
        assert_eq!(map.apply(&s).unwrap(), s);
    }

    #[test]
    fn joint_rule_wins() {
        let map = StageMap::new()
            .rule(&[3], vec![(Amp::one(), Monomial::create(&[6]))])
            .rule(&[4], vec![(Amp::one(), Monomial::create(&[7]))])
            .rule(
                &[3, 4],
                vec![(
                    Amp::one(),
                    Monomial(vec![Generator::Decommission(3), Generator::Decommission(4)]),
                )],
            );
        let s = vac7().apply_creation(3).apply_creation(4);
        let out = map.apply(&s).unwrap();
        assert_eq!(out.to_string(), "(1)*D3*D4");
        let single = map.apply(&vac7().apply_creation(3)).unwrap();
        assert_eq!(single.to_string(), "(1)*A6");
    }

    #[test]
    fn debris_persists() {
        let map = StageMap::new().rule(&[1], vec![(Amp::one(), Monomial::create(&[5]))]);
        let s = vac7().apply_decommission(2).apply_creation(1);
        assert_eq!(map.apply(&s).unwrap().to_string(), "(1)*A5*D2");
    }

    #[test]
    fn projector_probabilities() {
        let s = Labstate::from_terms(
            1..=3,
            &[
                (r2("(i/r2)"), Monomial::create(&[2])),
                (r2("(-1/r2)"), Monomial::create(&[3])),
            ],
        );
        let p2 = Projector::signals(&[2]);
        assert_eq!(probability(&s, &p2).unwrap(), Rat::new(1, 2));
        assert_eq!(probability(&s, &p2.then(&p2)).unwrap(), Rat::new(1, 2));
        assert_eq!(
            probability(&vac7(), &Projector::signals(&[4])).unwrap(),
            Rat::zero()
        );
        let only2 = Projector::new(vec![Condition::Signal(2), Condition::NoOtherSignal]);
        assert!(only2.matches(&vac7().apply_creation(2).terms().next().unwrap().0.clone()));
        assert!(!only2.matches(
            &vac7()
                .apply_creation(2)
                .apply_creation(3)
                .terms()
                .next()
                .unwrap()
                .0
                .clone()
        ));
    }

    #[test]
    fn irrational_probability_reported() {
        let s = Labstate::from_terms(1..=2, &[(r2("(1/2+r2/2)"), Monomial::create(&[1]))]);
        assert!(matches!(
            probability(&s, &Projector::signals(&[1])),
            Err(Error::IrrationalProbability(_))
        ));
    }

    #[test]
    fn phase_comparison() {
        let s = vac7().apply_creation(6);
        assert!(s.eq_up_to_phase(&s.scale(&Amp::i())));
        assert_eq!(
            s.phase_relative_to(&s.scale(&-Amp::one())),
            Some(-Amp::one())
        );
        assert!(!s.eq_up_to_phase(&s.scale(&Amp::sqrt2())));
        assert!(!s.eq_up_to_phase(&vac7().apply_creation(7)));
    }

    #[test]
    fn density_validation() {
        assert!(DensityState::new(vec![(Rat::new(1, 2), vac7())]).is_err());
        let rho = DensityState::new(vec![
            (Rat::new(1, 3), vac7()),
            (Rat::new(2, 3), vac7().apply_creation(1)),
        ])
        .unwrap();
        assert_eq!(
            density_probability(&rho, &Projector::signals(&[1])).unwrap(),
            Rat::new(2, 3)
        );
    }

    #[test]
    fn float_rendering() {
        assert_eq!(fmt_sig(0.5625), "0.5625");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-0.25), "-0.25");
    }
}
